//! Ind-towers (locally finite groups) and pro-towers (profinite groups) of
//! finite abelian groups, truncated at a finite depth.
//!
//! Levels are numbered from 1. In an [`IndGroup`] transition `n` is the
//! injection `G_n → G_{n+1}`; in a [`ProGroup`] transition `n` is the
//! surjection `G_{n+1} → G_n`.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::finab::{dual_group, dual_hom, evaluation_map, Element, FinabError, FiniteAbelianGroup, Hom};
use crate::report::{anchors, CheckRecord, Report};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TowerError {
    #[error("depth must be at least 1")]
    BadDepth,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("invalid tower at level {level}: {reason}")]
    InvalidTower { level: usize, reason: String },
    #[error("level {level} out of range 1..={depth}")]
    LevelOutOfRange { level: usize, depth: usize },
    #[error(transparent)]
    Group(#[from] FinabError),
}

pub type Result<T> = std::result::Result<T, TowerError>;

fn invalid(level: usize, reason: impl Into<String>) -> TowerError {
    TowerError::InvalidTower {
        level,
        reason: reason.into(),
    }
}

/// Shape checks shared by both tower kinds. `forward` means transitions go
/// from level n to level n+1.
fn check_shape(levels: &[FiniteAbelianGroup], transitions: &[Hom], forward: bool) -> Result<()> {
    if levels.is_empty() {
        return Err(TowerError::BadDepth);
    }
    if transitions.len() + 1 != levels.len() {
        return Err(invalid(
            transitions.len() + 1,
            format!("{} levels need {} transitions", levels.len(), levels.len() - 1),
        ));
    }
    for (i, t) in transitions.iter().enumerate() {
        let (src, tgt) = if forward {
            (&levels[i], &levels[i + 1])
        } else {
            (&levels[i + 1], &levels[i])
        };
        if t.source() != src || t.target() != tgt {
            return Err(invalid(i + 1, "transition does not connect adjacent levels"));
        }
    }
    Ok(())
}

/// A locally finite abelian group as `G_1 ↪ G_2 ↪ … ↪ G_N`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct IndGroup {
    levels: Vec<FiniteAbelianGroup>,
    transitions: Vec<Hom>,
}

/// A profinite abelian group as `G_1 ↞ G_2 ↞ … ↞ G_N`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ProGroup {
    levels: Vec<FiniteAbelianGroup>,
    transitions: Vec<Hom>,
}

impl IndGroup {
    /// Validates adjacency and injectivity of every transition.
    pub fn new(levels: Vec<FiniteAbelianGroup>, transitions: Vec<Hom>) -> Result<Self> {
        check_shape(&levels, &transitions, true)?;
        if let Some(i) = transitions.iter().position(|t| !t.is_injective()) {
            return Err(invalid(i + 1, "transition is not injective"));
        }
        Ok(IndGroup { levels, transitions })
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[FiniteAbelianGroup] {
        &self.levels
    }

    pub fn transitions(&self) -> &[Hom] {
        &self.transitions
    }

    pub fn level(&self, n: usize) -> Result<&FiniteAbelianGroup> {
        level_of(&self.levels, n)
    }

    /// The transition `G_n → G_{n+1}`.
    pub fn transition(&self, n: usize) -> Result<&Hom> {
        transition_of(&self.transitions, n, self.depth())
    }

    /// Composite `G_from → G_to` for `from ≤ to`.
    pub fn inclusion(&self, from: usize, to: usize) -> Result<Hom> {
        self.level(to)?;
        if from > to {
            return Err(TowerError::BadParameter(format!("cannot include level {from} into {to}")));
        }
        let mut h = Hom::identity(self.level(from)?);
        for n in from..to {
            h = h.then(&self.transitions[n - 1])?;
        }
        Ok(h)
    }

    /// The first `depth` levels.
    pub fn truncate(&self, depth: usize) -> Result<Self> {
        if depth == 0 || depth > self.depth() {
            return Err(TowerError::LevelOutOfRange { level: depth, depth: self.depth() });
        }
        Ok(IndGroup {
            levels: self.levels[..depth].to_vec(),
            transitions: self.transitions[..depth - 1].to_vec(),
        })
    }

    pub fn element(&self, level: usize, value: Element) -> Result<IndElement> {
        if !self.level(level)?.contains(&value) {
            return Err(invalid(level, "element does not belong to the level"));
        }
        Ok(IndElement { level, value })
    }

    /// Pushes an element up to level `to ≥ x.level`.
    pub fn push(&self, x: &IndElement, to: usize) -> Result<IndElement> {
        let h = self.inclusion(x.level, to)?;
        Ok(IndElement {
            level: to,
            value: h.apply(&x.value)?,
        })
    }

    /// Equality in the limit: both sides pushed to the larger level.
    pub fn same_element(&self, a: &IndElement, b: &IndElement) -> Result<bool> {
        let top = a.level.max(b.level);
        Ok(self.push(a, top)?.value == self.push(b, top)?.value)
    }
}

impl ProGroup {
    /// Validates adjacency and surjectivity of every transition.
    pub fn new(levels: Vec<FiniteAbelianGroup>, transitions: Vec<Hom>) -> Result<Self> {
        check_shape(&levels, &transitions, false)?;
        if let Some(i) = transitions.iter().position(|t| !t.is_surjective()) {
            return Err(invalid(i + 1, "transition is not surjective"));
        }
        Ok(ProGroup { levels, transitions })
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[FiniteAbelianGroup] {
        &self.levels
    }

    pub fn transitions(&self) -> &[Hom] {
        &self.transitions
    }

    pub fn level(&self, n: usize) -> Result<&FiniteAbelianGroup> {
        level_of(&self.levels, n)
    }

    /// The transition `G_{n+1} → G_n`.
    pub fn transition(&self, n: usize) -> Result<&Hom> {
        transition_of(&self.transitions, n, self.depth())
    }

    /// Composite `G_from → G_to` for `from ≥ to`.
    pub fn projection(&self, from: usize, to: usize) -> Result<Hom> {
        self.level(from)?;
        if to > from {
            return Err(TowerError::BadParameter(format!("cannot project level {from} to {to}")));
        }
        let mut h = Hom::identity(self.level(from)?);
        for n in (to..from).rev() {
            h = h.then(&self.transitions[n - 1])?;
        }
        Ok(h)
    }

    pub fn truncate(&self, depth: usize) -> Result<Self> {
        if depth == 0 || depth > self.depth() {
            return Err(TowerError::LevelOutOfRange { level: depth, depth: self.depth() });
        }
        Ok(ProGroup {
            levels: self.levels[..depth].to_vec(),
            transitions: self.transitions[..depth - 1].to_vec(),
        })
    }

    /// Validates coherence `t_n(g_{n+1}) = g_n`.
    pub fn element(&self, components: Vec<Element>) -> Result<ProElement> {
        if components.len() != self.depth() {
            return Err(TowerError::BadParameter(format!(
                "expected {} components, found {}",
                self.depth(),
                components.len()
            )));
        }
        for (n, c) in components.iter().enumerate() {
            if !self.levels[n].contains(c) {
                return Err(invalid(n + 1, "component does not belong to the level"));
            }
        }
        for (n, t) in self.transitions.iter().enumerate() {
            if t.apply(&components[n + 1])? != components[n] {
                return Err(invalid(n + 1, "components are not coherent"));
            }
        }
        Ok(ProElement { components })
    }

    /// The coherent tuple determined by an element of the top level.
    pub fn element_from_top(&self, top: Element) -> Result<ProElement> {
        let mut components = vec![top];
        for t in self.transitions.iter().rev() {
            let next = t.apply(components.last().expect("nonempty"))?;
            components.push(next);
        }
        components.reverse();
        self.element(components)
    }
}

fn level_of(levels: &[FiniteAbelianGroup], n: usize) -> Result<&FiniteAbelianGroup> {
    if n == 0 || n > levels.len() {
        return Err(TowerError::LevelOutOfRange { level: n, depth: levels.len() });
    }
    Ok(&levels[n - 1])
}

fn transition_of(transitions: &[Hom], n: usize, depth: usize) -> Result<&Hom> {
    if n == 0 || n >= depth {
        return Err(TowerError::LevelOutOfRange { level: n, depth });
    }
    Ok(&transitions[n - 1])
}

/// An element of some level of an ind-tower.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct IndElement {
    pub level: usize,
    pub value: Element,
}

/// A coherent tuple `(g_1, …, g_N)` of a pro-tower.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ProElement {
    components: Vec<Element>,
}

impl ProElement {
    pub fn components(&self) -> &[Element] {
        &self.components
    }

    /// Component at level `n` (1-based). Panics if out of range.
    pub fn project(&self, n: usize) -> &Element {
        &self.components[n - 1]
    }
}

fn dual_levels(levels: &[FiniteAbelianGroup]) -> Vec<FiniteAbelianGroup> {
    levels.iter().map(|g| dual_group(g).into_underlying()).collect()
}

/// Dual of a locally finite group: levels `Ĝ_n`, transitions the duals of the
/// injections, which are surjective.
pub fn dual_ind(g: &IndGroup) -> ProGroup {
    ProGroup {
        levels: dual_levels(&g.levels),
        transitions: g.transitions.iter().map(dual_hom).collect(),
    }
}

/// Dual of a profinite group: levels `Ĝ_n`, transitions the duals of the
/// surjections, which are injective.
pub fn dual_pro(g: &ProGroup) -> IndGroup {
    IndGroup {
        levels: dual_levels(&g.levels),
        transitions: g.transitions.iter().map(dual_hom).collect(),
    }
}

fn matrix_witness(lhs: &Hom, rhs: &Hom) -> Option<String> {
    if lhs.matrix() == rhs.matrix() && lhs.source() == rhs.source() && lhs.target() == rhs.target() {
        None
    } else {
        Some(format!("{:?} != {:?}", lhs.matrix(), rhs.matrix()))
    }
}

/// Level-wise check of `ι: G → G^{••}`. `forward` is the direction of the
/// original transitions; `dual` and `double` are the once- and twice-dualized
/// transition lists.
fn reflexivity_records(
    levels: &[FiniteAbelianGroup],
    double_levels: &[FiniteAbelianGroup],
    transitions: &[Hom],
    dual: &[Hom],
    double: &[Hom],
    forward: bool,
) -> Vec<CheckRecord> {
    let (class_anchor, dual_property) = if forward {
        (anchors::LOCALLY_FINITE_DUAL, "surjective")
    } else {
        (anchors::PROFINITE_DUAL, "injective")
    };
    let per_level: Vec<Vec<CheckRecord>> = (0..levels.len())
        .into_par_iter()
        .map(|i| {
            let n = i + 1;
            let g = &levels[i];
            let iota = evaluation_map(g);
            let mut out = Vec::new();
            let same = double_levels[i] == *g && iota.target() == &double_levels[i];
            out.push(
                CheckRecord::from_witness(
                    "double dual level",
                    anchors::ABELIAN_REFLEXIVITY,
                    (!same).then(|| format!("{} vs {}", g, double_levels[i])),
                )
                .at_level(n),
            );
            let iso = iota.is_isomorphism();
            out.push(
                CheckRecord::from_witness(
                    "evaluation map is an isomorphism",
                    anchors::ABELIAN_REFLEXIVITY,
                    (!iso).then(|| format!("kernel order {}", iota.kernel_order())),
                )
                .at_level(n),
            );
            if i < transitions.len() {
                let d = &dual[i];
                let ok = if forward { d.is_surjective() } else { d.is_injective() };
                out.push(
                    CheckRecord::from_witness(
                        format!("dual transition is {dual_property}"),
                        class_anchor,
                        (!ok).then(|| format!("dual transition matrix {:?}", d.matrix())),
                    )
                    .at_level(n),
                );
                // ι_target ∘ t == t'' ∘ ι_source
                let t = &transitions[i];
                let (src, tgt) = if forward { (i, i + 1) } else { (i + 1, i) };
                let lhs = t.then(&evaluation_map(&levels[tgt]));
                let rhs = evaluation_map(&levels[src]).then(&double[i]);
                let witness = match (lhs, rhs) {
                    (Ok(l), Ok(r)) => matrix_witness(&l, &r),
                    (l, r) => Some(format!("not composable: {:?} / {:?}", l.err(), r.err())),
                };
                out.push(
                    CheckRecord::from_witness("naturality square", anchors::ABELIAN_REFLEXIVITY, witness)
                        .at_level(n),
                );
            }
            out
        })
        .collect();
    per_level.into_iter().flatten().collect()
}

/// Computes `dual_pro(dual_ind(G))` and checks level-wise that the evaluation
/// maps are isomorphisms commuting with the transitions.
pub fn reflexivity_check_ind(g: &IndGroup) -> Report {
    let dual = dual_ind(g);
    let double = dual_pro(&dual);
    let mut report = Report::new(format!("reflexivity of ind-tower of depth {}", g.depth()));
    report.extend(reflexivity_records(
        &g.levels,
        &double.levels,
        &g.transitions,
        &dual.transitions,
        &double.transitions,
        true,
    ));
    report
}

/// Mirror image of [`reflexivity_check_ind`] through `dual_ind(dual_pro(G))`.
pub fn reflexivity_check_pro(g: &ProGroup) -> Report {
    let dual = dual_pro(g);
    let double = dual_ind(&dual);
    let mut report = Report::new(format!("reflexivity of pro-tower of depth {}", g.depth()));
    report.extend(reflexivity_records(
        &g.levels,
        &double.levels,
        &g.transitions,
        &dual.transitions,
        &double.transitions,
        false,
    ));
    report
}

pub(crate) fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn check_depth(depth: usize) -> Result<()> {
    if depth == 0 {
        Err(TowerError::BadDepth)
    } else {
        Ok(())
    }
}

fn prime_power_levels(p: u64, depth: usize) -> Result<Vec<FiniteAbelianGroup>> {
    if !is_prime(p) {
        return Err(TowerError::NotPrime(p));
    }
    check_depth(depth)?;
    let mut levels = Vec::with_capacity(depth);
    let mut order = 1u64;
    for _ in 0..depth {
        order = order.checked_mul(p).ok_or(FinabError::OrderOverflow)?;
        levels.push(FiniteAbelianGroup::cyclic(order)?);
    }
    Ok(levels)
}

/// `Z/p ↪ Z/p² ↪ … ↪ Z/p^depth`, transitions `x ↦ p·x`.
pub fn pruefer(p: u64, depth: usize) -> Result<IndGroup> {
    let levels = prime_power_levels(p, depth)?;
    let transitions = levels
        .windows(2)
        .map(|w| Hom::new(w[0].clone(), w[1].clone(), &[vec![p as i64]]))
        .collect::<std::result::Result<_, _>>()?;
    IndGroup::new(levels, transitions)
}

/// `Z/p ↞ Z/p² ↞ … ↞ Z/p^depth`, transitions reduction.
pub fn padic(p: u64, depth: usize) -> Result<ProGroup> {
    let levels = prime_power_levels(p, depth)?;
    let transitions = levels
        .windows(2)
        .map(|w| Hom::new(w[1].clone(), w[0].clone(), &[vec![1]]))
        .collect::<std::result::Result<_, _>>()?;
    ProGroup::new(levels, transitions)
}

fn power_levels(d: u64, depth: usize) -> Result<Vec<FiniteAbelianGroup>> {
    if d < 2 {
        return Err(TowerError::BadParameter(format!("cyclic order {d} must be at least 2")));
    }
    check_depth(depth)?;
    (1..=depth)
        .map(|n| FiniteAbelianGroup::new(vec![d; n]).map_err(Into::into))
        .collect()
}

/// `⊕^n Z/d`, `n = 1..=depth`, with coordinate inclusions.
pub fn direct_sum_tower(d: u64, depth: usize) -> Result<IndGroup> {
    let levels = power_levels(d, depth)?;
    let transitions = levels
        .windows(2)
        .enumerate()
        .map(|(i, w)| {
            let n = i + 1;
            let m: Vec<Vec<i64>> = (0..=n)
                .map(|r| (0..n).map(|c| i64::from(r == c)).collect())
                .collect();
            Hom::new(w[0].clone(), w[1].clone(), &m)
        })
        .collect::<std::result::Result<_, _>>()?;
    IndGroup::new(levels, transitions)
}

/// `(Z/d)^n`, `n = 1..=depth`, with projections forgetting the last coordinate.
pub fn product_pro(d: u64, depth: usize) -> Result<ProGroup> {
    let levels = power_levels(d, depth)?;
    let transitions = levels
        .windows(2)
        .enumerate()
        .map(|(i, w)| {
            let n = i + 1;
            let m: Vec<Vec<i64>> = (0..n)
                .map(|r| (0..=n).map(|c| i64::from(r == c)).collect())
                .collect();
            Hom::new(w[1].clone(), w[0].clone(), &m)
        })
        .collect::<std::result::Result<_, _>>()?;
    ProGroup::new(levels, transitions)
}

/// `Z/1! ↪ Z/2! ↪ … ↪ Z/depth!`, transitions `x ↦ (n+1)·x`: truncations of Q/Z.
pub fn factorial_ind(depth: usize) -> Result<IndGroup> {
    check_depth(depth)?;
    let mut levels = Vec::with_capacity(depth);
    let mut fact = 1u64;
    for n in 1..=depth as u64 {
        fact = fact.checked_mul(n).ok_or(FinabError::OrderOverflow)?;
        levels.push(FiniteAbelianGroup::cyclic(fact)?);
    }
    let transitions = levels
        .windows(2)
        .enumerate()
        .map(|(i, w)| {
            let factor = i as i64 + 2;
            let m: Vec<Vec<i64>> = vec![vec![factor; w[0].rank()]];
            Hom::new(w[0].clone(), w[1].clone(), &m)
        })
        .collect::<std::result::Result<_, _>>()?;
    IndGroup::new(levels, transitions)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factors(levels: &[FiniteAbelianGroup]) -> Vec<Vec<u64>> {
        levels.iter().map(|g| g.invariant_factors().to_vec()).collect()
    }

    #[test]
    fn builders() {
        assert_eq!(factors(pruefer(2, 3).unwrap().levels()), vec![vec![2], vec![4], vec![8]]);
        let z = padic(5, 2).unwrap();
        assert_eq!(factors(z.levels()), vec![vec![5], vec![25]]);
        assert_eq!(z.transition(1).unwrap().matrix(), &[vec![1]]);
        assert_eq!(factors(factorial_ind(3).unwrap().levels()), vec![vec![], vec![2], vec![6]]);
        assert_eq!(pruefer(4, 2), Err(TowerError::NotPrime(4)));
        assert_eq!(padic(3, 0), Err(TowerError::BadDepth));
        assert!(direct_sum_tower(1, 3).is_err());
        assert_eq!(factors(product_pro(6, 2).unwrap().levels()), vec![vec![6], vec![6, 6]]);
    }

    #[test]
    fn dual_of_pruefer_is_padic_shape() {
        let d = dual_ind(&pruefer(2, 3).unwrap());
        assert_eq!(factors(d.levels()), vec![vec![2], vec![4], vec![8]]);
        for t in d.transitions() {
            assert!(t.is_surjective());
            assert_eq!(t.kernel_order(), 2);
        }
        let back = dual_pro(&padic(2, 3).unwrap());
        for t in back.transitions() {
            assert!(t.is_injective());
            assert_eq!(t.cokernel_order(), 2);
        }
    }

    #[test]
    fn corrupted_transition_is_rejected() {
        let z4 = FiniteAbelianGroup::cyclic(4).unwrap();
        let z8 = FiniteAbelianGroup::cyclic(8).unwrap();
        let bad = Hom::new(z4.clone(), z8.clone(), &[vec![4]]).unwrap();
        assert!(matches!(
            IndGroup::new(vec![z4, z8], vec![bad]),
            Err(TowerError::InvalidTower { level: 1, .. })
        ));
    }

    #[test]
    fn trivial_towers() {
        let t = FiniteAbelianGroup::trivial();
        let tower = IndGroup::new(vec![t.clone(), t.clone()], vec![Hom::identity(&t)]).unwrap();
        assert!(reflexivity_check_ind(&tower).passed());
        let single = IndGroup::new(vec![FiniteAbelianGroup::cyclic(6).unwrap()], vec![]).unwrap();
        let d = dual_ind(&single);
        assert_eq!(d.depth(), 1);
        assert_eq!(d.level(1).unwrap().invariant_factors(), &[6]);
    }

    #[test]
    fn constant_pro_tower_dualizes_to_identity() {
        let z3 = FiniteAbelianGroup::cyclic(3).unwrap();
        let tower = ProGroup::new(vec![z3.clone(), z3.clone()], vec![Hom::identity(&z3)]).unwrap();
        let d = dual_pro(&tower);
        assert_eq!(d.transitions(), &[Hom::identity(&z3)]);
    }

    #[test]
    fn reflexivity_examples() {
        assert!(reflexivity_check_ind(&pruefer(3, 4).unwrap()).passed());
        assert!(reflexivity_check_pro(&padic(2, 5).unwrap()).passed());
        assert!(reflexivity_check_pro(&product_pro(6, 3).unwrap()).passed());
        let r = reflexivity_check_pro(&padic(7, 1).unwrap());
        assert!(r.passed());
        assert_eq!(r.records.len(), 2);
    }

    #[test]
    fn element_pushing() {
        let g = pruefer(2, 4).unwrap();
        let x = g.element(1, g.level(1).unwrap().element(vec![1]).unwrap()).unwrap();
        let two = g.push(&x, 3).unwrap();
        let stepwise = g.push(&g.push(&x, 2).unwrap(), 3).unwrap();
        assert_eq!(two, stepwise);
        assert_eq!(two.value.coords(), &[4]);
        let y = g.element(3, g.level(3).unwrap().element(vec![4]).unwrap()).unwrap();
        assert!(g.same_element(&x, &y).unwrap());
    }

    #[test]
    fn pro_elements() {
        let z = padic(3, 3).unwrap();
        let top = z.level(3).unwrap().element(vec![14]).unwrap();
        let e = z.element_from_top(top).unwrap();
        assert_eq!(e.project(1).coords(), &[2]);
        assert_eq!(e.project(2).coords(), &[5]);
        let bad = vec![
            z.level(1).unwrap().element(vec![0]).unwrap(),
            z.level(2).unwrap().element(vec![5]).unwrap(),
            z.level(3).unwrap().element(vec![14]).unwrap(),
        ];
        assert!(z.element(bad).is_err());
        assert_eq!(z.projection(3, 1).unwrap().matrix(), &[vec![1]]);
    }
}
