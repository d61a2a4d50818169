//! Towers of finite groups (not necessarily abelian) and of Hopf algebras,
//! the level-wise duality between ind- and pro-Hopf towers, and the
//! reflexivity diagram `H → H' → H^• → (H^•)' → H`.
//!
//! The Arens–Michael envelope acts as the identity on every tower built here.
//! That is only justified for towers with a known origin, so each tower carries
//! an optional [`Provenance`] and the envelope refuses untagged input.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cyclo::Cyclotomic;
use crate::finab::{dual_hom, Element, FiniteAbelianGroup};
use crate::hopf::{
    check_hopf_axioms, double_dual_canonical, drop_last_factor, dual_hopf, function_algebra_hopf,
    group_algebra_hopf, is_hopf_isomorphism, is_hopf_morphism, spectrum_abelian_group_algebra,
    symmetric_inclusion, FDHopf, FiniteGroup, GroupError, GroupHom, HopfError, HopfMap,
};
use crate::linalg::Matrix;
use crate::report::{anchors, CheckRecord, DiagramEdge, DiagramNode, ReflexivityDiagram, Report};
use crate::towers::{dual_ind, IndGroup, ProGroup, TowerError};
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HopfTowerError {
    #[error("invalid tower at level {level}: {reason}")]
    InvalidTower { level: usize, reason: String },
    #[error("expected a {expected} tower, found a {found} tower")]
    WrongDirection { expected: Direction, found: Direction },
    #[error("tower has no provenance tag; cannot justify a trivial envelope")]
    UnknownProvenance,
    #[error("tower is not abelian at level {0}")]
    NonAbelian(usize),
    #[error(transparent)]
    Hopf(#[from] HopfError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Tower(#[from] TowerError),
}

pub type Result<T> = std::result::Result<T, HopfTowerError>;

fn invalid(level: usize, reason: impl Into<String>) -> HopfTowerError {
    HopfTowerError::InvalidTower {
        level,
        reason: reason.into(),
    }
}

/// `Ind`: transition `n` maps level `n` into level `n+1` injectively.
/// `Pro`: transition `n` maps level `n+1` onto level `n`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Ind,
    Pro,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::Ind => Direction::Pro,
            Direction::Pro => Direction::Ind,
        }
    }

    /// Source and target level indices (0-based) of transition `i`.
    fn ends(self, i: usize) -> (usize, usize) {
        match self {
            Direction::Ind => (i, i + 1),
            Direction::Pro => (i + 1, i),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Ind => "ind",
            Direction::Pro => "pro",
        })
    }
}

/// A truncated tower of finite groups with verified homomorphisms.
#[derive(Clone, Debug)]
pub struct TowerOfGroups {
    direction: Direction,
    levels: Vec<Arc<FiniteGroup>>,
    transitions: Vec<GroupHom>,
}

impl TowerOfGroups {
    /// Checks adjacency and injectivity (ind) or surjectivity (pro). The
    /// homomorphism property was checked when each [`GroupHom`] was built.
    pub fn new(direction: Direction, levels: Vec<Arc<FiniteGroup>>, transitions: Vec<GroupHom>) -> Result<Self> {
        if levels.is_empty() {
            return Err(invalid(0, "a tower needs at least one level"));
        }
        if transitions.len() + 1 != levels.len() {
            return Err(invalid(
                transitions.len() + 1,
                format!("{} levels need {} transitions", levels.len(), levels.len() - 1),
            ));
        }
        for (i, t) in transitions.iter().enumerate() {
            let (s, e) = direction.ends(i);
            if **t.source() != *levels[s] || **t.target() != *levels[e] {
                return Err(invalid(i + 1, "transition does not connect adjacent levels"));
            }
            match direction {
                Direction::Ind if !t.is_injective() => {
                    return Err(invalid(i + 1, "transition is not injective"))
                }
                Direction::Pro if !t.is_surjective() => {
                    return Err(invalid(i + 1, "transition is not surjective"))
                }
                _ => {}
            }
        }
        Ok(TowerOfGroups {
            direction,
            levels,
            transitions,
        })
    }

    /// `S_1 ⊂ S_2 ⊂ … ⊂ S_depth`.
    pub fn symmetric(depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(TowerError::BadDepth.into());
        }
        let levels: Vec<Arc<FiniteGroup>> = (1..=depth)
            .map(|n| FiniteGroup::symmetric(n).map(Arc::new))
            .collect::<std::result::Result<_, _>>()?;
        let transitions = (1..depth)
            .map(|n| symmetric_inclusion(Arc::clone(&levels[n - 1]), Arc::clone(&levels[n]), n))
            .collect::<std::result::Result<_, _>>()?;
        Self::new(Direction::Ind, levels, transitions)
    }

    /// `G ← G² ← … ← G^depth` forgetting the last factor.
    pub fn product_pro(g: &FiniteGroup, depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(TowerError::BadDepth.into());
        }
        let base = Arc::new(g.clone());
        let mut levels = vec![Arc::clone(&base)];
        for _ in 1..depth {
            let last = levels.last().expect("nonempty");
            levels.push(Arc::new(FiniteGroup::product(last, g)));
        }
        let transitions = (0..depth - 1)
            .map(|i| drop_last_factor(Arc::clone(&levels[i + 1]), Arc::clone(&levels[i]), g.order()))
            .collect::<std::result::Result<_, _>>()?;
        Self::new(Direction::Pro, levels, transitions)
    }

    pub fn from_ind_group(t: &IndGroup) -> Result<Self> {
        let levels: Vec<Arc<FiniteGroup>> = t.levels().iter().map(|g| Arc::new(FiniteGroup::abelian(g))).collect();
        let transitions = t
            .transitions()
            .iter()
            .enumerate()
            .map(|(i, h)| GroupHom::from_abelian(h, Arc::clone(&levels[i]), Arc::clone(&levels[i + 1])))
            .collect::<std::result::Result<_, _>>()?;
        Self::new(Direction::Ind, levels, transitions)
    }

    pub fn from_pro_group(t: &ProGroup) -> Result<Self> {
        let levels: Vec<Arc<FiniteGroup>> = t.levels().iter().map(|g| Arc::new(FiniteGroup::abelian(g))).collect();
        let transitions = t
            .transitions()
            .iter()
            .enumerate()
            .map(|(i, h)| GroupHom::from_abelian(h, Arc::clone(&levels[i + 1]), Arc::clone(&levels[i])))
            .collect::<std::result::Result<_, _>>()?;
        Self::new(Direction::Pro, levels, transitions)
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[Arc<FiniteGroup>] {
        &self.levels
    }

    pub fn transitions(&self) -> &[GroupHom] {
        &self.transitions
    }

    pub fn truncate(&self, depth: usize) -> Result<Self> {
        if depth == 0 || depth > self.depth() {
            return Err(TowerError::LevelOutOfRange {
                level: depth,
                depth: self.depth(),
            }
            .into());
        }
        Ok(TowerOfGroups {
            direction: self.direction,
            levels: self.levels[..depth].to_vec(),
            transitions: self.transitions[..depth - 1].to_vec(),
        })
    }

    fn require(&self, expected: Direction) -> Result<()> {
        if self.direction == expected {
            Ok(())
        } else {
            Err(HopfTowerError::WrongDirection {
                expected,
                found: self.direction,
            })
        }
    }
}

/// Which of the four constructions produced a Hopf tower.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// `C[G]` of a locally finite group, an ind-tower.
    GroupAlgebra,
    /// `C^G` of a locally finite group with restriction maps, a pro-tower.
    RestrictedFunctions,
    /// `O(G)` of a profinite group with inflation maps, an ind-tower.
    LocallyConstantFunctions,
    /// `O(G)'` of a profinite group with push-forward maps, a pro-tower.
    ProfiniteConvolution,
}

impl Provenance {
    /// Provenance of the dual tower.
    pub fn dual(self) -> Self {
        match self {
            Provenance::GroupAlgebra => Provenance::RestrictedFunctions,
            Provenance::RestrictedFunctions => Provenance::GroupAlgebra,
            Provenance::LocallyConstantFunctions => Provenance::ProfiniteConvolution,
            Provenance::ProfiniteConvolution => Provenance::LocallyConstantFunctions,
        }
    }

    pub fn certificate(self) -> EnvelopeCertificate {
        let (reason, anchor) = match self {
            Provenance::GroupAlgebra => (
                "locally finite: CG complete in strongest locally convex topology; every level finite-dimensional",
                anchors::ENVELOPE_LOCALLY_FINITE,
            ),
            Provenance::RestrictedFunctions => (
                "locally finite: C^G is a projective limit of finite-dimensional algebras, hence Arens-Michael",
                anchors::ENVELOPE_LOCALLY_FINITE,
            ),
            Provenance::LocallyConstantFunctions => (
                "profinite: O(G) is an Arens-Michael algebra; every level finite-dimensional",
                anchors::ENVELOPE_FUNCTIONS,
            ),
            Provenance::ProfiniteConvolution => (
                "profinite: O(G)' is a projective limit of finite-dimensional algebras, hence Arens-Michael",
                anchors::ENVELOPE_CONVOLUTION,
            ),
        };
        EnvelopeCertificate {
            provenance: self,
            reason: reason.to_string(),
            anchor: anchor.to_string(),
        }
    }

    /// The group class whose theorem a reflexivity check instantiates.
    fn theorem_anchor(self) -> &'static str {
        match self {
            Provenance::GroupAlgebra | Provenance::RestrictedFunctions => anchors::LOCALLY_FINITE_HOPF,
            Provenance::LocallyConstantFunctions | Provenance::ProfiniteConvolution => anchors::PROFINITE_HOPF,
        }
    }
}

/// Why the envelope of a tower is the tower itself.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct EnvelopeCertificate {
    pub provenance: Provenance,
    pub reason: String,
    pub anchor: String,
}

impl fmt::Display for EnvelopeCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.reason, self.anchor)
    }
}

/// A truncated ind- or pro-tower of finite-dimensional Hopf algebras.
#[derive(Clone, Debug)]
pub struct HopfTower {
    direction: Direction,
    levels: Vec<Arc<FDHopf>>,
    transitions: Vec<HopfMap>,
    provenance: Option<Provenance>,
}

impl HopfTower {
    /// A hand-assembled tower without provenance. Every transition must be a
    /// Hopf morphism between adjacent levels, injective for ind-towers and
    /// surjective for pro-towers.
    pub fn new(direction: Direction, levels: Vec<Arc<FDHopf>>, transitions: Vec<HopfMap>) -> Result<Self> {
        Self::validated(direction, levels, transitions, None)
    }

    fn validated(
        direction: Direction,
        levels: Vec<Arc<FDHopf>>,
        transitions: Vec<HopfMap>,
        provenance: Option<Provenance>,
    ) -> Result<Self> {
        if levels.is_empty() {
            return Err(invalid(0, "a tower needs at least one level"));
        }
        if transitions.len() + 1 != levels.len() {
            return Err(invalid(
                transitions.len() + 1,
                format!("{} levels need {} transitions", levels.len(), levels.len() - 1),
            ));
        }
        let failures: Vec<Option<HopfTowerError>> = transitions
            .par_iter()
            .enumerate()
            .map(|(i, t)| {
                let (s, e) = direction.ends(i);
                let same = |a: &Arc<FDHopf>, b: &Arc<FDHopf>| Arc::ptr_eq(a, b) || a == b;
                if !same(t.source(), &levels[s]) || !same(t.target(), &levels[e]) {
                    return Some(invalid(i + 1, "transition does not connect adjacent levels"));
                }
                if let Some((law, w)) = t.morphism_checks().into_iter().find_map(|(n, w)| w.map(|w| (n, w))) {
                    return Some(invalid(i + 1, format!("transition is not a Hopf morphism: {law} fails at {w}")));
                }
                match direction {
                    Direction::Ind if !t.is_injective() => Some(invalid(i + 1, "transition is not injective")),
                    Direction::Pro if !t.is_surjective() => Some(invalid(i + 1, "transition is not surjective")),
                    _ => None,
                }
            })
            .collect();
        if let Some(e) = failures.into_iter().flatten().next() {
            return Err(e);
        }
        Ok(HopfTower {
            direction,
            levels,
            transitions,
            provenance,
        })
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[Arc<FDHopf>] {
        &self.levels
    }

    pub fn level(&self, n: usize) -> Option<&Arc<FDHopf>> {
        n.checked_sub(1).and_then(|i| self.levels.get(i))
    }

    pub fn transitions(&self) -> &[HopfMap] {
        &self.transitions
    }

    pub fn provenance(&self) -> Option<Provenance> {
        self.provenance
    }

    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(|h| h.dim()).collect()
    }
}

fn one() -> Rational {
    Rational::from_integer(BigInt::from(1))
}

/// Matrix with a single `1` per column `j` at row `image(j)`.
fn column_indicator(rows: usize, cols: usize, image: impl Fn(usize) -> usize) -> Matrix<Rational> {
    let mut m = Matrix::zeros(rows, cols);
    for j in 0..cols {
        m.set(image(j), j, one());
    }
    m
}

/// Matrix with a single `1` per row `i` at column `image(i)`.
fn row_indicator(rows: usize, cols: usize, image: impl Fn(usize) -> usize) -> Matrix<Rational> {
    column_indicator(cols, rows, image).transpose()
}

fn build(
    t: &TowerOfGroups,
    direction: Direction,
    provenance: Provenance,
    algebra: fn(&FiniteGroup) -> FDHopf,
    matrix: impl Fn(&GroupHom) -> Matrix<Rational> + Sync,
) -> Result<HopfTower> {
    let levels: Vec<Arc<FDHopf>> = t.levels.par_iter().map(|g| Arc::new(algebra(g))).collect();
    let transitions = t
        .transitions
        .iter()
        .enumerate()
        .map(|(i, h)| {
            let (s, e) = direction.ends(i);
            HopfMap::new(Arc::clone(&levels[s]), Arc::clone(&levels[e]), matrix(h)).map_err(HopfTowerError::from)
        })
        .collect::<Result<_>>()?;
    HopfTower::validated(direction, levels, transitions, Some(provenance))
}

/// `C[G_1] ↪ C[G_2] ↪ …` along the group injections.
pub fn ind_group_algebra(t: &TowerOfGroups) -> Result<HopfTower> {
    t.require(Direction::Ind)?;
    build(t, Direction::Ind, Provenance::GroupAlgebra, group_algebra_hopf, |h| {
        column_indicator(h.target().order(), h.source().order(), |g| h.apply(g))
    })
}

/// `C^{G_1} ↪ C^{G_2} ↪ …` by inflation along the group surjections. The
/// output is an ind-tower although the group tower is a pro-tower.
pub fn pro_function_algebra(t: &TowerOfGroups) -> Result<HopfTower> {
    t.require(Direction::Pro)?;
    build(t, Direction::Ind, Provenance::LocallyConstantFunctions, function_algebra_hopf, |h| {
        // δ_y ↦ Σ_{π(x)=y} δ_x
        row_indicator(h.source().order(), h.target().order(), |x| h.apply(x))
    })
}

/// `C^{G_1} ↞ C^{G_2} ↞ …` by restriction along the group injections.
pub fn restriction_function_algebra(t: &TowerOfGroups) -> Result<HopfTower> {
    t.require(Direction::Ind)?;
    build(t, Direction::Pro, Provenance::RestrictedFunctions, function_algebra_hopf, |h| {
        // δ_x ↦ δ_g if x = ι(g), else 0
        row_indicator(h.source().order(), h.target().order(), |g| h.apply(g))
    })
}

/// `C[G_1] ↞ C[G_2] ↞ …` by push-forward along the group surjections.
pub fn pro_group_algebra(t: &TowerOfGroups) -> Result<HopfTower> {
    t.require(Direction::Pro)?;
    build(t, Direction::Pro, Provenance::ProfiniteConvolution, group_algebra_hopf, |h| {
        column_indicator(h.target().order(), h.source().order(), |x| h.apply(x))
    })
}

/// Level-wise dual with transposed transitions; ind and pro swap.
pub fn dual_tower(h: &HopfTower) -> Result<HopfTower> {
    let levels: Vec<Arc<FDHopf>> = h
        .levels
        .par_iter()
        .map(|l| dual_hopf(l).map(Arc::new))
        .collect::<std::result::Result<_, _>>()?;
    let direction = h.direction.flip();
    let transitions = h
        .transitions
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let (s, e) = direction.ends(i);
            HopfMap::new(Arc::clone(&levels[s]), Arc::clone(&levels[e]), t.matrix().transpose())
                .map_err(HopfTowerError::from)
        })
        .collect::<Result<_>>()?;
    HopfTower::validated(direction, levels, transitions, h.provenance.map(Provenance::dual))
}

/// The identity, with a certificate; untagged towers are refused.
pub fn arens_michael_envelope(h: &HopfTower) -> Result<(HopfTower, EnvelopeCertificate)> {
    let p = h.provenance.ok_or(HopfTowerError::UnknownProvenance)?;
    Ok((h.clone(), p.certificate()))
}

/// `H^• = (H')^`.
pub fn holomorphic_dual(h: &HopfTower) -> Result<(HopfTower, EnvelopeCertificate)> {
    if h.provenance.is_none() {
        return Err(HopfTowerError::UnknownProvenance);
    }
    arens_michael_envelope(&dual_tower(h)?)
}

fn matrices_witness(lhs: Option<Matrix<Rational>>, rhs: Option<Matrix<Rational>>) -> Option<String> {
    match (lhs, rhs) {
        (Some(l), Some(r)) if l == r => None,
        (Some(l), Some(r)) => {
            let cell = (0..l.rows().min(r.rows()))
                .flat_map(|i| (0..l.cols().min(r.cols())).map(move |j| (i, j)))
                .find(|&(i, j)| l.get(i, j) != r.get(i, j));
            Some(match cell {
                Some((i, j)) => format!("entry ({i}, {j})"),
                None => format!("shapes {}x{} vs {}x{}", l.rows(), l.cols(), r.rows(), r.cols()),
            })
        }
        _ => Some("matrices not composable".to_string()),
    }
}

/// Level-wise comparison of two towers of the same shape along a family of
/// maps `c_n: A_n → B_n`: each `c_n` a Hopf isomorphism, and
/// `c_target ∘ a_t = b_t ∘ c_source` for every transition.
fn comparison_records(
    a: &HopfTower,
    b: &HopfTower,
    maps: &[HopfMap],
    anchor: &str,
    iso_name: &str,
) -> Vec<CheckRecord> {
    let per_level: Vec<Vec<CheckRecord>> = (0..a.depth())
        .into_par_iter()
        .map(|i| {
            let n = i + 1;
            let mut out = vec![CheckRecord::new(iso_name, anchor, is_hopf_isomorphism(&maps[i])).at_level(n)];
            if i < a.transitions.len() {
                let (s, e) = a.direction.ends(i);
                let lhs = maps[e].matrix().mul(a.transitions[i].matrix());
                let rhs = b.transitions[i].matrix().mul(maps[s].matrix());
                out.push(
                    CheckRecord::from_witness("naturality square", anchor, matrices_witness(lhs, rhs)).at_level(n),
                );
            }
            out
        })
        .collect();
    per_level.into_iter().flatten().collect()
}

fn same_shape(a: &HopfTower, b: &HopfTower) -> Result<()> {
    if a.direction != b.direction {
        return Err(HopfTowerError::WrongDirection {
            expected: a.direction,
            found: b.direction,
        });
    }
    if a.dims() != b.dims() {
        return Err(invalid(1, format!("dimensions {:?} vs {:?}", a.dims(), b.dims())));
    }
    Ok(())
}

/// Compares `from` with `to` level-wise through the canonical pairings, which
/// are identity matrices in the group-element and indicator bases.
pub fn canonical_comparison(from: &HopfTower, to: &HopfTower, anchor: &str) -> Result<Report> {
    same_shape(from, to)?;
    let maps = from
        .levels
        .iter()
        .zip(&to.levels)
        .map(|(x, y)| HopfMap::new(Arc::clone(x), Arc::clone(y), Matrix::identity(x.dim())))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let mut report = Report::new(format!("canonical comparison of {} towers of depth {}", from.direction, from.depth()));
    report.extend(comparison_records(from, to, &maps, anchor, "canonical pairing is a Hopf isomorphism"));
    Ok(report)
}

/// Computes `H^•` and `H^{••}`, checks every level and naturality square, and
/// attaches the four-corner diagram.
pub fn reflexivity_check(h: &HopfTower) -> Result<Report> {
    let provenance = h.provenance.ok_or(HopfTowerError::UnknownProvenance)?;
    let anchor = provenance.theorem_anchor();
    let (dual, dual_cert) = holomorphic_dual(h)?;
    let (double, double_cert) = holomorphic_dual(&dual)?;
    let original_cert = provenance.certificate();

    let mut report = Report::new(format!(
        "reflexivity of the {} Hopf tower ({:?}) of depth {}",
        h.direction,
        provenance,
        h.depth()
    ));

    let axioms: Vec<CheckRecord> = h
        .levels
        .par_iter()
        .zip(dual.levels.par_iter())
        .enumerate()
        .flat_map_iter(|(i, (x, y))| {
            let w = |r: Report| r.failures().next().map(|f| format!("{}: {}", f.check, f.witness.clone().unwrap_or_default()));
            [
                CheckRecord::from_witness("level satisfies the Hopf axioms", anchors::HOPF_AXIOMS, w(check_hopf_axioms(x)))
                    .at_level(i + 1),
                CheckRecord::from_witness("dual level satisfies the Hopf axioms", anchors::HOPF_AXIOMS, w(check_hopf_axioms(y)))
                    .at_level(i + 1),
            ]
        })
        .collect();
    report.extend(axioms);

    let flipped = match dual.direction {
        Direction::Pro => "surjective",
        Direction::Ind => "injective",
    };
    for (i, t) in dual.transitions.iter().enumerate() {
        let ok = match dual.direction {
            Direction::Pro => t.is_surjective(),
            Direction::Ind => t.is_injective(),
        };
        report.push(
            CheckRecord::new(format!("dual transition is {flipped}"), anchor, ok && is_hopf_morphism(t)).at_level(i + 1),
        );
    }

    let canonical: Vec<HopfMap> = h
        .levels
        .par_iter()
        .map(|x| double_dual_canonical(x))
        .collect::<std::result::Result<_, _>>()?;
    let identity = canonical.iter().position(|c| !c.matrix().is_identity());
    report.push(CheckRecord::from_witness(
        "canonical map to the double dual is the identity matrix",
        anchors::DOUBLE_DUAL,
        identity.map(|i| format!("level {}", i + 1)),
    ));
    let to_double = h
        .levels
        .iter()
        .zip(&double.levels)
        .zip(&canonical)
        .map(|((x, y), c)| HopfMap::new(Arc::clone(x), Arc::clone(y), c.matrix().clone()))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let square_records = comparison_records(h, &double, &to_double, anchor, "canonical map to the double dual is a Hopf isomorphism");
    report.extend(square_records);

    let dual_ok = report
        .records
        .iter()
        .filter(|r| r.check.starts_with("dual"))
        .all(|r| r.passed);
    let reflexive_ok = report.passed();
    let nodes = vec![
        DiagramNode {
            id: "H".into(),
            description: format!("{} tower, dims {:?}", h.direction, h.dims()),
        },
        DiagramNode {
            id: "H'".into(),
            description: format!("{} tower, dims {:?}", dual.direction, dual.dims()),
        },
        DiagramNode {
            id: "H•".into(),
            description: "envelope of H', equal to H'".into(),
        },
        DiagramNode {
            id: "(H•)'".into(),
            description: format!("{} tower, dims {:?}", double.direction, double.dims()),
        },
    ];
    let edge = |from: &str, to: &str, label: &str, verified: bool, cert: &EnvelopeCertificate| DiagramEdge {
        from: from.into(),
        to: to.into(),
        label: label.into(),
        verified,
        envelope_certificate: cert.to_string(),
    };
    let edges = vec![
        edge("H", "H'", "level-wise dual", dual_ok, &dual_cert),
        edge("H'", "H•", "Arens-Michael envelope (identity)", true, &dual_cert),
        edge("H•", "(H•)'", "level-wise dual", true, &double_cert),
        edge("(H•)'", "H", "inverse of the canonical isomorphism", reflexive_ok, &original_cert),
    ];
    report.diagram = Some(ReflexivityDiagram { nodes, edges });
    Ok(report)
}

/// Spectra of `C[G_n]` for an abelian ind-tower, compared with the levels and
/// transitions of the dual pro-tower of groups.
/// First pair of points whose pointwise product is not the point indexed by
/// the sum in `target`, on exponent tables.
fn product_witness_on_exponents(table: &[Vec<u64>], e: u64, target: &FiniteAbelianGroup) -> Option<String> {
    let index: HashMap<&[u64], usize> = table.iter().enumerate().map(|(i, row)| (row.as_slice(), i)).collect();
    let n = table.len();
    (0..n * n).into_par_iter().find_map_first(|ab| {
        let (a, b) = (ab / n, ab % n);
        let prod: Vec<u64> = table[a].iter().zip(&table[b]).map(|(x, y)| (x + y) % e).collect();
        let expected = target.index_of(&target.add(&target.element_at(a), &target.element_at(b)));
        (index.get(prod.as_slice()) != Some(&expected)).then(|| format!("product of points {a} and {b}"))
    })
}

fn product_witness_exact(points: &[Vec<Cyclotomic>], target: &FiniteAbelianGroup) -> Option<String> {
    let n = points.len();
    (0..n * n).into_par_iter().find_map_first(|ab| {
        let (a, b) = (ab / n, ab % n);
        let prod: Vec<Cyclotomic> = points[a].iter().zip(&points[b]).map(|(x, y)| x * y).collect();
        let expected = target.index_of(&target.add(&target.element_at(a), &target.element_at(b)));
        (points.iter().position(|q| *q == prod) != Some(expected)).then(|| format!("product of points {a} and {b}"))
    })
}

pub fn spectrum_consistency(t: &IndGroup) -> Result<Report> {
    let groups = TowerOfGroups::from_ind_group(t)?;
    let algebras = ind_group_algebra(&groups)?;
    let dual = dual_ind(t);
    let spectra: Vec<_> = t.levels().par_iter().map(spectrum_abelian_group_algebra).collect();
    let mut report = Report::new(format!("spectra of group algebras along an ind-tower of depth {}", t.depth()));

    let per_level: Vec<Vec<CheckRecord>> = spectra
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            let n = i + 1;
            let mut out: Vec<CheckRecord> = s.verify().records.into_iter().map(|r| r.at_level(n)).collect();
            // group structure read off the spectrum by pointwise products
            let target = dual.level(n).expect("same depth");
            let points = s.points();
            let witness = if points.len() as u64 != target.order() {
                Some(format!("{} points, dual level has order {}", points.len(), target.order()))
            } else {
                match s.exponent_table() {
                    Some(table) => product_witness_on_exponents(&table, s.group().exponent(), target),
                    None => product_witness_exact(points, target),
                }
            };
            out.push(
                CheckRecord::from_witness("spectrum group is isomorphic to the dual level", anchors::SPECTRUM, witness)
                    .at_level(n),
            );
            if i + 1 < spectra.len() {
                // restricting a point of C[G_{n+1}] along C[G_n] → C[G_{n+1}]
                // must give the point indexed by the dual transition
                let inclusion = algebras.transitions()[i].matrix();
                let dual_t = dual_hom(&t.transitions()[i]);
                let upper = &spectra[i + 1];
                let upper_group = dual.level(n + 1).expect("same depth");
                let witness = (0..upper.len()).find_map(|chi| {
                    let restricted: Vec<Cyclotomic> = (0..inclusion.cols())
                        .map(|g| {
                            (0..inclusion.rows())
                                .filter(|&x| !num_traits::Zero::is_zero(inclusion.get(x, g)))
                                .fold(Cyclotomic::zero(), |acc, x| &acc + &upper.point(chi)[x].scale(inclusion.get(x, g)))
                        })
                        .collect();
                    let image: Element = dual_t.apply(&upper_group.element_at(chi)).expect("character of upper level");
                    let expected = s.point(target.index_of(&image));
                    (restricted.as_slice() != expected).then(|| format!("character {chi} of level {}", n + 1))
                });
                out.push(CheckRecord::from_witness("spectrum comparison square", anchors::SPECTRUM, witness).at_level(n));
            }
            out
        })
        .collect();
    report.extend(per_level.into_iter().flatten());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::towers::{padic, pruefer};

    #[test]
    fn symmetric_tower_dims() {
        let t = TowerOfGroups::symmetric(3).unwrap();
        let h = ind_group_algebra(&t).unwrap();
        assert_eq!(h.dims(), vec![1, 2, 6]);
        assert_eq!(h.provenance(), Some(Provenance::GroupAlgebra));
        let p = ind_group_algebra(&TowerOfGroups::from_ind_group(&pruefer(2, 3).unwrap()).unwrap()).unwrap();
        assert_eq!(p.dims(), vec![2, 4, 8]);
    }

    #[test]
    fn pro_function_algebra_is_ind() {
        let t = TowerOfGroups::from_pro_group(&padic(2, 3).unwrap()).unwrap();
        let h = pro_function_algebra(&t).unwrap();
        assert_eq!(h.direction(), Direction::Ind);
        assert_eq!(h.dims(), vec![2, 4, 8]);
        let single = pro_function_algebra(&t.truncate(1).unwrap()).unwrap();
        assert!(single.transitions().is_empty());
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let prod = pro_function_algebra(&TowerOfGroups::product_pro(&s3, 2).unwrap()).unwrap();
        assert_eq!(prod.dims(), vec![6, 36]);
    }

    #[test]
    fn non_homomorphic_transition_is_rejected() {
        let z2 = Arc::new(group_algebra_hopf(&FiniteGroup::cyclic(2).unwrap()));
        let z4 = Arc::new(group_algebra_hopf(&FiniteGroup::cyclic(4).unwrap()));
        // 1 ↦ 1 in Z/4 is injective but not a homomorphism from Z/2
        let bad = column_indicator(4, 2, |g| g);
        let map = HopfMap::new(Arc::clone(&z2), Arc::clone(&z4), bad).unwrap();
        assert!(matches!(
            HopfTower::new(Direction::Ind, vec![z2, z4], vec![map]),
            Err(HopfTowerError::InvalidTower { level: 1, .. })
        ));
    }

    #[test]
    fn dual_of_symmetric_tower_matches_restriction() {
        let t = TowerOfGroups::symmetric(3).unwrap();
        let h = ind_group_algebra(&t).unwrap();
        let d = dual_tower(&h).unwrap();
        assert_eq!(d.direction(), Direction::Pro);
        let f = restriction_function_algebra(&t).unwrap();
        let report = canonical_comparison(&f, &d, anchors::LOCALLY_FINITE_HOPF).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn dual_of_padic_functions_is_pro_tower_of_group_algebras() {
        let t = TowerOfGroups::from_pro_group(&padic(2, 3).unwrap()).unwrap();
        let d = dual_tower(&pro_function_algebra(&t).unwrap()).unwrap();
        assert_eq!(d.direction(), Direction::Pro);
        assert_eq!(d.provenance(), Some(Provenance::ProfiniteConvolution));
        let conv = pro_group_algebra(&t).unwrap();
        let report = canonical_comparison(&conv, &d, anchors::ENVELOPE_CONVOLUTION).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn product_witnesses_agree() {
        let g = FiniteAbelianGroup::from_cyclic_orders(&[2, 6]).unwrap();
        let s = spectrum_abelian_group_algebra(&g);
        let table = s.exponent_table().unwrap();
        assert_eq!(product_witness_on_exponents(&table, 6, &g), None);
        assert_eq!(product_witness_exact(s.points(), &g), None);
        let mut points = s.points().to_vec();
        points.swap(1, 2);
        let mut swapped = table.clone();
        swapped.swap(1, 2);
        let w = product_witness_exact(&points, &g);
        assert!(w.is_some());
        assert_eq!(product_witness_on_exponents(&swapped, 6, &g), w);
    }

    #[test]
    fn envelope_guard() {
        let t = TowerOfGroups::symmetric(2).unwrap();
        let h = ind_group_algebra(&t).unwrap();
        let (same, cert) = arens_michael_envelope(&h).unwrap();
        assert_eq!(same.dims(), h.dims());
        assert!(cert.reason.starts_with("locally finite"));
        let (twice, _) = arens_michael_envelope(&same).unwrap();
        assert_eq!(twice.levels(), same.levels());
        let bare = HopfTower::new(Direction::Ind, h.levels().to_vec(), h.transitions().to_vec()).unwrap();
        assert_eq!(arens_michael_envelope(&bare).unwrap_err(), HopfTowerError::UnknownProvenance);
    }

    #[test]
    fn reflexivity_of_small_towers() {
        let h = ind_group_algebra(&TowerOfGroups::symmetric(3).unwrap()).unwrap();
        let report = reflexivity_check(&h).unwrap();
        assert!(report.passed(), "{report}");
        let diagram = report.diagram.as_ref().unwrap();
        assert_eq!(diagram.nodes.len(), 4);
        assert!(diagram.edges.iter().all(|e| e.verified && !e.envelope_certificate.is_empty()));

        let t = TowerOfGroups::from_pro_group(&padic(3, 3).unwrap()).unwrap();
        let report = reflexivity_check(&pro_function_algebra(&t).unwrap()).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn spectra_follow_dual_tower() {
        let report = spectrum_consistency(&pruefer(2, 3).unwrap()).unwrap();
        assert!(report.passed(), "{report}");
    }
}
