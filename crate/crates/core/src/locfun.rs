//! Locally constant functions on pro-towers, stored as value tables at a
//! declared level, and their decomposition into characters.
//!
//! Tables are indexed by the lexicographic element enumeration of the level
//! group (first coordinate most significant).

use std::sync::Arc;

use num_bigint::BigInt;
use rayon::prelude::*;
use thiserror::Error;

use crate::cyclo::{CycloError, Cyclotomic};
use crate::finab::{dual_group, pair_scaled, Element, FiniteAbelianGroup, Hom};
use crate::hopf::EnumeratedGroup;
use crate::linalg::Matrix;
use crate::report::{anchors, CheckRecord, Report};
use crate::towers::{ProGroup, TowerError};
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocfunError {
    #[error("level {level} out of range {min}..={max}")]
    LevelOutOfRange { level: usize, min: usize, max: usize },
    #[error("table has {found} entries, level group has order {expected}")]
    TableLength { expected: usize, found: usize },
    #[error("functions live on different towers")]
    DifferentTowers,
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
}

pub type Result<T> = std::result::Result<T, LocfunError>;

/// A function on the limit of `tower` pulled back from `G_level`.
#[derive(Clone, Debug)]
pub struct LocallyConstantFunction {
    tower: Arc<ProGroup>,
    level: usize,
    table: Vec<Cyclotomic>,
}

impl LocallyConstantFunction {
    pub fn new(tower: Arc<ProGroup>, level: usize, table: Vec<Cyclotomic>) -> Result<Self> {
        let group = tower.level(level).map_err(|_| LocfunError::LevelOutOfRange {
            level,
            min: 1,
            max: tower.depth(),
        })?;
        let expected = group.order() as usize;
        if table.len() != expected {
            return Err(LocfunError::TableLength {
                expected,
                found: table.len(),
            });
        }
        Ok(LocallyConstantFunction { tower, level, table })
    }

    /// The constant function at level 1.
    pub fn constant(tower: Arc<ProGroup>, value: Cyclotomic) -> Result<Self> {
        let n = tower.level(1)?.order() as usize;
        Self::new(tower, 1, vec![value; n])
    }

    /// The indicator of the identity element of `G_level`.
    pub fn delta_identity(tower: Arc<ProGroup>, level: usize) -> Result<Self> {
        let n = tower.level(level)?.order() as usize;
        let table = (0..n)
            .map(|i| Cyclotomic::from_integer(i64::from(i == 0)))
            .collect();
        Self::new(tower, level, table)
    }

    /// The character `χ` of `G_level`, `g ↦ ζ(<g, χ>)`.
    pub fn character(tower: Arc<ProGroup>, level: usize, chi: &Element) -> Result<Self> {
        let g = tower.level(level)?.clone();
        let e = g.exponent();
        let roots = Cyclotomic::roots_of_unity(e)?;
        let table = g
            .elements()
            .map(|x| roots[pair_scaled(&g, &x, chi).expect("character of level group") as usize].clone())
            .collect();
        Self::new(tower, level, table)
    }

    pub fn tower(&self) -> &Arc<ProGroup> {
        &self.tower
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn table(&self) -> &[Cyclotomic] {
        &self.table
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        self.tower.level(self.level).expect("level validated at construction")
    }

    /// Value at an element of `G_level`.
    pub fn value(&self, g: &Element) -> &Cyclotomic {
        &self.table[self.group().index_of(g)]
    }

    /// Pullback to level `m ≥ level` along `G_m → G_level`.
    pub fn inflate(&self, m: usize) -> Result<Self> {
        if m < self.level || m > self.tower.depth() {
            return Err(LocfunError::LevelOutOfRange {
                level: m,
                min: self.level,
                max: self.tower.depth(),
            });
        }
        if m == self.level {
            return Ok(self.clone());
        }
        let pi = self.tower.projection(m, self.level)?;
        let source = pi.source();
        let table = source
            .elements()
            .map(|x| self.value(&pi.apply(&x).expect("element of source")).clone())
            .collect();
        Ok(LocallyConstantFunction {
            tower: Arc::clone(&self.tower),
            level: m,
            table,
        })
    }

    /// Smallest `k` such that the function is constant on the fibres of
    /// `G_level → G_k`.
    pub fn minimal_level(&self) -> usize {
        for k in 1..self.level {
            let pi = self.tower.projection(self.level, k).expect("levels in range");
            let mut seen: Vec<Option<&Cyclotomic>> = vec![None; pi.target().order() as usize];
            let constant_on_fibres = self.group().elements().zip(&self.table).all(|(x, v)| {
                let fibre = pi.target().index_of(&pi.apply(&x).expect("element of source"));
                match seen[fibre] {
                    Some(w) => w == v,
                    None => {
                        seen[fibre] = Some(v);
                        true
                    }
                }
            });
            if constant_on_fibres {
                return k;
            }
        }
        self.level
    }

    /// Equality of the denoted functions on the limit: compares after
    /// inflating both to the higher level.
    pub fn same_function(&self, other: &Self) -> Result<bool> {
        if self.tower != other.tower {
            return Err(LocfunError::DifferentTowers);
        }
        let top = self.level.max(other.level);
        Ok(self.inflate(top)?.table == other.inflate(top)?.table)
    }

    /// `c_χ = |G|⁻¹ Σ_g f(g) ζ(−<g, χ>)` over the characters of `G_level`.
    pub fn decompose_characters(&self) -> Decomposition {
        let g = self.group();
        let e = g.exponent();
        let roots = Cyclotomic::roots_of_unity(e).expect("exponent within conductor cap");
        let inv_order = Rational::new(BigInt::from(1), BigInt::from(g.order()));
        let elements: Vec<Element> = g.elements().collect();
        let dual = dual_group(g);
        let characters: Vec<Element> = dual.characters().collect();
        let coefficients = characters
            .par_iter()
            .map(|chi| {
                let sum = elements.iter().zip(&self.table).fold(Cyclotomic::zero(), |acc, (x, v)| {
                    let r = pair_scaled(g, x, chi).expect("character of level group");
                    &acc + &(v * &roots[((e - r) % e) as usize])
                });
                sum.scale(&inv_order)
            })
            .collect();
        Decomposition {
            group: g.clone(),
            coefficients,
        }
    }
}

/// Character coefficients `c_χ`, indexed by the character enumeration of the
/// level group (the enumeration of the dual group's invariant factors).
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    group: FiniteAbelianGroup,
    coefficients: Vec<Cyclotomic>,
}

impl Decomposition {
    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn coefficients(&self) -> &[Cyclotomic] {
        &self.coefficients
    }

    pub fn coefficient(&self, chi: &Element) -> &Cyclotomic {
        &self.coefficients[dual_group(&self.group).underlying().index_of(chi)]
    }

    /// `Σ_χ c_χ ζ(<·, χ>)` as a table over the level group.
    pub fn reconstruct(&self) -> Vec<Cyclotomic> {
        let g = &self.group;
        let e = g.exponent();
        let roots = Cyclotomic::roots_of_unity(e).expect("exponent within conductor cap");
        let dual = dual_group(g);
        let characters: Vec<Element> = dual.characters().collect();
        let elements: Vec<Element> = g.elements().collect();
        elements
            .par_iter()
            .map(|x| {
                characters
                    .iter()
                    .zip(&self.coefficients)
                    .filter(|(_, c)| !c.is_zero())
                    .fold(Cyclotomic::zero(), |acc, (chi, c)| {
                        let r = pair_scaled(g, x, chi).expect("character of level group");
                        &acc + &(c * &roots[r as usize])
                    })
            })
            .collect()
    }
}

/// Decomposes `f`, reconstructs it and reports whether the round trip is exact.
pub fn decomposition_report(f: &LocallyConstantFunction) -> (Decomposition, Report) {
    let d = f.decompose_characters();
    let rebuilt = d.reconstruct();
    let mismatch = rebuilt
        .iter()
        .zip(f.table())
        .position(|(a, b)| a != b)
        .map(|i| format!("table entry {i}"));
    let mut report = Report::new(format!(
        "character decomposition at level {} ({})",
        f.level(),
        f.group()
    ));
    report.push(
        CheckRecord::from_witness("reconstruction equals the function", anchors::CHARACTER_COMBINATION, mismatch)
            .at_level(f.level()),
    );
    report.push(
        CheckRecord::new(
            "function factors through a finite level",
            anchors::LOCALLY_CONSTANT,
            f.minimal_level() <= f.level(),
        )
        .with_witness(Some(format!("minimal level {}", f.minimal_level())))
        .at_level(f.level()),
    );
    (d, report)
}

/// Product of two enumerated groups with element `(a, b)` at index `a·|B| + b`.
pub struct ProductGroup<'a, A: ?Sized, B: ?Sized> {
    pub left: &'a A,
    pub right: &'a B,
}

impl<A: EnumeratedGroup + ?Sized, B: EnumeratedGroup + ?Sized> EnumeratedGroup for ProductGroup<'_, A, B> {
    fn order(&self) -> usize {
        self.left.order() * self.right.order()
    }
    fn op(&self, x: usize, y: usize) -> usize {
        let n = self.right.order();
        self.left.op(x / n, y / n) * n + self.right.op(x % n, y % n)
    }
    fn identity(&self) -> usize {
        self.left.identity() * self.right.order() + self.right.identity()
    }
    fn inverse(&self, x: usize) -> usize {
        let n = self.right.order();
        self.left.inverse(x / n) * n + self.right.inverse(x % n)
    }
}

/// `ψ: C^A ⊗ C^B → C^{A×B}`, `δ_a ⊗ δ_b ↦ δ_{(a,b)}`.
///
/// Tensors are coordinate vectors over the basis `δ_a ⊗ δ_b` at position
/// `a·|B| + b`; functions on `A × B` are tables in the [`ProductGroup`]
/// enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiIso {
    left_order: usize,
    right_order: usize,
    /// Image index of each tensor basis vector.
    image: Vec<usize>,
}

pub fn psi_iso<A: EnumeratedGroup + ?Sized, B: EnumeratedGroup + ?Sized>(a: &A, b: &B) -> PsiIso {
    let (na, nb) = (a.order(), b.order());
    let product = ProductGroup { left: a, right: b };
    // (a, b) = (a, e)(e, b) in the product
    let image = (0..na * nb)
        .map(|ab| {
            let left = (ab / nb) * nb + b.identity();
            let right = a.identity() * nb + ab % nb;
            product.op(left, right)
        })
        .collect();
    PsiIso {
        left_order: na,
        right_order: nb,
        image,
    }
}

impl PsiIso {
    pub fn dim(&self) -> usize {
        self.image.len()
    }

    /// The `|A||B| × |A||B|` matrix in the tensor and product bases.
    pub fn matrix(&self) -> Matrix<Rational> {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for (col, &row) in self.image.iter().enumerate() {
            m.set(row, col, Rational::from_integer(BigInt::from(1)));
        }
        m
    }

    pub fn rank(&self) -> usize {
        self.matrix().rank()
    }

    pub fn apply<T: Clone + Default>(&self, tensor: &[T]) -> Vec<T> {
        let mut out = vec![T::default(); self.dim()];
        for (col, x) in tensor.iter().enumerate() {
            out[self.image[col]] = x.clone();
        }
        out
    }

    /// `ψ(f ⊗ g)`: the table of `(a, b) ↦ f(a) g(b)`.
    pub fn apply_pure(&self, f: &[Cyclotomic], g: &[Cyclotomic]) -> Vec<Cyclotomic> {
        let tensor: Vec<Cyclotomic> = f.iter().flat_map(|x| g.iter().map(move |y| x * y)).collect();
        let mut out = vec![Cyclotomic::zero(); self.dim()];
        for (col, x) in tensor.into_iter().enumerate() {
            out[self.image[col]] = x;
        }
        out
    }

    pub fn inverse<T: Clone + Default>(&self, table: &[T]) -> Vec<T> {
        self.image.iter().map(|&row| table[row].clone()).collect()
    }

    /// `ψ ∘ (L_s ⊗ L_t) = L_{(s,t)} ∘ ψ` for every `(s, t)`, where `L` is left
    /// translation `(L_s f)(x) = f(s⁻¹x)`. Returns the first failing pair.
    pub fn intertwining_witness<A, B>(&self, a: &A, b: &B) -> Option<String>
    where
        A: EnumeratedGroup + ?Sized + Sync,
        B: EnumeratedGroup + ?Sized + Sync,
    {
        let (na, nb) = (self.left_order, self.right_order);
        let product = ProductGroup { left: a, right: b };
        (0..na * nb).into_par_iter().find_map_first(|st| {
            let (s, t) = (st / nb, st % nb);
            // on basis vectors: L_s δ_a = δ_{sa}
            let bad = (0..na * nb).find(|&ab| {
                let (x, y) = (ab / nb, ab % nb);
                let lhs = self.image[a.op(s, x) * nb + b.op(t, y)];
                let rhs = product.op(self.image[s * nb + t], self.image[ab]);
                lhs != rhs
            });
            bad.map(|ab| format!("translation by ({s}, {t}) on basis tensor {ab}"))
        })
    }
}

/// Inflation `C^{G_n} → C^{G_m}` as a 0/1 matrix.
fn inflation_matrix(pi: &Hom) -> Matrix<Rational> {
    let target = pi.target();
    let rows = pi.source().order() as usize;
    let cols = target.order() as usize;
    let mut m = Matrix::zeros(rows, cols);
    for (i, x) in pi.source().elements().enumerate() {
        let j = target.index_of(&pi.apply(&x).expect("element of source"));
        m.set(i, j, Rational::from_integer(BigInt::from(1)));
    }
    m
}

fn kronecker(a: &Matrix<Rational>, b: &Matrix<Rational>) -> Matrix<Rational> {
    Matrix::from_fn(a.rows() * b.rows(), a.cols() * b.cols(), |i, j| {
        a.get(i / b.rows(), j / b.cols()) * b.get(i % b.rows(), j % b.cols())
    })
}

/// Checks `ψ_m ∘ (inf ⊗ inf) = inf_{G×G} ∘ ψ_n` for the inflation from level
/// `n` to level `m` of `tower`, with the product tower `G_k × G_k`.
pub fn psi_inflation_witness(tower: &ProGroup, n: usize, m: usize) -> Result<Option<String>> {
    let pi = tower.projection(m, n)?;
    let low = tower.level(n)?;
    let high = tower.level(m)?;
    let psi_low = psi_iso(low, low);
    let psi_high = psi_iso(high, high);
    let inf = inflation_matrix(&pi);
    let tensor_side = psi_high
        .matrix()
        .mul(&kronecker(&inf, &inf))
        .expect("shapes agree");
    // inflation along π × π on the product group
    let (nh, nl) = (high.order() as usize, low.order() as usize);
    let images: Vec<usize> = high
        .elements()
        .map(|x| low.index_of(&pi.apply(&x).expect("element of source")))
        .collect();
    let product_inf = Matrix::from_fn(nh * nh, nl * nl, |i, j| {
        let hit = images[i / nh] * nl + images[i % nh] == j;
        Rational::from_integer(BigInt::from(i64::from(hit)))
    });
    let product_side = product_inf.mul(&psi_low.matrix()).expect("shapes agree");
    if tensor_side == product_side {
        return Ok(None);
    }
    let (i, j) = (0..tensor_side.rows())
        .flat_map(|i| (0..tensor_side.cols()).map(move |j| (i, j)))
        .find(|&(i, j)| tensor_side.get(i, j) != product_side.get(i, j))
        .expect("matrices differ somewhere");
    Ok(Some(format!("entry ({i}, {j}) from level {n} to {m}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finab::FiniteAbelianGroup;
    use crate::hopf::FiniteGroup;
    use crate::towers::padic;

    fn tower(p: u64, d: usize) -> Arc<ProGroup> {
        Arc::new(padic(p, d).unwrap())
    }

    #[test]
    fn constant_inflates_to_constant() {
        let t = tower(2, 3);
        let one = LocallyConstantFunction::constant(Arc::clone(&t), Cyclotomic::one()).unwrap();
        let up = one.inflate(3).unwrap();
        assert_eq!(up.table(), vec![Cyclotomic::one(); 8].as_slice());
        assert_eq!(up.minimal_level(), 1);
        assert_eq!(one.inflate(1).unwrap().table(), one.table());
        assert!(matches!(one.inflate(4), Err(LocfunError::LevelOutOfRange { .. })));
    }

    #[test]
    fn delta_inflates_to_fibre_indicator() {
        let t = tower(2, 2);
        let d = LocallyConstantFunction::delta_identity(t, 1).unwrap();
        let up = d.inflate(2).unwrap();
        let ones: Vec<i64> = vec![1, 0, 1, 0];
        assert_eq!(
            up.table(),
            ones.into_iter().map(Cyclotomic::from_integer).collect::<Vec<_>>().as_slice()
        );
    }

    #[test]
    fn minimal_levels() {
        let t = tower(2, 4);
        let delta = LocallyConstantFunction::delta_identity(Arc::clone(&t), 4).unwrap();
        assert_eq!(delta.minimal_level(), 4);
        let g2 = t.level(2).unwrap();
        let chi = g2.element(vec![1]).unwrap();
        let f = LocallyConstantFunction::character(Arc::clone(&t), 2, &chi).unwrap();
        assert_eq!(f.minimal_level(), 2);
        assert_eq!(f.inflate(4).unwrap().minimal_level(), 2);
    }

    #[test]
    fn decompositions_of_basic_functions() {
        let t = tower(3, 2);
        let one = LocallyConstantFunction::constant(Arc::clone(&t), Cyclotomic::one())
            .unwrap()
            .inflate(2)
            .unwrap();
        let d = one.decompose_characters();
        assert_eq!(d.coefficients()[0], Cyclotomic::one());
        assert!(d.coefficients()[1..].iter().all(Cyclotomic::is_zero));

        let chi = t.level(2).unwrap().element(vec![4]).unwrap();
        let f = LocallyConstantFunction::character(Arc::clone(&t), 2, &chi).unwrap();
        let d = f.decompose_characters();
        for (i, c) in d.coefficients().iter().enumerate() {
            assert_eq!(*c, Cyclotomic::from_integer(i64::from(i == 4)));
        }

        let delta = LocallyConstantFunction::delta_identity(t, 2).unwrap();
        let d = delta.decompose_characters();
        let ninth = Cyclotomic::from_rational(Rational::new(BigInt::from(1), BigInt::from(9)));
        assert!(d.coefficients().iter().all(|c| *c == ninth));
        assert_eq!(d.reconstruct(), delta.table());
    }

    #[test]
    fn psi_basis_images() {
        let z2 = FiniteAbelianGroup::cyclic(2).unwrap();
        let psi = psi_iso(&z2, &z2);
        let tensor: Vec<i64> = vec![0, 1, 0, 0];
        assert_eq!(psi.apply(&tensor), vec![0, 1, 0, 0]);
        assert_eq!(psi.inverse(&psi.apply(&tensor)), tensor);
        let z4 = FiniteAbelianGroup::cyclic(4).unwrap();
        assert_eq!(psi_iso(&z4, &z4).rank(), 16);
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let psi = psi_iso(&s3, &z2);
        assert_eq!(psi.rank(), 12);
        assert_eq!(psi.intertwining_witness(&s3, &z2), None);
    }

    #[test]
    fn psi_commutes_with_inflation() {
        let t = padic(2, 3).unwrap();
        for (n, m) in [(1, 2), (2, 3), (1, 3)] {
            assert_eq!(psi_inflation_witness(&t, n, m).unwrap(), None);
        }
    }
}
