//! Finite-dimensional Hopf algebras over Q given by structure tensors.
//!
//! Tensors are stored sparsely: `mult[i·dim + j]` is the vector `e_i e_j`,
//! `comult[i]` is `Δ(e_i)` keyed by index pairs, `antipode[i]` is `S(e_i)`.
//! Group algebras and function algebras have `O(dim²)` nonzero structure
//! constants, which keeps the exhaustive axiom checks cheap up to `dim ≈ 60`.

mod group;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::cyclo::{zeta, Cyclotomic};
use crate::finab::{dual_group, pair, FiniteAbelianGroup};
use crate::linalg::Matrix;
use crate::report::{anchors, CheckRecord, Report};
use crate::Rational;

pub use group::{
    drop_last_factor, symmetric_inclusion, EnumeratedGroup, FiniteGroup, GroupError, GroupHom,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HopfError {
    #[error("Hopf axioms fail: {0}")]
    AxiomFailure(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("structure constant index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("group is not abelian")]
    NonAbelian,
    #[error("abelian group has no invariant-factor structure attached")]
    NoAbelianStructure,
}

pub type Result<T> = std::result::Result<T, HopfError>;

/// Sparse vector in `H`.
pub type Vector = BTreeMap<usize, Rational>;
/// Sparse vector in `H ⊗ H`.
pub type Vector2 = BTreeMap<(usize, usize), Rational>;
type Vector3 = BTreeMap<(usize, usize, usize), Rational>;

fn accumulate<K: Ord>(v: &mut BTreeMap<K, Rational>, key: K, c: Rational) {
    if c.is_zero() {
        return;
    }
    match v.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

fn basis(i: usize) -> Vector {
    BTreeMap::from([(i, Rational::one())])
}

fn scaled(v: &Vector, c: &Rational) -> Vector {
    if c.is_zero() {
        return Vector::new();
    }
    v.iter().map(|(&k, x)| (k, x * c)).collect()
}

/// A finite-dimensional Hopf algebra. Construction checks only shapes; the
/// axioms are verified by [`check_hopf_axioms`].
#[derive(Clone, PartialEq, Debug)]
pub struct FDHopf {
    label: String,
    dim: usize,
    mult: Vec<Vector>,
    unit: Vector,
    comult: Vec<Vector2>,
    counit: Vec<Rational>,
    antipode: Vec<Vector>,
}

/// One structure constant `c · e_a ⊗ e_b ↦ e_c` (multiplication) or
/// `e_a ↦ c · e_b ⊗ e_c` (comultiplication).
pub type TensorEntry = (usize, usize, usize, Rational);

impl FDHopf {
    /// Assembles a Hopf algebra from explicit structure constants. The antipode
    /// matrix has `S(e_j) = Σ_i antipode[i][j] e_i`.
    pub fn new(
        label: impl Into<String>,
        dim: usize,
        mult: &[TensorEntry],
        unit: &[Rational],
        comult: &[TensorEntry],
        counit: Vec<Rational>,
        antipode: &Matrix<Rational>,
    ) -> Result<Self> {
        let check_idx = |index: usize| {
            if index < dim {
                Ok(())
            } else {
                Err(HopfError::IndexOutOfRange { index, dim })
            }
        };
        let check_len = |found: usize| {
            if found == dim {
                Ok(())
            } else {
                Err(HopfError::DimensionMismatch { expected: dim, found })
            }
        };
        check_len(unit.len())?;
        check_len(counit.len())?;
        check_len(antipode.rows())?;
        check_len(antipode.cols())?;
        let mut m = vec![Vector::new(); dim * dim];
        for (a, b, c, x) in mult {
            check_idx(*a)?;
            check_idx(*b)?;
            check_idx(*c)?;
            accumulate(&mut m[a * dim + b], *c, x.clone());
        }
        let mut d = vec![Vector2::new(); dim];
        for (a, b, c, x) in comult {
            check_idx(*a)?;
            check_idx(*b)?;
            check_idx(*c)?;
            accumulate(&mut d[*a], (*b, *c), x.clone());
        }
        let mut u = Vector::new();
        for (i, x) in unit.iter().enumerate() {
            accumulate(&mut u, i, x.clone());
        }
        let s = (0..dim)
            .map(|j| {
                let mut col = Vector::new();
                for i in 0..dim {
                    accumulate(&mut col, i, antipode.get(i, j).clone());
                }
                col
            })
            .collect();
        Ok(FDHopf {
            label: label.into(),
            dim,
            mult: m,
            unit: u,
            comult: d,
            counit,
            antipode: s,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The unit as a vector.
    pub fn unit(&self) -> &Vector {
        &self.unit
    }

    pub fn counit(&self) -> &[Rational] {
        &self.counit
    }

    /// `e_i e_j`.
    pub fn product_of_basis(&self, i: usize, j: usize) -> &Vector {
        &self.mult[i * self.dim + j]
    }

    /// `Δ(e_i)`.
    pub fn coproduct_of_basis(&self, i: usize) -> &Vector2 {
        &self.comult[i]
    }

    /// `S(e_i)`.
    pub fn antipode_of_basis(&self, i: usize) -> &Vector {
        &self.antipode[i]
    }

    pub fn antipode_matrix(&self) -> Matrix<Rational> {
        Matrix::from_fn(self.dim, self.dim, |i, j| {
            self.antipode[j].get(&i).cloned().unwrap_or_else(Rational::zero)
        })
    }

    /// Multiplication tensor entries in index order.
    pub fn mult_entries(&self) -> Vec<TensorEntry> {
        let mut out = Vec::new();
        for (ij, v) in self.mult.iter().enumerate() {
            for (&k, x) in v {
                out.push((ij / self.dim, ij % self.dim, k, x.clone()));
            }
        }
        out
    }

    /// Comultiplication tensor entries in index order.
    pub fn comult_entries(&self) -> Vec<TensorEntry> {
        let mut out = Vec::new();
        for (i, v) in self.comult.iter().enumerate() {
            for (&(j, k), x) in v {
                out.push((i, j, k, x.clone()));
            }
        }
        out
    }

    pub fn unit_vector(&self) -> Vec<Rational> {
        (0..self.dim)
            .map(|i| self.unit.get(&i).cloned().unwrap_or_else(Rational::zero))
            .collect()
    }

    /// Replaces the antipode; used to build negative controls.
    pub fn with_antipode(mut self, antipode: &Matrix<Rational>) -> Result<Self> {
        if antipode.rows() != self.dim || antipode.cols() != self.dim {
            return Err(HopfError::DimensionMismatch {
                expected: self.dim,
                found: antipode.rows(),
            });
        }
        self.antipode = (0..self.dim)
            .map(|j| {
                let mut col = Vector::new();
                for i in 0..self.dim {
                    accumulate(&mut col, i, antipode.get(i, j).clone());
                }
                col
            })
            .collect();
        self.label = format!("{} (antipode replaced)", self.label);
        Ok(self)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn multiply(&self, a: &Vector, b: &Vector) -> Vector {
        let mut out = Vector::new();
        for (&i, x) in a {
            for (&j, y) in b {
                let xy = x * y;
                for (&k, z) in self.product_of_basis(i, j) {
                    accumulate(&mut out, k, &xy * z);
                }
            }
        }
        out
    }

    pub fn comultiply(&self, a: &Vector) -> Vector2 {
        let mut out = Vector2::new();
        for (&i, x) in a {
            for (&jk, y) in &self.comult[i] {
                accumulate(&mut out, jk, x * y);
            }
        }
        out
    }

    pub fn apply_counit(&self, a: &Vector) -> Rational {
        a.iter()
            .fold(Rational::zero(), |acc, (&i, x)| acc + x * &self.counit[i])
    }

    pub fn apply_antipode(&self, a: &Vector) -> Vector {
        let mut out = Vector::new();
        for (&i, x) in a {
            for (&k, y) in &self.antipode[i] {
                accumulate(&mut out, k, x * y);
            }
        }
        out
    }

    /// Product in `H ⊗ H`: `(a ⊗ b)(c ⊗ d) = ac ⊗ bd`.
    fn multiply2(&self, lhs: &Vector2, rhs: &Vector2) -> Vector2 {
        let mut out = Vector2::new();
        for (&(a, b), x) in lhs {
            for (&(c, d), y) in rhs {
                let left = self.product_of_basis(a, c);
                if left.is_empty() {
                    continue;
                }
                let right = self.product_of_basis(b, d);
                if right.is_empty() {
                    continue;
                }
                let xy = x * y;
                for (&p, u) in left {
                    for (&q, v) in right {
                        accumulate(&mut out, (p, q), &xy * u * v);
                    }
                }
            }
        }
        out
    }

    /// `m ∘ (S ⊗ id)` (`left = true`) or `m ∘ (id ⊗ S)` applied to a tensor.
    fn antipode_convolution(&self, t: &Vector2, left: bool) -> Vector {
        let mut out = Vector::new();
        for (&(a, b), x) in t {
            let (l, r) = if left {
                (self.antipode[a].clone(), basis(b))
            } else {
                (basis(a), self.antipode[b].clone())
            };
            for (k, y) in self.multiply(&l, &r) {
                accumulate(&mut out, k, x * y);
            }
        }
        out
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.product_of_basis(i, j) == self.product_of_basis(j, i)))
    }

    pub fn is_cocommutative(&self) -> bool {
        self.comult.iter().all(|d| {
            d.iter()
                .all(|(&(a, b), x)| d.get(&(b, a)).is_some_and(|y| y == x))
        })
    }
}

fn first_failure(dim: usize, arity: usize, mut fails: impl FnMut(&[usize]) -> bool) -> Option<String> {
    let mut idx = vec![0usize; arity];
    let total = dim.checked_pow(arity as u32).unwrap_or(usize::MAX);
    for mut n in 0..total {
        for slot in idx.iter_mut().rev() {
            *slot = n % dim;
            n /= dim;
        }
        if fails(&idx) {
            let joined: Vec<String> = idx.iter().map(ToString::to_string).collect();
            return Some(if arity == 1 {
                format!("basis index {}", idx[0])
            } else {
                format!("basis indices ({})", joined.join(", "))
            });
        }
    }
    None
}

type AxiomCheck = fn(&FDHopf) -> Option<String>;

fn axiom_associativity(h: &FDHopf) -> Option<String> {
    first_failure(h.dim, 3, |ix| {
        let (i, j, k) = (ix[0], ix[1], ix[2]);
        let lhs = h.multiply(h.product_of_basis(i, j), &basis(k));
        let rhs = h.multiply(&basis(i), h.product_of_basis(j, k));
        lhs != rhs
    })
}

fn axiom_left_unit(h: &FDHopf) -> Option<String> {
    first_failure(h.dim, 1, |ix| h.multiply(&h.unit, &basis(ix[0])) != basis(ix[0]))
}

fn axiom_right_unit(h: &FDHopf) -> Option<String> {
    first_failure(h.dim, 1, |ix| h.multiply(&basis(ix[0]), &h.unit) != basis(ix[0]))
}

fn axiom_coassociativity(h: &FDHopf) -> Option<String> {
    first_failure(h.dim, 1, |ix| {
        let d = &h.comult[ix[0]];
        let mut lhs = Vector3::new();
        let mut rhs = Vector3::new();
        for (&(a, b), x) in d {
            for (&(p, q), y) in &h.comult[a] {
                accumulate(&mut lhs, (p, q, b), x * y);
            }
            for (&(p, q), y) in &h.comult[b] {
                accumulate(&mut rhs, (a, p, q), x * y);
            }
        }
        lhs != rhs
    })
}

fn axiom_left_counit(h: &FDHopf) -> Option<String> {
    first_failure(h.dim, 1, |ix| {
        let mut out = Vector::new();
        for (&(a, b), x) in &h.comult[ix[0]] {
            accumulate(&mut out, b, x * &h.counit[a]);
        }
        out != basis(ix[0])
    })
}

fn axiom_right_counit(h: &FDHopf) -> Option<String> {
    first_failure(h.dim, 1, |ix| {
        let mut out = Vector::new();
        for (&(a, b), x) in &h.comult[ix[0]] {
            accumulate(&mut out, a, x * &h.counit[b]);
        }
        out != basis(ix[0])
    })
}

fn axiom_comult_multiplicative(h: &FDHopf) -> Option<String> {
    first_failure(h.dim, 2, |ix| {
        let lhs = h.comultiply(h.product_of_basis(ix[0], ix[1]));
        let rhs = h.multiply2(&h.comult[ix[0]], &h.comult[ix[1]]);
        lhs != rhs
    })
}

fn axiom_comult_unital(h: &FDHopf) -> Option<String> {
    let lhs = h.comultiply(&h.unit);
    let mut rhs = Vector2::new();
    for (&a, x) in &h.unit {
        for (&b, y) in &h.unit {
            accumulate(&mut rhs, (a, b), x * y);
        }
    }
    (lhs != rhs).then(|| "Δ(1) ≠ 1 ⊗ 1".to_string())
}

fn axiom_counit_multiplicative(h: &FDHopf) -> Option<String> {
    first_failure(h.dim, 2, |ix| {
        h.apply_counit(h.product_of_basis(ix[0], ix[1])) != &h.counit[ix[0]] * &h.counit[ix[1]]
    })
}

fn axiom_counit_unital(h: &FDHopf) -> Option<String> {
    let e = h.apply_counit(&h.unit);
    (!e.is_one()).then(|| format!("ε(1) = {e}"))
}

fn axiom_antipode_left(h: &FDHopf) -> Option<String> {
    first_failure(h.dim, 1, |ix| {
        h.antipode_convolution(&h.comult[ix[0]], true) != scaled(&h.unit, &h.counit[ix[0]])
    })
}

fn axiom_antipode_right(h: &FDHopf) -> Option<String> {
    first_failure(h.dim, 1, |ix| {
        h.antipode_convolution(&h.comult[ix[0]], false) != scaled(&h.unit, &h.counit[ix[0]])
    })
}

const AXIOMS: [(&str, AxiomCheck); 12] = [
    ("associativity", axiom_associativity),
    ("left unit", axiom_left_unit),
    ("right unit", axiom_right_unit),
    ("coassociativity", axiom_coassociativity),
    ("left counit", axiom_left_counit),
    ("right counit", axiom_right_counit),
    ("comultiplication is multiplicative", axiom_comult_multiplicative),
    ("comultiplication is unital", axiom_comult_unital),
    ("counit is multiplicative", axiom_counit_multiplicative),
    ("counit is unital", axiom_counit_unital),
    ("antipode left identity", axiom_antipode_left),
    ("antipode right identity", axiom_antipode_right),
];

/// Verifies every Hopf axiom exactly; one record per axiom.
pub fn check_hopf_axioms(h: &FDHopf) -> Report {
    let records: Vec<CheckRecord> = AXIOMS
        .par_iter()
        .map(|(name, check)| CheckRecord::from_witness(*name, anchors::HOPF_AXIOMS, check(h)))
        .collect();
    let mut report = Report::new(format!("Hopf axioms for {} (dim {})", h.label, h.dim));
    report.extend(records);
    report
}

fn require_axioms(h: &FDHopf) -> Result<()> {
    let report = check_hopf_axioms(h);
    if report.passed() {
        return Ok(());
    }
    let failed: Vec<String> = report
        .failures()
        .map(|r| format!("{} ({})", r.check, r.witness.clone().unwrap_or_default()))
        .collect();
    Err(HopfError::AxiomFailure(format!("{}: {}", h.label, failed.join("; "))))
}

/// `C[G]`: basis `G`, `m(g, h) = gh`, `Δg = g ⊗ g`, `ε(g) = 1`, `S(g) = g⁻¹`.
pub fn group_algebra_hopf(g: &FiniteGroup) -> FDHopf {
    let n = g.order();
    let one = Rational::one();
    let mult = (0..n * n).map(|ij| basis(g.mul(ij / n, ij % n))).collect();
    let comult = (0..n)
        .map(|i| BTreeMap::from([((i, i), one.clone())]))
        .collect();
    FDHopf {
        label: format!("C[{}]", g.name()),
        dim: n,
        mult,
        unit: basis(g.identity()),
        comult,
        counit: vec![one; n],
        antipode: (0..n).map(|i| basis(g.inverse(i))).collect(),
    }
}

/// `C^G`: basis `δ_g`, pointwise product, `Δδ_g = Σ_{xy=g} δ_x ⊗ δ_y`,
/// `ε(δ_g) = [g = e]`, `S(δ_g) = δ_{g⁻¹}`.
pub fn function_algebra_hopf(g: &FiniteGroup) -> FDHopf {
    let n = g.order();
    let one = Rational::one();
    let mult = (0..n * n)
        .map(|ij| {
            let (i, j) = (ij / n, ij % n);
            if i == j {
                basis(i)
            } else {
                Vector::new()
            }
        })
        .collect();
    let mut comult = vec![Vector2::new(); n];
    for x in 0..n {
        for y in 0..n {
            comult[g.mul(x, y)].insert((x, y), one.clone());
        }
    }
    FDHopf {
        label: format!("C^{}", g.name()),
        dim: n,
        mult,
        unit: (0..n).map(|i| (i, one.clone())).collect(),
        comult,
        counit: (0..n)
            .map(|i| if i == g.identity() { one.clone() } else { Rational::zero() })
            .collect(),
        antipode: (0..n).map(|i| basis(g.inverse(i))).collect(),
    }
}

/// The dual Hopf algebra without re-checking axioms.
fn dual_unchecked(h: &FDHopf) -> FDHopf {
    let n = h.dim;
    let mut mult = vec![Vector::new(); n * n];
    for (i, d) in h.comult.iter().enumerate() {
        for (&(j, k), x) in d {
            accumulate(&mut mult[j * n + k], i, x.clone());
        }
    }
    let mut comult = vec![Vector2::new(); n];
    for (ij, v) in h.mult.iter().enumerate() {
        for (&k, x) in v {
            accumulate(&mut comult[k], (ij / n, ij % n), x.clone());
        }
    }
    let mut antipode = vec![Vector::new(); n];
    for (j, col) in h.antipode.iter().enumerate() {
        for (&i, x) in col {
            accumulate(&mut antipode[i], j, x.clone());
        }
    }
    let mut unit = Vector::new();
    for (i, x) in h.counit.iter().enumerate() {
        accumulate(&mut unit, i, x.clone());
    }
    FDHopf {
        label: format!("({})'", h.label),
        dim: n,
        mult,
        unit,
        comult,
        counit: h.unit_vector(),
        antipode,
    }
}

/// Dual Hopf algebra on the dual basis: multiplication is the transposed
/// comultiplication and vice versa, unit and counit swap, antipode transposes.
pub fn dual_hopf(h: &FDHopf) -> Result<FDHopf> {
    require_axioms(h)?;
    Ok(dual_unchecked(h))
}

/// A linear map between Hopf algebras, `matrix` is `dim(target) × dim(source)`.
#[derive(Clone, PartialEq, Debug)]
pub struct HopfMap {
    source: Arc<FDHopf>,
    target: Arc<FDHopf>,
    matrix: Matrix<Rational>,
}

impl HopfMap {
    pub fn new(source: Arc<FDHopf>, target: Arc<FDHopf>, matrix: Matrix<Rational>) -> Result<Self> {
        if matrix.rows() != target.dim {
            return Err(HopfError::DimensionMismatch {
                expected: target.dim,
                found: matrix.rows(),
            });
        }
        if matrix.cols() != source.dim {
            return Err(HopfError::DimensionMismatch {
                expected: source.dim,
                found: matrix.cols(),
            });
        }
        Ok(HopfMap { source, target, matrix })
    }

    pub fn identity(h: Arc<FDHopf>) -> Self {
        let n = h.dim;
        HopfMap {
            source: Arc::clone(&h),
            target: h,
            matrix: Matrix::identity(n),
        }
    }

    pub fn source(&self) -> &Arc<FDHopf> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FDHopf> {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix<Rational> {
        &self.matrix
    }

    fn columns(&self) -> Vec<Vector> {
        (0..self.matrix.cols())
            .map(|j| {
                let mut col = Vector::new();
                for i in 0..self.matrix.rows() {
                    accumulate(&mut col, i, self.matrix.get(i, j).clone());
                }
                col
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.source.dim
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.target.dim
    }

    /// Each morphism law with a witness on failure.
    pub fn morphism_checks(&self) -> Vec<(&'static str, Option<String>)> {
        let cols = self.columns();
        let s = &self.source;
        let t = &self.target;
        let apply = |v: &Vector| -> Vector {
            let mut out = Vector::new();
            for (&i, x) in v {
                for (&k, y) in &cols[i] {
                    accumulate(&mut out, k, x * y);
                }
            }
            out
        };
        let apply2 = |v: &Vector2| -> Vector2 {
            let mut out = Vector2::new();
            for (&(a, b), x) in v {
                for (&p, y) in &cols[a] {
                    for (&q, z) in &cols[b] {
                        accumulate(&mut out, (p, q), x * y * z);
                    }
                }
            }
            out
        };
        let n = s.dim;
        let mult = first_failure(n, 2, |ix| {
            apply(s.product_of_basis(ix[0], ix[1])) != t.multiply(&cols[ix[0]], &cols[ix[1]])
        });
        let unit = (apply(&s.unit) != t.unit).then(|| "f(1) ≠ 1".to_string());
        let comult = first_failure(n, 1, |ix| t.comultiply(&cols[ix[0]]) != apply2(&s.comult[ix[0]]));
        let counit = first_failure(n, 1, |ix| t.apply_counit(&cols[ix[0]]) != s.counit[ix[0]]);
        let antipode = first_failure(n, 1, |ix| {
            apply(&s.antipode[ix[0]]) != t.apply_antipode(&cols[ix[0]])
        });
        vec![
            ("preserves multiplication", mult),
            ("preserves unit", unit),
            ("preserves comultiplication", comult),
            ("preserves counit", counit),
            ("commutes with antipode", antipode),
        ]
    }
}

pub fn is_hopf_morphism(f: &HopfMap) -> bool {
    f.morphism_checks().iter().all(|(_, w)| w.is_none())
}

pub fn is_hopf_isomorphism(f: &HopfMap) -> bool {
    f.source.dim == f.target.dim && f.is_injective() && is_hopf_morphism(f)
}

/// `H → H''` by evaluation; the identity matrix on the double-dual basis.
pub fn double_dual_canonical(h: &FDHopf) -> Result<HopfMap> {
    let dual = dual_hopf(h)?;
    let double = dual_hopf(&dual)?.with_label(format!("({})''", h.label));
    HopfMap::new(Arc::new(h.clone()), Arc::new(double), Matrix::identity(h.dim))
}

/// `C^G → (C[G])'` sending `δ_h` to the functional `g ↦ δ_h(g)`: the matrix of
/// the canonical evaluation pairing.
pub fn evaluation_pairing_map(g: &FiniteGroup) -> Result<HopfMap> {
    let functions = function_algebra_hopf(g);
    let dual = dual_hopf(&group_algebra_hopf(g))?;
    let n = g.order();
    let pairing = Matrix::from_fn(n, n, |row, col| {
        if row == col {
            Rational::one()
        } else {
            Rational::zero()
        }
    });
    HopfMap::new(Arc::new(functions), Arc::new(dual), pairing)
}

/// The algebra characters of `C[G]` for abelian `G`: `χ(g) = ζ(<g, χ>)`,
/// indexed by the characters of `G` in lexicographic order.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    group: FiniteAbelianGroup,
    points: Vec<Vec<Cyclotomic>>,
}

pub fn spectrum_abelian_group_algebra(g: &FiniteAbelianGroup) -> Spectrum {
    let dual = dual_group(g);
    let e = g.exponent();
    let roots = Cyclotomic::roots_of_unity(e).expect("exponent within conductor cap");
    let points = dual
        .characters()
        .map(|chi| {
            g.elements()
                .map(|x| {
                    let q = pair(g, &x, &chi).expect("same group");
                    debug_assert_eq!(zeta(q).ok().as_ref(), Some(&roots[(q.numerator() * (e / q.denominator())) as usize]));
                    roots[(q.numerator() * (e / q.denominator())) as usize].clone()
                })
                .collect()
        })
        .collect();
    Spectrum {
        group: g.clone(),
        points,
    }
}

/// Spectrum of the group algebra of an enumerated finite group; rejects
/// non-abelian input.
pub fn spectrum_of_group(g: &FiniteGroup) -> Result<Spectrum> {
    if !g.is_abelian() {
        return Err(HopfError::NonAbelian);
    }
    let a = g.abelian_structure().ok_or(HopfError::NoAbelianStructure)?;
    Ok(spectrum_abelian_group_algebra(a))
}

impl Spectrum {
    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Covector of the spectrum point indexed by character `chi`.
    pub fn point(&self, chi: usize) -> &[Cyclotomic] {
        &self.points[chi]
    }

    pub fn points(&self) -> &[Vec<Cyclotomic>] {
        &self.points
    }

    /// Checks, against the structure tensors of `C[G]`, that every point is a
    /// unital multiplicative functional, that the points are distinct and
    /// linearly independent, and that pointwise products match addition in
    /// the dual group.
    ///
    /// When every value is found in a table of `e`-th roots of unity the
    /// comparisons run on exponents mod `e`; otherwise in `Q(ζ_e)` directly.
    pub fn verify(&self) -> Report {
        let algebra = group_algebra_hopf(&FiniteGroup::abelian(&self.group));
        let checks = match self.exponent_table() {
            Some(table) => self.checks_on_exponents(&algebra, &table),
            None => self.checks_exact(&algebra),
        };
        let n = self.points.len();
        let mut report = Report::new(format!("spectrum of C[{}]", self.group));
        report.push(CheckRecord::new(
            "spectrum size equals group order",
            anchors::SPECTRUM,
            n as u64 == self.group.order(),
        ));
        report.push(CheckRecord::from_witness("points are unital", anchors::SPECTRUM, checks.unital));
        report.push(CheckRecord::from_witness(
            "points are multiplicative",
            anchors::SPECTRUM,
            checks.multiplicative,
        ));
        report.push(CheckRecord::from_witness("points are distinct", anchors::SPECTRUM, checks.distinct));
        report.push(CheckRecord::from_witness(
            "points are linearly independent",
            anchors::SPECTRUM,
            checks.independent,
        ));
        report.push(CheckRecord::from_witness(
            "pointwise product matches the dual group law",
            anchors::SPECTRUM,
            checks.group_law,
        ));
        report
    }

    /// `table[χ][x] = k` with `χ(x) = ζ_e^k`, `e` the exponent of the group,
    /// looked up by exact equality; `None` if some value is not such a root.
    pub fn exponent_table(&self) -> Option<Vec<Vec<u64>>> {
        let e = self.group.exponent();
        let roots = Cyclotomic::roots_of_unity(e).ok()?;
        let index: HashMap<(u64, &[Rational]), u64> = roots
            .iter()
            .enumerate()
            .map(|(k, r)| ((r.conductor(), r.coeffs()), k as u64))
            .collect();
        let lookup = |v: &Cyclotomic| {
            index
                .get(&(v.conductor(), v.coeffs()))
                .copied()
                .or_else(|| roots.iter().position(|r| r == v).map(|k| k as u64))
        };
        self.points
            .par_iter()
            .map(|chi| chi.iter().map(lookup).collect::<Option<Vec<u64>>>())
            .collect()
    }

    fn unital(&self, algebra: &FDHopf) -> Option<String> {
        self.points.iter().enumerate().find_map(|(c, chi)| {
            (evaluate(chi, algebra.unit()) != Cyclotomic::one()).then(|| format!("character {c}: χ(1) ≠ 1"))
        })
    }

    fn distinct(&self, same: impl Fn(usize, usize) -> bool) -> Option<String> {
        let n = self.points.len();
        (0..n)
            .flat_map(|a| (0..a).map(move |b| (a, b)))
            .find(|&(a, b)| same(a, b))
            .map(|(a, b)| format!("characters {a} and {b} coincide"))
    }

    fn group_law(&self, fails: impl Fn(usize, usize, usize) -> bool + Sync) -> Option<String> {
        let n = self.points.len();
        let dual = dual_group(&self.group);
        let dual = dual.underlying();
        (0..n * n).into_par_iter().find_map_first(|ab| {
            let (a, b) = (ab / n, ab % n);
            let sum = dual.index_of(&dual.add(&dual.element_at(a), &dual.element_at(b)));
            fails(a, b, sum).then(|| format!("χ_{a} · χ_{b} ≠ χ_{sum}"))
        })
    }

    fn exact_independence(&self) -> Option<String> {
        let n = self.points.len();
        let rank = Matrix::from_rows(self.points.clone()).rank();
        (rank != n).then(|| format!("rank {rank} < {n}"))
    }

    fn checks_exact(&self, algebra: &FDHopf) -> SpectrumChecks {
        let n = self.points.len();
        let multiplicative = self.points.par_iter().enumerate().find_map_first(|(c, chi)| {
            first_failure(n, 2, |ix| {
                evaluate(chi, algebra.product_of_basis(ix[0], ix[1])) != &chi[ix[0]] * &chi[ix[1]]
            })
            .map(|w| format!("character {c}: {w}"))
        });
        SpectrumChecks {
            unital: self.unital(algebra),
            multiplicative,
            distinct: self.distinct(|a, b| self.points[a] == self.points[b]),
            independent: self.exact_independence(),
            group_law: self.group_law(|a, b, sum| {
                self.points[a]
                    .iter()
                    .zip(&self.points[b])
                    .zip(&self.points[sum])
                    .any(|((x, y), z)| &(x * y) != z)
            }),
        }
    }

    fn checks_on_exponents(&self, algebra: &FDHopf, table: &[Vec<u64>]) -> SpectrumChecks {
        let n = self.points.len();
        let e = self.group.exponent();
        let multiplicative = self.points.par_iter().enumerate().find_map_first(|(c, chi)| {
            let row = &table[c];
            first_failure(n, 2, |ix| {
                let (i, j) = (ix[0], ix[1]);
                match single_basis_vector(algebra.product_of_basis(i, j)) {
                    Some(k) => row[k] != (row[i] + row[j]) % e,
                    None => evaluate(chi, algebra.product_of_basis(i, j)) != &chi[i] * &chi[j],
                }
            })
            .map(|w| format!("character {c}: {w}"))
        });
        // reduction modulo a prime above p can only lower the rank
        let independent = if rank_mod_prime(table, e) == n {
            None
        } else {
            self.exact_independence()
        };
        SpectrumChecks {
            unital: self.unital(algebra),
            multiplicative,
            distinct: self.distinct(|a, b| table[a] == table[b]),
            independent,
            group_law: self.group_law(|a, b, sum| {
                (0..n).any(|x| (table[a][x] + table[b][x]) % e != table[sum][x])
            }),
        }
    }
}

struct SpectrumChecks {
    unital: Option<String>,
    multiplicative: Option<String>,
    distinct: Option<String>,
    independent: Option<String>,
    group_law: Option<String>,
}

fn evaluate(chi: &[Cyclotomic], v: &Vector) -> Cyclotomic {
    v.iter()
        .fold(Cyclotomic::zero(), |acc, (&k, x)| &acc + &chi[k].scale(x))
}

/// `Some(k)` iff `v = e_k`.
fn single_basis_vector(v: &Vector) -> Option<usize> {
    match v.iter().next() {
        Some((&k, x)) if v.len() == 1 && x.is_one() => Some(k),
        _ => None,
    }
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rank over `F_p` of the matrix `(w^table[i][j])`, for the least prime
/// `p ≡ 1 (mod e)` and `w` of multiplicative order `e`.
fn rank_mod_prime(table: &[Vec<u64>], e: u64) -> usize {
    let p = (1..)
        .map(|k| k * e + 1)
        .find(|&p| p > 2 && crate::towers::is_prime(p))
        .expect("Dirichlet");
    assert!(p < 1 << 32, "modulus too large for u64 products");
    let divisors = prime_divisors(e);
    let w = (2..p)
        .map(|g| pow_mod(g, (p - 1) / e, p))
        .find(|&h| divisors.iter().all(|&q| pow_mod(h, e / q, p) != 1))
        .expect("F_p^* is cyclic");
    let powers: Vec<u64> = (0..e).map(|k| pow_mod(w, k, p)).collect();
    let mut m: Vec<Vec<u64>> = table
        .iter()
        .map(|row| row.iter().map(|&k| powers[k as usize]).collect())
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = pow_mod(m[rank][col], p - 2, p);
        let pivot_row: Vec<u64> = m[rank].iter().map(|&x| x * inv % p).collect();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let f = row[col];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        m[rank] = pivot_row;
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn int(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    #[test]
    fn small_antipodes() {
        let z2 = group_algebra_hopf(&FiniteGroup::cyclic(2).unwrap());
        assert!(z2.antipode_matrix().is_identity());
        let z3 = group_algebra_hopf(&FiniteGroup::cyclic(3).unwrap());
        let s = z3.antipode_matrix();
        assert_eq!(*s.get(0, 0), int(1));
        assert_eq!(*s.get(2, 1), int(1));
        assert_eq!(*s.get(1, 2), int(1));
        assert_eq!(*s.get(1, 1), int(0));
    }

    #[test]
    fn function_algebra_of_z2() {
        let h = function_algebra_hopf(&FiniteGroup::cyclic(2).unwrap());
        let d0 = h.coproduct_of_basis(0);
        assert_eq!(d0.len(), 2);
        assert_eq!(d0[&(0, 0)], int(1));
        assert_eq!(d0[&(1, 1)], int(1));
        assert_eq!(h.unit_vector(), vec![int(1), int(1)]);
    }

    #[test]
    fn symmetry_of_s3_algebras() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let ga = group_algebra_hopf(&s3);
        assert_eq!(ga.dim(), 6);
        assert!(!ga.is_commutative());
        assert!(ga.is_cocommutative());
        let fa = function_algebra_hopf(&s3);
        assert!(fa.is_commutative());
        assert!(!fa.is_cocommutative());
    }

    #[test]
    fn corrupted_antipode_is_caught() {
        let h = group_algebra_hopf(&FiniteGroup::cyclic(4).unwrap())
            .with_antipode(&Matrix::identity(4))
            .unwrap();
        let report = check_hopf_axioms(&h);
        assert!(!report.passed());
        let failing: Vec<_> = report.failures().collect();
        assert!(failing.iter().all(|r| r.check.starts_with("antipode")));
        assert_eq!(failing[0].witness.as_deref(), Some("basis index 1"));
        assert!(matches!(dual_hopf(&h), Err(HopfError::AxiomFailure(_))));
    }

    #[test]
    fn morphism_examples() {
        let h = Arc::new(group_algebra_hopf(&FiniteGroup::cyclic(4).unwrap()));
        assert!(is_hopf_isomorphism(&HopfMap::identity(Arc::clone(&h))));
        let zero = HopfMap::new(Arc::clone(&h), Arc::clone(&h), Matrix::zeros(4, 4)).unwrap();
        assert!(!is_hopf_morphism(&zero));
        let z2 = Arc::new(group_algebra_hopf(&FiniteGroup::cyclic(2).unwrap()));
        let quotient = Matrix::from_fn(2, 4, |i, j| if j % 2 == i { int(1) } else { int(0) });
        let q = HopfMap::new(h, z2, quotient).unwrap();
        assert!(is_hopf_morphism(&q));
        assert!(q.is_surjective());
        assert!(!is_hopf_isomorphism(&q));
    }

    #[test]
    fn dual_of_commutative_is_cocommutative() {
        let fa = function_algebra_hopf(&FiniteGroup::dihedral(3).unwrap());
        let d = dual_hopf(&fa).unwrap();
        assert!(d.is_cocommutative());
        assert_eq!(d.dim(), fa.dim());
    }

    #[test]
    fn trivial_double_dual() {
        let h = group_algebra_hopf(&FiniteGroup::trivial());
        let dd = double_dual_canonical(&h).unwrap();
        assert!(dd.matrix().is_identity());
        assert!(is_hopf_isomorphism(&dd));
    }

    #[test]
    fn spectra_of_small_groups() {
        let z2 = FiniteAbelianGroup::cyclic(2).unwrap();
        let s = spectrum_abelian_group_algebra(&z2);
        assert_eq!(s.point(0), &[Cyclotomic::one(), Cyclotomic::one()]);
        assert_eq!(s.point(1), &[Cyclotomic::one(), Cyclotomic::from_integer(-1)]);
        assert!(s.verify().passed());
        assert_eq!(
            spectrum_of_group(&FiniteGroup::symmetric(3).unwrap()),
            Err(HopfError::NonAbelian)
        );
    }

    fn both_paths(s: &Spectrum) -> (Vec<Option<String>>, Vec<Option<String>>) {
        let algebra = group_algebra_hopf(&FiniteGroup::abelian(&s.group));
        let flat = |c: SpectrumChecks| vec![c.unital, c.multiplicative, c.distinct, c.independent, c.group_law];
        let fast = flat(s.checks_on_exponents(&algebra, &s.exponent_table().expect("roots of unity")));
        (fast, flat(s.checks_exact(&algebra)))
    }

    #[test]
    fn exponent_path_agrees_with_exact_path() {
        for orders in [vec![4], vec![2, 2], vec![6], vec![2, 4], vec![3, 3]] {
            let g = FiniteAbelianGroup::from_cyclic_orders(&orders).unwrap();
            let good = spectrum_abelian_group_algebra(&g);
            let (fast, exact) = both_paths(&good);
            assert_eq!(fast, exact);
            assert!(fast.iter().all(Option::is_none), "{orders:?}");

            // repeating a point breaks distinctness, independence and the group law
            let mut repeated = good.clone();
            repeated.points[1] = repeated.points[0].clone();
            let (fast, exact) = both_paths(&repeated);
            assert_eq!(fast, exact);
            assert!(fast[2].is_some() && fast[3].is_some() && fast[4].is_some());

            // still roots of unity, no longer multiplicative
            let mut scrambled = good.clone();
            let zeta = Cyclotomic::root_of_unity_power(g.exponent(), 1).unwrap();
            scrambled.points[1][1] = &scrambled.points[1][1] * &zeta;
            let (fast, exact) = both_paths(&scrambled);
            assert_eq!(fast, exact);
            assert!(fast[1].is_some(), "{orders:?}");
        }
    }

    #[test]
    fn values_off_the_root_table_use_the_exact_path() {
        let g = FiniteAbelianGroup::cyclic(3).unwrap();
        let mut s = spectrum_abelian_group_algebra(&g);
        s.points[2][1] = Cyclotomic::from_integer(2);
        assert!(s.exponent_table().is_none());
        let r = s.verify();
        assert!(!r.passed());
        assert!(r.records_named("points are multiplicative").all(|c| !c.passed));
    }

    #[test]
    fn rank_modulo_prime() {
        // character table of Z/4 in exponents of i
        let table: Vec<Vec<u64>> = (0..4).map(|a| (0..4).map(|x| a * x % 4).collect()).collect();
        assert_eq!(rank_mod_prime(&table, 4), 4);
        let singular = vec![table[0].clone(), table[1].clone(), table[1].clone(), table[3].clone()];
        assert_eq!(rank_mod_prime(&singular, 4), 3);
        assert_eq!(rank_mod_prime(&[vec![0]], 1), 1);
        assert_eq!(prime_divisors(360), vec![2, 3, 5]);
        assert_eq!(pow_mod(3, 4, 5), 1);
    }
}
