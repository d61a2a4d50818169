//! Finite abelian groups in invariant-factor form.
//!
//! A group is stored as its chain of invariant factors `d_1 | d_2 | … | d_k`
//! (each `d_i ≥ 2`), an element as a coordinate vector with `0 ≤ g_j < d_j`.
//! The dual group carries the same invariant factors; what makes it the dual
//! is the pairing
//!
//! ```text
//! <g, χ> = Σ_j g_j χ_j / d_j   (mod 1)
//! ```
//!
//! with values in Q/Z. Complex character values are `ζ(<g, χ>)`, available
//! exactly through [`crate::cyclo::zeta`].

mod snf;

use std::fmt;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use snf::{smith_normal_form, IntMatrix, SmithForm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FinabError {
    #[error("invariant factor {value} at position {position} is smaller than 2")]
    FactorTooSmall { position: usize, value: u64 },
    #[error("invariant factors {prev} and {next} violate the divisibility chain")]
    NotDivisibilityChain { prev: u64, next: u64 },
    #[error("presentation has infinite cokernel")]
    InfiniteCokernel,
    #[error("expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("coordinate {position} = {value} is out of range for Z/{modulus}")]
    CoordinateOutOfRange {
        position: usize,
        value: u64,
        modulus: u64,
    },
    #[error("entry ({row}, {col}) = {value} does not give a homomorphism Z/{source_factor} -> Z/{target_factor}")]
    NotAHomomorphism {
        row: usize,
        col: usize,
        value: u64,
        source_factor: u64,
        target_factor: u64,
    },
    #[error("homomorphisms are not composable")]
    NotComposable,
    #[error("group order overflows u64")]
    OrderOverflow,
}

pub type Result<T> = std::result::Result<T, FinabError>;

/// A finite abelian group `Z/d_1 ⊕ … ⊕ Z/d_k` with `d_i | d_{i+1}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct FiniteAbelianGroup {
    invariant_factors: Vec<u64>,
}

impl FiniteAbelianGroup {
    /// Validates an invariant-factor chain.
    pub fn new(invariant_factors: Vec<u64>) -> Result<Self> {
        for (position, &value) in invariant_factors.iter().enumerate() {
            if value < 2 {
                return Err(FinabError::FactorTooSmall { position, value });
            }
        }
        for w in invariant_factors.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(FinabError::NotDivisibilityChain {
                    prev: w[0],
                    next: w[1],
                });
            }
        }
        invariant_factors
            .iter()
            .try_fold(1u64, |acc, &d| acc.checked_mul(d))
            .ok_or(FinabError::OrderOverflow)?;
        Ok(FiniteAbelianGroup { invariant_factors })
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup {
            invariant_factors: Vec::new(),
        }
    }

    /// `Z/n`; `n = 1` (or 0 is rejected) gives the trivial group.
    pub fn cyclic(n: u64) -> Result<Self> {
        match n {
            0 => Err(FinabError::InfiniteCokernel),
            1 => Ok(Self::trivial()),
            _ => Self::new(vec![n]),
        }
    }

    /// `Z/n_1 ⊕ … ⊕ Z/n_r` for arbitrary positive orders, normalized.
    pub fn from_cyclic_orders(orders: &[u64]) -> Result<Self> {
        let diag: Vec<i64> = orders
            .iter()
            .map(|&n| i64::try_from(n).map_err(|_| FinabError::OrderOverflow))
            .collect::<Result<_>>()?;
        from_presentation(&IntMatrix::diagonal(&diag))
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    /// Number of cyclic factors.
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    /// Largest invariant factor, 1 for the trivial group.
    pub fn exponent(&self) -> u64 {
        self.invariant_factors.last().copied().unwrap_or(1)
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn zero(&self) -> Element {
        Element {
            coords: vec![0; self.rank()],
        }
    }

    /// Validated element constructor.
    pub fn element(&self, coords: Vec<u64>) -> Result<Element> {
        self.check_len(coords.len())?;
        for (position, (&value, &modulus)) in coords.iter().zip(&self.invariant_factors).enumerate() {
            if value >= modulus {
                return Err(FinabError::CoordinateOutOfRange {
                    position,
                    value,
                    modulus,
                });
            }
        }
        Ok(Element { coords })
    }

    /// Element from arbitrary integer coordinates, reduced into range.
    pub fn element_reduced(&self, coords: &[i64]) -> Result<Element> {
        self.check_len(coords.len())?;
        Ok(Element {
            coords: coords
                .iter()
                .zip(&self.invariant_factors)
                .map(|(&c, &d)| c.rem_euclid(d as i64) as u64)
                .collect(),
        })
    }

    pub fn contains(&self, g: &Element) -> bool {
        g.coords.len() == self.rank()
            && g.coords.iter().zip(&self.invariant_factors).all(|(c, d)| c < d)
    }

    pub fn add(&self, a: &Element, b: &Element) -> Element {
        Element {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .zip(&self.invariant_factors)
                .map(|((x, y), d)| (x + y) % d)
                .collect(),
        }
    }

    pub fn neg(&self, a: &Element) -> Element {
        Element {
            coords: a
                .coords
                .iter()
                .zip(&self.invariant_factors)
                .map(|(x, d)| (d - x) % d)
                .collect(),
        }
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Element {
        self.add(a, &self.neg(b))
    }

    /// Order of an element.
    pub fn element_order(&self, a: &Element) -> u64 {
        a.coords
            .iter()
            .zip(&self.invariant_factors)
            .map(|(&x, &d)| d / x.gcd(&d))
            .fold(1, |acc, o| acc.lcm(&o))
    }

    /// Position of `g` in the lexicographic enumeration (first coordinate
    /// most significant).
    pub fn index_of(&self, g: &Element) -> usize {
        g.coords
            .iter()
            .zip(&self.invariant_factors)
            .fold(0usize, |acc, (&c, &d)| acc * d as usize + c as usize)
    }

    /// Inverse of [`FiniteAbelianGroup::index_of`]. Panics if out of range.
    pub fn element_at(&self, mut index: usize) -> Element {
        assert!(index < self.order() as usize, "element index out of range");
        let mut coords = vec![0; self.rank()];
        for (c, &d) in coords.iter_mut().zip(&self.invariant_factors).rev() {
            *c = (index % d as usize) as u64;
            index /= d as usize;
        }
        Element { coords }
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order() as usize).map(move |i| self.element_at(i))
    }

    fn check_len(&self, found: usize) -> Result<()> {
        if found == self.rank() {
            Ok(())
        } else {
            Err(FinabError::DimensionMismatch {
                expected: self.rank(),
                found,
            })
        }
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .invariant_factors
            .iter()
            .map(|d| format!("Z/{d}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Group element by coordinates in the invariant-factor decomposition.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Element {
    coords: Vec<u64>,
}

impl Element {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

/// Cokernel of the integer matrix `relations`: rows index generators, columns
/// index relations.
pub fn from_presentation(relations: &IntMatrix) -> Result<FiniteAbelianGroup> {
    if relations.cols() < relations.rows() {
        return Err(FinabError::InfiniteCokernel);
    }
    let smith = smith_normal_form(relations);
    let mut factors = Vec::new();
    for d in smith.invariants() {
        if d.is_zero() {
            return Err(FinabError::InfiniteCokernel);
        }
        if !d.is_one() {
            factors.push(d.to_u64().ok_or(FinabError::OrderOverflow)?);
        }
    }
    FiniteAbelianGroup::new(factors)
}

/// An element of Q/Z as a reduced fraction `num/den` with `0 ≤ num < den`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct QmodZ {
    num: u64,
    den: u64,
}

impl QmodZ {
    pub const ZERO: QmodZ = QmodZ { num: 0, den: 1 };

    /// `p/q mod 1`. Panics if `q == 0`.
    pub fn new(p: i64, q: u64) -> Self {
        assert!(q > 0, "zero denominator");
        let r = i128::from(p).rem_euclid(i128::from(q)) as u64;
        let g = r.gcd(&q);
        QmodZ {
            num: r / g,
            den: q / g,
        }
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn add(self, other: QmodZ) -> QmodZ {
        let den = self.den.lcm(&other.den);
        let a = u128::from(self.num) * u128::from(den / self.den);
        let b = u128::from(other.num) * u128::from(den / other.den);
        let r = ((a + b) % u128::from(den)) as u64;
        let g = r.gcd(&den);
        QmodZ {
            num: r / g,
            den: den / g,
        }
    }

    pub fn neg(self) -> QmodZ {
        QmodZ::new(-(self.num as i64), self.den)
    }

    pub fn sub(self, other: QmodZ) -> QmodZ {
        self.add(other.neg())
    }
}

impl fmt::Display for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl Serialize for QmodZ {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The character group of a finite abelian group. Its coordinates live in the
/// same invariant factors; they are only meaningful through [`pair`].
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct DualGroup {
    underlying: FiniteAbelianGroup,
}

impl DualGroup {
    /// The dual viewed as a plain finite abelian group.
    pub fn underlying(&self) -> &FiniteAbelianGroup {
        &self.underlying
    }

    pub fn into_underlying(self) -> FiniteAbelianGroup {
        self.underlying
    }

    pub fn order(&self) -> u64 {
        self.underlying.order()
    }

    /// `<g, χ>` for `g` in the primal group and `χ` in this dual.
    pub fn pair(&self, g: &Element, chi: &Element) -> Result<QmodZ> {
        pair(&self.underlying, g, chi)
    }

    /// Characters in lexicographic coordinate order.
    pub fn characters(&self) -> impl Iterator<Item = Element> + '_ {
        self.underlying.elements()
    }
}

pub fn dual_group(g: &FiniteAbelianGroup) -> DualGroup {
    DualGroup {
        underlying: g.clone(),
    }
}

/// `Σ_j g_j χ_j / d_j mod 1`.
pub fn pair(group: &FiniteAbelianGroup, g: &Element, chi: &Element) -> Result<QmodZ> {
    let e = group.exponent();
    Ok(QmodZ::new(pair_scaled(group, g, chi)? as i64, e))
}

/// The pairing as an integer `r` with `<g, χ> = r / exponent(G)`.
pub fn pair_scaled(group: &FiniteAbelianGroup, g: &Element, chi: &Element) -> Result<u64> {
    group.check_len(g.coords.len())?;
    group.check_len(chi.coords.len())?;
    let e = u128::from(group.exponent());
    let mut acc: u128 = 0;
    for ((&x, &y), &d) in g.coords.iter().zip(&chi.coords).zip(&group.invariant_factors) {
        let scale = e / u128::from(d);
        acc = (acc + (u128::from(x) * u128::from(y) % u128::from(d)) * scale) % e;
    }
    Ok(acc as u64)
}

/// Homomorphism `source → target` given by an integer matrix with one row per
/// target factor and one column per source factor.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct Hom {
    source: FiniteAbelianGroup,
    target: FiniteAbelianGroup,
    matrix: Vec<Vec<u64>>,
}

impl Hom {
    /// Reduces entries into `0..e_i` and checks `e_i | A_ij · d_j`.
    pub fn new(
        source: FiniteAbelianGroup,
        target: FiniteAbelianGroup,
        matrix: &[Vec<i64>],
    ) -> Result<Self> {
        if matrix.len() != target.rank() {
            return Err(FinabError::DimensionMismatch {
                expected: target.rank(),
                found: matrix.len(),
            });
        }
        let mut reduced = Vec::with_capacity(matrix.len());
        for (row, (entries, &e)) in matrix.iter().zip(&target.invariant_factors).enumerate() {
            if entries.len() != source.rank() {
                return Err(FinabError::DimensionMismatch {
                    expected: source.rank(),
                    found: entries.len(),
                });
            }
            let mut out = Vec::with_capacity(entries.len());
            for (col, (&a, &d)) in entries.iter().zip(&source.invariant_factors).enumerate() {
                let value = a.rem_euclid(e as i64) as u64;
                if (u128::from(value) * u128::from(d)) % u128::from(e) != 0 {
                    return Err(FinabError::NotAHomomorphism {
                        row,
                        col,
                        value,
                        source_factor: d,
                        target_factor: e,
                    });
                }
                out.push(value);
            }
            reduced.push(out);
        }
        Ok(Hom {
            source,
            target,
            matrix: reduced,
        })
    }

    pub fn identity(g: &FiniteAbelianGroup) -> Self {
        let k = g.rank();
        Hom {
            source: g.clone(),
            target: g.clone(),
            matrix: (0..k)
                .map(|i| (0..k).map(|j| u64::from(i == j)).collect())
                .collect(),
        }
    }

    pub fn zero(source: &FiniteAbelianGroup, target: &FiniteAbelianGroup) -> Self {
        Hom {
            source: source.clone(),
            target: target.clone(),
            matrix: vec![vec![0; source.rank()]; target.rank()],
        }
    }

    pub fn source(&self) -> &FiniteAbelianGroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteAbelianGroup {
        &self.target
    }

    pub fn matrix(&self) -> &[Vec<u64>] {
        &self.matrix
    }

    pub fn apply(&self, g: &Element) -> Result<Element> {
        self.source.check_len(g.coords.len())?;
        let coords = self
            .matrix
            .iter()
            .zip(&self.target.invariant_factors)
            .map(|(row, &e)| {
                let e = u128::from(e);
                row.iter()
                    .zip(&g.coords)
                    .fold(0u128, |acc, (&a, &x)| (acc + u128::from(a) * u128::from(x)) % e)
                    as u64
            })
            .collect();
        Ok(Element { coords })
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Hom) -> Result<Hom> {
        if self.target != next.source {
            return Err(FinabError::NotComposable);
        }
        let matrix = next
            .matrix
            .iter()
            .zip(&next.target.invariant_factors)
            .map(|(brow, &e)| {
                let e = u128::from(e);
                (0..self.source.rank())
                    .map(|j| {
                        brow.iter()
                            .zip(&self.matrix)
                            .fold(0u128, |acc, (&b, arow)| {
                                (acc + u128::from(b) * u128::from(arow[j])) % e
                            }) as u64
                    })
                    .collect()
            })
            .collect();
        Ok(Hom {
            source: self.source.clone(),
            target: next.target.clone(),
            matrix,
        })
    }

    /// Presentation of the cokernel: generators are the target factors, relations
    /// are `d_i e_i` and the images of the source generators.
    fn cokernel_presentation(&self) -> IntMatrix {
        let diag: Vec<i64> = self.target.invariant_factors.iter().map(|&e| e as i64).collect();
        let images: Vec<Vec<i64>> = self
            .matrix
            .iter()
            .map(|row| row.iter().map(|&a| a as i64).collect())
            .collect();
        let images = IntMatrix::from_rows_with_cols(&images, self.source.rank())
            .expect("matrix shape checked at construction");
        IntMatrix::diagonal(&diag)
            .hconcat(&images)
            .expect("row counts agree")
    }

    /// `|H / f(G)|`, via Smith normal form.
    pub fn cokernel_order(&self) -> u64 {
        smith_normal_form(&self.cokernel_presentation())
            .invariants()
            .iter()
            .map(|d| d.to_u64().expect("cokernel divides the target order"))
            .product()
    }

    pub fn image_order(&self) -> u64 {
        self.target.order() / self.cokernel_order()
    }

    pub fn kernel_order(&self) -> u64 {
        self.source.order() / self.image_order()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_order() == 1
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel_order() == 1
    }

    pub fn is_isomorphism(&self) -> bool {
        self.source.order() == self.target.order() && self.is_injective()
    }
}

pub fn is_isomorphism(f: &Hom) -> bool {
    f.is_isomorphism()
}

/// The dual homomorphism `Ĥ → Ĝ`, `B_ji = (d_j / e_i) · A_ij mod d_j`.
///
/// Source and target are the underlying groups of the duals.
pub fn dual_hom(f: &Hom) -> Hom {
    let d = &f.source.invariant_factors;
    let e = &f.target.invariant_factors;
    let matrix = (0..d.len())
        .map(|j| {
            (0..e.len())
                .map(|i| {
                    // integral by the well-definedness invariant e_i | A_ij d_j
                    let lifted = u128::from(f.matrix[i][j]) * u128::from(d[j]) / u128::from(e[i]);
                    (lifted % u128::from(d[j])) as u64
                })
                .collect()
        })
        .collect();
    Hom {
        source: f.target.clone(),
        target: f.source.clone(),
        matrix,
    }
}

/// `ι: G → G^{••}`, `ι(g)(χ) = χ(g)`. In the coordinates used here the double
/// dual has the same factors and `ι` is the identity matrix.
pub fn evaluation_map(g: &FiniteAbelianGroup) -> Hom {
    let double = dual_group(dual_group(g).underlying());
    Hom {
        source: g.clone(),
        target: double.into_underlying(),
        matrix: Hom::identity(g).matrix,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grp(f: &[u64]) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(f.to_vec()).unwrap()
    }

    #[test]
    fn rejects_bad_chains() {
        assert!(matches!(
            FiniteAbelianGroup::new(vec![4, 2]),
            Err(FinabError::NotDivisibilityChain { prev: 4, next: 2 })
        ));
        assert!(matches!(
            FiniteAbelianGroup::new(vec![1, 2]),
            Err(FinabError::FactorTooSmall { .. })
        ));
    }

    #[test]
    fn presentations() {
        assert_eq!(from_presentation(&IntMatrix::diagonal(&[2, 4])).unwrap(), grp(&[2, 4]));
        assert_eq!(
            from_presentation(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]])).unwrap(),
            grp(&[6])
        );
        assert!(from_presentation(&IntMatrix::from_rows(&[vec![1]])).unwrap().is_trivial());
        assert_eq!(
            from_presentation(&IntMatrix::from_rows(&[vec![2], vec![0]])),
            Err(FinabError::InfiniteCokernel)
        );
        assert_eq!(
            from_presentation(&IntMatrix::diagonal(&[2, 0])),
            Err(FinabError::InfiniteCokernel)
        );
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let g = grp(&[2, 4]);
        let all: Vec<_> = g.elements().map(|e| e.coords().to_vec()).collect();
        assert_eq!(all[0], vec![0, 0]);
        assert_eq!(all[1], vec![0, 1]);
        assert_eq!(all[4], vec![1, 0]);
        for (i, e) in g.elements().enumerate() {
            assert_eq!(g.index_of(&e), i);
        }
    }

    #[test]
    fn pairing_examples() {
        let z4 = grp(&[4]);
        let one = z4.element(vec![1]).unwrap();
        assert_eq!(pair(&z4, &one, &one).unwrap(), QmodZ::new(1, 4));
        for chi in z4.elements() {
            assert!(pair(&z4, &z4.zero(), &chi).unwrap().is_zero());
        }
        let g = grp(&[2, 4]);
        let x = g.element(vec![1, 2]).unwrap();
        let chi = g.element(vec![1, 1]).unwrap();
        assert_eq!(pair(&g, &x, &chi).unwrap(), QmodZ::ZERO);
        assert!(pair(&g, &one, &chi).is_err());
    }

    #[test]
    fn qmodz_arithmetic() {
        let a = QmodZ::new(1, 4);
        let b = QmodZ::new(3, 4);
        assert_eq!(a.add(b), QmodZ::ZERO);
        assert_eq!(QmodZ::new(-1, 3), QmodZ::new(2, 3));
        assert_eq!(QmodZ::new(2, 4).to_string(), "1/2");
        assert_eq!(a.add(QmodZ::new(1, 6)), QmodZ::new(5, 12));
    }

    #[test]
    fn hom_validation() {
        let z2 = grp(&[2]);
        let z4 = grp(&[4]);
        assert!(Hom::new(z2.clone(), z4.clone(), &[vec![2]]).is_ok());
        assert!(matches!(
            Hom::new(z2.clone(), z4.clone(), &[vec![1]]),
            Err(FinabError::NotAHomomorphism { .. })
        ));
        assert!(Hom::new(z4.clone(), z2.clone(), &[vec![1]]).is_ok());
        assert!(Hom::new(z4, z2, &[vec![1, 1]]).is_err());
    }

    #[test]
    fn dual_of_inclusion_is_reduction() {
        let z2 = grp(&[2]);
        let z4 = grp(&[4]);
        let inc = Hom::new(z2.clone(), z4.clone(), &[vec![2]]).unwrap();
        let d = dual_hom(&inc);
        assert_eq!(d.source(), &z4);
        assert_eq!(d.target(), &z2);
        assert_eq!(d.matrix(), &[vec![1]]);
        assert!(d.is_surjective());
        assert!(!d.is_injective());
        assert_eq!(dual_hom(&d), inc);
    }

    #[test]
    fn dual_of_identity_and_zero() {
        let g = grp(&[2, 6]);
        assert_eq!(dual_hom(&Hom::identity(&g)), Hom::identity(&g));
        let h = grp(&[3]);
        assert_eq!(dual_hom(&Hom::zero(&g, &h)), Hom::zero(&h, &g));
    }

    #[test]
    fn evaluation_map_is_identity() {
        for f in [&[6][..], &[2, 4][..], &[][..]] {
            let g = grp(f);
            let iota = evaluation_map(&g);
            assert_eq!(iota, Hom::identity(&g));
            assert!(iota.is_isomorphism());
        }
    }

    #[test]
    fn isomorphism_examples() {
        let z8 = grp(&[8]);
        let z4 = grp(&[4]);
        assert!(is_isomorphism(&Hom::identity(&z8)));
        assert!(!is_isomorphism(&Hom::new(z4.clone(), z4, &[vec![2]]).unwrap()));
        assert!(is_isomorphism(&Hom::new(z8.clone(), z8, &[vec![3]]).unwrap()));
    }

    #[test]
    fn composition() {
        let z2 = grp(&[2]);
        let z4 = grp(&[4]);
        let z8 = grp(&[8]);
        let f = Hom::new(z2.clone(), z4.clone(), &[vec![2]]).unwrap();
        let g = Hom::new(z4, z8.clone(), &[vec![2]]).unwrap();
        let gf = f.then(&g).unwrap();
        assert_eq!(gf, Hom::new(z2, z8, &[vec![4]]).unwrap());
        assert!(g.then(&f).is_err());
    }

    #[test]
    fn element_orders() {
        let g = grp(&[2, 4]);
        assert_eq!(g.element_order(&g.element(vec![1, 2]).unwrap()), 2);
        assert_eq!(g.element_order(&g.element(vec![1, 1]).unwrap()), 4);
        assert_eq!(g.element_order(&g.zero()), 1);
    }
}
