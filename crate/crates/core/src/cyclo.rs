//! Exact arithmetic in cyclotomic fields `Q(ζ_m)`.
//!
//! An element is a polynomial in `ζ_m` of degree `< φ(m)` with rational
//! coefficients, kept reduced modulo the cyclotomic polynomial `Φ_m`. Binary
//! operations promote both operands to the lcm of their conductors.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::Serialize;
use thiserror::Error;

use crate::finab::QmodZ;
use crate::linalg::Matrix;
use crate::Rational;

/// Largest conductor this module will construct.
pub const MAX_CONDUCTOR: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycloError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("conductor {0} exceeds the cap of {MAX_CONDUCTOR}")]
    ConductorTooLarge(u64),
    #[error("conductor must be positive")]
    ZeroConductor,
    #[error("expected {expected} coefficients for conductor {conductor}, found {found}")]
    WrongLength {
        conductor: u64,
        expected: usize,
        found: usize,
    },
    #[error("conductor {from} cannot be embedded into conductor {to}")]
    NotADivisor { from: u64, to: u64 },
}

pub type Result<T> = std::result::Result<T, CycloError>;

pub fn euler_phi(mut m: u64) -> u64 {
    let mut result = m;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

fn check_conductor(m: u64) -> Result<()> {
    match m {
        0 => Err(CycloError::ZeroConductor),
        m if m > MAX_CONDUCTOR => Err(CycloError::ConductorTooLarge(m)),
        _ => Ok(()),
    }
}

fn phi_cache() -> &'static Mutex<HashMap<u64, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `Φ_m` as integer coefficients, constant term first.
///
/// Computed by exact division `Φ_m = (x^m − 1) / Π_{d | m, d < m} Φ_d`.
/// Panics for `m == 0`.
pub fn cyclotomic_polynomial(m: u64) -> Vec<i64> {
    cyclotomic_polynomial_shared(m).as_ref().clone()
}

fn cyclotomic_polynomial_shared(m: u64) -> Arc<Vec<i64>> {
    assert!(m > 0, "cyclotomic polynomial of conductor 0");
    if let Some(p) = phi_cache().lock().expect("cache poisoned").get(&m) {
        return Arc::clone(p);
    }
    let mut quotient = vec![0i64; m as usize + 1];
    quotient[0] = -1;
    quotient[m as usize] = 1;
    for d in (1..m).filter(|d| m % d == 0) {
        let divisor = cyclotomic_polynomial_shared(d);
        quotient = divide_monic_exact(&quotient, &divisor);
    }
    let shared = Arc::new(quotient);
    phi_cache()
        .lock()
        .expect("cache poisoned")
        .insert(m, Arc::clone(&shared));
    shared
}

fn divide_monic_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut q = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        q[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "inexact cyclotomic division");
    q
}

/// Element of `Q(ζ_m)` in the power basis `1, ζ, …, ζ^{φ(m)−1}`.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    conductor: u64,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    /// Validated constructor: `coeffs.len()` must equal `φ(conductor)`.
    pub fn new(conductor: u64, coeffs: Vec<Rational>) -> Result<Self> {
        check_conductor(conductor)?;
        let expected = euler_phi(conductor) as usize;
        if coeffs.len() != expected {
            return Err(CycloError::WrongLength {
                conductor,
                expected,
                found: coeffs.len(),
            });
        }
        Ok(Cyclotomic { conductor, coeffs })
    }

    /// Reduces a polynomial in `ζ_m` of any degree.
    pub fn from_polynomial(conductor: u64, poly: Vec<Rational>) -> Result<Self> {
        check_conductor(conductor)?;
        Ok(Self::reduce(conductor, poly))
    }

    pub fn from_rational(q: Rational) -> Self {
        Cyclotomic {
            conductor: 1,
            coeffs: vec![q],
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    /// `ζ_m^k`.
    pub fn root_of_unity_power(conductor: u64, k: u64) -> Result<Self> {
        check_conductor(conductor)?;
        let mut poly = vec![Rational::zero(); (k % conductor) as usize + 1];
        poly[(k % conductor) as usize] = Rational::one();
        Ok(Self::reduce(conductor, poly))
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value if this element lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn reduce(conductor: u64, mut poly: Vec<Rational>) -> Self {
        let phi = cyclotomic_polynomial_shared(conductor);
        let deg = phi.len() - 1;
        for i in (deg..poly.len()).rev() {
            if poly[i].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut poly[i]);
            for (j, &pj) in phi[..deg].iter().enumerate() {
                if pj != 0 {
                    poly[i - deg + j] -= &c * BigInt::from(pj);
                }
            }
        }
        poly.resize(deg, Rational::zero());
        Cyclotomic {
            conductor,
            coeffs: poly,
        }
    }

    /// Rewrites the element in `Q(ζ_target)`; `conductor` must divide `target`.
    pub fn embed(&self, target: u64) -> Result<Self> {
        check_conductor(target)?;
        if target % self.conductor != 0 {
            return Err(CycloError::NotADivisor {
                from: self.conductor,
                to: target,
            });
        }
        if target == self.conductor {
            return Ok(self.clone());
        }
        let step = (target / self.conductor) as usize;
        let mut poly = vec![Rational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            poly[k * step] = c.clone();
        }
        Ok(Self::reduce(target, poly))
    }

    /// Rewrites the element in the subfield `Q(ζ_target)` if it lies there.
    pub fn restrict(&self, target: u64) -> Option<Self> {
        if target == 0 || self.conductor % target != 0 {
            return None;
        }
        let basis: Vec<Cyclotomic> = (0..euler_phi(target))
            .map(|k| {
                Self::root_of_unity_power(target, k)
                    .and_then(|z| z.embed(self.conductor))
                    .expect("subfield basis embeds")
            })
            .collect();
        let system = Matrix::from_fn(self.coeffs.len(), basis.len(), |i, j| {
            basis[j].coeffs[i].clone()
        });
        let x = system.solve(&self.coeffs)?;
        Some(Cyclotomic {
            conductor: target,
            coeffs: x,
        })
    }

    fn promote_pair(&self, other: &Self) -> (std::borrow::Cow<'_, Self>, u64, Option<Self>) {
        let m = self.conductor.lcm(&other.conductor);
        assert!(m <= MAX_CONDUCTOR, "common conductor {m} exceeds cap");
        let lhs = if m == self.conductor {
            std::borrow::Cow::Borrowed(self)
        } else {
            std::borrow::Cow::Owned(self.embed(m).expect("divides lcm"))
        };
        let rhs = if m == other.conductor {
            None
        } else {
            Some(other.embed(m).expect("divides lcm"))
        };
        (lhs, m, rhs)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conjugate(&self) -> Self {
        let m = self.conductor as usize;
        if m <= 2 {
            return self.clone();
        }
        let mut poly = vec![Rational::zero(); m];
        for (k, c) in self.coeffs.iter().enumerate() {
            poly[(m - k) % m] += c;
        }
        Self::reduce(self.conductor, poly)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against `Φ_m`.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Cyclotomic {
                conductor: self.conductor,
                coeffs: std::iter::once(q.recip())
                    .chain(std::iter::repeat(Rational::zero()))
                    .take(self.coeffs.len())
                    .collect(),
            });
        }
        let phi: Vec<Rational> = cyclotomic_polynomial_shared(self.conductor)
            .iter()
            .map(|&c| Rational::from_integer(BigInt::from(c)))
            .collect();
        // invariant: r_i ≡ s_i · a (mod Φ)
        let (mut r0, mut s0) = (phi, Vec::<Rational>::new());
        let (mut r1, mut s1) = (trim(self.coeffs.clone()), vec![Rational::one()]);
        while !(r1.len() == 1) {
            let (q, r) = poly_divrem(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            debug_assert!(!r1.is_empty(), "Φ_m is irreducible");
        }
        let c = r1[0].recip();
        let s: Vec<Rational> = s1.into_iter().map(|x| x * &c).collect();
        Ok(Self::reduce(self.conductor, s))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inverse()?)
    }

    /// `ζ_m^k` powers for `k = 0..m`, the table every character evaluation uses.
    pub fn roots_of_unity(conductor: u64) -> Result<Vec<Self>> {
        (0..conductor)
            .map(|k| Self::root_of_unity_power(conductor, k))
            .collect()
    }
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = vec![Rational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

/// Polynomial division over Q; `b` must be trimmed and nonzero.
fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead = b.last().expect("nonzero divisor").recip();
    let mut q = vec![Rational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().expect("nonempty") * &lead;
        for (j, y) in b.iter().enumerate() {
            r[shift + j] -= &c * y;
        }
        q[shift] = c;
        r = trim(r);
    }
    (trim(q), r)
}

/// `e^{2πi q}` as an exact element of `Q(ζ_den)`.
pub fn zeta(q: QmodZ) -> Result<Cyclotomic> {
    Cyclotomic::root_of_unity_power(q.denominator(), q.numerator())
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let (lhs, _, rhs) = self.promote_pair(other);
        lhs.coeffs == rhs.as_ref().unwrap_or(other).coeffs
    }
}

impl Eq for Cyclotomic {}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, other: &Cyclotomic) -> Cyclotomic {
        let (lhs, m, rhs) = self.promote_pair(other);
        let rhs = rhs.as_ref().unwrap_or(other);
        Cyclotomic {
            conductor: m,
            coeffs: lhs.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, other: &Cyclotomic) -> Cyclotomic {
        let (lhs, m, rhs) = self.promote_pair(other);
        let rhs = rhs.as_ref().unwrap_or(other);
        Cyclotomic {
            conductor: m,
            coeffs: lhs.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, other: &Cyclotomic) -> Cyclotomic {
        if let Some(q) = other.as_rational() {
            return self.scale(&q);
        }
        if let Some(q) = self.as_rational() {
            return other.scale(&q);
        }
        let (lhs, m, rhs) = self.promote_pair(other);
        let rhs = rhs.as_ref().unwrap_or(other);
        Cyclotomic::reduce(m, poly_mul(&lhs.coeffs, &rhs.coeffs))
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, other: Cyclotomic) -> Cyclotomic {
                (&self).$method(&other)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl crate::linalg::Field for Cyclotomic {
    fn zero() -> Self {
        Cyclotomic::zero()
    }
    fn one() -> Self {
        Cyclotomic::one()
    }
    fn is_zero(&self) -> bool {
        Cyclotomic::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        self.inverse().ok()
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            let body = match (k, mag.is_one()) {
                (0, _) => mag.to_string(),
                (1, true) => format!("z{}", self.conductor),
                (1, false) => format!("{mag}*z{}", self.conductor),
                (_, true) => format!("z{}^{k}", self.conductor),
                (_, false) => format!("{mag}*z{}^{k}", self.conductor),
            };
            terms.push((sign, body));
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (sign, body)) in terms.iter().enumerate() {
            match (i, *sign) {
                (0, "+") => write!(f, "{body}")?,
                (0, _) => write!(f, "-{body}")?,
                _ => write!(f, " {sign} {body}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for Cyclotomic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Cyclotomic", 2)?;
        st.serialize_field("conductor", &self.conductor)?;
        let coeffs: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(105).len() - 1, 48);
        assert!(cyclotomic_polynomial(105).contains(&-2));
    }

    #[test]
    fn zeta_values() {
        assert_eq!(zeta(QmodZ::ZERO).unwrap(), Cyclotomic::one());
        assert_eq!(zeta(QmodZ::new(1, 2)).unwrap(), Cyclotomic::from_integer(-1));
        let w = zeta(QmodZ::new(1, 3)).unwrap();
        assert_eq!(&(&w * &w) * &w, Cyclotomic::one());
    }

    #[test]
    fn gaussian_example() {
        let i = zeta(QmodZ::new(1, 4)).unwrap();
        let one = Cyclotomic::one();
        assert_eq!((&one + &i) * (&one - &i), Cyclotomic::from_integer(2));
    }

    #[test]
    fn conjugate_inverts_exponent() {
        let w = zeta(QmodZ::new(1, 3)).unwrap();
        let w2 = zeta(QmodZ::new(2, 3)).unwrap();
        assert_eq!(w.conjugate(), w2);
    }

    #[test]
    fn inverses() {
        assert_eq!(
            Cyclotomic::from_integer(2).inverse().unwrap(),
            Cyclotomic::from_rational(r(1, 2))
        );
        assert_eq!(Cyclotomic::zero().inverse(), Err(CycloError::DivisionByZero));
        let z = zeta(QmodZ::new(1, 12)).unwrap();
        let x = &(&z + &Cyclotomic::from_integer(3)) * &z;
        assert_eq!(&x * &x.inverse().unwrap(), Cyclotomic::one());
    }

    #[test]
    fn equality_across_conductors() {
        let a = zeta(QmodZ::new(1, 2)).unwrap();
        let b = zeta(QmodZ::new(2, 4)).unwrap();
        assert_eq!(a.conductor(), 2);
        assert_eq!(a, b);
        let c = zeta(QmodZ::new(1, 3)).unwrap().embed(12).unwrap();
        assert_eq!(c, zeta(QmodZ::new(4, 12)).unwrap());
        assert_eq!(c.restrict(3).unwrap(), zeta(QmodZ::new(1, 3)).unwrap());
        assert!(zeta(QmodZ::new(1, 12)).unwrap().restrict(3).is_none());
    }

    #[test]
    fn constructor_checks() {
        assert!(matches!(
            Cyclotomic::new(5, vec![r(1, 1)]),
            Err(CycloError::WrongLength { expected: 4, .. })
        ));
        assert_eq!(
            Cyclotomic::root_of_unity_power(MAX_CONDUCTOR + 1, 1),
            Err(CycloError::ConductorTooLarge(MAX_CONDUCTOR + 1))
        );
        assert_eq!(Cyclotomic::root_of_unity_power(0, 1), Err(CycloError::ZeroConductor));
    }

    #[test]
    fn display() {
        let z = zeta(QmodZ::new(1, 3)).unwrap();
        assert_eq!(z.to_string(), "z3");
        assert_eq!((-&z).to_string(), "-z3");
        assert_eq!(zeta(QmodZ::new(2, 3)).unwrap().to_string(), "-1 - z3");
    }
}
