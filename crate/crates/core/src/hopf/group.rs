//! Finite groups by multiplication table, with the standard small examples.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::finab::{FiniteAbelianGroup, Hom};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("multiplication table is not square or has out-of-range entries")]
    BadTable,
    #[error("no two-sided identity")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("associativity fails at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("map has {found} entries, source has order {expected}")]
    MapLength { expected: usize, found: usize },
    #[error("map is not a homomorphism at ({0}, {1})")]
    NotAHomomorphism(usize, usize),
    #[error("unknown group name {0:?}")]
    UnknownName(String),
    #[error("invalid parameter: {0}")]
    BadParameter(String),
}

pub type Result<T> = std::result::Result<T, GroupError>;

/// Common interface of enumerated finite groups (elements are `0..order`).
pub trait EnumeratedGroup {
    fn order(&self) -> usize;
    fn op(&self, a: usize, b: usize) -> usize;
    fn identity(&self) -> usize;
    fn inverse(&self, a: usize) -> usize;
}

impl EnumeratedGroup for FiniteAbelianGroup {
    fn order(&self) -> usize {
        FiniteAbelianGroup::order(self) as usize
    }
    fn op(&self, a: usize, b: usize) -> usize {
        self.index_of(&self.add(&self.element_at(a), &self.element_at(b)))
    }
    fn identity(&self) -> usize {
        0
    }
    fn inverse(&self, a: usize) -> usize {
        self.index_of(&self.neg(&self.element_at(a)))
    }
}

/// A finite group given by its full multiplication table.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
    /// Invariant-factor structure when the group was built from one, with the
    /// element enumerations agreeing.
    abelian: Option<FiniteAbelianGroup>,
}

impl FiniteGroup {
    /// Validates the table exhaustively: closure, identity, inverses,
    /// associativity.
    pub fn new(name: impl Into<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(GroupError::BadTable);
        }
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        let at = |a: usize, b: usize| flat[a * n + b];
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or(GroupError::NoIdentity)?;
        let mut inverses = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| at(a, b) == identity && at(b, a) == identity)
                .ok_or(GroupError::NoInverse(a))?;
            inverses.push(inv);
        }
        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            name: name.into(),
            order: n,
            table: flat,
            identity,
            inverses,
            abelian: None,
        })
    }

    fn from_op(name: String, n: usize, op: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let table = (0..n).map(|a| (0..n).map(|b| op(a, b)).collect()).collect();
        Self::new(name, table)
    }

    pub fn trivial() -> Self {
        Self::from_op("trivial".into(), 1, |_, _| 0).expect("trivial group")
    }

    /// `Z/n` with elements `0..n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(GroupError::BadParameter("cyclic order must be positive".into()));
        }
        let mut g = Self::from_op(format!("cyclic:{n}"), n, |a, b| (a + b) % n)?;
        g.abelian = Some(FiniteAbelianGroup::cyclic(n as u64).expect("positive order"));
        Ok(g)
    }

    /// The group underlying a finite abelian group, with its lexicographic
    /// element enumeration.
    pub fn abelian(a: &FiniteAbelianGroup) -> Self {
        let n = a.order() as usize;
        let mut g = Self::from_op(format!("abelian:{a}"), n, |x, y| {
            EnumeratedGroup::op(a, x, y)
        })
        .expect("finite abelian groups are groups");
        g.abelian = Some(a.clone());
        g
    }

    /// Dihedral group of order `2n`: element `r^a s^b` has index `a + n·b`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(GroupError::BadParameter("dihedral parameter must be positive".into()));
        }
        Self::from_op(format!("dihedral:{n}"), 2 * n, |x, y| {
            let (a, b) = (x % n, x / n);
            let (c, d) = (y % n, y / n);
            let rot = if b == 0 { (a + c) % n } else { (a + n - c) % n };
            rot + n * ((b + d) % 2)
        })
    }

    /// `S_n`, permutations in lexicographic order, `(στ)(x) = σ(τ(x))`.
    pub fn symmetric(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(GroupError::BadParameter("symmetric degree must be positive".into()));
        }
        let perms = permutations(n);
        Self::permutation_group(format!("symmetric:{n}"), perms)
    }

    /// `A_n`, even permutations in lexicographic order.
    pub fn alternating(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(GroupError::BadParameter("alternating degree must be positive".into()));
        }
        let perms = permutations(n).into_iter().filter(|p| is_even(p)).collect();
        Self::permutation_group(format!("alternating:{n}"), perms)
    }

    fn permutation_group(name: String, perms: Vec<Vec<usize>>) -> Result<Self> {
        let index: HashMap<Vec<usize>, usize> =
            perms.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        Self::from_op(name, perms.len(), |a, b| {
            let composed: Vec<usize> = perms[b].iter().map(|&x| perms[a][x]).collect();
            index[&composed]
        })
    }

    /// Quaternion group, elements `1, i, j, k, −1, −i, −j, −k`.
    pub fn quaternion8() -> Self {
        // unit products as (sign flip, unit) for units 1, i, j, k
        const UNITS: [[(usize, usize); 4]; 4] = [
            [(0, 0), (0, 1), (0, 2), (0, 3)],
            [(0, 1), (1, 0), (0, 3), (1, 2)],
            [(0, 2), (1, 3), (1, 0), (0, 1)],
            [(0, 3), (0, 2), (1, 1), (1, 0)],
        ];
        Self::from_op("quaternion8".into(), 8, |x, y| {
            let (sx, ux) = (x / 4, x % 4);
            let (sy, uy) = (y / 4, y % 4);
            let (s, u) = UNITS[ux][uy];
            ((sx + sy + s) % 2) * 4 + u
        })
        .expect("quaternion table")
    }

    /// Direct product, element `(g, h)` at index `g·|H| + h`.
    pub fn product(g: &FiniteGroup, h: &FiniteGroup) -> Self {
        let m = h.order;
        Self::from_op(format!("{}x{}", g.name, h.name), g.order * m, |x, y| {
            g.mul(x / m, y / m) * m + h.mul(x % m, y % m)
        })
        .expect("products of groups are groups")
    }

    /// Parses `cyclic:n`, `dihedral:n`, `symmetric:n`, `alternating:n`,
    /// `quaternion8`, `trivial`, `abelian:d1,d2,…`.
    pub fn by_name(name: &str) -> Result<Self> {
        let unknown = || GroupError::UnknownName(name.to_string());
        let (kind, arg) = name.split_once(':').unwrap_or((name, ""));
        let num = || arg.trim().parse::<usize>().map_err(|_| unknown());
        match kind.trim() {
            "trivial" => Ok(Self::trivial()),
            "quaternion8" => Ok(Self::quaternion8()),
            "cyclic" => Self::cyclic(num()?),
            "dihedral" => Self::dihedral(num()?),
            "symmetric" => Self::symmetric(num()?),
            "alternating" => Self::alternating(num()?),
            "abelian" => {
                let orders = arg
                    .split(',')
                    .map(|s| s.trim().parse::<u64>().map_err(|_| unknown()))
                    .collect::<Result<Vec<_>>>()?;
                let a = FiniteAbelianGroup::from_cyclic_orders(&orders)
                    .map_err(|e| GroupError::BadParameter(e.to_string()))?;
                Ok(Self::abelian(&a))
            }
            _ => Err(unknown()),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn abelian_structure(&self) -> Option<&FiniteAbelianGroup> {
        self.abelian.as_ref()
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }
}

impl EnumeratedGroup for FiniteGroup {
    fn order(&self) -> usize {
        self.order
    }
    fn op(&self, a: usize, b: usize) -> usize {
        self.mul(a, b)
    }
    fn identity(&self) -> usize {
        self.identity
    }
    fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (order {})", self.name, self.order)
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).expect("successor exists");
        current.swap(i, j);
        current[i + 1..].reverse();
    }
}

fn is_even(p: &[usize]) -> bool {
    let inversions = (0..p.len())
        .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| p[i] > p[j])
        .count();
    inversions % 2 == 0
}

/// A homomorphism of finite groups as an element map.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupHom {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    map: Vec<usize>,
}

impl GroupHom {
    /// Exhaustively verifies the homomorphism property.
    pub fn new(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.order() {
            return Err(GroupError::MapLength {
                expected: source.order(),
                found: map.len(),
            });
        }
        if map.iter().any(|&x| x >= target.order()) {
            return Err(GroupError::BadTable);
        }
        for a in 0..source.order() {
            for b in 0..source.order() {
                if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                    return Err(GroupError::NotAHomomorphism(a, b));
                }
            }
        }
        Ok(GroupHom { source, target, map })
    }

    /// The element map of an abelian homomorphism between the enumerated groups
    /// [`FiniteGroup::abelian`] of its source and target.
    pub fn from_abelian(f: &Hom, source: Arc<FiniteGroup>, target: Arc<FiniteGroup>) -> Result<Self> {
        let map = f
            .source()
            .elements()
            .map(|g| f.target().index_of(&f.apply(&g).expect("element of source")))
            .collect();
        Self::new(source, target, map)
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.order()];
        self.map.iter().all(|&x| !std::mem::replace(&mut seen[x], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.order()];
        for &x in &self.map {
            seen[x] = true;
        }
        seen.into_iter().all(|s| s)
    }
}

/// `S_n ↪ S_{n+1}` fixing the new point.
pub fn symmetric_inclusion(small: Arc<FiniteGroup>, large: Arc<FiniteGroup>, n: usize) -> Result<GroupHom> {
    let small_perms = permutations(n);
    let index: HashMap<Vec<usize>, usize> = permutations(n + 1)
        .into_iter()
        .enumerate()
        .map(|(i, p)| (p, i))
        .collect();
    let map = small_perms
        .into_iter()
        .map(|mut p| {
            p.push(n);
            index[&p]
        })
        .collect();
    GroupHom::new(small, large, map)
}

/// `G^{n+1} → G^n` forgetting the last factor, where `G^{k}` is the iterated
/// [`FiniteGroup::product`] `(…(G × G) × …) × G`.
pub fn drop_last_factor(large: Arc<FiniteGroup>, small: Arc<FiniteGroup>, factor_order: usize) -> Result<GroupHom> {
    let map = (0..large.order()).map(|x| x / factor_order).collect();
    GroupHom::new(large, small, map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_and_commutativity() {
        assert_eq!(FiniteGroup::symmetric(3).unwrap().order(), 6);
        assert!(!FiniteGroup::symmetric(3).unwrap().is_abelian());
        assert_eq!(FiniteGroup::dihedral(4).unwrap().order(), 8);
        assert!(!FiniteGroup::dihedral(4).unwrap().is_abelian());
        assert!(!FiniteGroup::quaternion8().is_abelian());
        assert_eq!(FiniteGroup::alternating(4).unwrap().order(), 12);
        assert_eq!(FiniteGroup::symmetric(4).unwrap().order(), 24);
        assert!(FiniteGroup::cyclic(6).unwrap().is_abelian());
        assert_eq!(FiniteGroup::symmetric(1).unwrap().order(), 1);
    }

    #[test]
    fn quaternion_relations() {
        let q = FiniteGroup::quaternion8();
        let (i, j, k, minus_one) = (1, 2, 3, 4);
        assert_eq!(q.mul(i, i), minus_one);
        assert_eq!(q.mul(i, j), k);
        assert_eq!(q.mul(j, i), 4 + k);
        // exactly one element of order 2
        let order_two = (0..8).filter(|&x| x != 0 && q.mul(x, x) == 0).count();
        assert_eq!(order_two, 1);
    }

    #[test]
    fn rejects_non_groups() {
        assert_eq!(
            FiniteGroup::new("x", vec![vec![0, 0], vec![0, 0]]),
            Err(GroupError::NoIdentity)
        );
        assert_eq!(FiniteGroup::new("x", vec![vec![0, 2]]), Err(GroupError::BadTable));
    }

    #[test]
    fn symmetric_inclusions() {
        let s2 = Arc::new(FiniteGroup::symmetric(2).unwrap());
        let s3 = Arc::new(FiniteGroup::symmetric(3).unwrap());
        let inc = symmetric_inclusion(s2, s3, 2).unwrap();
        assert!(inc.is_injective());
        assert!(!inc.is_surjective());
    }

    #[test]
    fn by_name_parses() {
        assert_eq!(FiniteGroup::by_name("dihedral:4").unwrap().order(), 8);
        assert_eq!(FiniteGroup::by_name("abelian:2,2").unwrap().order(), 4);
        assert!(FiniteGroup::by_name("abelian:2,3").unwrap().abelian_structure().is_some());
        assert!(FiniteGroup::by_name("mystery:3").is_err());
    }

    #[test]
    fn non_homomorphism_rejected() {
        let z2 = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let z4 = Arc::new(FiniteGroup::cyclic(4).unwrap());
        assert!(GroupHom::new(z2.clone(), z4.clone(), vec![0, 1]).is_err());
        assert!(GroupHom::new(z2, z4, vec![0, 2]).is_ok());
    }
}
