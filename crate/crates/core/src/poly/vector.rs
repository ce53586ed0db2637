use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use super::rat::gcd_slice;
use super::PolyError;

/// Exponent vector of a monomial.
///
/// The total order is graded lexicographic: total degree first, ties broken
/// lexicographically with the first variable largest. Divisibility is the
/// componentwise partial order, see [`ExpVec::divides`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExpVec(Vec<u32>);

impl ExpVec {
    pub fn new(entries: Vec<u32>) -> Self {
        ExpVec(entries)
    }

    pub fn zero(dim: usize) -> Self {
        ExpVec(vec![0; dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        ExpVec(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// `self | other` as monomials.
    pub fn divides(&self, other: &ExpVec) -> bool {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &ExpVec) -> ExpVec {
        ExpVec(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn add(&self, other: &ExpVec) -> ExpVec {
        ExpVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn checked_sub(&self, other: &ExpVec) -> Option<ExpVec> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(ExpVec)
    }

    pub fn scale(&self, k: u32) -> ExpVec {
        ExpVec(self.0.iter().map(|a| a * k).collect())
    }

    /// `self - other` as a lattice vector.
    pub fn diff(&self, other: &ExpVec) -> IntVec {
        IntVec(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a as i64 - b as i64)
                .collect(),
        )
    }

    pub fn to_int(&self) -> IntVec {
        IntVec(self.0.iter().map(|&a| a as i64).collect())
    }

    /// Reorders coordinates: entry `k` of the result is entry `perm[k]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> ExpVec {
        ExpVec(perm.iter().map(|&p| self.0[p]).collect())
    }

    /// Disjoint supports, i.e. no common variable.
    pub fn coprime(&self, other: &ExpVec) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

impl Ord for ExpVec {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ExpVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for ExpVec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl fmt::Display for ExpVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

/// Integer lattice vector, entries of either sign.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct IntVec(Vec<i64>);

impl IntVec {
    pub fn new(entries: Vec<i64>) -> Self {
        IntVec(entries)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn neg(&self) -> IntVec {
        IntVec(self.0.iter().map(|e| -e).collect())
    }

    /// Positive and negative parts, `self = plus - minus`.
    pub fn split(&self) -> (ExpVec, ExpVec) {
        let plus = self.0.iter().map(|&e| e.max(0) as u32).collect();
        let minus = self.0.iter().map(|&e| (-e).max(0) as u32).collect();
        (ExpVec(plus), ExpVec(minus))
    }
}

impl fmt::Display for IntVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

/// A nonnegative integer covector, paired with exponent vectors by the dot product.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Weight(Vec<i64>);

impl Weight {
    pub fn new(entries: Vec<i64>) -> Result<Self, PolyError> {
        if let Some(&bad) = entries.iter().find(|&&e| e < 0) {
            return Err(PolyError::NegativeWeight(bad));
        }
        Ok(Weight(entries))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    /// `⟨self, v⟩` for an exponent vector of the same length.
    pub fn eval(&self, v: &ExpVec) -> i64 {
        debug_assert_eq!(self.dim(), v.dim());
        self.0
            .iter()
            .zip(v.entries())
            .map(|(&w, &e)| w * e as i64)
            .sum()
    }

    pub fn is_primitive(&self) -> bool {
        gcd_slice(&self.0) == 1
    }

    pub fn permute(&self, perm: &[usize]) -> Weight {
        Weight(perm.iter().map(|&p| self.0[p]).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

fn write_tuple<T: fmt::Display>(f: &mut fmt::Formatter<'_>, xs: &[T]) -> fmt::Result {
    f.write_str("(")?;
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str(")")
}

/// An integer extended by `+∞`, the value set of monomial and divisorial valuations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(i64),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<i64> {
        match self {
            Order::Finite(v) => Some(v),
            Order::Infinite => None,
        }
    }

    pub fn plus(self, other: Order) -> Order {
        match (self, other) {
            (Order::Finite(a), Order::Finite(b)) => Order::Finite(a + b),
            _ => Order::Infinite,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(v) => write!(f, "{v}"),
            Order::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Order::Finite(v) => s.serialize_i64(*v),
            Order::Infinite => s.serialize_str("inf"),
        }
    }
}

/// `Σ w_i m_i`.
pub fn pairing(w: &Weight, m: &IntVec) -> Result<i64, PolyError> {
    if w.dim() != m.dim() {
        return Err(PolyError::DimensionMismatch {
            expected: w.dim(),
            found: m.dim(),
        });
    }
    Ok(w.0.iter().zip(&m.0).map(|(a, b)| a * b).sum())
}

/// Divides by the positive gcd of the entries; signs are preserved.
pub fn make_primitive(v: &IntVec) -> Result<IntVec, PolyError> {
    let g = gcd_slice(&v.0);
    if g == 0 {
        return Err(PolyError::ZeroVector);
    }
    Ok(IntVec(v.0.iter().map(|e| e / g).collect()))
}
