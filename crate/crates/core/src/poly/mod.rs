//! Exact arithmetic: rationals, lattice vectors and polynomials in two or
//! three variables over ℚ.

mod parse;
mod rat;
mod vector;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use parse::parse_poly;
pub(crate) use rat::is_positive;
pub use rat::{
    ceil_i64, floor_i64, gcd_slice, int, parse_rat, rat, serialize_rat, serialize_rats, Rat,
    RatJson,
};
pub use vector::{make_primitive, pairing, ExpVec, IntVec, Order, Weight};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("length mismatch: expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("the zero vector has no primitive form")]
    ZeroVector,
    #[error("weights must be nonnegative, got {0}")]
    NegativeWeight(i64),
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("variable `{name}` at position {pos} is out of range for dimension {dim}")]
    VariableOutOfRange { name: char, pos: usize, dim: usize },
    #[error("ambient dimension must be 2 or 3, got {0}")]
    UnsupportedDimension(usize),
    #[error("zero denominator")]
    ZeroDenominator,
}

/// Variable names used for display and parsing.
pub fn variable_names(dim: usize) -> &'static [char] {
    match dim {
        2 => &['x', 'y'],
        _ => &['x', 'y', 'z'],
    }
}

pub fn check_dim(dim: usize) -> Result<(), PolyError> {
    if dim == 2 || dim == 3 {
        Ok(())
    } else {
        Err(PolyError::UnsupportedDimension(dim))
    }
}

/// A polynomial with rational coefficients in `dim` variables.
///
/// Terms are kept in a map ordered by graded lex; zero coefficients are never
/// stored, so the zero polynomial is the empty map.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    dim: usize,
    terms: BTreeMap<ExpVec, Rat>,
}

impl Poly {
    pub fn zero(dim: usize) -> Self {
        Poly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        Poly::constant(dim, Rat::one())
    }

    pub fn constant(dim: usize, c: Rat) -> Self {
        Poly::monomial(ExpVec::zero(dim), c)
    }

    pub fn monomial(exp: ExpVec, coeff: Rat) -> Self {
        let mut p = Poly::zero(exp.dim());
        p.add_term(exp, coeff);
        p
    }

    /// The variable `x_i` (zero-based).
    pub fn var(dim: usize, i: usize) -> Self {
        Poly::monomial(ExpVec::unit(dim, i), Rat::one())
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (ExpVec, Rat)>) -> Self {
        let mut p = Poly::zero(dim);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// `x^plus - x^minus`.
    pub fn binomial(plus: &ExpVec, minus: &ExpVec) -> Self {
        let mut p = Poly::monomial(plus.clone(), Rat::one());
        p.add_term(minus.clone(), -Rat::one());
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExpVec, &Rat)> + '_ {
        self.terms.iter()
    }

    pub fn exponents(&self) -> impl Iterator<Item = &ExpVec> + '_ {
        self.terms.keys()
    }

    pub fn coeff(&self, e: &ExpVec) -> Rat {
        self.terms.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(ExpVec::degree)
    }

    pub fn leading_term(&self) -> Option<(&ExpVec, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, exp: ExpVec, coeff: Rat) {
        debug_assert_eq!(exp.dim(), self.dim);
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.dim);
        }
        Poly {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    /// Multiplication by a monomial `c·x^e`.
    pub fn mul_monomial(&self, e: &ExpVec, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.dim);
        }
        Poly {
            dim: self.dim,
            terms: self.terms.iter().map(|(v, a)| (v.add(e), a * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.dim);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `∂/∂x_i`.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.dim);
        for (e, c) in &self.terms {
            let k = e.entries()[i];
            if k == 0 {
                continue;
            }
            let lowered = e.checked_sub(&ExpVec::unit(self.dim, i)).unwrap();
            out.add_term(lowered, c * int(k as i64));
        }
        out
    }

    /// Minimum of `⟨w, e⟩` over the support; `+∞` for zero.
    pub fn ord(&self, w: &Weight) -> Order {
        self.terms
            .keys()
            .map(|e| w.eval(e))
            .min()
            .map_or(Order::Infinite, Order::Finite)
    }

    /// Sum of the terms attaining `ord(w)`.
    pub fn initial_form(&self, w: &Weight) -> Poly {
        let Order::Finite(m) = self.ord(w) else {
            return Poly::zero(self.dim);
        };
        Poly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| w.eval(e) == m)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Division with remainder by a single divisor in graded-lex order.
    ///
    /// Returns `(q, r)` with `self = q·divisor + r` and no term of `r`
    /// divisible by the leading monomial of `divisor`.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let (lead_e, lead_c) = divisor
            .leading_term()
            .map(|(e, c)| (e.clone(), c.clone()))
            .expect("division by the zero polynomial");
        let mut work = self.clone();
        let mut quot = Poly::zero(self.dim);
        let mut rem = Poly::zero(self.dim);
        while let Some((e, c)) = work.terms.pop_last() {
            match e.checked_sub(&lead_e) {
                Some(shift) => {
                    let factor = &c / &lead_c;
                    for (de, dc) in divisor.terms.iter().rev().skip(1) {
                        work.add_term(shift.add(de), -(&factor * dc));
                    }
                    quot.add_term(shift, factor);
                }
                None => rem.add_term(e, c),
            }
        }
        (quot, rem)
    }

    pub fn is_divisible_by(&self, divisor: &Poly) -> bool {
        self.div_rem(divisor).1.is_zero()
    }

    /// Renames variables: variable `k` of the result is variable `perm[k]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Poly {
        // Exponent `e` becomes `e'` with `e'[k] = e[perm[k]]`.
        Poly::from_terms(
            self.dim,
            self.terms.iter().map(|(e, c)| (e.permute(perm), c.clone())),
        )
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let names = variable_names(self.dim);
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            let mut factors = Vec::new();
            if !abs.is_one() || e.is_zero() {
                factors.push(abs.to_string());
            }
            for (k, &p) in e.entries().iter().enumerate() {
                match p {
                    0 => {}
                    1 => factors.push(names[k].to_string()),
                    _ => factors.push(format!("{}^{}", names[k], p)),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero(self.dim);
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a.add(b), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rat::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
