//! Rational scalars.
//!
//! All thresholds and multipliers are kept as [`BigRational`]; there is no
//! floating point anywhere in the crate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::PolyError;

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rat {
    Rat::from_integer(BigInt::from(value))
}

/// Floor of a rational as a machine integer.
///
/// Panics if the floor does not fit in an `i64`; every quantity handled here
/// is a small combinatorial invariant.
pub fn floor_i64(x: &Rat) -> i64 {
    x.floor()
        .to_integer()
        .to_i64()
        .expect("rational floor out of i64 range")
}

pub fn ceil_i64(x: &Rat) -> i64 {
    x.ceil()
        .to_integer()
        .to_i64()
        .expect("rational ceiling out of i64 range")
}

/// Parses `p`, `-p` or `p/q` with decimal integers. Decimals are rejected.
pub fn parse_rat(text: &str) -> Result<Rat, PolyError> {
    let text = text.trim();
    let bad = || PolyError::Syntax {
        pos: 0,
        message: format!("`{text}` is not an integer or p/q rational"),
    };
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    if den.starts_with(['+', '-']) {
        return Err(bad());
    }
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(PolyError::ZeroDenominator);
    }
    Ok(Rat::new(num, den))
}

/// Serializes a rational as `{"num": "..", "den": ".."}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatJson<'a>(pub &'a Rat);

impl Serialize for RatJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Rat", 2)?;
        st.serialize_field("num", &self.0.numer().to_string())?;
        st.serialize_field("den", &self.0.denom().to_string())?;
        st.end()
    }
}

/// `serialize_with` adapter for [`Rat`] fields.
pub fn serialize_rat<S: Serializer>(x: &Rat, s: S) -> Result<S::Ok, S::Error> {
    RatJson(x).serialize(s)
}

pub fn serialize_rats<S: Serializer>(xs: &[Rat], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(RatJson))
}

/// Greatest common divisor of a slice, taken nonnegative. Zero for an all-zero slice.
pub fn gcd_slice(values: &[i64]) -> i64 {
    values.iter().fold(0i64, |g, &v| g.gcd(&v)).abs()
}

pub(crate) fn is_positive(x: &Rat) -> bool {
    x.is_positive()
}
