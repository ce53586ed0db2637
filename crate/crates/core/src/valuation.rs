//! Valuations given by a generating sequence `x_1, x_2, x_3, key`, where the
//! key is a homogeneous binomial.
//!
//! Values are read off the key-adic expansion `f = Σ_b R_b·key^b` in which no
//! term of any `R_b` is divisible by the graded-lex leading monomial `T` of
//! the key: `ν(f) = min_b (ord_w(R_b) + b·key_value)`.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::curve::CurveData;
use crate::poly::{ExpVec, Order, Poly, Rat, Weight};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ValuationError {
    #[error("key must be a binomial, got {0} terms")]
    NotBinomial(usize),
    #[error("key {key} is not homogeneous for the weights {w}")]
    NotHomogeneous { key: String, w: Weight },
    #[error("key value {key_value} is below the weight order {order} of the key")]
    KeyValueTooSmall { key_value: i64, order: i64 },
    #[error("weights and key live in different dimensions")]
    DimensionMismatch,
    #[error("the second valuation is not defined for this curve (e_2 = 0)")]
    NotDefined,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenSeqValuation {
    w: Weight,
    key: Poly,
    key_value: i64,
    key_order: i64,
    lead: ExpVec,
}

impl GenSeqValuation {
    /// `key_value` may equal the weight order of the key, in which case the
    /// valuation is just the monomial valuation `ord_w`.
    pub fn new(w: Weight, key: Poly, key_value: i64) -> Result<Self, ValuationError> {
        if key.num_terms() != 2 {
            return Err(ValuationError::NotBinomial(key.num_terms()));
        }
        if key.dim() != w.dim() {
            return Err(ValuationError::DimensionMismatch);
        }
        let orders: Vec<i64> = key.exponents().map(|e| w.eval(e)).collect();
        if orders[0] != orders[1] {
            return Err(ValuationError::NotHomogeneous {
                key: key.to_string(),
                w,
            });
        }
        if key_value < orders[0] {
            return Err(ValuationError::KeyValueTooSmall {
                key_value,
                order: orders[0],
            });
        }
        let lead = key.leading_term().unwrap().0.clone();
        Ok(GenSeqValuation {
            w,
            key,
            key_value,
            key_order: orders[0],
            lead,
        })
    }

    pub fn weights(&self) -> &Weight {
        &self.w
    }

    pub fn key(&self) -> &Poly {
        &self.key
    }

    pub fn key_value(&self) -> i64 {
        self.key_value
    }

    /// The graded-lex leading monomial of the key.
    pub fn key_lead(&self) -> &ExpVec {
        &self.lead
    }

    /// False when the key value equals its weight order, so that the value
    /// coincides with `ord_w`.
    pub fn exceeds_monomial(&self) -> bool {
        self.key_value > self.key_order
    }

    /// The key-adic expansion; entry `b` is the coefficient of `key^b`.
    pub fn expansion(&self, f: &Poly) -> Vec<Poly> {
        let mut layers = Vec::new();
        let mut work = f.clone();
        while !work.is_zero() {
            let (q, r) = work.div_rem(&self.key);
            layers.push(r);
            work = q;
        }
        layers
    }

    pub fn value(&self, f: &Poly) -> Order {
        self.expansion(f)
            .iter()
            .enumerate()
            .map(|(b, r)| match r.ord(&self.w) {
                Order::Finite(o) => Order::Finite(o + b as i64 * self.key_value),
                Order::Infinite => Order::Infinite,
            })
            .min()
            .unwrap_or(Order::Infinite)
    }

    /// Value of the expansion coordinate `x^a·key^b`.
    pub fn coordinate_value(&self, a: &ExpVec, b: u32) -> i64 {
        self.w.eval(a) + b as i64 * self.key_value
    }
}

/// Sparse expansion: coefficient of `x^a·key^b` keyed by `(b, a)`.
pub type Expansion = BTreeMap<(u32, ExpVec), Rat>;

/// Memoized expansions of monomials.
///
/// With `key = c_T·x^T + c_M·x^M` and `T | v`, `x^v = x^u·(key − c_M·x^M)/c_T`
/// where `u = v − T`; `u + M` precedes `v` in graded lex, so the recursion ends.
pub struct MonomialExpansions<'a> {
    nu: &'a GenSeqValuation,
    c_lead: Rat,
    c_other: Rat,
    other: ExpVec,
    memo: HashMap<ExpVec, Expansion>,
}

impl<'a> MonomialExpansions<'a> {
    pub fn new(nu: &'a GenSeqValuation) -> Self {
        let mut terms = nu.key.terms();
        let (other, c_other) = terms.next().unwrap();
        let (_, c_lead) = terms.next().unwrap();
        MonomialExpansions {
            nu,
            c_lead: c_lead.clone(),
            c_other: c_other.clone(),
            other: other.clone(),
            memo: HashMap::new(),
        }
    }

    pub fn get(&mut self, v: &ExpVec) -> &Expansion {
        if !self.memo.contains_key(v) {
            let e = self.compute(v);
            self.memo.insert(v.clone(), e);
        }
        &self.memo[v]
    }

    fn compute(&mut self, v: &ExpVec) -> Expansion {
        let Some(u) = v.checked_sub(&self.nu.lead) else {
            return Expansion::from([((0, v.clone()), Rat::from_integer(1.into()))]);
        };
        let inv = Rat::from_integer(1.into()) / &self.c_lead;
        let mut out = Expansion::new();
        for ((b, a), c) in self.get(&u).clone() {
            out.insert((b + 1, a), c * &inv);
        }
        let ratio = &self.c_other * &inv;
        for ((b, a), c) in self.get(&u.add(&self.other)).clone() {
            let slot = out.entry((b, a)).or_insert_with(Rat::zero);
            *slot -= c * &ratio;
        }
        out.retain(|_, c| !c.is_zero());
        out
    }
}

impl Serialize for GenSeqValuation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("GenSeqValuation", 3)?;
        st.serialize_field("weights", &self.w)?;
        st.serialize_field("key", &self.key.to_string())?;
        st.serialize_field("key_value", &self.key_value)?;
        st.end()
    }
}

pub fn nu1(c: &CurveData) -> Result<GenSeqValuation, ValuationError> {
    GenSeqValuation::new(c.n.clone(), c.gens[0].to_poly(), c.d[1])
}

/// Weights `e_2·n + (d_3 − d_2)·q` with key value `e_2·d_3`.
pub fn nu2_weights(c: &CurveData) -> Option<Weight> {
    let d3 = *c.d.get(2)?;
    let s = d3 - c.d[1];
    let w =
        c.n.entries()
            .iter()
            .zip(c.q.entries())
            .map(|(n, q)| c.e[1] * n + s * q)
            .collect();
    Some(Weight::new(w).unwrap())
}

pub fn nu2(c: &CurveData) -> Result<GenSeqValuation, ValuationError> {
    if c.is_ci || c.e[1] == 0 {
        return Err(ValuationError::NotDefined);
    }
    let w = nu2_weights(c).ok_or(ValuationError::NotDefined)?;
    GenSeqValuation::new(w, c.gens[0].to_poly(), c.e[1] * c.d[2])
}

/// The exponents `a` with `T ∤ x^a` and `|a| + b·deg T ≤ max_degree`.
pub(crate) fn reduced_coordinates(nu: &GenSeqValuation, max_degree: u32) -> Vec<(ExpVec, u32)> {
    let dim = nu.w.dim();
    let t_deg = nu.lead.degree();
    let mut out = Vec::new();
    for b in 0..=max_degree / t_deg {
        let budget = max_degree - b * t_deg;
        for a in monomials_up_to(dim, budget) {
            if !nu.lead.divides(&a) {
                out.push((a, b));
            }
        }
    }
    out
}

/// A basis of `{f : deg f ≤ max_degree, ν(f) ≥ c}`.
///
/// The elements `x^a·key^b` with `T ∤ x^a` are the expansion coordinates, so
/// they are independent; every element of the slice expands into those of
/// degree at most `max_degree`.
pub fn valuation_ideal_slice(nu: &GenSeqValuation, c: i64, max_degree: u32) -> Vec<Poly> {
    reduced_coordinates(nu, max_degree)
        .into_iter()
        .filter(|(a, b)| nu.coordinate_value(a, *b) >= c)
        .map(|(a, b)| nu.key.pow(b).mul_monomial(&a, &Rat::from_integer(1.into())))
        .collect()
}

/// All exponent vectors of total degree at most `max_degree`, in graded-lex order.
pub fn monomials_up_to(dim: usize, max_degree: u32) -> Vec<ExpVec> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; dim];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<ExpVec>) {
        if i + 1 == cur.len() {
            for k in 0..=left {
                cur[i] = k;
                out.push(ExpVec::new(cur.clone()));
            }
            return;
        }
        for k in 0..=left {
            cur[i] = k;
            rec(i + 1, left - k, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, max_degree, &mut cur, &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::derive_curve_data;
    use crate::poly::parse_poly;

    fn curve(n: &[i64]) -> CurveData {
        derive_curve_data(&Weight::new(n.to_vec()).unwrap()).unwrap()
    }

    fn p(s: &str) -> Poly {
        parse_poly(s, 3).unwrap()
    }

    #[test]
    fn nu1_fields() {
        let v = nu1(&curve(&[3, 4, 5])).unwrap();
        assert_eq!(v.weights(), &Weight::new(vec![4, 3, 5]).unwrap());
        assert_eq!(v.key(), &p("x^2 - y*z"));
        assert_eq!(v.key_value(), 9);
        let v = nu1(&curve(&[4, 6, 9])).unwrap();
        assert_eq!(v.key(), &p("x^3 - y^2"));
        assert_eq!(v.key_value(), 18);
    }

    #[test]
    fn nu2_fields() {
        let v = nu2(&curve(&[3, 4, 5])).unwrap();
        assert_eq!(v.weights(), &Weight::new(vec![5, 5, 5]).unwrap());
        assert_eq!(v.key_value(), 10);
        assert!(!v.exceeds_monomial());
        assert_eq!(nu2(&curve(&[4, 6, 9])), Err(ValuationError::NotDefined));
    }

    #[test]
    fn values_on_key_and_monomials() {
        let c = curve(&[3, 4, 5]);
        let v = nu1(&c).unwrap();
        let f1 = c.gens[0].to_poly();
        assert_eq!(v.value(&f1), Order::Finite(9));
        assert_eq!(v.value(&f1.pow(2)), Order::Finite(18));
        assert_eq!(v.value(&(&p("x") * &f1)), Order::Finite(13));
        assert_eq!(v.value(&p("x^2*y")), Order::Finite(11));
        assert_eq!(v.value(&Poly::zero(3)), Order::Infinite);
        // y*z = x^2 - f_1 has value 8.
        assert_eq!(v.value(&p("y*z")), Order::Finite(8));
        assert_eq!(v.value(&p("x^2 + y*z")), Order::Finite(8));
    }

    #[test]
    fn rejects_bad_keys() {
        let w = Weight::new(vec![4, 3, 5]).unwrap();
        assert!(matches!(
            GenSeqValuation::new(w.clone(), p("x^2 - y"), 9),
            Err(ValuationError::NotHomogeneous { .. })
        ));
        assert!(matches!(
            GenSeqValuation::new(w.clone(), p("x^2 - y*z"), 7),
            Err(ValuationError::KeyValueTooSmall { .. })
        ));
        assert!(matches!(
            GenSeqValuation::new(w, p("x^2"), 9),
            Err(ValuationError::NotBinomial(1))
        ));
    }

    #[test]
    fn slice_example() {
        let c = curve(&[3, 4, 5]);
        let v = nu1(&c).unwrap();
        let s = valuation_ideal_slice(&v, 9, 2);
        assert!(s.contains(&c.gens[0].to_poly()));
        assert!(!s.contains(&p("y^2")));
        for f in &s {
            assert!(v.value(f) >= Order::Finite(9));
        }
        let full = valuation_ideal_slice(&v, 0, 2);
        assert_eq!(full.len(), 10);
    }

    #[test]
    fn memoized_expansion_matches_division() {
        let c = curve(&[3, 4, 5]);
        let v = nu1(&c).unwrap();
        let mut memo = MonomialExpansions::new(&v);
        for e in monomials_up_to(3, 7) {
            let mono = Poly::monomial(e.clone(), Rat::from_integer(1.into()));
            let layers = v.expansion(&mono);
            let mut expect = Expansion::new();
            for (b, r) in layers.iter().enumerate() {
                for (a, c) in r.terms() {
                    expect.insert((b as u32, a.clone()), c.clone());
                }
            }
            assert_eq!(memo.get(&e), &expect, "{e}");
        }
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials_up_to(3, 2).len(), 10);
        assert_eq!(monomials_up_to(2, 3).len(), 10);
    }
}
