//! Pullback along `t ↦ (t^{n_1}, t^{n_2}, t^{n_3})` and symbolic-power
//! membership by the differential criterion: `f ∈ I^{(m)}` iff every partial
//! derivative of order below `m` vanishes on the curve.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::Zero;

use crate::poly::{ExpVec, Poly, Rat, Weight};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parametrization {
    n: Weight,
}

impl Parametrization {
    pub fn new(n: Weight) -> Self {
        Parametrization { n }
    }

    pub fn weights(&self) -> &Weight {
        &self.n
    }
}

/// A polynomial in the single variable `t`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TPoly {
    terms: BTreeMap<i64, Rat>,
}

impl TPoly {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: i64) -> Rat {
        self.terms.get(&k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rat)> + '_ {
        self.terms.iter().map(|(k, c)| (*k, c))
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.terms.iter().rev().enumerate() {
            let neg = c < &Rat::zero();
            if i > 0 {
                f.write_str(if neg { " - " } else { " + " })?;
            } else if neg {
                f.write_str("-")?;
            }
            let a = if neg { -c.clone() } else { c.clone() };
            match (*k, a == Rat::from_integer(1.into())) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => f.write_str("t")?,
                (1, false) => write!(f, "{a}*t")?,
                (k, true) => write!(f, "t^{k}")?,
                (k, false) => write!(f, "{a}*t^{k}")?,
            }
        }
        Ok(())
    }
}

pub fn pullback(p: &Parametrization, f: &Poly) -> TPoly {
    let mut terms: BTreeMap<i64, Rat> = BTreeMap::new();
    for (e, c) in f.terms() {
        let slot = terms.entry(p.n.eval(e)).or_insert_with(Rat::zero);
        *slot += c;
    }
    terms.retain(|_, c| !c.is_zero());
    TPoly { terms }
}

/// Multi-indices of total order exactly `k` in `dim` variables.
pub(crate) fn multi_indices(dim: usize, k: u32) -> Vec<ExpVec> {
    crate::valuation::monomials_up_to(dim, k)
        .into_iter()
        .filter(|a| a.degree() == k)
        .collect()
}

pub fn symbolic_member(p: &Parametrization, f: &Poly, m: i64) -> bool {
    if m <= 0 || f.is_zero() {
        return true;
    }
    let dim = f.dim();
    // Derivatives of order k are built from those of order k - 1.
    let mut layer: HashMap<ExpVec, Poly> = HashMap::from([(ExpVec::zero(dim), f.clone())]);
    for k in 0..m as u32 {
        if layer.values().any(|g| !pullback(p, g).is_zero()) {
            return false;
        }
        if k + 1 == m as u32 {
            break;
        }
        let mut next = HashMap::new();
        for alpha in multi_indices(dim, k + 1) {
            let (i, prev) = (0..dim)
                .find_map(|i| alpha.checked_sub(&ExpVec::unit(dim, i)).map(|b| (i, b)))
                .unwrap();
            let g = layer[&prev].derivative(i);
            if !g.is_zero() {
                next.insert(alpha, g);
            }
        }
        if next.is_empty() {
            return true;
        }
        layer = next;
    }
    true
}
