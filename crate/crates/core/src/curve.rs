//! Monomial space curves `t ↦ (t^{n_1}, t^{n_2}, t^{n_3})`: binomial
//! generators of the curve ideal and the invariants that feed the multiplier
//! formula.

use std::fmt;

use num_traits::One;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::exec::Execution;
use crate::newton::MonomialIdeal;
use crate::poly::{gcd_slice, ExpVec, IntVec, Poly, Rat, Weight};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CurveError {
    #[error("weight vector must have 3 entries, got {0}")]
    WrongLength(usize),
    #[error("weights must be positive: {0}")]
    NonPositive(Weight),
    #[error("weights must be pairwise distinct: {0}")]
    RepeatedEntries(Weight),
    #[error("weight vector {0} is not primitive")]
    NotPrimitive(Weight),
    #[error("binomial x^{plus} - x^{minus} is not irreducible")]
    NotIrreducible { plus: ExpVec, minus: ExpVec },
    #[error("generators have tied n-orders {0:?}; a strict order d_1 < d_2 < d_3 is required")]
    OrderTie(Vec<i64>),
    #[error("no coordinate order makes n_i divide d_i for d = {0:?}")]
    NoValidPermutation(Vec<i64>),
    #[error("no nonnegative q with q_3 = 0 is orthogonal to m_1 = {0}")]
    NoNonnegativeQ(IntVec),
}

/// `x^plus - x^minus` with disjoint supports.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Binomial {
    pub plus: ExpVec,
    pub minus: ExpVec,
}

impl Binomial {
    pub fn new(plus: ExpVec, minus: ExpVec) -> Result<Self, CurveError> {
        if plus == minus || !plus.coprime(&minus) || plus.dim() != minus.dim() {
            return Err(CurveError::NotIrreducible { plus, minus });
        }
        Ok(Binomial { plus, minus })
    }

    pub fn dim(&self) -> usize {
        self.plus.dim()
    }

    pub fn to_poly(&self) -> Poly {
        Poly::binomial(&self.plus, &self.minus)
    }

    /// `plus - minus`.
    pub fn exponent(&self) -> IntVec {
        self.plus.diff(&self.minus)
    }

    pub fn flipped(&self) -> Binomial {
        Binomial {
            plus: self.minus.clone(),
            minus: self.plus.clone(),
        }
    }

    pub fn permute(&self, perm: &[usize]) -> Binomial {
        Binomial {
            plus: self.plus.permute(perm),
            minus: self.minus.permute(perm),
        }
    }

    pub fn degree(&self) -> u32 {
        self.plus.degree().max(self.minus.degree())
    }

    pub fn has_term(&self, e: &ExpVec) -> bool {
        &self.plus == e || &self.minus == e
    }
}

impl fmt::Display for Binomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one = Rat::one();
        write!(
            f,
            "{} - {}",
            Poly::monomial(self.plus.clone(), one.clone()),
            Poly::monomial(self.minus.clone(), one)
        )
    }
}

impl Serialize for Binomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Binomial", 3)?;
        st.serialize_field("poly", &self.to_string())?;
        st.serialize_field("plus", &self.plus)?;
        st.serialize_field("minus", &self.minus)?;
        st.end()
    }
}

fn check_weights(n: &Weight) -> Result<(), CurveError> {
    let e = n.entries();
    if e.len() != 3 {
        return Err(CurveError::WrongLength(e.len()));
    }
    if e.iter().any(|&x| x <= 0) {
        return Err(CurveError::NonPositive(n.clone()));
    }
    if e[0] == e[1] || e[0] == e[2] || e[1] == e[2] {
        return Err(CurveError::RepeatedEntries(n.clone()));
    }
    if gcd_slice(e) != 1 {
        return Err(CurveError::NotPrimitive(n.clone()));
    }
    Ok(())
}

/// All `(a, b)` with `a·p + b·q = target`, ordered by `a`.
fn representations(target: i64, p: i64, q: i64) -> Vec<(i64, i64)> {
    (0..=target / p)
        .filter(|a| (target - a * p) % q == 0)
        .map(|a| (a, (target - a * p) / q))
        .collect()
}

fn pure_power(i: usize, k: i64) -> ExpVec {
    ExpVec::unit(3, i).scale(k as u32)
}

fn mono(pairs: &[(usize, i64)]) -> ExpVec {
    let mut e = vec![0u32; 3];
    for &(i, k) in pairs {
        e[i] += k as u32;
    }
    ExpVec::new(e)
}

/// The minimal relations of a three-generated numerical semigroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemigroupRelations {
    /// `c_i`: least `c ≥ 1` with `c·n_i` in the semigroup of the other two.
    pub c: [i64; 3],
    pub gens: Vec<Binomial>,
    pub is_ci: bool,
}

impl SemigroupRelations {
    /// Some `n_i` already lies in the semigroup generated by the other two.
    pub fn on_smooth_surface(&self) -> bool {
        self.c.contains(&1)
    }
}

pub fn semigroup_relations(n: &Weight) -> Result<SemigroupRelations, CurveError> {
    check_weights(n)?;
    let w = n.entries();
    let others = |i: usize| -> (usize, usize) {
        match i {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        }
    };
    // c_i ≤ n_j always, since n_j·n_i is a multiple of n_j.
    let c: [i64; 3] = std::array::from_fn(|i| {
        let (j, k) = others(i);
        (1..=w[j])
            .find(|&c| !representations(c * w[i], w[j], w[k]).is_empty())
            .unwrap()
    });
    let glued = [(0, 1), (0, 2), (1, 2)]
        .into_iter()
        .find(|&(i, j)| c[i] * w[i] == c[j] * w[j]);
    let gens = match glued {
        Some((i, j)) => {
            let k = 3 - i - j;
            // Reduce the i-exponent below c_i using x_i^{c_i} = x_j^{c_j}.
            let (a, b) = representations(c[k] * w[k], w[i], w[j])
                .into_iter()
                .find(|&(a, _)| a < c[i])
                .expect("a representation exists and reduces modulo the glued relation");
            vec![
                Binomial::new(pure_power(i, c[i]), pure_power(j, c[j]))?,
                Binomial::new(pure_power(k, c[k]), mono(&[(i, a), (j, b)]))?,
            ]
        }
        None => (0..3)
            .map(|i| {
                let (j, k) = others(i);
                let reps = representations(c[i] * w[i], w[j], w[k]);
                let (a, b) = reps
                    .iter()
                    .copied()
                    .find(|&(a, b)| a > 0 && b > 0)
                    .unwrap_or(reps[0]);
                Binomial::new(pure_power(i, c[i]), mono(&[(j, a), (k, b)]))
            })
            .collect::<Result<Vec<_>, _>>()?,
    };
    Ok(SemigroupRelations {
        c,
        gens,
        is_ci: glued.is_some(),
    })
}

/// A minimal binomial generating set of the ideal of the curve, in the input coordinates.
pub fn curve_generators(n: &Weight) -> Result<Vec<Binomial>, CurveError> {
    Ok(semigroup_relations(n)?.gens)
}

/// How the inequality `e_2(d_3 − d_1) ≤ e_1(d_3 − d_2)` selecting the
/// one-valuation formula is decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseClass {
    CompleteIntersection,
    Less,
    Equality,
    Greater,
}

impl fmt::Display for CaseClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseClass::CompleteIntersection => "ci",
            CaseClass::Less => "less",
            CaseClass::Equality => "equality",
            CaseClass::Greater => "greater",
        })
    }
}

pub const SMOOTH_SURFACE_WARNING: &str =
    "smooth-toric-surface case: formula applied outside its hypotheses";

/// The invariant packet of a monomial curve after normalizing coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveData {
    /// The weights as given.
    pub input_n: Weight,
    /// `perm[k]` is the input coordinate that became coordinate `k`.
    pub perm: [usize; 3],
    pub n: Weight,
    pub gens: Vec<Binomial>,
    pub d: Vec<i64>,
    pub m1: IntVec,
    pub q: Weight,
    pub e: Vec<i64>,
    pub is_ci: bool,
    pub case_two: bool,
    pub a: Vec<i64>,
    pub k: Vec<i64>,
    pub smooth_surface: bool,
    pub warnings: Vec<String>,
}

impl CurveData {
    pub fn class(&self) -> CaseClass {
        if self.is_ci {
            return CaseClass::CompleteIntersection;
        }
        let (lhs, rhs) = self.case_sides().unwrap();
        match lhs.cmp(&rhs) {
            std::cmp::Ordering::Less => CaseClass::Less,
            std::cmp::Ordering::Equal => CaseClass::Equality,
            std::cmp::Ordering::Greater => CaseClass::Greater,
        }
    }

    /// `(e_2(d_3 − d_1), e_1(d_3 − d_2))`, defined when `f_3` exists.
    pub fn case_sides(&self) -> Option<(i64, i64)> {
        let d3 = *self.d.get(2)?;
        let (d1, d2) = (self.d[0], self.d[1]);
        Some((self.e[1] * (d3 - d1), self.e[0] * (d3 - d2)))
    }

    pub fn n_sum(&self) -> i64 {
        self.n.entries().iter().sum()
    }

    /// `(a_2, k_2)` of the second auxiliary valuation; defined whenever `f_3` exists.
    pub fn second_valuation_params(&self) -> Option<(i64, i64)> {
        let d3 = *self.d.get(2)?;
        let (d1, d2) = (self.d[0], self.d[1]);
        let (e1, e2) = (self.e[0], self.e[1]);
        let q = self.q.entries();
        let a2 = e2 * d3;
        let k2 = e2 * self.n_sum() + (d3 - d1) * (q[0] + q[1]) + e2 * (d3 - d1) - e1 * (d3 - d2);
        Some((a2, k2))
    }

    pub fn generator_polys(&self) -> Vec<Poly> {
        self.gens.iter().map(Binomial::to_poly).collect()
    }

    pub fn max_generator_degree(&self) -> u32 {
        self.gens.iter().map(Binomial::degree).max().unwrap_or(0)
    }

    /// The ideal generated by every monomial appearing in the generators.
    pub fn term_ideal(&self) -> MonomialIdeal {
        MonomialIdeal::new(
            3,
            self.gens
                .iter()
                .flat_map(|g| [g.plus.clone(), g.minus.clone()]),
        )
        .expect("term ideal of a curve in 3 variables")
    }
}

/// Lexicographic order of the six coordinate permutations.
const PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

pub fn derive_curve_data(n: &Weight) -> Result<CurveData, CurveError> {
    let rel = semigroup_relations(n)?;
    let mut gens: Vec<(i64, Binomial)> = rel
        .gens
        .iter()
        .map(|g| {
            let d = n.eval(&g.plus);
            debug_assert_eq!(d, n.eval(&g.minus));
            (d, g.clone())
        })
        .collect();
    gens.sort_by_key(|(d, _)| *d);
    let d: Vec<i64> = gens.iter().map(|(d, _)| *d).collect();
    if d.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CurveError::OrderTie(d));
    }
    let w = n.entries();
    let divides = |p: &[usize; 3]| (0..d.len()).all(|i| d[i] % w[p[i]] == 0);
    // Among the admissible orders prefer one where f_i carries the pure power
    // x_i^{d_i/n_i}; that is the shape the formula's invariants are stated for.
    let pure = |p: &[usize; 3]| {
        (0..d.len()).all(|i| gens[i].1.has_term(&pure_power(p[i], d[i] / w[p[i]])))
    };
    let perm = PERMS
        .iter()
        .find(|p| divides(p) && pure(p))
        .or_else(|| PERMS.iter().find(|p| divides(p)))
        .copied()
        .ok_or_else(|| CurveError::NoValidPermutation(d.clone()))?;

    let n_new = n.permute(&perm);
    let mut binoms: Vec<Binomial> = gens.iter().map(|(_, g)| g.permute(&perm)).collect();
    let m1 = binoms[0].exponent();
    if m1
        .entries()
        .iter()
        .find(|&&x| x != 0)
        .is_some_and(|&x| x < 0)
    {
        binoms[0] = binoms[0].flipped();
    }
    let m1 = binoms[0].exponent();
    let q = orthogonal_q(&m1)?;
    let e: Vec<i64> = binoms
        .iter()
        .map(|g| q.eval(&g.plus).min(q.eval(&g.minus)))
        .collect();
    let is_ci = binoms.len() == 2;
    let n_sum: i64 = n_new.entries().iter().sum();
    let mut data = CurveData {
        input_n: n.clone(),
        perm,
        n: n_new,
        gens: binoms,
        d,
        m1,
        q,
        e,
        is_ci,
        case_two: false,
        a: vec![],
        k: vec![],
        smooth_surface: rel.on_smooth_surface(),
        warnings: vec![],
    };
    data.a.push(data.d[1]);
    data.k.push(n_sum + data.d[1] - data.d[0]);
    if let Some((lhs, rhs)) = data.case_sides() {
        data.case_two = lhs > rhs;
    }
    if data.case_two {
        let (a2, k2) = data.second_valuation_params().unwrap();
        data.a.push(a2);
        data.k.push(k2);
    }
    if data.smooth_surface {
        data.warnings.push(SMOOTH_SURFACE_WARNING.to_string());
    }
    if data.e[0] <= data.e[1] {
        data.warnings
            .push(format!("expected e_1 > e_2, found e = {:?}", data.e));
    }
    Ok(data)
}

/// Primitive `q = (q_1, q_2, 0) ≥ 0` with `⟨q, m_1⟩ = 0`.
fn orthogonal_q(m1: &IntVec) -> Result<Weight, CurveError> {
    let m = m1.entries();
    let q = match (m[0], m[1]) {
        (0, 0) => return Err(CurveError::NoNonnegativeQ(m1.clone())),
        (0, _) => vec![1, 0, 0],
        (_, 0) => vec![0, 1, 0],
        (a, b) if (a > 0) != (b > 0) => {
            let g = gcd_slice(&[a, b]);
            vec![b.abs() / g, a.abs() / g, 0]
        }
        _ => return Err(CurveError::NoNonnegativeQ(m1.clone())),
    };
    Ok(Weight::new(q).unwrap())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurveyStatus {
    Ok,
    SmoothSurface,
    Rejected,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurveyEntry {
    pub n: [i64; 3],
    pub status: SurveyStatus,
    pub class: Option<CaseClass>,
    /// Whether `e_1 > e_2`.
    pub e_order_ok: Option<bool>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SurveyCounts {
    pub ci: usize,
    pub less: usize,
    pub equality: usize,
    pub greater: usize,
    pub smooth_surface: usize,
    pub rejected: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurveyReport {
    pub bound: i64,
    pub triples: usize,
    /// Class counts are over curves satisfying the hypotheses (status `ok`).
    pub counts: SurveyCounts,
    /// Every triple found with `e_2(d_3 − d_1) > e_1(d_3 − d_2)`, flagged or not.
    pub strict_greater: Vec<SurveyEntry>,
    /// Curves with status `ok` where `e_1 > e_2` fails, split by complete intersection.
    pub e_order_violations_ci: usize,
    pub e_order_violations_non_ci: Vec<[i64; 3]>,
    pub entries: Vec<SurveyEntry>,
}

/// Primitive triples `n_1 < n_2 < n_3 ≤ bound`.
pub fn primitive_triples(bound: i64) -> Vec<[i64; 3]> {
    let mut out = Vec::new();
    for a in 1..=bound {
        for b in a + 1..=bound {
            for c in b + 1..=bound {
                if gcd_slice(&[a, b, c]) == 1 {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

pub fn survey_cases(bound: i64, exec: Execution) -> SurveyReport {
    let triples = primitive_triples(bound);
    let entries = exec.map(&triples, |&t| {
        let n = Weight::new(t.to_vec()).unwrap();
        match derive_curve_data(&n) {
            Ok(c) => SurveyEntry {
                n: t,
                status: if c.smooth_surface {
                    SurveyStatus::SmoothSurface
                } else {
                    SurveyStatus::Ok
                },
                class: Some(c.class()),
                e_order_ok: Some(c.e[0] > c.e[1]),
                error: None,
            },
            Err(e) => SurveyEntry {
                n: t,
                status: SurveyStatus::Rejected,
                class: None,
                e_order_ok: None,
                error: Some(e.to_string()),
            },
        }
    });
    let mut counts = SurveyCounts::default();
    for e in &entries {
        match (e.status, e.class) {
            (SurveyStatus::Rejected, _) => counts.rejected += 1,
            (SurveyStatus::SmoothSurface, _) => counts.smooth_surface += 1,
            (SurveyStatus::Ok, Some(CaseClass::CompleteIntersection)) => counts.ci += 1,
            (SurveyStatus::Ok, Some(CaseClass::Less)) => counts.less += 1,
            (SurveyStatus::Ok, Some(CaseClass::Equality)) => counts.equality += 1,
            (SurveyStatus::Ok, Some(CaseClass::Greater)) => counts.greater += 1,
            (SurveyStatus::Ok, None) => unreachable!(),
        }
    }
    let strict_greater = entries
        .iter()
        .filter(|e| e.class == Some(CaseClass::Greater))
        .cloned()
        .collect();
    let breaches = entries
        .iter()
        .filter(|e| e.status == SurveyStatus::Ok && e.e_order_ok == Some(false));
    let e_order_violations_ci = breaches
        .clone()
        .filter(|e| e.class == Some(CaseClass::CompleteIntersection))
        .count();
    let e_order_violations_non_ci = breaches
        .filter(|e| e.class != Some(CaseClass::CompleteIntersection))
        .map(|e| e.n)
        .collect();
    SurveyReport {
        bound,
        triples: triples.len(),
        counts,
        strict_greater,
        e_order_violations_ci,
        e_order_violations_non_ci,
        entries,
    }
}
