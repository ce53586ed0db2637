//! Multiplier ideals `J(I^λ)` of monomial curve ideals as the intersection of
//! a symbolic power, the multiplier ideal of the term ideal, and one or two
//! valuation ideals; log canonical thresholds and jumping numbers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::curve::{Binomial, CurveData};
use crate::exec::Execution;
use crate::linalg::{nullspace, rref};
use crate::newton::{
    monomial_lct, newton_polyhedron, MonomialIdeal, NewtonError, NewtonPolyhedron, ShiftVec,
};
use crate::poly::{
    ceil_i64, floor_i64, int, is_positive, serialize_rat, ExpVec, Order, Poly, Rat, RatJson,
};
use crate::symbolic::{multi_indices, symbolic_member, Parametrization};
use crate::valuation::{
    monomials_up_to, nu1, nu2, GenSeqValuation, MonomialExpansions, ValuationError,
};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum MultiplierError {
    #[error("multiplier exponent must be positive, got {0}")]
    NonPositiveLambda(Rat),
    #[error("the two-valuation formula needs a non-complete-intersection curve with e_2 ≠ 0")]
    BranchUnavailable,
    #[error("binomial must live in 2 or 3 variables, got {0}")]
    UnsupportedDimension(usize),
    #[error(transparent)]
    Newton(#[from] NewtonError),
    #[error(transparent)]
    Valuation(#[from] ValuationError),
}

/// Which form of the intersection formula is used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// `ν_1` only: complete intersections and `e_2(d_3−d_1) ≤ e_1(d_3−d_2)`.
    One,
    /// `ν_1` and `ν_2`.
    Two,
}

impl Branch {
    /// The branch the formula prescribes for this curve.
    pub fn natural(c: &CurveData) -> Branch {
        if c.case_two {
            Branch::Two
        } else {
            Branch::One
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    #[serde(rename = "term-ideal")]
    TermIdeal,
    #[serde(rename = "monomial-facet")]
    MonomialFacet,
    Nu1,
    Nu2,
    Symbolic,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::TermIdeal => "term-ideal",
            Source::MonomialFacet => "monomial-facet",
            Source::Nu1 => "nu1",
            Source::Nu2 => "nu2",
            Source::Symbolic => "symbolic",
        })
    }
}

/// `ν(f) ≥ bound` with `bound = ⌊aλ − k⌋ ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValConstraint {
    pub source: Source,
    pub valuation: GenSeqValuation,
    pub a: i64,
    pub k: i64,
    pub bound: i64,
}

/// The curve data with everything that does not depend on `λ` precomputed.
#[derive(Clone, Debug)]
pub struct CurveMultiplier {
    curve: CurveData,
    term: MonomialIdeal,
    term_polyhedron: NewtonPolyhedron,
    nu1: GenSeqValuation,
    nu2: Option<GenSeqValuation>,
}

impl CurveMultiplier {
    pub fn new(curve: &CurveData) -> Result<Self, MultiplierError> {
        let term = curve.term_ideal();
        let term_polyhedron = newton_polyhedron(&term)?;
        let nu2 = match nu2(curve) {
            Ok(v) => Some(v),
            Err(ValuationError::NotDefined | ValuationError::KeyValueTooSmall { .. }) => None,
            Err(e) => return Err(e.into()),
        };
        Ok(CurveMultiplier {
            curve: curve.clone(),
            term,
            term_polyhedron,
            nu1: nu1(curve)?,
            nu2,
        })
    }

    pub fn curve(&self) -> &CurveData {
        &self.curve
    }

    pub fn term_ideal(&self) -> &MonomialIdeal {
        &self.term
    }

    pub fn term_polyhedron(&self) -> &NewtonPolyhedron {
        &self.term_polyhedron
    }

    /// `(source, valuation, a, k)` for every valuation used by `branch`.
    fn valuations(
        &self,
        branch: Branch,
    ) -> Result<Vec<(Source, &GenSeqValuation, i64, i64)>, MultiplierError> {
        let mut out = vec![(Source::Nu1, &self.nu1, self.curve.a[0], self.curve.k[0])];
        if branch == Branch::Two {
            let v = self
                .nu2
                .as_ref()
                .ok_or(MultiplierError::BranchUnavailable)?;
            let (a2, k2) = self
                .curve
                .second_valuation_params()
                .ok_or(MultiplierError::BranchUnavailable)?;
            out.push((Source::Nu2, v, a2, k2));
        }
        Ok(out)
    }

    pub fn describe(
        &self,
        lambda: &Rat,
        branch: Branch,
    ) -> Result<MultiplierDescription, MultiplierError> {
        if !is_positive(lambda) {
            return Err(MultiplierError::NonPositiveLambda(lambda.clone()));
        }
        let monomial_part = self
            .term_polyhedron
            .multiplier_ideal(lambda, &ShiftVec::ones(3))?;
        let val_constraints = self
            .valuations(branch)?
            .into_iter()
            .filter_map(|(source, v, a, k)| {
                let bound = floor_i64(&(int(a) * lambda - int(k)));
                (bound >= 1).then(|| ValConstraint {
                    source,
                    valuation: v.clone(),
                    a,
                    k,
                    bound,
                })
            })
            .collect();
        Ok(MultiplierDescription {
            lambda: lambda.clone(),
            branch,
            monomial_part,
            val_constraints,
            symbolic_exponent: (floor_i64(lambda) - 1).max(0),
            parametrization: Parametrization::new(self.curve.n.clone()),
        })
    }

    pub fn lct(&self, branch: Branch) -> Result<LctReport, MultiplierError> {
        let mut terms = vec![(
            Source::TermIdeal,
            self.term_polyhedron.lct(&ShiftVec::ones(3))?,
        )];
        for (source, _, a, k) in self.valuations(branch)? {
            terms.push((source, Rat::new((k + 1).into(), a.into())));
        }
        let lct = terms.iter().map(|(_, v)| v.clone()).min().unwrap();
        let attained_by = terms
            .iter()
            .filter(|(_, v)| *v == lct)
            .map(|(s, _)| *s)
            .collect();
        Ok(LctReport {
            lct,
            attained_by,
            terms: terms
                .into_iter()
                .map(|(source, value)| LctTerm { source, value })
                .collect(),
        })
    }

    /// Candidate jumping numbers in `(0, max_lambda]` by source.
    pub fn jump_candidates(
        &self,
        max_lambda: &Rat,
        branch: Branch,
    ) -> Result<Vec<Candidate>, MultiplierError> {
        let mut found: BTreeMap<Rat, BTreeSet<Source>> = BTreeMap::new();
        let mut add = |x: Rat, s: Source| {
            if is_positive(&x) && &x <= max_lambda {
                found.entry(x).or_default().insert(s);
            }
        };
        for f in self.term_polyhedron.positive_facets() {
            let u = f.normal.entries();
            let base: i64 = u.iter().sum();
            // ⟨u, v + 1⟩ / N ≤ max_lambda  ⇔  ⟨u, v⟩ ≤ ⌊max_lambda·N⌋ − ⟨u, 1⟩
            let top = floor_i64(&(max_lambda * int(f.level))) - base;
            for s in representable(u, top) {
                add(
                    Rat::new((base + s).into(), f.level.into()),
                    Source::MonomialFacet,
                );
            }
        }
        for (source, _, a, k) in self.valuations(branch)? {
            let top = floor_i64(&(max_lambda * int(a))) - k;
            for j in 1..=top {
                add(Rat::new((k + j).into(), a.into()), source);
            }
        }
        for j in 1..=floor_i64(max_lambda) {
            add(int(j), Source::Symbolic);
        }
        Ok(found
            .into_iter()
            .map(|(value, sources)| Candidate {
                value,
                sources: sources.into_iter().collect(),
            })
            .collect())
    }

    pub fn jumping_numbers(
        &self,
        max_lambda: &Rat,
        max_degree: u32,
        branch: Branch,
        exec: Execution,
    ) -> Result<JumpReport, MultiplierError> {
        let candidates = self.jump_candidates(max_lambda, branch)?;
        let probes: Vec<(Rat, Rat)> = candidates
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let prev = if i == 0 {
                    Rat::zero()
                } else {
                    candidates[i - 1].value.clone()
                };
                let mid = (prev + &c.value) / int(2);
                (c.value.clone(), mid)
            })
            .collect();
        let results = exec.map(
            &probes,
            |(lam, mid)| -> Result<VerifiedCandidate, MultiplierError> {
                let at = self
                    .describe(lam, branch)?
                    .dimension_up_to_degree(max_degree);
                let before = self
                    .describe(mid, branch)?
                    .dimension_up_to_degree(max_degree);
                Ok(VerifiedCandidate {
                    value: lam.clone(),
                    is_jump: at != before,
                    degree_bound: max_degree,
                    dimension_before: before,
                    dimension_at: at,
                })
            },
        );
        Ok(JumpReport {
            max_lambda: max_lambda.clone(),
            degree_bound: max_degree,
            branch,
            candidates,
            verified: results.into_iter().collect::<Result<_, _>>()?,
        })
    }
}

/// Values `⟨u, v⟩ ≤ top` over `v ∈ ℕ^dim`.
fn representable(u: &[i64], top: i64) -> Vec<i64> {
    if top < 0 {
        return vec![];
    }
    let top = top as usize;
    let mut ok = vec![false; top + 1];
    ok[0] = true;
    for s in 1..=top {
        ok[s] = u
            .iter()
            .any(|&g| g > 0 && (g as usize) <= s && ok[s - g as usize]);
    }
    (0..=top).filter(|&s| ok[s]).map(|s| s as i64).collect()
}

/// Default degree bound for jump verification.
pub fn default_degree_bound(c: &CurveData, max_lambda: &Rat) -> u32 {
    c.max_generator_degree() * (2 + ceil_i64(max_lambda).max(0) as u32) + 4
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplierDescription {
    pub lambda: Rat,
    pub branch: Branch,
    pub monomial_part: MonomialIdeal,
    pub val_constraints: Vec<ValConstraint>,
    pub symbolic_exponent: i64,
    pub parametrization: Parametrization,
}

impl Serialize for MultiplierDescription {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("MultiplierDescription", 5)?;
        st.serialize_field("lambda", &RatJson(&self.lambda))?;
        st.serialize_field("branch", &self.branch)?;
        st.serialize_field("monomial_part", &self.monomial_part.to_string())?;
        st.serialize_field("monomial_part_generators", self.monomial_part.gens())?;
        st.serialize_field("val_constraints", &self.val_constraints)?;
        st.serialize_field("symbolic_exponent", &self.symbolic_exponent)?;
        st.end()
    }
}

impl MultiplierDescription {
    pub fn member(&self, f: &Poly) -> bool {
        f.exponents().all(|e| self.monomial_part.contains(e))
            && self
                .val_constraints
                .iter()
                .all(|c| c.valuation.value(f) >= Order::Finite(c.bound))
            && symbolic_member(&self.parametrization, f, self.symbolic_exponent)
    }

    pub fn is_unit(&self) -> bool {
        self.member(&Poly::one(3))
    }

    /// Membership factor by factor.
    pub fn explain(&self, f: &Poly) -> Membership {
        let outside = f
            .exponents()
            .filter(|e| !self.monomial_part.contains(e))
            .cloned()
            .collect::<Vec<_>>();
        let valuations: Vec<ValuationCheck> = self
            .val_constraints
            .iter()
            .map(|c| {
                let value = c.valuation.value(f);
                ValuationCheck {
                    source: c.source,
                    value,
                    bound: c.bound,
                    ok: value >= Order::Finite(c.bound),
                }
            })
            .collect();
        let symbolic_ok = symbolic_member(&self.parametrization, f, self.symbolic_exponent);
        Membership {
            member: outside.is_empty() && valuations.iter().all(|v| v.ok) && symbolic_ok,
            monomial_ok: outside.is_empty(),
            terms_outside_monomial_part: outside,
            valuations,
            symbolic_exponent: self.symbolic_exponent,
            symbolic_ok,
        }
    }

    /// Monomials of degree at most `max_degree` in the monomial part, grouped
    /// by `n`-degree. Every condition is homogeneous for the `n`-grading, so
    /// the blocks can be solved separately.
    fn blocks(&self, max_degree: u32) -> BTreeMap<i64, Vec<ExpVec>> {
        let n = self.parametrization.weights();
        let mut out: BTreeMap<i64, Vec<ExpVec>> = BTreeMap::new();
        for v in monomials_up_to(3, max_degree) {
            if self.monomial_part.contains(&v) {
                out.entry(n.eval(&v)).or_default().push(v);
            }
        }
        out
    }

    /// Linear conditions on the coefficients of a polynomial on `cols`.
    fn conditions(&self, cols: &[ExpVec], memos: &mut [MonomialExpansions<'_>]) -> Vec<Vec<Rat>> {
        let mut rows: BTreeMap<(usize, u32, ExpVec), Vec<Rat>> = BTreeMap::new();
        for (ci, (c, memo)) in self
            .val_constraints
            .iter()
            .zip(memos.iter_mut())
            .enumerate()
        {
            for (j, v) in cols.iter().enumerate() {
                for ((b, a), coeff) in memo.get(v) {
                    if c.valuation.coordinate_value(a, *b) < c.bound {
                        rows.entry((ci, *b, a.clone()))
                            .or_insert_with(|| vec![Rat::zero(); cols.len()])[j] += coeff;
                    }
                }
            }
        }
        let mut out: Vec<Vec<Rat>> = rows.into_values().collect();
        // ∂^α x^v pulls back to (v)_α · t^{⟨n, v − α⟩}, one power of t per block.
        for k in 0..self.symbolic_exponent.max(0) as u32 {
            for alpha in multi_indices(3, k) {
                let row: Vec<Rat> = cols.iter().map(|v| falling(v, &alpha)).collect();
                if row.iter().any(|x| !x.is_zero()) {
                    out.push(row);
                }
            }
        }
        out
    }

    fn block_solutions(&self, max_degree: u32) -> Vec<(Vec<ExpVec>, Vec<Vec<Rat>>, usize)> {
        let mut memos: Vec<MonomialExpansions<'_>> = self
            .val_constraints
            .iter()
            .map(|c| MonomialExpansions::new(&c.valuation))
            .collect();
        self.blocks(max_degree)
            .into_values()
            .map(|cols| {
                let rows = self.conditions(&cols, &mut memos);
                let mut reduced = rows;
                let rank = rref(&mut reduced, cols.len()).len();
                (cols, reduced, rank)
            })
            .collect()
    }

    /// Dimension of `{f ∈ J : deg f ≤ max_degree}`.
    pub fn dimension_up_to_degree(&self, max_degree: u32) -> usize {
        self.block_solutions(max_degree)
            .into_iter()
            .map(|(cols, _, rank)| cols.len() - rank)
            .sum()
    }

    /// A basis of `{f ∈ J : deg f ≤ max_degree}`, block by block in `n`-degree.
    pub fn basis_up_to_degree(&self, max_degree: u32) -> Vec<Poly> {
        let mut out = Vec::new();
        for (cols, reduced, _) in self.block_solutions(max_degree) {
            for v in nullspace(&reduced, cols.len()) {
                out.push(Poly::from_terms(3, cols.iter().cloned().zip(v)));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValuationCheck {
    pub source: Source,
    pub value: Order,
    pub bound: i64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub member: bool,
    pub monomial_ok: bool,
    pub terms_outside_monomial_part: Vec<ExpVec>,
    pub valuations: Vec<ValuationCheck>,
    pub symbolic_exponent: i64,
    pub symbolic_ok: bool,
}

/// `v!/(v − α)!` when `α ≤ v`, else 0.
fn falling(v: &ExpVec, alpha: &ExpVec) -> Rat {
    let mut acc: i64 = 1;
    for (&vi, &ai) in v.entries().iter().zip(alpha.entries()) {
        if ai > vi {
            return Rat::zero();
        }
        for s in 0..ai {
            acc *= (vi - s) as i64;
        }
    }
    int(acc)
}

pub fn multiplier_description(
    c: &CurveData,
    lambda: &Rat,
) -> Result<MultiplierDescription, MultiplierError> {
    CurveMultiplier::new(c)?.describe(lambda, Branch::natural(c))
}

/// Like [`multiplier_description`] with an explicit branch; `Branch::Two` on
/// an equality curve gives the second form for cross-checking.
pub fn multiplier_description_with(
    c: &CurveData,
    lambda: &Rat,
    branch: Branch,
) -> Result<MultiplierDescription, MultiplierError> {
    CurveMultiplier::new(c)?.describe(lambda, branch)
}

pub fn member(desc: &MultiplierDescription, f: &Poly) -> bool {
    desc.member(f)
}

pub fn basis_up_to_degree(desc: &MultiplierDescription, max_degree: u32) -> Vec<Poly> {
    desc.basis_up_to_degree(max_degree)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LctTerm {
    pub source: Source,
    #[serde(serialize_with = "serialize_rat")]
    pub value: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LctReport {
    #[serde(serialize_with = "serialize_rat")]
    pub lct: Rat,
    pub attained_by: Vec<Source>,
    pub terms: Vec<LctTerm>,
}

pub fn curve_lct(c: &CurveData) -> Result<LctReport, MultiplierError> {
    CurveMultiplier::new(c)?.lct(Branch::natural(c))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Candidate {
    #[serde(serialize_with = "serialize_rat")]
    pub value: Rat,
    pub sources: Vec<Source>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifiedCandidate {
    #[serde(serialize_with = "serialize_rat")]
    pub value: Rat,
    pub is_jump: bool,
    pub degree_bound: u32,
    pub dimension_before: usize,
    pub dimension_at: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JumpReport {
    #[serde(serialize_with = "serialize_rat")]
    pub max_lambda: Rat,
    pub degree_bound: u32,
    pub branch: Branch,
    pub candidates: Vec<Candidate>,
    pub verified: Vec<VerifiedCandidate>,
}

impl JumpReport {
    pub fn jumps(&self) -> impl Iterator<Item = &Rat> + '_ {
        self.verified.iter().filter(|v| v.is_jump).map(|v| &v.value)
    }
}

pub fn jumping_numbers(
    c: &CurveData,
    max_lambda: &Rat,
    max_degree: u32,
    exec: Execution,
) -> Result<JumpReport, MultiplierError> {
    CurveMultiplier::new(c)?.jumping_numbers(max_lambda, max_degree, Branch::natural(c), exec)
}

/// `J(b^λ) = J(𝔱^λ) ∩ (b)^{⌊λ⌋}` for an irreducible binomial `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalMultiplier {
    pub binomial: Binomial,
    pub lambda: Rat,
    pub monomial_part: MonomialIdeal,
    pub power: u32,
}

impl Serialize for PrincipalMultiplier {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("PrincipalMultiplier", 5)?;
        st.serialize_field("binomial", &self.binomial)?;
        st.serialize_field("lambda", &RatJson(&self.lambda))?;
        st.serialize_field("monomial_part", &self.monomial_part.to_string())?;
        st.serialize_field("monomial_part_generators", self.monomial_part.gens())?;
        st.serialize_field("power", &self.power)?;
        st.end()
    }
}

impl PrincipalMultiplier {
    pub fn member(&self, f: &Poly) -> bool {
        f.exponents().all(|e| self.monomial_part.contains(e))
            && f.is_divisible_by(&self.binomial.to_poly().pow(self.power))
    }

    pub fn is_unit(&self) -> bool {
        self.monomial_part.is_unit() && self.power == 0
    }
}

fn binomial_term_ideal(b: &Binomial, dim: usize) -> Result<MonomialIdeal, MultiplierError> {
    if b.dim() != dim || !(dim == 2 || dim == 3) {
        return Err(MultiplierError::UnsupportedDimension(b.dim()));
    }
    Ok(MonomialIdeal::new(dim, [b.plus.clone(), b.minus.clone()])?)
}

pub fn principal_binomial_multiplier(
    b: &Binomial,
    lambda: &Rat,
    dim: usize,
) -> Result<PrincipalMultiplier, MultiplierError> {
    if !is_positive(lambda) {
        return Err(MultiplierError::NonPositiveLambda(lambda.clone()));
    }
    let term = binomial_term_ideal(b, dim)?;
    Ok(PrincipalMultiplier {
        binomial: b.clone(),
        lambda: lambda.clone(),
        monomial_part: newton_polyhedron(&term)?.multiplier_ideal(lambda, &ShiftVec::ones(dim))?,
        power: floor_i64(lambda) as u32,
    })
}

/// `min(lct(𝔱), 1)`.
pub fn principal_binomial_lct(b: &Binomial, dim: usize) -> Result<Rat, MultiplierError> {
    let term = binomial_term_ideal(b, dim)?;
    Ok(match monomial_lct(&term, &ShiftVec::ones(dim)) {
        Ok(v) => v.min(Rat::one()),
        Err(NewtonError::UnitIdeal) => Rat::one(),
        Err(e) => return Err(e.into()),
    })
}
