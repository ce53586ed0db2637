//! Local facet matrices of the monomialized curve ideal, checks of the second
//! valuation's weights, and brute-force oracles used to cross-check the rest
//! of the crate.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::curve::CurveData;
use crate::exec::Execution;
use crate::linalg::rank;
use crate::newton::{newton_polyhedron, MonomialIdeal, NewtonError};
use crate::poly::{gcd_slice, ExpVec, Order, Poly, Rat, Weight};
use crate::symbolic::{pullback, Parametrization};
use crate::valuation::{monomials_up_to, nu2, nu2_weights};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum AppendixError {
    #[error("matrix entry ({row}, {col}) is negative: {value}")]
    NegativeEntry { row: usize, col: usize, value: i64 },
    #[error("invalid local data: {0}")]
    InvalidData(String),
    #[error("box {box_size} is too small: {detail}")]
    BoxTooSmall { box_size: i64, detail: String },
    #[error("multiplier exponent must be positive")]
    NonPositiveLambda,
    #[error(transparent)]
    Newton(#[from] NewtonError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum LocalCase {
    A,
    B,
    C,
}

impl fmt::Display for LocalCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// The exponents `u_i = (d_i, e_i)` of the local ideal `(t^{u_1}·t_3, t^{u_2}, t^{u_3})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalIdealData {
    pub d: Vec<i64>,
    pub e: Vec<i64>,
}

impl LocalIdealData {
    pub fn new(d: Vec<i64>, e: Vec<i64>) -> Result<Self, AppendixError> {
        let bad = |m: &str| Err(AppendixError::InvalidData(m.to_string()));
        if d.len() != e.len() || !(d.len() == 2 || d.len() == 3) {
            return bad("need two or three pairs (d_i, e_i)");
        }
        if d.iter().chain(&e).any(|&x| x < 0) {
            return bad("entries must be nonnegative");
        }
        if d.windows(2).any(|w| w[0] >= w[1]) {
            return bad("d must be strictly increasing");
        }
        if e[0] <= e[1] {
            return bad("need e_1 > e_2");
        }
        Ok(LocalIdealData { d, e })
    }

    pub fn from_curve(c: &CurveData) -> Self {
        LocalIdealData {
            d: c.d.clone(),
            e: c.e.clone(),
        }
    }

    pub fn generators(&self) -> Vec<ExpVec> {
        (0..self.d.len())
            .map(|i| ExpVec::new(vec![self.d[i] as u32, self.e[i] as u32, u32::from(i == 0)]))
            .collect()
    }

    /// Third entry of the bounded-facet row, `e_2(d_3 − d_1) − e_1(d_3 − d_2)`.
    pub fn bounded_excess(&self) -> Option<i64> {
        let d3 = *self.d.get(2)?;
        Some(self.e[1] * (d3 - self.d[0]) - self.e[0] * (d3 - self.d[1]))
    }

    pub fn case(&self) -> LocalCase {
        match self.bounded_excess() {
            _ if self.e[1] == 0 => LocalCase::A,
            None => LocalCase::A,
            Some(x) if x >= 0 => LocalCase::C,
            Some(_) => LocalCase::B,
        }
    }
}

pub fn local_case(c: &CurveData) -> LocalCase {
    LocalIdealData::from_curve(c).case()
}

/// Rows of the facet matrix, as substituted (before reduction to primitive form).
pub fn matrix_rows(data: &LocalIdealData) -> Vec<[i64; 3]> {
    let (d, e) = (&data.d, &data.e);
    let mut rows = vec![[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    match data.case() {
        LocalCase::A => {
            rows.push([e[0], d[1] - d[0], 0]);
            rows.push([1, 0, d[1] - d[0]]);
        }
        LocalCase::B => {
            rows.push([e[0] - e[1], d[1] - d[0], 0]);
            rows.push([1, 0, d[1] - d[0]]);
            rows.push([e[1], d[2] - d[1], 0]);
        }
        LocalCase::C => {
            rows.push([e[0] - e[2], d[2] - d[0], 0]);
            rows.push([1, 0, d[1] - d[0]]);
            rows.push([e[1], d[2] - d[1], data.bounded_excess().unwrap()]);
        }
    }
    rows
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacetMatrix {
    pub case: LocalCase,
    /// Substituted rows.
    pub raw: Vec<[i64; 3]>,
    /// Distinct primitive forms of the rows.
    pub rows: Vec<Weight>,
}

impl FacetMatrix {
    /// Rows with a nonzero third entry.
    pub fn non_monomial_rows(&self) -> Vec<&Weight> {
        self.rows.iter().filter(|r| r.entries()[2] != 0).collect()
    }
}

fn primitive(row: &[i64]) -> Weight {
    let g = gcd_slice(row).max(1);
    Weight::new(row.iter().map(|x| x / g).collect()).unwrap()
}

pub fn appendix_matrix_of(data: &LocalIdealData) -> Result<FacetMatrix, AppendixError> {
    let raw = matrix_rows(data);
    for (r, row) in raw.iter().enumerate() {
        if let Some(col) = row.iter().position(|&x| x < 0) {
            return Err(AppendixError::NegativeEntry {
                row: r,
                col,
                value: row[col],
            });
        }
    }
    let mut seen = BTreeSet::new();
    let rows = raw
        .iter()
        .map(|r| primitive(r))
        .filter(|w| seen.insert(w.clone()))
        .collect();
    Ok(FacetMatrix {
        case: data.case(),
        raw,
        rows,
    })
}

pub fn appendix_matrix(c: &CurveData) -> Result<FacetMatrix, AppendixError> {
    appendix_matrix_of(&LocalIdealData::from_curve(c))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalFacetCheck {
    pub case: LocalCase,
    pub agrees: bool,
    pub computed: Vec<Weight>,
    /// Matrix rows that are not facets of this instance.
    pub dropped_rows: Vec<Weight>,
    /// Computed facet normals missing from the matrix; nonempty means disagreement.
    pub unexpected: Vec<Weight>,
}

pub fn verify_local_facets_of(data: &LocalIdealData) -> Result<LocalFacetCheck, AppendixError> {
    let matrix = appendix_matrix_of(data)?;
    let ideal = MonomialIdeal::new(3, data.generators())?;
    let computed: Vec<Weight> = newton_polyhedron(&ideal)?
        .facets
        .into_iter()
        .map(|f| f.normal)
        .collect();
    let dropped_rows = matrix
        .rows
        .iter()
        .filter(|r| !computed.contains(r))
        .cloned()
        .collect();
    let unexpected: Vec<Weight> = computed
        .iter()
        .filter(|r| !matrix.rows.contains(r))
        .cloned()
        .collect();
    Ok(LocalFacetCheck {
        case: matrix.case,
        agrees: unexpected.is_empty(),
        computed,
        dropped_rows,
        unexpected,
    })
}

pub fn verify_local_facets(c: &CurveData) -> Result<LocalFacetCheck, AppendixError> {
    verify_local_facets_of(&LocalIdealData::from_curve(c))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Nu2Check {
    /// False when `e_2 = 0` or `f_3` is missing, where there is nothing to check.
    pub applicable: bool,
    pub weights_from_matrix: Option<Weight>,
    pub weights_expected: Option<Weight>,
    pub generator_products: Vec<i64>,
    /// `ν_2(f_i)` by straightening; computed in case C only, where `ν_2` is a valuation.
    pub generator_values: Vec<Order>,
    pub target: Option<i64>,
    pub passed: bool,
}

pub fn verify_nu2_weights(c: &CurveData) -> Nu2Check {
    let data = LocalIdealData::from_curve(c);
    let mut out = Nu2Check {
        applicable: false,
        weights_from_matrix: None,
        weights_expected: None,
        generator_products: vec![],
        generator_values: vec![],
        target: None,
        passed: true,
    };
    let Some(excess) = data.bounded_excess() else {
        return out;
    };
    if c.e[1] == 0 {
        return out;
    }
    out.applicable = true;
    let (d, e, n, q) = (&c.d, &c.e, c.n.entries(), c.q.entries());
    let row = [e[1], d[2] - d[1], excess];
    let times = |m: [[i64; 3]; 3]| -> Vec<i64> {
        (0..3)
            .map(|j| (0..3).map(|i| row[i] * m[i][j]).sum())
            .collect()
    };
    let w = times([[n[0], n[1], n[2]], [q[0], q[1], 0], [0, 0, 0]]);
    let prods = times([[d[0], d[1], d[2]], [e[0], e[1], 0], [1, 0, 0]]);
    let target = e[1] * d[2];
    out.weights_from_matrix = Weight::new(w).ok();
    out.weights_expected = nu2_weights(c);
    out.passed &=
        out.weights_from_matrix.is_some() && out.weights_from_matrix == out.weights_expected;
    out.passed &= prods.iter().all(|&x| x == target);
    out.generator_products = prods;
    out.target = Some(target);
    if data.case() == LocalCase::C {
        match nu2(c) {
            Ok(v) => {
                out.generator_values = c.gens.iter().map(|g| v.value(&g.to_poly())).collect();
                out.passed &= out
                    .generator_values
                    .iter()
                    .all(|&x| x == Order::Finite(target));
            }
            Err(_) => out.passed = false,
        }
    }
    out
}

/// Supporting half-spaces `(u, N)` of `Newt(a)`, found by a second method:
/// normals of every hyperplane through `dim` points taken from the generators
/// and the generators pushed far along the axes, with no face test.
pub fn oracle_halfspaces(a: &MonomialIdeal) -> Vec<(Vec<i64>, i64)> {
    let dim = a.dim();
    let gens: Vec<Vec<i64>> = a
        .gens()
        .iter()
        .map(|g| g.entries().iter().map(|&x| x as i64).collect())
        .collect();
    let far = 2 * gens.iter().flatten().copied().max().unwrap_or(0) + 3;
    let mut pts = gens.clone();
    for g in &gens {
        for j in 0..dim {
            let mut p = g.clone();
            p[j] += far;
            pts.push(p);
        }
    }
    let mut normals: BTreeSet<Vec<i64>> = (0..dim)
        .map(|j| (0..dim).map(|i| i64::from(i == j)).collect())
        .collect();
    let mut consider = |u: Vec<i64>| {
        if u.iter().all(|&x| x == 0) {
            return;
        }
        let u = if u.iter().all(|&x| x <= 0) {
            u.iter().map(|x| -x).collect()
        } else {
            u
        };
        if u.iter().any(|&x| x < 0) {
            return;
        }
        let g = u.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        normals.insert(u.iter().map(|x| x / g).collect());
    };
    let sub = |p: &[i64], q: &[i64]| -> Vec<i64> { p.iter().zip(q).map(|(a, b)| a - b).collect() };
    let k = pts.len();
    for i in 0..k {
        for j in i + 1..k {
            let v = sub(&pts[j], &pts[i]);
            if dim == 2 {
                consider(vec![-v[1], v[0]]);
                continue;
            }
            for l in j + 1..k {
                let w = sub(&pts[l], &pts[i]);
                consider(vec![
                    v[1] * w[2] - v[2] * w[1],
                    v[2] * w[0] - v[0] * w[2],
                    v[0] * w[1] - v[1] * w[0],
                ]);
            }
        }
    }
    normals
        .into_iter()
        .map(|u| {
            let level = gens
                .iter()
                .map(|g| g.iter().zip(&u).map(|(a, b)| a * b).sum::<i64>())
                .min()
                .unwrap_or(0);
            (u, level)
        })
        .collect()
}

/// `p/q` as machine integers.
fn split_rat(lambda: &Rat) -> Result<(i128, i128), AppendixError> {
    if lambda <= &Rat::zero() {
        return Err(AppendixError::NonPositiveLambda);
    }
    Ok((
        lambda.numer().to_i128().unwrap(),
        lambda.denom().to_i128().unwrap(),
    ))
}

/// A box containing every minimal generator of `J(a^λ)` with room to spare.
///
/// If `v ∈ J` and `v_j > ⌊λ·g_j⌋` for every generator `g`, then `v − e_j ∈ J`:
/// a boundary point of `λ·Newt` on a face not containing the ray `e_j` has
/// `j`-th coordinate at most `λ·max g_j`.
pub fn default_box(a: &MonomialIdeal, lambda: &Rat) -> i64 {
    let m = a
        .gens()
        .iter()
        .flat_map(|g| g.entries())
        .copied()
        .max()
        .unwrap_or(0) as i64;
    let c = lambda.ceil().to_integer().to_i64().unwrap();
    m * c + 2
}

/// `{x^v : v + 1 ∈ interior(λ·Newt(a))}` by exhaustive search over `v ∈ [0, box]^dim`.
pub fn lattice_oracle_howald(
    a: &MonomialIdeal,
    lambda: &Rat,
    box_size: i64,
    exec: Execution,
) -> Result<MonomialIdeal, AppendixError> {
    let dim = a.dim();
    if a.is_zero() {
        return Err(NewtonError::ZeroIdeal.into());
    }
    let (p, q) = split_rat(lambda)?;
    // Coordinates of minimal generators are bounded by ⌊λ·max g_j⌋ (see `default_box`).
    let reach = (0..dim)
        .map(|j| {
            a.gens()
                .iter()
                .map(|g| (p * g.entries()[j] as i128 / q) as i64)
                .max()
                .unwrap_or(0)
        })
        .max()
        .unwrap_or(0);
    if box_size <= reach {
        return Err(AppendixError::BoxTooSmall {
            box_size,
            detail: format!("generators may reach coordinate {reach}"),
        });
    }
    let hs = oracle_halfspaces(a);
    let inside = |v: &[i64]| {
        hs.iter().all(|(u, n)| {
            let s: i64 = u.iter().zip(v).map(|(a, b)| a * (b + 1)).sum();
            (s as i128) * q > p * (*n as i128)
        })
    };
    let side = (box_size + 1) as usize;
    let slabs = exec.map_range(0..side, |x0| {
        let mut found = Vec::new();
        let mut v = vec![x0 as i64; 1];
        v.resize(dim, 0);
        let mut visit = |v: &[i64]| {
            if !inside(v) {
                return;
            }
            let minimal = (0..dim).all(|j| {
                if v[j] == 0 {
                    return true;
                }
                let mut w = v.to_vec();
                w[j] -= 1;
                !inside(&w)
            });
            if minimal {
                found.push(ExpVec::new(v.iter().map(|&x| x as u32).collect()));
            }
        };
        for x1 in 0..=box_size {
            v[1] = x1;
            if dim == 2 {
                visit(&v);
                continue;
            }
            for x2 in 0..=box_size {
                v[2] = x2;
                visit(&v);
            }
        }
        found
    });
    let gens: Vec<ExpVec> = slabs.into_iter().flatten().collect();
    if let Some(g) = gens
        .iter()
        .find(|g| g.entries().iter().any(|&x| x as i64 >= box_size))
    {
        return Err(AppendixError::BoxTooSmall {
            box_size,
            detail: format!("generator {g} touches the boundary"),
        });
    }
    Ok(MonomialIdeal::new(dim, gens)?)
}

/// `min ⟨u, 1⟩/N` over the oracle half-spaces with `N > 0`.
pub fn oracle_lct(a: &MonomialIdeal) -> Option<Rat> {
    oracle_halfspaces(a)
        .into_iter()
        .filter(|(_, n)| *n > 0)
        .map(|(u, n)| Rat::new(u.iter().sum::<i64>().into(), n.into()))
        .min()
}

/// Membership in the numerical semigroup generated by `n`, for `0..=limit`.
pub fn semigroup_table(n: &[i64], limit: usize) -> Vec<bool> {
    let mut ok = vec![false; limit + 1];
    ok[0] = true;
    for s in 1..=limit {
        ok[s] = n.iter().any(|&g| g as usize <= s && ok[s - g as usize]);
    }
    ok
}

/// Whether `⟨n⟩` is symmetric: `s ∈ S ⇔ F − s ∉ S` for the Frobenius number `F`.
pub fn semigroup_is_symmetric(n: &[i64]) -> bool {
    let mut sorted = n.to_vec();
    sorted.sort();
    // Schur: the Frobenius number is below (n_min - 1)(n_max - 1).
    let limit = (sorted[0] * sorted[sorted.len() - 1]) as usize;
    let table = semigroup_table(n, limit);
    let Some(f) = (0..=limit).rev().find(|&s| !table[s]) else {
        return true;
    };
    (0..=f).all(|s| table[s] != table[f - s])
}

/// `dim {f : deg f ≤ max_degree, f(t^n) = 0}`, counted by `n`-degree.
pub fn vanishing_slice_dimension(n: &Weight, max_degree: u32) -> usize {
    let mut per_degree = std::collections::BTreeMap::<i64, usize>::new();
    for v in monomials_up_to(3, max_degree) {
        *per_degree.entry(n.eval(&v)).or_default() += 1;
    }
    per_degree.values().map(|k| k - 1).sum()
}

/// `dim` of the span of `{x^a·g : g ∈ gens, deg(x^a·g) ≤ max_degree}`.
pub fn generated_slice_dimension(gens: &[Poly], max_degree: u32) -> usize {
    let cols = monomials_up_to(3, max_degree);
    let index: std::collections::HashMap<&ExpVec, usize> =
        cols.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut rows = Vec::new();
    for g in gens {
        let Some(dg) = g.degree() else { continue };
        if dg > max_degree {
            continue;
        }
        for a in monomials_up_to(3, max_degree - dg) {
            let mut row = vec![Rat::zero(); cols.len()];
            for (e, c) in g.terms() {
                row[index[&e.add(&a)]] = c.clone();
            }
            rows.push(row);
        }
    }
    rank(&rows, cols.len())
}

/// Pullback of every generator is zero.
pub fn generators_vanish(c: &CurveData) -> bool {
    let p = Parametrization::new(c.n.clone());
    c.gens.iter().all(|g| pullback(&p, &g.to_poly()).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::derive_curve_data;
    use crate::newton::{howald_ideal, ShiftVec};
    use crate::poly::rat;

    fn curve(n: &[i64]) -> CurveData {
        derive_curve_data(&Weight::new(n.to_vec()).unwrap()).unwrap()
    }

    fn w(v: &[i64]) -> Weight {
        Weight::new(v.to_vec()).unwrap()
    }

    #[test]
    fn cases() {
        assert_eq!(local_case(&curve(&[4, 6, 9])), LocalCase::A);
        assert_eq!(local_case(&curve(&[3, 4, 5])), LocalCase::C);
        let synthetic = LocalIdealData::new(vec![8, 9, 20], vec![3, 1, 0]).unwrap();
        assert_eq!(synthetic.case(), LocalCase::B);
    }

    #[test]
    fn matrix_of_469() {
        let m = appendix_matrix(&curve(&[4, 6, 9])).unwrap();
        let rows: BTreeSet<Weight> = m.rows.iter().cloned().collect();
        let expect: BTreeSet<Weight> = [
            w(&[1, 0, 0]),
            w(&[0, 1, 0]),
            w(&[0, 0, 1]),
            w(&[1, 1, 0]),
            w(&[1, 0, 6]),
        ]
        .into();
        assert_eq!(rows, expect);
        assert_eq!(m.non_monomial_rows().len(), 2);
        assert!(verify_local_facets(&curve(&[4, 6, 9])).unwrap().agrees);
    }

    #[test]
    fn matrix_of_345() {
        let c = curve(&[3, 4, 5]);
        let m = appendix_matrix(&c).unwrap();
        assert!(m.rows.contains(&w(&[1, 1, 0])));
        let check = verify_local_facets(&c).unwrap();
        assert!(check.agrees, "{check:?}");
        let nu = verify_nu2_weights(&c);
        assert!(nu.passed);
        assert_eq!(nu.weights_from_matrix, Some(w(&[5, 5, 5])));
        assert_eq!(nu.generator_values, vec![Order::Finite(10); 3]);
    }

    #[test]
    fn negative_entry_is_hard_failure() {
        // Case C with e_3 > e_1.
        let bad = LocalIdealData::new(vec![8, 9, 10], vec![5, 4, 7]).unwrap();
        assert!(matches!(
            appendix_matrix_of(&bad),
            Err(AppendixError::NegativeEntry { .. })
        ));
    }

    #[test]
    fn synthetic_case_b_rows() {
        let data = LocalIdealData::new(vec![8, 9, 20], vec![3, 1, 0]).unwrap();
        let m = appendix_matrix_of(&data).unwrap();
        assert_eq!(m.raw.len(), 6);
        assert_eq!(m.raw[5], [1, 11, 0]);
    }

    #[test]
    fn oracle_matches_howald_on_cusp() {
        let a = MonomialIdeal::parse("x^2, y^3", 2).unwrap();
        for lam in [rat(1, 3), rat(5, 6), rat(1, 1), rat(7, 6)] {
            let fast = howald_ideal(&a, &lam, &ShiftVec::ones(2)).unwrap();
            let slow =
                lattice_oracle_howald(&a, &lam, default_box(&a, &lam), Execution::Sequential)
                    .unwrap();
            assert_eq!(fast, slow, "λ = {lam}");
        }
        assert_eq!(oracle_lct(&a), Some(rat(5, 6)));
    }

    #[test]
    fn box_too_small_detected() {
        let a = MonomialIdeal::parse("x^2, y^3", 2).unwrap();
        assert!(matches!(
            lattice_oracle_howald(&a, &rat(3, 1), 2, Execution::Sequential),
            Err(AppendixError::BoxTooSmall { .. })
        ));
    }

    #[test]
    fn symmetry_oracle() {
        assert!(semigroup_is_symmetric(&[4, 6, 9]));
        assert!(!semigroup_is_symmetric(&[3, 4, 5]));
        assert!(semigroup_is_symmetric(&[2, 3, 7]));
    }

    #[test]
    fn slice_dimensions_detect_minimality() {
        let c = curve(&[3, 4, 5]);
        let gens = c.generator_polys();
        let d = c.max_generator_degree() + 2;
        assert_eq!(
            generated_slice_dimension(&gens, d),
            vanishing_slice_dimension(&c.n, d)
        );
        for skip in 0..gens.len() {
            let rest: Vec<Poly> = gens
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, g)| g.clone())
                .collect();
            assert!(generated_slice_dimension(&rest, d) < vanishing_slice_dimension(&c.n, d));
        }
    }
}
