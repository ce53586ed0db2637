//! Monomial ideals, their Newton polyhedra, and Howald–Blickle multiplier ideals.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::int_rank;
use crate::poly::{
    ceil_i64, check_dim, floor_i64, is_positive, make_primitive, parse_poly, ExpVec, IntVec, Poly,
    PolyError, Rat, Weight,
};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum NewtonError {
    #[error("the zero ideal has no Newton polyhedron")]
    ZeroIdeal,
    #[error("the unit ideal has infinite log canonical threshold")]
    UnitIdeal,
    #[error("multiplier exponent must be positive, got {0}")]
    NonPositiveLambda(Rat),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("`{0}` is not a monomial")]
    NotAMonomial(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A monomial ideal stored by its unique minimal generating set.
///
/// No generators means the zero ideal; the single generator `0` is the unit ideal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MonomialIdeal {
    dim: usize,
    gens: Vec<ExpVec>,
}

impl MonomialIdeal {
    pub fn new(dim: usize, gens: impl IntoIterator<Item = ExpVec>) -> Result<Self, NewtonError> {
        check_dim(dim)?;
        let gens: Vec<ExpVec> = gens.into_iter().collect();
        if let Some(g) = gens.iter().find(|g| g.dim() != dim) {
            return Err(NewtonError::DimensionMismatch(dim, g.dim()));
        }
        Ok(MonomialIdeal {
            dim,
            gens: minimalize(gens),
        })
    }

    pub fn zero(dim: usize) -> Self {
        MonomialIdeal { dim, gens: vec![] }
    }

    pub fn unit(dim: usize) -> Self {
        MonomialIdeal {
            dim,
            gens: vec![ExpVec::zero(dim)],
        }
    }

    /// Parses a comma-separated list of monomials such as `"x^2, y^3, x*y*z"`.
    pub fn parse(text: &str, dim: usize) -> Result<Self, NewtonError> {
        let mut gens = Vec::new();
        for item in text.split(',') {
            let p = parse_poly(item, dim)?;
            if p.num_terms() != 1 {
                return Err(NewtonError::NotAMonomial(item.trim().to_string()));
            }
            gens.push(p.exponents().next().unwrap().clone());
        }
        MonomialIdeal::new(dim, gens)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gens(&self) -> &[ExpVec] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.iter().any(ExpVec::is_zero)
    }

    pub fn contains(&self, v: &ExpVec) -> bool {
        self.gens.iter().any(|g| g.divides(v))
    }

    /// Membership of a polynomial in a monomial ideal is termwise.
    pub fn contains_poly(&self, f: &Poly) -> bool {
        f.exponents().all(|e| self.contains(e))
    }

    pub fn intersect(&self, other: &MonomialIdeal) -> MonomialIdeal {
        monomial_intersect(self, other)
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gens.is_empty() {
            return f.write_str("(0)");
        }
        let names: Vec<String> = self
            .gens
            .iter()
            .map(|g| Poly::monomial(g.clone(), Rat::one()).to_string())
            .collect();
        write!(f, "({})", names.join(", "))
    }
}

/// Drops duplicates and non-minimal elements; result sorted in graded-lex order.
pub(crate) fn minimalize(mut gens: Vec<ExpVec>) -> Vec<ExpVec> {
    gens.sort();
    gens.dedup();
    let mut kept: Vec<ExpVec> = Vec::with_capacity(gens.len());
    // Ascending grlex: a divisor always precedes its multiples.
    for g in gens {
        if !kept.iter().any(|k| k.divides(&g)) {
            kept.push(g);
        }
    }
    kept
}

pub fn monomial_intersect(a: &MonomialIdeal, b: &MonomialIdeal) -> MonomialIdeal {
    let gens = a
        .gens
        .iter()
        .flat_map(|x| b.gens.iter().map(move |y| x.lcm(y)))
        .collect();
    MonomialIdeal {
        dim: a.dim,
        gens: minimalize(gens),
    }
}

pub fn monomial_member(a: &MonomialIdeal, v: &ExpVec) -> bool {
    a.contains(v)
}

/// Supporting half-space `{v : ⟨normal, v⟩ ≥ level}` of a Newton polyhedron.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Facet {
    pub normal: Weight,
    pub level: i64,
}

impl Facet {
    pub fn is_coordinate(&self) -> bool {
        self.normal.entries().iter().filter(|&&x| x != 0).count() == 1
    }
}

/// `conv(generators) + ℝ≥0^dim`, described by its facets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NewtonPolyhedron {
    pub dim: usize,
    pub generators: Vec<ExpVec>,
    pub facets: Vec<Facet>,
}

/// The vector `w` in the condition `v + w ∈ interior(λ·Newt)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftVec(Vec<Rat>);

impl ShiftVec {
    pub fn new(entries: Vec<Rat>) -> Self {
        ShiftVec(entries)
    }

    /// `(1, …, 1)`: smooth ambient space with no boundary divisor.
    pub fn ones(dim: usize) -> Self {
        ShiftVec(vec![Rat::one(); dim])
    }

    pub fn entries(&self) -> &[Rat] {
        &self.0
    }

    fn pair(&self, w: &Weight) -> Rat {
        self.0
            .iter()
            .zip(w.entries())
            .map(|(s, &u)| s * Rat::from_integer(u.into()))
            .sum()
    }
}

/// Candidate normals are cut out by `dim` points drawn from the generators and
/// the generators shifted by one unit ray; each primitive nonnegative candidate
/// whose tight set spans a face of codimension one is kept.
pub fn newton_polyhedron(a: &MonomialIdeal) -> Result<NewtonPolyhedron, NewtonError> {
    if a.is_zero() {
        return Err(NewtonError::ZeroIdeal);
    }
    let dim = a.dim;
    let mut points: Vec<ExpVec> = a.gens.clone();
    for g in &a.gens {
        for j in 0..dim {
            points.push(g.add(&ExpVec::unit(dim, j)));
        }
    }
    let mut normals: BTreeSet<Vec<i64>> = (0..dim)
        .map(|j| ExpVec::unit(dim, j).to_int().entries().to_vec())
        .collect();
    let np = points.len();
    match dim {
        2 => {
            for i in 0..np {
                for j in i + 1..np {
                    let d = points[j].diff(&points[i]);
                    let d = d.entries();
                    insert_oriented(&mut normals, vec![d[1], -d[0]]);
                }
            }
        }
        3 => {
            for i in 0..np {
                for j in i + 1..np {
                    let u = points[j].diff(&points[i]);
                    for k in j + 1..np {
                        let v = points[k].diff(&points[i]);
                        insert_oriented(&mut normals, cross(u.entries(), v.entries()));
                    }
                }
            }
        }
        _ => return Err(PolyError::UnsupportedDimension(dim).into()),
    }
    let facets = normals
        .into_iter()
        .filter_map(|n| {
            let normal = Weight::new(n).unwrap();
            let level = a.gens.iter().map(|g| normal.eval(g)).min().unwrap();
            is_facet(&a.gens, &normal, level).then_some(Facet { normal, level })
        })
        .collect();
    Ok(NewtonPolyhedron {
        dim,
        generators: a.gens.clone(),
        facets,
    })
}

fn cross(a: &[i64], b: &[i64]) -> Vec<i64> {
    vec![
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn insert_oriented(set: &mut BTreeSet<Vec<i64>>, n: Vec<i64>) {
    let Ok(p) = make_primitive(&IntVec::new(n)) else {
        return;
    };
    let e = p.entries();
    if e.iter().all(|&x| x >= 0) {
        set.insert(e.to_vec());
    } else if e.iter().all(|&x| x <= 0) {
        set.insert(p.neg().entries().to_vec());
    }
}

/// The face cut out by `normal` at `level` is `conv(T) + cone(e_j : normal_j = 0)`;
/// it is a facet when that set has affine dimension `dim - 1`.
fn is_facet(gens: &[ExpVec], normal: &Weight, level: i64) -> bool {
    let dim = normal.dim();
    let tight: Vec<&ExpVec> = gens.iter().filter(|g| normal.eval(g) == level).collect();
    let base = tight[0];
    let mut dirs: Vec<Vec<i64>> = tight[1..]
        .iter()
        .map(|t| t.diff(base).entries().to_vec())
        .collect();
    for j in 0..dim {
        if normal.entries()[j] == 0 {
            dirs.push(ExpVec::unit(dim, j).to_int().entries().to_vec());
        }
    }
    int_rank(&dirs) == dim - 1
}

impl NewtonPolyhedron {
    /// Facets that are not coordinate planes through the origin.
    pub fn positive_facets(&self) -> impl Iterator<Item = &Facet> + '_ {
        self.facets.iter().filter(|f| f.level > 0)
    }

    /// `{x^v : ⟨u, v + w⟩ > λ·N for every facet (u, N)}`, by minimal generators.
    pub fn multiplier_ideal(
        &self,
        lambda: &Rat,
        w: &ShiftVec,
    ) -> Result<MonomialIdeal, NewtonError> {
        if !is_positive(lambda) {
            return Err(NewtonError::NonPositiveLambda(lambda.clone()));
        }
        let dim = self.dim;
        // ⟨u, v⟩ > λN − ⟨u, w⟩  ⇔  ⟨u, v⟩ ≥ ⌊λN − ⟨u, w⟩⌋ + 1
        let rows: Vec<(&[i64], i64)> = self
            .facets
            .iter()
            .map(|f| {
                let c = lambda * Rat::from_integer(f.level.into()) - w.pair(&f.normal);
                (f.normal.entries(), floor_i64(&c) + 1)
            })
            .collect();
        // A minimal generator never exceeds `bound[j]` in coordinate j: past it,
        // lowering v_j keeps every inequality with u_j > 0 satisfied.
        let bound: Vec<i64> = (0..dim)
            .map(|j| {
                rows.iter()
                    .filter(|(u, _)| u[j] > 0)
                    .map(|(u, t)| ceil_i64(&Rat::new((*t).into(), u[j].into())).max(0))
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let last = dim - 1;
        // Least admissible last coordinate above a prefix, `None` if infeasible.
        let least_last = |prefix: &[i64]| -> Option<i64> {
            let mut need = 0i64;
            for (u, t) in &rows {
                let partial: i64 = prefix.iter().zip(u.iter()).map(|(a, b)| a * b).sum();
                let rest = t - partial;
                if u[last] == 0 {
                    if rest > 0 {
                        return None;
                    }
                } else if rest > 0 {
                    need = need.max((rest + u[last] - 1) / u[last]);
                }
            }
            Some(need)
        };
        let gens = match dim {
            2 => {
                let h: Vec<Option<i64>> = (0..=bound[0]).map(|a| least_last(&[a])).collect();
                (0..=bound[0] as usize)
                    .filter_map(|a| {
                        let cur = h[a]?;
                        let drop = a == 0 || h[a - 1].is_none_or(|prev| prev > cur);
                        drop.then(|| ExpVec::new(vec![a as u32, cur as u32]))
                    })
                    .collect()
            }
            _ => {
                let (b0, b1) = (bound[0] as usize, bound[1] as usize);
                let h: Vec<Vec<Option<i64>>> = (0..=b0)
                    .map(|a| {
                        (0..=b1)
                            .map(|b| least_last(&[a as i64, b as i64]))
                            .collect()
                    })
                    .collect();
                let mut out = Vec::new();
                for a in 0..=b0 {
                    for b in 0..=b1 {
                        let Some(cur) = h[a][b] else { continue };
                        let below_x = a == 0 || h[a - 1][b].is_none_or(|p| p > cur);
                        let below_y = b == 0 || h[a][b - 1].is_none_or(|p| p > cur);
                        if below_x && below_y {
                            out.push(ExpVec::new(vec![a as u32, b as u32, cur as u32]));
                        }
                    }
                }
                out
            }
        };
        MonomialIdeal::new(dim, gens)
    }

    /// `min ⟨u, w⟩ / N` over facets with `N > 0`.
    pub fn lct(&self, w: &ShiftVec) -> Result<Rat, NewtonError> {
        self.positive_facets()
            .map(|f| w.pair(&f.normal) / Rat::from_integer(f.level.into()))
            .min()
            .ok_or(NewtonError::UnitIdeal)
    }

    /// Facets attaining [`NewtonPolyhedron::lct`].
    pub fn lct_facets(&self, w: &ShiftVec) -> Vec<&Facet> {
        let Ok(best) = self.lct(w) else { return vec![] };
        self.positive_facets()
            .filter(|f| w.pair(&f.normal) / Rat::from_integer(f.level.into()) == best)
            .collect()
    }
}

pub fn howald_ideal(
    a: &MonomialIdeal,
    lambda: &Rat,
    w: &ShiftVec,
) -> Result<MonomialIdeal, NewtonError> {
    if !is_positive(lambda) {
        return Err(NewtonError::NonPositiveLambda(lambda.clone()));
    }
    newton_polyhedron(a)?.multiplier_ideal(lambda, w)
}

pub fn monomial_lct(a: &MonomialIdeal, w: &ShiftVec) -> Result<Rat, NewtonError> {
    if a.is_unit() {
        return Err(NewtonError::UnitIdeal);
    }
    newton_polyhedron(a)?.lct(w)
}

/// The threshold at which the constant `1` leaves `J(a^λ)`, or `None` for the unit ideal.
pub fn monomial_lct_opt(a: &MonomialIdeal, w: &ShiftVec) -> Result<Option<Rat>, NewtonError> {
    match monomial_lct(a, w) {
        Ok(v) => Ok(Some(v)),
        Err(NewtonError::UnitIdeal) => Ok(None),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn ideal(s: &str, dim: usize) -> MonomialIdeal {
        MonomialIdeal::parse(s, dim).unwrap()
    }

    fn facet(normal: &[i64], level: i64) -> Facet {
        Facet {
            normal: Weight::new(normal.to_vec()).unwrap(),
            level,
        }
    }

    fn facet_set(p: &NewtonPolyhedron) -> BTreeSet<Facet> {
        p.facets.iter().cloned().collect()
    }

    #[test]
    fn facets_of_two_variable_ideal() {
        let p = newton_polyhedron(&ideal("x^2, y^3", 2)).unwrap();
        let want: BTreeSet<_> = [facet(&[3, 2], 6), facet(&[1, 0], 0), facet(&[0, 1], 0)].into();
        assert_eq!(facet_set(&p), want);
    }

    #[test]
    fn facets_of_simplex_and_principal() {
        let p = newton_polyhedron(&ideal("x, y, z", 3)).unwrap();
        let want: BTreeSet<_> = [
            facet(&[1, 1, 1], 1),
            facet(&[1, 0, 0], 0),
            facet(&[0, 1, 0], 0),
            facet(&[0, 0, 1], 0),
        ]
        .into();
        assert_eq!(facet_set(&p), want);
        let p = newton_polyhedron(&ideal("x*y", 2)).unwrap();
        let want: BTreeSet<_> = [facet(&[1, 0], 1), facet(&[0, 1], 1)].into();
        assert_eq!(facet_set(&p), want);
    }

    #[test]
    fn zero_ideal_rejected() {
        assert_eq!(
            newton_polyhedron(&MonomialIdeal::zero(2)),
            Err(NewtonError::ZeroIdeal)
        );
    }

    #[test]
    fn howald_examples() {
        let a = ideal("x^2, y^3", 2);
        let w = ShiftVec::ones(2);
        assert_eq!(howald_ideal(&a, &rat(5, 6), &w).unwrap(), ideal("x, y", 2));
        assert!(howald_ideal(&a, &rat(1, 2), &w).unwrap().is_unit());
        assert!(matches!(
            howald_ideal(&a, &rat(0, 1), &w),
            Err(NewtonError::NonPositiveLambda(_))
        ));
    }

    #[test]
    fn lct_examples() {
        let w2 = ShiftVec::ones(2);
        let w3 = ShiftVec::ones(3);
        assert_eq!(monomial_lct(&ideal("x^2, y^3", 2), &w2).unwrap(), rat(5, 6));
        assert_eq!(monomial_lct(&ideal("x, y, z", 3), &w3).unwrap(), rat(3, 1));
        assert_eq!(
            monomial_lct(&ideal("x^3, y^2, z^2, y^3", 3), &w3).unwrap(),
            rat(4, 3)
        );
        assert_eq!(
            monomial_lct(&MonomialIdeal::unit(3), &w3),
            Err(NewtonError::UnitIdeal)
        );
    }

    #[test]
    fn intersection_and_membership() {
        assert_eq!(ideal("x", 2).intersect(&ideal("y", 2)), ideal("x*y", 2));
        assert_eq!(
            ideal("x^2, y", 2).intersect(&MonomialIdeal::unit(2)),
            ideal("x^2, y", 2)
        );
        assert_eq!(
            ideal("x^2, y^3", 2).intersect(&ideal("x*y", 2)),
            ideal("x^2*y, x*y^3", 2)
        );
        let a = ideal("x^2, y^3", 2);
        assert!(monomial_member(&a, &ExpVec::new(vec![2, 5])));
        assert!(!monomial_member(&a, &ExpVec::new(vec![1, 2])));
        assert!(monomial_member(&MonomialIdeal::unit(2), &ExpVec::zero(2)));
    }

    #[test]
    fn generators_are_minimal() {
        let a = ideal("x^3, y^2, z^2, y^3, x^3*y", 3);
        assert_eq!(a.gens().len(), 3);
        assert!(matches!(
            MonomialIdeal::parse("x + y", 2),
            Err(NewtonError::NotAMonomial(_))
        ));
    }

    #[test]
    fn shifted_condition_uses_w() {
        // w = 0: J(a^λ) = {v : v ∈ interior(λ·Newt)}; for a = (x) in two variables
        // and λ = 1, the interior of λ·Newt is {v_1 > 1, v_2 > 0}.
        let a = ideal("x", 2);
        let w = ShiftVec::new(vec![rat(0, 1), rat(0, 1)]);
        assert_eq!(howald_ideal(&a, &rat(1, 1), &w).unwrap(), ideal("x^2*y", 2));
    }
}
