mod common;

use monocurve::appendix::{default_box, lattice_oracle_howald};
use monocurve::exec::Execution;
use monocurve::newton::{howald_ideal, monomial_lct, newton_polyhedron, MonomialIdeal, ShiftVec};
use monocurve::poly::{int, rat, ExpVec, Poly, Rat};
use proptest::prelude::*;

fn ideal() -> impl Strategy<Value = MonomialIdeal> {
    (2usize..=3).prop_flat_map(|dim| {
        prop::collection::vec(prop::collection::vec(0u32..=6, dim), 1..=4).prop_filter_map(
            "needs a nonconstant generator",
            move |gens| {
                let gens: Vec<ExpVec> = gens
                    .into_iter()
                    .map(ExpVec::new)
                    .filter(|g| !g.is_zero())
                    .collect();
                (!gens.is_empty()).then(|| MonomialIdeal::new(dim, gens).unwrap())
            },
        )
    })
}

fn lambda() -> impl Strategy<Value = Rat> {
    (1i64..=36).prop_map(|j| rat(j, 12))
}

fn dot(u: &[i64], v: &ExpVec) -> i64 {
    u.iter().zip(v.entries()).map(|(a, &b)| a * b as i64).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn facets_are_valid_and_tight(a in ideal()) {
        let p = newton_polyhedron(&a).unwrap();
        let dim = a.dim();
        let far = 1 + a.gens().iter().flat_map(|g| g.entries()).max().copied().unwrap_or(0);
        for f in &p.facets {
            let u = f.normal.entries();
            prop_assert!(a.gens().iter().all(|v| dot(u, v) >= f.level));
            // Tight points among generators and generators pushed along the rays.
            let mut tight: Vec<Vec<i64>> = vec![];
            for g in a.gens() {
                let mut pts = vec![g.clone()];
                for j in 0..dim {
                    pts.push(g.add(&ExpVec::unit(dim, j).scale(far)));
                }
                for v in pts {
                    if dot(u, &v) == f.level {
                        tight.push(v.entries().iter().map(|&x| x as i64).collect());
                    }
                }
            }
            let base = tight[0].clone();
            let diffs: Vec<Vec<Rat>> = tight
                .iter()
                .map(|t| t.iter().zip(&base).map(|(a, b)| int(a - b)).collect())
                .collect();
            prop_assert!(affine_rank(&diffs) >= dim - 1, "facet {:?} of {}", f, a);
        }
    }

    #[test]
    fn howald_matches_lattice_sweep(a in ideal(), l in lambda()) {
        let fast = howald_ideal(&a, &l, &ShiftVec::ones(a.dim())).unwrap();
        let slow = lattice_oracle_howald(&a, &l, default_box(&a, &l), Execution::Sequential).unwrap();
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn howald_is_monotone(a in ideal(), l in lambda(), m in lambda()) {
        let (lo, hi) = if l <= m { (l, m) } else { (m, l) };
        let w = ShiftVec::ones(a.dim());
        let small = howald_ideal(&a, &hi, &w).unwrap();
        let big = howald_ideal(&a, &lo, &w).unwrap();
        prop_assert!(small.gens().iter().all(|g| big.contains(g)));
    }

    #[test]
    fn membership_is_termwise(a in ideal(), l in lambda(), exps in prop::collection::vec(prop::collection::vec(0u32..5, 3), 1..4)) {
        let j = howald_ideal(&a, &l, &ShiftVec::ones(a.dim())).unwrap();
        let f = Poly::from_terms(
            a.dim(),
            exps.iter().map(|e| (ExpVec::new(e[..a.dim()].to_vec()), int(1))),
        );
        let termwise = f.exponents().all(|e| j.contains(e));
        prop_assert_eq!(j.contains_poly(&f), termwise);
    }

    #[test]
    fn lct_is_the_unit_threshold(a in ideal()) {
        let w = ShiftVec::ones(a.dim());
        let c = monomial_lct(&a, &w).unwrap();
        prop_assert!(!howald_ideal(&a, &c, &w).unwrap().is_unit());
        for k in [1000, 97, 12] {
            let below = &c - rat(1, k);
            if below > int(0) {
                prop_assert!(howald_ideal(&a, &below, &w).unwrap().is_unit());
            }
        }
        prop_assert!(!howald_ideal(&a, &(&c + rat(1, 1000)), &w).unwrap().is_unit());
    }
}

fn affine_rank(rows: &[Vec<Rat>]) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    monocurve::linalg::rank(rows, cols)
}

#[test]
fn intersection_example() {
    let a = MonomialIdeal::parse("x^2, y^3", 2).unwrap();
    let b = MonomialIdeal::parse("x*y", 2).unwrap();
    let expected = MonomialIdeal::parse("x^2*y, x*y^3", 2).unwrap();
    let got = a.intersect(&b);
    assert_eq!(got, expected);
    for i in 0..6u32 {
        for j in 0..6u32 {
            let v = ExpVec::new(vec![i, j]);
            assert_eq!(got.contains(&v), a.contains(&v) && b.contains(&v));
        }
    }
}

#[test]
fn random_ideals_sequential_and_parallel_oracles_agree() {
    let mut rng = common::rng(11);
    for _ in 0..20 {
        let a = common::random_ideal(&mut rng, 3, 6);
        let l = rat(7, 4);
        let b = default_box(&a, &l);
        assert_eq!(
            lattice_oracle_howald(&a, &l, b, Execution::Sequential).unwrap(),
            lattice_oracle_howald(&a, &l, b, Execution::Parallel).unwrap()
        );
    }
}
