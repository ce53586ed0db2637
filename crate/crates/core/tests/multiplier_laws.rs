use monocurve::curve::{derive_curve_data, primitive_triples, CaseClass, CurveData};
use monocurve::exec::Execution;
use monocurve::multiplier::{Branch, CurveMultiplier};
use monocurve::newton::{howald_ideal, ShiftVec};
use monocurve::poly::{int, rat, Poly, Rat, Weight};

fn curve(n: [i64; 3]) -> CurveData {
    derive_curve_data(&Weight::new(n.to_vec()).unwrap()).unwrap()
}

fn surveyed() -> Vec<CurveData> {
    primitive_triples(11)
        .into_iter()
        .filter_map(|n| derive_curve_data(&Weight::new(n.to_vec()).unwrap()).ok())
        .filter(|c| !c.smooth_surface)
        .collect()
}

#[test]
fn lct_is_where_the_constant_drops_out() {
    for c in surveyed() {
        let m = CurveMultiplier::new(&c).unwrap();
        let branch = Branch::natural(&c);
        let lct = m.lct(branch).unwrap().lct;
        let at = m.describe(&lct, branch).unwrap();
        assert_eq!(at.dimension_up_to_degree(0), 0, "{}", c.n);
        assert!(!at.is_unit());
        let below = m.describe(&(&lct - rat(1, 1000)), branch).unwrap();
        assert_eq!(below.dimension_up_to_degree(0), 1, "{}", c.n);
        assert!(below.is_unit());
    }
}

#[test]
fn small_exponents_reduce_to_the_term_ideal() {
    for c in surveyed() {
        let m = CurveMultiplier::new(&c).unwrap();
        let branch = Branch::natural(&c);
        let mut limit = int(1);
        for (i, (a, k)) in c.a.iter().zip(&c.k).enumerate() {
            if branch == Branch::One && i > 0 {
                break;
            }
            limit = limit.min(rat(k + 1, *a));
        }
        for j in 1..8 {
            let lambda = &limit * rat(j, 8);
            let d = m.describe(&lambda, branch).unwrap();
            assert!(d.val_constraints.is_empty(), "{} at {lambda}", c.n);
            assert_eq!(d.symbolic_exponent, 0);
            let h = howald_ideal(&c.term_ideal(), &lambda, &ShiftVec::ones(3)).unwrap();
            assert_eq!(d.monomial_part, h);
            for v in monocurve::valuation::monomials_up_to(3, 5) {
                let f = Poly::monomial(v.clone(), int(1));
                assert_eq!(d.member(&f), h.contains(&v), "{} at {lambda}: {v}", c.n);
            }
        }
    }
}

#[test]
fn constraint_counts() {
    for c in surveyed() {
        let m = CurveMultiplier::new(&c).unwrap();
        for branch in [Branch::One, Branch::Two] {
            for j in 1..=18 {
                let Ok(d) = m.describe(&rat(j, 6), branch) else {
                    assert_eq!(branch, Branch::Two);
                    continue;
                };
                assert!(d.val_constraints.iter().all(|v| v.bound >= 1));
                let cap = if branch == Branch::One { 1 } else { 2 };
                assert!(d.val_constraints.len() <= cap, "{} {branch:?}", c.n);
            }
        }
    }
}

#[test]
fn dimension_is_monotone_over_candidates() {
    for n in [[3, 4, 5], [4, 6, 9], [4, 5, 11]] {
        let c = curve(n);
        let m = CurveMultiplier::new(&c).unwrap();
        let branch = Branch::natural(&c);
        let cands = m.jump_candidates(&int(3), branch).unwrap();
        assert!(cands.windows(2).all(|w| w[0].value < w[1].value));
        let dims: Vec<usize> = cands
            .iter()
            .map(|x| {
                m.describe(&x.value, branch)
                    .unwrap()
                    .dimension_up_to_degree(6)
            })
            .collect();
        assert!(dims.windows(2).all(|w| w[0] >= w[1]), "{n:?}: {dims:?}");
    }
}

#[test]
fn branches_agree_on_equality_curves() {
    let mut tested = 0;
    for c in surveyed() {
        if c.class() != CaseClass::Equality || c.e[1] == 0 {
            continue;
        }
        let m = CurveMultiplier::new(&c).unwrap();
        for lambda in [rat(3, 2), rat(2, 1), rat(5, 2)] {
            let one = m.describe(&lambda, Branch::One).unwrap();
            let two = m.describe(&lambda, Branch::Two).unwrap();
            let b1 = one.basis_up_to_degree(5);
            assert_eq!(
                b1.len(),
                two.dimension_up_to_degree(5),
                "{} at {lambda}",
                c.n
            );
            assert!(b1.iter().all(|f| two.member(f)), "{} at {lambda}", c.n);
        }
        tested += 1;
    }
    assert!(tested >= 3);
}

#[test]
fn basis_elements_are_members() {
    let c = curve([3, 5, 7]);
    let m = CurveMultiplier::new(&c).unwrap();
    for lambda in [rat(3, 2), rat(7, 3)] {
        let d = m.describe(&lambda, Branch::One).unwrap();
        let basis = d.basis_up_to_degree(5);
        assert_eq!(basis.len(), d.dimension_up_to_degree(5));
        assert!(basis.iter().all(|f| d.member(f)));
    }
}

#[test]
fn sequential_and_parallel_jumps_agree() {
    let c = curve([3, 4, 5]);
    let m = CurveMultiplier::new(&c).unwrap();
    let max: Rat = rat(5, 2);
    let a = m
        .jumping_numbers(&max, 10, Branch::One, Execution::Sequential)
        .unwrap();
    let b = m
        .jumping_numbers(&max, 10, Branch::One, Execution::Parallel)
        .unwrap();
    assert_eq!(a, b);
    let jumps: Vec<&Rat> = a.jumps().collect();
    assert_eq!(jumps, [&rat(3, 2), &rat(11, 6), &int(2), &rat(5, 2)]);
}
