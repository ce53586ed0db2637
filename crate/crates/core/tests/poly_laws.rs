use monocurve::poly::{int, parse_poly, ExpVec, Order, Poly, Weight};
use proptest::prelude::*;

fn poly(dim: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0u32..4, dim), -4i64..=4), 0..6).prop_map(
        move |terms| {
            Poly::from_terms(
                dim,
                terms.into_iter().map(|(e, c)| (ExpVec::new(e), int(c))),
            )
        },
    )
}

fn weight(positive: bool) -> impl Strategy<Value = Weight> {
    let lo = if positive { 1 } else { 0 };
    prop::collection::vec(lo..6i64, 3).prop_map(|w| Weight::new(w).unwrap())
}

proptest! {
    #[test]
    fn ring_laws(f in poly(3), g in poly(3), h in poly(3)) {
        prop_assert_eq!(&(&f + &g) - &g, f.clone());
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
    }

    #[test]
    fn display_round_trips(f in poly(3)) {
        prop_assert_eq!(parse_poly(&f.to_string(), 3).unwrap(), f);
    }

    #[test]
    fn ord_is_multiplicative(f in poly(3), g in poly(3), w in weight(true)) {
        prop_assert_eq!((&f * &g).ord(&w), f.ord(&w).plus(g.ord(&w)));
    }

    #[test]
    fn ord_of_sum_is_at_least_min(f in poly(3), g in poly(3), w in weight(false)) {
        prop_assert!((&f + &g).ord(&w) >= f.ord(&w).min(g.ord(&w)));
    }
}

#[test]
fn zero_has_infinite_order() {
    let w = Weight::new(vec![1, 2, 3]).unwrap();
    assert_eq!(Poly::zero(3).ord(&w), Order::Infinite);
}
