#![allow(dead_code)]

use monocurve::newton::MonomialIdeal;
use monocurve::poly::{int, ExpVec, Poly};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn random_exp(rng: &mut ChaCha8Rng, dim: usize, max_degree: u32) -> ExpVec {
    let deg = rng.gen_range(0..=max_degree);
    let mut e = vec![0u32; dim];
    for _ in 0..deg {
        e[rng.gen_range(0..dim)] += 1;
    }
    ExpVec::new(e)
}

/// Nonzero polynomial with up to `terms` terms of degree at most `max_degree`
/// and coefficients in `[-3, 3]`.
pub fn random_poly(rng: &mut ChaCha8Rng, dim: usize, max_degree: u32, terms: usize) -> Poly {
    loop {
        let mut p = Poly::zero(dim);
        for _ in 0..rng.gen_range(1..=terms) {
            let c = rng.gen_range(-3i64..=3);
            if c != 0 {
                p.add_term(random_exp(rng, dim, max_degree), int(c));
            }
        }
        if !p.is_zero() {
            return p;
        }
    }
}

/// Random proper nonzero monomial ideal with entries at most `max_entry`.
pub fn random_ideal(rng: &mut ChaCha8Rng, dim: usize, max_entry: u32) -> MonomialIdeal {
    loop {
        let count = rng.gen_range(1..=4);
        let gens: Vec<ExpVec> = (0..count)
            .map(|_| ExpVec::new((0..dim).map(|_| rng.gen_range(0..=max_entry)).collect()))
            .filter(|g| !g.is_zero())
            .collect();
        if !gens.is_empty() {
            return MonomialIdeal::new(dim, gens).unwrap();
        }
    }
}

/// Polynomials biased toward the ideal of the curve: random combinations of
/// generator products with random cofactors, plus plain random polynomials.
pub fn curve_biased_poly(rng: &mut ChaCha8Rng, gens: &[Poly], max_degree: u32) -> Poly {
    let dim = gens[0].dim();
    match rng.gen_range(0..4) {
        0 => random_poly(rng, dim, max_degree, 4),
        1 => {
            let e = ExpVec::new((0..dim).map(|_| rng.gen_range(0..=3)).collect());
            Poly::monomial(e, int(1))
        }
        _ => {
            let mut p = Poly::zero(dim);
            for _ in 0..rng.gen_range(1..=2) {
                let mut t = random_poly(rng, dim, 1, 2);
                for _ in 0..rng.gen_range(1..=2) {
                    t = &t * &gens[rng.gen_range(0..gens.len())];
                }
                p = &p + &t;
            }
            if p.is_zero() {
                random_poly(rng, dim, max_degree, 3)
            } else {
                p
            }
        }
    }
}
