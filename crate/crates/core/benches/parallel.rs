use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use monocurve::appendix::{default_box, lattice_oracle_howald};
use monocurve::curve::{derive_curve_data, survey_cases};
use monocurve::exec::Execution;
use monocurve::multiplier::{Branch, CurveMultiplier};
use monocurve::newton::MonomialIdeal;
use monocurve::poly::{rat, Weight};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn survey(c: &mut Criterion) {
    let mut g = c.benchmark_group("survey");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new(name, 30), &30, |b, &bound| {
            b.iter(|| survey_cases(black_box(bound), exec))
        });
    }
    g.finish();
}

fn jumps(c: &mut Criterion) {
    let curve = derive_curve_data(&Weight::new(vec![3, 4, 5]).unwrap()).unwrap();
    let m = CurveMultiplier::new(&curve).unwrap();
    let max = rat(5, 2);
    let mut g = c.benchmark_group("jumps-3-4-5");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(name, |b| {
            b.iter(|| {
                m.jumping_numbers(black_box(&max), 12, Branch::One, exec)
                    .unwrap()
            })
        });
    }
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let a = MonomialIdeal::parse("x^7*y, y^6*z^2, x^2*z^8, x^3*y^3*z^3", 3).unwrap();
    let lambda = rat(5, 2);
    let size = default_box(&a, &lambda);
    let mut g = c.benchmark_group("lattice-oracle");
    for (name, exec) in MODES {
        g.bench_function(name, |b| {
            b.iter(|| lattice_oracle_howald(black_box(&a), &lambda, size, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, survey, jumps, oracle);
criterion_main!(benches);
