use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use flatstrata_core::functionals::Analysis;
use flatstrata_core::hessian::{complex_hessian_fd, HessianOptions};
use flatstrata_core::saddle::enumerate_saddles;
use flatstrata_core::{Builtin, FunctionalKind, PeriodChart};

fn saddles(c: &mut Criterion) {
    let oct = Builtin::RegularOctagon { side: 1.0 }.build().unwrap();
    c.bench_function("saddles/octagon/L=6", |b| {
        b.iter(|| enumerate_saddles(black_box(&oct), 6.0, 10_000_000).unwrap())
    });
    let slit = Builtin::SlitTori { t: 0.01 }.build().unwrap();
    c.bench_function("saddles/slit_tori(0.01)/L=4", |b| {
        b.iter(|| enumerate_saddles(black_box(&slit), 4.0, 10_000_000).unwrap())
    });
}

fn periods(c: &mut Criterion) {
    let s = Builtin::MarkedSlitTori { t: 0.1, s: 0.2 }.build().unwrap();
    c.bench_function("period_chart/marked_slit_tori", |b| {
        b.iter(|| PeriodChart::compute(black_box(&s)).unwrap())
    });
}

fn functionals(c: &mut Criterion) {
    let s = Builtin::SlitTori { t: 0.3 }.build().unwrap();
    c.bench_function("ell2/slit_tori(0.3)", |b| {
        b.iter(|| Analysis::new(black_box(&s)).unwrap().ell_inv2().unwrap())
    });
    let oct = Builtin::RegularOctagon { side: 1.0 }.build().unwrap();
    c.bench_function("exhm/octagon", |b| {
        b.iter(|| Analysis::new(black_box(&oct)).unwrap().exh_m().unwrap())
    });
}

fn hessian(c: &mut Criterion) {
    let oct = Builtin::RegularOctagon { side: 1.0 }.build().unwrap();
    let opts = HessianOptions {
        richardson: false,
        ..HessianOptions::default()
    };
    let mut g = c.benchmark_group("hessian");
    g.sample_size(10);
    g.bench_function("exhm/octagon", |b| {
        b.iter(|| complex_hessian_fd(black_box(&oct), &FunctionalKind::ExhM, &opts).unwrap())
    });
    g.finish();
}

criterion_group!(benches, saddles, periods, functionals, hessian);
criterion_main!(benches);
