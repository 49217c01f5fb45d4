use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use resqpass::reference::lsqr_solve;
use resqpass::{solve, Factorization, PreconditionerKind, SolverConfig};
use resqpass_bench::{contact, tuneable, unconstrained};

fn unconstrained_vs_lsqr(c: &mut Criterion) {
    let p = unconstrained(200, 120);
    let cfg = SolverConfig::default();
    let mut g = c.benchmark_group("unconstrained_200x120");
    g.bench_function("resqpass", |b| b.iter(|| solve(black_box(&p), &cfg).unwrap()));
    g.bench_function("lsqr", |b| b.iter(|| lsqr_solve(black_box(&p.a), &p.b, 1e-8, 400).unwrap()));
    g.finish();
}

fn factorizations(c: &mut Criterion) {
    let p = tuneable(32);
    let mut g = c.benchmark_group("bvls_imax32");
    g.sample_size(10);
    for fac in [Factorization::Cholesky, Factorization::GramSchmidt] {
        let cfg = SolverConfig { factorization: fac, ..Default::default() };
        g.bench_with_input(BenchmarkId::new("factorization", format!("{fac:?}")), &cfg, |b, cfg| {
            b.iter(|| solve(black_box(&p), cfg).unwrap())
        });
    }
    g.finish();
}

fn inner_caps(c: &mut Criterion) {
    let p = tuneable(32);
    let mut g = c.benchmark_group("inner_cap");
    g.sample_size(10);
    for cap in [Some(3), Some(5), Some(10), None] {
        let cfg = SolverConfig { maxit_inner: cap, ..Default::default() };
        let label = cap.map_or("inf".to_string(), |c| c.to_string());
        g.bench_with_input(BenchmarkId::from_parameter(label), &cfg, |b, cfg| {
            b.iter(|| solve(black_box(&p), cfg).unwrap())
        });
    }
    g.finish();
}

fn contact_preconditioning(c: &mut Criterion) {
    let p = contact(20);
    let mut g = c.benchmark_group("contact_g20");
    g.sample_size(10);
    for pc in [PreconditionerKind::None, PreconditionerKind::Ilut(0.1)] {
        let cfg = SolverConfig { tol: 1e-6, maxit_outer: Some(200), preconditioner: pc, ..Default::default() };
        g.bench_with_input(BenchmarkId::from_parameter(format!("{pc:?}")), &cfg, |b, cfg| {
            b.iter(|| solve(black_box(&p), cfg).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, unconstrained_vs_lsqr, factorizations, inner_caps, contact_preconditioning);
criterion_main!(benches);
