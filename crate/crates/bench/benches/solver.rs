use criterion::{black_box, criterion_group, criterion_main, Criterion};
use tscale_bench::{comb, integers, rotation};
use tscale_core::{picard_iterate, step_solve};

fn solver(c: &mut Criterion) {
    let dense = rotation(&comb(4));
    let discrete = rotation(&integers(1000));
    c.bench_function("step_solve/comb4_h1e-3", |b| b.iter(|| step_solve(black_box(&dense), 1e-3).unwrap()));
    c.bench_function("step_solve/integers1e3", |b| b.iter(|| step_solve(black_box(&discrete), 1.0).unwrap()));
    let short = rotation(&comb(1));
    c.bench_function("picard/unit_h1e-2", |b| {
        b.iter(|| picard_iterate(black_box(&short), 1e-2, 30, 1e-10).unwrap())
    });
}

criterion_group!(benches, solver);
criterion_main!(benches);
