use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use wk_core::dvv::c_value;
use wk_core::harness::{check_cross_formulas, primitive_vectors, CrossBudget};
use wk_core::par;

fn budget() -> CrossBudget {
    CrossBudget { two_point_g: 6, three_point_g: 4, four_point_g: 3, n_point_n: 5, n_point_g: 2 }
}

fn closed_formula_sweep(c: &mut Criterion) {
    // warm the recursion cache so only the closed-form sums are timed
    check_cross_formulas(&budget(), &c_value);
    let mut group = c.benchmark_group("cross_formulas");
    group.sample_size(10);
    for threads in [1, par::threads().max(2)] {
        group.bench_with_input(BenchmarkId::from_parameter(threads), &threads, |b, &t| {
            b.iter(|| par::with_threads(t, || check_cross_formulas(&budget(), &c_value)))
        });
    }
    group.finish();
}

fn nesting_values(c: &mut Criterion) {
    let vecs = primitive_vectors(8);
    par::map(&vecs, c_value);
    let mut group = c.benchmark_group("nesting_g8_cached");
    for threads in [1, par::threads().max(2)] {
        group.bench_with_input(BenchmarkId::from_parameter(threads), &threads, |b, &t| {
            b.iter(|| par::with_threads(t, || par::map(&vecs, c_value)))
        });
    }
    group.finish();
}

criterion_group!(benches, closed_formula_sweep, nesting_values);
criterion_main!(benches);
