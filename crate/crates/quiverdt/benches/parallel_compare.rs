//! Benchmarks for the work-heavy entry points. Run `cargo bench` for the
//! default (parallel) build and `cargo bench --no-default-features` for the
//! sequential fallback to compare the two schedulers on identical inputs.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use quiverdt::coha::sst_presentation;
use quiverdt::dt::wallcross_check;
use quiverdt::oracle::{count_semistable, DEFAULT_BUDGET};
use quiverdt::{DimVector, Quiver, Stability};

fn dv(entries: &[u32]) -> DimVector {
    DimVector::new(entries.to_vec())
}

fn bench_count_semistable(c: &mut Criterion) {
    let quiver = Quiver::kronecker(2);
    let theta = Stability::new(vec![1, 0]);
    let d = dv(&[2, 2]);
    c.bench_function("count_semistable/kronecker2_d22_p5", |b| {
        b.iter(|| {
            count_semistable(
                black_box(&quiver),
                black_box(&theta),
                black_box(&d),
                5,
                DEFAULT_BUDGET,
            )
            .unwrap()
        })
    });
}

fn bench_sst_presentation(c: &mut Criterion) {
    let quiver = Quiver::kronecker(2);
    let theta = Stability::new(vec![1, 0]);
    let d = dv(&[3, 3]);
    let mut group = c.benchmark_group("sst_presentation");
    group.sample_size(10);
    group.bench_function("kronecker2_d33_jmax6", |b| {
        b.iter(|| sst_presentation(black_box(&quiver), black_box(&theta), black_box(&d), 6).unwrap())
    });
    group.finish();
}

fn bench_wallcross(c: &mut Criterion) {
    let quiver = Quiver::kronecker(2);
    let theta = Stability::new(vec![1, 0]);
    let bounds = dv(&[3, 3]);
    let mut group = c.benchmark_group("wallcross_check");
    group.sample_size(10);
    group.bench_function("kronecker2_box33", |b| {
        b.iter(|| assert!(wallcross_check(black_box(&quiver), black_box(&theta), black_box(&bounds)).unwrap()))
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_count_semistable,
    bench_sst_presentation,
    bench_wallcross
);
criterion_main!(benches);
