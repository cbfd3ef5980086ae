use bessel_struve::funcspace::make_poly_bump;
use bessel_struve::kernel::Order;
use bessel_struve::paley_wiener::{complex_scan, ScanGrid, ScanSource};
use bessel_struve::par::Execution;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn scan(c: &mut Criterion) {
    let f = make_poly_bump(1.0, 3).unwrap();
    let order = Order::new(0.3).unwrap();
    let mut group = c.benchmark_group("complex_scan");
    group.sample_size(10);
    for steps in [11usize, 21] {
        let grid = ScanGrid::square(20.0, steps).unwrap();
        for (label, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
            group.bench_with_input(BenchmarkId::new(label, steps * steps), &grid, |b, grid| {
                b.iter(|| complex_scan(ScanSource::Function(&f), &order, black_box(grid), 64, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, scan);
criterion_main!(benches);
