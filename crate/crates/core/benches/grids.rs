use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use padic_sums::suites::{finite_suite, padic_suite, FiniteGrid, PadicGrid};
use padic_sums::{Execution, Prime};

fn grids(c: &mut Criterion) {
    let finite = FiniteGrid {
        kmax: 8,
        n_max: 15,
        power_kmax: 4,
        ..FiniteGrid::default()
    };
    let padic = PadicGrid {
        kmax: 3,
        n_max: 60,
        primes: [2, 3, 5].iter().map(|&p| Prime::new(p).unwrap()).collect(),
        ..PadicGrid::default()
    };
    let mut group = c.benchmark_group("grids");
    group.sample_size(10);
    for mode in [Execution::Sequential, Execution::Parallel] {
        let label = format!("{mode:?}").to_lowercase();
        group.bench_with_input(BenchmarkId::new("finite", &label), &mode, |b, &m| {
            b.iter(|| finite_suite(&finite, m).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("padic", &label), &mode, |b, &m| {
            b.iter(|| padic_suite(&padic, m).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, grids);
criterion_main!(benches);
