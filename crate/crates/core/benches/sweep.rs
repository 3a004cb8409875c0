use std::collections::BTreeMap;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use polar_core::families::Family;
use polar_core::generic::{stratum_sweep, Parallelism};

fn sweep(c: &mut Criterion) {
    let fam = Family::parse("gamma-5-12/18", &BTreeMap::new()).unwrap();
    let mut g = c.benchmark_group("stratum_sweep/gamma-5-12-18/8 trials");
    g.sample_size(10);
    for (name, par) in [
        ("sequential", Parallelism::Sequential),
        ("rayon", Parallelism::Rayon { workers: 0 }),
    ] {
        g.bench_function(name, |b| {
            b.iter(|| stratum_sweep(black_box(&fam), 8, 1, 2, true, par).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, sweep);
criterion_main!(benches);
