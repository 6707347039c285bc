use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use cayley_fires::dynamics::run_dynamics;
use cayley_fires::replicas::{map_replicas, sequential_map};
use cayley_fires::stream::{stream, StreamTag};
use cayley_fires::treegen::sample_uniform_tree;

fn one_replica(n: usize, p: f64, replica: u64) -> usize {
    let mut rng = stream(7, n as u64, replica, StreamTag::DYNAMICS);
    let tree = sample_uniform_tree(n, &mut rng).unwrap();
    run_dynamics(&tree, p, &mut rng).unwrap().fireproof
}

fn replicas(c: &mut Criterion) {
    let mut group = c.benchmark_group("dynamics_replicas");
    group.sample_size(10);
    for &n in &[1_000usize, 100_000] {
        let p = (n as f64).powf(-0.5);
        let count = if n > 10_000 { 16 } else { 256 };
        group.bench_with_input(BenchmarkId::new("sequential", n), &n, |b, &n| {
            b.iter(|| sequential_map(count, |r| one_replica(n, p, r)))
        });
        group.bench_with_input(BenchmarkId::new("parallel", n), &n, |b, &n| {
            b.iter(|| map_replicas(count, None, |r| one_replica(n, p, r)))
        });
    }
    group.finish();
}

criterion_group!(benches, replicas);
criterion_main!(benches);
