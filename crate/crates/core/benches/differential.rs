use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use stablehf::complex::differential;
use stablehf::diagram::{make_grid, make_s3_sphere, HeegaardDiagram};
use stablehf::moves::{random_move, FuzzLimits};
use stablehf::oracle::compare_polygons;

/// A sphere diagram grown by seeded random moves until it has a few hundred generators.
fn grown() -> HeegaardDiagram {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let limits = FuzzLimits { max_crossings: 28, max_generators: 400 };
    let mut d = make_s3_sphere();
    for _ in 0..40 {
        if let Some((_, next)) = random_move(&d, &mut rng, limits) {
            d = next;
        }
    }
    d
}

fn bench(c: &mut Criterion) {
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let cases = [("grid5", make_grid(5).unwrap()), ("grown", grown())];

    let mut g = c.benchmark_group("differential");
    for (name, d) in &cases {
        g.bench_with_input(BenchmarkId::new("1 thread", name), d, |b, d| {
            b.iter(|| single.install(|| differential(d).unwrap()))
        });
        g.bench_with_input(BenchmarkId::new("pool", name), d, |b, d| b.iter(|| differential(d).unwrap()));
    }
    g.finish();

    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    let d = make_grid(4).unwrap();
    g.bench_function("1 thread/grid4", |b| b.iter(|| single.install(|| compare_polygons(&d).unwrap())));
    g.bench_function("pool/grid4", |b| b.iter(|| compare_polygons(&d).unwrap()));
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
