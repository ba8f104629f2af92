use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use nashset::geometry::to_hrep;
use nashset::{
    approximate_projection, initialize, maximal_efficient_faces, refine, solve, BensonOptions, ProjectionInstance,
};
use nashset_bench::fixture;

fn benson(c: &mut Criterion) {
    let mut group = c.benchmark_group("benson");
    for name in ["ex51", "ex53", "ex54"] {
        let fx = fixture(name);
        group.bench_with_input(BenchmarkId::from_parameter(name), &fx, |b, fx| {
            b.iter(|| {
                let ua = initialize(&fx.game, 0).unwrap();
                black_box(refine(ua, &fx.game, &BensonOptions::new(fx.eps1)).unwrap())
            })
        });
    }
    group.finish();
}

fn faces(c: &mut Criterion) {
    let fx = fixture("ex53");
    let ua = refine(initialize(&fx.game, 1).unwrap(), &fx.game, &BensonOptions::new(fx.eps1)).unwrap();
    let inner = to_hrep(&ua.inner()).unwrap();
    c.bench_function("faces/ex53", |b| b.iter(|| black_box(maximal_efficient_faces(&inner).unwrap())));
}

fn projection(c: &mut Criterion) {
    let fx = fixture("ex51");
    let ua = refine(initialize(&fx.game, 0).unwrap(), &fx.game, &BensonOptions::new(fx.eps1)).unwrap();
    let face = maximal_efficient_faces(&ua.inner_with_hrep().unwrap()).unwrap().remove(0);
    let pi = ProjectionInstance::new(fx.game.clone(), 0, face, fx.eps2);
    c.bench_function("projection/ex51", |b| b.iter(|| black_box(approximate_projection(&pi).unwrap())));
}

fn pipeline(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve");
    group.sample_size(10);
    for name in ["ex51", "ex52_y10", "ex54", "ex55"] {
        let fx = fixture(name);
        group.bench_with_input(BenchmarkId::from_parameter(name), &fx, |b, fx| {
            b.iter(|| black_box(solve(&fx.game, fx.eps1, fx.eps2).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, benson, faces, projection, pipeline);
criterion_main!(benches);
