use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use splitwalk::scatter::{build_geometry, channel_flux, Cut};
use splitwalk::spectral::{build_u2_block_sparse, Block};
use splitwalk::{BoundaryCondition, RotatedVariant, Walk};
use splitwalk_bench::{filled_state, haar_coins};

fn walk_step(c: &mut Criterion) {
    let mut g = c.benchmark_group("walk_step");
    for n in [64usize, 256] {
        let coins = haar_coins((n, n));
        let mut walk = Walk::rotated(&coins, RotatedVariant::Square);
        let mut state = filled_state(walk.basis(), (n, n));
        let mut bc = BoundaryCondition::periodic();
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| walk.step(&mut state, &mut bc).unwrap())
        });
    }
    g.finish();
}

fn scatter_channel(c: &mut Criterion) {
    let coins = haar_coins((19, 30));
    let setup = build_geometry(19, 30, Cut::None, &coins).unwrap();
    c.bench_function("scatter_channel_19x30_t1000", |b| {
        b.iter(|| channel_flux(&setup, 15, 1000).unwrap())
    });
}

fn u2_block(c: &mut Criterion) {
    let coins = haar_coins((64, 64));
    c.bench_function("u2_block_sparse_64x64", |b| {
        b.iter(|| build_u2_block_sparse(&coins, Block::SquareEe).unwrap())
    });
}

criterion_group! {
    name = kernels;
    config = Criterion::default().sample_size(20);
    targets = walk_step, scatter_channel, u2_block
}
criterion_main!(kernels);
