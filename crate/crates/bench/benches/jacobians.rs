use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use framegeo_cli::chain::{self, ChainInput};
use framegeo_cli::imu::{self, ImuInput};
use framegeo_cli::with_chain;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

fn chain_benches(c: &mut Criterion) {
    let mut group = c.benchmark_group("chain");
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for n in [1, 2, 4, 6, 8, 10] {
        let input = ChainInput::random(n, &mut rng);
        with_chain!(n, m => {
            let leaves = m::Leaves::new(&input);
            group.bench_with_input(BenchmarkId::new("hand", n), &leaves, |b, l| b.iter(|| m::hand(black_box(l))));
            group.bench_with_input(BenchmarkId::new("forward", n), &leaves, |b, l| {
                b.iter(|| m::forward(black_box(l)))
            });
            group.bench_with_input(BenchmarkId::new("typed_forward", n), &leaves, |b, l| {
                b.iter(|| m::typed_forward(black_box(l)))
            });
            group.bench_with_input(BenchmarkId::new("reverse", n), &leaves, |b, l| {
                b.iter(|| m::reverse(black_box(l)))
            });
        });
    }
    group.finish();
}

fn imu_benches(c: &mut Criterion) {
    let mut group = c.benchmark_group("imu");
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let input = loop {
        let x = ImuInput::random(&mut rng);
        if !x.is_singular() {
            break x;
        }
    };
    let leaves = imu::Leaves::new(&input);
    group.bench_function("hand", |b| b.iter(|| imu::hand(black_box(&leaves))));
    group.bench_function("forward", |b| b.iter(|| imu::forward(black_box(&leaves))));
    group.bench_function("typed_forward", |b| {
        b.iter(|| imu::typed_forward(black_box(&leaves)))
    });
    group.bench_function("reverse", |b| b.iter(|| imu::reverse(black_box(&leaves))));
    group.finish();
}

fn framing_benches(c: &mut Criterion) {
    let mut group = c.benchmark_group("framing");
    let input = ChainInput::random(chain::MAX_N, &mut ChaCha8Rng::seed_from_u64(2));
    let framed = chain::n10::Leaves::new(&input);
    let plain = chain::unframed::Leaves::new(&input);
    group.bench_function("framed", |b| {
        b.iter(|| chain::framed_value_and_point_jacobian(black_box(&framed)))
    });
    group.bench_function("unframed", |b| {
        b.iter(|| chain::unframed::value_and_point_jacobian(black_box(&plain)))
    });
    group.finish();
}

criterion_group!(benches, chain_benches, imu_benches, framing_benches);
criterion_main!(benches);
