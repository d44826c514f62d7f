use criterion::{black_box, criterion_group, criterion_main, Criterion};
use reap_bench::scrambled;
use reap_core::engine::decide;
use reap_core::kb::{self, KnowledgeBase, OrderConfig};
use reap_core::{min_colors, PropertyQuery};

fn min_colors_dp(c: &mut Criterion) {
    let coloring = scrambled(3, 6, 5);
    c.bench_function("min_colors T(6,3) k=2", |b| {
        b.iter(|| min_colors(black_box(&coloring), 2, 8).unwrap())
    });
    let wide = scrambled(4, 4, 7);
    c.bench_function("min_colors T(4,4) k=3", |b| {
        b.iter(|| min_colors(black_box(&wide), 3, 8).unwrap())
    });
}

fn search(c: &mut Criterion) {
    let mut group = c.benchmark_group("decide");
    group.sample_size(10);
    let q = PropertyQuery::new(3, 5, 2, 2).unwrap();
    group.bench_function("P(3,5,2,2)", |b| {
        b.iter(|| decide(black_box(&q), 3, 50_000_000).unwrap())
    });
    let q = PropertyQuery::new(3, 9, 2, 3).unwrap();
    group.bench_function("P(3,9,2,3)", |b| {
        b.iter(|| decide(black_box(&q), 2, 1_000_000).unwrap())
    });
    group.finish();
}

fn order(c: &mut Criterion) {
    let mut group = c.benchmark_group("order");
    group.sample_size(10);
    let mut base = KnowledgeBase::new();
    kb::load_fixtures(&mut base);
    let config = OrderConfig::default();
    group.bench_function("closure N=12", |b| {
        b.iter(|| kb::close_kb(black_box(&base), config.seed, &[]).unwrap())
    });
    group.bench_function("table 9 without search", |b| {
        b.iter(|| kb::table(&mut base.clone(), 9, &config, false).unwrap())
    });
    group.finish();
}

criterion_group!(benches, min_colors_dp, search, order);
criterion_main!(benches);
