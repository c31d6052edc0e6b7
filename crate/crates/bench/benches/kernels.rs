use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use fatpairs::fatness::fat_test;
use fatpairs::groups::stream_rng;
use fatpairs::modspin::{is_irreducible_exhaustive, is_irreducible_norton, DEFAULT_ORACLE_CAP};
use fatpairs::proportions::{exact_pair_stats, mc_pair_stats, DEFAULT_PAIR_CAP};
use fatpairs::{Field, GroupDescriptor, Matrix};

fn samples(q: u64, d: usize, n: usize) -> Vec<Matrix> {
    let g = GroupDescriptor::gl(&Field::of_order(q).unwrap(), d).unwrap();
    let mut rng = stream_rng(1, 0);
    (0..n).map(|_| g.sample(&mut rng)).collect()
}

fn fatness(c: &mut Criterion) {
    for (q, d) in [(2u64, 5usize), (3, 6), (9, 8)] {
        let ms = samples(q, d, 64);
        c.bench_function(&format!("fat_test GL({d},{q}) x64"), |b| {
            b.iter(|| ms.iter().filter(|m| fat_test(black_box(m)).unwrap().is_fat).count())
        });
    }
}

fn irreducibility(c: &mut Criterion) {
    let ms = samples(3, 5, 64);
    c.bench_function("exhaustive spin GL(5,3) x32 pairs", |b| {
        b.iter(|| ms.chunks(2).filter(|p| is_irreducible_exhaustive(black_box(p), DEFAULT_ORACLE_CAP).unwrap().is_irreducible()).count())
    });
    c.bench_function("norton GL(5,3) x32 pairs", |b| {
        let mut rng = stream_rng(2, 0);
        b.iter(|| ms.chunks(2).filter(|p| is_irreducible_norton(black_box(p), &mut rng).unwrap().is_irreducible()).count())
    });
}

fn statistics(c: &mut Criterion) {
    let gl32 = GroupDescriptor::gl(&Field::of_order(2).unwrap(), 3).unwrap();
    c.bench_function("exact pair stats GL(3,2)", |b| b.iter(|| exact_pair_stats(black_box(&gl32), DEFAULT_PAIR_CAP, 1).unwrap()));
    let gl43 = GroupDescriptor::gl(&Field::of_order(3).unwrap(), 4).unwrap();
    c.bench_function("monte carlo GL(4,3) 1000 pairs", |b| b.iter(|| mc_pair_stats(black_box(&gl43), 1000, 7, 1).unwrap()));
}

criterion_group! {
    name = kernels;
    config = Criterion::default().sample_size(10);
    targets = fatness, irreducibility, statistics
}
criterion_main!(kernels);
