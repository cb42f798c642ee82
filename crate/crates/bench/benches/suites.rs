use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use congabc_core::harness::corpus::enumerate_solutions;
use congabc_core::Verifier;

fn suites(c: &mut Criterion) {
    let v = Verifier::default();
    let mut group = c.benchmark_group("suites c<=300");
    group.sample_size(10);
    group.bench_function("lemma1 n={2,4} eps={0.1,1}", |b| {
        b.iter(|| black_box(v.lemma1(enumerate_solutions(300), &[2, 4], &[0.1, 1.0]).unwrap()))
    });
    group.bench_function("lemma2 N=3..=50", |b| {
        let moduli: Vec<u64> = (3..=50).collect();
        b.iter(|| black_box(v.lemma2(enumerate_solutions(300), &moduli).unwrap()))
    });
    group.bench_function("identities n={2,4,6,8}", |b| {
        b.iter(|| black_box(v.identities(enumerate_solutions(300), &[2, 4, 6, 8]).unwrap()))
    });
    group.bench_function("search q>1", |b| b.iter(|| black_box(v.search_quality(300, 1.0).unwrap())));
    group.finish();
}

criterion_group!(benches, suites);
criterion_main!(benches);
