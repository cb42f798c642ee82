use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_bigint::BigUint;

use congabc_bench::semiprimes;
use congabc_core::{default_factorizer, theta, ThetaPlan};

fn word_semiprimes(c: &mut Criterion) {
    let engine = default_factorizer();
    let mut group = c.benchmark_group("factorize semiprime");
    for bits in [16, 24, 31, 34] {
        let inputs = semiprimes(bits, 4);
        group.bench_with_input(BenchmarkId::from_parameter(2 * bits), &inputs, |b, inputs| {
            b.iter(|| {
                for n in inputs {
                    black_box(engine.factorize(n).unwrap());
                }
            })
        });
    }
    group.finish();
}

fn smooth_and_prime_powers(c: &mut Criterion) {
    let engine = default_factorizer();
    let inputs = [
        BigUint::from(6_436_341u32),
        BigUint::from(6_436_343u32),
        BigUint::from(37_281_920u32),
        BigUint::from(2u32).pow(127) - 1u32,
    ];
    c.bench_function("factorize small mixed", |b| {
        b.iter(|| {
            for n in &inputs {
                black_box(engine.factorize(n).unwrap());
            }
        })
    });
}

fn image_radical(c: &mut Criterion) {
    let engine = default_factorizer();
    let t = congabc_core::make_solution(&(-4_321).into(), &(-5_678).into(), &9_999.into()).unwrap();
    let mut group = c.benchmark_group("image radical n=8");
    let plan = ThetaPlan::new(8, 64).unwrap();
    group.bench_function("cyclotomic pieces", |b| {
        b.iter(|| black_box(plan.image_radical(engine, &t).unwrap()))
    });
    group.bench_function("direct factorization", |b| {
        b.iter(|| black_box(theta(&t, 8).unwrap().output.radical_with(engine).unwrap()))
    });
    group.finish();
}

criterion_group!(benches, word_semiprimes, smooth_and_prime_powers, image_radical);
criterion_main!(benches);
