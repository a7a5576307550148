use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use storagecode::AlgebraElement;

fn random_element(arity: u32, terms: usize, rng: &mut ChaCha8Rng) -> AlgebraElement {
    let masks: Vec<u64> = (0..terms).map(|_| rng.gen_range(0..1u64 << arity)).collect();
    AlgebraElement::from_monomials(arity, masks).unwrap()
}

fn multiply(c: &mut Criterion) {
    let mut group = c.benchmark_group("algebra_mul");
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (arity, terms) in [(10u32, 32usize), (14, 64), (18, 128), (14, 4096)] {
        let f = random_element(arity, terms, &mut rng);
        let g = random_element(arity, terms, &mut rng);
        group.bench_with_input(
            BenchmarkId::new(format!("n{arity}"), terms),
            &(f, g),
            |b, (f, g)| b.iter(|| f.mul(g).unwrap()),
        );
    }
    let f = random_element(16, 1 << 14, &mut rng);
    group.bench_function("to_b2_n16", |b| b.iter(|| f.to_b2()));
    group.finish();
}

criterion_group!(benches, multiply);
criterion_main!(benches);
