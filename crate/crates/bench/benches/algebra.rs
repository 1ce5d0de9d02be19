use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hopfkit::invariants::{cointegral_space, integral_space};
use hopfkit::{builtins, Field, Matrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// n × n integer matrix with roughly `density` nonzero entries per row.
fn sparse_matrix(n: usize, density: usize, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|_| {
            let mut r = vec![0i64; n];
            for _ in 0..density {
                r[rng.gen_range(0..n)] = rng.gen_range(-5..=5);
            }
            r
        })
        .collect();
    let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    Matrix::from_ints(&Field::rational(), &refs)
}

fn rref(c: &mut Criterion) {
    let mut g = c.benchmark_group("rref");
    for n in [32, 96] {
        let m = sparse_matrix(n, 4, 1);
        g.bench_with_input(BenchmarkId::new("sparse", n), &m, |b, m| b.iter(|| black_box(m.rref_sparse())));
        g.bench_with_input(BenchmarkId::new("dense", n), &m, |b, m| b.iter(|| black_box(m.rref_dense())));
    }
    g.finish();
}

fn cyclotomic(c: &mut Criterion) {
    let f = Field::new("cyclotomic(9)".parse().unwrap()).unwrap();
    let z = f.zeta().unwrap();
    let x = f.parse("1/2*z^5 - 3*z^2 + 7").unwrap();
    let y = &(&x * &z) + &f.from_int(-2);
    c.bench_function("cyclotomic(9) mul", |b| b.iter(|| black_box(&x * &y)));
    c.bench_function("cyclotomic(9) inv", |b| b.iter(|| black_box(x.inv().unwrap())));
}

fn integrals(c: &mut Criterion) {
    let mut g = c.benchmark_group("integrals");
    g.sample_size(10);
    let h = builtins::uqsl2(3).unwrap();
    h.materialize();
    g.bench_function("uqsl2(3) integral space", |b| b.iter(|| black_box(integral_space(&h))));
    g.bench_function("uqsl2(3) cointegral space", |b| b.iter(|| black_box(cointegral_space(&h))));
    let t = builtins::taft(5, 2).unwrap();
    g.bench_function("taft(5) verify axioms", |b| b.iter(|| black_box(t.verify_axioms())));
    g.finish();
}

criterion_group!(benches, rref, cyclotomic, integrals);
criterion_main!(benches);
