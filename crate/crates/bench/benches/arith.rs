use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kloos3::builtin::find_primitive_modulus;
use kloos3::curve::CurveParams;
use kloos3::oracle::Oracle;
use kloos3::valuation::kval;
use kloos3::FieldSpec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn field(m: usize) -> FieldSpec {
    FieldSpec::builtin(m)
        .or_else(|_| find_primitive_modulus(m))
        .unwrap()
}

fn field_ops(c: &mut Criterion) {
    let mut group = c.benchmark_group("field");
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for m in [5, 12, 40] {
        let f = field(m);
        let (x, y) = (f.random(&mut rng), f.random(&mut rng));
        group.bench_with_input(BenchmarkId::new("mul", m), &m, |b, _| {
            b.iter(|| f.mul(black_box(&x), black_box(&y)))
        });
        group.bench_with_input(BenchmarkId::new("inv", m), &m, |b, _| {
            b.iter(|| f.inv(black_box(&x)))
        });
        group.bench_with_input(BenchmarkId::new("trace", m), &m, |b, _| {
            b.iter(|| f.trace(black_box(&x)))
        });
        group.bench_with_input(BenchmarkId::new("sqrt", m), &m, |b, _| {
            let s = f.square(&x);
            b.iter(|| f.sqrt(black_box(&s)))
        });
    }
    group.finish();
}

fn oracle_sum(c: &mut Criterion) {
    let f = field(7);
    let o = Oracle::new(&f).unwrap();
    let a = f.element(1234);
    c.bench_function("oracle/kloosterman_sum/7", |b| {
        b.iter(|| o.kloosterman_sum(black_box(&a)))
    });
}

fn walks(c: &mut Criterion) {
    let mut group = c.benchmark_group("curve");
    for m in [7, 20, 40] {
        let f = field(m);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = f.random(&mut rng);
        let curve = CurveParams::new(&f, a).unwrap();
        let p = curve.sample_point(&mut rng, 256).unwrap();
        let x = p.x().unwrap();
        group.bench_with_input(BenchmarkId::new("triple_x", m), &m, |b, _| {
            b.iter(|| curve.triple_x(black_box(&x)))
        });
    }
    // The walk length is k + r and the period r grows with the field, so
    // kval is only timed on small fields.
    for m in [7, 10, 12] {
        let f = field(m);
        let a = f.element(1234 % f.order());
        let curve = CurveParams::new(&f, a).unwrap();
        group.bench_with_input(BenchmarkId::new("kval", m), &m, |b, _| {
            b.iter(|| kval(&curve, &mut ChaCha8Rng::seed_from_u64(3)).unwrap().k)
        });
    }
    group.finish();
}

criterion_group!(benches, field_ops, oracle_sum, walks);
criterion_main!(benches);
