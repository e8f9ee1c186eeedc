use criterion::{criterion_group, criterion_main, Criterion};
use pca_core::machine::{decode_index, encode_program, run, Budget, Oracle};
use pca_core::Nat;

fn bench_codec(c: &mut Criterion) {
    c.bench_function("decode_index 0..512", |b| {
        b.iter(|| {
            for i in 0..512u64 {
                std::hint::black_box(decode_index(&Nat::from_u64(i)));
            }
        })
    });
    let progs: Vec<_> = (0..512u64)
        .map(|i| decode_index(&Nat::from_u64(i)))
        .collect();
    c.bench_function("encode_program 0..512", |b| {
        b.iter(|| {
            for p in &progs {
                std::hint::black_box(encode_program(p));
            }
        })
    });
}

fn bench_eval(c: &mut Criterion) {
    // A tight countdown loop: decrement from 10_000 to zero.
    let mut a = pca_core::machine::asm::Asm::new();
    a.cnst(1, 10_000u64)
        .label("top")
        .decjmp(1, "done")
        .inc(0)
        .jump("top")
        .label("done")
        .halt(0);
    let p = a.finish();
    let budget = Budget::default();
    c.bench_function("countdown 10k steps", |b| {
        b.iter(|| std::hint::black_box(run(&p, &Nat::zero(), &Oracle::Empty, &budget)))
    });
}

criterion_group!(benches, bench_codec, bench_eval);
criterion_main!(benches);
