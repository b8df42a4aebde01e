use criterion::{criterion_group, criterion_main, Criterion};
use exherm::algebra::wronskian;
use exherm::chain::resolve_action;
use exherm_bench::{ladder_pair, solution_pair, state};
use std::hint::black_box;

fn compose(c: &mut Criterion) {
    let (b, bd) = ladder_pair();
    c.bench_function("compose b b†", |bench| bench.iter(|| black_box(&b).compose(black_box(&bd))));
    let bb = b.compose(&b);
    let bdbd = bd.compose(&bd);
    c.bench_function("compose b² (b†)²", |bench| bench.iter(|| black_box(&bb).compose(black_box(&bdbd))));
}

fn wronskians(c: &mut Criterion) {
    for n in [0, 4] {
        let (u, v) = solution_pair(n);
        c.bench_function(&format!("wronskian psi({n}) psit({n})"), |bench| bench.iter(|| wronskian(black_box(&u), black_box(&v))));
    }
}

fn actions(c: &mut Criterion) {
    for n in [-4, 3] {
        let s = state(n);
        c.bench_function(&format!("resolve b† psi({n})"), |bench| bench.iter(|| resolve_action("b†", black_box(&s))));
    }
}

criterion_group!(benches, compose, wronskians, actions);
criterion_main!(benches);
