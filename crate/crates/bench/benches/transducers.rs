use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use treeduce::builtins::{self, quadratic, quadratic_input};
use treeduce::fuzz::{random_tree, abc};
use treeduce::mtt::eliminate_lookahead;
use treeduce::sharing::{dedup, run_shared};
use treeduce::sst;
use treeduce::tdtt::to_register_machine;
use treeduce::terms::{encode_string, enumerate_trees, Word};
use treeduce::check_equiv;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn top_down(c: &mut Criterion) {
    let tt = builtins::b_replacement();
    let m = to_register_machine(&tt);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let inputs: Vec<_> = (0..64).map(|_| random_tree(&mut rng, &abc(), 200)).collect();
    let mut g = c.benchmark_group("top-down");
    g.bench_function("rewriting", |b| {
        b.iter(|| inputs.iter().map(|t| tt.run_topdown(black_box(t)).is_ok()).count())
    });
    g.bench_function("registers", |b| {
        b.iter(|| inputs.iter().map(|t| tt.run_bottomup(black_box(t)).is_ok()).count())
    });
    g.bench_function("machine", |b| {
        b.iter(|| inputs.iter().map(|t| m.run(black_box(t)).is_ok()).count())
    });
    g.finish();
}

fn sharing(c: &mut Criterion) {
    let tt = quadratic();
    let mut g = c.benchmark_group("quadratic");
    for n in [25, 50, 100, 200] {
        let x = quadratic_input(n);
        g.bench_with_input(BenchmarkId::new("plain", n), &x, |b, x| b.iter(|| tt.run_topdown(x)));
        g.bench_with_input(BenchmarkId::new("shared", n), &x, |b, x| b.iter(|| run_shared(&tt, x)));
        g.bench_with_input(BenchmarkId::new("shared+dedup", n), &x, |b, x| {
            b.iter(|| dedup(&run_shared(&tt, x).unwrap()))
        });
    }
    g.finish();
}

fn macro_tt(c: &mut Criterion) {
    let m = builtins::reverse_mtt();
    let mut g = c.benchmark_group("macro");
    for n in [100, 1000] {
        let w = Word::from("abc".repeat(n / 3).as_str());
        let x = encode_string(&w, m.input()).unwrap();
        g.bench_with_input(BenchmarkId::new("reverse", n), &x, |b, x| b.iter(|| m.run_oi(x)));
        g.bench_with_input(BenchmarkId::new("reverse-registers", n), &x, |b, x| {
            b.iter(|| m.run_bottomup(x))
        });
    }
    let b_mtt = builtins::b_replacement_mtt();
    let elim = eliminate_lookahead(&b_mtt);
    let trees = enumerate_trees(&abc(), 7).unwrap();
    g.bench_function("eliminated-lookahead", |b| {
        b.iter(|| trees.iter().filter(|t| elim.run_oi(t).is_ok()).count())
    });
    g.finish();
}

fn streaming(c: &mut Criterion) {
    let remark = sst::remark_example();
    let w = Word::from("ab".repeat(500).as_str());
    c.bench_function("sst/remark-1000", |b| b.iter(|| remark.run(black_box(&w))));
    let doubling = sst::doubling();
    let w = Word::from("a".repeat(16).as_str());
    c.bench_function("sst/doubling-16", |b| b.iter(|| doubling.run(black_box(&w))));
}

fn equivalence(c: &mut Criterion) {
    let tt = builtins::b_replacement();
    let m = to_register_machine(&tt);
    c.bench_function("check-equiv/machine-7", |b| {
        b.iter(|| check_equiv(tt.clone(), m.clone(), 7).unwrap().pass)
    });
}

criterion_group!(benches, top_down, sharing, macro_tt, streaming, equivalence);
criterion_main!(benches);
