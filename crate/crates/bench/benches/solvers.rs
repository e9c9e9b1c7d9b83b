use criterion::{black_box, criterion_group, criterion_main, Criterion};

use discovery_bench::{bipartite_instance, path_instance, stars_instance, twincover_instance};
use discovery_core::apply_sequence;
use discovery_core::nd::{solve_nd, NdOptions};
use discovery_core::oracle::{solve_bfs, solve_enumerate, Limits};
use discovery_core::reductions::{certificate, check_conditions, decide_stars, solve_source};
use discovery_core::tw::{compute_td, solve_tw, EngineKind, TwOptions};

fn solvers(c: &mut Criterion) {
    let path = path_instance(12, 2, 10);
    c.bench_function("oracle_path12", |b| {
        b.iter(|| solve_enumerate(black_box(&path), &Limits::default()).unwrap())
    });
    c.bench_function("bfs_path12", |b| {
        b.iter(|| solve_bfs(black_box(&path), &Limits::default()).unwrap())
    });
    let td = compute_td(&path.graph).unwrap();
    c.bench_function("tw_canonical_path12", |b| {
        b.iter(|| solve_tw(black_box(&path), &td, &TwOptions::default()).unwrap())
    });
    let ef = TwOptions {
        engine: EngineKind::EfGame,
        ..TwOptions::default()
    };
    c.bench_function("tw_ef_path12", |b| {
        b.iter(|| solve_tw(black_box(&path), &td, &ef).unwrap())
    });
    let bip = bipartite_instance(30, 30, 4, 8);
    c.bench_function("nd_bipartite60", |b| {
        b.iter(|| solve_nd(black_box(&bip), &NdOptions::default()).unwrap())
    });
}

fn reductions(c: &mut Criterion) {
    let stars = stars_instance();
    c.bench_function("decide_stars", |b| {
        b.iter(|| decide_stars(black_box(&stars)).unwrap())
    });
    let tc = twincover_instance();
    let sol = solve_source(&tc.provenance.source).unwrap();
    c.bench_function("twincover_certificate_check", |b| {
        b.iter(|| {
            let seq = certificate(&tc, &sol).unwrap();
            let t = apply_sequence(tc.graph(), &tc.instance.start, &seq).unwrap();
            check_conditions(&tc, &t).ok()
        })
    });
}

criterion_group!(benches, solvers, reductions);
criterion_main!(benches);
