use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use toric_ding::normal_cone::halving_grid;
use toric_ding::rat::rat;
use toric_ding::{corpus, dh_measure, e_na, extremal_affine, reduce_jna, verify_family, weight_measure, HPolytope};
use toric_ding_bench::{family, fano, four_piece_bl1p3, three_piece_p2};

fn geometry(c: &mut Criterion) {
    c.bench_function("vertices+volume Bl1P3 (cold caches)", |b| {
        b.iter(|| {
            let p: HPolytope = corpus::bl1p3();
            black_box(p.volume().unwrap())
        })
    });
    let p = fano("Bl1P3");
    c.bench_function("extremal_affine Bl1P3", |b| b.iter(|| black_box(extremal_affine(&p).unwrap())));
}

fn functionals(c: &mut Criterion) {
    let f2 = three_piece_p2();
    let f3 = four_piece_bl1p3();
    c.bench_function("dh_measure three-piece P2", |b| b.iter(|| black_box(dh_measure(&f2).unwrap())));
    c.bench_function("dh_measure four-piece Bl1P3", |b| b.iter(|| black_box(dh_measure(&f3).unwrap())));
    c.bench_function("e_na four-piece Bl1P3", |b| b.iter(|| black_box(e_na(&f3))));
    c.bench_function("reduce_jna four-piece Bl1P3", |b| b.iter(|| black_box(reduce_jna(&f3).unwrap())));
}

fn oracle(c: &mut Criterion) {
    let f2 = three_piece_p2();
    c.bench_function("weight_measure P2 k=64", |b| b.iter(|| black_box(weight_measure(&f2, 64).unwrap())));
}

fn normal_cone(c: &mut Criterion) {
    let fam = family("Bl1P2");
    let grid = vec![rat(1, 8), rat(1, 4), rat(1, 2)];
    let mut g = c.benchmark_group("normal_cone");
    g.sample_size(10);
    g.bench_function("verify_family Bl1P2", |b| b.iter(|| black_box(verify_family(&fam, &grid).unwrap())));
    let fam3 = family("P3");
    let grid3 = halving_grid(&fam3.default_cap(), 3);
    g.bench_function("verify_family P3", |b| b.iter(|| black_box(verify_family(&fam3, &grid3).unwrap())));
    g.finish();
}

criterion_group!(benches, geometry, functionals, oracle, normal_cone);
criterion_main!(benches);
