use bnl_bench::knots;
use bnl_core::complex::{build_complex, homology, homology_oracle, simplify};
use bnl_core::diagram::Diagram;
use bnl_core::lasagna::cable_system;
use bnl_core::FrobeniusTheory;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn reduced_homology(c: &mut Criterion) {
    let t = FrobeniusTheory::bar_natan();
    let mut g = c.benchmark_group("homology");
    for (name, d) in knots() {
        g.bench_with_input(BenchmarkId::new("simplify", name), &d, |b, d| {
            b.iter(|| homology(&simplify(&build_complex(black_box(d), &t).unwrap())).module())
        });
    }
    g.finish();
}

fn dense_oracle(c: &mut Criterion) {
    let t = FrobeniusTheory::bar_natan();
    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    for (name, d) in knots().into_iter().take(3) {
        let cx = build_complex(&d, &t).unwrap();
        g.bench_with_input(BenchmarkId::new("dense", name), &cx, |b, cx| b.iter(|| homology_oracle(black_box(cx))));
    }
    g.finish();
}

fn cable_stages(c: &mut Criterion) {
    let k = Diagram::unlink(1).with_framings(vec![0]).unwrap();
    c.bench_function("cable_system/unknot_r2", |b| {
        b.iter(|| cable_system(&k, &Diagram::empty(), &[0], 2, &Default::default()).unwrap())
    });
}

criterion_group!(benches, reduced_homology, dense_oracle, cable_stages);
criterion_main!(benches);
