use criterion::{black_box, criterion_group, criterion_main, Criterion};
use hyperzero::classifier::classify;
use hyperzero::netcurve::{detect_enclosure, extract_curve};
use hyperzero::roots::{find_roots_with, RootOptions};
use hyperzero::{build_tn, eigenvalues, generate_pn_exact, limiting_set, PnEvaluator, Rect, SymbolParams};

fn example() -> SymbolParams {
    SymbolParams::parse("-27/4", "-7/8", "5/2").unwrap()
}

fn omega1() -> SymbolParams {
    SymbolParams::parse("-13/4", "1", "-1/5").unwrap()
}

fn bench_classify(c: &mut Criterion) {
    let p = example();
    c.bench_function("classify exact", |b| b.iter(|| classify(black_box(&p)).unwrap()));
    let f = SymbolParams::new(-6.75, -0.875, 2.5).unwrap();
    c.bench_function("classify float", |b| b.iter(|| classify(black_box(&f)).unwrap()));
}

fn bench_roots(c: &mut Criterion) {
    let p = example();
    let opts = RootOptions::default();
    let mut g = c.benchmark_group("roots");
    g.sample_size(20);
    for n in [40, 150] {
        g.bench_function(format!("P_{n}"), |b| {
            b.iter(|| find_roots_with(&PnEvaluator::new(black_box(&p), n), &opts).unwrap())
        });
    }
    g.bench_function("T_150 eigenvalues", |b| {
        let t = build_tn(&p, 150).unwrap();
        b.iter(|| eigenvalues(black_box(&t)).unwrap())
    });
    g.finish();
}

fn bench_exact(c: &mut Criterion) {
    let p = example();
    c.bench_function("generate_pn_exact 14", |b| {
        b.iter(|| generate_pn_exact(black_box(&p), 14).unwrap())
    });
}

fn bench_curve(c: &mut Criterion) {
    let p = omega1();
    let rect = Rect::centered(4.0).unwrap();
    let mut g = c.benchmark_group("curve");
    g.sample_size(10);
    g.bench_function("extract 512", |b| b.iter(|| extract_curve(black_box(&p), &rect, 512).unwrap()));
    g.bench_function("detect_enclosure 512", |b| b.iter(|| detect_enclosure(black_box(&p), 512).unwrap()));
    g.bench_function("limiting_set 200", |b| {
        let rect = Rect::centered(12.0).unwrap();
        b.iter(|| limiting_set(black_box(&example()), &rect, 200, 1e-2).unwrap())
    });
    g.finish();
}

criterion_group!(benches, bench_classify, bench_roots, bench_exact, bench_curve);
criterion_main!(benches);
