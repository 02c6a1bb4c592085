use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use stbc_core::code_metrics::{enumerate, shaping_check, tuple_count, Constellation, EnumConfig, DEFAULT_TOL};
use stbc_core::presets::preset;
use stbc_core::representations::{det2, lambda2};
use std::hint::black_box;

fn min_det(c: &mut Criterion) {
    let cfg = EnumConfig::default();
    let mut group = c.benchmark_group("min_det");
    group.sample_size(10);
    for (name, l) in [
        ("alamouti-na", 2),
        ("golden", 1),
        ("golden", 2),
        ("mb-8.5", 1),
        ("four-9.2", 1),
    ] {
        let code = preset(name).unwrap();
        let cons = Constellation::boxed(l);
        group.throughput(Throughput::Elements(tuple_count(&code, &cons).unwrap() as u64));
        group.bench_with_input(BenchmarkId::new(name, l), &cons, |b, cons| {
            b.iter(|| enumerate(black_box(&code), cons, &cfg).unwrap())
        });
    }
    group.finish();
}

fn exact_det(c: &mut Criterion) {
    let code = preset("golden").unwrap();
    let a = &code.algebra;
    let t = a.tower();
    let x0 = t.elem_q(&[(1, 2), (3, 1), (-1, 3), (2, 1)]).unwrap();
    let x1 = t.elem_q(&[(-2, 1), (1, 1), (0, 1), (5, 4)]).unwrap();
    c.bench_function("det2 golden", |b| b.iter(|| det2(a, black_box(&x0), black_box(&x1))));
    c.bench_function("lambda2 det golden", |b| {
        b.iter(|| lambda2(a, black_box(&x0), black_box(&x1)).det().unwrap())
    });
}

fn shaping(c: &mut Criterion) {
    let code = preset("four-9.2").unwrap();
    c.bench_function("shaping four-9.2", |b| {
        b.iter(|| shaping_check(black_box(&code), DEFAULT_TOL).unwrap())
    });
}

criterion_group!(benches, min_det, exact_det, shaping);
criterion_main!(benches);
