use criterion::{criterion_group, criterion_main, Criterion, Throughput};
use stbc_core::channel_sim::{build_codebook, run_sweep, ChannelConfig};
use stbc_core::code_metrics::Constellation;
use stbc_core::presets::preset;
use std::hint::black_box;

const TRIALS: u64 = 200;

fn sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("ml_sweep");
    group.sample_size(10);
    group.throughput(Throughput::Elements(TRIALS));
    for (name, q) in [("golden", 4), ("alamouti-na", 4), ("mb-8.4", 4)] {
        let code = preset(name).unwrap();
        let cb = build_codebook(&code, &Constellation::qam(q)).unwrap();
        let cfg = ChannelConfig::new(cb.rows, cb.rows, vec![10.0], TRIALS, 1);
        group.bench_function(name, |b| b.iter(|| run_sweep(black_box(&cfg), &cb).unwrap()));
    }
    group.finish();
}

fn codebook(c: &mut Criterion) {
    let code = preset("golden").unwrap();
    let cons = Constellation::qam(4);
    c.bench_function("codebook golden 4-QAM", |b| {
        b.iter(|| build_codebook(black_box(&code), &cons).unwrap())
    });
}

criterion_group!(benches, sweep, codebook);
criterion_main!(benches);
