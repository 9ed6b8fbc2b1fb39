use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nrs_core::bench::{binary_sweep, unary_sweep, PreparedFormat, ReferenceMode, SweepOptions};
use nrs_core::exact::ArithOp;
use nrs_core::formats::Codec;
use nrs_core::math::UnaryFn;
use nrs_core::par::Exec;

const DESCS: [&str; 3] = ["posit:9:1:RE", "morrisunary:9:RE", "ieee754:4:4:RE"];

fn binary(c: &mut Criterion) {
    let mut group = c.benchmark_group("binary_sweep_add");
    group.sample_size(10);
    for d in DESCS {
        let fmt = PreparedFormat::new(Codec::parse(d).unwrap());
        for (name, exec) in [("parallel", Exec::Parallel), ("sequential", Exec::Sequential)] {
            let opts = SweepOptions { exec, ..Default::default() };
            group.bench_with_input(BenchmarkId::new(name, d), &fmt, |b, f| {
                b.iter(|| binary_sweep(f, ArithOp::Add, &opts).unwrap().stats.exact_count)
            });
        }
    }
    group.finish();
}

fn unary(c: &mut Criterion) {
    let mut group = c.benchmark_group("unary_sweep_ln");
    group.sample_size(10);
    let codec = Codec::parse("posit:12:2:RE").unwrap();
    for (name, exec) in [("parallel", Exec::Parallel), ("sequential", Exec::Sequential)] {
        group.bench_function(name, |b| {
            b.iter(|| unary_sweep(&codec, &UnaryFn::Ln, ReferenceMode::Precise, exec, 16).unwrap().exact)
        });
    }
    group.finish();
}

criterion_group!(benches, binary, unary);
criterion_main!(benches);
