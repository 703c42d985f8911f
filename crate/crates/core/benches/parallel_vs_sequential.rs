use std::path::PathBuf;

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use quillen::freelie::FreeDgl;
use quillen::models::CellComplexDescription;
use quillen::par;
use quillen::pipeline::{build_persistence_model, shift_pair, stability_report};
use quillen::qlinalg::rational::int;

fn corpus(name: &str) -> CellComplexDescription {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(format!("{name}.json"));
    CellComplexDescription::from_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn homology(c: &mut Criterion) {
    let mut group = c.benchmark_group("free_dgl_homology");
    group.sample_size(10);
    for n in [9, 10] {
        let build = || FreeDgl::from_text(&[("x", 1), ("y", 1), ("z", 3)], &[("z", "[x,y]")], n).unwrap();
        group.bench_with_input(BenchmarkId::new("parallel", n), &n, |b, _| {
            b.iter(|| black_box(build().homology_dims(n - 1)))
        });
        group.bench_with_input(BenchmarkId::new("sequential", n), &n, |b, _| {
            b.iter(|| par::sequential(|| black_box(build().homology_dims(n - 1))))
        });
    }
    group.finish();
}

fn persistence_model(c: &mut Criterion) {
    let mut group = c.benchmark_group("persistence_model");
    group.sample_size(10);
    for name in ["cp3_filtration", "wedge_growth"] {
        let desc = corpus(name);
        group.bench_function(BenchmarkId::new("parallel", name), |b| {
            b.iter(|| black_box(build_persistence_model(&desc, 9, true).unwrap()))
        });
        group.bench_function(BenchmarkId::new("sequential", name), |b| {
            b.iter(|| par::sequential(|| black_box(build_persistence_model(&desc, 9, true).unwrap())))
        });
    }
    group.finish();
}

fn report(c: &mut Criterion) {
    let mut group = c.benchmark_group("stability_report");
    group.sample_size(10);
    let pair = shift_pair(&corpus("s2_times_s2"), &int(1)).unwrap();
    group.bench_function("parallel", |b| b.iter(|| black_box(stability_report(&pair, 8, None).unwrap())));
    group.bench_function("sequential", |b| {
        b.iter(|| par::sequential(|| black_box(stability_report(&pair, 8, None).unwrap())))
    });
    group.finish();
}

criterion_group!(benches, homology, persistence_model, report);
criterion_main!(benches);
