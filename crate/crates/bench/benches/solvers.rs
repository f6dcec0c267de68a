use std::f64::consts::PI;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use microswim::bem::mesh::SpheroidShape;
use microswim::bem::solver::{solve_swim, SlipProfile};
use microswim::field::{shear_and_stress_with, MotionMode, PreparedFlow, ShearMeasure};
use microswim::squirmer::oscillation_coefficients;
use microswim::Scenario;
use microswim_bench::reference_spectrum;

fn bem(c: &mut Criterion) {
    let shape = SpheroidShape::new(2e-6, 0.7e-6).unwrap();
    let slip = SlipProfile::equatorial_band(PI / 3.0, 1e-4);
    let mut group = c.benchmark_group("bem_swim");
    group.sample_size(10);
    for n in [128, 256] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| b.iter(|| solve_swim(&shape, &slip, 1e-3, n).unwrap()));
    }
    group.finish();
}

fn expansion(c: &mut Criterion) {
    let spec = reference_spectrum();
    c.bench_function("oscillation_coefficients", |b| b.iter(|| oscillation_coefficients(&spec).unwrap()));
}

fn field(c: &mut Criterion) {
    let s = Scenario::low();
    let spectrum = reference_spectrum().with_scale(0.05, 12_140.0);
    let flow = PreparedFlow::new(&MotionMode::Oscillating { scenario: s.clone(), spectrum }).unwrap();
    let distances: Vec<f64> = (0..41).map(|i| s.a * 0.05 * 2000f64.powf(i as f64 / 40.0)).collect();
    c.bench_function("field_scan_41", |b| {
        b.iter(|| distances.iter().map(|&d| shear_and_stress_with(&flow, d, s.eta, ShearMeasure::Envelope).unwrap().stress).sum::<f64>())
    });
}

criterion_group!(benches, bem, expansion, field);
criterion_main!(benches);
