use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use desitter_bench::{params, truncation, POINTS};
use desitter_core::cavity::{amplitude_numeric, AtomPath, CavityMode, ConformalCavity};
use desitter_core::freemode::{bell_measurement, teleport};
use desitter_core::quadrature::QuadratureSettings;
use desitter_core::vacua::alpha_vacuum_state;
use desitter_core::{Alpha, BellOutcome, LogicalQubit};

fn vacuum(c: &mut Criterion) {
    let mut g = c.benchmark_group("alpha_vacuum");
    for (k, a) in POINTS {
        let p = params(k, a);
        let t = truncation(&p, 1e-12);
        g.bench_with_input(BenchmarkId::from_parameter(format!("k/H={k},a={a}")), &p, |b, p| {
            b.iter(|| alpha_vacuum_state(black_box(p), t.n_max, t.tol).unwrap())
        });
    }
    g.finish();
}

fn single_outcome(c: &mut Criterion) {
    let q = LogicalQubit::from_bloch(1.1, 0.4);
    let mut g = c.benchmark_group("teleport_outcome");
    g.sample_size(20);
    for (k, a) in POINTS {
        let p = params(k, a);
        let t = truncation(&p, 1e-10);
        g.bench_with_input(BenchmarkId::from_parameter(format!("k/H={k},a={a}")), &p, |b, p| {
            b.iter(|| teleport(BellOutcome::ALL[3], &q, black_box(p), t).unwrap())
        });
    }
    g.finish();
}

fn projection(c: &mut Criterion) {
    let q = LogicalQubit::from_bloch(0.7, 2.0);
    let p = params(2.0, Alpha::BunchDavies);
    let t = truncation(&p, 1e-10);
    c.bench_function("bell_projection_k/H=2", |b| {
        b.iter(|| bell_measurement(&q, black_box(&p), t).unwrap())
    });
}

fn cavity_amplitude(c: &mut Criterion) {
    let cav = ConformalCavity::new(0.5, 1.0, 1, Alpha::Finite(-4.0)).unwrap();
    let path = AtomPath::through(&cav, 3.0, 1.0, 0.5, -20.0).unwrap();
    let settings = QuadratureSettings::default();
    c.bench_function("cavity_a_quadrature", |b| {
        b.iter(|| amplitude_numeric(CavityMode::Conformal(&cav), black_box(&path), &settings).unwrap())
    });
}

criterion_group!(benches, vacuum, single_outcome, projection, cavity_amplitude);
criterion_main!(benches);
