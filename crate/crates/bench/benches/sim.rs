use std::collections::BTreeMap;

use criterion::{criterion_group, criterion_main, Criterion};
use samplab::{build_scenario, masp, named, simulate, step, HybridState};

fn bench_rk4_step(c: &mut Criterion) {
    let sc = build_scenario("example1", &BTreeMap::new()).unwrap();
    let state = HybridState {
        t: 0.0,
        w: vec![1.0, 0.0],
        u_held: vec![-1.25],
        last_event_time: 0.0,
    };
    c.bench_function("rk4_step_adaptive_scalar", |b| {
        b.iter(|| step(std::hint::black_box(&state), &sc, 1e-3).unwrap())
    });
}

fn bench_short_simulation(c: &mut Criterion) {
    let mut ov = BTreeMap::new();
    ov.insert("t_end".to_string(), 2.0);
    let sc = build_scenario("example1", &ov).unwrap();
    c.bench_function("simulate_adaptive_scalar_2s", |b| {
        b.iter(|| simulate(std::hint::black_box(&sc)).unwrap())
    });
}

fn bench_masp(c: &mut Criterion) {
    let u = named("half_square").unwrap();
    let g = named("square_plus_quartic").unwrap();
    c.bench_function("masp_quartic_gain", |b| {
        b.iter(|| masp(std::hint::black_box(&u), &g, 1.0).unwrap())
    });
}

criterion_group!(benches, bench_rk4_step, bench_short_simulation, bench_masp);
criterion_main!(benches);
