//! Acceptance suite: the ten end-to-end criteria the laboratory must meet,
//! one test (and one printed PASS line) each.

use std::collections::BTreeMap;
use std::time::Instant;

use samplab::{
    analysis, build_scenario, continuous_oracle, masp, named, simulate, Error, Scenario,
    SimResult, TriggerLaw,
};

fn run(id: &str, overrides: &[(&str, f64)]) -> (Scenario, SimResult) {
    let ov: BTreeMap<String, f64> = overrides
        .iter()
        .map(|(k, v)| (k.to_string(), *v))
        .collect();
    let sc = build_scenario(id, &ov).expect("scenario builds");
    let res = simulate(&sc).expect("simulation completes");
    (sc, res)
}

fn pass(n: u32, what: &str) {
    println!("ACCEPTANCE {n:02} {what}: PASS");
}

#[test]
fn acceptance_01_adaptive_scalar_reproduction() {
    let t0 = Instant::now();
    let (sc, res) = run("example1", &[]);
    let last = res.trace.rows.last().unwrap();
    let x_final = last.w[0].abs();
    let theta_err = (last.w[1] - 0.1534).abs();
    assert!(x_final < 1e-3, "final |x| = {x_final:e}");
    assert!(theta_err < 0.02, "final parameter error = {theta_err:e}");
    assert!(!res.events.is_empty());
    let min_interval = res
        .events
        .iter()
        .map(|e| e.interval)
        .fold(f64::INFINITY, f64::min);
    assert!(min_interval > 1e-6, "min interval {min_interval:e}");
    let elapsed = t0.elapsed().as_secs_f64();
    assert!(elapsed < 30.0, "took {elapsed:.1} s");
    let _ = sc;
    pass(1, "adaptive scalar reference converges with the estimate on target");
}

#[test]
fn acceptance_02_dynamic_gain_reproduction() {
    let t0 = Instant::now();
    let (sc, res) = run("example2", &[]);
    let last = res.trace.rows.last().unwrap();
    let plant_norm = sc.plant_state_norm(&last.w);
    assert!(plant_norm < 1e-3, "final plant norm = {plant_norm:e}");
    // the gain is driven by lambda x^2 >= 0: nondecreasing and bounded
    let mut prev = f64::NEG_INFINITY;
    let mut max_gain = f64::NEG_INFINITY;
    for r in &res.trace.rows {
        let th = r.w[2];
        assert!(th >= prev - 1e-12, "gain decreased at t = {}", r.t);
        prev = th;
        max_gain = max_gain.max(th);
    }
    assert!(max_gain < 50.0, "gain unbounded-looking: {max_gain}");
    let min_interval = res
        .events
        .iter()
        .map(|e| e.interval)
        .fold(f64::INFINITY, f64::min);
    assert!(min_interval > 1e-6, "min interval {min_interval:e}");
    let elapsed = t0.elapsed().as_secs_f64();
    assert!(elapsed < 30.0, "took {elapsed:.1} s");
    pass(2, "dynamic-gain reference converges with monotone bounded gain");
}

#[test]
fn acceptance_03_lyapunov_decrease() {
    let (sc, res) = run("example1", &[]);
    let report = analysis::run_checks(&sc, &res, &["lyapunov".to_string()]).unwrap();
    let rec = &report.checks[0];
    assert!(rec.pass, "lyapunov check failed: worst {}", rec.worst_margin);
    // the certificate must drop strictly across every event with nonzero
    // sampling error (the reset removes the quadratic error term)
    let v = sc.certificates.v_bar.as_ref().unwrap();
    let zeros = vec![0.0; sc.controller.n_u];
    let mut checked = 0usize;
    for e in &res.events {
        let row = res
            .trace
            .rows
            .iter()
            .find(|r| (r.t - e.t_k).abs() < 1e-15)
            .expect("event row recorded");
        if samplab::systems::norm(&row.varpi) > 0.0 {
            let v_pre = v(&row.w, &row.varpi);
            let v_post = v(&row.w, &zeros);
            assert!(v_post < v_pre, "no drop across event at t = {}", e.t_k);
            checked += 1;
        }
    }
    assert!(checked > 100, "only {checked} events had nonzero error");
    pass(3, "certificate nonincreasing along the trace and drops at events");
}

#[test]
fn acceptance_04_bibs_window_inequality() {
    let (sc, res) = run("robust", &[]);
    let report = analysis::run_checks(&sc, &res, &["bibs".to_string()]).unwrap();
    let rec = &report.checks[0];
    assert!(
        rec.pass,
        "window inequality violated by {} at {}",
        rec.worst_margin, rec.location
    );
    pass(4, "per-window error-vs-state inequality holds on the robust run");
}

#[test]
fn acceptance_05_asymptotic_interval() {
    let (_sc, res) = run("scalar", &[]);
    let stats = analysis::interevent_stats(&res.events, Some(0.125));
    let tail_n = (stats.count / 5).max(10);
    assert!(
        tail_n >= 50,
        "only {tail_n} events in the tail (of {})",
        stats.count
    );
    let tm = stats.tail_mean.unwrap();
    assert!(
        (tm - 0.125).abs() / 0.125 < 0.05,
        "tail mean {tm} vs reference 0.125"
    );
    assert_eq!(stats.reference_pass, Some(true));
    pass(5, "tail-mean inter-event interval matches the half-ratio limit");
}

#[test]
fn acceptance_06_masp_and_shadow_margin() {
    let u = named("half_square").unwrap();
    let gamma = named("square_plus_quartic").unwrap();
    let m = masp(&u, &gamma, 1.0).unwrap();
    assert!(
        (m.period_t - 0.125).abs() < 1e-6,
        "period {} vs analytic 0.125",
        m.period_t
    );
    // run the matching plant periodically at that period; the event law's
    // margin, co-evaluated without firing, must stay strictly negative on
    // every window interior, and the sampling error inside the probe radius
    let mut sc = samplab::scalar_reference_scenario().unwrap();
    sc.trigger = samplab::periodic_from_masp(&m);
    sc.shadow = Some(TriggerLaw::EventGain {
        gamma,
        u_radial: u,
    });
    sc.sim.t_end = 10.0;
    let res = simulate(&sc).unwrap();
    assert!(res.events.len() > 50);
    let report = analysis::run_checks(&sc, &res, &["shadow".to_string()]).unwrap();
    let rec = &report.checks[0];
    assert!(
        rec.pass,
        "shadow margin reached {} at {}",
        rec.worst_margin, rec.location
    );
    for r in &res.trace.rows {
        assert!(
            samplab::systems::norm(&r.varpi) <= m.r0,
            "sampling error left the probe radius at t = {}",
            r.t
        );
    }
    pass(6, "computed period is the analytic one and satisfies its per-window condition");
}

#[test]
fn acceptance_07_disturbance_ultimate_bounds() {
    let mut bounds = Vec::new();
    for d_bar in [0.1, 0.01] {
        let (sc, res) = run("example1_disturbed", &[("d_bar", d_bar)]);
        let ub = analysis::ultimate_bound(&res.trace, 0.2, &|w| sc.plant_state_norm(w)).unwrap();
        assert!(ub.is_finite() && ub > 0.0);
        // no Zeno abort: simulate returned Ok, min interval positive
        let min_interval = res
            .events
            .iter()
            .map(|e| e.interval)
            .fold(f64::INFINITY, f64::min);
        assert!(min_interval > 1e-6);
        bounds.push(ub);
    }
    assert!(
        bounds[1] <= bounds[0],
        "ultimate bound grew as the disturbance shrank: {bounds:?}"
    );
    pass(7, "disturbed runs stay ultimately bounded, monotonically in the bound");
}

#[test]
fn acceptance_08_numerical_integrity() {
    // Richardson: fourth-order convergence of the integrator on a smooth
    // (event-free) closed-loop flow
    let mut finals = Vec::new();
    for h in [0.05, 0.025, 0.0125] {
        let mut sc = samplab::example1_scenario(1.0, 1.0, 0.0, 0.1534).unwrap();
        sc.sim.t_end = 1.0;
        sc.sim.h = h;
        sc.sim.stop_epsilon = 0.0;
        let trace = continuous_oracle(&sc).unwrap();
        finals.push(trace.rows.last().unwrap().w.clone());
    }
    let diff = |a: &[f64], b: &[f64]| {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    };
    let d1 = diff(&finals[0], &finals[1]);
    let d2 = diff(&finals[1], &finals[2]);
    let ratio = d1 / d2;
    assert!(
        (12.0..=20.0).contains(&ratio),
        "convergence ratio {ratio} outside [12, 20] (d1 = {d1:e}, d2 = {d2:e})"
    );
    // event location: bracket tolerance and margin at fire
    let (sc, res) = run("scalar", &[("t_end", 5.0)]);
    assert_eq!(sc.sim.event_time_tol, 1e-9);
    for e in &res.events {
        assert!(
            e.margin_at_fire.abs() <= sc.sim.margin_tol,
            "margin {} at event {}",
            e.margin_at_fire,
            e.k
        );
    }
    let (sc1, res1) = run("example1", &[("t_end", 5.0)]);
    for e in &res1.events {
        assert!(e.margin_at_fire.abs() <= sc1.sim.margin_tol);
    }
    pass(8, "fourth-order step convergence and tight event location");
}

#[test]
fn acceptance_09_degenerate_sampling_matches_oracle() {
    // resampling every integrator step: the hold time goes to zero and the
    // sampled loop must match the continuous-feedback baseline
    let mut sc = samplab::example1_scenario(1.0, 1.0, 0.0, 0.1534).unwrap();
    sc.sim.stop_epsilon = 0.0;
    let oracle = continuous_oracle(&sc).unwrap();
    sc.trigger = TriggerLaw::Periodic { period: sc.sim.h };
    let res = simulate(&sc).unwrap();
    let a = res.trace.rows.last().unwrap();
    let b = oracle.rows.last().unwrap();
    let d: f64 = a
        .w
        .iter()
        .zip(&b.w)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt();
    assert!(d < 1e-4, "final-state gap {d:e}");
    pass(9, "per-step resampling reproduces the continuous baseline");
}

#[test]
fn acceptance_10_negative_controls() {
    // corrupted traces must fail each certificate check
    let (sc, res) = run("scalar", &[("t_end", 2.0)]);
    let v = |w: &[f64], vp: &[f64]| 0.5 * w[0] * w[0] + 0.5 * vp[0] * vp[0];
    let alpha = samplab::ComparisonFunction::power("a", 1.0, 2.0);
    let sigma = samplab::ComparisonFunction::power("s", 1.0, 2.0);
    let u = named("half_square").unwrap();
    let norm_fn = |w: &[f64]| sc.plant_state_norm(w);

    let mid = res.trace.rows.len() / 2;
    let mut bumped = res.trace.clone();
    bumped.rows[mid].w[0] += 1.0;
    let rec = analysis::check_lyapunov_decrease(&bumped, &res.events, &v, 1e-9);
    assert!(!rec.pass, "corrupted trace passed the decrease check");

    let mut spiked = res.trace.clone();
    spiked.rows[mid].varpi[0] = 10.0;
    let rec = analysis::check_bibs(&spiked, &res.events, &alpha, &sigma, &norm_fn);
    assert!(!rec.pass, "spiked trace passed the window inequality");
    let rec = analysis::check_u_derivative_bound(
        &spiked,
        &res.events,
        &u,
        &alpha,
        &sigma,
        &norm_fn,
        sc.sim.h,
    );
    assert!(!rec.pass, "spiked trace passed the derivative bound");

    // a linear gain has no positive sampling period
    let g = named("linear").unwrap();
    assert!(matches!(
        masp(&named("half_square").unwrap(), &g, 1.0),
        Err(Error::NoPositiveMasp)
    ));
    pass(10, "corrupted fixtures fail their checks; linear gain has no period");
}
