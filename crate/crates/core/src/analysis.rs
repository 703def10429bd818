//! Post-hoc certificate checking on recorded traces: Lyapunov decrease,
//! the per-window bounded-input-bounded-state inequality, the derivative
//! bound on the sampling-error measure, inter-event statistics against the
//! asymptotic-interval limit, Zeno diagnostics, ultimate-bound measurement,
//! and a continuous-time (unsampled) oracle run for convergence comparison.
//!
//! Every check is a pure function of (trace, events, certificates):
//! re-running analysis on a stored trace reproduces the report bit-exactly.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hybridsim::{EventRecord, HybridState, SimResult, Trace, TraceRow};
use crate::kfun::{asymptotic_interval, ComparisonFunction};
use crate::systems::{norm, Scenario};
use crate::triggers::TriggerLaw;

/// Outcome of one certificate check.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CheckRecord {
    pub name: String,
    pub pass: bool,
    /// Signed worst slack: positive means the inequality was violated by
    /// this much; pass implies worst_margin <= the check's tolerance.
    pub worst_margin: f64,
    /// Where the worst slack occurred (a time or a window index).
    pub location: String,
}

/// Inter-event interval statistics with the optional asymptotic reference.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct IntereventStats {
    pub count: usize,
    /// Present when count >= 2.
    pub min: Option<f64>,
    pub mean: Option<f64>,
    /// Mean over the last 20% of events (at least 10), when available.
    pub tail_mean: Option<f64>,
    /// The asymptotic half-ratio limit, when the law admits one.
    pub reference: Option<f64>,
    /// Whether tail_mean is within 5% of the reference; None when the tail
    /// is too short or no reference applies (skipped, not failed).
    pub reference_pass: Option<bool>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ConvergenceStats {
    pub final_plant_norm: f64,
    /// ||theta_hat(T_end) - theta_true|| when a true parameter is declared.
    pub final_theta_error: Option<f64>,
    /// Max plant-state norm over the trace tail, for disturbed runs.
    pub ultimate_bound: Option<f64>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct AnalysisReport {
    pub checks: Vec<CheckRecord>,
    pub stats: IntereventStats,
    pub convergence: ConvergenceStats,
    pub termination: crate::hybridsim::Termination,
    pub all_pass: bool,
}

/// Splits trace row indices into inter-sample windows. Each window ends at
/// (and includes) its event row; the final window runs to the end of the
/// trace.
pub fn window_ranges(trace: &Trace, events: &[EventRecord]) -> Vec<std::ops::Range<usize>> {
    let mut ranges = Vec::with_capacity(events.len() + 1);
    let mut start = 0usize;
    let mut idx = 0usize;
    for e in events {
        while idx < trace.rows.len() && trace.rows[idx].t < e.t_k - 1e-15 {
            idx += 1;
        }
        // idx now points at the event row
        if idx < trace.rows.len() {
            ranges.push(start..idx + 1);
            start = idx + 1;
        }
    }
    if start < trace.rows.len() {
        ranges.push(start..trace.rows.len());
    }
    ranges
}

fn is_event_time(t: f64, events: &[EventRecord]) -> bool {
    events.iter().any(|e| (e.t_k - t).abs() < 1e-15)
}

/// Checks the decrease of the certificate V_bar along the trace, within
/// `tol`, in the three forms the closed-loop analysis guarantees:
///
/// 1. V_bar never exceeds its initial value;
/// 2. V_bar drops (weakly) across every event when the error term resets;
/// 3. V_bar decreases across every horizon of 1% of the run: for any two
///    rows separated by at least that dwell, the later value does not
///    exceed the earlier one.
///
/// Strict row-to-row monotonicity is deliberately not required: within a
/// window the held-error term of the certificate can transiently outgrow
/// the state decay, so the pointwise derivative changes sign even on a
/// nominal run. The dwell form is tight (violations of order the window
/// error budget fail it) and catches any corrupted row.
pub fn check_lyapunov_decrease(
    trace: &Trace,
    events: &[EventRecord],
    v_bar: &dyn Fn(&[f64], &[f64]) -> f64,
    tol: f64,
) -> CheckRecord {
    let mut worst = f64::NEG_INFINITY;
    let mut worst_t = f64::NAN;
    let zeros = vec![0.0; trace.n_u];
    let values: Vec<f64> = trace.rows.iter().map(|r| v_bar(&r.w, &r.varpi)).collect();
    let v0 = values.first().copied().unwrap_or(0.0);
    let span = match (trace.rows.first(), trace.rows.last()) {
        (Some(a), Some(b)) => b.t - a.t,
        _ => 0.0,
    };
    let dwell = span / 100.0;
    // prefix-min pointer: smallest value among rows at least `dwell` older
    let mut j = 0usize;
    let mut prefix_min = f64::INFINITY;
    for (i, r) in trace.rows.iter().enumerate() {
        let v = values[i];
        let mut slack = v - v0;
        while trace.rows[j].t <= r.t - dwell && j < i {
            prefix_min = prefix_min.min(values[j]);
            j += 1;
        }
        if prefix_min.is_finite() {
            slack = slack.max(v - prefix_min);
        }
        if is_event_time(r.t, events) {
            // across the event the held input resnaps, dropping the
            // nonnegative error term of the certificate
            let v_post = v_bar(&r.w, &zeros);
            slack = slack.max(v_post - v);
        }
        if slack > worst {
            worst = slack;
            worst_t = r.t;
        }
    }
    if !worst.is_finite() {
        worst = 0.0;
    }
    CheckRecord {
        name: "lyapunov".into(),
        pass: worst <= tol,
        worst_margin: worst,
        location: format!("t={worst_t:.6}"),
    }
}

/// Per-window inequality alpha_w(sup ||varpi||) <= sigma_w(sup ||state||)
/// with additive tolerance 1e-8. `state_norm` maps a trace state vector to
/// the norm the right side is about.
pub fn check_bibs(
    trace: &Trace,
    events: &[EventRecord],
    alpha_w: &ComparisonFunction,
    sigma_w: &ComparisonFunction,
    state_norm: &dyn Fn(&[f64]) -> f64,
) -> CheckRecord {
    let mut worst = f64::NEG_INFINITY;
    let mut worst_window = 0usize;
    for (k, range) in window_ranges(trace, events).into_iter().enumerate() {
        let rows = &trace.rows[range];
        if rows.is_empty() {
            continue;
        }
        let sup_varpi = rows.iter().map(|r| norm(&r.varpi)).fold(0.0, f64::max);
        let sup_state = rows.iter().map(|r| state_norm(&r.w)).fold(0.0, f64::max);
        let slack = alpha_w.eval(sup_varpi) - sigma_w.eval(sup_state);
        if slack > worst {
            worst = slack;
            worst_window = k;
        }
    }
    if !worst.is_finite() {
        worst = 0.0;
    }
    CheckRecord {
        name: "bibs".into(),
        pass: worst <= 1e-8,
        worst_margin: worst,
        location: format!("window={worst_window}"),
    }
}

/// Central-difference bound check on the derivative of U(varpi) along each
/// window interior: dU/dt <= alpha_w(||varpi||) + sigma_w(||state||) +
/// 10 h^2 scale. Rows adjacent to window boundaries are skipped so every
/// stencil sits on the uniform step grid; windows too short for a stencil
/// are counted as skipped.
pub fn check_u_derivative_bound(
    trace: &Trace,
    events: &[EventRecord],
    u_fun: &ComparisonFunction,
    alpha_w: &ComparisonFunction,
    sigma_w: &ComparisonFunction,
    state_norm: &dyn Fn(&[f64]) -> f64,
    h: f64,
) -> CheckRecord {
    let bound_at = |r: &TraceRow| alpha_w.eval(norm(&r.varpi)) + sigma_w.eval(state_norm(&r.w));
    let scale = trace
        .rows
        .iter()
        .map(bound_at)
        .fold(1.0f64, f64::max);
    let tol_fd = 10.0 * h * h * scale;
    let mut worst = f64::NEG_INFINITY;
    let mut worst_t = f64::NAN;
    let mut checked = 0usize;
    let mut skipped = 0usize;
    for range in window_ranges(trace, events) {
        let rows = &trace.rows[range];
        if rows.len() < 4 {
            skipped += 1;
            continue;
        }
        // interior excluding the last gap (the event row is bisected off
        // the uniform grid)
        for i in 1..rows.len() - 2 {
            let (a, b, c) = (&rows[i - 1], &rows[i], &rows[i + 1]);
            let du = (u_fun.eval(norm(&c.varpi)) - u_fun.eval(norm(&a.varpi))) / (c.t - a.t);
            let slack = du - bound_at(b);
            checked += 1;
            if slack > worst {
                worst = slack;
                worst_t = b.t;
            }
        }
    }
    if !worst.is_finite() {
        worst = 0.0;
    }
    CheckRecord {
        name: "udot".into(),
        pass: worst <= tol_fd,
        worst_margin: worst,
        location: format!("t={worst_t:.6} ({checked} points, {skipped} short windows skipped)"),
    }
}

/// Inter-event interval statistics. The tail is the last 20% of events with
/// a floor of 10; below that the asymptotic-reference comparison is skipped
/// rather than failed.
pub fn interevent_stats(events: &[EventRecord], reference: Option<f64>) -> IntereventStats {
    let count = events.len();
    if count < 2 {
        return IntereventStats {
            count,
            min: None,
            mean: None,
            tail_mean: None,
            reference,
            reference_pass: None,
        };
    }
    let intervals: Vec<f64> = events.iter().map(|e| e.interval).collect();
    let min = intervals.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = intervals.iter().sum::<f64>() / count as f64;
    let tail_n = (count / 5).max(10);
    let (tail_mean, reference_pass) = if tail_n <= count {
        let tail = &intervals[count - tail_n..];
        let tm = tail.iter().sum::<f64>() / tail.len() as f64;
        let pass = reference.map(|r| (tm - r).abs() / r < 0.05);
        (Some(tm), pass)
    } else {
        (None, None)
    };
    IntereventStats {
        count,
        min: Some(min),
        mean: Some(mean),
        tail_mean,
        reference,
        reference_pass,
    }
}

/// Max plant-state norm over the last `tail_fraction` of the trace time span.
pub fn ultimate_bound(
    trace: &Trace,
    tail_fraction: f64,
    plant_norm: &dyn Fn(&[f64]) -> f64,
) -> Result<f64> {
    if !(0.0 < tail_fraction && tail_fraction < 1.0) {
        return Err(Error::Domain(format!(
            "tail_fraction must lie in (0,1), got {tail_fraction}"
        )));
    }
    let rows = &trace.rows;
    if rows.is_empty() {
        return Err(Error::Domain("empty trace".into()));
    }
    let t0 = rows[0].t;
    let t1 = rows[rows.len() - 1].t;
    let cut = t1 - tail_fraction * (t1 - t0);
    Ok(rows
        .iter()
        .filter(|r| r.t >= cut)
        .map(|r| plant_norm(&r.w))
        .fold(0.0, f64::max))
}

/// Simulates the same plant and controller with the input recomputed inside
/// every integrator stage — the unsampled continuous-feedback baseline with
/// varpi identically zero.
pub fn continuous_oracle(scenario: &Scenario) -> Result<Trace> {
    scenario.validate()?;
    let sim = &scenario.sim;
    let deriv = |t: f64, w: &[f64]| -> Result<Vec<f64>> {
        let u = scenario.kappa_now(w);
        scenario.deriv(t, w, &u)
    };
    let n_u = scenario.controller.n_u;
    let mut rows = Vec::new();
    let mut t = sim.t0;
    let mut w = sim.w0.clone();
    let push = |rows: &mut Vec<TraceRow>, t: f64, w: &[f64], u: Vec<f64>| {
        rows.push(TraceRow {
            t,
            w: w.to_vec(),
            u,
            varpi: vec![0.0; n_u],
            margin: 0.0,
            shadow_margin: None,
        });
    };
    push(&mut rows, t, &w, scenario.kappa_now(&w));
    while t < sim.t_end - 1e-12 {
        if sim.stop_epsilon > 0.0 && norm(&w) < sim.stop_epsilon {
            break;
        }
        let h = sim.h.min(sim.t_end - t);
        let k1 = deriv(t, &w)?;
        let w2: Vec<f64> = w.iter().zip(&k1).map(|(a, k)| a + 0.5 * h * k).collect();
        let k2 = deriv(t + 0.5 * h, &w2)?;
        let w3: Vec<f64> = w.iter().zip(&k2).map(|(a, k)| a + 0.5 * h * k).collect();
        let k3 = deriv(t + 0.5 * h, &w3)?;
        let w4: Vec<f64> = w.iter().zip(&k3).map(|(a, k)| a + h * k).collect();
        let k4 = deriv(t + h, &w4)?;
        w = w
            .iter()
            .enumerate()
            .map(|(i, a)| a + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
            .collect();
        if w.iter().any(|v| !v.is_finite()) {
            return Err(Error::DynamicsBlowUp { t: t + h });
        }
        t += h;
        push(&mut rows, t, &w, scenario.kappa_now(&w));
    }
    Ok(Trace {
        rows,
        n_w: scenario.n_w(),
        n_u,
        has_shadow: false,
    })
}

/// Check names understood by [`run_checks`].
pub const CHECK_NAMES: &[&str] = &["lyapunov", "bibs", "udot", "zeno", "shadow", "interevent"];

/// Runs the named checks on a simulation result, wiring in the scenario's
/// certificate bundle, and assembles the full report.
pub fn run_checks(scenario: &Scenario, result: &SimResult, checks: &[String]) -> Result<AnalysisReport> {
    let trace = &result.trace;
    let events = &result.events;
    let certs = &scenario.certificates;
    let mut records = Vec::new();
    let missing = |what: &str, check: &str| {
        Error::Config(format!("check `{check}` needs certificate `{what}`"))
    };
    for name in checks {
        let rec = match name.as_str() {
            "lyapunov" => {
                let v = certs.v_bar.as_ref().ok_or_else(|| missing("v_bar", name))?;
                let v0 = {
                    let r0 = trace
                        .rows
                        .first()
                        .ok_or_else(|| Error::Domain("empty trace".into()))?;
                    v(&r0.w, &r0.varpi)
                };
                check_lyapunov_decrease(trace, events, v.as_ref(), 1e-6 * v0.max(1.0))
            }
            "bibs" => {
                let a = certs.alpha_w.as_ref().ok_or_else(|| missing("alpha_w", name))?;
                let s = certs.sigma_w.as_ref().ok_or_else(|| missing("sigma_w", name))?;
                check_bibs(trace, events, a, s, &|w| scenario.bibs_state_norm(w))
            }
            "udot" => {
                let u = certs.u_fun.as_ref().ok_or_else(|| missing("u_fun", name))?;
                let a = certs.alpha_w.as_ref().ok_or_else(|| missing("alpha_w", name))?;
                let s = certs.sigma_w.as_ref().ok_or_else(|| missing("sigma_w", name))?;
                check_u_derivative_bound(
                    trace,
                    events,
                    u,
                    a,
                    s,
                    &|w| scenario.bibs_state_norm(w),
                    scenario.sim.h,
                )
            }
            "zeno" => {
                let floor = 10.0 * scenario.sim.event_time_tol;
                let min = events
                    .iter()
                    .map(|e| e.interval)
                    .fold(f64::INFINITY, f64::min);
                let pass = events.is_empty() || min > floor;
                CheckRecord {
                    name: "zeno".into(),
                    pass,
                    worst_margin: if events.is_empty() { -floor } else { floor - min },
                    location: format!("{} events", events.len()),
                }
            }
            "shadow" => {
                if scenario.shadow.is_none() {
                    return Err(Error::Config(
                        "check `shadow` needs a shadow trigger law".into(),
                    ));
                }
                let mut worst = f64::NEG_INFINITY;
                let mut worst_t = f64::NAN;
                // skip window-start rows (t0 and event times): there the
                // margin is identically zero by construction
                let t_first = trace.rows.first().map(|r| r.t);
                for r in &trace.rows {
                    if Some(r.t) == t_first || is_event_time(r.t, events) {
                        continue;
                    }
                    if let Some(g) = r.shadow_margin {
                        if g > worst {
                            worst = g;
                            worst_t = r.t;
                        }
                    }
                }
                if !worst.is_finite() {
                    worst = 0.0;
                }
                CheckRecord {
                    name: "shadow".into(),
                    pass: worst < 0.0,
                    worst_margin: worst,
                    location: format!("t={worst_t:.6}"),
                }
            }
            "interevent" => {
                let stats = interevent_reference_stats(scenario, events)?;
                CheckRecord {
                    name: "interevent".into(),
                    pass: stats.reference_pass.unwrap_or(true),
                    worst_margin: match (stats.tail_mean, stats.reference) {
                        (Some(tm), Some(r)) => (tm - r).abs() / r - 0.05,
                        _ => 0.0,
                    },
                    location: format!("{} events", stats.count),
                }
            }
            other => {
                return Err(Error::Config(format!(
                    "unknown check `{other}` (known: {})",
                    CHECK_NAMES.join(", ")
                )))
            }
        };
        records.push(rec);
    }

    let stats = interevent_reference_stats(scenario, events)?;
    let last = trace
        .rows
        .last()
        .ok_or_else(|| Error::Domain("empty trace".into()))?;
    let final_theta_error = certs.theta_true.as_ref().map(|theta| {
        let n = scenario.plant.n_x + scenario.plant.n_z;
        let th = &last.w[n..];
        norm(&th.iter().zip(theta).map(|(a, b)| a - b).collect::<Vec<_>>())
    });
    let ub = if scenario.disturbance.is_some() {
        Some(ultimate_bound(trace, 0.2, &|w| scenario.plant_state_norm(w))?)
    } else {
        None
    };
    let all_pass = records.iter().all(|r| r.pass);
    Ok(AnalysisReport {
        checks: records,
        stats,
        convergence: ConvergenceStats {
            final_plant_norm: scenario.plant_state_norm(&last.w),
            final_theta_error,
            ultimate_bound: ub,
        },
        termination: result.termination,
        all_pass,
    })
}

/// Inter-event statistics with the asymptotic reference attached when the
/// active law is the gain-function event trigger with a radial U.
fn interevent_reference_stats(scenario: &Scenario, events: &[EventRecord]) -> Result<IntereventStats> {
    let reference = match &scenario.trigger {
        TriggerLaw::EventGain { gamma, u_radial } => {
            match asymptotic_interval(u_radial, gamma) {
                Ok(a) if !a.zero_limit => Some(a.half_mu),
                _ => None,
            }
        }
        _ => None,
    };
    Ok(interevent_stats(events, reference))
}

/// Convenience for tests: a hybrid state snapshot from a trace row.
pub fn state_from_row(row: &TraceRow, last_event_time: f64) -> HybridState {
    HybridState {
        t: row.t,
        w: row.w.clone(),
        u_held: row.u.clone(),
        last_event_time,
    }
}
