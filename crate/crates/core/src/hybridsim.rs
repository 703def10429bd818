//! Impulsive closed-loop integration: fixed-step fourth-order Runge-Kutta
//! flow between sampling events, bisection event location against the
//! trigger margin, and the hold/reset impulse at each event. Produces a
//! dense trace plus an event log.
//!
//! The sampling error is always computed algebraically as
//! varpi = u_held - kappa(y(t)) — it is never integrated, so the post-event
//! reset varpi = 0 is bit-exact.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::kfun::ComparisonFunction;
use crate::systems::{norm, Scenario};
use crate::triggers::{TriggerLaw, WindowAccumulators};

/// Instantaneous state of the hybrid closed loop.
#[derive(Debug, Clone)]
pub struct HybridState {
    pub t: f64,
    /// Continuous state [x; z; theta_hat].
    pub w: Vec<f64>,
    /// Control held since the last sampling event.
    pub u_held: Vec<f64>,
    pub last_event_time: f64,
}

/// One dense-output row, recorded at every accepted integrator step and at
/// each located event time (pre-impulse values).
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub t: f64,
    pub w: Vec<f64>,
    pub u: Vec<f64>,
    pub varpi: Vec<f64>,
    /// Active trigger margin at this row.
    pub margin: f64,
    /// Margin of the co-evaluated (non-firing) law, when one is configured.
    pub shadow_margin: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub rows: Vec<TraceRow>,
    pub n_w: usize,
    pub n_u: usize,
    pub has_shadow: bool,
}

/// One entry of the event log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventRecord {
    pub k: usize,
    pub t_k: f64,
    /// Time since the previous sampling instant (t0 for the first event).
    pub interval: f64,
    pub margin_at_fire: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// Reached T_end.
    Horizon,
    /// State norm fell below stop_epsilon.
    Converged,
}

#[derive(Debug, Clone)]
pub struct SimResult {
    pub trace: Trace,
    pub events: Vec<EventRecord>,
    pub termination: Termination,
}

/// One classical fourth-order Runge-Kutta step of the full continuous
/// dynamics (plant plus estimator) with the input frozen at `u_held`.
/// Accumulators are deliberately not touched here; the caller owns them.
pub fn step(state: &HybridState, scenario: &Scenario, h: f64) -> Result<HybridState> {
    debug_assert!(h > 0.0);
    let (t, w, u) = (state.t, &state.w, &state.u_held);
    let k1 = scenario.deriv(t, w, u)?;
    let w2: Vec<f64> = w.iter().zip(&k1).map(|(a, k)| a + 0.5 * h * k).collect();
    let k2 = scenario.deriv(t + 0.5 * h, &w2, u)?;
    let w3: Vec<f64> = w.iter().zip(&k2).map(|(a, k)| a + 0.5 * h * k).collect();
    let k3 = scenario.deriv(t + 0.5 * h, &w3, u)?;
    let w4: Vec<f64> = w.iter().zip(&k3).map(|(a, k)| a + h * k).collect();
    let k4 = scenario.deriv(t + h, &w4, u)?;
    let w_next: Vec<f64> = w
        .iter()
        .enumerate()
        .map(|(i, a)| a + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect();
    if w_next.iter().any(|v| !v.is_finite()) {
        return Err(Error::DynamicsBlowUp { t: t + h });
    }
    Ok(HybridState {
        t: t + h,
        w: w_next,
        u_held: state.u_held.clone(),
        last_event_time: state.last_event_time,
    })
}

/// The radial error measure fed into the max_U accumulator: the active
/// law's own U when it has one, else the shadow law's, else the bundled
/// certificate, else the default s^2/2.
fn u_measure(scenario: &Scenario) -> Option<ComparisonFunction> {
    scenario
        .trigger
        .u_radial()
        .or_else(|| scenario.shadow.as_ref().and_then(|s| s.u_radial()))
        .or(scenario.certificates.u_fun.as_ref())
        .cloned()
}

/// Feeds one trajectory point into the window accumulators.
fn observe(
    acc: &mut WindowAccumulators,
    scenario: &Scenario,
    u_fun: Option<&ComparisonFunction>,
    w: &[f64],
    varpi: &[f64],
) {
    let vp_norm = norm(varpi);
    let u_of = u_fun.map_or(0.0, |f| f.eval(vp_norm));
    let weighted = match &scenario.trigger {
        TriggerLaw::Weighted { gamma_bar, .. } => gamma_bar(w, varpi) * vp_norm * vp_norm,
        _ => 0.0,
    };
    acc.observe(vp_norm, u_of, weighted);
}

/// Bisects a firing bracket down to the configured time tolerance.
///
/// `base` is the hybrid state at the step start (margin not yet firing
/// there); `h_full` the step over which the trigger began to fire. Each
/// probe re-integrates the substep from `base` and advances a copy of the
/// step-start accumulators. Returns (t*, state at t*, accumulators at t*).
pub fn locate_event(
    base: &HybridState,
    h_full: f64,
    acc_start: &WindowAccumulators,
    scenario: &Scenario,
    u_fun: Option<&ComparisonFunction>,
) -> Result<(HybridState, WindowAccumulators)> {
    let t_k = base.last_event_time;
    if scenario
        .trigger
        .fires(base.t, t_k, acc_start, scenario.sim.guard_epsilon)
    {
        return Err(Error::MissedCrossing { t: base.t });
    }
    let probe = |dt: f64| -> Result<(HybridState, WindowAccumulators)> {
        let st = step(base, scenario, dt)?;
        let mut acc = *acc_start;
        let varpi = scenario.varpi(&st.w, &st.u_held);
        observe(&mut acc, scenario, u_fun, &st.w, &varpi);
        Ok((st, acc))
    };
    let mut lo = 0.0f64;
    let mut hi = h_full;
    while hi - lo > scenario.sim.event_time_tol {
        let mid = 0.5 * (lo + hi);
        let (st, acc) = probe(mid)?;
        if scenario
            .trigger
            .fires(st.t, t_k, &acc, scenario.sim.guard_epsilon)
        {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    probe(hi)
}

/// Applies the sampling impulse at the current time: the held input becomes
/// kappa of the current output, so the sampling error resets to exactly
/// zero; the window accumulators restart.
pub fn fire_event(state: &HybridState, scenario: &Scenario, acc: &mut WindowAccumulators) -> HybridState {
    let u_new = scenario.kappa_now(&state.w);
    acc.reset();
    HybridState {
        t: state.t,
        w: state.w.clone(),
        u_held: u_new,
        last_event_time: state.t,
    }
}

/// Runs the closed loop from t0 until T_end or convergence, recording the
/// dense trace and event log. Deterministic: fixed step, no randomness.
pub fn simulate(scenario: &Scenario) -> Result<SimResult> {
    scenario.validate()?;
    let sim = &scenario.sim;
    let u_fun = u_measure(scenario);
    let n_u = scenario.controller.n_u;

    let mut state = HybridState {
        t: sim.t0,
        w: sim.w0.clone(),
        u_held: vec![0.0; n_u],
        last_event_time: sim.t0,
    };
    // initial sample at t0 (not logged as an event: intervals start there)
    state.u_held = scenario.kappa_now(&state.w);

    let mut acc = WindowAccumulators::default();
    let mut events: Vec<EventRecord> = Vec::new();
    let mut min_interval = f64::INFINITY;
    let mut rows: Vec<TraceRow> = Vec::new();

    let push_row = |rows: &mut Vec<TraceRow>,
                    scenario: &Scenario,
                    st: &HybridState,
                    acc: &WindowAccumulators,
                    margin: f64| {
        let varpi = scenario.varpi(&st.w, &st.u_held);
        let shadow_margin = scenario
            .shadow
            .as_ref()
            .map(|law| law.margin(st.t, st.last_event_time, acc));
        rows.push(TraceRow {
            t: st.t,
            w: st.w.clone(),
            u: st.u_held.clone(),
            varpi,
            margin,
            shadow_margin,
        });
    };

    push_row(
        &mut rows,
        scenario,
        &state,
        &acc,
        scenario.trigger.margin(state.t, state.last_event_time, &acc),
    );

    let termination = loop {
        if state.t >= sim.t_end - 1e-12 {
            break Termination::Horizon;
        }
        if sim.stop_epsilon > 0.0 && norm(&state.w) < sim.stop_epsilon {
            break Termination::Converged;
        }

        // step size: clamp to the horizon, and for the periodic law land
        // exactly on the next clock instant
        let mut h_step = sim.h.min(sim.t_end - state.t);
        let mut periodic_due = false;
        if let TriggerLaw::Periodic { period } = &scenario.trigger {
            let due = state.last_event_time + period;
            if due - state.t <= h_step + 1e-15 {
                h_step = due - state.t;
                periodic_due = due <= sim.t_end + 1e-12;
            }
        }
        if h_step <= 0.0 {
            break Termination::Horizon;
        }

        let acc_start = acc;
        let mut next = step(&state, scenario, h_step)?;
        if periodic_due {
            // land on the clock instant exactly, not on a float sum
            next.t = state.last_event_time
                + match &scenario.trigger {
                    TriggerLaw::Periodic { period } => *period,
                    _ => unreachable!(),
                };
        }
        let varpi_next = scenario.varpi(&next.w, &next.u_held);
        observe(&mut acc, scenario, u_fun.as_ref(), &next.w, &varpi_next);
        // the clock instant fires by construction; float round-off in
        // (t_k + T) - t_k must not be allowed to miss it
        let fires = periodic_due
            || scenario
                .trigger
                .fires(next.t, state.last_event_time, &acc, sim.guard_epsilon);

        if !fires {
            let g = scenario.trigger.margin(next.t, state.last_event_time, &acc);
            state = next;
            push_row(&mut rows, scenario, &state, &acc, g);
            continue;
        }

        // fire: for the periodic law the clock instant is exact; otherwise
        // refine the crossing inside the step by bisection
        let (fire_state, fire_acc, margin_at_fire, interval) =
            if scenario.trigger.is_periodic() || periodic_due {
                let period = match &scenario.trigger {
                    TriggerLaw::Periodic { period } => *period,
                    _ => unreachable!(),
                };
                (next, acc, 0.0, period)
            } else {
                let (st, a) = locate_event(&state, h_step, &acc_start, scenario, u_fun.as_ref())?;
                let g = scenario.trigger.margin(st.t, state.last_event_time, &a);
                let interval = st.t - state.last_event_time;
                (st, a, g, interval)
            };

        acc = fire_acc;
        push_row(&mut rows, scenario, &fire_state, &acc, margin_at_fire);

        min_interval = min_interval.min(interval);
        events.push(EventRecord {
            k: events.len() + 1,
            t_k: fire_state.t,
            interval,
            margin_at_fire,
        });
        if events.len() > sim.max_events {
            return Err(Error::ZenoSuspicion {
                events: events.len(),
                t: fire_state.t,
                min_interval,
            });
        }
        state = fire_event(&fire_state, scenario, &mut acc);
    };

    Ok(SimResult {
        trace: Trace {
            rows,
            n_w: scenario.n_w(),
            n_u,
            has_shadow: scenario.shadow.is_some(),
        },
        events,
        termination,
    })
}

fn fmt_f(v: f64) -> String {
    format!("{v:.16e}")
}

impl Trace {
    /// Writes the trace as CSV: t, w0.., u0.., varpi0.., margin
    /// [, shadow_margin], floats with 17 significant digits.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        let mut header = vec!["t".to_string()];
        header.extend((0..self.n_w).map(|i| format!("w{i}")));
        header.extend((0..self.n_u).map(|i| format!("u{i}")));
        header.extend((0..self.n_u).map(|i| format!("varpi{i}")));
        header.push("margin".into());
        if self.has_shadow {
            header.push("shadow_margin".into());
        }
        writeln!(out, "{}", header.join(","))?;
        for r in &self.rows {
            let mut cells = vec![fmt_f(r.t)];
            cells.extend(r.w.iter().map(|&v| fmt_f(v)));
            cells.extend(r.u.iter().map(|&v| fmt_f(v)));
            cells.extend(r.varpi.iter().map(|&v| fmt_f(v)));
            cells.push(fmt_f(r.margin));
            if self.has_shadow {
                cells.push(fmt_f(r.shadow_margin.unwrap_or(f64::NAN)));
            }
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }

    /// Reads a trace back from its CSV form, inferring dimensions from the
    /// header.
    pub fn read_csv<R: BufRead>(input: R) -> Result<Trace> {
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty trace file".into()))??;
        let cols: Vec<&str> = header.trim().split(',').collect();
        let n_w = cols.iter().filter(|c| c.starts_with('w')).count();
        let n_u = cols
            .iter()
            .filter(|c| c.starts_with('u') && !c.starts_with("varpi"))
            .count();
        let has_shadow = cols.last() == Some(&"shadow_margin");
        let expected = 1 + n_w + 2 * n_u + 1 + usize::from(has_shadow);
        if cols.len() != expected || cols.first() != Some(&"t") {
            return Err(Error::Parse(format!("unrecognized trace header: {header}")));
        }
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let vals: Vec<f64> = line
                .trim()
                .split(',')
                .map(|c| {
                    c.parse::<f64>()
                        .map_err(|e| Error::Parse(format!("trace row {}: {e}", i + 2)))
                })
                .collect::<Result<_>>()?;
            if vals.len() != expected {
                return Err(Error::Parse(format!(
                    "trace row {} has {} cells, expected {expected}",
                    i + 2,
                    vals.len()
                )));
            }
            let mut it = vals.into_iter();
            let t = it.next().unwrap();
            let w: Vec<f64> = (&mut it).take(n_w).collect();
            let u: Vec<f64> = (&mut it).take(n_u).collect();
            let varpi: Vec<f64> = (&mut it).take(n_u).collect();
            let margin = it.next().unwrap();
            let shadow_margin = if has_shadow { it.next() } else { None };
            rows.push(TraceRow {
                t,
                w,
                u,
                varpi,
                margin,
                shadow_margin,
            });
        }
        Ok(Trace {
            rows,
            n_w,
            n_u,
            has_shadow,
        })
    }
}

/// Writes the event log as CSV: k, t_k, interval, margin.
pub fn write_events_csv<W: Write>(events: &[EventRecord], out: &mut W) -> Result<()> {
    writeln!(out, "k,t_k,interval,margin")?;
    for e in events {
        writeln!(
            out,
            "{},{},{},{}",
            e.k,
            fmt_f(e.t_k),
            fmt_f(e.interval),
            fmt_f(e.margin_at_fire)
        )?;
    }
    Ok(())
}

/// Reads an event log back from CSV.
pub fn read_events_csv<R: BufRead>(input: R) -> Result<Vec<EventRecord>> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty event file".into()))??;
    if header.trim() != "k,t_k,interval,margin" {
        return Err(Error::Parse(format!("unrecognized event header: {header}")));
    }
    let mut events = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.trim().split(',').collect();
        if cells.len() != 4 {
            return Err(Error::Parse(format!("event row {} malformed", i + 2)));
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| Error::Parse(format!("event row {}: {e}", i + 2)))
        };
        events.push(EventRecord {
            k: cells[0]
                .parse()
                .map_err(|e| Error::Parse(format!("event row {}: {e}", i + 2)))?,
            t_k: parse(cells[1])?,
            interval: parse(cells[2])?,
            margin_at_fire: parse(cells[3])?,
        });
    }
    Ok(events)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{
        build_scenario, example1_scenario, scalar_reference_scenario, Controller, Plant,
        SimParams,
    };
    use std::collections::BTreeMap;
    use std::sync::Arc;

    fn autonomous_scenario(
        dynamics: impl Fn(f64, &[f64], &[f64]) -> Vec<f64> + Send + Sync + 'static,
        w0: Vec<f64>,
    ) -> Scenario {
        // zero feedback so the plant runs open loop
        let plant = Plant {
            n_x: w0.len(),
            n_z: 0,
            dynamics: Arc::new(move |t, x, _z, u, _d| (dynamics(t, x, u), vec![])),
        };
        let controller = Controller {
            n_u: 1,
            n_est: 0,
            kappa: Arc::new(|_y, _th| vec![0.0]),
            estimator: None,
        };
        Scenario {
            name: "test".into(),
            plant,
            controller,
            disturbance: None,
            trigger: TriggerLaw::Periodic { period: 1e9 },
            shadow: None,
            certificates: Default::default(),
            sim: SimParams::new(1.0, 1e-3, w0),
        }
    }

    #[test]
    fn step_zero_field() {
        let sc = autonomous_scenario(|_, x, _| vec![0.0; x.len()], vec![2.5]);
        let st = HybridState {
            t: 0.3,
            w: vec![2.5],
            u_held: vec![0.0],
            last_event_time: 0.0,
        };
        let next = step(&st, &sc, 0.1).unwrap();
        assert_eq!(next.w, vec![2.5]);
        assert!((next.t - 0.4).abs() < 1e-15);
    }

    #[test]
    fn step_exponential_decay() {
        let sc = autonomous_scenario(|_, x, _| vec![-x[0]], vec![1.0]);
        let st = HybridState {
            t: 0.0,
            w: vec![1.0],
            u_held: vec![0.0],
            last_event_time: 0.0,
        };
        let next = step(&st, &sc, 0.1).unwrap();
        assert!((next.w[0] - (-0.1f64).exp()).abs() < 1e-7);
    }

    #[test]
    fn step_constant_input_exact() {
        let sc = autonomous_scenario(|_, _x, u| vec![u[0]], vec![0.0]);
        let st = HybridState {
            t: 0.0,
            w: vec![0.0],
            u_held: vec![2.0],
            last_event_time: 0.0,
        };
        let next = step(&st, &sc, 0.5).unwrap();
        assert_eq!(next.w[0], 1.0);
    }

    #[test]
    fn step_detects_blow_up() {
        let sc = autonomous_scenario(|_, x, _| vec![x[0] / 0.0], vec![1.0]);
        let st = HybridState {
            t: 0.0,
            w: vec![1.0],
            u_held: vec![0.0],
            last_event_time: 0.0,
        };
        assert!(matches!(
            step(&st, &sc, 0.1),
            Err(Error::DynamicsBlowUp { .. })
        ));
    }

    #[test]
    fn first_scalar_event_at_exactly_one_eighth() {
        // integrator plant, gamma = 2 s^2, U = s^2/2: the margin root is
        // at dt = 1/8 for any window amplitude
        let mut sc = scalar_reference_scenario().unwrap();
        sc.sim.t_end = 1.0;
        let res = simulate(&sc).unwrap();
        assert!(!res.events.is_empty());
        let e = &res.events[0];
        assert!(
            (e.t_k - 0.125).abs() <= 2e-9,
            "first event at {} instead of 0.125",
            e.t_k
        );
        assert!(e.margin_at_fire.abs() <= sc.sim.margin_tol);
    }

    #[test]
    fn fire_event_resets_error_exactly() {
        let sc = example1_scenario(1.0, 1.0, 0.0, 0.1534).unwrap();
        let st = HybridState {
            t: 1.0,
            w: vec![0.7, 0.2],
            u_held: vec![0.9],
            last_event_time: 0.0,
        };
        let mut acc = WindowAccumulators::default();
        acc.observe(0.5, 0.125, 1.0);
        let post = fire_event(&st, &sc, &mut acc);
        let varpi = sc.varpi(&post.w, &post.u_held);
        assert_eq!(varpi[0], 0.0);
        assert_eq!(acc.sup_varpi, 0.0);
        assert_eq!(post.last_event_time, 1.0);
    }

    #[test]
    fn equilibrium_start_no_events() {
        // x0 = 0 with perfect parameter knowledge: varpi stays 0, guard
        // never satisfied, state stays at the origin
        let mut sc = example1_scenario(1.0, 0.0, 0.1534, 0.1534).unwrap();
        sc.sim.t_end = 2.0;
        sc.sim.stop_epsilon = 0.0;
        let res = simulate(&sc).unwrap();
        assert!(res.events.is_empty());
        for r in &res.trace.rows {
            assert!(r.w[0].abs() < 1e-300);
        }
    }

    #[test]
    fn periodic_intervals_exact() {
        let mut sc = scalar_reference_scenario().unwrap();
        sc.trigger = TriggerLaw::Periodic { period: 0.01 };
        sc.sim.t_end = 0.5;
        let res = simulate(&sc).unwrap();
        assert!(res.events.len() >= 45);
        for e in &res.events {
            assert_eq!(e.interval, 0.01);
            assert_eq!(e.margin_at_fire, 0.0);
        }
    }

    #[test]
    fn determinism() {
        let mut ov = BTreeMap::new();
        ov.insert("t_end".to_string(), 2.0);
        let sc = build_scenario("example1", &ov).unwrap();
        let a = simulate(&sc).unwrap();
        let b = simulate(&sc).unwrap();
        assert_eq!(a.trace.rows, b.trace.rows);
        assert_eq!(a.events, b.events);
    }

    #[test]
    fn trace_time_strictly_increasing_and_u_piecewise_constant() {
        let mut sc = scalar_reference_scenario().unwrap();
        sc.sim.t_end = 2.0;
        let res = simulate(&sc).unwrap();
        let event_times: Vec<f64> = res.events.iter().map(|e| e.t_k).collect();
        let mut prev_t = f64::NEG_INFINITY;
        let mut prev_u: Option<f64> = None;
        for r in &res.trace.rows {
            assert!(r.t > prev_t, "non-increasing t at {}", r.t);
            prev_t = r.t;
            if let Some(pu) = prev_u {
                let crossed = event_times
                    .iter()
                    .any(|&tk| tk >= prev_t - 2.0 * sc.sim.h && tk < r.t + 1e-15);
                if !crossed {
                    assert_eq!(r.u[0], pu, "u changed off-event at t = {}", r.t);
                }
            }
            prev_u = Some(r.u[0]);
        }
    }

    #[test]
    fn zeno_guard_trips() {
        let mut sc = scalar_reference_scenario().unwrap();
        sc.sim.max_events = 5;
        sc.sim.t_end = 5.0;
        assert!(matches!(
            simulate(&sc),
            Err(Error::ZenoSuspicion { events: 6, .. })
        ));
    }

    #[test]
    fn trace_csv_roundtrip() {
        let mut sc = scalar_reference_scenario().unwrap();
        sc.sim.t_end = 0.5;
        let res = simulate(&sc).unwrap();
        let mut buf = Vec::new();
        res.trace.write_csv(&mut buf).unwrap();
        let back = Trace::read_csv(&buf[..]).unwrap();
        assert_eq!(back, res.trace);
    }

    #[test]
    fn events_csv_roundtrip() {
        let events = vec![
            EventRecord {
                k: 1,
                t_k: 0.125,
                interval: 0.125,
                margin_at_fire: 1e-8,
            },
            EventRecord {
                k: 2,
                t_k: 0.25,
                interval: 0.125,
                margin_at_fire: -2e-9,
            },
        ];
        let mut buf = Vec::new();
        write_events_csv(&events, &mut buf).unwrap();
        let back = read_events_csv(&buf[..]).unwrap();
        assert_eq!(back, events);
    }

    #[test]
    fn missed_crossing_rejected() {
        let sc = scalar_reference_scenario().unwrap();
        let st = HybridState {
            t: 1.0,
            w: vec![1.0],
            u_held: vec![-1.0],
            last_event_time: 0.0,
        };
        // accumulators that already fire at the bracket start
        let mut acc = WindowAccumulators::default();
        acc.observe(1.0, 0.5, 0.0);
        assert!(matches!(
            locate_event(&st, 1e-3, &acc, &sc, sc.trigger.u_radial()),
            Err(Error::MissedCrossing { .. })
        ));
    }
}
