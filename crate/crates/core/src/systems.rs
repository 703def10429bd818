//! Plant, controller and scenario definitions: generic interfaces plus the
//! built-in reference scenarios (an adaptive scalar plant with an unknown
//! parameter, a dynamic-gain two-state plant, a robust static-gain instance
//! of the same plant, and a minimal scalar integrator), together with the
//! certificate functions the analysis module consumes.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kfun::ComparisonFunction;
use crate::triggers::TriggerLaw;

/// Euclidean norm of a slice.
pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

/// Continuous plant dynamics: (t, x, z, u, d) -> (x_dot, z_dot).
///
/// `d` has dimension n_x + n_z; built-in plants add it elementwise to the
/// state derivatives.
pub type DynamicsFn =
    Arc<dyn Fn(f64, &[f64], &[f64], &[f64], &[f64]) -> (Vec<f64>, Vec<f64>) + Send + Sync>;

#[derive(Clone)]
pub struct Plant {
    pub n_x: usize,
    pub n_z: usize,
    pub dynamics: DynamicsFn,
}

impl fmt::Debug for Plant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Plant")
            .field("n_x", &self.n_x)
            .field("n_z", &self.n_z)
            .finish()
    }
}

/// Feedback law kappa(y, theta_hat) -> u.
pub type KappaFn = Arc<dyn Fn(&[f64], &[f64]) -> Vec<f64> + Send + Sync>;
/// Estimator dynamics (y, theta_hat, varpi) -> theta_hat_dot. Integrated
/// continuously alongside the plant; never sampled.
pub type EstimatorFn = Arc<dyn Fn(&[f64], &[f64], &[f64]) -> Vec<f64> + Send + Sync>;

#[derive(Clone)]
pub struct Controller {
    pub n_u: usize,
    pub n_est: usize,
    pub kappa: KappaFn,
    pub estimator: Option<EstimatorFn>,
}

impl fmt::Debug for Controller {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Controller")
            .field("n_u", &self.n_u)
            .field("n_est", &self.n_est)
            .field("has_estimator", &self.estimator.is_some())
            .finish()
    }
}

/// Certificate value V_bar(w, varpi) used by the Lyapunov-decrease check.
pub type VBarFn = Arc<dyn Fn(&[f64], &[f64]) -> f64 + Send + Sync>;

/// Named function bundle the analysis checks draw from. Everything optional:
/// a missing certificate fails only the checks that need it.
#[derive(Clone, Default)]
pub struct Certificates {
    pub v_bar: Option<VBarFn>,
    /// Radial sampling-error measure U(||varpi||).
    pub u_fun: Option<ComparisonFunction>,
    pub alpha_w: Option<ComparisonFunction>,
    pub sigma_w: Option<ComparisonFunction>,
    /// True parameter vector, for theta-tilde evaluation in certificates and
    /// convergence statistics. Never visible to the controller.
    pub theta_true: Option<Vec<f64>>,
}

impl fmt::Debug for Certificates {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Certificates")
            .field("has_v_bar", &self.v_bar.is_some())
            .field("u_fun", &self.u_fun.as_ref().map(|f| f.name().to_string()))
            .field("theta_true", &self.theta_true)
            .finish()
    }
}

/// Fixed-step simulation parameters.
#[derive(Debug, Clone)]
pub struct SimParams {
    pub t0: f64,
    pub t_end: f64,
    pub h: f64,
    /// Stop early when ||w|| falls below this (0 disables).
    pub stop_epsilon: f64,
    /// Initial continuous state [x; z; theta_hat].
    pub w0: Vec<f64>,
    /// Threshold below which the sampling error counts as zero for the
    /// firing guard.
    pub guard_epsilon: f64,
    pub max_events: usize,
    /// Event-location bracket width.
    pub event_time_tol: f64,
    /// Acceptable |margin| at a located event.
    pub margin_tol: f64,
}

impl SimParams {
    pub fn new(t_end: f64, h: f64, w0: Vec<f64>) -> Self {
        Self {
            t0: 0.0,
            t_end,
            h,
            stop_epsilon: 1e-6,
            w0,
            guard_epsilon: 1e-12,
            max_events: 1_000_000,
            event_time_tol: 1e-9,
            margin_tol: 1e-6,
        }
    }
}

#[derive(Clone)]
pub struct Disturbance {
    pub d: Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>,
    pub d_bar: f64,
}

impl fmt::Debug for Disturbance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Disturbance").field("d_bar", &self.d_bar).finish()
    }
}

/// A complete closed-loop experiment: plant, controller, sampling law,
/// certificates and integration parameters.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub plant: Plant,
    pub controller: Controller,
    pub disturbance: Option<Disturbance>,
    pub trigger: TriggerLaw,
    /// Optional second law whose margin is co-evaluated without firing
    /// (used to verify the per-window condition of period-based sampling).
    pub shadow: Option<TriggerLaw>,
    pub certificates: Certificates,
    pub sim: SimParams,
}

impl Scenario {
    /// Total continuous-state dimension: plant x, plant z, estimator.
    pub fn n_w(&self) -> usize {
        self.plant.n_x + self.plant.n_z + self.controller.n_est
    }

    pub fn validate(&self) -> Result<()> {
        if self.sim.w0.len() != self.n_w() {
            return Err(Error::Config(format!(
                "initial state has dimension {}, scenario needs {}",
                self.sim.w0.len(),
                self.n_w()
            )));
        }
        if self.sim.t_end <= self.sim.t0 {
            return Err(Error::Config("T_end must exceed t0".into()));
        }
        if self.sim.h <= 0.0 {
            return Err(Error::Config("step size h must be positive".into()));
        }
        Ok(())
    }

    /// Splits the concatenated state into (x, z, theta_hat).
    pub fn split<'a>(&self, w: &'a [f64]) -> (&'a [f64], &'a [f64], &'a [f64]) {
        let nx = self.plant.n_x;
        let nz = self.plant.n_z;
        (&w[..nx], &w[nx..nx + nz], &w[nx + nz..])
    }

    /// Measured output: identity on the x block for all built-ins.
    pub fn output<'a>(&self, w: &'a [f64]) -> &'a [f64] {
        &w[..self.plant.n_x]
    }

    /// The control the continuous-time law would apply right now.
    pub fn kappa_now(&self, w: &[f64]) -> Vec<f64> {
        let (_, _, th) = self.split(w);
        (self.controller.kappa)(self.output(w), th)
    }

    /// Sampling error: held input minus the current continuous-law input.
    pub fn varpi(&self, w: &[f64], u_held: &[f64]) -> Vec<f64> {
        let k = self.kappa_now(w);
        u_held.iter().zip(&k).map(|(u, k)| u - k).collect()
    }

    /// Full closed-loop vector field with the input frozen at `u_held`.
    pub fn deriv(&self, t: f64, w: &[f64], u_held: &[f64]) -> Result<Vec<f64>> {
        let (x, z, th) = self.split(w);
        let d = match &self.disturbance {
            Some(dist) => (dist.d)(t),
            None => vec![0.0; self.plant.n_x + self.plant.n_z],
        };
        let (x_dot, z_dot) = (self.plant.dynamics)(t, x, z, u_held, &d);
        let mut out = Vec::with_capacity(self.n_w());
        out.extend_from_slice(&x_dot);
        out.extend_from_slice(&z_dot);
        if let Some(est) = &self.controller.estimator {
            let varpi = self.varpi(w, u_held);
            out.extend(est(self.output(w), th, &varpi));
        }
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::DynamicsBlowUp { t });
        }
        Ok(out)
    }

    /// Norm of the plant state (x and z blocks) — the quantity convergence
    /// and ultimate-bound statistics are about.
    pub fn plant_state_norm(&self, w: &[f64]) -> f64 {
        let n = self.plant.n_x + self.plant.n_z;
        norm(&w[..n])
    }

    /// Norm of the closed-loop state used on the right side of the
    /// bounded-input-bounded-state inequality: plant state plus parameter
    /// error when a true parameter is declared, plus the raw estimator state
    /// otherwise.
    pub fn bibs_state_norm(&self, w: &[f64]) -> f64 {
        let n = self.plant.n_x + self.plant.n_z;
        let mut acc: f64 = w[..n].iter().map(|a| a * a).sum();
        let th = &w[n..];
        match &self.certificates.theta_true {
            Some(theta) => {
                for (a, b) in th.iter().zip(theta) {
                    acc += (a - b) * (a - b);
                }
            }
            None => {
                for a in th {
                    acc += a * a;
                }
            }
        }
        acc.sqrt()
    }
}

fn err_cfg(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

/// Adaptive scalar plant x_dot = theta cos x + u with certainty-equivalence
/// feedback u = -theta_hat(t_k) cos x(t_k) - (5/4) x(t_k), gradient
/// estimator theta_hat_dot = lambda x rho(x) - (5/4) lambda varpi with
/// rho(x) = rho_q cos x, and the weighted trigger whose weight is
/// gamma_bar(x, theta_hat) = 2 theta_hat^4 + 9 theta_hat^2 + |theta_hat|
/// + rho(x)^2 + 1/4 + (5/4) lambda + rho_q / 2.
///
/// The design presumes |theta_true| < 2; rho_q = 2 (3.501 + lambda^2 / 4).
pub fn example1_scenario(
    lambda: f64,
    x0: f64,
    theta_hat0: f64,
    theta_true: f64,
) -> Result<Scenario> {
    if lambda <= 0.0 {
        return Err(err_cfg(format!("lambda must be positive, got {lambda}")));
    }
    if theta_true.abs() >= 2.0 {
        return Err(err_cfg(format!(
            "theta_true = {theta_true} outside the design range |theta| < 2"
        )));
    }
    let lambda_c = 3.501 + 0.25 * lambda * lambda;
    let rho_q = 2.0 * lambda_c;

    let plant = Plant {
        n_x: 1,
        n_z: 0,
        dynamics: Arc::new(move |_t, x, _z, u, d| {
            (vec![theta_true * x[0].cos() + u[0] + d[0]], vec![])
        }),
    };
    let controller = Controller {
        n_u: 1,
        n_est: 1,
        kappa: Arc::new(|y, th| vec![-th[0] * y[0].cos() - 1.25 * y[0]]),
        estimator: Some(Arc::new(move |y, _th, varpi| {
            vec![lambda * y[0] * rho_q * y[0].cos() - 1.25 * lambda * varpi[0]]
        })),
    };
    let gamma_bar = move |w: &[f64], _varpi: &[f64]| {
        let (x, th) = (w[0], w[1]);
        let rho = rho_q * x.cos();
        2.0 * th.powi(4) + 9.0 * th * th + th.abs() + rho * rho + 0.25 + 1.25 * lambda
            + 0.5 * rho_q
    };
    let trigger = TriggerLaw::Weighted {
        gamma_bar: Arc::new(gamma_bar),
        lhs_coeff: 1.0,
        rhs_coeff: 0.25,
    };
    let certificates = Certificates {
        v_bar: Some(Arc::new(move |w: &[f64], varpi: &[f64]| {
            let (x, th) = (w[0], w[1]);
            let tilde = th - theta_true;
            0.5 * rho_q * x * x + tilde * tilde / (2.0 * lambda)
                + 0.5 * varpi.iter().map(|v| v * v).sum::<f64>()
        })),
        u_fun: crate::kfun::named("half_square"),
        // generous quadratic envelopes, valid on the reference trajectory
        alpha_w: Some(ComparisonFunction::power("fifty_square", 50.0, 2.0)),
        sigma_w: Some(ComparisonFunction::power("fifty_square", 50.0, 2.0)),
        theta_true: Some(vec![theta_true]),
    };
    Ok(Scenario {
        name: "example1".into(),
        plant,
        controller,
        disturbance: None,
        trigger,
        shadow: None,
        certificates,
        sim: SimParams::new(50.0, 1e-3, vec![x0, theta_hat0]),
    })
}

/// Dynamic-gain plant z_dot = -z + w3 x, x_dot = w1 z sin x + w2 x + b u
/// with u = -theta_hat(t_k) x(t_k), monotone gain theta_hat_dot = lambda x^2,
/// and the weighted trigger with weight
/// gamma_bar(theta_hat, varpi) = ((|theta_hat| + |varpi|)^4 + 1) / (2 c_bar)
/// + (1 + theta_hat^2 + theta_hat^4 + 2 b_bar |theta_hat|) + 1/2.
///
/// The input coefficient b is unknown to the controller; the design needs
/// 0 < b < 1 and b <= b_bar. `state0` is (z0, x0, theta_hat0).
#[allow(clippy::too_many_arguments)]
pub fn example2_scenario(
    w1: f64,
    w2: f64,
    w3: f64,
    b: f64,
    lambda: f64,
    c_bar: f64,
    b_bar: f64,
    state0: (f64, f64, f64),
) -> Result<Scenario> {
    if !(0.0 < b && b < 1.0) {
        return Err(err_cfg(format!("b must lie in (0, 1), got {b}")));
    }
    if b > b_bar {
        return Err(err_cfg(format!("b = {b} exceeds its declared bound b_bar = {b_bar}")));
    }
    if lambda <= 0.0 || c_bar <= 0.0 || b_bar <= 0.0 {
        return Err(err_cfg("lambda, c_bar, b_bar must be positive"));
    }
    let plant = Plant {
        n_x: 1,
        n_z: 1,
        dynamics: Arc::new(move |_t, x, z, u, d| {
            let x_dot = w1 * z[0] * x[0].sin() + w2 * x[0] + b * u[0] + d[0];
            let z_dot = -z[0] + w3 * x[0] + d[1];
            (vec![x_dot], vec![z_dot])
        }),
    };
    let controller = Controller {
        n_u: 1,
        n_est: 1,
        kappa: Arc::new(|y, th| vec![-th[0] * y[0]]),
        estimator: Some(Arc::new(move |y, _th, _varpi| vec![lambda * y[0] * y[0]])),
    };
    let gamma_bar = move |w: &[f64], varpi: &[f64]| {
        let th = w[2].abs();
        let vp = norm(varpi);
        ((th + vp).powi(4) + 1.0) / (2.0 * c_bar) + (1.0 + th * th + th.powi(4) + 2.0 * b_bar * th)
            + 0.5
    };
    let trigger = TriggerLaw::Weighted {
        gamma_bar: Arc::new(gamma_bar),
        lhs_coeff: 1.0,
        rhs_coeff: 0.25,
    };
    let certificates = Certificates {
        u_fun: crate::kfun::named("half_square"),
        ..Certificates::default()
    };
    let (z0, x0, th0) = state0;
    Ok(Scenario {
        name: "example2".into(),
        plant,
        controller,
        disturbance: None,
        trigger,
        shadow: None,
        certificates,
        sim: SimParams::new(50.0, 1e-3, vec![x0, z0, th0]),
    })
}

/// Static robust controller u = -rho(x(t_k)) x(t_k) for a scalar-input plant,
/// with the gain-function event trigger {gamma, U(s) = s^2/2}.
///
/// The certificate bundle must carry alpha_w and sigma_w so the per-window
/// bounded-input-bounded-state inequality can be checked.
pub fn robust_scenario(
    rho: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    gamma: ComparisonFunction,
    plant: Plant,
    mut certificates: Certificates,
    sim: SimParams,
) -> Result<Scenario> {
    let chk = crate::kfun::check_kinf(&gamma, 16)?;
    if !chk.ok {
        return Err(err_cfg(format!("gamma is not class K-infinity: {}", chk.detail)));
    }
    if certificates.alpha_w.is_none() || certificates.sigma_w.is_none() {
        return Err(err_cfg(
            "robust scenario needs alpha_w and sigma_w certificates",
        ));
    }
    if certificates.u_fun.is_none() {
        certificates.u_fun = crate::kfun::named("half_square");
    }
    let controller = Controller {
        n_u: 1,
        n_est: 0,
        kappa: Arc::new(move |y, _th| vec![-rho(y[0]) * y[0]]),
        estimator: None,
    };
    let trigger = TriggerLaw::EventGain {
        gamma,
        u_radial: crate::kfun::named("half_square").unwrap(),
    };
    Ok(Scenario {
        name: "robust".into(),
        plant,
        controller,
        disturbance: None,
        trigger,
        shadow: None,
        certificates,
        sim,
    })
}

/// The robust reference instance: the two-state plant of [`example2_scenario`]
/// with all coefficients known (w = (0.5, 1.0, 0.8), b = 1), constant gain
/// rho = 3.3, gamma(s) = 207 s^2, and quadratic window certificates
/// alpha_w(s) = 3.8 s^2, sigma_w(s) = 202 s^2.
pub fn robust_reference_scenario() -> Result<Scenario> {
    let (w1, w2, w3) = (0.5, 1.0, 0.8);
    let plant = Plant {
        n_x: 1,
        n_z: 1,
        dynamics: Arc::new(move |_t, x, z, u, d| {
            let x_dot = w1 * z[0] * x[0].sin() + w2 * x[0] + u[0] + d[0];
            let z_dot = -z[0] + w3 * x[0] + d[1];
            (vec![x_dot], vec![z_dot])
        }),
    };
    let certificates = Certificates {
        u_fun: crate::kfun::named("half_square"),
        alpha_w: Some(ComparisonFunction::power("3.8_square", 3.8, 2.0)),
        sigma_w: Some(ComparisonFunction::power("202_square", 202.0, 2.0)),
        ..Certificates::default()
    };
    let mut sim = SimParams::new(10.0, 1e-3, vec![1.0, 1.0]);
    sim.stop_epsilon = 1e-6;
    let mut s = robust_scenario(
        Arc::new(|_x| 3.3),
        ComparisonFunction::power("207_square", 207.0, 2.0),
        plant,
        certificates,
        sim,
    )?;
    s.name = "robust".into();
    Ok(s)
}

/// Minimal scalar integrator x_dot = u, u = -x(t_k), with the gain-function
/// trigger {gamma(s) = 2 s^2, U(s) = s^2 / 2}. Fires at a constant interval
/// of 1/8 at every amplitude, so the asymptotic inter-event limit is exact.
/// The firing guard is effectively disabled so the geometric decay can run
/// hundreds of windows without stalling.
pub fn scalar_reference_scenario() -> Result<Scenario> {
    let plant = Plant {
        n_x: 1,
        n_z: 0,
        dynamics: Arc::new(|_t, _x, _z, u, d| (vec![u[0] + d[0]], vec![])),
    };
    let controller = Controller {
        n_u: 1,
        n_est: 0,
        kappa: Arc::new(|y, _th| vec![-y[0]]),
        estimator: None,
    };
    let trigger = TriggerLaw::EventGain {
        gamma: crate::kfun::named("two_square").unwrap(),
        u_radial: crate::kfun::named("half_square").unwrap(),
    };
    let mut sim = SimParams::new(40.0, 1e-3, vec![1.0]);
    sim.guard_epsilon = 1e-30;
    sim.stop_epsilon = 0.0;
    Ok(Scenario {
        name: "scalar".into(),
        plant,
        controller,
        disturbance: None,
        trigger,
        shadow: None,
        certificates: Certificates {
            u_fun: crate::kfun::named("half_square"),
            ..Certificates::default()
        },
        sim,
    })
}

/// Attaches a disturbance after verifying ||d(t)|| <= d_bar on a 1000-point
/// grid over the scenario horizon.
pub fn add_disturbance(
    mut scenario: Scenario,
    d: Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>,
    d_bar: f64,
) -> Result<Scenario> {
    let n_d = scenario.plant.n_x + scenario.plant.n_z;
    let (t0, t_end) = (scenario.sim.t0, scenario.sim.t_end);
    for i in 0..=1000 {
        let t = t0 + (t_end - t0) * i as f64 / 1000.0;
        let dv = d(t);
        if dv.len() != n_d {
            return Err(err_cfg(format!(
                "disturbance has dimension {}, plant needs {n_d}",
                dv.len()
            )));
        }
        if norm(&dv) > d_bar {
            return Err(err_cfg(format!(
                "disturbance exceeds its bound at t = {t}: ||d|| = {} > {d_bar}",
                norm(&dv)
            )));
        }
    }
    scenario.disturbance = Some(Disturbance { d, d_bar });
    Ok(scenario)
}

/// Scenario ids known to [`build_scenario`].
pub const SCENARIO_IDS: &[&str] = &["example1", "example1_disturbed", "example2", "robust", "scalar"];

/// Builds a named scenario with flat parameter overrides.
///
/// Keys `t0`, `t_end`, `h`, `stop_epsilon`, `guard_epsilon`, `x0` are
/// understood by every scenario; each scenario adds its own parameters.
/// Unknown ids and unknown keys are rejected before any computation.
pub fn build_scenario(id: &str, overrides: &BTreeMap<String, f64>) -> Result<Scenario> {
    let mut ov = overrides.clone();
    let mut take = |key: &str, default: f64| ov.remove(key).unwrap_or(default);
    let mut scenario = match id {
        "example1" => {
            let lambda = take("lambda", 1.0);
            let x0 = take("x0", 1.0);
            let th0 = take("theta_hat0", 0.0);
            let theta = take("theta_true", 0.1534);
            example1_scenario(lambda, x0, th0, theta)?
        }
        "example1_disturbed" => {
            let lambda = take("lambda", 1.0);
            let x0 = take("x0", 1.0);
            let th0 = take("theta_hat0", 0.0);
            let theta = take("theta_true", 0.1534);
            let d_bar = take("d_bar", 0.1);
            if d_bar < 0.0 {
                return Err(err_cfg(format!("d_bar must be nonnegative, got {d_bar}")));
            }
            let base = example1_scenario(lambda, x0, th0, theta)?;
            let mut s = add_disturbance(base, Arc::new(move |t| vec![d_bar * t.sin()]), d_bar)?;
            s.name = "example1_disturbed".into();
            s
        }
        "example2" => {
            let w1 = take("w1", 0.5);
            let w2 = take("w2", 1.0);
            let w3 = take("w3", 0.8);
            let b = take("b", 0.7);
            let lambda = take("lambda", 1.0);
            let c_bar = take("c_bar", 1.0);
            let b_bar = take("b_bar", 1.0);
            let z0 = take("z0", 1.0);
            let x0 = take("x0", 1.0);
            let th0 = take("theta_hat0", 0.0);
            example2_scenario(w1, w2, w3, b, lambda, c_bar, b_bar, (z0, x0, th0))?
        }
        "robust" => {
            let mut s = robust_reference_scenario()?;
            let x0 = take("x0", 1.0);
            let z0 = take("z0", 1.0);
            s.sim.w0 = vec![x0, z0];
            s
        }
        "scalar" => {
            let x0 = take("x0", 1.0);
            let mut s = scalar_reference_scenario()?;
            s.sim.w0 = vec![x0];
            s
        }
        other => {
            return Err(err_cfg(format!(
                "unknown scenario id `{other}` (known: {})",
                SCENARIO_IDS.join(", ")
            )))
        }
    };
    // common simulation overrides
    if let Some(v) = ov.remove("t0") {
        scenario.sim.t0 = v;
    }
    if let Some(v) = ov.remove("t_end") {
        scenario.sim.t_end = v;
    }
    if let Some(v) = ov.remove("h") {
        scenario.sim.h = v;
    }
    if let Some(v) = ov.remove("stop_epsilon") {
        scenario.sim.stop_epsilon = v;
    }
    if let Some(v) = ov.remove("guard_epsilon") {
        scenario.sim.guard_epsilon = v;
    }
    if let Some(key) = ov.keys().next() {
        return Err(err_cfg(format!("unknown override key `{key}` for scenario `{id}`")));
    }
    scenario.validate()?;
    Ok(scenario)
}
