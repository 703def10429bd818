use thiserror::Error;

/// Errors surfaced by the simulation and analysis toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("function `{name}` evaluated to a non-finite value at s = {s}")]
    NonFinite { name: String, s: f64 },

    #[error("ratio diverges: denominator underflows to zero while numerator does not (s = {s})")]
    RatioDiverges { s: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("target {y} exceeds probed range of `{name}`")]
    TargetExceedsRange { name: String, y: f64 },

    #[error("no positive MASP exists: U(s)/gamma(s) -> 0 as s -> 0+")]
    NoPositiveMasp,

    #[error("unbounded asymptotic interval: U(s)/gamma(s) diverges as s -> 0+")]
    UnboundedInterval,

    #[error("dynamics blew up at t = {t}")]
    DynamicsBlowUp { t: f64 },

    #[error("missed crossing: trigger margin already nonnegative at the step start (t = {t})")]
    MissedCrossing { t: f64 },

    #[error("Zeno suspicion: {events} events fired before t = {t}, min interval {min_interval:e}")]
    ZenoSuspicion {
        events: usize,
        t: f64,
        min_interval: f64,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
