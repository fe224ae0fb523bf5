use crate::numerics::C64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole at {0}")]
    Pole(C64),
    #[error("argument out of range: {0}")]
    Domain(String),
    #[error("singularity within radius {radius} of {at}")]
    SingularityInDisk { at: C64, radius: f64 },
    #[error("singularity on the integration path")]
    SingularityOnPath,
    #[error("derivative order {k} too large for radius {radius}")]
    OrderTooLarge { k: usize, radius: f64 },
    #[error("no decay detected by X = {x}: {detail}")]
    DivergentTail { x: f64, detail: String },
    #[error("non-convergent: {0}")]
    NonConvergent(String),
    #[error("route inadmissible: {0}")]
    Inadmissible(String),
    #[error("strips do not intersect")]
    EmptyStrip,
    #[error("moment undefined: 0 is not interior to the strip")]
    MomentUndefined,
    #[error("umbra is singular (index {alpha}, {beta}); decompose first")]
    SingularUmbra { alpha: f64, beta: f64 },
    #[error("height {t} outside the open interval ({lo}, {hi})")]
    HeightOutside { t: f64, lo: f64, hi: f64 },
    #[error("unknown umbra '{0}'")]
    UnknownUmbra(String),
    #[error("endpoint constraint violated: {0}")]
    Endpoint(String),
    #[error("frequency {xi} outside sampled range [{lo}, {hi}]")]
    OutsideSampledRange { xi: f64, lo: f64, hi: f64 },
    #[error("overflow along probe ray at x = {0}")]
    ProbeOverflow(f64),
    #[error("cross-check failed: {0}")]
    CrossCheck(String),
    #[error("branch ambiguity: {0}")]
    Branch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
