use thiserror::Error;

use crate::derivative::Direction;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Why a one-sided or two-sided derivative estimate was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NonDiffReason {
    /// Both one-sided limits exist but disagree beyond the tolerance.
    OneSidedMismatch,
    /// The extrapolated difference quotients never settled.
    NoConvergence,
    /// The function jumps at the point along its dense side.
    Discontinuous,
}

impl NonDiffReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            NonDiffReason::OneSidedMismatch => "one-sided-mismatch",
            NonDiffReason::NoConvergence => "no-convergence",
            NonDiffReason::Discontinuous => "discontinuous",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("time scale is empty")]
    EmptyScale,

    #[error("bound {0} is not a finite real")]
    NonFinite(f64),

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("{t} is not a member of the time scale")]
    NotInScale { t: f64 },

    #[error("{t} lies outside the {} differentiability domain", .dir.kappa_name())]
    NotInKappa { t: f64, dir: Direction },

    #[error("not differentiable at {t} ({}; left {left:?}, right {right:?})", .reason.as_str())]
    NonDifferentiable {
        t: f64,
        left: Option<f64>,
        right: Option<f64>,
        reason: NonDiffReason,
    },

    #[error("denominator {denominator:e} too close to zero at {t}")]
    DivisionGuard { t: f64, denominator: f64 },

    #[error("derivative of the inner map vanishes at {t} (slope {slope:e})")]
    ZeroSlope { t: f64, slope: f64 },

    #[error("no sign change of the mean-value residual on [{lo}, {hi}]")]
    NoRoot { lo: f64, hi: f64 },

    #[error("map is not strictly increasing between {s1} and {s2}")]
    NotMonotone { s1: f64, s2: f64 },

    #[error("{t} is right-dense; no scattered step exists")]
    NotScattered { t: f64 },

    #[error("state became non-finite at t = {t}")]
    NonFiniteState { t: f64 },

    #[error("vector field returned dimension {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}
