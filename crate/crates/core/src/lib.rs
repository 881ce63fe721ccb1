//! Calculus on time scales.
//!
//! A time scale is a nonempty closed subset of the reals. This crate works
//! with bounded ones: finite unions of isolated points and closed intervals,
//! which cover the integers, `hZ`, `q^Z` and the periodic interval scales
//! `P_{a,b}` once restricted to a window, as well as any hand-written mix.
//!
//! - [`timescale`]: canonical representation, the jump operators `sigma` and
//!   `rho`, the graininess functions `mu` and `nu`, and point classification.
//! - [`derivative`]: delta and nabla derivatives of black-box functions and
//!   the sum/product/quotient/power rule algebra.
//! - [`chain`]: chain rules for compositions and the inverse-function rule.
//! - [`dynamics`]: the dynamic equation `x^Delta = f(t, x)`, stepped exactly
//!   across gaps and by Runge-Kutta along intervals.
//!
//! ```
//! use tempora::{delta_derivative, ScaleGenerator, TimeScale};
//!
//! let z = TimeScale::materialize(&ScaleGenerator::Integers, 0.0, 9.0).unwrap();
//! let d = delta_derivative(&z, &|t: f64| t * t, 3.0).unwrap();
//! assert_eq!(d.value(), Some(7.0));
//! ```

pub mod chain;
pub mod derivative;
pub mod dynamics;
pub mod error;
pub mod quadrature;
pub mod timescale;

pub use chain::{
    chain_counterexample_check, chain_integral, chain_mvt_find_c, chain_substitution,
    derive_scale, inverse_derivative, DerivedScale,
};
pub use derivative::{
    delta_derivative, derivative, nabla_derivative, shift_identity_check,
    sigma_differentiability_probe, DerivOptions, Derivative, Direction, Estimate, Method, Rules,
    Tolerances,
};
pub use dynamics::{simulate, step_scattered, SimOptions, Trajectory};
pub use error::{Error, NonDiffReason, Result};
pub use timescale::{Component, Density, PointClass, ScaleGenerator, TimeScale};
