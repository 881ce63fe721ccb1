//! Command-line front-end for [`tempora`]: a small text syntax for time
//! scales and functions, JSON reports, and SVG/ASCII plots.

pub mod app;
mod cursor;
pub mod dsl;
mod error;
pub mod expr;
pub mod plot;
pub mod report;

pub use app::{run, Cli, Outcome};
pub use cursor::{parse_number, ParseError};
pub use dsl::{parse_scale, render, ScaleExpr};
pub use error::CliError;
pub use expr::{EvalError, Expr};
