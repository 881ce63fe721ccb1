use serde_json::{json, Value};
use thiserror::Error;

use crate::cursor::ParseError;
use crate::expr::EvalError;
use crate::report::Num;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(#[from] ParseError),

    #[error("{0}")]
    Usage(String),

    #[error("{t} is not a member of the time scale")]
    NotInScale { t: f64, nearest: Vec<f64> },

    #[error("{0}")]
    Domain(tempora::Error),

    #[error("{0}")]
    Eval(#[from] EvalError),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl From<tempora::Error> for CliError {
    fn from(e: tempora::Error) -> Self {
        CliError::Domain(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Usage(_) => 2,
            CliError::NotInScale { .. } | CliError::Domain(_) | CliError::Eval(_) => 3,
            CliError::Io { .. } => 4,
        }
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// Structured form printed on stdout next to the exit code.
    pub fn to_json(&self) -> Value {
        let message = self.to_string();
        match self {
            CliError::Parse(p) => json!({
                "error": "parse",
                "offset": p.offset,
                "expected": p.expected,
                "found": p.found,
                "message": message,
            }),
            CliError::Usage(_) => json!({"error": "usage", "message": message}),
            CliError::NotInScale { t, nearest } => json!({
                "error": "not-in-scale",
                "t": Num(*t),
                "nearest": nearest.iter().map(|&v| Num(v)).collect::<Vec<_>>(),
                "message": message,
            }),
            CliError::Domain(e) => {
                let kind = match e {
                    tempora::Error::NotInKappa { .. } => "not-in-kappa",
                    tempora::Error::NotInScale { .. } => "not-in-scale",
                    tempora::Error::BadParameter(_) => "bad-parameter",
                    tempora::Error::EmptyScale => "empty-scale",
                    _ => "domain",
                };
                let mut v = json!({"error": kind, "message": message});
                if let tempora::Error::NotInKappa { dir, .. } = e {
                    v["explanation"] = Value::from(kappa_explanation(*dir));
                }
                v
            }
            CliError::Eval(_) => json!({"error": "evaluation", "message": message}),
            CliError::Io { path, .. } => json!({"error": "io", "path": path, "message": message}),
        }
    }
}

fn kappa_explanation(dir: tempora::Direction) -> &'static str {
    match dir {
        tempora::Direction::Forward => {
            "the delta derivative is undefined at a left-scattered maximum: there is no forward neighbour to difference against"
        }
        tempora::Direction::Backward => {
            "the nabla derivative is undefined at a right-scattered minimum: there is no backward neighbour to difference against"
        }
    }
}
