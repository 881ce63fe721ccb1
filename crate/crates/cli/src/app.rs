//! Command definitions and their execution. `main` only maps the outcome to
//! stdout/stderr and an exit code.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};
use tempora::{
    chain_counterexample_check, chain_integral, chain_mvt_find_c, chain_substitution, derivative,
    inverse_derivative, simulate, DerivOptions, Derivative, Direction, Rules,
    SimOptions, TimeScale, Tolerances,
};

use tempora::timescale::membership_tol;

use crate::cursor::parse_number;
use crate::dsl::{render, ScaleExpr};
use crate::expr::{Expr, ScalarFn};
use crate::plot::{self, PlotWhat};
use crate::report::{Num, PointReport};
use crate::CliError;

/// Calculus on time scales from the command line.
///
/// Scales are written as unions of terms, e.g. `{0} U [1,3] U Z @[5,9]`.
/// Results are JSON unless a format says otherwise.
#[derive(Debug, Parser)]
#[command(name = "tempora", version)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Parse or plot a scale.
    #[command(subcommand)]
    Scale(ScaleCmd),
    /// Same as `scale plot`.
    Plot(PlotArgs),
    /// Jumps, graininess and classification of a point.
    Point(PointArgs),
    /// A single jump or graininess value.
    Op {
        which: OpKind,
        scale: String,
        #[arg(allow_hyphen_values = true)]
        t: String,
    },
    /// Delta or nabla derivative, directly or through a rule.
    Deriv(DerivArgs),
    /// Chain rules and the inverse-function rule (forward direction).
    Chain(ChainArgs),
    /// Solve x^Delta = f(t, x) along the scale.
    Simulate(SimArgs),
}

#[derive(Debug, Subcommand)]
pub enum ScaleCmd {
    /// Canonicalize a scale and print it.
    Parse {
        scale: String,
        #[arg(long, value_enum, default_value_t = ParseFormat::Json)]
        format: ParseFormat,
    },
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ParseFormat {
    Json,
    Dsl,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(value_enum)]
    pub what: PlotWhat,
    pub scale: String,
    #[arg(long, value_enum, default_value_t = PlotFormat::Svg)]
    pub format: PlotFormat,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PlotFormat {
    Svg,
    Ascii,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    pub scale: String,
    #[arg(allow_hyphen_values = true, required_unless_present = "batch")]
    pub t: Option<String>,
    /// File with one query point per line; answers come back one JSON object
    /// per line, in input order.
    #[arg(long, conflicts_with = "t")]
    pub batch: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OpKind {
    Sigma,
    Rho,
    Mu,
    Nu,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Kind {
    Delta,
    Nabla,
}

impl Kind {
    fn direction(self) -> Direction {
        match self {
            Kind::Delta => Direction::Forward,
            Kind::Nabla => Direction::Backward,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Kind::Delta => "delta",
            Kind::Nabla => "nabla",
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Rule {
    Sum,
    Scale,
    Product,
    Quotient,
    Power,
}

#[derive(Debug, Args)]
pub struct DerivArgs {
    pub kind: Kind,
    pub scale: String,
    /// Function of `t`.
    #[arg(allow_hyphen_values = true)]
    pub f: String,
    #[arg(allow_hyphen_values = true)]
    pub t: String,
    /// Evaluate through a rule instead of differentiating `f` directly.
    #[arg(long, value_enum)]
    pub rule: Option<Rule>,
    /// Second function for sum, product and quotient.
    #[arg(long, allow_hyphen_values = true)]
    pub g: Option<String>,
    /// Constant factor for the scale rule.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Exponent for the power rule; negative values use the reciprocal form.
    #[arg(long, allow_hyphen_values = true)]
    pub n: Option<i32>,
    /// Also check continuity along the dense side of scattered points.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ChainMethod {
    /// Composite derivative next to the naive product f'(g(t)) g^Delta(t).
    Naive,
    Mvt,
    Integral,
    Subst,
    Inverse,
}

#[derive(Debug, Args)]
pub struct ChainArgs {
    pub method: ChainMethod,
    pub scale: String,
    #[arg(allow_hyphen_values = true)]
    pub t: String,
    /// Outer function, as a function of `t`.
    #[arg(long, allow_hyphen_values = true)]
    pub f: Option<String>,
    /// Classical derivative of the outer function.
    #[arg(long, allow_hyphen_values = true)]
    pub fprime: Option<String>,
    /// Inner function.
    #[arg(long, allow_hyphen_values = true)]
    pub g: String,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    pub scale: String,
    /// Right-hand side in `t` and `x` (or `x0; x1; ...` for systems).
    #[arg(long, allow_hyphen_values = true)]
    pub ode: String,
    #[arg(long, allow_hyphen_values = true)]
    pub t0: String,
    /// Initial state, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub x0: String,
    #[arg(long, allow_hyphen_values = true)]
    pub t_end: String,
    /// Step on intervals; defaults to 1/256 of each interval.
    #[arg(long)]
    pub h: Option<String>,
    #[arg(long, value_enum, default_value_t = SimFormat::Jsonl)]
    pub format: SimFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SimFormat {
    Jsonl,
    Csv,
}

/// What a successful run prints and how it exits. Batch queries can finish
/// with a nonzero code while still printing every answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: 0 }
    }

    fn json(v: &impl serde::Serialize) -> Self {
        Self::ok(serde_json::to_string(v).expect("reports serialize") + "\n")
    }
}

/// Derivative tolerances with `TEMPORA_TOL` applied, e.g.
/// `nd=1e-3,conv=1e-10,cont=1e-5`.
pub fn tolerances(env: Option<&str>) -> Result<Tolerances, CliError> {
    let mut tol = Tolerances::default();
    let Some(env) = env.map(str::trim).filter(|s| !s.is_empty()) else {
        return Ok(tol);
    };
    for item in env.split(',') {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("TEMPORA_TOL entry `{item}` is not key=value")))?;
        let value = parse_number(value)?;
        if !(value.is_finite() && value > 0.0) {
            return Err(CliError::Usage(format!("TEMPORA_TOL {key} must be positive")));
        }
        match key.trim() {
            "nd" => tol.nondiff = value,
            "conv" => tol.converge = value,
            "cont" => tol.continuity = value,
            other => {
                return Err(CliError::Usage(format!(
                    "unknown TEMPORA_TOL key `{other}` (expected nd, conv or cont)"
                )))
            }
        }
    }
    Ok(tol)
}

pub fn run(cli: &Cli, tol_env: Option<&str>) -> Result<Outcome, CliError> {
    match &cli.cmd {
        Cmd::Scale(ScaleCmd::Parse { scale, format }) => {
            let ts = crate::dsl::parse_scale(scale)?;
            Ok(match format {
                ParseFormat::Json => Outcome::json(&ts),
                ParseFormat::Dsl => Outcome::ok(render(&ts) + "\n"),
            })
        }
        Cmd::Scale(ScaleCmd::Plot(args)) | Cmd::Plot(args) => cmd_plot(args),
        Cmd::Point(args) => cmd_point(args),
        Cmd::Op { which, scale, t } => {
            let ts = crate::dsl::parse_scale(scale)?;
            let t = member(&ts, parse_number(t)?)?;
            let (name, v) = match which {
                OpKind::Sigma => ("sigma", ts.sigma(t)?),
                OpKind::Rho => ("rho", ts.rho(t)?),
                OpKind::Mu => ("mu", ts.mu(t)?),
                OpKind::Nu => ("nu", ts.nu(t)?),
            };
            Ok(Outcome::json(&json!({ name: Num(v) })))
        }
        Cmd::Deriv(args) => cmd_deriv(args, tolerances(tol_env)?),
        Cmd::Chain(args) => cmd_chain(args),
        Cmd::Simulate(args) => cmd_simulate(args),
    }
}

/// Snaps `t` onto the scale, or reports the members on either side of it.
fn member(ts: &TimeScale, t: f64) -> Result<f64, CliError> {
    if !t.is_finite() {
        return Err(tempora::Error::NonFinite(t).into());
    }
    match ts.locate(t) {
        Some((_, snapped)) => Ok(snapped),
        None => {
            let (below, above) = ts.neighbors(t);
            Err(CliError::NotInScale {
                t,
                nearest: below.into_iter().chain(above).collect(),
            })
        }
    }
}

fn point_report(ts: &TimeScale, windows: &[(f64, f64)], t: f64) -> Result<PointReport, CliError> {
    let t = member(ts, t)?;
    let tol = membership_tol(t);
    let window_edge = windows
        .iter()
        .any(|&(lo, hi)| (t - lo).abs() <= tol || (t - hi).abs() <= tol);
    Ok(PointReport {
        sigma: Num(ts.sigma(t)?),
        rho: Num(ts.rho(t)?),
        mu: Num(ts.mu(t)?),
        nu: Num(ts.nu(t)?),
        class: ts.classify(t)?.label(),
        window_edge,
    })
}

fn cmd_point(args: &PointArgs) -> Result<Outcome, CliError> {
    let expr = ScaleExpr::parse(&args.scale)?;
    let ts = expr.eval()?;
    let windows = expr.windows();
    let Some(path) = &args.batch else {
        let t = parse_number(args.t.as_deref().unwrap_or_default())?;
        return Ok(Outcome::json(&point_report(&ts, &windows, t)?));
    };

    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path.display().to_string(), e))?;
    let queries: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let answers: Vec<(Value, i32)> = queries
        .par_iter()
        .map(|q| {
            let answer = parse_number(q)
                .map_err(CliError::from)
                .and_then(|t| point_report(&ts, &windows, t).map(|r| (t, r)));
            match answer {
                Ok((t, r)) => {
                    let mut v = json!({ "t": Num(t) });
                    if let (Value::Object(m), Ok(Value::Object(rest))) = (&mut v, serde_json::to_value(&r)) {
                        m.extend(rest);
                    }
                    (v, 0)
                }
                Err(e) => {
                    let mut v = e.to_json();
                    v["query"] = Value::from(*q);
                    (v, e.exit_code())
                }
            }
        })
        .collect();
    let mut out = String::new();
    for (v, _) in &answers {
        out.push_str(&v.to_string());
        out.push('\n');
    }
    let code = answers.iter().map(|&(_, c)| c).max().unwrap_or(0);
    Ok(Outcome { stdout: out, code })
}

fn write_or_print(out: Option<&Path>, text: String) -> Result<Outcome, CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::io(path.display().to_string(), e))?;
            Ok(Outcome::ok(String::new()))
        }
        None => Ok(Outcome::ok(text)),
    }
}

fn cmd_plot(args: &PlotArgs) -> Result<Outcome, CliError> {
    let ts = crate::dsl::parse_scale(&args.scale)?;
    let text = match args.format {
        PlotFormat::Svg => plot::svg(&ts, args.what),
        PlotFormat::Ascii => plot::ascii(&ts, args.what),
    };
    write_or_print(args.out.as_deref(), text)
}

/// Runs `body` with `expr` as a closure and turns recorded evaluation
/// failures into errors, which take precedence over whatever the numerics
/// made of the resulting `NaN`s.
fn with_fn<T>(f: &ScalarFn, result: tempora::Result<T>) -> Result<T, CliError> {
    if let Some(e) = f.take_fault() {
        return Err(e.into());
    }
    Ok(result?)
}

fn required<'a>(value: &'a Option<String>, flag: &str, what: &str) -> Result<&'a str, CliError> {
    value
        .as_deref()
        .ok_or_else(|| CliError::Usage(format!("{what} needs --{flag}")))
}

fn cmd_deriv(args: &DerivArgs, tol: Tolerances) -> Result<Outcome, CliError> {
    let ts = crate::dsl::parse_scale(&args.scale)?;
    let f_expr = Expr::parse(&args.f)?;
    let t = member(&ts, parse_number(&args.t)?)?;
    let opts = DerivOptions {
        tol,
        strict: args.strict,
        ..Default::default()
    };
    let dir = args.kind.direction();
    let f = ScalarFn::new(&f_expr);
    let fc = |s: f64| f.call(s);

    let Some(rule) = args.rule else {
        let d = with_fn(&f, derivative(&ts, &fc, t, dir, &opts))?;
        let mut v = json!({ "kind": args.kind.name(), "t": Num(t) });
        match d {
            Derivative::Value(e) => {
                v["value"] = json!(Num(e.value));
                v["method"] = json!(e.method.as_str());
                v["err"] = json!(Num(e.err_estimate));
            }
            Derivative::NonDifferentiable { left, right, reason } => {
                v["verdict"] = json!("non-differentiable");
                v["reason"] = json!(reason.as_str());
                v["left"] = json!(left.map(Num));
                v["right"] = json!(right.map(Num));
            }
        }
        return Ok(Outcome::json(&v));
    };

    let rules = Rules::new(&ts, dir, opts);
    let rule_name = match rule {
        Rule::Sum => "sum",
        Rule::Scale => "scale",
        Rule::Product => "product",
        Rule::Quotient => "quotient",
        Rule::Power => "power",
    };
    let mut v = json!({ "kind": args.kind.name(), "rule": rule_name, "t": Num(t) });
    match rule {
        Rule::Sum | Rule::Product | Rule::Quotient => {
            let g_expr = Expr::parse(required(&args.g, "g", rule_name)?)?;
            let g = ScalarFn::new(&g_expr);
            let gc = |s: f64| g.call(s);
            let value = match rule {
                Rule::Sum => rules.sum(&fc, &gc, t).map(|e| json!(Num(e.value))),
                Rule::Product => rules.product(&fc, &gc, t).map(|(p1, p2)| {
                    json!({ "form1": Num(p1), "form2": Num(p2) })
                }),
                _ => rules.quotient(&fc, &gc, t).map(|q| json!(Num(q))),
            };
            check_faults(&[&f, &g])?;
            match value? {
                Value::Object(m) => v.as_object_mut().expect("object").extend(m),
                other => v["value"] = other,
            }
        }
        Rule::Scale => {
            let alpha = parse_number(required(&args.alpha, "alpha", "scale")?)?;
            let e = with_fn(&f, rules.scale(&fc, alpha, t))?;
            v["alpha"] = json!(Num(alpha));
            v["value"] = json!(Num(e.value));
        }
        Rule::Power => {
            let n = args
                .n
                .ok_or_else(|| CliError::Usage("power needs --n".into()))?;
            let value = if n >= 0 {
                rules.power(&fc, n.unsigned_abs(), t)
            } else {
                rules.neg_power(&fc, n.unsigned_abs(), t)
            };
            v["n"] = json!(n);
            v["value"] = json!(Num(with_fn(&f, value)?));
        }
    }
    Ok(Outcome::json(&v))
}

fn cmd_chain(args: &ChainArgs) -> Result<Outcome, CliError> {
    let ts = crate::dsl::parse_scale(&args.scale)?;
    let t = member(&ts, parse_number(&args.t)?)?;
    let g_expr = Expr::parse(&args.g)?;
    let g = ScalarFn::new(&g_expr);
    let gc = |s: f64| g.call(s);
    let method = args.method;
    let name = match method {
        ChainMethod::Naive => "naive",
        ChainMethod::Mvt => "mvt",
        ChainMethod::Integral => "integral",
        ChainMethod::Subst => "subst",
        ChainMethod::Inverse => "inverse",
    };
    let mut v = json!({ "method": name, "t": Num(t) });

    let parsed = |flag: &str, value: &Option<String>| -> Result<Expr, CliError> {
        Ok(Expr::parse(required(value, flag, name)?)?)
    };
    match method {
        ChainMethod::Naive | ChainMethod::Subst | ChainMethod::Mvt => {
            let f_expr = parsed("f", &args.f)?;
            let f = ScalarFn::new(&f_expr);
            let fc = |s: f64| f.call(s);
            match method {
                ChainMethod::Naive => {
                    let r = chain_counterexample_check(&ts, &fc, &gc, t);
                    check_faults(&[&f, &g])?;
                    let (lhs, naive) = r?;
                    v["composite"] = json!(Num(lhs));
                    v["naive"] = json!(Num(naive));
                }
                ChainMethod::Subst => {
                    let value = chain_substitution(&ts, &fc, &gc, t);
                    check_faults(&[&f, &g])?;
                    v["value"] = json!(Num(value?));
                }
                _ => {
                    let fp_expr = parsed("fprime", &args.fprime)?;
                    let fp = ScalarFn::new(&fp_expr);
                    let fpc = |s: f64| fp.call(s);
                    let c = chain_mvt_find_c(&ts, &fc, &fpc, &gc, t);
                    check_faults(&[&f, &fp, &g])?;
                    v["c"] = json!(Num(c?));
                }
            }
        }
        ChainMethod::Integral => {
            let fp_expr = parsed("fprime", &args.fprime)?;
            let fp = ScalarFn::new(&fp_expr);
            let fpc = |s: f64| fp.call(s);
            let value = chain_integral(&ts, &fpc, &gc, t);
            check_faults(&[&fp, &g])?;
            v["value"] = json!(Num(value?));
        }
        ChainMethod::Inverse => {
            let value = inverse_derivative(&ts, &gc, t);
            check_faults(&[&g])?;
            v["value"] = json!(Num(value?));
        }
    }
    Ok(Outcome::json(&v))
}

fn check_faults(fns: &[&ScalarFn]) -> Result<(), CliError> {
    for f in fns {
        if let Some(e) = f.take_fault() {
            return Err(e.into());
        }
    }
    Ok(())
}

fn cmd_simulate(args: &SimArgs) -> Result<Outcome, CliError> {
    let ts = crate::dsl::parse_scale(&args.scale)?;
    let system = Expr::parse_system(&args.ode)?;
    let x0 = args
        .x0
        .split(',')
        .map(parse_number)
        .collect::<Result<Vec<f64>, _>>()?;
    if x0.len() != system.len() {
        return Err(CliError::Usage(format!(
            "--x0 has {} components but the right-hand side has {}",
            x0.len(),
            system.len()
        )));
    }
    if let Some(i) = system.iter().filter_map(Expr::max_state).max() {
        if i >= x0.len() {
            return Err(CliError::Usage(format!(
                "x{i} used but the state has dimension {}",
                x0.len()
            )));
        }
    }
    let t0 = member(&ts, parse_number(&args.t0)?)?;
    let t_end = member(&ts, parse_number(&args.t_end)?)?;
    let h = args.h.as_deref().map(parse_number).transpose()?;
    if let Some(h) = h {
        if !(h.is_finite() && h > 0.0) {
            return Err(tempora::Error::BadParameter(format!("step must be positive, got {h}")).into());
        }
    }

    let fault = std::cell::RefCell::new(None);
    let rhs = |t: f64, x: &[f64]| -> Vec<f64> {
        system
            .iter()
            .map(|e| {
                e.eval(t, x).unwrap_or_else(|err| {
                    fault.borrow_mut().get_or_insert(err);
                    f64::NAN
                })
            })
            .collect()
    };
    let traj = simulate(&ts, &rhs, t0, &x0, t_end, &SimOptions { h });
    if let Some(e) = fault.into_inner() {
        return Err(e.into());
    }
    let traj = traj?;

    let mut buf = Vec::new();
    match args.format {
        SimFormat::Jsonl => traj.write_jsonl(&mut buf),
        SimFormat::Csv => traj.write_csv(&mut buf),
    }
    .expect("writing to memory");
    write_or_print(args.out.as_deref(), String::from_utf8(buf).expect("utf-8 output"))
}
