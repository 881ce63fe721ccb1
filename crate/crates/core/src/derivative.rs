//! Delta and nabla derivatives of black-box functions on a time scale.
//!
//! At a scattered point the derivative is the exact difference quotient
//! across the jump. At a dense point it is the limit of difference quotients
//! along the dense side(s), estimated from the step sequence
//! `h_k = h_0 / 2^k` and Richardson extrapolation.

use crate::error::{Error, NonDiffReason, Result};
use crate::timescale::{Component, TimeScale};

/// Which jump operator a derivative is built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Delta derivative, built on `sigma`.
    Forward,
    /// Nabla derivative, built on `rho`.
    Backward,
}

impl Direction {
    pub fn name(&self) -> &'static str {
        match self {
            Direction::Forward => "delta",
            Direction::Backward => "nabla",
        }
    }

    pub fn kappa_name(&self) -> &'static str {
        match self {
            Direction::Forward => "T^kappa (upper)",
            Direction::Backward => "T_kappa (lower)",
        }
    }

    /// `sigma(t)` or `rho(t)`.
    pub fn jump(&self, scale: &TimeScale, t: f64) -> Result<f64> {
        match self {
            Direction::Forward => scale.sigma(t),
            Direction::Backward => scale.rho(t),
        }
    }

    fn in_kappa(&self, scale: &TimeScale, t: f64) -> Result<bool> {
        match self {
            Direction::Forward => scale.in_kappa_upper(t),
            Direction::Backward => scale.in_kappa_lower(t),
        }
    }
}

/// How a derivative value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ScatteredQuotient,
    DenseLimit,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ScatteredQuotient => "scattered-quotient",
            Method::DenseLimit => "dense-limit",
        }
    }

    fn combine(self, other: Method) -> Method {
        if self == Method::DenseLimit || other == Method::DenseLimit {
            Method::DenseLimit
        } else {
            Method::ScatteredQuotient
        }
    }
}

/// A derivative value with its provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub method: Method,
    /// Zero for scattered quotients; the last extrapolation increment otherwise.
    pub err_estimate: f64,
}

/// Outcome of a derivative query at a valid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Derivative {
    Value(Estimate),
    NonDifferentiable {
        left: Option<f64>,
        right: Option<f64>,
        reason: NonDiffReason,
    },
}

impl Derivative {
    pub fn value(&self) -> Option<f64> {
        match self {
            Derivative::Value(e) => Some(e.value),
            Derivative::NonDifferentiable { .. } => None,
        }
    }

    pub fn is_differentiable(&self) -> bool {
        matches!(self, Derivative::Value(_))
    }

    /// Turns a non-differentiability verdict at `t` into an error.
    pub fn into_estimate(self, t: f64) -> Result<Estimate> {
        match self {
            Derivative::Value(e) => Ok(e),
            Derivative::NonDifferentiable { left, right, reason } => Err(Error::NonDifferentiable {
                t,
                left,
                right,
                reason,
            }),
        }
    }
}

/// Tolerances of the dense-limit estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative disagreement allowed between one-sided limits.
    pub nondiff: f64,
    /// Relative increment between successive extrapolants that ends the search.
    pub converge: f64,
    /// Relative jump tolerated by the continuity probe.
    pub continuity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            nondiff: 1e-4,
            converge: 1e-8,
            continuity: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivOptions {
    pub tol: Tolerances,
    /// Also check continuity along the dense side of a scattered point.
    pub strict: bool,
    /// Cap on the initial step before halving.
    pub max_step: f64,
    /// Multiplier on the initial step; lets callers run a second step sequence.
    pub step_scale: f64,
    pub halvings: usize,
}

impl Default for DerivOptions {
    fn default() -> Self {
        DerivOptions {
            tol: Tolerances::default(),
            strict: false,
            max_step: 1e-2,
            step_scale: 1.0,
            halvings: 20,
        }
    }
}

impl DerivOptions {
    pub fn strict() -> Self {
        DerivOptions {
            strict: true,
            ..Default::default()
        }
    }
}

/// Result of extrapolating a sequence indexed by `h_k = h_0 / 2^k` to `h = 0`.
#[derive(Debug, Clone, Copy)]
struct Limit {
    value: f64,
    increment: f64,
    converged: bool,
}

/// Richardson extrapolation of `sample(h_k)` for `k = 0..=halvings`,
/// assuming an error expansion in integer powers of `h`.
fn extrapolate(h0: f64, halvings: usize, rtol: f64, mut sample: impl FnMut(f64) -> f64) -> Limit {
    let mut prev_row: Vec<f64> = Vec::with_capacity(halvings + 1);
    let mut row: Vec<f64> = Vec::with_capacity(halvings + 1);
    let mut last_diag = f64::NAN;
    let mut increment = f64::INFINITY;
    for k in 0..=halvings {
        let h = h0 / (1u64 << k) as f64;
        row.clear();
        row.push(sample(h));
        let mut factor = 1.0;
        for j in 1..=k {
            factor *= 2.0;
            let next = row[j - 1] + (row[j - 1] - prev_row[j - 1]) / (factor - 1.0);
            row.push(next);
        }
        let diag = row[k];
        if !diag.is_finite() {
            return Limit {
                value: diag,
                increment: f64::INFINITY,
                converged: false,
            };
        }
        if k > 0 {
            increment = (diag - last_diag).abs();
            if increment < rtol * (1.0 + diag.abs()) {
                return Limit {
                    value: diag,
                    increment,
                    converged: true,
                };
            }
        }
        last_diag = diag;
        std::mem::swap(&mut prev_row, &mut row);
    }
    Limit {
        value: last_diag,
        increment,
        converged: false,
    }
}

/// One-sided limit of the difference quotient at `t`, moving by `dir` (+1 or
/// -1) into a dense stretch of length `span`.
fn one_sided_slope<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    t: f64,
    dir: f64,
    span: f64,
    opts: &DerivOptions,
) -> Limit {
    let ft = f(t);
    let h0 = opts.max_step.min(span) / 2.0 * opts.step_scale;
    let (lo, hi) = if dir > 0.0 { (t, t + span) } else { (t - span, t) };
    extrapolate(h0, opts.halvings, opts.tol.converge, |h| {
        let s = (t + dir * h).clamp(lo, hi);
        (f(s) - ft) / (s - t)
    })
}

/// One-sided limit of `f` itself at `t` along a dense stretch.
fn one_sided_value<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    t: f64,
    dir: f64,
    span: f64,
    opts: &DerivOptions,
) -> Limit {
    let h0 = opts.max_step.min(span) / 2.0 * opts.step_scale;
    let (lo, hi) = if dir > 0.0 { (t, t + span) } else { (t - span, t) };
    extrapolate(h0, opts.halvings, opts.tol.converge, |h| {
        f((t + dir * h).clamp(lo, hi))
    })
}

/// Lengths of the dense stretches to the left and right of `s` inside its
/// component.
fn dense_spans(comp: &Component, s: f64) -> (Option<f64>, Option<f64>) {
    match *comp {
        Component::Interval { a, b } => (
            (s > a).then_some(s - a),
            (s < b).then_some(b - s),
        ),
        Component::Point { .. } => (None, None),
    }
}

/// Delta (`Forward`) or nabla (`Backward`) derivative of `f` at `t`.
pub fn derivative<F: Fn(f64) -> f64 + ?Sized>(
    scale: &TimeScale,
    f: &F,
    t: f64,
    dir: Direction,
    opts: &DerivOptions,
) -> Result<Derivative> {
    let (idx, s) = scale.locate(t).ok_or(Error::NotInScale { t })?;
    if !dir.in_kappa(scale, s)? {
        return Err(Error::NotInKappa { t, dir });
    }
    let jump = dir.jump(scale, s)?;
    let (left_span, right_span) = dense_spans(&scale.components()[idx], s);

    if jump != s {
        let fs = f(s);
        let value = (f(jump) - fs) / (jump - s);
        // The dense side, if any, sits opposite the jump.
        let dense_side = match dir {
            Direction::Forward => left_span.map(|span| (-1.0, span)),
            Direction::Backward => right_span.map(|span| (1.0, span)),
        };
        if opts.strict {
            if let Some((side, span)) = dense_side {
                let lim = one_sided_value(f, s, side, span, opts);
                let jumped = (lim.value - fs).abs() > opts.tol.continuity * (1.0 + fs.abs());
                if !lim.converged || jumped {
                    let slope = one_sided_slope(f, s, side, span, opts).value;
                    let (left, right) = match dir {
                        Direction::Forward => (slope, value),
                        Direction::Backward => (value, slope),
                    };
                    return Ok(Derivative::NonDifferentiable {
                        left: Some(left),
                        right: Some(right),
                        reason: NonDiffReason::Discontinuous,
                    });
                }
            }
        }
        return Ok(Derivative::Value(Estimate {
            value,
            method: Method::ScatteredQuotient,
            err_estimate: 0.0,
        }));
    }

    let left = left_span.map(|span| one_sided_slope(f, s, -1.0, span, opts));
    let right = right_span.map(|span| one_sided_slope(f, s, 1.0, span, opts));
    let verdict = |reason| {
        Ok(Derivative::NonDifferentiable {
            left: left.map(|l| l.value),
            right: right.map(|r| r.value),
            reason,
        })
    };
    match (left, right) {
        (None, None) => Err(Error::NotInKappa { t, dir }),
        (Some(one), None) | (None, Some(one)) => {
            if !one.converged {
                return verdict(NonDiffReason::NoConvergence);
            }
            Ok(Derivative::Value(Estimate {
                value: one.value,
                method: Method::DenseLimit,
                err_estimate: one.increment,
            }))
        }
        (Some(l), Some(r)) => {
            if !(l.converged && r.converged) {
                return verdict(NonDiffReason::NoConvergence);
            }
            let mid = 0.5 * (l.value + r.value);
            if (l.value - r.value).abs() > opts.tol.nondiff * (1.0 + mid.abs()) {
                return verdict(NonDiffReason::OneSidedMismatch);
            }
            Ok(Derivative::Value(Estimate {
                value: mid,
                method: Method::DenseLimit,
                err_estimate: l.increment.max(r.increment),
            }))
        }
    }
}

pub fn delta_derivative<F: Fn(f64) -> f64 + ?Sized>(
    scale: &TimeScale,
    f: &F,
    t: f64,
) -> Result<Derivative> {
    derivative(scale, f, t, Direction::Forward, &DerivOptions::default())
}

pub fn nabla_derivative<F: Fn(f64) -> f64 + ?Sized>(
    scale: &TimeScale,
    f: &F,
    t: f64,
) -> Result<Derivative> {
    derivative(scale, f, t, Direction::Backward, &DerivOptions::default())
}

/// Residual `|f(sigma(t)) - f(t) - mu(t) f^Delta(t)|`.
pub fn shift_identity_check<F: Fn(f64) -> f64 + ?Sized>(
    scale: &TimeScale,
    f: &F,
    t: f64,
) -> Result<f64> {
    let s = scale.snap(t)?;
    let d = delta_derivative(scale, f, s)?.into_estimate(s)?;
    let mu = scale.mu(s)?;
    Ok((f(scale.sigma(s)?) - f(s) - mu * d.value).abs())
}

/// Delta derivative of `sigma` itself, with the continuity probe enabled.
///
/// `sigma` jumps at every right-scattered, left-dense point, so those points
/// come back as [`Derivative::NonDifferentiable`].
pub fn sigma_differentiability_probe(scale: &TimeScale, t: f64) -> Result<Derivative> {
    let sigma = |s: f64| scale.sigma(s).unwrap_or(f64::NAN);
    derivative(scale, &sigma, t, Direction::Forward, &DerivOptions::strict())
}

/// The derivative rule algebra for one direction.
///
/// Every rule evaluates the operands' derivatives with [`derivative`] and
/// combines them by the rule, so the result can be compared with a direct
/// derivative of the combined function.
#[derive(Debug, Clone, Copy)]
pub struct Rules<'a> {
    scale: &'a TimeScale,
    dir: Direction,
    opts: DerivOptions,
}

impl<'a> Rules<'a> {
    pub fn new(scale: &'a TimeScale, dir: Direction, opts: DerivOptions) -> Self {
        Rules { scale, dir, opts }
    }

    pub fn delta(scale: &'a TimeScale) -> Self {
        Rules::new(scale, Direction::Forward, DerivOptions::default())
    }

    pub fn nabla(scale: &'a TimeScale) -> Self {
        Rules::new(scale, Direction::Backward, DerivOptions::default())
    }

    pub fn direction(&self) -> Direction {
        self.dir
    }

    /// Direct derivative of `f` at `t`.
    pub fn direct<F: Fn(f64) -> f64 + ?Sized>(&self, f: &F, t: f64) -> Result<Estimate> {
        derivative(self.scale, f, t, self.dir, &self.opts)?.into_estimate(t)
    }

    /// `t` snapped onto the scale and its jump (`sigma(t)` or `rho(t)`).
    fn point(&self, t: f64) -> Result<(f64, f64)> {
        let s = self.scale.snap(t)?;
        Ok((s, self.dir.jump(self.scale, s)?))
    }

    fn guard(&self, t: f64, denominator: f64, scale: f64) -> Result<()> {
        if denominator.abs() <= 1e-12 * scale.max(1.0) {
            Err(Error::DivisionGuard { t, denominator })
        } else {
            Ok(())
        }
    }

    pub fn sum<F, G>(&self, f: &F, g: &G, t: f64) -> Result<Estimate>
    where
        F: Fn(f64) -> f64 + ?Sized,
        G: Fn(f64) -> f64 + ?Sized,
    {
        let df = self.direct(f, t)?;
        let dg = self.direct(g, t)?;
        Ok(Estimate {
            value: df.value + dg.value,
            method: df.method.combine(dg.method),
            err_estimate: df.err_estimate + dg.err_estimate,
        })
    }

    pub fn scale<F: Fn(f64) -> f64 + ?Sized>(&self, f: &F, alpha: f64, t: f64) -> Result<Estimate> {
        let df = self.direct(f, t)?;
        Ok(Estimate {
            value: alpha * df.value,
            method: df.method,
            err_estimate: alpha.abs() * df.err_estimate,
        })
    }

    /// Both product-rule forms:
    /// `f' g + f(j) g'` and `f g' + f' g(j)`, where `j` is the jump of `t`.
    pub fn product<F, G>(&self, f: &F, g: &G, t: f64) -> Result<(f64, f64)>
    where
        F: Fn(f64) -> f64 + ?Sized,
        G: Fn(f64) -> f64 + ?Sized,
    {
        let (s, j) = self.point(t)?;
        let df = self.direct(f, s)?.value;
        let dg = self.direct(g, s)?.value;
        let form1 = df * g(s) + f(j) * dg;
        let form2 = f(s) * dg + df * g(j);
        Ok((form1, form2))
    }

    /// `(f' g - f g') / (g g(j))`.
    pub fn quotient<F, G>(&self, f: &F, g: &G, t: f64) -> Result<f64>
    where
        F: Fn(f64) -> f64 + ?Sized,
        G: Fn(f64) -> f64 + ?Sized,
    {
        let (s, j) = self.point(t)?;
        let (gs, gj) = (g(s), g(j));
        let denominator = gs * gj;
        self.guard(s, denominator, (gs * gs).max(gj * gj))?;
        let df = self.direct(f, s)?.value;
        let dg = self.direct(g, s)?.value;
        Ok((df * gs - f(s) * dg) / denominator)
    }

    /// `(f^n)' = f' * sum_{k=1..n} f^(n-k) f(j)^(k-1)` for `n >= 1`.
    pub fn power<F: Fn(f64) -> f64 + ?Sized>(&self, f: &F, n: u32, t: f64) -> Result<f64> {
        if n == 0 {
            return Err(Error::BadParameter("power rule needs n >= 1".into()));
        }
        let (s, j) = self.point(t)?;
        let df = self.direct(f, s)?.value;
        let (fs, fj) = (f(s), f(j));
        let sum: f64 = (1..=n)
            .map(|k| fs.powi((n - k) as i32) * fj.powi(k as i32 - 1))
            .sum();
        Ok(df * sum)
    }

    /// `(f^-n)' = -(f^n)' / (f^n f(j)^n)`, guarded on `f(t) f(j) != 0`.
    pub fn neg_power<F: Fn(f64) -> f64 + ?Sized>(&self, f: &F, n: u32, t: f64) -> Result<f64> {
        let (s, j) = self.point(t)?;
        let (fs, fj) = (f(s), f(j));
        self.guard(s, fs * fj, (fs * fs).max(fj * fj))?;
        let dpow = self.power(f, n, s)?;
        Ok(-dpow / (fs.powi(n as i32) * fj.powi(n as i32)))
    }
}
