//! Dynamic equations `x^Delta(t) = f(t, x(t))` on a time scale.
//!
//! On a right-scattered point the equation is an exact recursion,
//! `x(sigma(t)) = x(t) + mu(t) f(t, x(t))`. On an interval it is the ordinary
//! differential equation `x' = f(t, x)`, integrated here with the classical
//! fixed-step fourth-order Runge-Kutta method. [`simulate`] walks the scale
//! and picks between the two by looking at the point it stands on.

use std::io::{self, Write};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::timescale::{Component, TimeScale};

/// Steps per interval component when no step size is given.
pub const DEFAULT_STEPS_PER_INTERVAL: usize = 256;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SimOptions {
    /// Fixed step on interval components; defaults to the interval length / 256.
    pub h: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    pub t: f64,
    pub x: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentKind {
    /// One exact recursion step across a gap.
    Scattered,
    /// Runge-Kutta integration along an interval.
    Dense,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub kind: SegmentKind,
    pub t_start: f64,
    pub t_end: f64,
    pub steps: usize,
    /// Step-doubling estimate of the error accumulated on a dense segment;
    /// zero for scattered steps.
    pub error_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub segments: Vec<Segment>,
}

impl Trajectory {
    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }

    pub fn estimated_error(&self) -> f64 {
        self.segments.iter().map(|s| s.error_estimate).sum()
    }

    /// One `{"t": .., "x": [..]}` object per line.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> io::Result<()> {
        for s in &self.samples {
            serde_json::to_writer(&mut out, s)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    /// CSV with header `t,x0,x1,...`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let dim = self.samples.first().map_or(0, |s| s.x.len());
        write!(out, "t")?;
        for i in 0..dim {
            write!(out, ",x{i}")?;
        }
        writeln!(out)?;
        for s in &self.samples {
            write!(out, "{}", s.t)?;
            for v in &s.x {
                write!(out, ",{v}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

fn eval<F>(f: &F, t: f64, x: &[f64]) -> Result<Vec<f64>>
where
    F: Fn(f64, &[f64]) -> Vec<f64> + ?Sized,
{
    let out = f(t, x);
    if out.len() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: out.len(),
        });
    }
    Ok(out)
}

fn check_finite(t: f64, x: &[f64]) -> Result<()> {
    if x.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFiniteState { t })
    }
}

/// One exact step `x(sigma(t)) = x(t) + mu(t) f(t, x(t))` from a
/// right-scattered point.
pub fn step_scattered<F>(scale: &TimeScale, f: &F, t: f64, x: &[f64]) -> Result<(f64, Vec<f64>)>
where
    F: Fn(f64, &[f64]) -> Vec<f64> + ?Sized,
{
    let s = scale.snap(t)?;
    if !scale.in_kappa_upper(s)? {
        return Err(Error::NotInKappa {
            t,
            dir: crate::derivative::Direction::Forward,
        });
    }
    let next = scale.sigma(s)?;
    let mu = next - s;
    if mu == 0.0 {
        return Err(Error::NotScattered { t });
    }
    let dx = eval(f, s, x)?;
    let x_next: Vec<f64> = x.iter().zip(&dx).map(|(xi, di)| xi + mu * di).collect();
    check_finite(next, &x_next)?;
    Ok((next, x_next))
}

fn rk4_step<F>(f: &F, t: f64, x: &[f64], h: f64) -> Result<Vec<f64>>
where
    F: Fn(f64, &[f64]) -> Vec<f64> + ?Sized,
{
    let axpy = |a: f64, k: &[f64]| -> Vec<f64> { x.iter().zip(k).map(|(xi, ki)| xi + a * ki).collect() };
    let k1 = eval(f, t, x)?;
    let k2 = eval(f, t + 0.5 * h, &axpy(0.5 * h, &k1))?;
    let k3 = eval(f, t + 0.5 * h, &axpy(0.5 * h, &k2))?;
    let k4 = eval(f, t + h, &axpy(h, &k3))?;
    Ok((0..x.len())
        .map(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect())
}

/// Grid `t0 = g_0 < g_1 < ... < g_n = t1` with spacing `h` except for a
/// shortened last step.
fn grid(t0: f64, t1: f64, h: f64) -> Vec<f64> {
    let span = t1 - t0;
    let mut n = (span / h).ceil() as usize;
    // a final step shorter than 1e-9 h is folded into the previous one
    if n > 1 && span - (n - 1) as f64 * h <= 1e-9 * h {
        n -= 1;
    }
    let n = n.max(1);
    let mut out: Vec<f64> = (0..n).map(|i| t0 + i as f64 * h).collect();
    out.push(t1);
    out
}

/// Runge-Kutta along `nodes`, returning the states at every node after the first.
fn integrate<F>(f: &F, nodes: &[f64], x0: &[f64]) -> Result<Vec<Vec<f64>>>
where
    F: Fn(f64, &[f64]) -> Vec<f64> + ?Sized,
{
    let mut x = x0.to_vec();
    let mut out = Vec::with_capacity(nodes.len().saturating_sub(1));
    for w in nodes.windows(2) {
        x = rk4_step(f, w[0], &x, w[1] - w[0])?;
        check_finite(w[1], &x)?;
        out.push(x.clone());
    }
    Ok(out)
}

/// Solves `x^Delta = f(t, x)` on `scale` from `(t0, x0)` up to `t_end`.
///
/// Samples include every scattered point and component endpoint crossed,
/// plus the Runge-Kutta grid inside intervals.
pub fn simulate<F>(
    scale: &TimeScale,
    f: &F,
    t0: f64,
    x0: &[f64],
    t_end: f64,
    opts: &SimOptions,
) -> Result<Trajectory>
where
    F: Fn(f64, &[f64]) -> Vec<f64> + ?Sized,
{
    let (mut idx, mut t) = scale.locate(t0).ok_or(Error::NotInScale { t: t0 })?;
    let end = scale.snap(t_end)?;
    if !(t < end) {
        return Err(Error::BadParameter(format!(
            "simulation needs t0 < t_end, got {t0} and {t_end}"
        )));
    }
    if x0.is_empty() {
        return Err(Error::BadParameter("state dimension must be at least 1".into()));
    }
    if let Some(h) = opts.h {
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::BadParameter(format!("step h must be > 0, got {h}")));
        }
    }
    check_finite(t, x0)?;

    let mut traj = Trajectory::default();
    let mut x = x0.to_vec();
    traj.samples.push(Sample { t, x: x.clone() });

    while t < end {
        let comp = scale.components()[idx];
        match comp {
            Component::Interval { a, b } if t < b => {
                let stop = b.min(end);
                let h = opts.h.unwrap_or((b - a) / DEFAULT_STEPS_PER_INTERVAL as f64);
                let nodes = grid(t, stop, h);
                let states = integrate(f, &nodes, &x)?;
                let coarse: Vec<f64> = grid(t, stop, 2.0 * h);
                let coarse_end = integrate(f, &coarse, &x)?.pop().unwrap_or_else(|| x.clone());
                let fine_end = states.last().cloned().unwrap_or_else(|| x.clone());
                let error_estimate = fine_end
                    .iter()
                    .zip(&coarse_end)
                    .map(|(p, q)| (p - q).abs())
                    .fold(0.0, f64::max)
                    / 15.0;
                traj.segments.push(Segment {
                    kind: SegmentKind::Dense,
                    t_start: t,
                    t_end: stop,
                    steps: nodes.len() - 1,
                    error_estimate,
                });
                for (tn, xn) in nodes[1..].iter().zip(states) {
                    traj.samples.push(Sample { t: *tn, x: xn });
                }
                t = stop;
                x = fine_end;
            }
            _ => {
                let (next, x_next) = step_scattered(scale, f, t, &x)?;
                traj.segments.push(Segment {
                    kind: SegmentKind::Scattered,
                    t_start: t,
                    t_end: next,
                    steps: 1,
                    error_estimate: 0.0,
                });
                t = next;
                idx += 1;
                x = x_next;
                traj.samples.push(Sample { t, x: x.clone() });
            }
        }
    }
    Ok(traj)
}
