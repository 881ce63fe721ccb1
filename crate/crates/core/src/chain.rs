//! Chain rules for compositions `f(g(t))` on a time scale.
//!
//! The classical rule `(f o g)' = f'(g) g'` fails on scattered points. Three
//! working replacements are provided, each checkable against the direct
//! delta derivative of the composition:
//!
//! - a mean-value form, `f'(g(c)) g^Delta(t)` for some `c` in `[t, sigma(t)]`;
//! - an integral form, `g^Delta(t) * int_0^1 f'(g(t) + xi mu(t) g^Delta(t)) dxi`;
//! - a substitution form on the image scale `g(T)` of a strictly increasing `g`.

use crate::derivative::{delta_derivative, derivative, DerivOptions, Direction};
use crate::error::{Error, Result};
use crate::quadrature::adaptive_simpson;
use crate::timescale::{Component, TimeScale};

const SIMPSON_TOL: f64 = 1e-10;
const SIMPSON_DEPTH: u32 = 30;
const ROOT_SUBDIVISIONS: usize = 64;
const ROOT_WIDTH: f64 = 1e-12;
const SLOPE_GUARD: f64 = 1e-12;
const MONOTONE_PROBES: usize = 16;

fn delta_value<F: Fn(f64) -> f64 + ?Sized>(scale: &TimeScale, f: &F, t: f64) -> Result<f64> {
    Ok(delta_derivative(scale, f, t)?.into_estimate(t)?.value)
}

/// The true composite derivative and the naive classical product
/// `f^Delta(g(t)) g^Delta(t)`, both taken on `scale`.
pub fn chain_counterexample_check<F, G>(scale: &TimeScale, f: &F, g: &G, t: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64 + ?Sized,
    G: Fn(f64) -> f64 + ?Sized,
{
    let composite = |s: f64| f(g(s));
    let lhs = delta_value(scale, &composite, t)?;
    let dg = delta_value(scale, g, t)?;
    let s = scale.snap(t)?;
    let naive = delta_value(scale, f, g(s))? * dg;
    Ok((lhs, naive))
}

/// Finds `c` in `[t, sigma(t)]` with `f'(g(c)) g^Delta(t) = (f o g)^Delta(t)`.
///
/// The residual is scanned on 64 equal panels and the first bracketing panel
/// is bisected, so the smallest root wins when several exist. A node whose
/// residual is already within `1e-9 (1 + |lhs|)` is returned directly, which
/// covers the degenerate case of a constant `f'`. At a right-dense point
/// `c = t`.
pub fn chain_mvt_find_c<F, D, G>(scale: &TimeScale, f: &F, fprime: &D, g: &G, t: f64) -> Result<f64>
where
    F: Fn(f64) -> f64 + ?Sized,
    D: Fn(f64) -> f64 + ?Sized,
    G: Fn(f64) -> f64 + ?Sized,
{
    let s = scale.snap(t)?;
    let dg = delta_value(scale, g, s)?;
    if dg.abs() <= SLOPE_GUARD {
        return Err(Error::ZeroSlope { t: s, slope: dg });
    }
    let sigma = scale.sigma(s)?;
    if sigma == s {
        return Ok(s);
    }
    let composite = |x: f64| f(g(x));
    let lhs = delta_value(scale, &composite, s)?;
    let residual = |c: f64| fprime(g(c)) * dg - lhs;

    // a node already inside the residual bound is accepted as is
    let tol = 1e-9 * (1.0 + lhs.abs());
    let node = |k: usize| s + (sigma - s) * k as f64 / ROOT_SUBDIVISIONS as f64;
    let mut lo = s;
    let mut r_lo = residual(lo);
    if r_lo.abs() <= tol {
        return Ok(lo);
    }
    for k in 1..=ROOT_SUBDIVISIONS {
        let hi = node(k);
        let r_hi = residual(hi);
        if r_hi.abs() <= tol {
            return Ok(hi);
        }
        if r_lo.signum() != r_hi.signum() {
            return Ok(bisect(&residual, lo, hi, r_lo));
        }
        lo = hi;
        r_lo = r_hi;
    }
    Err(Error::NoRoot { lo: s, hi: sigma })
}

fn bisect(r: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut r_lo: f64) -> f64 {
    while hi - lo > ROOT_WIDTH {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let r_mid = r(mid);
        if r_mid == 0.0 {
            return mid;
        }
        if r_mid.signum() == r_lo.signum() {
            lo = mid;
            r_lo = r_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `g^Delta(t) * int_0^1 f'(g(t) + xi mu(t) g^Delta(t)) dxi`.
pub fn chain_integral<D, G>(scale: &TimeScale, fprime: &D, g: &G, t: f64) -> Result<f64>
where
    D: Fn(f64) -> f64 + ?Sized,
    G: Fn(f64) -> f64 + ?Sized,
{
    let s = scale.snap(t)?;
    let dg = delta_value(scale, g, s)?;
    let mu = scale.mu(s)?;
    let gs = g(s);
    let integrand = |xi: f64| fprime(gs + xi * mu * dg);
    let q = adaptive_simpson(&integrand, 0.0, 1.0, SIMPSON_TOL, SIMPSON_DEPTH);
    Ok(dg * q.value)
}

/// A base scale together with its image under a strictly increasing map.
pub struct DerivedScale<'a, G: ?Sized> {
    pub base: &'a TimeScale,
    pub map: &'a G,
    pub image: TimeScale,
}

impl<G: Fn(f64) -> f64 + ?Sized> DerivedScale<'_, G> {
    /// Inverse of the map on the image, by bisection inside the matching
    /// base component.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        let (idx, y) = self.image.locate(y).ok_or(Error::NotInScale { t: y })?;
        match self.base.components()[idx] {
            Component::Point { t } => Ok(t),
            Component::Interval { a, b } => {
                let (mut lo, mut hi) = (a, b);
                let width = (b - a) * 1e-20;
                while hi - lo > width {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if (self.map)(mid) < y {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                Ok(0.5 * (lo + hi))
            }
        }
    }
}

/// Builds `g(T)` after checking that `g` increases strictly on `T`.
///
/// The check samples component endpoints plus 16 interior probes per
/// interval, so it can miss a violation between probes. Intervals map to the
/// interval between their endpoint images, which presumes `g` is continuous
/// on them.
pub fn derive_scale<'a, G>(base: &'a TimeScale, g: &'a G) -> Result<DerivedScale<'a, G>>
where
    G: Fn(f64) -> f64 + ?Sized,
{
    let mut probes = Vec::new();
    for c in base.components() {
        match *c {
            Component::Point { t } => probes.push(t),
            Component::Interval { a, b } => {
                for k in 0..=MONOTONE_PROBES + 1 {
                    probes.push(a + (b - a) * k as f64 / (MONOTONE_PROBES + 1) as f64);
                }
            }
        }
    }
    for w in probes.windows(2) {
        let (g0, g1) = (g(w[0]), g(w[1]));
        if !(g1 > g0) || !g0.is_finite() || !g1.is_finite() {
            return Err(Error::NotMonotone { s1: w[0], s2: w[1] });
        }
    }
    let mapped: Vec<Component> = base
        .components()
        .iter()
        .map(|c| match *c {
            Component::Point { t } => Component::point(g(t)),
            Component::Interval { a, b } => Component::Interval { a: g(a), b: g(b) },
        })
        .collect();
    let image = TimeScale::canonicalize(mapped)?;
    if image.components().len() != base.components().len() {
        return Err(Error::BadParameter(
            "image components merged; map separates members by less than the membership tolerance"
                .into(),
        ));
    }
    Ok(DerivedScale { base, map: g, image })
}

/// `f^Delta~(g(t)) * g^Delta(t)`, with `f^Delta~` the delta derivative on `g(T)`.
pub fn chain_substitution<F, G>(scale: &TimeScale, f: &F, g: &G, t: f64) -> Result<f64>
where
    F: Fn(f64) -> f64 + ?Sized,
    G: Fn(f64) -> f64 + ?Sized,
{
    let derived = derive_scale(scale, g)?;
    let s = scale.snap(t)?;
    let dg = delta_value(scale, g, s)?;
    let df = delta_value(&derived.image, f, g(s))?;
    Ok(df * dg)
}

/// `(g^-1)^Delta~(g(t))`, which equals `1 / g^Delta(t)` wherever
/// `g^Delta(t) != 0`.
pub fn inverse_derivative<G>(scale: &TimeScale, g: &G, t: f64) -> Result<f64>
where
    G: Fn(f64) -> f64 + ?Sized,
{
    let derived = derive_scale(scale, g)?;
    let s = scale.snap(t)?;
    let dg = delta_value(scale, g, s)?;
    if dg.abs() <= SLOPE_GUARD {
        return Err(Error::ZeroSlope { t: s, slope: dg });
    }
    let inv = |y: f64| derived.inverse(y).unwrap_or(f64::NAN);
    let y = derived.image.snap(g(s))?;
    let opts = DerivOptions::default();
    let d = derivative(&derived.image, &inv, y, Direction::Forward, &opts)?;
    Ok(d.into_estimate(y)?.value)
}
