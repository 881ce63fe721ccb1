//! Bounded time scales stored as a canonical list of closed components.
//!
//! A [`TimeScale`] is a nonempty, finite union of isolated points and closed
//! intervals, kept sorted, pairwise disjoint and with no two components
//! touching. Every query point is resolved against the scale with a relative
//! membership tolerance of [`MEMBERSHIP_RTOL`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance used for membership tests and snapping.
pub const MEMBERSHIP_RTOL: f64 = 1e-9;

/// Points to keep below the window top when `q^Z` reaches down to `0`.
const QPOWER_ZERO_DEPTH: i32 = 64;

/// Smallest positive power kept next to `0`; anything closer would be
/// absorbed into `0` by the membership tolerance.
const QPOWER_ZERO_FLOOR: f64 = 1e-6;

/// Upper bound on the number of points a generator may materialize.
const MAX_GENERATED_POINTS: i64 = 10_000_000;

/// Membership tolerance at `t`: `1e-9 * max(1, |t|)`.
pub fn membership_tol(t: f64) -> f64 {
    MEMBERSHIP_RTOL * t.abs().max(1.0)
}

/// A closed building block of a time scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Component {
    Point { t: f64 },
    Interval { a: f64, b: f64 },
}

impl Component {
    pub fn point(t: f64) -> Component {
        Component::Point { t }
    }

    /// Builds `[a, b]`, collapsing `a == b` to a point.
    pub fn interval(a: f64, b: f64) -> Result<Component> {
        Component::Interval { a, b }.normalized()
    }

    pub fn lo(&self) -> f64 {
        match *self {
            Component::Point { t } => t,
            Component::Interval { a, .. } => a,
        }
    }

    pub fn hi(&self) -> f64 {
        match *self {
            Component::Point { t } => t,
            Component::Interval { b, .. } => b,
        }
    }

    pub fn is_point(&self) -> bool {
        matches!(self, Component::Point { .. })
    }

    fn normalized(self) -> Result<Component> {
        match self {
            Component::Point { t } => {
                if !t.is_finite() {
                    return Err(Error::NonFinite(t));
                }
                Ok(self)
            }
            Component::Interval { a, b } => {
                for v in [a, b] {
                    if !v.is_finite() {
                        return Err(Error::NonFinite(v));
                    }
                }
                if a > b {
                    Err(Error::BadParameter(format!(
                        "interval [{a}, {b}] needs a < b"
                    )))
                } else if a == b {
                    Ok(Component::Point { t: a })
                } else {
                    Ok(self)
                }
            }
        }
    }

    fn from_bounds(lo: f64, hi: f64) -> Component {
        if lo < hi {
            Component::Interval { a: lo, b: hi }
        } else {
            Component::Point { t: lo }
        }
    }

    /// Distance from `t` to the component (zero inside).
    fn distance(&self, t: f64) -> f64 {
        if t < self.lo() {
            self.lo() - t
        } else if t > self.hi() {
            t - self.hi()
        } else {
            0.0
        }
    }

    fn clamp(&self, t: f64) -> f64 {
        t.clamp(self.lo(), self.hi())
    }
}

/// Density of one side of a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Density {
    Dense,
    Scattered,
}

/// Left/right classification of a point of a time scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PointClass {
    pub left: Density,
    pub right: Density,
}

impl PointClass {
    pub fn is_dense(&self) -> bool {
        self.left == Density::Dense && self.right == Density::Dense
    }

    pub fn is_isolated(&self) -> bool {
        self.left == Density::Scattered && self.right == Density::Scattered
    }

    pub fn label(&self) -> &'static str {
        match (self.left, self.right) {
            (Density::Dense, Density::Dense) => "dense",
            (Density::Scattered, Density::Scattered) => "isolated",
            (Density::Dense, Density::Scattered) => "left-dense, right-scattered",
            (Density::Scattered, Density::Dense) => "left-scattered, right-dense",
        }
    }
}

impl fmt::Display for PointClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// The named families of time scales that can be realized over a window.
#[derive(Debug, Clone, PartialEq)]
pub enum ScaleGenerator {
    /// The real line.
    Reals,
    /// The integers.
    Integers,
    /// `hZ = {hk : k in Z}` with `h > 0`.
    HStep { h: f64 },
    /// `q^Z = {q^k : k in Z}` with `q > 1`; the accumulation point `0` is only
    /// added on request, and then the truncated set misreports it as isolated.
    QPower { q: f64, include_zero: bool },
    /// `P_{a,b}`: the intervals `[k(a+b), k(a+b)+a]` for `k = 0, 1, 2, ...`.
    PeriodicPab { a: f64, b: f64 },
    /// An arbitrary list of components.
    Explicit(Vec<Component>),
}

impl ScaleGenerator {
    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::BadParameter(msg));
        match *self {
            ScaleGenerator::HStep { h } if !(h.is_finite() && h > 0.0) => {
                bad(format!("hZ needs h > 0, got {h}"))
            }
            ScaleGenerator::QPower { q, .. } if !(q.is_finite() && q > 1.0) => {
                bad(format!("qZ needs q > 1, got {q}"))
            }
            ScaleGenerator::PeriodicPab { a, b }
                if !(a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0) =>
            {
                bad(format!("P(a,b) needs a, b > 0, got a = {a}, b = {b}"))
            }
            _ => Ok(()),
        }
    }
}

/// A nonempty canonical finite union of closed components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScaleRepr", into = "ScaleRepr")]
pub struct TimeScale {
    components: Vec<Component>,
}

#[derive(Serialize, Deserialize)]
struct ScaleRepr {
    components: Vec<Component>,
}

impl TryFrom<ScaleRepr> for TimeScale {
    type Error = Error;

    fn try_from(repr: ScaleRepr) -> Result<Self> {
        TimeScale::canonicalize(repr.components)
    }
}

impl From<TimeScale> for ScaleRepr {
    fn from(ts: TimeScale) -> Self {
        ScaleRepr {
            components: ts.components,
        }
    }
}

impl TimeScale {
    /// Sorts and merges `raw` into the unique canonical scale with the same
    /// point set. Components closer than the membership tolerance are merged.
    pub fn canonicalize(raw: impl IntoIterator<Item = Component>) -> Result<TimeScale> {
        let mut comps = raw
            .into_iter()
            .map(Component::normalized)
            .collect::<Result<Vec<_>>>()?;
        if comps.is_empty() {
            return Err(Error::EmptyScale);
        }
        comps.sort_by(|x, y| x.lo().total_cmp(&y.lo()).then(x.hi().total_cmp(&y.hi())));

        let mut merged: Vec<Component> = Vec::with_capacity(comps.len());
        let (mut lo, mut hi) = (comps[0].lo(), comps[0].hi());
        for c in &comps[1..] {
            if c.lo() <= hi + membership_tol(hi) {
                hi = hi.max(c.hi());
            } else {
                merged.push(Component::from_bounds(lo, hi));
                lo = c.lo();
                hi = c.hi();
            }
        }
        merged.push(Component::from_bounds(lo, hi));
        Ok(TimeScale { components: merged })
    }

    /// Realizes `gen` intersected with the window `[lo, hi]`.
    pub fn materialize(gen: &ScaleGenerator, lo: f64, hi: f64) -> Result<TimeScale> {
        for v in [lo, hi] {
            if !v.is_finite() {
                return Err(Error::NonFinite(v));
            }
        }
        if lo >= hi {
            return Err(Error::BadParameter(format!(
                "window [{lo}, {hi}] needs lo < hi"
            )));
        }
        gen.validate()?;

        let raw: Vec<Component> = match gen {
            ScaleGenerator::Reals => vec![Component::Interval { a: lo, b: hi }],
            ScaleGenerator::Integers => lattice(1.0, lo, hi)?,
            ScaleGenerator::HStep { h } => lattice(*h, lo, hi)?,
            ScaleGenerator::QPower { q, include_zero } => q_powers(*q, *include_zero, lo, hi)?,
            ScaleGenerator::PeriodicPab { a, b } => {
                let period = a + b;
                let k_lo = (lo / period).floor().max(0.0) as i64;
                let k_hi = (hi / period).floor() as i64;
                if k_hi - k_lo > MAX_GENERATED_POINTS {
                    return Err(Error::BadParameter("window holds too many periods".into()));
                }
                (k_lo..=k_hi.max(k_lo))
                    .map(|k| {
                        let start = k as f64 * period;
                        Component::from_bounds(start, start + a)
                    })
                    .collect()
            }
            ScaleGenerator::Explicit(list) => TimeScale::canonicalize(list.iter().copied())?
                .components
                .clone(),
        };
        restrict(&raw, lo, hi)
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn min(&self) -> f64 {
        self.components[0].lo()
    }

    pub fn max(&self) -> f64 {
        self.components[self.components.len() - 1].hi()
    }

    pub fn is_single_point(&self) -> bool {
        self.components.len() == 1 && self.components[0].is_point()
    }

    /// Index of the component holding `t` and `t` snapped onto it.
    pub fn locate(&self, t: f64) -> Option<(usize, f64)> {
        if !t.is_finite() {
            return None;
        }
        let tol = membership_tol(t);
        let idx = self.components.partition_point(|c| c.lo() <= t);
        let mut best: Option<(usize, f64)> = None;
        for i in [idx.wrapping_sub(1), idx] {
            let Some(c) = self.components.get(i) else {
                continue;
            };
            let d = c.distance(t);
            if d > tol {
                continue;
            }
            match best {
                Some((j, _)) if self.components[j].distance(t) == d => return None,
                Some((j, _)) if self.components[j].distance(t) < d => {}
                _ => best = Some((i, c.clamp(t))),
            }
        }
        best
    }

    pub fn contains(&self, t: f64) -> bool {
        self.locate(t).is_some()
    }

    /// `t` snapped onto the scale, or `NotInScale`.
    pub fn snap(&self, t: f64) -> Result<f64> {
        self.locate(t).map(|(_, s)| s).ok_or(Error::NotInScale { t })
    }

    fn resolve(&self, t: f64) -> Result<(usize, f64)> {
        self.locate(t).ok_or(Error::NotInScale { t })
    }

    /// Forward jump `sigma(t) = inf{s in T : s > t}`, with `sigma(max T) = max T`.
    pub fn sigma(&self, t: f64) -> Result<f64> {
        let (i, s) = self.resolve(t)?;
        Ok(match self.components[i] {
            Component::Interval { b, .. } if s < b => s,
            _ => self.components.get(i + 1).map_or(s, Component::lo),
        })
    }

    /// Backward jump `rho(t) = sup{s in T : s < t}`, with `rho(min T) = min T`.
    pub fn rho(&self, t: f64) -> Result<f64> {
        let (i, s) = self.resolve(t)?;
        Ok(match self.components[i] {
            Component::Interval { a, .. } if s > a => s,
            _ if i > 0 => self.components[i - 1].hi(),
            _ => s,
        })
    }

    /// Forward graininess `mu(t) = sigma(t) - t`.
    pub fn mu(&self, t: f64) -> Result<f64> {
        let s = self.snap(t)?;
        Ok(self.sigma(s)? - s)
    }

    /// Backward graininess `nu(t) = t - rho(t)`.
    pub fn nu(&self, t: f64) -> Result<f64> {
        let s = self.snap(t)?;
        Ok(s - self.rho(s)?)
    }

    pub fn classify(&self, t: f64) -> Result<PointClass> {
        let s = self.snap(t)?;
        let side = |jump: f64| {
            if jump == s {
                Density::Dense
            } else {
                Density::Scattered
            }
        };
        Ok(PointClass {
            left: side(self.rho(s)?),
            right: side(self.sigma(s)?),
        })
    }

    /// Largest member strictly below `t` and smallest member strictly above,
    /// when they exist.
    pub fn neighbors(&self, t: f64) -> (Option<f64>, Option<f64>) {
        let below = self
            .components
            .iter()
            .rev()
            .find(|c| c.lo() < t)
            .map(|c| c.hi().min(t));
        let above = self
            .components
            .iter()
            .find(|c| c.hi() > t)
            .map(|c| c.lo().max(t));
        (below, above)
    }

    /// Whether `t` belongs to `T^kappa`: the scale minus a left-scattered maximum.
    pub fn in_kappa_upper(&self, t: f64) -> Result<bool> {
        let (i, s) = self.resolve(t)?;
        if self.is_single_point() {
            return Ok(false);
        }
        let last = self.components.len() - 1;
        Ok(!(i == last && self.components[last].is_point() && s == self.max()))
    }

    /// Whether `t` belongs to `T_kappa`: the scale minus a right-scattered minimum.
    pub fn in_kappa_lower(&self, t: f64) -> Result<bool> {
        let (i, s) = self.resolve(t)?;
        if self.is_single_point() {
            return Ok(false);
        }
        Ok(!(i == 0 && self.components[0].is_point() && s == self.min()))
    }

    /// `T^kappa`. A single-point scale has no room for a derivative, so its
    /// truncation is reported as empty.
    pub fn kappa_upper(&self) -> Result<TimeScale> {
        if self.is_single_point() {
            return Err(Error::EmptyScale);
        }
        let mut components = self.components.clone();
        if components[components.len() - 1].is_point() {
            components.pop();
        }
        Ok(TimeScale { components })
    }

    /// `T_kappa`, the mirror of [`TimeScale::kappa_upper`].
    pub fn kappa_lower(&self) -> Result<TimeScale> {
        if self.is_single_point() {
            return Err(Error::EmptyScale);
        }
        let mut components = self.components.clone();
        if components[0].is_point() {
            components.remove(0);
        }
        Ok(TimeScale { components })
    }

    /// Every scattered point plus, for each interval, its endpoints and
    /// `per_interval` evenly spaced interior samples.
    pub fn sample(&self, per_interval: usize) -> Vec<f64> {
        let mut out = Vec::new();
        for c in &self.components {
            match *c {
                Component::Point { t } => out.push(t),
                Component::Interval { a, b } => {
                    out.push(a);
                    let n = per_interval + 1;
                    for k in 1..n {
                        out.push(a + (b - a) * k as f64 / n as f64);
                    }
                    out.push(b);
                }
            }
        }
        out
    }
}

fn lattice(h: f64, lo: f64, hi: f64) -> Result<Vec<Component>> {
    let k_lo = (lo / h - 1e-9).ceil();
    let k_hi = (hi / h + 1e-9).floor();
    if k_hi < k_lo {
        return Err(Error::EmptyScale);
    }
    if k_hi - k_lo > MAX_GENERATED_POINTS as f64 {
        return Err(Error::BadParameter(format!(
            "window holds more than {MAX_GENERATED_POINTS} points"
        )));
    }
    let (k_lo, k_hi) = (k_lo as i64, k_hi as i64);
    Ok((k_lo..=k_hi)
        .map(|k| Component::point(k as f64 * h))
        .collect())
}

fn q_powers(q: f64, include_zero: bool, lo: f64, hi: f64) -> Result<Vec<Component>> {
    let mut out = Vec::new();
    if include_zero && lo <= 0.0 && 0.0 <= hi {
        out.push(Component::point(0.0));
    }
    if hi <= 0.0 {
        return Ok(out);
    }
    let ln_q = q.ln();
    let k_hi = (hi.ln() / ln_q).floor() as i64 + 1;
    let k_lo = if lo > 0.0 {
        (lo.ln() / ln_q).ceil() as i64 - 1
    } else if include_zero {
        k_hi - QPOWER_ZERO_DEPTH as i64
    } else {
        return Err(Error::BadParameter(format!(
            "qZ window [{lo}, {hi}] reaches the accumulation point 0; \
             use a positive lower bound"
        )));
    };
    for k in k_lo..=k_hi {
        let v = q.powi(k as i32);
        let above_floor = lo > 0.0 || v >= QPOWER_ZERO_FLOOR;
        if v > 0.0 && v.is_finite() && above_floor {
            out.push(Component::point(v));
        }
    }
    Ok(out)
}

/// Intersects `raw` with `[lo, hi]`, keeping members within tolerance of the
/// window edges.
fn restrict(raw: &[Component], lo: f64, hi: f64) -> Result<TimeScale> {
    let lo_tol = lo - membership_tol(lo);
    let hi_tol = hi + membership_tol(hi);
    let clipped = raw.iter().filter_map(|c| match *c {
        Component::Point { t } => (lo_tol <= t && t <= hi_tol).then_some(*c),
        Component::Interval { a, b } => {
            let (a, b) = (a.max(lo), b.min(hi));
            (a <= b).then(|| Component::from_bounds(a, b))
        }
    });
    TimeScale::canonicalize(clipped.collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn running_scale() -> TimeScale {
        TimeScale::canonicalize([
            Component::point(0.0),
            Component::Interval { a: 1.0, b: 3.0 },
            Component::point(4.0),
            Component::point(5.0),
            Component::Interval { a: 8.0, b: 9.0 },
            Component::point(11.0),
        ])
        .unwrap()
    }

    fn points(ts: &TimeScale) -> Vec<f64> {
        ts.components().iter().map(Component::lo).collect()
    }

    #[test]
    fn point_on_endpoint_is_absorbed() {
        let ts = TimeScale::canonicalize([
            Component::point(4.0),
            Component::Interval { a: 4.0, b: 5.0 },
        ])
        .unwrap();
        assert_eq!(ts.components(), &[Component::Interval { a: 4.0, b: 5.0 }]);
    }

    #[test]
    fn touching_intervals_merge() {
        let ts = TimeScale::canonicalize([
            Component::Interval { a: 2.0, b: 3.0 },
            Component::Interval { a: 1.0, b: 2.0 },
        ])
        .unwrap();
        assert_eq!(ts.components(), &[Component::Interval { a: 1.0, b: 3.0 }]);
    }

    #[test]
    fn canonical_input_is_kept() {
        let ts = running_scale();
        assert_eq!(ts.components().len(), 6);
        let gaps_ok = ts
            .components()
            .windows(2)
            .all(|w| w[0].hi() < w[1].lo());
        assert!(gaps_ok);
    }

    #[test]
    fn canonicalize_errors() {
        assert_eq!(
            TimeScale::canonicalize(Vec::<Component>::new()),
            Err(Error::EmptyScale)
        );
        assert!(matches!(
            TimeScale::canonicalize([Component::point(f64::NAN)]),
            Err(Error::NonFinite(_))
        ));
        assert!(matches!(
            TimeScale::canonicalize([Component::Interval { a: 0.0, b: f64::INFINITY }]),
            Err(Error::NonFinite(_))
        ));
        assert!(matches!(
            Component::interval(3.0, 1.0),
            Err(Error::BadParameter(_))
        ));
        assert_eq!(Component::interval(2.0, 2.0), Ok(Component::point(2.0)));
    }

    #[test]
    fn materialize_examples() {
        let h = TimeScale::materialize(&ScaleGenerator::HStep { h: 0.5 }, 0.0, 1.0).unwrap();
        assert_eq!(points(&h), vec![0.0, 0.5, 1.0]);

        let q = TimeScale::materialize(
            &ScaleGenerator::QPower { q: 2.0, include_zero: false },
            1.0,
            20.0,
        )
        .unwrap();
        assert_eq!(points(&q), vec![1.0, 2.0, 4.0, 8.0, 16.0]);

        let p = TimeScale::materialize(&ScaleGenerator::PeriodicPab { a: 1.0, b: 1.0 }, 0.0, 5.0)
            .unwrap();
        assert_eq!(
            p.components(),
            &[
                Component::Interval { a: 0.0, b: 1.0 },
                Component::Interval { a: 2.0, b: 3.0 },
                Component::Interval { a: 4.0, b: 5.0 },
            ]
        );

        let r = TimeScale::materialize(&ScaleGenerator::Reals, -1.0, 2.0).unwrap();
        assert_eq!(r.components(), &[Component::Interval { a: -1.0, b: 2.0 }]);
    }

    #[test]
    fn materialize_clips_pab_mid_interval() {
        let p = TimeScale::materialize(&ScaleGenerator::PeriodicPab { a: 1.0, b: 1.0 }, 0.5, 4.0)
            .unwrap();
        assert_eq!(
            p.components(),
            &[
                Component::Interval { a: 0.5, b: 1.0 },
                Component::Interval { a: 2.0, b: 3.0 },
                Component::point(4.0),
            ]
        );
    }

    #[test]
    fn materialize_errors() {
        assert!(matches!(
            TimeScale::materialize(&ScaleGenerator::HStep { h: -1.0 }, 0.0, 1.0),
            Err(Error::BadParameter(_))
        ));
        assert!(matches!(
            TimeScale::materialize(&ScaleGenerator::QPower { q: 1.0, include_zero: false }, 1.0, 2.0),
            Err(Error::BadParameter(_))
        ));
        assert!(matches!(
            TimeScale::materialize(&ScaleGenerator::PeriodicPab { a: 0.0, b: 1.0 }, 0.0, 2.0),
            Err(Error::BadParameter(_))
        ));
        assert_eq!(
            TimeScale::materialize(&ScaleGenerator::Integers, 0.2, 0.8),
            Err(Error::EmptyScale)
        );
        assert!(matches!(
            TimeScale::materialize(&ScaleGenerator::Integers, 1.0, 1.0),
            Err(Error::BadParameter(_))
        ));
        assert!(matches!(
            TimeScale::materialize(&ScaleGenerator::QPower { q: 2.0, include_zero: false }, -1.0, 4.0),
            Err(Error::BadParameter(_))
        ));
    }

    #[test]
    fn qpower_with_zero_is_opt_in() {
        let ts = TimeScale::materialize(
            &ScaleGenerator::QPower { q: 2.0, include_zero: true },
            0.0,
            4.0,
        )
        .unwrap();
        assert_eq!(ts.min(), 0.0);
        assert_eq!(ts.max(), 4.0);
        // 2^2 down to 2^-19, the last power above the floor
        assert_eq!(ts.components().len(), 1 + 22);
        assert_eq!(ts.sigma(0.0), Ok(2f64.powi(-19)));
        // the truncated set cannot show that 0 is dense
        assert_eq!(ts.classify(0.0).unwrap().right, Density::Scattered);
    }

    #[test]
    fn lattice_tolerates_float_steps() {
        let ts = TimeScale::materialize(&ScaleGenerator::HStep { h: 0.1 }, 0.0, 0.3).unwrap();
        assert_eq!(ts.components().len(), 4);
    }

    #[test]
    fn membership() {
        let ts = running_scale();
        assert!(ts.contains(2.5));
        assert!(!ts.contains(3.5));
        assert!(ts.contains(11.0));
        assert!(ts.contains(11.0 + 1e-9));
        assert!(!ts.contains(11.0 + 1e-6));
        assert_eq!(ts.snap(3.0 + 1e-10), Ok(3.0));
    }

    #[test]
    fn jump_operators_on_running_scale() {
        let ts = running_scale();
        assert_eq!(ts.sigma(0.0), Ok(1.0));
        assert_eq!(ts.sigma(2.0), Ok(2.0));
        assert_eq!(ts.sigma(5.0), Ok(8.0));
        assert_eq!(ts.sigma(11.0), Ok(11.0));
        assert_eq!(ts.rho(0.0), Ok(0.0));
        assert_eq!(ts.rho(8.0), Ok(5.0));
        assert_eq!(ts.rho(1.0), Ok(0.0));
        assert_eq!(ts.mu(5.0), Ok(3.0));
        assert_eq!(ts.sigma(3.5), Err(Error::NotInScale { t: 3.5 }));
        assert_eq!(ts.nu(7.0), Err(Error::NotInScale { t: 7.0 }));
    }

    #[test]
    fn graininess_on_generated_scales() {
        let q = TimeScale::materialize(
            &ScaleGenerator::QPower { q: 2.0, include_zero: false },
            1.0,
            20.0,
        )
        .unwrap();
        assert_eq!(q.mu(8.0), Ok(8.0));
        assert_eq!(q.nu(8.0), Ok(4.0));

        let z = TimeScale::materialize(&ScaleGenerator::Integers, -5.0, 5.0).unwrap();
        for t in -4..=4 {
            assert_eq!(z.mu(t as f64), Ok(1.0));
            assert_eq!(z.nu(t as f64), Ok(1.0));
        }
    }

    #[test]
    fn classification() {
        let ts = running_scale();
        assert!(ts.classify(4.0).unwrap().is_isolated());
        assert_eq!(
            ts.classify(3.0).unwrap(),
            PointClass { left: Density::Dense, right: Density::Scattered }
        );
        assert_eq!(
            ts.classify(1.0).unwrap(),
            PointClass { left: Density::Scattered, right: Density::Dense }
        );
        assert!(ts.classify(2.0).unwrap().is_dense());
        // conventions at the extremes
        assert_eq!(ts.classify(0.0).unwrap().left, Density::Dense);
        assert_eq!(ts.classify(11.0).unwrap().right, Density::Dense);
    }

    #[test]
    fn gap_midpoint_is_not_snapped() {
        let ts = TimeScale::canonicalize([Component::point(0.0), Component::point(1.0)]).unwrap();
        assert!(!ts.contains(0.5));
    }

    #[test]
    fn kappa_truncations() {
        let ts = running_scale();
        let upper = ts.kappa_upper().unwrap();
        assert_eq!(upper.max(), 9.0);
        assert_eq!(upper.components().len(), 5);

        let unit = TimeScale::materialize(&ScaleGenerator::Reals, 0.0, 1.0).unwrap();
        assert_eq!(unit.kappa_upper().unwrap(), unit);
        assert_eq!(unit.kappa_lower().unwrap(), unit);

        let mixed = TimeScale::canonicalize([
            Component::point(0.0),
            Component::Interval { a: 1.0, b: 2.0 },
        ])
        .unwrap();
        assert_eq!(
            mixed.kappa_lower().unwrap().components(),
            &[Component::Interval { a: 1.0, b: 2.0 }]
        );

        let single = TimeScale::canonicalize([Component::point(3.0)]).unwrap();
        assert_eq!(single.kappa_upper(), Err(Error::EmptyScale));
        assert_eq!(single.kappa_lower(), Err(Error::EmptyScale));
        assert_eq!(single.in_kappa_upper(3.0), Ok(false));
    }

    #[test]
    fn neighbors_of_gap_point() {
        let ts = running_scale();
        assert_eq!(ts.neighbors(3.5), (Some(3.0), Some(4.0)));
        assert_eq!(ts.neighbors(-1.0), (None, Some(0.0)));
    }

    #[test]
    fn json_schema_round_trip() {
        let ts = running_scale();
        let text = serde_json::to_string(&ts).unwrap();
        assert!(text.starts_with(r#"{"components":[{"t":0.0},{"a":1.0,"b":3.0}"#));
        let back: TimeScale = serde_json::from_str(&text).unwrap();
        assert_eq!(back, ts);

        let messy: TimeScale =
            serde_json::from_str(r#"{"components":[{"a":2.0,"b":3.0},{"t":2.0},{"a":1.0,"b":2.0}]}"#)
                .unwrap();
        assert_eq!(messy.components(), &[Component::Interval { a: 1.0, b: 3.0 }]);
        assert!(serde_json::from_str::<TimeScale>(r#"{"components":[]}"#).is_err());
    }
}
