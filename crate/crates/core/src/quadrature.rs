//! Adaptive Simpson quadrature.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error_estimate: f64,
    /// Set when some panel hit the depth limit before meeting its tolerance.
    pub depth_exhausted: bool,
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`, splitting at
/// most `max_depth` times along any branch.
pub fn adaptive_simpson<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
) -> Quadrature {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    let mut out = Quadrature {
        value: 0.0,
        error_estimate: 0.0,
        depth_exhausted: false,
    };
    out.value = recurse(f, Panel { a, b, fa, fm, fb, whole }, tol, max_depth, &mut out);
    out
}

#[derive(Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

fn recurse<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    p: Panel,
    tol: f64,
    depth: u32,
    acc: &mut Quadrature,
) -> f64 {
    let m = 0.5 * (p.a + p.b);
    let lm = 0.5 * (p.a + m);
    let rm = 0.5 * (m + p.b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(p.a, m, p.fa, flm, p.fm);
    let right = simpson(m, p.b, p.fm, frm, p.fb);
    let delta = left + right - p.whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        if depth == 0 && delta.abs() > 15.0 * tol {
            acc.depth_exhausted = true;
        }
        acc.error_estimate += delta.abs() / 15.0;
        return left + right + delta / 15.0;
    }
    let lp = Panel { a: p.a, b: m, fa: p.fa, fm: flm, fb: p.fm, whole: left };
    let rp = Panel { a: m, b: p.b, fa: p.fm, fm: frm, fb: p.fb, whole: right };
    recurse(f, lp, 0.5 * tol, depth - 1, acc) + recurse(f, rp, 0.5 * tol, depth - 1, acc)
}
