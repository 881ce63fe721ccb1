//! SVG and ASCII pictures of a scale or of one of its jump/graininess
//! functions.
//!
//! SVG documents are 800×400 and always contain, in this order:
//!
//! 1. a white background `<rect>`;
//! 2. `<g class="axes">` with the horizontal axis line, then (operator plots
//!    only) the vertical axis line;
//! 3. `<g class="labels">` with the title, the x-range labels, then (operator
//!    plots only) the y-range labels;
//! 4. `<g class="graph">` with one group of shapes per component in ascending
//!    order: the segment of an interval, then open circles, then filled
//!    circles.
//!
//! Coordinates carry exactly two decimals, so equal inputs give equal bytes.

use std::fmt::Write as _;

use tempora::{Component, TimeScale};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum PlotWhat {
    Scale,
    Sigma,
    Rho,
    Mu,
    Nu,
}

impl PlotWhat {
    fn name(self) -> &'static str {
        match self {
            PlotWhat::Scale => "scale",
            PlotWhat::Sigma => "sigma",
            PlotWhat::Rho => "rho",
            PlotWhat::Mu => "mu",
            PlotWhat::Nu => "nu",
        }
    }

    fn at(self, ts: &TimeScale, t: f64) -> f64 {
        let v = match self {
            PlotWhat::Scale => Ok(0.0),
            PlotWhat::Sigma => ts.sigma(t),
            PlotWhat::Rho => ts.rho(t),
            PlotWhat::Mu => ts.mu(t),
            PlotWhat::Nu => ts.nu(t),
        };
        v.expect("plotted points are members")
    }

    /// Value of the operator at points that are dense on both sides.
    fn dense(self, t: f64) -> f64 {
        match self {
            PlotWhat::Sigma | PlotWhat::Rho => t,
            _ => 0.0,
        }
    }
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 770.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 350.0;

fn padded_range(lo: f64, hi: f64) -> (f64, f64) {
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 1.0, hi + 1.0)
    }
}

fn value_range(ts: &TimeScale, what: PlotWhat) -> (f64, f64) {
    match what {
        PlotWhat::Mu | PlotWhat::Nu => {
            let top = ts
                .components()
                .iter()
                .flat_map(|c| [c.lo(), c.hi()])
                .map(|t| what.at(ts, t))
                .fold(0.0, f64::max);
            (0.0, if top > 0.0 { top } else { 1.0 })
        }
        _ => padded_range(ts.min(), ts.max()),
    }
}

/// A drawable mark: `(t, value, filled)`.
type Dot = (f64, f64, bool);

/// Segment and dots describing `what` over one component.
fn marks(ts: &TimeScale, what: PlotWhat, c: &Component) -> (Option<[(f64, f64); 2]>, Vec<Dot>) {
    match *c {
        Component::Point { t } => (None, vec![(t, what.at(ts, t), true)]),
        Component::Interval { a, b } => {
            let seg = [(a, what.dense(a)), (b, what.dense(b))];
            let mut open = Vec::new();
            let mut filled = Vec::new();
            for e in [a, b] {
                let v = what.at(ts, e);
                if v != what.dense(e) {
                    open.push((e, what.dense(e), false));
                }
                filled.push((e, v, true));
            }
            open.extend(filled);
            (Some(seg), open)
        }
    }
}

pub fn svg(ts: &TimeScale, what: PlotWhat) -> String {
    let (x0, x1) = padded_range(ts.min(), ts.max());
    let (y0, y1) = value_range(ts, what);
    let px = |t: f64| LEFT + (t - x0) / (x1 - x0) * (RIGHT - LEFT);
    let py = |v: f64| match what {
        PlotWhat::Scale => (TOP + BOTTOM) / 2.0,
        _ => BOTTOM - (v - y0) / (y1 - y0) * (BOTTOM - TOP),
    };
    let axis_y = match what {
        PlotWhat::Scale => (TOP + BOTTOM) / 2.0,
        _ => BOTTOM,
    };

    let mut s = String::new();
    let w = &mut s;
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(w, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);

    let _ = writeln!(w, r#"<g class="axes" stroke="gray" stroke-width="1">"#);
    let _ = writeln!(
        w,
        r#"<line x1="{LEFT:.2}" y1="{axis_y:.2}" x2="{RIGHT:.2}" y2="{axis_y:.2}"/>"#
    );
    if what != PlotWhat::Scale {
        let _ = writeln!(
            w,
            r#"<line x1="{LEFT:.2}" y1="{TOP:.2}" x2="{LEFT:.2}" y2="{BOTTOM:.2}"/>"#
        );
    }
    let _ = writeln!(w, "</g>");

    let _ = writeln!(w, r#"<g class="labels" font-family="monospace" font-size="12">"#);
    let _ = writeln!(w, r#"<text x="{:.2}" y="24.00">{}</text>"#, LEFT, what.name());
    let _ = writeln!(
        w,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        px(ts.min()),
        axis_y + 20.0,
        ts.min()
    );
    let _ = writeln!(
        w,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        px(ts.max()),
        axis_y + 20.0,
        ts.max()
    );
    if what != PlotWhat::Scale {
        for v in [y0, y1] {
            let _ = writeln!(
                w,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                LEFT - 6.0,
                py(v) + 4.0,
                v
            );
        }
    }
    let _ = writeln!(w, "</g>");

    let _ = writeln!(w, r#"<g class="graph" stroke="black">"#);
    for c in ts.components() {
        let (seg, dots) = marks(ts, what, c);
        if let Some([(a, va), (b, vb)]) = seg {
            let _ = writeln!(
                w,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke-width="3"/>"#,
                px(a),
                py(va),
                px(b),
                py(vb)
            );
        }
        for (t, v, filled) in dots {
            let fill = if filled { "black" } else { "white" };
            let _ = writeln!(
                w,
                r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="{fill}"/>"#,
                px(t),
                py(v)
            );
        }
    }
    let _ = writeln!(w, "</g>");
    let _ = writeln!(w, "</svg>");
    s
}

const COLS: usize = 64;
const ROWS: usize = 12;

fn column(t: f64, x0: f64, x1: f64) -> usize {
    (((t - x0) / (x1 - x0)) * (COLS - 1) as f64).round() as usize
}

/// One-line strip: `●` for points and interval ends, `━` along intervals.
fn strip(ts: &TimeScale) -> String {
    let (x0, x1) = padded_range(ts.min(), ts.max());
    let mut cells = vec![' '; COLS];
    for c in ts.components() {
        if let Component::Interval { a, b } = *c {
            for cell in &mut cells[column(a, x0, x1)..=column(b, x0, x1)] {
                *cell = '━';
            }
        }
    }
    for c in ts.components() {
        cells[column(c.lo(), x0, x1)] = '●';
        cells[column(c.hi(), x0, x1)] = '●';
    }
    let line: String = cells.into_iter().collect();
    format!("{} {} {}\n", ts.min(), line.trim_end(), ts.max())
}

fn chart(ts: &TimeScale, what: PlotWhat) -> String {
    let (x0, x1) = padded_range(ts.min(), ts.max());
    let (y0, y1) = value_range(ts, what);
    let row = |v: f64| (((y1 - v) / (y1 - y0)) * (ROWS - 1) as f64).round() as usize;
    let mut grid = vec![vec![' '; COLS]; ROWS];

    for c in ts.components() {
        if let Component::Interval { a, b } = *c {
            for col in column(a, x0, x1)..=column(b, x0, x1) {
                let s = (x0 + col as f64 / (COLS - 1) as f64 * (x1 - x0)).clamp(a, b);
                grid[row(what.dense(s))][col] = '·';
            }
        }
    }
    for c in ts.components() {
        for (t, v, filled) in marks(ts, what, c).1 {
            grid[row(v)][column(t, x0, x1)] = if filled { '●' } else { '○' };
        }
    }

    let mut out = format!("{}\n", what.name());
    for (r, cells) in grid.iter().enumerate() {
        let label = match r {
            0 => format!("{y1}"),
            r if r == ROWS - 1 => format!("{y0}"),
            _ => String::new(),
        };
        let line: String = cells.iter().collect();
        let _ = writeln!(out, "{label:>10} │{}", line.trim_end());
    }
    let _ = writeln!(out, "{:>10} └{}", "", "─".repeat(COLS));
    let (lo, hi) = (ts.min().to_string(), ts.max().to_string());
    let gap = COLS.saturating_sub(lo.len() + hi.len()).max(1);
    let _ = writeln!(out, "{:>10}  {lo}{}{hi}", "", " ".repeat(gap));
    out
}

pub fn ascii(ts: &TimeScale, what: PlotWhat) -> String {
    match what {
        PlotWhat::Scale => strip(ts),
        _ => chart(ts, what),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_scale;

    fn running() -> TimeScale {
        parse_scale("{0} U [1,3] U {4} U {5} U [8,9] U {11}").unwrap()
    }

    #[test]
    fn strip_marks_points_and_intervals() {
        let s = ascii(&running(), PlotWhat::Scale);
        assert_eq!(s.lines().count(), 1);
        assert!(s.starts_with("0 ●"));
        assert!(s.trim_end().ends_with("● 11"));
        assert_eq!(s.matches('●').count(), 8);
        assert!(s.contains("●━━━"));
    }

    #[test]
    fn mu_chart_has_spikes_at_right_endpoints() {
        let ts = parse_scale("P(1,1) @[0,5]").unwrap();
        let s = ascii(&ts, PlotWhat::Mu);
        let lines: Vec<&str> = s.lines().collect();
        // title, 12 rows, axis, labels
        assert_eq!(lines.len(), ROWS + 3);
        let top = lines[1];
        let bottom = lines[ROWS];
        assert!(top.starts_with("         1 │"));
        assert_eq!(top.matches('●').count(), 2);
        assert!(bottom.contains('·'));
        assert_eq!(bottom.matches('●').count(), 4);
        assert_eq!(bottom.matches('○').count(), 2);
    }

    #[test]
    fn sigma_svg_is_a_staircase() {
        let ts = parse_scale("P(1,1) @[0,5]").unwrap();
        let s = svg(&ts, PlotWhat::Sigma);
        assert!(s.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"400\""));
        assert_eq!(s.matches("<line").count(), 2 + 3);
        // open circle where the identity leaves off, filled one a gap higher
        assert_eq!(s.matches("r=\"4\" fill=\"white\"").count(), 2);
        let px = |t: f64| LEFT + t / 5.0 * (RIGHT - LEFT);
        let py = |v: f64| BOTTOM - v / 5.0 * (BOTTOM - TOP);
        assert!(s.contains(&format!(
            r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="white"/>"#,
            px(1.0),
            py(1.0)
        )));
        assert!(s.contains(&format!(
            r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="black"/>"#,
            px(1.0),
            py(2.0)
        )));
        let order: Vec<usize> = ["<rect", "class=\"axes\"", "class=\"labels\"", "class=\"graph\""]
            .iter()
            .map(|k| s.find(k).unwrap())
            .collect();
        assert!(order.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn single_point_scales_plot() {
        let ts = parse_scale("{2}").unwrap();
        assert_eq!(ascii(&ts, PlotWhat::Scale).matches('●').count(), 1);
        assert!(svg(&ts, PlotWhat::Nu).contains("<circle"));
        assert!(ascii(&ts, PlotWhat::Rho).contains('●'));
    }

    #[test]
    fn output_is_deterministic() {
        let ts = running();
        for what in [PlotWhat::Scale, PlotWhat::Sigma, PlotWhat::Rho, PlotWhat::Mu, PlotWhat::Nu] {
            assert_eq!(svg(&ts, what), svg(&ts, what));
            assert_eq!(ascii(&ts, what), ascii(&ts, what));
        }
    }
}
