//! Text syntax for time scales.
//!
//! ```text
//! scale  := term (("U" | "∪") term)*
//! term   := number | "{" number ("," number)* "}" | "[" number "," number "]"
//!         | gen "@" "[" number "," number "]"
//! gen    := "Z" | "hZ(" number ")" | "qZ(" number ")" | "P(" number "," number ")" | "R"
//! number := ["-"] digits ["." digits] [("e" | "E") ["-"] digits] ["/" unsigned]
//! ```
//!
//! Example: `{0} U [1,3] U {4,5} U [8,9] U 11`.

use std::fmt::Write as _;

use tempora::{Component, ScaleGenerator, TimeScale};

use crate::cursor::{Cursor, ParseError};

#[derive(Debug, Clone, PartialEq)]
pub enum Term {
    Points(Vec<f64>),
    Interval(f64, f64),
    Generated {
        gen: ScaleGenerator,
        lo: f64,
        hi: f64,
    },
}

/// Parsed but not yet materialized scale text.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleExpr {
    pub terms: Vec<Term>,
}

impl ScaleExpr {
    pub fn parse(text: &str) -> Result<ScaleExpr, ParseError> {
        let mut c = Cursor::new(text);
        let mut terms = vec![term(&mut c)?];
        while c.eat('U') || c.eat('∪') {
            terms.push(term(&mut c)?);
        }
        if !c.at_end() {
            return Err(c.error(&["`U`", "end of input"]));
        }
        Ok(ScaleExpr { terms })
    }

    /// Materializes every term and canonicalizes the union. Generator terms
    /// whose window holds no member contribute nothing.
    pub fn eval(&self) -> tempora::Result<TimeScale> {
        let mut raw = Vec::new();
        for term in &self.terms {
            match term {
                Term::Points(ts) => raw.extend(ts.iter().map(|&t| Component::point(t))),
                Term::Interval(a, b) => raw.push(Component::interval(*a, *b)?),
                Term::Generated { gen, lo, hi } => match TimeScale::materialize(gen, *lo, *hi) {
                    Ok(ts) => raw.extend_from_slice(ts.components()),
                    Err(tempora::Error::EmptyScale) => {}
                    Err(e) => return Err(e),
                },
            }
        }
        TimeScale::canonicalize(raw)
    }

    /// Windows of the generator terms; their edges are artificial boundaries
    /// of the realized scale.
    pub fn windows(&self) -> Vec<(f64, f64)> {
        self.terms
            .iter()
            .filter_map(|t| match t {
                Term::Generated { lo, hi, .. } => Some((*lo, *hi)),
                _ => None,
            })
            .collect()
    }
}

/// Parses and realizes scale text in one go.
pub fn parse_scale(text: &str) -> Result<TimeScale, crate::CliError> {
    let expr = ScaleExpr::parse(text)?;
    Ok(expr.eval()?)
}

fn term(c: &mut Cursor) -> Result<Term, ParseError> {
    match c.peek() {
        Some('{') => {
            c.eat('{');
            let mut pts = vec![c.number()?];
            while c.eat(',') {
                pts.push(c.number()?);
            }
            c.expect('}')?;
            Ok(Term::Points(pts))
        }
        Some('[') => {
            let (a, b) = bounds(c)?;
            Ok(Term::Interval(a, b))
        }
        Some(ch) if ch.is_ascii_digit() || ch == '.' || ch == '-' || ch == '+' => {
            Ok(Term::Points(vec![c.number()?]))
        }
        Some(ch) if ch.is_ascii_alphabetic() => {
            let at = c.pos();
            let name = c.ident().unwrap_or_default();
            let gen = match name {
                "Z" => ScaleGenerator::Integers,
                "R" => ScaleGenerator::Reals,
                "hZ" => {
                    c.expect('(')?;
                    let h = c.number()?;
                    c.expect(')')?;
                    ScaleGenerator::HStep { h }
                }
                "qZ" => {
                    c.expect('(')?;
                    let q = c.number()?;
                    c.expect(')')?;
                    ScaleGenerator::QPower {
                        q,
                        include_zero: false,
                    }
                }
                "P" => {
                    c.expect('(')?;
                    let a = c.number()?;
                    c.expect(',')?;
                    let b = c.number()?;
                    c.expect(')')?;
                    ScaleGenerator::PeriodicPab { a, b }
                }
                _ => {
                    return Err(ParseError {
                        offset: at,
                        expected: GENERATORS.iter().map(|s| s.to_string()).collect(),
                        found: format!("`{name}`"),
                    })
                }
            };
            c.expect('@')?;
            let (lo, hi) = bounds(c)?;
            Ok(Term::Generated { gen, lo, hi })
        }
        _ => Err(c.error(TERM_START)),
    }
}

const GENERATORS: &[&str] = &["`Z`", "`hZ(`", "`qZ(`", "`P(`", "`R`"];
const TERM_START: &[&str] = &["number", "`{`", "`[`", "`Z`", "`hZ(`", "`qZ(`", "`P(`", "`R`"];

/// `[a, b]` with `a <= b`; a reversed pair is a syntax error at the bracket.
fn bounds(c: &mut Cursor) -> Result<(f64, f64), ParseError> {
    c.skip_ws();
    let open = c.pos();
    c.expect('[')?;
    let a = c.number()?;
    c.expect(',')?;
    let b = c.number()?;
    c.expect(']')?;
    if !(a <= b) {
        return Err(ParseError {
            offset: open,
            expected: vec![format!("interval with lower bound <= upper bound")],
            found: format!("`[{a},{b}]`"),
        });
    }
    Ok((a, b))
}

/// Renders a scale in the text syntax; parsing the result gives back the
/// same scale.
pub fn render(ts: &TimeScale) -> String {
    let mut out = String::new();
    for (i, c) in ts.components().iter().enumerate() {
        if i > 0 {
            out.push_str(" U ");
        }
        match *c {
            Component::Point { t } => write!(out, "{{{t}}}"),
            Component::Interval { a, b } => write!(out, "[{a},{b}]"),
        }
        .expect("writing to a String");
    }
    out
}
