//! Arithmetic expressions over `t` (and state variables `x`, `x0`, `x1`, ...).
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := "-" unary | power
//! power  := atom ("^" unary)?
//! atom   := number | "t" | "x" | "x<k>" | "pi" | "e"
//!         | func "(" expr ")" | "(" expr ")"
//! func   := sin | cos | exp | ln | abs | sqrt
//! ```

use std::cell::RefCell;
use std::fmt;

use crate::cursor::{Cursor, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Ln,
    Abs,
    Sqrt,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "abs" => Func::Abs,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Time,
    State(usize),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum EvalError {
    DivisionByZero { at: f64 },
    LogDomain { arg: f64 },
    SqrtDomain { arg: f64 },
    PowDomain { base: f64, exp: f64 },
    MissingState { index: usize, dim: usize },
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::DivisionByZero { at } => write!(f, "division by zero at t = {at}"),
            EvalError::LogDomain { arg } => write!(f, "ln of non-positive value {arg}"),
            EvalError::SqrtDomain { arg } => write!(f, "sqrt of negative value {arg}"),
            EvalError::PowDomain { base, exp } => write!(f, "{base}^{exp} is not real"),
            EvalError::MissingState { index, dim } => {
                write!(f, "x{index} used but the state has dimension {dim}")
            }
        }
    }
}

impl std::error::Error for EvalError {}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr, ParseError> {
        let mut c = Cursor::new(text);
        let e = parse_expr(&mut c)?;
        if !c.at_end() {
            return Err(c.error(&["operator", "end of input"]));
        }
        Ok(e)
    }

    /// Parses `;`-separated components of a vector field.
    pub fn parse_system(text: &str) -> Result<Vec<Expr>, ParseError> {
        let mut c = Cursor::new(text);
        let mut out = vec![parse_expr(&mut c)?];
        while c.eat(';') {
            out.push(parse_expr(&mut c)?);
        }
        if !c.at_end() {
            return Err(c.error(&["operator", "`;`", "end of input"]));
        }
        Ok(out)
    }

    /// Largest state index referenced, if any.
    pub fn max_state(&self) -> Option<usize> {
        match self {
            Expr::Num(_) | Expr::Time => None,
            Expr::State(i) => Some(*i),
            Expr::Neg(e) | Expr::Call(_, e) => e.max_state(),
            Expr::Bin(_, l, r) => l.max_state().max(r.max_state()),
        }
    }

    pub fn eval(&self, t: f64, x: &[f64]) -> Result<f64, EvalError> {
        Ok(match self {
            Expr::Num(v) => *v,
            Expr::Time => t,
            Expr::State(i) => *x.get(*i).ok_or(EvalError::MissingState {
                index: *i,
                dim: x.len(),
            })?,
            Expr::Neg(e) => -e.eval(t, x)?,
            Expr::Call(func, e) => {
                let v = e.eval(t, x)?;
                match func {
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    Func::Exp => v.exp(),
                    Func::Abs => v.abs(),
                    Func::Ln if v > 0.0 => v.ln(),
                    Func::Ln => return Err(EvalError::LogDomain { arg: v }),
                    Func::Sqrt if v >= 0.0 => v.sqrt(),
                    Func::Sqrt => return Err(EvalError::SqrtDomain { arg: v }),
                }
            }
            Expr::Bin(op, l, r) => {
                let (a, b) = (l.eval(t, x)?, r.eval(t, x)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div if b == 0.0 => return Err(EvalError::DivisionByZero { at: t }),
                    BinOp::Div => a / b,
                    BinOp::Pow => power(a, b, t)?,
                }
            }
        })
    }
}

/// Integer exponents go through repeated multiplication so that values on
/// integer grids stay exact.
fn power(base: f64, exp: f64, t: f64) -> Result<f64, EvalError> {
    if exp.fract() == 0.0 && exp.abs() <= 64.0 {
        if base == 0.0 && exp < 0.0 {
            return Err(EvalError::DivisionByZero { at: t });
        }
        return Ok(base.powi(exp as i32));
    }
    if base < 0.0 {
        return Err(EvalError::PowDomain { base, exp });
    }
    if base == 0.0 && exp < 0.0 {
        return Err(EvalError::DivisionByZero { at: t });
    }
    Ok(base.powf(exp))
}

fn parse_expr(c: &mut Cursor) -> Result<Expr, ParseError> {
    let mut lhs = parse_term(c)?;
    loop {
        let op = if c.eat('+') {
            BinOp::Add
        } else if c.eat('-') {
            BinOp::Sub
        } else {
            return Ok(lhs);
        };
        let rhs = parse_term(c)?;
        lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
    }
}

fn parse_term(c: &mut Cursor) -> Result<Expr, ParseError> {
    let mut lhs = parse_unary(c)?;
    loop {
        let op = if c.eat('*') {
            BinOp::Mul
        } else if c.eat('/') {
            BinOp::Div
        } else {
            return Ok(lhs);
        };
        let rhs = parse_unary(c)?;
        lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
    }
}

fn parse_unary(c: &mut Cursor) -> Result<Expr, ParseError> {
    if c.eat('-') {
        return Ok(Expr::Neg(Box::new(parse_unary(c)?)));
    }
    parse_power(c)
}

fn parse_power(c: &mut Cursor) -> Result<Expr, ParseError> {
    let base = parse_atom(c)?;
    if c.eat('^') {
        let exp = parse_unary(c)?;
        return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
    }
    Ok(base)
}

const ATOM_EXPECTED: &[&str] = &["number", "`t`", "`x`", "function", "`(`", "`-`"];

fn parse_atom(c: &mut Cursor) -> Result<Expr, ParseError> {
    match c.peek() {
        Some('(') => {
            c.eat('(');
            let e = parse_expr(c)?;
            c.expect(')')?;
            Ok(e)
        }
        Some(ch) if ch.is_ascii_digit() || ch == '.' => Ok(Expr::Num(c.unsigned()?)),
        Some(ch) if ch.is_ascii_alphabetic() => {
            let at = c.pos();
            let name = c.ident().unwrap_or_default();
            match name {
                "t" => Ok(Expr::Time),
                "x" => Ok(Expr::State(0)),
                "pi" => Ok(Expr::Num(std::f64::consts::PI)),
                "e" => Ok(Expr::Num(std::f64::consts::E)),
                _ => {
                    if let Some(idx) = name.strip_prefix('x').and_then(|d| d.parse().ok()) {
                        return Ok(Expr::State(idx));
                    }
                    let Some(func) = Func::from_name(name) else {
                        return Err(ParseError {
                            offset: at,
                            expected: ATOM_EXPECTED.iter().map(|s| s.to_string()).collect(),
                            found: format!("`{name}`"),
                        });
                    };
                    c.expect('(')?;
                    let arg = parse_expr(c)?;
                    c.expect(')')?;
                    Ok(Expr::Call(func, Box::new(arg)))
                }
            }
        }
        _ => Err(c.error(ATOM_EXPECTED)),
    }
}

/// Adapts an expression in `t` to a plain `f64 -> f64` closure. Evaluation
/// failures yield `NaN` and the first one is kept for reporting.
pub struct ScalarFn<'a> {
    expr: &'a Expr,
    fault: RefCell<Option<EvalError>>,
}

impl<'a> ScalarFn<'a> {
    pub fn new(expr: &'a Expr) -> Self {
        ScalarFn {
            expr,
            fault: RefCell::new(None),
        }
    }

    pub fn call(&self, t: f64) -> f64 {
        match self.expr.eval(t, &[]) {
            Ok(v) => v,
            Err(e) => {
                self.fault.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    }

    pub fn take_fault(&self) -> Option<EvalError> {
        self.fault.borrow_mut().take()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(text: &str, t: f64) -> f64 {
        Expr::parse(text).unwrap().eval(t, &[]).unwrap()
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(ev("1 + 2 * 3", 0.0), 7.0);
        assert_eq!(ev("(1 + 2) * 3", 0.0), 9.0);
        assert_eq!(ev("2 ^ 3 ^ 2", 0.0), 512.0);
        assert_eq!(ev("-t^2", 3.0), -9.0);
        assert_eq!(ev("2^-1", 0.0), 0.5);
        assert_eq!(ev("8 / 4 / 2", 0.0), 1.0);
        assert_eq!(ev("10 - 3 - 2", 0.0), 5.0);
        assert_eq!(ev("t^3", 3.0), 27.0);
        assert_eq!(ev("1e2 * t", 0.5), 50.0);
    }

    #[test]
    fn functions_and_constants() {
        assert!((ev("sin(pi/2) + cos(0)", 0.0) - 2.0).abs() < 1e-15);
        assert_eq!(ev("exp(0) + ln(e)", 0.0), 2.0);
        assert_eq!(ev("abs(t)", -4.0), 4.0);
        assert_eq!(ev("sqrt(t)", 16.0), 4.0);
    }

    #[test]
    fn evaluation_errors() {
        let e = Expr::parse("1/t").unwrap();
        assert_eq!(e.eval(0.0, &[]), Err(EvalError::DivisionByZero { at: 0.0 }));
        let e = Expr::parse("ln(t)").unwrap();
        assert!(matches!(e.eval(-1.0, &[]), Err(EvalError::LogDomain { .. })));
        let e = Expr::parse("t^0.5").unwrap();
        assert!(matches!(e.eval(-1.0, &[]), Err(EvalError::PowDomain { .. })));
        let e = Expr::parse("x1").unwrap();
        assert!(matches!(e.eval(0.0, &[1.0]), Err(EvalError::MissingState { .. })));
    }

    #[test]
    fn parse_errors_carry_offsets() {
        let e = Expr::parse("t + * 2").unwrap_err();
        assert_eq!(e.offset, 4);
        assert!(e.expected.contains(&"number".to_string()));
        let e = Expr::parse("foo(t)").unwrap_err();
        assert_eq!(e.offset, 0);
        let e = Expr::parse("sin(t").unwrap_err();
        assert_eq!(e.offset, 5);
        assert_eq!(e.found, "end of input");
        assert!(Expr::parse("t t").is_err());
    }

    #[test]
    fn systems() {
        let sys = Expr::parse_system("x1; -x0").unwrap();
        assert_eq!(sys.len(), 2);
        assert_eq!(sys[1].eval(0.0, &[2.0, 3.0]), Ok(-2.0));
        assert_eq!(sys[0].max_state(), Some(1));
    }

    #[test]
    fn scalar_adapter_records_faults() {
        let e = Expr::parse("1/t").unwrap();
        let f = ScalarFn::new(&e);
        assert_eq!(f.call(2.0), 0.5);
        assert!(f.call(0.0).is_nan());
        assert_eq!(f.take_fault(), Some(EvalError::DivisionByZero { at: 0.0 }));
        assert_eq!(f.take_fault(), None);
    }
}
