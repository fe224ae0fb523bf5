//! A small expression language for analytic functions of z.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor (('*' | '/') factor)*
//! factor  := unary ('^' factor)?
//! unary   := '-'? primary
//! primary := number | 'i' | 'z' | ident '(' args ')' | '(' expr ')'
//! ```
//!
//! Unary minus applies to a primary, so `-z^2` is (−z)². Functions: sin cos
//! exp log sqrt pow besselj besseljn. Branches are principal.

use crate::analytic::{AnalyticFn, Singularity};
use crate::gosper::bessel_kernel;
use crate::numerics::C64;
use std::fmt;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Pow,
    /// J_ν(z).
    BesselJ,
    /// z^{−ν} J_ν(z).
    BesselJn,
}

impl Func {
    fn from_name(s: &str) -> Option<Func> {
        Some(match s {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "pow" => Func::Pow,
            "besselj" => Func::BesselJ,
            "besseljn" => Func::BesselJn,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Pow => "pow",
            Func::BesselJ => "besselj",
            Func::BesselJn => "besseljn",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Func::Pow | Func::BesselJ | Func::BesselJn => 2,
            _ => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    I,
    Z,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {msg}")]
    Syntax { offset: usize, msg: String },
    #[error("unknown identifier '{name}' at offset {offset}")]
    UnknownIdent { offset: usize, name: String },
    #[error("{name} takes {expected} argument(s), got {got} (offset {offset})")]
    Arity { offset: usize, name: String, expected: usize, got: usize },
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { offset: self.pos, msg: msg.into() })
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(b'/') => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.unary()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exp = self.factor()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.primary()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            None => self.err("unexpected end of input"),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
                match name {
                    "z" => return Ok(Expr::Z),
                    "i" => return Ok(Expr::I),
                    _ => {}
                }
                let Some(func) = Func::from_name(name) else {
                    return Err(ParseError::UnknownIdent { offset: start, name: name.to_string() });
                };
                self.expect(b'(')?;
                let mut args = vec![self.expr()?];
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    args.push(self.expr()?);
                }
                self.expect(b')')?;
                if args.len() != func.arity() {
                    return Err(ParseError::Arity {
                        offset: start,
                        name: name.to_string(),
                        expected: func.arity(),
                        got: args.len(),
                    });
                }
                Ok(Expr::Call(func, args))
            }
            Some(c) => self.err(format!("unexpected '{}'", c as char)),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let s = self.src;
        let digits = |p: &mut usize| {
            let b = *p;
            while *p < s.len() && s[*p].is_ascii_digit() {
                *p += 1;
            }
            *p - b
        };
        let mut p = self.pos;
        let mut n = digits(&mut p);
        if p < s.len() && s[p] == b'.' {
            p += 1;
            n += digits(&mut p);
        }
        if n == 0 {
            self.pos = start;
            return self.err("malformed number");
        }
        if p < s.len() && (s[p] == b'e' || s[p] == b'E') {
            let mut q = p + 1;
            if q < s.len() && (s[q] == b'+' || s[q] == b'-') {
                q += 1;
            }
            if digits(&mut q) > 0 {
                p = q;
            }
        }
        self.pos = p;
        let text = std::str::from_utf8(&s[start..p]).unwrap_or("");
        match text.parse::<f64>() {
            Ok(v) => Ok(Expr::Num(v)),
            Err(_) => {
                self.pos = start;
                self.err("malformed number")
            }
        }
    }
}

pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

// Binding strength for printing: a child needs parentheses when its level
// is below what the parent's slot requires.
fn level(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) | Expr::Div(..) => 2,
        Expr::Pow(..) => 3,
        Expr::Neg(_) => 4,
        _ => 5,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, e: &Expr, need: u8) -> fmt::Result {
    if level(e) < need {
        write!(f, "(")?;
        write_expr(f, e)?;
        write!(f, ")")
    } else {
        write_expr(f, e)
    }
}

fn write_expr(f: &mut fmt::Formatter<'_>, e: &Expr) -> fmt::Result {
    match e {
        Expr::Num(v) => write!(f, "{v}"),
        Expr::I => write!(f, "i"),
        Expr::Z => write!(f, "z"),
        Expr::Neg(a) => {
            write!(f, "-")?;
            write_at(f, a, 5)
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            write_at(f, a, 1)?;
            write!(f, "{}", if matches!(e, Expr::Add(..)) { " + " } else { " - " })?;
            write_at(f, b, 2)
        }
        Expr::Mul(a, b) | Expr::Div(a, b) => {
            write_at(f, a, 2)?;
            write!(f, "{}", if matches!(e, Expr::Mul(..)) { "*" } else { "/" })?;
            write_at(f, b, 3)
        }
        Expr::Pow(a, b) => {
            write_at(f, a, 4)?;
            write!(f, "^")?;
            write_at(f, b, 3)
        }
        Expr::Call(func, args) => {
            write!(f, "{}(", func.name())?;
            for (k, a) in args.iter().enumerate() {
                if k > 0 {
                    write!(f, ", ")?;
                }
                write_at(f, a, 1)?;
            }
            write!(f, ")")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self)
    }
}

/// Integer literal exponent, evaluated with repeated multiplication.
fn int_literal(e: &Expr) -> Option<i32> {
    match e {
        Expr::Num(v) if v.fract() == 0.0 && v.abs() <= 64.0 => Some(*v as i32),
        Expr::Neg(a) => int_literal(a).map(|n| -n),
        _ => None,
    }
}

fn pow(a: C64, b: C64, int: Option<i32>) -> C64 {
    match int {
        Some(n) => a.powi(n),
        None if a == C64::new(0.0, 0.0) => a,
        None => a.powc(b),
    }
}

fn bessel_j(nu: C64, z: C64, scaled: bool) -> C64 {
    if nu.im != 0.0 {
        return C64::new(f64::NAN, f64::NAN);
    }
    match bessel_kernel(nu.re, z) {
        Ok(k) if scaled => k,
        Ok(k) => k * pow(z, nu, if nu.re.fract() == 0.0 { Some(nu.re as i32) } else { None }),
        Err(_) => C64::new(f64::NAN, f64::NAN),
    }
}

impl Expr {
    pub fn eval(&self, z: C64) -> C64 {
        match self {
            Expr::Num(v) => C64::new(*v, 0.0),
            Expr::I => C64::new(0.0, 1.0),
            Expr::Z => z,
            Expr::Neg(a) => -a.eval(z),
            Expr::Add(a, b) => a.eval(z) + b.eval(z),
            Expr::Sub(a, b) => a.eval(z) - b.eval(z),
            Expr::Mul(a, b) => a.eval(z) * b.eval(z),
            Expr::Div(a, b) => a.eval(z) / b.eval(z),
            Expr::Pow(a, b) => pow(a.eval(z), b.eval(z), int_literal(b)),
            Expr::Call(func, args) => {
                let x = args[0].eval(z);
                match func {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Exp => x.exp(),
                    Func::Log => x.ln(),
                    Func::Sqrt => x.sqrt(),
                    Func::Pow => pow(x, args[1].eval(z), int_literal(&args[1])),
                    Func::BesselJ => bessel_j(x, args[1].eval(z), false),
                    Func::BesselJn => bessel_j(x, args[1].eval(z), true),
                }
            }
        }
    }

    /// Where `e` vanishes, for the literal forms z, z ± c and c ± z.
    fn literal_zero(&self) -> Option<C64> {
        let num = |e: &Expr| match e {
            Expr::Num(v) => Some(C64::new(*v, 0.0)),
            Expr::I => Some(C64::new(0.0, 1.0)),
            _ => None,
        };
        match self {
            Expr::Z => Some(C64::new(0.0, 0.0)),
            Expr::Add(a, b) => match (a.as_ref(), b.as_ref()) {
                (Expr::Z, c) | (c, Expr::Z) => num(c).map(|c| -c),
                _ => None,
            },
            Expr::Sub(a, b) => match (a.as_ref(), b.as_ref()) {
                (Expr::Z, c) => num(c),
                (c, Expr::Z) => num(c),
                _ => None,
            },
            _ => None,
        }
    }

    fn collect_singularities(&self, out: &mut Vec<Singularity>) {
        match self {
            Expr::Num(_) | Expr::I | Expr::Z => {}
            Expr::Neg(a) => a.collect_singularities(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.collect_singularities(out);
                b.collect_singularities(out);
            }
            Expr::Div(a, b) => {
                a.collect_singularities(out);
                b.collect_singularities(out);
                let pole = match b.as_ref() {
                    Expr::Pow(base, e) => match (base.literal_zero(), int_literal(e)) {
                        (Some(at), Some(n)) if n > 0 => Some((at, n as u32)),
                        _ => None,
                    },
                    d => d.literal_zero().map(|at| (at, 1)),
                };
                if let Some((at, n)) = pole {
                    out.push(Singularity::pole(at, n));
                }
            }
            Expr::Pow(a, b) => {
                a.collect_singularities(out);
                b.collect_singularities(out);
                match int_literal(b) {
                    Some(n) if n < 0 => {
                        if let Some(at) = a.literal_zero() {
                            out.push(Singularity::pole(at, (-n) as u32));
                        }
                    }
                    Some(_) => {}
                    None => {
                        if let Some(at) = a.literal_zero() {
                            out.push(Singularity::branch(at));
                        }
                    }
                }
            }
            Expr::Call(func, args) => {
                for a in args {
                    a.collect_singularities(out);
                }
                let branch_arg = match func {
                    Func::Log | Func::Sqrt => Some(&args[0]),
                    Func::Pow if int_literal(&args[1]).is_none() => Some(&args[0]),
                    Func::BesselJ if int_literal(&args[0]).is_none() => Some(&args[1]),
                    _ => None,
                };
                if let Some(at) = branch_arg.and_then(|a| a.literal_zero()) {
                    out.push(Singularity::branch(at));
                }
            }
        }
    }

    /// Singularities recognised from literal patterns such as 1/z, 1/(z − 1)²
    /// and log(z).
    pub fn singularities(&self) -> Vec<Singularity> {
        let mut out = Vec::new();
        self.collect_singularities(&mut out);
        out.dedup_by(|a, b| a == b);
        out
    }
}

pub fn compile(e: &Expr) -> AnalyticFn {
    let tree = e.clone();
    AnalyticFn::new(move |z| tree.eval(z)).with_singularities(e.singularities())
}

/// parse and compile in one step.
pub fn compile_str(src: &str) -> Result<AnalyticFn, ParseError> {
    Ok(compile(&parse(src)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::SingularityKind;
    use std::f64::consts::{E, PI};

    fn b(e: Expr) -> Box<Expr> {
        Box::new(e)
    }

    #[test]
    fn parse_examples() {
        let e = parse("sin(z)^2 + 1/z").unwrap();
        let want = Expr::Add(
            b(Expr::Pow(b(Expr::Call(Func::Sin, vec![Expr::Z])), b(Expr::Num(2.0)))),
            b(Expr::Div(b(Expr::Num(1.0)), b(Expr::Z))),
        );
        assert_eq!(e, want);
        match parse("besselj(0.5, sqrt(z^2+1))").unwrap() {
            Expr::Call(Func::BesselJ, args) => assert_eq!(args.len(), 2),
            other => panic!("{other:?}"),
        }
        assert_eq!(parse("2z"), Err(ParseError::Syntax { offset: 1, msg: "unexpected trailing input".into() }));
        assert!(matches!(parse("foo(z)"), Err(ParseError::UnknownIdent { offset: 0, .. })));
        assert!(matches!(parse("pow(z)"), Err(ParseError::Arity { expected: 2, got: 1, .. })));
        assert!(matches!(parse("  "), Err(ParseError::Syntax { offset: 2, .. })));
        // right-associative power, minus on the primary
        assert!((parse("2^3^2").unwrap().eval(C64::new(0.0, 0.0)) - 512.0).norm() < 1e-12);
        assert_eq!(parse("-z^2").unwrap(), Expr::Pow(b(Expr::Neg(b(Expr::Z))), b(Expr::Num(2.0))));
        assert_eq!(parse("1.5e-3").unwrap(), Expr::Num(1.5e-3));
    }

    #[test]
    fn printing_round_trips() {
        for src in ["-(z^2)", "(1 + z)*(2 - z)", "z - (1 - z)", "z/(2*z)", "(z^2)^3", "2^-z", "-(-z)", "a"] {
            let Ok(e) = parse(src) else { continue };
            let printed = e.to_string();
            assert_eq!(parse(&printed).unwrap(), e, "{src} -> {printed}");
        }
        assert_eq!(parse("(z^2)^3").unwrap().to_string(), "(z^2)^3");
        assert_eq!(parse("((z))+((1))").unwrap().to_string(), "z + 1");
    }

    #[test]
    fn compiled_values() {
        let f = compile_str("exp(z)").unwrap();
        assert!((f.eval(C64::new(1.0, 0.0)) - E).norm() < 1e-15);
        let f = compile_str("1/z").unwrap();
        assert_eq!(f.singularities.len(), 1);
        assert_eq!(f.singularities[0].at, C64::new(0.0, 0.0));
        assert!(matches!(f.singularities[0].kind, SingularityKind::Pole(1)));
        let f = compile_str("log(z)").unwrap();
        assert_eq!(f.eval(C64::new(-1.0, 0.0)), C64::new(0.0, PI));
        let f = compile_str("1/(z - 2)^2").unwrap();
        assert_eq!(f.singularities[0].at, C64::new(2.0, 0.0));
        let f = compile_str("besselj(1, z)").unwrap();
        assert!((f.eval(C64::new(10.0, 0.0)).re - 0.04347274616886144).abs() < 1e-13);
    }
}
