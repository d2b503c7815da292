//! Closed-form analytic expressions in one complex variable `z`.
//!
//! This is the input format for every symbol in the system (generators `G`,
//! self-maps `φ`, conformal maps `h`, …). The grammar supports the binary
//! operators `+ - * / ^` (with `^` right-associative), unary minus, the
//! imaginary unit `i`, real literals, and the functions
//! `exp log sqrt sin cos tanh`, all on principal branches with the cut on
//! `(-∞, 0]`. There is no implicit multiplication: write `2*z`, `3*i`.
//!
//! Parsing canonicalizes constant subexpressions (`3*i`, `-2`, `(1+2*i)` all
//! become a single constant node), so pretty-printing a parsed tree and
//! reparsing it yields a structurally equal tree.

use std::fmt;

use num_complex::Complex64;

use crate::error::Error;
use crate::Result;

/// Named functions available in the grammar. All use principal branches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    Sqrt,
    Sin,
    Cos,
    Tanh,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tanh => "tanh",
        }
    }

    fn from_name(s: &str) -> Option<Func> {
        Some(match s {
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tanh" => Func::Tanh,
            _ => return None,
        })
    }
}

/// AST of a closed-form analytic expression in the variable `z`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Complex64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    /// Parse an expression over the variable `z`.
    pub fn parse(src: &str) -> Result<Expr> {
        let tokens = lex(src)?;
        let mut p = Parser { tokens, pos: 0 };
        let e = p.parse_bp(0)?;
        match p.peek() {
            None => Ok(e),
            Some((_, at)) => Err(Error::Syntax {
                pos: *at,
                msg: "trailing input".into(),
            }),
        }
    }

    /// Evaluate at `z` using principal branches everywhere.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let v = match self {
            Expr::Const(c) => *c,
            Expr::Var => z,
            Expr::Neg(a) => -a.eval(z)?,
            Expr::Add(a, b) => a.eval(z)? + b.eval(z)?,
            Expr::Sub(a, b) => a.eval(z)? - b.eval(z)?,
            Expr::Mul(a, b) => a.eval(z)? * b.eval(z)?,
            Expr::Div(a, b) => {
                let d = b.eval(z)?;
                if d.re == 0.0 && d.im == 0.0 {
                    return Err(Error::Singularity("division by zero".into()));
                }
                a.eval(z)? / d
            }
            Expr::Pow(a, b) => eval_pow(a.eval(z)?, b.eval(z)?)?,
            Expr::Call(f, a) => {
                let w = a.eval(z)?;
                match f {
                    Func::Exp => w.exp(),
                    Func::Log => {
                        if w.re == 0.0 && w.im == 0.0 {
                            return Err(Error::Singularity("log of zero".into()));
                        }
                        w.ln()
                    }
                    Func::Sqrt => w.sqrt(),
                    Func::Sin => w.sin(),
                    Func::Cos => w.cos(),
                    Func::Tanh => w.tanh(),
                }
            }
        };
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::Overflow(self.op_name().into()))
        }
    }

    /// `-self`, canonicalized.
    pub fn negated(self) -> Expr {
        fold_neg(self)
    }

    fn op_name(&self) -> &'static str {
        match self {
            Expr::Const(_) => "constant",
            Expr::Var => "variable",
            Expr::Neg(_) => "negation",
            Expr::Add(..) => "addition",
            Expr::Sub(..) => "subtraction",
            Expr::Mul(..) => "multiplication",
            Expr::Div(..) => "division",
            Expr::Pow(..) => "power",
            Expr::Call(f, _) => f.name(),
        }
    }

    /// Printing precedence; used to decide parenthesization.
    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 3,
            Expr::Neg(_) => 5,
            Expr::Pow(..) => 8,
            Expr::Const(c) => {
                if c.im == 0.0 {
                    if c.re < 0.0 {
                        5 // prints like a negation
                    } else {
                        100
                    }
                } else if c.re == 0.0 {
                    if c.im == 1.0 || c.im == -1.0 {
                        if c.im == 1.0 {
                            100
                        } else {
                            5
                        }
                    } else {
                        3 // prints as `b*i`
                    }
                } else {
                    100 // prints with its own parentheses
                }
            }
            Expr::Var | Expr::Call(..) => 100,
        }
    }
}

fn eval_pow(base: Complex64, exp: Complex64) -> Result<Complex64> {
    // Integer exponents go through powi for accuracy and to keep 0^n exact.
    if exp.im == 0.0 && exp.re.fract() == 0.0 && exp.re.abs() <= 1e9 {
        let k = exp.re as i32;
        if base.re == 0.0 && base.im == 0.0 && k < 0 {
            return Err(Error::Singularity("zero to a negative power".into()));
        }
        return Ok(base.powi(k));
    }
    if base.re == 0.0 && base.im == 0.0 {
        if exp.re > 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        return Err(Error::Singularity("zero base with non-positive exponent".into()));
    }
    Ok(base.powc(exp))
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    ImagUnit,
    Var,
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                out.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                out.push((Tok::Star, i));
                i += 1;
            }
            '/' => {
                out.push((Tok::Slash, i));
                i += 1;
            }
            '^' => {
                out.push((Tok::Caret, i));
                i += 1;
            }
            '(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let value: f64 = text.parse().map_err(|_| Error::Syntax {
                    pos: start,
                    msg: format!("invalid number `{text}`"),
                })?;
                out.push((Tok::Num(value), start));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                let name = &src[start..i];
                match name {
                    "z" => out.push((Tok::Var, start)),
                    "i" => out.push((Tok::ImagUnit, start)),
                    _ => out.push((Tok::Ident(name.to_string()), start)),
                }
            }
            _ => {
                return Err(Error::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parser: precedence climbing
// ---------------------------------------------------------------------------

const UNARY_RBP: u8 = 5;

struct Parser {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&(Tok, usize)> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<(Tok, usize)> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect_rparen(&mut self, open_at: usize) -> Result<()> {
        match self.next() {
            Some((Tok::RParen, _)) => Ok(()),
            Some((_, at)) => Err(Error::Syntax {
                pos: at,
                msg: "expected `)`".into(),
            }),
            None => Err(Error::Syntax {
                pos: open_at,
                msg: "unclosed `(`".into(),
            }),
        }
    }

    fn parse_bp(&mut self, min_bp: u8) -> Result<Expr> {
        let mut lhs = self.parse_prefix()?;
        loop {
            let (lbp, rbp) = match self.peek() {
                Some((Tok::Plus, _)) | Some((Tok::Minus, _)) => (1, 2),
                Some((Tok::Star, _)) | Some((Tok::Slash, _)) => (3, 4),
                Some((Tok::Caret, _)) => (8, 7),
                _ => break,
            };
            if lbp < min_bp {
                break;
            }
            let (op, _) = self.next().unwrap();
            let rhs = self.parse_bp(rbp)?;
            lhs = fold_binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn parse_prefix(&mut self) -> Result<Expr> {
        match self.next() {
            Some((Tok::Num(v), _)) => Ok(Expr::Const(Complex64::new(v, 0.0))),
            Some((Tok::ImagUnit, _)) => Ok(Expr::Const(Complex64::new(0.0, 1.0))),
            Some((Tok::Var, _)) => Ok(Expr::Var),
            Some((Tok::Minus, _)) => {
                let operand = self.parse_bp(UNARY_RBP)?;
                Ok(fold_neg(operand))
            }
            Some((Tok::Plus, _)) => self.parse_bp(UNARY_RBP),
            Some((Tok::LParen, at)) => {
                let e = self.parse_bp(0)?;
                self.expect_rparen(at)?;
                Ok(e)
            }
            Some((Tok::Ident(name), at)) => {
                let func = Func::from_name(&name)
                    .ok_or(Error::UnknownIdentifier { name, pos: at })?;
                match self.next() {
                    Some((Tok::LParen, open)) => {
                        let arg = self.parse_bp(0)?;
                        self.expect_rparen(open)?;
                        Ok(Expr::Call(func, Box::new(arg)))
                    }
                    Some((_, p)) => Err(Error::Syntax {
                        pos: p,
                        msg: format!("expected `(` after `{}`", func.name()),
                    }),
                    None => Err(Error::Syntax {
                        pos: at,
                        msg: format!("expected `(` after `{}`", func.name()),
                    }),
                }
            }
            Some((tok, at)) => Err(Error::Syntax {
                pos: at,
                msg: format!("unexpected token {tok:?}"),
            }),
            None => Err(Error::Syntax {
                pos: 0,
                msg: "empty expression".into(),
            }),
        }
    }
}

fn fold_neg(e: Expr) -> Expr {
    match e {
        Expr::Const(c) => Expr::Const(-c),
        other => Expr::Neg(Box::new(other)),
    }
}

/// Build a binary node, folding it to a constant when both children are
/// constants and the result is finite. The fold keeps printed complex
/// literals (`3*i`, `(1 + 2*i)`) structurally round-trippable.
fn fold_binary(op: Tok, lhs: Expr, rhs: Expr) -> Expr {
    if let (Expr::Const(a), Expr::Const(b)) = (&lhs, &rhs) {
        let v = match op {
            Tok::Plus => Some(a + b),
            Tok::Minus => Some(a - b),
            Tok::Star => Some(a * b),
            Tok::Slash => {
                if b.re == 0.0 && b.im == 0.0 {
                    None
                } else {
                    Some(a / b)
                }
            }
            Tok::Caret => eval_pow(*a, *b).ok(),
            _ => None,
        };
        if let Some(v) = v {
            if v.re.is_finite() && v.im.is_finite() {
                return Expr::Const(v);
            }
        }
    }
    let (lhs, rhs) = (Box::new(lhs), Box::new(rhs));
    match op {
        Tok::Plus => Expr::Add(lhs, rhs),
        Tok::Minus => Expr::Sub(lhs, rhs),
        Tok::Star => Expr::Mul(lhs, rhs),
        Tok::Slash => Expr::Div(lhs, rhs),
        Tok::Caret => Expr::Pow(lhs, rhs),
        _ => unreachable!("not a binary operator"),
    }
}

// ---------------------------------------------------------------------------
// Pretty printer
// ---------------------------------------------------------------------------

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write_const(f, *c),
            Expr::Var => write!(f, "z"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                write_child(f, a, a.prec() < 5)
            }
            Expr::Add(a, b) => {
                write_child(f, a, a.prec() < 1)?;
                write!(f, " + ")?;
                write_child(f, b, b.prec() <= 1)
            }
            Expr::Sub(a, b) => {
                write_child(f, a, a.prec() < 1)?;
                write!(f, " - ")?;
                write_child(f, b, b.prec() <= 1)
            }
            Expr::Mul(a, b) => {
                write_child(f, a, a.prec() < 3)?;
                write!(f, "*")?;
                write_child(f, b, b.prec() <= 3)
            }
            Expr::Div(a, b) => {
                write_child(f, a, a.prec() < 3)?;
                write!(f, "/")?;
                write_child(f, b, b.prec() <= 3)
            }
            Expr::Pow(a, b) => {
                write_child(f, a, a.prec() <= 8)?;
                write!(f, "^")?;
                write_child(f, b, b.prec() < 8)
            }
            Expr::Call(func, a) => write!(f, "{}({})", func.name(), a),
        }
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, child: &Expr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

fn write_const(f: &mut fmt::Formatter<'_>, c: Complex64) -> fmt::Result {
    if c.im == 0.0 {
        write!(f, "{}", c.re)
    } else if c.re == 0.0 {
        if c.im == 1.0 {
            write!(f, "i")
        } else if c.im == -1.0 {
            write!(f, "-i")
        } else {
            write!(f, "{}*i", c.im)
        }
    } else if c.im < 0.0 {
        write!(f, "({} - {}*i)", c.re, -c.im)
    } else {
        write!(f, "({} + {}*i)", c.re, c.im)
    }
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn parse_polynomial_shape() {
        let e = Expr::parse("1 - z^2").unwrap();
        assert_eq!(
            e,
            Expr::Sub(
                Box::new(Expr::Const(c(1.0, 0.0))),
                Box::new(Expr::Pow(
                    Box::new(Expr::Var),
                    Box::new(Expr::Const(c(2.0, 0.0)))
                ))
            )
        );
    }

    #[test]
    fn parse_rational_shape() {
        let e = Expr::parse("2*z/(z-1)").unwrap();
        assert_eq!(
            e,
            Expr::Div(
                Box::new(Expr::Mul(
                    Box::new(Expr::Const(c(2.0, 0.0))),
                    Box::new(Expr::Var)
                )),
                Box::new(Expr::Sub(
                    Box::new(Expr::Var),
                    Box::new(Expr::Const(c(1.0, 0.0)))
                ))
            )
        );
    }

    #[test]
    fn parse_log_product() {
        let e = Expr::parse("(1-z)*log(1-z)").unwrap();
        match &e {
            Expr::Mul(_, rhs) => match rhs.as_ref() {
                Expr::Call(Func::Log, _) => {}
                other => panic!("expected log call, got {other:?}"),
            },
            other => panic!("expected product, got {other:?}"),
        }
        let v = e.eval(c(0.5, 0.0)).unwrap();
        assert!((v - c(0.5 * 0.5f64.ln(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn eval_examples() {
        let e = Expr::parse("1 - z^2").unwrap();
        assert!((e.eval(c(0.0, 1.0)).unwrap() - c(2.0, 0.0)).norm() < 1e-15);

        let e = Expr::parse("2*z/(z-1)").unwrap();
        assert!((e.eval(c(0.0, 0.0)).unwrap()).norm() < 1e-15);

        // Principal square root of i, computed independently in polar form.
        let e = Expr::parse("sqrt(i*(1-z)/(1+z))").unwrap();
        let expected = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        assert!((e.eval(c(0.0, 0.0)).unwrap() - expected).norm() < 1e-15);
    }

    #[test]
    fn singularity_vs_overflow_are_distinct() {
        let e = Expr::parse("1/z").unwrap();
        match e.eval(c(0.0, 0.0)) {
            Err(Error::Singularity(_)) => {}
            other => panic!("expected singularity, got {other:?}"),
        }
        let e = Expr::parse("log(z)").unwrap();
        match e.eval(c(0.0, 0.0)) {
            Err(Error::Singularity(_)) => {}
            other => panic!("expected singularity, got {other:?}"),
        }
        let e = Expr::parse("exp(z)").unwrap();
        match e.eval(c(1e9, 0.0)) {
            Err(Error::Overflow(_)) => {}
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn unknown_identifier_is_reported_with_position() {
        match Expr::parse("2*sinh(z)") {
            Err(Error::UnknownIdentifier { name, pos }) => {
                assert_eq!(name, "sinh");
                assert_eq!(pos, 2);
            }
            other => panic!("expected unknown identifier, got {other:?}"),
        }
    }

    #[test]
    fn syntax_error_has_position() {
        match Expr::parse("1 + * z") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn unary_minus_binds_between_mul_and_pow() {
        // -z^2 is -(z^2)
        let e = Expr::parse("-z^2").unwrap();
        assert_eq!(
            e,
            Expr::Neg(Box::new(Expr::Pow(
                Box::new(Expr::Var),
                Box::new(Expr::Const(c(2.0, 0.0)))
            )))
        );
        // ^ is right-associative (constant towers fold, so use z in the exponent)
        let e = Expr::parse("z^z^2").unwrap();
        match e {
            Expr::Pow(_, rhs) => assert!(matches!(*rhs, Expr::Pow(..))),
            other => panic!("expected power, got {other:?}"),
        }
        assert_eq!(Expr::parse("z^2^3").unwrap(), Expr::parse("z^8").unwrap());
    }

    #[test]
    fn complex_literals_fold() {
        assert_eq!(Expr::parse("3*i").unwrap(), Expr::Const(c(0.0, 3.0)));
        assert_eq!(Expr::parse("1 + 2*i").unwrap(), Expr::Const(c(1.0, 2.0)));
        assert_eq!(Expr::parse("-2").unwrap(), Expr::Const(c(-2.0, 0.0)));
    }

    /// 100 random points in |z| <= 0.9 avoiding singularities: printing and
    /// reparsing must not change values, and the reparse must be structural.
    #[test]
    fn round_trip_on_test_expressions() {
        let sources = [
            "1 - z^2",
            "2*z/(z-1)",
            "(1-z)*log(1-z)",
            "z*(z^2 - 2)",
            "(1-z)^2",
            "sqrt(i*(1-z)/(1+z))",
            "exp(-2*z) + sin(z)*cos(z)",
            "tanh(z/2) - 0.25*i",
            "z*(z-1)",
            "-z",
        ];
        let mut rng = StdRng::seed_from_u64(7);
        for src in sources {
            let e = Expr::parse(src).unwrap();
            let printed = e.to_string();
            let e2 = Expr::parse(&printed).unwrap();
            assert_eq!(e, e2, "structural round-trip failed for `{src}` -> `{printed}`");
            for _ in 0..100 {
                let r = 0.9 * rng.gen::<f64>();
                let th = std::f64::consts::TAU * rng.gen::<f64>();
                let z = Complex64::from_polar(r, th);
                let a = e.eval(z);
                let b = e2.eval(z);
                match (a, b) {
                    (Ok(a), Ok(b)) => assert!((a - b).norm() <= 1e-14 * (1.0 + a.norm())),
                    (Err(_), Err(_)) => {}
                    other => panic!("round-trip eval mismatch: {other:?}"),
                }
            }
        }
    }

    /// Polynomial evaluation agrees with Horner evaluation of the
    /// coefficients extracted by hand.
    #[test]
    fn polynomial_matches_horner() {
        // p(z) = 1 - 2z + 3z^3
        let e = Expr::parse("1 - 2*z + 3*z^3").unwrap();
        let coeffs = [c(1.0, 0.0), c(-2.0, 0.0), c(0.0, 0.0), c(3.0, 0.0)];
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..100 {
            let z = c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
            let horner = coeffs
                .iter()
                .rev()
                .fold(c(0.0, 0.0), |acc, &ck| acc * z + ck);
            let v = e.eval(z).unwrap();
            assert!((v - horner).norm() < 1e-13);
        }
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            Just(Expr::Var),
            (-3.0..3.0f64).prop_map(|v| Expr::Const(c(v, 0.0))),
            (-3.0..3.0f64).prop_map(|v| Expr::Const(c(0.0, v))),
            ((-3.0..3.0f64), (-3.0..3.0f64)).prop_map(|(a, b)| Expr::Const(c(a, b))),
        ];
        leaf.prop_recursive(4, 24, 3, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(a.into(), b.into())),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(a.into(), b.into())),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(a.into(), b.into())),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Div(a.into(), b.into())),
                (inner.clone(), (0u8..4)).prop_map(|(a, k)| Expr::Pow(
                    a.into(),
                    Box::new(Expr::Const(c(k as f64, 0.0)))
                )),
                inner.clone().prop_map(|a| Expr::Neg(a.into())),
                (inner.clone(), prop_oneof![
                    Just(Func::Exp), Just(Func::Sin), Just(Func::Cos), Just(Func::Tanh)
                ])
                .prop_map(|(a, f)| Expr::Call(f, a.into())),
            ]
        })
    }

    proptest! {
        /// Print -> parse is idempotent after one canonicalizing round.
        #[test]
        fn print_parse_idempotent(e in arb_expr()) {
            let once = Expr::parse(&e.to_string()).unwrap();
            let twice = Expr::parse(&once.to_string()).unwrap();
            prop_assert_eq!(once, twice);
        }
    }
}
