//! Scalar-field expression language.
//!
//! A minimal arithmetic grammar over chart coordinates with a fixed
//! function set (`sin`, `cos`, `exp`, `log`, `sqrt`, `atan`), exact
//! symbolic partial differentiation and IEEE-double evaluation.
//! Precedence: `^` > unary `-` > `*`,`/` > `+`,`-`; binaries are
//! left-associative; exponents are constant integer literals so
//! differentiation stays total.

use std::fmt;
use std::rc::Rc;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryFn {
    Neg,
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Atan,
}

impl UnaryFn {
    fn name(self) -> &'static str {
        match self {
            UnaryFn::Neg => "-",
            UnaryFn::Sin => "sin",
            UnaryFn::Cos => "cos",
            UnaryFn::Exp => "exp",
            UnaryFn::Log => "log",
            UnaryFn::Sqrt => "sqrt",
            UnaryFn::Atan => "atan",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Expression AST. Variables carry both the coordinate name (for
/// printing) and its index in the owning chart (for evaluation).
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var { name: Rc<str>, index: usize },
    Unary(UnaryFn, Rc<Expr>),
    Bin(BinOp, Rc<Expr>, Rc<Expr>),
    /// Power with a constant integer exponent.
    Pow(Rc<Expr>, i32),
}

#[derive(Debug, Clone, Error, PartialEq)]
#[error("parse error at byte {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
    pub expected: Vec<&'static str>,
}

#[derive(Debug, Clone, Error, PartialEq)]
#[error("domain error in `{node}`: {message}")]
pub struct EvalError {
    /// Printed form of the offending AST node.
    pub node: String,
    pub message: String,
}

// ---------------------------------------------------------------------------
// Construction helpers with constant folding.
//
// Folding is limited to constants and additive/multiplicative identities;
// correctness elsewhere is by evaluation, not canonical form.
// ---------------------------------------------------------------------------

pub fn cnum(c: f64) -> Expr {
    Expr::Const(c)
}

pub fn var(name: &str, index: usize) -> Expr {
    Expr::Var { name: name.into(), index }
}

fn is_const(e: &Expr, c: f64) -> bool {
    matches!(e, Expr::Const(v) if *v == c)
}

pub fn add(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x + y),
        _ if is_const(&a, 0.0) => b,
        _ if is_const(&b, 0.0) => a,
        _ => Expr::Bin(BinOp::Add, Rc::new(a), Rc::new(b)),
    }
}

pub fn sub(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x - y),
        _ if is_const(&b, 0.0) => a,
        _ if is_const(&a, 0.0) => neg(b),
        _ => Expr::Bin(BinOp::Sub, Rc::new(a), Rc::new(b)),
    }
}

pub fn mul(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x * y),
        _ if is_const(&a, 0.0) || is_const(&b, 0.0) => Expr::Const(0.0),
        _ if is_const(&a, 1.0) => b,
        _ if is_const(&b, 1.0) => a,
        _ => Expr::Bin(BinOp::Mul, Rc::new(a), Rc::new(b)),
    }
}

pub fn div(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        _ if is_const(&a, 0.0) => Expr::Const(0.0),
        _ if is_const(&b, 1.0) => a,
        (Expr::Const(x), Expr::Const(y)) if *y != 0.0 => Expr::Const(x / y),
        _ => Expr::Bin(BinOp::Div, Rc::new(a), Rc::new(b)),
    }
}

pub fn neg(a: Expr) -> Expr {
    match &a {
        Expr::Const(x) => Expr::Const(-x),
        Expr::Unary(UnaryFn::Neg, inner) => (**inner).clone(),
        _ => Expr::Unary(UnaryFn::Neg, Rc::new(a)),
    }
}

pub fn powi(a: Expr, n: i32) -> Expr {
    match n {
        0 => Expr::Const(1.0),
        1 => a,
        _ => match &a {
            Expr::Const(x) => Expr::Const(x.powi(n)),
            _ => Expr::Pow(Rc::new(a), n),
        },
    }
}

pub fn unary(f: UnaryFn, a: Expr) -> Expr {
    if f == UnaryFn::Neg {
        neg(a)
    } else {
        Expr::Unary(f, Rc::new(a))
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

const FUNCTIONS: [(&str, UnaryFn); 6] = [
    ("sin", UnaryFn::Sin),
    ("cos", UnaryFn::Cos),
    ("exp", UnaryFn::Exp),
    ("log", UnaryFn::Log),
    ("sqrt", UnaryFn::Sqrt),
    ("atan", UnaryFn::Atan),
];

struct Parser<'a> {
    input: &'a str,
    bytes: &'a [u8],
    pos: usize,
    coords: &'a [String],
}

impl<'a> Parser<'a> {
    fn new(input: &'a str, coords: &'a [String]) -> Self {
        Parser { input, bytes: input.as_bytes(), pos: 0, coords }
    }

    fn err(&self, offset: usize, message: impl Into<String>, expected: &[&'static str]) -> ParseError {
        ParseError { offset, message: message.into(), expected: expected.to_vec() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Expr::Bin(BinOp::Add, Rc::new(lhs), Rc::new(rhs));
                }
                Some(b'-') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Expr::Bin(BinOp::Sub, Rc::new(lhs), Rc::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    lhs = Expr::Bin(BinOp::Mul, Rc::new(lhs), Rc::new(rhs));
                }
                Some(b'/') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    lhs = Expr::Bin(BinOp::Div, Rc::new(lhs), Rc::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            let inner = self.unary()?;
            Ok(Expr::Unary(UnaryFn::Neg, Rc::new(inner)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let mut base = self.atom()?;
        while self.peek() == Some(b'^') {
            self.pos += 1;
            let n = self.integer_exponent()?;
            base = Expr::Pow(Rc::new(base), n);
        }
        Ok(base)
    }

    fn integer_exponent(&mut self) -> Result<i32, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let negative = if self.bytes.get(self.pos) == Some(&b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let digits_start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(self.err(start, "expected integer exponent after `^`", &["integer"]));
        }
        // A following '.' or exponent marker means a non-integer literal.
        if matches!(self.bytes.get(self.pos), Some(b'.') | Some(b'e') | Some(b'E')) {
            return Err(self.err(start, "exponent must be an integer literal", &["integer"]));
        }
        let text = &self.input[digits_start..self.pos];
        let mut n: i32 = text
            .parse()
            .map_err(|_| self.err(start, "integer exponent out of range", &["integer"]))?;
        if negative {
            n = -n;
        }
        Ok(n)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            None => Err(self.err(
                self.input.len(),
                "unexpected end of input",
                &["number", "identifier", "("],
            )),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err(self.pos.min(self.input.len()), "unbalanced parentheses", &[")"]));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.identifier(),
            Some(c) => Err(self.err(
                self.pos,
                format!("unexpected character `{}`", c as char),
                &["number", "identifier", "("],
            )),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_digit() || self.bytes[self.pos] == b'.')
        {
            self.pos += 1;
        }
        // Optional exponent part like 1e-3.
        if matches!(self.bytes.get(self.pos), Some(b'e') | Some(b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.bytes.get(self.pos), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            if self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
                while self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
                    self.pos += 1;
                }
            } else {
                self.pos = mark;
            }
        }
        let text = &self.input[start..self.pos];
        let value: f64 = text
            .parse()
            .map_err(|_| self.err(start, format!("invalid number literal `{text}`"), &["number"]))?;
        Ok(Expr::Const(value))
    }

    fn identifier(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = &self.input[start..self.pos];
        if let Some((_, f)) = FUNCTIONS.iter().find(|(n, _)| *n == name) {
            if self.peek() != Some(b'(') {
                return Err(self.err(self.pos.min(self.input.len()), format!("expected `(` after `{name}`"), &["("]));
            }
            self.pos += 1;
            let arg = self.expr()?;
            if self.peek() != Some(b')') {
                return Err(self.err(self.pos.min(self.input.len()), "unbalanced parentheses", &[")"]));
            }
            self.pos += 1;
            return Ok(Expr::Unary(*f, Rc::new(arg)));
        }
        match self.coords.iter().position(|c| c == name) {
            Some(index) => Ok(var(name, index)),
            None => Err(self.err(start, format!("unknown identifier `{name}`"), &["coordinate name"])),
        }
    }
}

/// Parses `text` against the coordinate names of a chart.
pub fn parse(text: &str, coords: &[String]) -> Result<Expr, ParseError> {
    let mut p = Parser::new(text, coords);
    if p.peek().is_none() {
        return Err(ParseError {
            offset: text.len(),
            message: "empty input".into(),
            expected: vec!["number", "identifier", "("],
        });
    }
    let e = p.expr()?;
    if let Some(c) = p.peek() {
        return Err(p.err(p.pos, format!("unexpected trailing `{}`", c as char), &["end of input"]));
    }
    Ok(e)
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

impl Expr {
    pub fn evaluate(&self, point: &[f64]) -> Result<f64, EvalError> {
        let v = match self {
            Expr::Const(c) => *c,
            Expr::Var { index, name } => *point.get(*index).ok_or_else(|| EvalError {
                node: name.to_string(),
                message: format!("point has no coordinate {index}"),
            })?,
            Expr::Unary(f, a) => {
                let x = a.evaluate(point)?;
                match f {
                    UnaryFn::Neg => -x,
                    UnaryFn::Sin => x.sin(),
                    UnaryFn::Cos => x.cos(),
                    UnaryFn::Exp => x.exp(),
                    UnaryFn::Atan => x.atan(),
                    UnaryFn::Log => {
                        if x <= 0.0 {
                            return Err(self.domain_err(format!("log of non-positive value {x}")));
                        }
                        x.ln()
                    }
                    UnaryFn::Sqrt => {
                        if x < 0.0 {
                            return Err(self.domain_err(format!("sqrt of negative value {x}")));
                        }
                        x.sqrt()
                    }
                }
            }
            Expr::Bin(op, a, b) => {
                let x = a.evaluate(point)?;
                let y = b.evaluate(point)?;
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => {
                        if y == 0.0 {
                            return Err(self.domain_err("division by zero"));
                        }
                        x / y
                    }
                }
            }
            Expr::Pow(a, n) => {
                let x = a.evaluate(point)?;
                if x == 0.0 && *n < 0 {
                    return Err(self.domain_err("zero raised to a negative power"));
                }
                x.powi(*n)
            }
        };
        if !v.is_finite() {
            return Err(self.domain_err("non-finite result"));
        }
        Ok(v)
    }

    fn domain_err(&self, message: impl Into<String>) -> EvalError {
        EvalError { node: self.to_string(), message: message.into() }
    }

    /// Exact symbolic partial derivative with respect to the coordinate
    /// at `index`.
    pub fn differentiate(&self, index: usize) -> Expr {
        match self {
            Expr::Const(_) => cnum(0.0),
            Expr::Var { index: i, .. } => cnum(if *i == index { 1.0 } else { 0.0 }),
            Expr::Unary(f, a) => {
                let da = a.differentiate(index);
                let a = (**a).clone();
                match f {
                    UnaryFn::Neg => neg(da),
                    UnaryFn::Sin => mul(unary(UnaryFn::Cos, a), da),
                    UnaryFn::Cos => neg(mul(unary(UnaryFn::Sin, a), da)),
                    UnaryFn::Exp => mul(unary(UnaryFn::Exp, a), da),
                    UnaryFn::Log => div(da, a),
                    UnaryFn::Sqrt => div(da, mul(cnum(2.0), unary(UnaryFn::Sqrt, a))),
                    UnaryFn::Atan => div(da, add(cnum(1.0), powi(a, 2))),
                }
            }
            Expr::Bin(op, a, b) => {
                let da = a.differentiate(index);
                let db = b.differentiate(index);
                let (a, b) = ((**a).clone(), (**b).clone());
                match op {
                    BinOp::Add => add(da, db),
                    BinOp::Sub => sub(da, db),
                    BinOp::Mul => add(mul(da, b), mul(a, db)),
                    BinOp::Div => div(sub(mul(da, b.clone()), mul(a, db)), powi(b, 2)),
                }
            }
            Expr::Pow(a, n) => {
                let da = a.differentiate(index);
                let a = (**a).clone();
                mul(mul(cnum(*n as f64), powi(a, n - 1)), da)
            }
        }
    }

    /// True when no variable occurs in the AST.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Const(_) => true,
            Expr::Var { .. } => false,
            Expr::Unary(_, a) => a.is_constant(),
            Expr::Bin(_, a, b) => a.is_constant() && b.is_constant(),
            Expr::Pow(a, _) => a.is_constant(),
        }
    }
}

/// Central finite difference of `e` in coordinate `index`, with step
/// `1e-5 * max(1, |x|)`. Independent oracle for the symbolic derivative.
pub fn central_fd(e: &Expr, point: &[f64], index: usize) -> Result<f64, EvalError> {
    let x = point[index];
    let h = 1e-5 * x.abs().max(1.0);
    let mut hi = point.to_vec();
    let mut lo = point.to_vec();
    hi[index] = x + h;
    lo[index] = x - h;
    Ok((e.evaluate(&hi)? - e.evaluate(&lo)?) / (2.0 * h))
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Unary(UnaryFn::Neg, _) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let prec = self.precedence();
        if prec < min {
            write!(f, "(")?;
        }
        match self {
            Expr::Const(c) => write!(f, "{c}")?,
            Expr::Var { name, .. } => write!(f, "{name}")?,
            Expr::Unary(UnaryFn::Neg, a) => {
                write!(f, "-")?;
                a.fmt_prec(f, 3)?;
            }
            Expr::Unary(func, a) => {
                write!(f, "{}(", func.name())?;
                a.fmt_prec(f, 0)?;
                write!(f, ")")?;
            }
            Expr::Bin(op, a, b) => {
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                };
                a.fmt_prec(f, prec)?;
                write!(f, "{sym}")?;
                // Left-associativity: the right operand needs strictly
                // higher precedence to print unparenthesized.
                b.fmt_prec(f, prec + 1)?;
            }
            Expr::Pow(a, n) => {
                a.fmt_prec(f, 5)?;
                write!(f, "^{n}")?;
            }
        }
        if prec < min {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coords(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("x{i}")).collect()
    }

    #[test]
    fn parses_products_and_functions() {
        let cs = coords(3);
        let e = parse("x1*x2 + sin(x3)", &cs).unwrap();
        let expected = Expr::Bin(
            BinOp::Add,
            Rc::new(Expr::Bin(BinOp::Mul, Rc::new(var("x1", 0)), Rc::new(var("x2", 1)))),
            Rc::new(Expr::Unary(UnaryFn::Sin, Rc::new(var("x3", 2)))),
        );
        assert_eq!(e, expected);
    }

    #[test]
    fn incomplete_expression_errors_at_end() {
        let cs = coords(2);
        let err = parse("x1 + ", &cs).unwrap_err();
        assert_eq!(err.offset, 5);
    }

    #[test]
    fn stereographic_factor_evaluates_at_origin() {
        let cs = coords(3);
        let e = parse("2/(1+x1^2+x2^2)", &cs).unwrap();
        assert_eq!(e.evaluate(&[0.0, 0.0, 0.0]).unwrap(), 2.0);
    }

    #[test]
    fn unknown_identifier_rejected() {
        let cs = coords(2);
        let err = parse("x1 + y", &cs).unwrap_err();
        assert_eq!(err.offset, 5);
        assert!(err.message.contains("unknown identifier"));
    }

    #[test]
    fn empty_input_rejected() {
        let err = parse("   ", &coords(1)).unwrap_err();
        assert!(err.message.contains("empty"));
    }

    #[test]
    fn non_integer_exponent_rejected() {
        let err = parse("x1^2.5", &coords(1)).unwrap_err();
        assert!(err.message.contains("integer"));
    }

    #[test]
    fn unbalanced_parens_rejected() {
        let err = parse("(x1 + 2", &coords(1)).unwrap_err();
        assert!(err.message.contains("unbalanced"));
    }

    #[test]
    fn derivative_of_product_is_cofactor() {
        let cs = coords(2);
        let e = parse("x1*x2", &cs).unwrap();
        let d = e.differentiate(0);
        assert_eq!(d.evaluate(&[3.0, 5.0]).unwrap(), 5.0);
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        let e = parse("7", &coords(1)).unwrap();
        assert_eq!(e.differentiate(0), cnum(0.0));
    }

    #[test]
    fn chain_rule_matches_hand_value() {
        let cs = coords(1);
        let e = parse("sin(x1^2)", &cs).unwrap();
        let d = e.differentiate(0).evaluate(&[0.5]).unwrap();
        let expected = 2.0 * 0.5 * (0.25f64).cos();
        assert!((d - expected).abs() < 1e-12, "{d} vs {expected}");
        assert!((d - 0.96891).abs() < 1e-5);
    }

    #[test]
    fn evaluate_simple_values() {
        let cs = coords(2);
        assert_eq!(parse("x1+x2", &cs).unwrap().evaluate(&[1.0, 2.0]).unwrap(), 3.0);
        assert_eq!(parse("exp(x1)*cos(x2)", &cs).unwrap().evaluate(&[0.0, 0.0]).unwrap(), 1.0);
    }

    #[test]
    fn division_by_zero_is_domain_error() {
        let cs = coords(2);
        let err = parse("1/x1", &cs).unwrap().evaluate(&[0.0, 3.0]).unwrap_err();
        assert!(err.message.contains("division by zero"));
        assert!(err.node.contains("1/x1"));
    }

    #[test]
    fn log_of_non_positive_is_domain_error() {
        let cs = coords(1);
        assert!(parse("log(x1)", &cs).unwrap().evaluate(&[-1.0]).is_err());
        assert!(parse("sqrt(x1)", &cs).unwrap().evaluate(&[-1.0]).is_err());
    }

    #[test]
    fn print_parse_round_trip_samples() {
        let cs = coords(3);
        for t in [
            "x1*x2 + sin(x3)",
            "-x1^2",
            "2/(1+x1^2+x2^2)",
            "x1 - x2 - x3",
            "x1/(x2*x3)",
            "atan(x1) + sqrt(x2) * exp(-x3)",
            "x1^-2",
            "-(x1+x2)",
            "1e-3 * x1",
        ] {
            let a = parse(t, &cs).unwrap();
            let b = parse(&a.to_string(), &cs).unwrap();
            assert_eq!(a, b, "round trip failed for `{t}` -> `{a}`");
        }
    }

    #[test]
    fn symbolic_derivative_matches_central_fd() {
        let cs = coords(2);
        let e = parse("atan(x1*x2) + exp(x1)/(2+cos(x2))", &cs).unwrap();
        let p = [0.3, -0.7];
        for i in 0..2 {
            let sym = e.differentiate(i).evaluate(&p).unwrap();
            let fd = central_fd(&e, &p, i).unwrap();
            assert!((sym - fd).abs() <= 1e-5 * (1.0 + fd.abs()));
        }
    }
}
