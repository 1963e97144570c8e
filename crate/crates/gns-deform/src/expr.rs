//! The observable expression language.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '@') unary)*
//! unary  := '-' unary | factor
//! factor := atom ('^' uint | '^(' int '/' int ')')?
//! atom   := rational | 'i' | 'lam' | ident | 'conj(' expr ')' | '(' expr ')'
//! ```
//!
//! `*` is the pointwise product and `@` the star product chosen at
//! evaluation time. Fractional powers apply to `lam` only.

use std::fmt;

use gns_deform_core::formal_scalar::int;
use gns_deform_core::star::{star, StarKind};
use gns_deform_core::{CRational, FormalScalar, Frame, FrameKind, Poly, Rational};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarKind {
    Q,
    P,
    Z,
    Zb,
    Y,
    Yb,
}

impl VarKind {
    pub fn prefix(self) -> &'static str {
        match self {
            VarKind::Q => "q",
            VarKind::P => "p",
            VarKind::Z => "z",
            VarKind::Zb => "zb",
            VarKind::Y => "y",
            VarKind::Yb => "yb",
        }
    }

    fn frame_kind(self) -> FrameKind {
        match self {
            VarKind::Q | VarKind::P => FrameKind::Weyl,
            _ => FrameKind::Wick,
        }
    }

    fn is_second(self) -> bool {
        matches!(self, VarKind::P | VarKind::Zb | VarKind::Yb)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    /// Nonnegative rational literal.
    Rat(Rational),
    I,
    /// `λ^e`.
    Lam(Rational),
    /// One-based index.
    Var(VarKind, usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Star(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Conj(Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{message} at position {position}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { position: self.pos, message: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn digits(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        Ok(s.parse().expect("digits"))
    }

    fn signed_int(&mut self) -> Result<BigInt, ParseError> {
        let neg = self.eat(b'-');
        let d = self.digits()?;
        Ok(if neg { -d } else { d })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'@') {
                lhs = Expr::Star(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        if self.eat(b'(') {
            let at = self.pos;
            let num = self.signed_int()?;
            self.expect(b'/')?;
            let den = self.digits()?;
            self.expect(b')')?;
            if den.is_zero() {
                return Err(ParseError { position: at, message: "zero denominator".into() });
            }
            return match base {
                Expr::Lam(e) if e == int(1) => Ok(Expr::Lam(Rational::new(num, den))),
                _ => Err(ParseError { position: at, message: "fractional powers apply to lam only".into() }),
            };
        }
        let at = self.pos;
        let k = self.digits()?;
        let k: u32 = k.try_into().map_err(|_| ParseError { position: at, message: "exponent too large".into() })?;
        Ok(Expr::Pow(Box::new(base), k))
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii").to_string()
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            None => self.err("unexpected end of input"),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.digits()?;
                let save = self.pos;
                // a '/' directly followed by digits continues the literal
                if self.eat(b'/') {
                    if matches!(self.peek(), Some(d) if d.is_ascii_digit()) {
                        let at = self.pos;
                        let den = self.digits()?;
                        if den.is_zero() {
                            return Err(ParseError { position: at, message: "zero denominator".into() });
                        }
                        return Ok(Expr::Rat(Rational::new(num, den)));
                    }
                    self.pos = save;
                    return self.err("expected denominator");
                }
                Ok(Expr::Rat(Rational::from_integer(num)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let word = self.ident();
                match word.as_str() {
                    "i" => Ok(Expr::I),
                    "lam" => Ok(Expr::Lam(int(1))),
                    "conj" => {
                        self.expect(b'(')?;
                        let e = self.expr()?;
                        self.expect(b')')?;
                        Ok(Expr::Conj(Box::new(e)))
                    }
                    _ => parse_var(&word).ok_or(ParseError { position: start, message: format!("unknown identifier {word:?}") }),
                }
            }
            Some(c) => self.err(format!("unexpected character {:?}", c as char)),
        }
    }
}

fn parse_var(word: &str) -> Option<Expr> {
    let split = word.find(|c: char| c.is_ascii_digit())?;
    let (name, idx) = word.split_at(split);
    let kind = match name {
        "q" => VarKind::Q,
        "p" => VarKind::P,
        "z" => VarKind::Z,
        "zb" => VarKind::Zb,
        "y" => VarKind::Y,
        "yb" => VarKind::Yb,
        _ => return None,
    };
    if idx.starts_with('0') {
        return None;
    }
    Some(Expr::Var(kind, idx.parse().ok()?))
}

pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) | Expr::Star(..) => 2,
        Expr::Neg(_) => 3,
        Expr::Pow(..) => 4,
        Expr::Lam(r) if *r != int(1) => 4,
        Expr::Rat(r) if r.is_negative() => 3,
        _ => 5,
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, r: &Rational) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if prec(e) < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Rat(r) if r.is_negative() => {
                write!(f, "-")?;
                write_rational(f, &-r)
            }
            Expr::Rat(r) => write_rational(f, r),
            Expr::I => write!(f, "i"),
            Expr::Lam(e) if *e == int(1) => write!(f, "lam"),
            Expr::Lam(e) => write!(f, "lam^({}/{})", e.numer(), e.denom()),
            Expr::Var(k, i) => write!(f, "{}{}", k.prefix(), i),
            Expr::Neg(x) => {
                write!(f, "-")?;
                write_child(f, x, 3)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                write_child(f, a, 1)?;
                write!(f, " {} ", if matches!(self, Expr::Add(..)) { "+" } else { "-" })?;
                write_child(f, b, 2)
            }
            Expr::Mul(a, b) | Expr::Star(a, b) => {
                write_child(f, a, 2)?;
                write!(f, "{}", if matches!(self, Expr::Mul(..)) { "*" } else { "@" })?;
                write_child(f, b, 3)
            }
            Expr::Pow(a, k) => {
                write_child(f, a, 5)?;
                write!(f, "^{k}")
            }
            Expr::Conj(x) => write!(f, "conj({x})"),
        }
    }
}

impl Expr {
    /// Largest variable index used, per frame kind.
    pub fn max_index(&self) -> usize {
        match self {
            Expr::Var(_, i) => *i,
            Expr::Neg(x) | Expr::Pow(x, _) | Expr::Conj(x) => x.max_index(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Star(a, b) => a.max_index().max(b.max_index()),
            _ => 0,
        }
    }

    /// Frame kind implied by the variables, if any are used.
    pub fn frame_kind(&self) -> Option<FrameKind> {
        match self {
            Expr::Var(k, _) => Some(k.frame_kind()),
            Expr::Neg(x) | Expr::Pow(x, _) | Expr::Conj(x) => x.frame_kind(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Star(a, b) => a.frame_kind().or(b.frame_kind()),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("variable {0} does not belong to a {1} frame")]
    WrongFrame(String, &'static str),
    #[error("variable {0} exceeds the frame dimension {1}")]
    IndexOutOfRange(String, usize),
    #[error(transparent)]
    Core(#[from] gns_deform_core::Error),
}

/// Evaluates `e` to a polynomial in `frame`, with `@` as the `kind` product.
pub fn eval(e: &Expr, frame: Frame, kind: StarKind) -> Result<Poly, EvalError> {
    Ok(match e {
        Expr::Rat(r) => Poly::constant(frame, FormalScalar::from_rational(r.clone())),
        Expr::I => Poly::constant(frame, FormalScalar::constant(CRational::i())),
        Expr::Lam(x) => Poly::constant(frame, FormalScalar::lambda_pow(x.clone())),
        Expr::Var(k, i) => {
            let name = format!("{}{}", k.prefix(), i);
            if k.frame_kind() != frame.kind {
                let fk = if frame.kind == FrameKind::Weyl { "weyl" } else { "wick" };
                return Err(EvalError::WrongFrame(name, fk));
            }
            if *i > frame.n {
                return Err(EvalError::IndexOutOfRange(name, frame.n));
            }
            if k.is_second() {
                Poly::second(frame, i - 1)
            } else {
                Poly::first(frame, i - 1)
            }
        }
        Expr::Neg(x) => -&eval(x, frame, kind)?,
        Expr::Add(a, b) => &eval(a, frame, kind)? + &eval(b, frame, kind)?,
        Expr::Sub(a, b) => &eval(a, frame, kind)? - &eval(b, frame, kind)?,
        Expr::Mul(a, b) => &eval(a, frame, kind)? * &eval(b, frame, kind)?,
        Expr::Star(a, b) => star(kind, &eval(a, frame, kind)?, &eval(b, frame, kind)?)?,
        Expr::Pow(a, k) => eval(a, frame, kind)?.pow(*k),
        Expr::Conj(x) => eval(x, frame, kind)?.conj(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use gns_deform_core::formal_scalar::rat;

    #[test]
    fn commutator_evaluates_to_i_lambda() {
        let e = parse("q1@p1 - p1@q1").unwrap();
        let w = Frame::weyl(1);
        let v = eval(&e, w, StarKind::WeylMoyal).unwrap();
        assert_eq!(v, Poly::constant(w, FormalScalar::monomial(int(1), CRational::i())));
    }

    #[test]
    fn pointwise_and_lambda_powers() {
        let k = Frame::wick(1);
        let e = parse("conj(z1)*z1").unwrap();
        assert_eq!(eval(&e, k, StarKind::Wick).unwrap(), &Poly::first(k, 0) * &Poly::second(k, 0));
        assert_eq!(parse("lam^(1/2)").unwrap(), Expr::Lam(rat(1, 2)));
        assert!(parse("q1^(1/2)").is_err());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("q1 + $").unwrap_err();
        assert_eq!(e.position, 5);
        assert!(parse("w1").is_err());
        assert!(parse("q0").is_err());
        assert!(parse("(q1").is_err());
        assert!(parse("1/").is_err());
    }

    #[test]
    fn print_reparses() {
        for s in ["-q1^2 - (p1 + 1/2)*lam^(3/2)", "conj(z1@zb1)@(i - 2)", "-(-q1)", "(q1 - p1) - (q1 - p1)"] {
            let e = parse(s).unwrap();
            assert_eq!(parse(&e.to_string()).unwrap(), e, "{s}");
        }
    }
}
