//! Recursive-descent parser and precedence-aware printer.
//!
//! ```text
//! expr    := ["-"] term (("+" | "-") term)*
//! term    := power (("*" | "/") power)*
//! power   := primary ["^" integer]
//! primary := number | "x" | "(" expr ")" | "abs" "(" expr ")"
//! ```

use std::fmt;

use thiserror::Error;

use super::Expr;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {offset}: expected one of {}", expected.join(", "))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<&'static str>,
}

const PRIMARY_START: &[&str] = &["number", "\"x\"", "\"(\"", "\"abs\""];

pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(&["\"+\"", "\"-\"", "\"*\"", "\"/\"", "\"^\"", "end of input"]));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(|b| b.is_ascii_whitespace()) {
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

    fn error(&self, expected: &[&'static str]) -> ParseError {
        ParseError {
            offset: self.pos,
            expected: expected.to_vec(),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = if self.eat(b'-') {
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
        loop {
            if self.eat(b'+') {
                acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.eat(b'-') {
                acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.power()?;
        loop {
            if self.eat(b'*') {
                acc = Expr::Mul(Box::new(acc), Box::new(self.power()?));
            } else if self.eat(b'/') {
                acc = Expr::Div(Box::new(acc), Box::new(self.power()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default();
        match digits.parse::<u32>() {
            Ok(n) if self.src.get(self.pos) != Some(&b'.') => Ok(Expr::Pow(Box::new(base), n)),
            _ => {
                self.pos = start;
                Err(self.error(&["non-negative integer exponent"]))
            }
        }
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok(Expr::X)
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error(&["\")\""]));
                }
                Ok(e)
            }
            Some(b'a') if self.src[self.pos..].starts_with(b"abs") => {
                self.pos += 3;
                if !self.eat(b'(') {
                    return Err(self.error(&["\"(\""]));
                }
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error(&["\")\""]));
                }
                Ok(Expr::Abs(Box::new(e)))
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            _ => Err(self.error(PRIMARY_START)),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.src.get(p.pos).is_some_and(u8::is_ascii_digit) {
                p.pos += 1;
            }
            p.pos - s
        };
        let int_len = digits(self);
        let mut frac_len = 0;
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            frac_len = digits(self);
        }
        if int_len + frac_len == 0 {
            self.pos = start;
            return Err(self.error(PRIMARY_START));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        text.parse::<f64>().map(Expr::Const).map_err(|_| {
            self.pos = start;
            self.error(&["number"])
        })
    }
}

/// Syntactic slot a subexpression is printed into.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Slot {
    /// Head of an `expr`: anything goes.
    Expr,
    /// Operand of `+`/`-` (right side), `*`/`/` (left side), or of a leading `-`.
    Term,
    /// Right operand of `*`/`/`.
    Power,
    /// Base of `^`.
    Primary,
}

fn natural_slot(e: &Expr) -> Slot {
    match e {
        Expr::Add(..) | Expr::Sub(..) | Expr::Neg(..) => Slot::Expr,
        Expr::Mul(..) | Expr::Div(..) => Slot::Term,
        Expr::Pow(..) => Slot::Power,
        Expr::Const(c) if *c < 0.0 || !c.is_finite() => Slot::Expr,
        Expr::Const(_) | Expr::X | Expr::Abs(_) => Slot::Primary,
    }
}

pub(super) fn write_expr(e: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write_in(e, Slot::Expr, f)
}

fn write_in(e: &Expr, slot: Slot, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if natural_slot(e) < slot {
        write!(f, "(")?;
        write_bare(e, f)?;
        write!(f, ")")
    } else {
        write_bare(e, f)
    }
}

fn write_bare(e: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match e {
        Expr::Const(c) => write!(f, "{c}"),
        Expr::X => write!(f, "x"),
        Expr::Neg(a) => {
            write!(f, "-")?;
            write_in(a, Slot::Term, f)
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            write_in(a, Slot::Expr, f)?;
            write!(f, " {} ", if matches!(e, Expr::Add(..)) { '+' } else { '-' })?;
            write_in(b, Slot::Term, f)
        }
        Expr::Mul(a, b) | Expr::Div(a, b) => {
            write_in(a, Slot::Term, f)?;
            write!(f, "{}", if matches!(e, Expr::Mul(..)) { '*' } else { '/' })?;
            write_in(b, Slot::Power, f)
        }
        Expr::Pow(a, n) => {
            write_in(a, Slot::Primary, f)?;
            write!(f, "^{n}")
        }
        Expr::Abs(a) => {
            write!(f, "abs(")?;
            write_in(a, Slot::Expr, f)?;
            write!(f, ")")
        }
    }
}
