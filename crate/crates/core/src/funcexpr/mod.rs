//! Expression trees in one variable and piecewise functions built from them.

mod parse;
mod piecewise;

use std::fmt;

use thiserror::Error;

use crate::polynomial::{Interval, Polynomial};

pub use parse::{parse_expr, ParseError};
pub use piecewise::{parse_piecewise, Piece, PiecewiseFn, SupDeviation, SUP_GRID};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FnError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("x = {x} lies outside the domain {domain}")]
    OutOfDomain { x: f64, domain: Interval },
    #[error("division by zero at x = {x}")]
    DivisionByZero { x: f64 },
    #[error("the stencil x ± {delta} around x = {x} crosses a piece boundary")]
    PieceBoundaryCrossed { x: f64, delta: f64 },
    #[error("invalid piecewise definition: {0}")]
    InvalidPieces(String),
    #[error("line {line}: {message}")]
    PieceSyntax { line: usize, message: String },
    #[error("expression is not a polynomial: {0}")]
    NotPolynomial(String),
}

/// Expression tree over the single variable `x`.
///
/// Parsed trees only contain non-negative constants; a leading minus sign
/// becomes [`Expr::Neg`].
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    X,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Abs(Box<Expr>),
}

impl Expr {
    /// A constant, wrapped in `Neg` when negative so the tree prints and
    /// reparses to itself.
    pub fn num(c: f64) -> Expr {
        if c < 0.0 {
            Expr::Neg(Box::new(Expr::Const(-c)))
        } else {
            Expr::Const(c)
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64, FnError> {
        Ok(match self {
            Expr::Const(c) => *c,
            Expr::X => x,
            Expr::Neg(a) => -a.eval(x)?,
            Expr::Add(a, b) => a.eval(x)? + b.eval(x)?,
            Expr::Sub(a, b) => a.eval(x)? - b.eval(x)?,
            Expr::Mul(a, b) => a.eval(x)? * b.eval(x)?,
            Expr::Div(a, b) => {
                let num = a.eval(x)?;
                let den = b.eval(x)?;
                if den == 0.0 {
                    return Err(FnError::DivisionByZero { x });
                }
                num / den
            }
            Expr::Pow(a, n) => a.eval(x)?.powi(*n as i32),
            Expr::Abs(a) => a.eval(x)?.abs(),
        })
    }

    /// Replaces every occurrence of `x` with `with`.
    pub fn substitute(&self, with: &Expr) -> Expr {
        let sub = |e: &Expr| Box::new(e.substitute(with));
        match self {
            Expr::Const(c) => Expr::Const(*c),
            Expr::X => with.clone(),
            Expr::Neg(a) => Expr::Neg(sub(a)),
            Expr::Add(a, b) => Expr::Add(sub(a), sub(b)),
            Expr::Sub(a, b) => Expr::Sub(sub(a), sub(b)),
            Expr::Mul(a, b) => Expr::Mul(sub(a), sub(b)),
            Expr::Div(a, b) => Expr::Div(sub(a), sub(b)),
            Expr::Pow(a, n) => Expr::Pow(sub(a), *n),
            Expr::Abs(a) => Expr::Abs(sub(a)),
        }
    }

    /// Every denominator appearing in the tree, outermost first.
    pub fn denominators(&self) -> Vec<&Expr> {
        let mut out = Vec::new();
        self.collect_denominators(&mut out);
        out
    }

    fn collect_denominators<'a>(&'a self, out: &mut Vec<&'a Expr>) {
        match self {
            Expr::Const(_) | Expr::X => {}
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Abs(a) => a.collect_denominators(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.collect_denominators(out);
                b.collect_denominators(out);
            }
            Expr::Div(a, b) => {
                out.push(b);
                a.collect_denominators(out);
                b.collect_denominators(out);
            }
        }
    }

    pub fn from_polynomial(p: &Polynomial) -> Expr {
        let term = |i: usize, mag: f64| -> Expr {
            let power = match i {
                0 => return Expr::Const(mag),
                1 => Expr::X,
                _ => Expr::Pow(Box::new(Expr::X), i as u32),
            };
            if mag == 1.0 {
                power
            } else {
                Expr::Mul(Box::new(Expr::Const(mag)), Box::new(power))
            }
        };
        let mut acc: Option<Expr> = None;
        for (i, &c) in p.coeffs().iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let t = term(i, c.abs());
            acc = Some(match acc {
                None if c < 0.0 => Expr::Neg(Box::new(t)),
                None => t,
                Some(prev) if c < 0.0 => Expr::Sub(Box::new(prev), Box::new(t)),
                Some(prev) => Expr::Add(Box::new(prev), Box::new(t)),
            });
        }
        acc.unwrap_or(Expr::Const(0.0))
    }

    /// Expands the tree into a dense polynomial when it is one.
    pub fn to_polynomial(&self) -> Result<Polynomial, FnError> {
        Ok(match self {
            Expr::Const(c) => Polynomial::constant(*c),
            Expr::X => Polynomial::x(),
            Expr::Neg(a) => -&a.to_polynomial()?,
            Expr::Add(a, b) => &a.to_polynomial()? + &b.to_polynomial()?,
            Expr::Sub(a, b) => &a.to_polynomial()? - &b.to_polynomial()?,
            Expr::Mul(a, b) => &a.to_polynomial()? * &b.to_polynomial()?,
            Expr::Div(a, b) => {
                let den = b.to_polynomial()?;
                match den.degree() {
                    Some(0) => a.to_polynomial()?.scale(1.0 / den.coeffs()[0]),
                    _ => {
                        return Err(FnError::NotPolynomial(format!(
                            "division by non-constant or zero `{b}`"
                        )))
                    }
                }
            }
            Expr::Pow(a, n) => a.to_polynomial()?.powi(*n),
            Expr::Abs(_) => {
                return Err(FnError::NotPolynomial(format!(
                    "absolute value in `{self}`"
                )))
            }
        })
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        parse::write_expr(self, f)
    }
}

impl std::str::FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_expr(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_and_division_by_zero() {
        let e = parse_expr("abs(x^2 - 4) + x").unwrap();
        assert_eq!(e.eval(-3.0).unwrap(), 2.0);
        let r = parse_expr("1/(x - 2)").unwrap();
        assert_eq!(r.eval(2.0), Err(FnError::DivisionByZero { x: 2.0 }));
    }

    #[test]
    fn polynomial_conversion_both_ways() {
        let p = parse_expr("(x + 2)*(x + 1)*(x - 1)*(x - 2)").unwrap().to_polynomial().unwrap();
        assert_eq!(p, Polynomial::new(vec![4.0, 0.0, -5.0, 0.0, 1.0]));
        let back = Expr::from_polynomial(&p);
        assert_eq!(back.to_string(), "4 - 5*x^2 + x^4");
        assert_eq!(back.to_polynomial().unwrap(), p);
        assert_eq!(parse_expr("x/2").unwrap().to_polynomial().unwrap(), Polynomial::new(vec![0.0, 0.5]));
        assert!(parse_expr("abs(x)").unwrap().to_polynomial().is_err());
        assert!(parse_expr("1/x").unwrap().to_polynomial().is_err());
        assert_eq!(Expr::from_polynomial(&Polynomial::zero()), Expr::Const(0.0));
        assert_eq!(Expr::from_polynomial(&Polynomial::new(vec![-1.0])).to_string(), "-1");
    }

    #[test]
    fn denominators_are_collected() {
        let e = parse_expr("1/(x - 2) + x/(abs(x)^3)").unwrap();
        let d: Vec<String> = e.denominators().iter().map(|d| d.to_string()).collect();
        assert_eq!(d, vec!["x - 2", "abs(x)^3"]);
    }
}
