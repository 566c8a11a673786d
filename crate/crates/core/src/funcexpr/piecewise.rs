use std::fmt;

use super::{parse_expr, Expr, FnError};
use crate::exec::Exec;
use crate::polynomial::{Interval, Polynomial};

/// Grid size of the coarse pass in [`PiecewiseFn::sup_deviation`].
pub const SUP_GRID: usize = 10_001;
const REFINE_ROUNDS: usize = 3;
const SINGULARITY_SCAN: usize = 4097;

/// One piece of a piecewise function: an interval with per-end closure flags.
#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
    pub expr: Expr,
}

impl Piece {
    pub fn owns(&self, x: f64) -> bool {
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{} : {}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' },
            self.expr
        )
    }
}

/// Maximum of `|f - p|` over an interval, with the number of samples that
/// hit a singularity and were skipped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupDeviation {
    pub value: f64,
    pub argmax: f64,
    pub singular_samples: usize,
}

/// A function given by expressions on consecutive pieces of a closed interval.
///
/// Every point of the domain is owned by exactly one piece.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseFn {
    pieces: Vec<Piece>,
    domain: Interval,
    singular: Vec<f64>,
}

impl PiecewiseFn {
    pub fn new(mut pieces: Vec<Piece>) -> Result<Self, FnError> {
        let bad = |m: String| Err(FnError::InvalidPieces(m));
        if pieces.is_empty() {
            return bad("no pieces".into());
        }
        pieces.sort_by(|a, b| a.lo.total_cmp(&b.lo).then(a.hi.total_cmp(&b.hi)));
        for p in &pieces {
            if !(p.lo.is_finite() && p.hi.is_finite()) || p.lo > p.hi {
                return bad(format!("piece {p} has invalid bounds"));
            }
            if p.lo == p.hi && !(p.lo_closed && p.hi_closed) {
                return bad(format!("piece {p} is empty"));
            }
        }
        for w in pieces.windows(2) {
            if w[0].hi != w[1].lo {
                return bad(format!("gap or overlap between `{}` and `{}`", w[0], w[1]));
            }
            if w[0].hi_closed == w[1].lo_closed {
                return bad(format!(
                    "point {} must be owned by exactly one of `{}` and `{}`",
                    w[0].hi, w[0], w[1]
                ));
            }
        }
        let (first, last) = (&pieces[0], &pieces[pieces.len() - 1]);
        if !first.lo_closed || !last.hi_closed {
            return bad("the domain must be a closed interval".into());
        }
        let domain = Interval::new(first.lo, last.hi).map_err(|e| FnError::InvalidPieces(e.to_string()))?;
        let singular = locate_singularities(&pieces);
        Ok(PiecewiseFn {
            pieces,
            domain,
            singular,
        })
    }

    /// A single expression on a closed interval.
    pub fn single(expr: Expr, domain: Interval) -> Self {
        Self::new(vec![Piece {
            lo: domain.lo(),
            hi: domain.hi(),
            lo_closed: true,
            hi_closed: true,
            expr,
        }])
        .expect("a single closed piece is always valid")
    }

    pub fn from_polynomial(p: &Polynomial, domain: Interval) -> Self {
        Self::single(Expr::from_polynomial(p), domain)
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    /// Points where some denominator vanishes, located numerically.
    pub fn singular_points(&self) -> &[f64] {
        &self.singular
    }

    /// Distance from `x` to the nearest singular point.
    pub fn singularity_distance(&self, x: f64) -> f64 {
        self.singular
            .iter()
            .map(|s| (x - s).abs())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn piece_index(&self, x: f64) -> Option<usize> {
        self.pieces.iter().position(|p| p.owns(x))
    }

    pub fn eval(&self, x: f64) -> Result<f64, FnError> {
        match self.piece_index(x) {
            Some(i) => self.pieces[i].expr.eval(x),
            None => Err(FnError::OutOfDomain {
                x,
                domain: self.domain,
            }),
        }
    }

    /// Central second difference `(f(x-δ) - 2f(x) + f(x+δ)) / δ²` within one piece.
    pub fn numeric_second_derivative(&self, x: f64, delta: f64) -> Result<f64, FnError> {
        let out = |x| FnError::OutOfDomain {
            x,
            domain: self.domain,
        };
        let home = self.piece_index(x).ok_or_else(|| out(x))?;
        for s in [x - delta, x + delta] {
            match self.piece_index(s) {
                None => return Err(out(s)),
                Some(i) if i != home => return Err(FnError::PieceBoundaryCrossed { x, delta }),
                Some(_) => {}
            }
        }
        let e = &self.pieces[home].expr;
        Ok((e.eval(x - delta)? - 2.0 * e.eval(x)? + e.eval(x + delta)?) / (delta * delta))
    }

    /// `|f(x0) - p(x0)|`.
    pub fn pointwise_deviation(&self, p: &Polynomial, x0: f64) -> Result<f64, FnError> {
        Ok((self.eval(x0)? - p.eval(x0)).abs())
    }

    /// `max |f - p|` over `iv`: a [`SUP_GRID`]-point scan followed by three
    /// rounds of trisection around the best sample. Samples that divide by
    /// zero are skipped and counted.
    pub fn sup_deviation(&self, p: &Polynomial, iv: Interval, exec: Exec) -> Result<SupDeviation, FnError> {
        if !self.domain.contains_interval(&iv) {
            let x = if iv.lo() < self.domain.lo() { iv.lo() } else { iv.hi() };
            return Err(FnError::OutOfDomain {
                x,
                domain: self.domain,
            });
        }
        let dev = |x: f64| self.eval(x).ok().map(|v| (v - p.eval(x)).abs());
        let coarse = exec.grid_max(SUP_GRID, |j| dev(iv.grid_point(j, SUP_GRID)));
        let Some(j) = coarse.index else {
            return Ok(SupDeviation {
                value: f64::NAN,
                argmax: f64::NAN,
                singular_samples: coarse.skipped,
            });
        };

        let mut best = (coarse.value, iv.grid_point(j, SUP_GRID));
        let mut a = iv.grid_point(j.saturating_sub(1), SUP_GRID);
        let mut b = iv.grid_point((j + 1).min(SUP_GRID - 1), SUP_GRID);
        let mut skipped = coarse.skipped;
        for _ in 0..REFINE_ROUNDS {
            for i in 0..=6 {
                let x = a + (b - a) * (i as f64) / 6.0;
                match dev(x) {
                    Some(v) if v > best.0 => best = (v, x),
                    Some(_) => {}
                    None => skipped += 1,
                }
            }
            let third = (b - a) / 3.0;
            a = (best.1 - 0.5 * third).max(iv.lo());
            b = (best.1 + 0.5 * third).min(iv.hi());
        }
        Ok(SupDeviation {
            value: best.0,
            argmax: best.1,
            singular_samples: skipped,
        })
    }

    /// The same function expressed on `[-1, 1]`: `g(u) = f(mid + half·u)`,
    /// restricted to `from`.
    pub fn affine_pullback(&self, from: Interval) -> Result<PiecewiseFn, FnError> {
        if from.width() <= 0.0 {
            return Err(FnError::InvalidPieces(format!("pullback interval {from} is degenerate")));
        }
        if !self.domain.contains_interval(&from) {
            return Err(FnError::OutOfDomain {
                x: if from.lo() < self.domain.lo() { from.lo() } else { from.hi() },
                domain: self.domain,
            });
        }
        let (mid, half) = (from.midpoint(), 0.5 * from.width());
        if mid == 0.0 && half == 1.0 {
            return Ok(self.clone());
        }
        let mut inner = if half == 1.0 {
            Expr::X
        } else {
            Expr::Mul(Box::new(Expr::Const(half)), Box::new(Expr::X))
        };
        if mid > 0.0 {
            inner = Expr::Add(Box::new(inner), Box::new(Expr::Const(mid)));
        } else if mid < 0.0 {
            inner = Expr::Sub(Box::new(inner), Box::new(Expr::Const(-mid)));
        }
        let to_u = |x: f64| {
            if x == from.lo() {
                -1.0
            } else if x == from.hi() {
                1.0
            } else {
                (x - mid) / half
            }
        };

        let mut pieces = Vec::new();
        for p in &self.pieces {
            let (lo, lo_closed) = if p.lo < from.lo() { (from.lo(), true) } else { (p.lo, p.lo_closed) };
            let (hi, hi_closed) = if p.hi > from.hi() { (from.hi(), true) } else { (p.hi, p.hi_closed) };
            if lo > hi || (lo == hi && !(lo_closed && hi_closed)) {
                continue;
            }
            pieces.push(Piece {
                lo: to_u(lo),
                hi: to_u(hi),
                lo_closed,
                hi_closed,
                expr: p.expr.substitute(&inner),
            });
        }
        PiecewiseFn::new(pieces)
    }

    /// `c·f`, built so the printed form reparses to the same tree.
    pub fn scaled(&self, c: f64) -> PiecewiseFn {
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                let prod = Expr::Mul(Box::new(Expr::Const(c.abs())), Box::new(p.expr.clone()));
                Piece {
                    expr: if c < 0.0 { Expr::Neg(Box::new(prod)) } else { prod },
                    ..p.clone()
                }
            })
            .collect();
        PiecewiseFn {
            pieces,
            domain: self.domain,
            singular: self.singular.clone(),
        }
    }
}

impl fmt::Display for PiecewiseFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.pieces.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for PiecewiseFn {
    type Err = FnError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_piecewise(s)
    }
}

/// Parses pieces of the form `[a, b) : <expr>`, one per line (or separated
/// by `;`). `#` starts a comment.
pub fn parse_piecewise(text: &str) -> Result<PiecewiseFn, FnError> {
    let mut pieces = Vec::new();
    for (n, raw) in text.split(['\n', ';']).enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| FnError::PieceSyntax { line: n + 1, message };
        let lo_closed = match line.as_bytes()[0] {
            b'[' => true,
            b'(' => false,
            _ => return Err(err("expected `[` or `(`".into())),
        };
        let close = line
            .find([']', ')'])
            .ok_or_else(|| err("expected `]` or `)`".into()))?;
        let hi_closed = line.as_bytes()[close] == b']';
        let (a, b) = line[1..close]
            .split_once(',')
            .ok_or_else(|| err("expected `a, b` bounds".into()))?;
        let bound = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| err(format!("invalid bound `{}`", s.trim())))
        };
        let rest = line[close + 1..].trim_start();
        let body = rest
            .strip_prefix(':')
            .ok_or_else(|| err("expected `:` after the interval".into()))?;
        let expr = parse_expr(body).map_err(|e| err(e.to_string()))?;
        pieces.push(Piece {
            lo: bound(a)?,
            hi: bound(b)?,
            lo_closed,
            hi_closed,
            expr,
        });
    }
    PiecewiseFn::new(pieces)
}

fn locate_singularities(pieces: &[Piece]) -> Vec<f64> {
    let mut out = Vec::new();
    for p in pieces {
        if p.lo == p.hi {
            continue;
        }
        let iv = Interval::new(p.lo, p.hi).expect("validated piece bounds");
        for den in p.expr.denominators() {
            out.extend(zeros_of(den, iv).into_iter().filter(|&x| p.owns(x)));
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|b, a| *b - *a <= 1e-9);
    out
}

/// Zeros of `e` on `iv`: sign changes refined by bisection plus local minima
/// of `|e|` that refine to (numerically) zero.
fn zeros_of(e: &Expr, iv: Interval) -> Vec<f64> {
    let xs = iv.linspace(SINGULARITY_SCAN);
    let vals: Vec<f64> = xs.iter().map(|&x| e.eval(x).unwrap_or(0.0)).collect();
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let eval = |x: f64| e.eval(x).unwrap_or(0.0);
    let mut out = Vec::new();
    for i in 0..xs.len() {
        let v = vals[i];
        if v == 0.0 {
            out.push(xs[i]);
            continue;
        }
        if i + 1 < xs.len() && vals[i + 1] != 0.0 && (v < 0.0) != (vals[i + 1] < 0.0) {
            let (mut a, mut b) = (xs[i], xs[i + 1]);
            let neg_a = v < 0.0;
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                let fm = eval(m);
                if fm == 0.0 || (fm < 0.0) != neg_a {
                    b = m;
                } else {
                    a = m;
                }
            }
            // A sign change through a pole of the denominator itself is not a zero.
            let m = 0.5 * (a + b);
            if eval(m).abs() <= 1e-6 * scale {
                out.push(m);
            }
        } else if i > 0 && i + 1 < xs.len() && v.abs() <= vals[i - 1].abs() && v.abs() <= vals[i + 1].abs() {
            let m = golden_min(|x| eval(x).abs(), xs[i - 1], xs[i + 1]);
            if eval(m).abs() <= 1e-12 * scale {
                out.push(m);
            }
        }
    }
    out
}

fn golden_min<F: Fn(f64) -> f64>(g: F, mut a: f64, mut b: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..200 {
        if b - a <= 1e-15 * (1.0 + a.abs()) {
            break;
        }
        if gc < gd {
            b = d;
            d = c;
            gd = gc;
            c = b - r * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + r * (b - a);
            gd = g(d);
        }
    }
    if gc < gd {
        c
    } else {
        d
    }
}
