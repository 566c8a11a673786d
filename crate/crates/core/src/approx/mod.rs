//! Best uniform (co)convex polynomial approximation and Jackson constants.
//!
//! `E_n(f, Y) = inf ‖f - p‖∞` over polynomials of degree `< n` lying in
//! `Δ²(Y)` is approximated by a linear program on a finite grid: minimise
//! `ε` subject to `|f(x_j) - p(x_j)| ≤ ε` and `σ_i p''(x_j) ≥ 0` at grid
//! points of subinterval `i`. Shape constraints between grid points are not
//! enforced, so the result is exact only up to discretisation.
//!
//! The LP has `n + 1` columns and one row per constraint; it is solved in
//! dual form (few rows, many columns) and the polynomial is read off the
//! simplex multipliers.

pub mod lp;

use std::f64::consts::PI;

use thiserror::Error;

use crate::funcexpr::{FnError, PiecewiseFn};
use crate::polynomial::{Interval, Polynomial};
use crate::shape::{ShapeError, YPartition};
use crate::smoothness::{self, ModulusMode, ModulusSpec, SmoothnessError};
use crate::exec::Exec;

use lp::{solve_standard, LpError};

/// Slack allowed on `σ p'' ≥ 0` when validating a returned polynomial.
pub const SHAPE_TOL: f64 = 1e-9;
/// Stop grid doubling once `ε` moves by less than this.
pub const REFINE_TOL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ApproxError {
    #[error("grid of {grid} points is too small for n = {n} (need at least 4n)")]
    GridTooSmall { grid: usize, n: usize },
    #[error("n must be at least 1")]
    ZeroDegree,
    #[error("deviation {deviation} > 0 with a vanishing modulus: no finite constant exists")]
    InconsistentDegenerate { deviation: f64 },
    #[error("invalid Jackson inputs: {0}")]
    InvalidJackson(String),
    #[error("no grid point could be evaluated")]
    NoSamples,
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Fn(#[from] FnError),
    #[error(transparent)]
    Smoothness(#[from] SmoothnessError),
    #[error(transparent)]
    Shape(#[from] ShapeError),
}

/// Best shape-constrained polynomial on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxResult {
    /// Degree `≤ n - 1`, monomial coefficients in `x`.
    pub poly: Polynomial,
    /// `max_j |f(x_j) - poly(x_j)|` over the grid.
    pub epsilon: f64,
    /// Grid points where the error is within the activation tolerance of `epsilon`.
    pub active_points: Vec<f64>,
    pub grid_size: usize,
    /// Optimal value reported by the LP itself.
    pub lp_epsilon: f64,
    /// Largest violation of `σ p'' ≥ 0` over the constrained grid points (≤ 0 when feasible).
    pub max_shape_violation: f64,
}

/// Chebyshev–Lobatto points on `iv` with the points of `extra` inserted.
pub fn chebyshev_grid(iv: Interval, size: usize, extra: &[f64]) -> Vec<f64> {
    let (mid, half) = (iv.midpoint(), 0.5 * iv.width());
    let last = (size.max(2) - 1) as f64;
    let mut xs: Vec<f64> = (0..size.max(2))
        .map(|j| {
            if j == 0 {
                iv.lo()
            } else if j as f64 == last {
                iv.hi()
            } else {
                mid - half * (PI * j as f64 / last).cos()
            }
        })
        .collect();
    xs.extend_from_slice(extra);
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}

/// `(T_i(u), T_i''(u))` for `i < n`.
fn chebyshev_with_second(u: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut t = vec![0.0; n];
    let mut d1 = vec![0.0; n];
    let mut d2 = vec![0.0; n];
    for i in 0..n {
        match i {
            0 => t[0] = 1.0,
            1 => {
                t[1] = u;
                d1[1] = 1.0;
            }
            _ => {
                t[i] = 2.0 * u * t[i - 1] - t[i - 2];
                d1[i] = 2.0 * t[i - 1] + 2.0 * u * d1[i - 1] - d1[i - 2];
                d2[i] = 4.0 * d1[i - 1] + 2.0 * u * d2[i - 1] - d2[i - 2];
            }
        }
    }
    (t, d2)
}

fn chebyshev_to_monomial(coeffs: &[f64]) -> Polynomial {
    let u = Polynomial::x();
    let mut prev = Polynomial::constant(1.0);
    let mut cur = u.clone();
    let mut acc = Polynomial::zero();
    for (i, &c) in coeffs.iter().enumerate() {
        let ti = match i {
            0 => Polynomial::constant(1.0),
            1 => u.clone(),
            _ => {
                let next = &(&u * &cur).scale(2.0) - &prev;
                prev = std::mem::replace(&mut cur, next);
                cur.clone()
            }
        };
        acc = &acc + &ti.scale(c);
    }
    acc
}

fn solve_minimax(
    f: &PiecewiseFn,
    n: usize,
    iv: Interval,
    shape: Option<&YPartition>,
    grid_size: usize,
) -> Result<ApproxResult, ApproxError> {
    if n == 0 {
        return Err(ApproxError::ZeroDegree);
    }
    if grid_size < 4 * n {
        return Err(ApproxError::GridTooSmall { grid: grid_size, n });
    }
    if !f.domain().contains_interval(&iv) {
        return Err(FnError::OutOfDomain {
            x: iv.lo(),
            domain: f.domain(),
        }
        .into());
    }
    let ys = shape.map_or(&[][..], |y| y.points());
    let grid = chebyshev_grid(iv, grid_size, ys);
    let (mid, half) = (iv.midpoint(), 0.5 * iv.width());

    let samples: Vec<(f64, f64)> = grid
        .iter()
        .filter_map(|&x| f.eval(x).ok().map(|v| (x, v)))
        .collect();
    if samples.is_empty() {
        return Err(ApproxError::NoSamples);
    }

    // Primal rows g·(a, ε) ≤ h become dual columns.
    let mut cols: Vec<Vec<f64>> = Vec::new();
    let mut costs: Vec<f64> = Vec::new();
    for &(x, fx) in &samples {
        let (t, _) = chebyshev_with_second((x - mid) / half, n);
        // p(x) - ε ≤ f(x)
        let mut up = t.clone();
        up.push(-1.0);
        cols.push(up);
        costs.push(fx);
        // -p(x) - ε ≤ -f(x)
        let mut down: Vec<f64> = t.iter().map(|v| -v).collect();
        down.push(-1.0);
        cols.push(down);
        costs.push(-fx);
    }
    let mut shape_points: Vec<(f64, i8)> = Vec::new();
    if let Some(y) = shape {
        let subs = y.subintervals();
        let signs = y.sign_pattern();
        for &x in &grid {
            if ys.contains(&x) {
                continue;
            }
            let i = subs.iter().position(|s| s.contains(x)).expect("grid lies in the interval");
            shape_points.push((x, signs[i]));
            let (_, d2) = chebyshev_with_second((x - mid) / half, n);
            let norm = d2.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if norm == 0.0 {
                continue;
            }
            // -σ p''(x) ≤ 0, row-normalised.
            let mut row: Vec<f64> = d2.iter().map(|v| -f64::from(signs[i]) * v / norm).collect();
            row.push(0.0);
            cols.push(row);
            costs.push(0.0);
        }
    }

    // Dual in standard form: for each primal variable, Σ_r y_r g_r = -c.
    let mut rows = vec![vec![0.0; cols.len()]; n + 1];
    for (r, col) in cols.iter().enumerate() {
        for i in 0..n {
            rows[i][r] = col[i];
        }
        rows[n][r] = -col[n];
    }
    let mut rhs = vec![0.0; n + 1];
    rhs[n] = 1.0;
    let sol = solve_standard(&rows, &rhs, &costs)?;

    let coeffs_u = &sol.multipliers[..n];
    let lp_epsilon = -sol.multipliers[n];
    let in_u = chebyshev_to_monomial(coeffs_u);
    let poly = in_u.compose(&Polynomial::new(vec![-mid / half, 1.0 / half]));

    let errors: Vec<f64> = samples.iter().map(|&(x, fx)| (fx - poly.eval(x)).abs()).collect();
    let epsilon = errors.iter().fold(0.0f64, |m, &e| m.max(e));
    let activation = 1e-7 * (1.0 + epsilon);
    let active_points = samples
        .iter()
        .zip(&errors)
        .filter(|(_, &e)| e >= epsilon - activation)
        .map(|(&(x, _), _)| x)
        .collect();
    let second = poly.derivative(2);
    let max_shape_violation = shape_points
        .iter()
        .map(|&(x, s)| -f64::from(s) * second.eval(x))
        .fold(f64::NEG_INFINITY, f64::max);

    Ok(ApproxResult {
        poly,
        epsilon,
        active_points,
        grid_size: grid.len(),
        lp_epsilon,
        max_shape_violation: if shape_points.is_empty() { 0.0 } else { max_shape_violation },
    })
}

/// Best polynomial of degree `< n` in `Δ²(Y)` on a Chebyshev grid of
/// `grid_size` points over `Y.interval` (plus the points of `Y`).
pub fn best_shape_approx(
    f: &PiecewiseFn,
    n: usize,
    y: &YPartition,
    grid_size: usize,
) -> Result<ApproxResult, ApproxError> {
    solve_minimax(f, n, y.interval(), Some(y), grid_size)
}

/// Plain minimax polynomial of degree `< n` on the grid, no shape constraints.
pub fn minimax_approx(f: &PiecewiseFn, n: usize, iv: Interval, grid_size: usize) -> Result<ApproxResult, ApproxError> {
    solve_minimax(f, n, iv, None, grid_size)
}

/// Doubles the grid (keeping the Lobatto points nested) until `ε` changes by
/// less than [`REFINE_TOL`] or the grid would exceed `max_grid`.
pub fn best_shape_approx_refined(
    f: &PiecewiseFn,
    n: usize,
    y: &YPartition,
    start_grid: usize,
    max_grid: usize,
) -> Result<ApproxResult, ApproxError> {
    let mut size = start_grid.max(4 * n);
    let mut best = best_shape_approx(f, n, y, size)?;
    while 2 * size - 1 <= max_grid {
        size = 2 * size - 1;
        let next = best_shape_approx(f, n, y, size)?;
        let done = (next.epsilon - best.epsilon).abs() < REFINE_TOL;
        best = next;
        if done {
            break;
        }
    }
    Ok(best)
}

/// `c` in `‖f - p_n‖ ≤ (c / n²) ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacksonReport {
    pub deviation: f64,
    pub n: usize,
    pub omega: f64,
    pub c: f64,
    /// `omega == 0` (then `deviation == 0` and `c` is 0 by convention).
    pub degenerate: bool,
}

impl JacksonReport {
    /// Whether `deviation ≤ (c / n²) ω` for the given constant.
    pub fn bound_holds_for(&self, c: f64) -> bool {
        let n2 = (self.n * self.n) as f64;
        let rhs = c / n2 * self.omega;
        self.deviation <= rhs + 1e-12 * (1.0 + rhs.abs())
    }
}

pub fn jackson_constant(deviation: f64, n: usize, omega: f64) -> Result<JacksonReport, ApproxError> {
    if !(deviation >= 0.0 && omega >= 0.0 && n >= 1) {
        return Err(ApproxError::InvalidJackson(format!(
            "need deviation >= 0, omega >= 0, n >= 1; got ({deviation}, {n}, {omega})"
        )));
    }
    if omega == 0.0 {
        if deviation > 0.0 {
            return Err(ApproxError::InconsistentDegenerate { deviation });
        }
        return Ok(JacksonReport {
            deviation,
            n,
            omega,
            c: 0.0,
            degenerate: true,
        });
    }
    Ok(JacksonReport {
        deviation,
        n,
        omega,
        c: deviation * (n * n) as f64 / omega,
        degenerate: false,
    })
}

/// Which norm of `f - p` enters the bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeviationKind {
    /// `|f(x0) - p(x0)|`.
    Pointwise(f64),
    /// `max |f - p|` over the interval.
    Sup(Interval),
}

/// How `ω` is obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModulusChoice {
    /// A standard- or replication-mode modulus of `f''`.
    Computed(ModulusSpec),
    /// A given difference value, weighted by `max |1 - x²|` over the interval.
    QuotedDelta { delta: f64, interval: Interval },
}

/// The pieces that went into a [`JacksonReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct JacksonCheck {
    pub report: JacksonReport,
    /// Where the deviation was measured (or attained, for `Sup`).
    pub deviation_at: f64,
    /// Difference value behind `omega` in replication modes.
    pub delta: Option<f64>,
    /// Where `delta` was attained, when it was computed.
    pub delta_at: Option<f64>,
}

pub fn check_jackson_bound(
    f: &PiecewiseFn,
    f2: &PiecewiseFn,
    p: &Polynomial,
    n: usize,
    modulus: &ModulusChoice,
    deviation: DeviationKind,
) -> Result<JacksonCheck, ApproxError> {
    let (dev, deviation_at) = match deviation {
        DeviationKind::Pointwise(x0) => (f.pointwise_deviation(p, x0)?, x0),
        DeviationKind::Sup(iv) => {
            let s = f.sup_deviation(p, iv, Exec::default())?;
            (s.value, s.argmax)
        }
    };
    let (omega, delta, delta_at) = match modulus {
        ModulusChoice::Computed(spec) => match spec.mode() {
            ModulusMode::Standard => (smoothness::dt_modulus_standard(f2, spec, Exec::default())?, None, None),
            ModulusMode::Replication { .. } => {
                let m = smoothness::dt_modulus_replication(f2, spec)?;
                (m.value, Some(m.delta), Some(m.argmax))
            }
        },
        ModulusChoice::QuotedDelta { delta, interval } => {
            (smoothness::apply_replication_weight(*delta, *interval), Some(*delta), None)
        }
    };
    Ok(JacksonCheck {
        report: jackson_constant(dev, n, omega)?,
        deviation_at,
        delta,
        delta_at,
    })
}
