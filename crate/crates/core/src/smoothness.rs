//! Symmetric finite differences and weighted Ditzian–Totik moduli of
//! smoothness in the uniform norm.
//!
//! Two evaluation modes are provided:
//!
//! - [`dt_modulus_standard`] follows the textbook definition on `[-1, 1]`:
//!   `ω^φ_{k,r}(g, t) = sup_{0<h≤t} ‖φ^r Δ^k_{hφ}(g, ·)‖∞` with
//!   `φ(x) = √(1-x²)`. Difference tuples leaving `[-1, 1]` contribute 0.
//! - [`dt_modulus_replication`] reproduces the hand computation used in the
//!   worked examples: a fixed step `h` (not scaled by `φ`), the weight
//!   `|1 - x²|^{r/2}` maximised over an arbitrary interval (which may lie
//!   outside `[-1, 1]`), and no supremum over `h`.

use thiserror::Error;

use crate::exec::Exec;
use crate::funcexpr::{FnError, PiecewiseFn};
use crate::polynomial::Interval;

/// Number of log-spaced step sizes in `(0, t]`.
pub const STANDARD_H_GRID: usize = 64;
/// The smallest step tried is `t * STANDARD_H_SPAN`.
pub const STANDARD_H_SPAN: f64 = 1e-4;
/// Points in the x-grid over `[-1, 1]`.
pub const STANDARD_X_GRID: usize = 2001;
/// Points in the x-grid of replication mode.
pub const REPLICATION_X_GRID: usize = 2001;
/// Difference tuples with a sample this close to a singular point are skipped.
pub const SINGULARITY_RADIUS: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SmoothnessError {
    #[error("invalid modulus specification: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Fn(#[from] FnError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModulusMode {
    Standard,
    /// Fixed step `h`, weight evaluated over the spec's interval.
    Replication { h: f64 },
}

/// Parameters of a weighted modulus `ω^φ_{k,r}(·, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulusSpec {
    k: u32,
    r: u32,
    t: f64,
    mode: ModulusMode,
    interval: Interval,
}

impl ModulusSpec {
    pub fn standard(k: u32, r: u32, t: f64) -> Result<Self, SmoothnessError> {
        if !(t.is_finite() && t > 0.0) {
            return Err(SmoothnessError::InvalidSpec(format!("t must be positive, got {t}")));
        }
        Ok(ModulusSpec {
            k,
            r,
            t,
            mode: ModulusMode::Standard,
            interval: Interval::UNIT,
        })
    }

    pub fn replication(k: u32, r: u32, t: f64, interval: Interval, h: f64) -> Result<Self, SmoothnessError> {
        let invalid = |m: String| Err(SmoothnessError::InvalidSpec(m));
        if k == 0 {
            return invalid("replication mode needs k >= 1".into());
        }
        if !(t.is_finite() && t > 0.0) {
            return invalid(format!("t must be positive, got {t}"));
        }
        if !(h > 0.0 && h <= t) {
            return invalid(format!("step h = {h} must satisfy 0 < h <= t = {t}"));
        }
        if (k as f64) * h > interval.width() {
            return invalid(format!("k·h = {} exceeds the width of {interval}", k as f64 * h));
        }
        Ok(ModulusSpec {
            k,
            r,
            t,
            mode: ModulusMode::Replication { h },
            interval,
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn mode(&self) -> ModulusMode {
        self.mode
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    /// The step sizes scanned in standard mode, ascending and ending at `t`.
    pub fn h_grid(&self) -> Vec<f64> {
        let last = (STANDARD_H_GRID - 1) as f64;
        (0..STANDARD_H_GRID)
            .map(|j| self.t * STANDARD_H_SPAN.powf((last - j as f64) / last))
            .collect()
    }
}

fn binomial(k: u32, i: u32) -> f64 {
    (0..i).fold(1.0, |acc, j| acc * f64::from(k - j) / f64::from(j + 1))
}

/// `Σ_{i=0}^{k} C(k,i) (-1)^{k-i} g(x - k·step/2 + i·step)`.
pub fn sym_diff(g: &PiecewiseFn, x: f64, step: f64, k: u32) -> Result<f64, FnError> {
    let start = x - f64::from(k) * step / 2.0;
    let samples: Vec<f64> = (0..=k).map(|i| start + f64::from(i) * step).collect();
    let domain = g.domain();
    if let Some(&s) = samples.iter().find(|&&s| !domain.contains(s)) {
        return Err(FnError::OutOfDomain { x: s, domain });
    }
    let mut acc = 0.0;
    for (i, &s) in samples.iter().enumerate() {
        let i = i as u32;
        let sign = if (k - i).is_multiple_of(2) { 1.0 } else { -1.0 };
        acc += sign * binomial(k, i) * g.eval(s)?;
    }
    Ok(acc)
}

/// Difference at `x` if every sample is inside `within` and away from
/// singularities; `None` otherwise.
fn guarded_diff(g: &PiecewiseFn, x: f64, step: f64, k: u32, within: Interval) -> Option<f64> {
    let start = x - f64::from(k) * step / 2.0;
    let end = start + f64::from(k) * step;
    if !(within.contains(start) && within.contains(end)) {
        return None;
    }
    if !g.singular_points().is_empty()
        && (0..=k).any(|i| g.singularity_distance(start + f64::from(i) * step) < SINGULARITY_RADIUS)
    {
        return None;
    }
    sym_diff(g, x, step, k).ok()
}

/// `φ(x)^r` with `φ(x) = √(1 - x²)`, computed without a square root for even `r`.
fn phi_pow(x: f64, r: u32) -> f64 {
    let base = (1.0 - x * x).max(0.0);
    if r.is_multiple_of(2) {
        base.powi((r / 2) as i32)
    } else {
        base.sqrt().powi(r as i32)
    }
}

/// Textbook weighted Ditzian–Totik modulus on `[-1, 1]` in the uniform norm.
pub fn dt_modulus_standard(g: &PiecewiseFn, spec: &ModulusSpec, exec: Exec) -> Result<f64, SmoothnessError> {
    if spec.mode != ModulusMode::Standard {
        return Err(SmoothnessError::InvalidSpec("expected a standard-mode spec".into()));
    }
    if !g.domain().contains_interval(&Interval::UNIT) {
        return Err(SmoothnessError::InvalidSpec(format!(
            "function domain {} does not contain [-1, 1]",
            g.domain()
        )));
    }
    let (k, r) = (spec.k, spec.r);
    let unit = Interval::UNIT;
    let xs = unit.linspace(STANDARD_X_GRID);

    if k == 0 {
        let m = exec.grid_max(xs.len(), |j| {
            let x = xs[j];
            if g.singularity_distance(x) < SINGULARITY_RADIUS {
                return None;
            }
            g.eval(x).ok().map(|v| (phi_pow(x, r) * v).abs())
        });
        return Ok(m.index.map_or(0.0, |_| m.value));
    }

    let hs = spec.h_grid();
    let nx = xs.len();
    let m = exec.grid_max(hs.len() * nx, |idx| {
        let (h, x) = (hs[idx / nx], xs[idx % nx]);
        let phi = (1.0 - x * x).max(0.0).sqrt();
        guarded_diff(g, x, h * phi, k, unit).map(|d| (phi_pow(x, r) * d).abs())
    });
    Ok(m.index.map_or(0.0, |_| m.value))
}

/// Outcome of [`dt_modulus_replication`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplicationModulus {
    /// `weight × |delta|`.
    pub value: f64,
    /// The difference of largest magnitude over the interior grid (signed).
    pub delta: f64,
    /// Where `delta` was attained.
    pub argmax: f64,
    /// `max |1 - x²|^{r/2}` over the interval.
    pub weight: f64,
}

/// `max_{x ∈ iv} |1 - x²|^{r/2}`, attained at an endpoint or at `x = 0`.
pub fn replication_weight(iv: Interval, r: u32) -> f64 {
    let w = |x: f64| (1.0 - x * x).abs();
    let mut m = w(iv.lo()).max(w(iv.hi()));
    if iv.contains(0.0) {
        m = m.max(1.0);
    }
    if r.is_multiple_of(2) {
        m.powi((r / 2) as i32)
    } else {
        m.powf(f64::from(r) / 2.0)
    }
}

/// `max |1 - x²|` over `iv` times `|delta_value|`: the weighting step applied
/// to a given difference value.
pub fn apply_replication_weight(delta_value: f64, iv: Interval) -> f64 {
    replication_weight(iv, 2) * delta_value.abs()
}

/// Modulus computed the way the worked examples do it by hand.
pub fn dt_modulus_replication(g: &PiecewiseFn, spec: &ModulusSpec) -> Result<ReplicationModulus, SmoothnessError> {
    let ModulusMode::Replication { h } = spec.mode else {
        return Err(SmoothnessError::InvalidSpec("expected a replication-mode spec".into()));
    };
    let iv = spec.interval;
    if !g.domain().contains_interval(&iv) {
        return Err(SmoothnessError::InvalidSpec(format!(
            "function domain {} does not contain {iv}",
            g.domain()
        )));
    }
    let half_span = f64::from(spec.k) * h / 2.0;
    let inner = Interval::new(iv.lo() + half_span, iv.hi() - half_span)
        .map_err(|e| SmoothnessError::InvalidSpec(e.to_string()))?;

    let mut best: Option<(f64, f64)> = None;
    for x in inner.linspace(REPLICATION_X_GRID) {
        if let Some(d) = guarded_diff(g, x, h, spec.k, iv) {
            if best.is_none_or(|(b, _)| d.abs() > b.abs()) {
                best = Some((d, x));
            }
        }
    }
    let (delta, argmax) = best.unwrap_or((0.0, f64::NAN));
    let weight = replication_weight(iv, spec.r);
    Ok(ReplicationModulus {
        value: weight * delta.abs(),
        delta,
        argmax,
        weight,
    })
}
