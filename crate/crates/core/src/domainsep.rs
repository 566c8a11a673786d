//! Domain properties of (co)convex polynomials and one-dimensional
//! hyperplane separation.
//!
//! A hyperplane in the real line is a level `b`; separation predicates compare
//! extrema of polynomials over intervals. All extrema are exact (critical
//! points plus endpoints), never grid estimates.

use thiserror::Error;

use crate::approx::{check_jackson_bound, ApproxError, DeviationKind, JacksonCheck, ModulusChoice};
use crate::funcexpr::{FnError, PiecewiseFn};
use crate::polynomial::{Interval, Polynomial};
use crate::shape::{poly_is_convex, YPartition};

/// Slack on `p'' ≥ 0` and on the witness margin.
pub const DOMAIN_TOL: f64 = 1e-9;
/// Recomputed inflection points must lie this close to the declared ones.
pub const INFLECTION_MATCH_TOL: f64 = 1e-6;
/// Threshold on `|p(y_i)|` at inflection points.
pub const INFLECTION_VALUE_BOUND: f64 = 0.5;
pub const WITNESS_SEARCH_GRID: usize = 1001;
pub const WITNESS_SEARCH_DILATION: f64 = 3.0;
pub const ALL_T_GRID: usize = 101;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("x_o = {x} is not an interior point of {{x in D : x^2 < {c}}}")]
    NotInteriorPoint { x: f64, c: f64 },
    #[error("witness {x} lies outside {domain}")]
    WitnessOutsideDomain { x: f64, domain: Interval },
    #[error("point {x} lies inside {domain}")]
    PointInsideDomain { x: f64, domain: Interval },
    #[error("c must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error(transparent)]
    Approx(#[from] ApproxError),
    #[error(transparent)]
    Fn(#[from] FnError),
}

/// `[max(D.lo, -√c), min(D.hi, √c)]`: the closure of `{x ∈ D : x² < c}`.
pub fn compact_neighborhood(d: Interval, x_o: f64, c: f64) -> Result<Interval, DomainError> {
    if c.is_nan() || c <= 0.0 {
        return Err(DomainError::NonPositiveRadius(c));
    }
    if !d.contains(x_o) || x_o * x_o >= c {
        return Err(DomainError::NotInteriorPoint { x: x_o, c });
    }
    let r = c.sqrt();
    Ok(Interval::new(d.lo().max(-r), d.hi().min(r)).expect("x_o lies inside"))
}

/// What the Jackson-type property is checked against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacksonConfig {
    pub n: usize,
    pub modulus: ModulusChoice,
    pub deviation: DeviationKind,
    /// A quoted constant to test the bound with; the extracted `c` otherwise.
    pub claimed_c: Option<f64>,
}

impl JacksonConfig {
    fn evaluate(&self, f: &PiecewiseFn, f2: &PiecewiseFn, p: &Polynomial) -> Result<(JacksonCheck, bool), DomainError> {
        let check = check_jackson_bound(f, f2, p, self.n, &self.modulus, self.deviation)?;
        let holds = check.report.bound_holds_for(self.claimed_c.unwrap_or(check.report.c));
        Ok((check, holds))
    }
}

/// A point outside the domain where `|p|` beats its supremum over the domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub t: f64,
    pub value: f64,
    /// `|p(t)| - sup_D |p|`.
    pub margin: f64,
    /// Found by search rather than supplied.
    pub searched: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DcpReport {
    pub prop1_compact: bool,
    pub sup_on_domain: f64,
    pub prop2_witness: Option<Witness>,
    pub prop3: JacksonCheck,
    pub prop3_holds: bool,
    pub overall: bool,
}

pub fn check_dcp(
    p: &Polynomial,
    d: Interval,
    t_witness: Option<f64>,
    f: &PiecewiseFn,
    f2: &PiecewiseFn,
    jackson: &JacksonConfig,
) -> Result<DcpReport, DomainError> {
    let prop1_compact = d.lo().is_finite() && d.hi().is_finite() && poly_is_convex(p, d, DOMAIN_TOL);
    let sup = p.sup_abs(d).value;
    let witness_at = |t: f64, searched| {
        let value = p.eval(t);
        Witness {
            t,
            value,
            margin: value.abs() - sup,
            searched,
        }
    };
    let prop2_witness = match t_witness {
        Some(t) if d.contains(t) => return Err(DomainError::PointInsideDomain { x: t, domain: d }),
        Some(t) => Some(witness_at(t, false)),
        None => {
            let half = WITNESS_SEARCH_DILATION * 0.5 * d.width();
            let region = Interval::new(d.midpoint() - half, d.midpoint() + half).expect("dilation keeps order");
            (0..WITNESS_SEARCH_GRID)
                .map(|j| region.grid_point(j, WITNESS_SEARCH_GRID))
                .filter(|&t| !d.contains(t))
                .map(|t| witness_at(t, true))
                .filter(|w| w.margin > DOMAIN_TOL)
                .fold(None, |best: Option<Witness>, w| match best {
                    Some(b) if b.margin >= w.margin => Some(b),
                    _ => Some(w),
                })
        }
    };
    let (prop3, prop3_holds) = jackson.evaluate(f, f2, p)?;
    let witness_ok = prop2_witness.is_some_and(|w| w.margin > DOMAIN_TOL);
    Ok(DcpReport {
        prop1_compact,
        sup_on_domain: sup,
        prop2_witness,
        prop3,
        prop3_holds,
        overall: prop1_compact && witness_ok && prop3_holds,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InflectionRow {
    pub y: f64,
    pub abs_value: f64,
    pub within_bound: bool,
}

fn inflection_row(p: &Polynomial, y: f64) -> InflectionRow {
    let abs_value = p.eval(y).abs();
    InflectionRow {
        y,
        abs_value,
        within_bound: abs_value <= INFLECTION_VALUE_BOUND,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DccpReport {
    pub prop1_changes_convexity: bool,
    /// One row per declared point, taken at face value.
    pub prop2_paper_mode: Vec<InflectionRow>,
    /// One row per inflection point recomputed from `p''`.
    pub prop2_verified_mode: Vec<InflectionRow>,
    pub match_with_declared: bool,
    pub prop3: JacksonCheck,
    pub prop3_holds: bool,
    pub overall_paper: bool,
    pub overall_verified: bool,
}

pub fn check_dccp(
    p: &Polynomial,
    d: Interval,
    y_declared: &YPartition,
    f: &PiecewiseFn,
    f2: &PiecewiseFn,
    jackson: &JacksonConfig,
) -> Result<DccpReport, DomainError> {
    if !f.domain().contains_interval(&d) {
        return Err(FnError::OutOfDomain { x: d.lo(), domain: f.domain() }.into());
    }
    let recomputed = p.inflection_points(d);
    let prop1_changes_convexity = !recomputed.is_empty();
    let prop2_paper_mode: Vec<_> = y_declared.points().iter().map(|&y| inflection_row(p, y)).collect();
    let prop2_verified_mode: Vec<_> = recomputed.iter().map(|&y| inflection_row(p, y)).collect();
    let match_with_declared = recomputed.len() == y_declared.points().len()
        && recomputed
            .iter()
            .zip(y_declared.points())
            .all(|(a, b)| (a - b).abs() <= INFLECTION_MATCH_TOL);
    let (prop3, prop3_holds) = jackson.evaluate(f, f2, p)?;
    let all_within = |rows: &[InflectionRow]| rows.iter().all(|r| r.within_bound);
    Ok(DccpReport {
        prop1_changes_convexity,
        overall_paper: prop1_changes_convexity && all_within(&prop2_paper_mode) && prop3_holds,
        overall_verified: prop1_changes_convexity && all_within(&prop2_verified_mode) && prop3_holds,
        prop2_paper_mode,
        prop2_verified_mode,
        match_with_declared,
        prop3,
        prop3_holds,
    })
}

/// Outcome of a separation predicate: `inf_lhs` is compared against `sup_rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationVerdict {
    pub holds: bool,
    /// Separating level, when one is chosen.
    pub b: Option<f64>,
    pub inf_lhs: f64,
    pub sup_rhs: f64,
    /// The `t` the verdict refers to in the weighted variant: the first
    /// failing grid point, or the tightest one when all hold.
    pub t: Option<f64>,
}

impl SeparationVerdict {
    pub fn margin(&self) -> f64 {
        self.inf_lhs - self.sup_rhs
    }
}

/// `p ≥ α̂` on `D`, touching at `x̂_o`.
pub fn supporting_hyperplane(p: &Polynomial, d: Interval, x_hat: f64, alpha_hat: f64) -> Result<SeparationVerdict, DomainError> {
    if !d.contains(x_hat) {
        return Err(DomainError::WitnessOutsideDomain { x: x_hat, domain: d });
    }
    let inf = p.min_on(d).value;
    Ok(SeparationVerdict {
        holds: inf >= alpha_hat - DOMAIN_TOL,
        b: None,
        inf_lhs: inf,
        sup_rhs: alpha_hat,
        t: None,
    })
}

/// `sup_D p < b < p(x)` with `b` the midpoint.
pub fn strictly_separates(p: &Polynomial, d: Interval, x: f64) -> Result<SeparationVerdict, DomainError> {
    if d.contains(x) {
        return Err(DomainError::PointInsideDomain { x, domain: d });
    }
    let s = p.max_on(d).value;
    let v = p.eval(x);
    let b = 0.5 * (s + v);
    let holds = s < b && b < v;
    Ok(SeparationVerdict {
        holds,
        b: holds.then_some(b),
        inf_lhs: v,
        sup_rhs: s,
        t: None,
    })
}

/// Where the weight `ħ` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TChoice {
    Fixed(f64),
    /// Every point of a 101-point grid over `[0, 1]`.
    AllT,
}

fn scaled_verdict(p: &Polynomial, d1: Interval, q: &Polynomial, d2: Interval, w: f64, t: Option<f64>) -> SeparationVerdict {
    let inf = p.scale(w).min_on(d1).value;
    let sup = q.scale(w).max_on(d2).value;
    SeparationVerdict {
        holds: inf > sup,
        b: None,
        inf_lhs: inf,
        sup_rhs: sup,
        t,
    }
}

/// `inf_{D1} ħ(t) p > sup_{D2} ħ(t) q`; without `ħ` the weight is 1.
pub fn strongly_separated(
    p: &Polynomial,
    d1: Interval,
    q: &Polynomial,
    d2: Interval,
    hbar: Option<(&PiecewiseFn, TChoice)>,
) -> Result<SeparationVerdict, DomainError> {
    let Some((h, choice)) = hbar else {
        return Ok(scaled_verdict(p, d1, q, d2, 1.0, None));
    };
    match choice {
        TChoice::Fixed(t) => Ok(scaled_verdict(p, d1, q, d2, h.eval(t)?, Some(t))),
        TChoice::AllT => {
            let mut tightest: Option<SeparationVerdict> = None;
            for j in 0..ALL_T_GRID {
                let t = Interval::new(0.0, 1.0).expect("unit interval").grid_point(j, ALL_T_GRID);
                let v = scaled_verdict(p, d1, q, d2, h.eval(t)?, Some(t));
                if !v.holds {
                    return Ok(v);
                }
                if tightest.is_none_or(|b| v.margin() < b.margin()) {
                    tightest = Some(v);
                }
            }
            Ok(tightest.expect("grid is nonempty"))
        }
    }
}
