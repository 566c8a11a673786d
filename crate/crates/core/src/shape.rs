//! Convexity and coconvexity classification.
//!
//! A function belongs to `Δ²(Y)` when it changes convexity exactly at the
//! points of `Y` and is convex on the rightmost subinterval. For general
//! functions this is refuted by sampling the secant inequality
//! `f((1-λ)x + λy) ≤ (1-λ)f(x) + λf(y)`; a verdict that holds means no
//! violation was found at the sampled resolution. Polynomials are certified
//! exactly through the roots of `p''`.

use thiserror::Error;

use crate::funcexpr::{FnError, PiecewiseFn};
use crate::polynomial::{Interval, Polynomial};

/// Absolute slack on secant comparisons.
pub const SECANT_TOL: f64 = 1e-9;
pub const DEFAULT_PAIRS: usize = 200;

pub fn default_lambdas() -> Vec<f64> {
    (1..=9).map(|i| f64::from(i) / 10.0).collect()
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ShapeError {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error(transparent)]
    Fn(#[from] FnError),
}

/// Change-of-convexity points `y_1 < … < y_s`, interior to `interval`.
#[derive(Debug, Clone, PartialEq)]
pub struct YPartition {
    points: Vec<f64>,
    interval: Interval,
}

impl YPartition {
    pub fn new(points: Vec<f64>, interval: Interval) -> Result<Self, ShapeError> {
        if let Some(w) = points.windows(2).find(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
            return Err(ShapeError::InvalidPartition(format!(
                "points must be strictly increasing, got {} then {}",
                w[0], w[1]
            )));
        }
        if let Some(&y) = points.iter().find(|&&y| !(interval.lo() < y && y < interval.hi())) {
            return Err(ShapeError::InvalidPartition(format!(
                "point {y} is not interior to {interval}"
            )));
        }
        Ok(YPartition { points, interval })
    }

    /// No change points: plain convexity on `interval`.
    pub fn empty(interval: Interval) -> Self {
        YPartition {
            points: Vec::new(),
            interval,
        }
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn s(&self) -> usize {
        self.points.len()
    }

    /// Expected sign of the second derivative on each `[y_i, y_{i+1}]`:
    /// `+1` on the rightmost subinterval, alternating leftward.
    pub fn sign_pattern(&self) -> Vec<i8> {
        let s = self.points.len();
        (0..=s).map(|i| if (s - i).is_multiple_of(2) { 1 } else { -1 }).collect()
    }

    /// `[y_0, y_1], …, [y_s, y_{s+1}]` with `y_0`, `y_{s+1}` the interval ends.
    pub fn subintervals(&self) -> Vec<Interval> {
        let mut edges = Vec::with_capacity(self.points.len() + 2);
        edges.push(self.interval.lo());
        edges.extend_from_slice(&self.points);
        edges.push(self.interval.hi());
        edges
            .windows(2)
            .map(|w| Interval::new(w[0], w[1]).expect("validated partition"))
            .collect()
    }

    /// The same partition carried to `[-1, 1]` by the affine map of `interval`.
    pub fn pullback(&self) -> YPartition {
        let (mid, half) = (self.interval.midpoint(), 0.5 * self.interval.width());
        YPartition {
            points: self.points.iter().map(|y| (y - mid) / half).collect(),
            interval: Interval::UNIT,
        }
    }
}

/// A single evaluation of the secant inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecantSample {
    pub x: f64,
    pub y: f64,
    pub lambda: f64,
    /// `f((1-λ)x + λy)`
    pub lhs: f64,
    /// `(1-λ)f(x) + λf(y)`
    pub rhs: f64,
}

impl SecantSample {
    /// Whether the sample is consistent with orientation `sigma`
    /// (`+1` convex, `-1` concave) up to [`SECANT_TOL`].
    pub fn agrees_with(&self, sigma: i8) -> bool {
        f64::from(sigma) * (self.lhs - self.rhs) <= SECANT_TOL
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShapeVerdict {
    pub holds: bool,
    pub counterexample: Option<SecantSample>,
    /// Samples evaluated.
    pub tested: usize,
    /// Samples skipped because the function was singular there.
    pub skipped: usize,
}

pub fn secant_sample(f: &PiecewiseFn, x: f64, y: f64, lambda: f64) -> Result<SecantSample, FnError> {
    let lhs = f.eval((1.0 - lambda) * x + lambda * y)?;
    let rhs = (1.0 - lambda) * f.eval(x)? + lambda * f.eval(y)?;
    Ok(SecantSample {
        x,
        y,
        lambda,
        lhs,
        rhs,
    })
}

/// Radical inverse of `i` in base `b`: a point of the van der Corput sequence.
fn radical_inverse(mut i: usize, b: usize) -> f64 {
    let (mut f, mut r) = (1.0, 0.0);
    while i > 0 {
        f /= b as f64;
        r += f * (i % b) as f64;
        i /= b;
    }
    r
}

/// Deterministic low-discrepancy pairs strictly inside `iv` (2-D Halton).
pub fn halton_pairs(iv: Interval, count: usize) -> impl Iterator<Item = (f64, f64)> {
    (1..=count).map(move |i| {
        (
            iv.lo() + iv.width() * radical_inverse(i, 2),
            iv.lo() + iv.width() * radical_inverse(i, 3),
        )
    })
}

fn oriented_test(f: &PiecewiseFn, iv: Interval, pairs: usize, lambdas: &[f64], sigma: i8) -> ShapeVerdict {
    let mut tested = 0;
    let mut skipped = 0;
    for (x, y) in halton_pairs(iv, pairs) {
        for &lambda in lambdas {
            match secant_sample(f, x, y, lambda) {
                Ok(s) => {
                    tested += 1;
                    if !s.agrees_with(sigma) {
                        return ShapeVerdict {
                            holds: false,
                            counterexample: Some(s),
                            tested,
                            skipped,
                        };
                    }
                }
                Err(_) => skipped += 1,
            }
        }
    }
    ShapeVerdict {
        holds: true,
        counterexample: None,
        tested,
        skipped,
    }
}

/// Samples the secant inequality over `pair_count` pairs in `iv` and every λ.
pub fn secant_convexity_test(
    f: &PiecewiseFn,
    iv: Interval,
    pair_count: usize,
    lambdas: &[f64],
) -> Result<ShapeVerdict, ShapeError> {
    check_lambdas(lambdas)?;
    if !f.domain().contains_interval(&iv) {
        return Err(FnError::OutOfDomain {
            x: iv.lo(),
            domain: f.domain(),
        }
        .into());
    }
    Ok(oriented_test(f, iv, pair_count, lambdas, 1))
}

fn check_lambdas(lambdas: &[f64]) -> Result<(), ShapeError> {
    match lambdas.iter().find(|&&l| !(l > 0.0 && l < 1.0)) {
        Some(l) => Err(ShapeError::InvalidPartition(format!("λ = {l} is not in (0, 1)"))),
        None => Ok(()),
    }
}

/// Sampled membership test for `Δ²(Y)`: on each subinterval the secant
/// inequality must hold with the orientation from [`YPartition::sign_pattern`].
pub fn in_delta2(f: &PiecewiseFn, y: &YPartition, samples: usize) -> Result<ShapeVerdict, ShapeError> {
    if !f.domain().contains_interval(&y.interval) {
        return Err(FnError::OutOfDomain {
            x: y.interval.lo(),
            domain: f.domain(),
        }
        .into());
    }
    let lambdas = default_lambdas();
    let mut tested = 0;
    let mut skipped = 0;
    for (sub, sigma) in y.subintervals().into_iter().zip(y.sign_pattern()) {
        let v = oriented_test(f, sub, samples, &lambdas, sigma);
        tested += v.tested;
        skipped += v.skipped;
        if !v.holds {
            return Ok(ShapeVerdict { tested, skipped, ..v });
        }
    }
    Ok(ShapeVerdict {
        holds: true,
        counterexample: None,
        tested,
        skipped,
    })
}

/// Exact verdict for a polynomial: where (if anywhere) `σ_i p''` dips below
/// `-tol` on subinterval `i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyShapeVerdict {
    pub holds: bool,
    /// `(subinterval index, x, p''(x))` of the worst violation.
    pub worst: Option<(usize, f64, f64)>,
}

/// Certifies `p ∈ Δ²(Y)` on `Y.interval` by extremising `p''` on each piece.
pub fn poly_in_delta2(p: &Polynomial, y: &YPartition, tol: f64) -> PolyShapeVerdict {
    let second = p.derivative(2);
    let mut worst: Option<(usize, f64, f64)> = None;
    let mut worst_signed = -tol;
    for (i, (sub, sigma)) in y.subintervals().into_iter().zip(y.sign_pattern()).enumerate() {
        let e = if sigma > 0 { second.min_on(sub) } else { second.max_on(sub) };
        let signed = f64::from(sigma) * e.value;
        if signed < worst_signed {
            worst_signed = signed;
            worst = Some((i, e.arg, e.value));
        }
    }
    PolyShapeVerdict {
        holds: worst.is_none(),
        worst,
    }
}

/// `p'' ≥ -tol` throughout `iv`.
pub fn poly_is_convex(p: &Polynomial, iv: Interval, tol: f64) -> bool {
    poly_in_delta2(p, &YPartition::empty(iv), tol).holds
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcexpr::{parse_expr, parse_piecewise};

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    fn single(src: &str, d: Interval) -> PiecewiseFn {
        PiecewiseFn::single(parse_expr(src).unwrap(), d)
    }

    #[test]
    fn worked_example_pairs() {
        let f1 = parse_piecewise("[0, 3] : 0.5*x^4 - (x - 1)^3 - 2*x^2\n[-3, 0) : x").unwrap();
        let s = secant_sample(&f1, 1.0, 2.0, 0.5).unwrap();
        assert_eq!((s.lhs, s.rhs), (-2.09375, -1.25));
        assert!(s.agrees_with(1));

        let p5 = single("x^4 - 5*x^2 + 4", iv(-3.0, 3.0));
        let s = secant_sample(&p5, 1.5, 1.0, 0.5).unwrap();
        assert_eq!(s.lhs, -1.37109375);
        assert_eq!(s.rhs, -1.09375);
        assert!(s.agrees_with(1));
    }

    #[test]
    fn concave_function_is_refuted() {
        let f = single("-x^2", Interval::UNIT);
        let s = secant_sample(&f, -1.0, 1.0, 0.5).unwrap();
        assert_eq!((s.lhs, s.rhs), (0.0, -1.0));
        assert!(!s.agrees_with(1));
        let v = secant_convexity_test(&f, Interval::UNIT, DEFAULT_PAIRS, &default_lambdas()).unwrap();
        assert!(!v.holds);
        let c = v.counterexample.unwrap();
        assert!(c.lhs > c.rhs + SECANT_TOL);
    }

    #[test]
    fn convex_function_passes() {
        let f = single("x^4 + x", iv(-2.0, 2.0));
        let v = secant_convexity_test(&f, iv(-2.0, 2.0), DEFAULT_PAIRS, &default_lambdas()).unwrap();
        assert!(v.holds && v.counterexample.is_none());
        assert_eq!(v.tested, DEFAULT_PAIRS * 9);
        assert!(secant_convexity_test(&f, iv(-2.0, 2.0), 5, &[0.0]).is_err());
    }

    #[test]
    fn sign_patterns() {
        assert_eq!(YPartition::empty(Interval::UNIT).sign_pattern(), vec![1]);
        let y = YPartition::new(vec![0.0], Interval::UNIT).unwrap();
        assert_eq!(y.sign_pattern(), vec![-1, 1]);
        let y = YPartition::new(vec![-2.0, -1.0, 1.0, 2.0], iv(-3.0, 3.0)).unwrap();
        assert_eq!(y.sign_pattern(), vec![1, -1, 1, -1, 1]);
        assert_eq!(y.subintervals().len(), 5);
    }

    #[test]
    fn partition_validation() {
        assert!(YPartition::new(vec![0.5, 0.5], Interval::UNIT).is_err());
        assert!(YPartition::new(vec![1.0], Interval::UNIT).is_err());
        assert!(YPartition::new(vec![0.3, -0.3], Interval::UNIT).is_err());
    }

    #[test]
    fn delta2_examples() {
        let cube = single("x^3", Interval::UNIT);
        let y0 = YPartition::new(vec![0.0], Interval::UNIT).unwrap();
        assert!(in_delta2(&cube, &y0, DEFAULT_PAIRS).unwrap().holds);

        let sq = single("x^2", Interval::UNIT);
        assert!(in_delta2(&sq, &YPartition::empty(Interval::UNIT), DEFAULT_PAIRS).unwrap().holds);
        assert!(!in_delta2(&sq, &y0, DEFAULT_PAIRS).unwrap().holds);

        let p5 = single("x^4 - 5*x^2 + 4", iv(-3.0, 3.0));
        let y4 = YPartition::new(vec![-2.0, -1.0, 1.0, 2.0], iv(-3.0, 3.0)).unwrap();
        let v = in_delta2(&p5, &y4, DEFAULT_PAIRS).unwrap();
        assert!(!v.holds);
        let c = v.counterexample.unwrap();
        assert!(c.x > -2.0 && c.x < -1.0, "violation in the second subinterval: {c:?}");
    }

    #[test]
    fn exact_polynomial_path() {
        let p5 = Polynomial::new(vec![4.0, 0.0, -5.0, 0.0, 1.0]);
        let y4 = YPartition::new(vec![-2.0, -1.0, 1.0, 2.0], iv(-3.0, 3.0)).unwrap();
        assert!(!poly_in_delta2(&p5, &y4, 1e-9).holds);
        let s = (5.0f64 / 6.0).sqrt();
        let yi = YPartition::new(vec![-s, s], iv(-3.0, 3.0)).unwrap();
        assert!(poly_in_delta2(&p5, &yi, 1e-9).holds);
        assert!(poly_is_convex(&Polynomial::new(vec![0.0, -1.0, 0.5]), iv(-3.0, 3.0), 1e-9));
        assert!(!poly_is_convex(&Polynomial::new(vec![0.0, 0.0, -1.0]), iv(-3.0, 3.0), 1e-9));
    }

    #[test]
    fn pullback_preserves_membership() {
        let f = single("x^3 - 3*x", iv(-3.0, 3.0));
        let y = YPartition::new(vec![0.0], iv(-3.0, 3.0)).unwrap();
        let g = f.affine_pullback(iv(-3.0, 3.0)).unwrap();
        assert_eq!(
            in_delta2(&f, &y, 100).unwrap().holds,
            in_delta2(&g, &y.pullback(), 100).unwrap().holds
        );
        assert!(in_delta2(&g, &y.pullback(), 100).unwrap().holds);
    }

    #[test]
    fn halton_pairs_are_interior() {
        for (x, y) in halton_pairs(Interval::UNIT, 500) {
            assert!(x > -1.0 && x < 1.0 && y > -1.0 && y < 1.0);
        }
    }
}
