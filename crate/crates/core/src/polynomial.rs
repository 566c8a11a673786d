//! Dense univariate polynomials over `f64`.
//!
//! Roots are isolated by bracketing on a uniform grid merged with the
//! critical points (roots of the derivative, found recursively), then
//! refined by bisection. Between consecutive breakpoints the polynomial is
//! monotone, so every simple root produces a sign change; roots of even
//! multiplicity are picked up at the critical points themselves.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

/// Number of uniform grid points used to bracket roots.
pub const ROOT_GRID: usize = 4097;
/// Absolute width at which bisection stops.
pub const ROOT_TOL: f64 = 1e-12;
/// Roots closer than this are reported once.
pub const ROOT_MERGE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error("the zero polynomial has no isolated roots")]
    IdenticallyZero,
    #[error("invalid interval [{lo}, {hi}]: bounds must be finite with lo <= hi")]
    InvalidInterval { lo: f64, hi: f64 },
}

/// A closed, bounded interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self, PolyError> {
        if lo.is_finite() && hi.is_finite() && lo <= hi {
            Ok(Interval { lo, hi })
        } else {
            Err(PolyError::InvalidInterval { lo, hi })
        }
    }

    /// The interval `[-1, 1]`.
    pub const UNIT: Interval = Interval { lo: -1.0, hi: 1.0 };

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// `n` equally spaced points from `lo` to `hi` inclusive.
    pub fn linspace(&self, n: usize) -> Vec<f64> {
        match n {
            0 => Vec::new(),
            1 => vec![self.midpoint()],
            _ => (0..n).map(|j| self.grid_point(j, n)).collect(),
        }
    }

    /// The `j`-th of `n` equally spaced points; endpoints are exact.
    pub fn grid_point(&self, j: usize, n: usize) -> f64 {
        if j == 0 {
            self.lo
        } else if j + 1 == n {
            self.hi
        } else {
            self.lo + self.width() * (j as f64) / ((n - 1) as f64)
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// An extreme value of a function together with where it is attained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub value: f64,
    pub arg: f64,
}

/// Univariate real polynomial stored as ascending coefficients.
///
/// Trailing zero coefficients are trimmed on construction, so the zero
/// polynomial has an empty coefficient list and no degree.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Polynomial::new(vec![c])
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Polynomial::new(vec![0.0, 1.0])
    }

    /// `∏ (x - r)` over the given roots.
    pub fn from_roots(roots: &[f64]) -> Self {
        roots.iter().fold(Polynomial::constant(1.0), |acc, &r| {
            &acc * &Polynomial::new(vec![-r, 1.0])
        })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// `Σ |c_i| |x|^i`, the natural scale of rounding error in `eval(x)`.
    pub fn magnitude_at(&self, x: f64) -> f64 {
        let ax = x.abs();
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * ax + c.abs())
    }

    pub fn derivative(&self, order: usize) -> Polynomial {
        let mut coeffs = self.coeffs.clone();
        for _ in 0..order {
            if coeffs.is_empty() {
                break;
            }
            coeffs = coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect();
        }
        Polynomial::new(coeffs)
    }

    pub fn scale(&self, factor: f64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn powi(&self, exp: u32) -> Polynomial {
        (0..exp).fold(Polynomial::constant(1.0), |acc, _| &acc * self)
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &Polynomial) -> Polynomial {
        self.coeffs
            .iter()
            .rev()
            .fold(Polynomial::zero(), |acc, &c| &(&acc * inner) + &Polynomial::constant(c))
    }

    /// All real roots in `iv`, sorted, each to absolute accuracy [`ROOT_TOL`].
    pub fn real_roots(&self, iv: Interval) -> Result<Vec<f64>, PolyError> {
        if self.is_zero() {
            return Err(PolyError::IdenticallyZero);
        }
        let mut roots = Vec::new();
        self.collect_roots(iv, &mut roots);
        roots.sort_by(f64::total_cmp);
        roots.dedup_by(|b, a| *b - *a <= ROOT_MERGE_TOL);
        Ok(roots)
    }

    fn collect_roots(&self, iv: Interval, out: &mut Vec<f64>) {
        match self.degree() {
            None | Some(0) => {}
            Some(1) => {
                let r = -self.coeffs[0] / self.coeffs[1];
                if iv.contains(r) {
                    out.push(r);
                }
            }
            Some(_) => {
                if iv.lo == iv.hi {
                    if self.is_negligible_at(iv.lo) {
                        out.push(iv.lo);
                    }
                    return;
                }
                let critical = self
                    .derivative(1)
                    .real_roots(iv)
                    .expect("derivative of a polynomial of degree >= 2 is nonzero");
                let mut breaks = iv.linspace(ROOT_GRID);
                breaks.extend_from_slice(&critical);
                breaks.sort_by(f64::total_cmp);
                breaks.dedup();

                let values: Vec<f64> = breaks.iter().map(|&x| self.eval(x)).collect();
                for (i, (&x, &v)) in breaks.iter().zip(&values).enumerate() {
                    if v == 0.0 {
                        out.push(x);
                        continue;
                    }
                    if let Some(&next) = values.get(i + 1) {
                        if next != 0.0 && (v < 0.0) != (next < 0.0) {
                            out.push(self.bisect(x, breaks[i + 1], v));
                        }
                    }
                }
                // Even-multiplicity roots touch zero without crossing.
                out.extend(critical.into_iter().filter(|&c| self.is_negligible_at(c)));
            }
        }
    }

    fn is_negligible_at(&self, x: f64) -> bool {
        self.eval(x).abs() <= 1e3 * f64::EPSILON * self.magnitude_at(x)
    }

    /// Bisects down to adjacent floats, well past [`ROOT_TOL`].
    fn bisect(&self, mut a: f64, mut b: f64, fa: f64) -> f64 {
        let neg_a = fa < 0.0;
        loop {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            let fm = self.eval(m);
            if fm == 0.0 {
                return m;
            }
            if (fm < 0.0) == neg_a {
                a = m;
            } else {
                b = m;
            }
        }
        if self.eval(a).abs() <= self.eval(b).abs() {
            a
        } else {
            b
        }
    }

    /// Endpoints of `iv` followed by interior critical points, sorted.
    fn extremum_candidates(&self, iv: Interval) -> Vec<f64> {
        let d = self.derivative(1);
        let mut pts = vec![iv.lo];
        if !d.is_zero() {
            pts.extend(d.real_roots(iv).unwrap_or_default());
        }
        pts.push(iv.hi);
        pts.sort_by(f64::total_cmp);
        pts
    }

    fn extremum_by<F: Fn(f64) -> f64>(&self, iv: Interval, key: F) -> Extremum {
        let mut best = Extremum {
            value: f64::NEG_INFINITY,
            arg: iv.lo,
        };
        for x in self.extremum_candidates(iv) {
            let v = key(self.eval(x));
            if v > best.value {
                best = Extremum { value: v, arg: x };
            }
        }
        best
    }

    /// `max |p|` over `iv`; ties resolve to the leftmost point.
    pub fn sup_abs(&self, iv: Interval) -> Extremum {
        self.extremum_by(iv, f64::abs)
    }

    /// Signed maximum over `iv`.
    pub fn max_on(&self, iv: Interval) -> Extremum {
        self.extremum_by(iv, |v| v)
    }

    /// Signed minimum over `iv`.
    pub fn min_on(&self, iv: Interval) -> Extremum {
        let e = self.extremum_by(iv, |v| -v);
        Extremum {
            value: -e.value,
            arg: e.arg,
        }
    }

    /// Interior points of `iv` where the second derivative changes sign.
    pub fn inflection_points(&self, iv: Interval) -> Vec<f64> {
        let second = self.derivative(2);
        if second.is_zero() {
            return Vec::new();
        }
        let roots = second.real_roots(iv).unwrap_or_default();
        let mut pts = Vec::with_capacity(roots.len() + 2);
        pts.push(iv.lo);
        pts.extend(roots.iter().copied().filter(|&r| r > iv.lo && r < iv.hi));
        pts.push(iv.hi);
        pts.windows(3)
            .filter(|w| {
                let left = second.eval(0.5 * (w[0] + w[1]));
                let right = second.eval(0.5 * (w[1] + w[2]));
                left * right < 0.0
            })
            .map(|w| w[1])
            .collect()
    }

    /// `{x ∈ domain : target.lo ≤ p(x) ≤ target.hi}` as maximal closed intervals.
    /// Isolated points come back as zero-width intervals.
    pub fn preimage_interval(&self, target: Interval, domain: Interval) -> Vec<Interval> {
        if self.degree().unwrap_or(0) == 0 {
            let c = self.eval(0.0);
            return if target.contains(c) {
                vec![domain]
            } else {
                Vec::new()
            };
        }

        let mut breaks = vec![domain.lo, domain.hi];
        for level in [target.lo, target.hi] {
            let shifted = self - &Polynomial::constant(level);
            breaks.extend(shifted.real_roots(domain).unwrap_or_default());
        }
        breaks.sort_by(f64::total_cmp);
        // Keep the exact domain endpoints when a root lands on them.
        let mut merged: Vec<f64> = Vec::with_capacity(breaks.len());
        for x in breaks {
            match merged.last_mut() {
                Some(last) if x - *last <= ROOT_MERGE_TOL => {
                    if x == domain.hi {
                        *last = x;
                    }
                }
                _ => merged.push(x),
            }
        }

        let point_inside = |x: f64| {
            let v = self.eval(x);
            v >= target.lo - 1e-9 && v <= target.hi + 1e-9
        };
        let mid_inside = |a: f64, b: f64| target.contains(self.eval(0.5 * (a + b)));

        let mut out = Vec::new();
        let mut current: Option<(f64, f64)> = None;
        for (k, &x) in merged.iter().enumerate() {
            if current.is_none() && point_inside(x) {
                current = Some((x, x));
            }
            let Some(&next) = merged.get(k + 1) else {
                break;
            };
            if mid_inside(x, next) {
                let start = current.map_or(x, |c| c.0);
                current = Some((start, next));
            } else if let Some((a, b)) = current.take() {
                out.push(Interval { lo: a, hi: b });
            }
        }
        if let Some((a, b)) = current {
            out.push(Interval { lo: a, hi: b });
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0.0 {
                continue;
            }
            let mag = c.abs();
            match (first, c < 0.0) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            match i {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{mag}*x")?,
                _ => write!(f, "{mag}*x^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |p: &Polynomial, i: usize| p.coeffs.get(i).copied().unwrap_or(0.0);
        Polynomial::new((0..n).map(|i| get(self, i) + get(rhs, i)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    fn p3() -> Polynomial {
        Polynomial::new(vec![0.0, -1.0, 0.5])
    }

    fn p5() -> Polynomial {
        Polynomial::new(vec![4.0, 0.0, -5.0, 0.0, 1.0])
    }

    #[test]
    fn eval_matches_worked_examples() {
        assert_eq!(p3().eval(3.0), 1.5);
        assert_eq!(p5().eval(1.5), -2.1875);
        assert_eq!(Polynomial::zero().eval(42.0), 0.0);
    }

    #[test]
    fn factored_form_expands() {
        let q = Polynomial::from_roots(&[-2.0, -1.0, 1.0, 2.0]);
        assert_eq!(q, p5());
    }

    #[test]
    fn derivatives_by_power_rule() {
        assert_eq!(p3().derivative(2), Polynomial::constant(1.0));
        assert_eq!(p5().derivative(2), Polynomial::new(vec![-10.0, 0.0, 12.0]));
        assert!(Polynomial::constant(7.0).derivative(1).is_zero());
        assert_eq!(p5().derivative(0), p5());
        assert!(p3().derivative(9).is_zero());
    }

    #[test]
    fn zero_polynomial_has_no_degree() {
        assert_eq!(Polynomial::new(vec![0.0, 0.0]).degree(), None);
        assert_eq!(Polynomial::new(vec![1.0, 2.0, 0.0]).degree(), Some(1));
        assert_eq!(
            Polynomial::zero().real_roots(iv(-1.0, 1.0)),
            Err(PolyError::IdenticallyZero)
        );
    }

    #[test]
    fn roots_of_examples() {
        let r = p5().real_roots(iv(-3.0, 3.0)).unwrap();
        let want = [-2.0, -1.0, 1.0, 2.0];
        assert_eq!(r.len(), 4);
        for (a, b) in r.iter().zip(want) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
        assert!(Polynomial::new(vec![1.0, 0.0, 1.0])
            .real_roots(iv(-3.0, 3.0))
            .unwrap()
            .is_empty());
        let r = Polynomial::new(vec![-10.0, 0.0, 12.0])
            .real_roots(iv(-3.0, 3.0))
            .unwrap();
        let s = (5.0f64 / 6.0).sqrt();
        assert_eq!(r.len(), 2);
        assert!((r[0] + s).abs() < 1e-12 && (r[1] - s).abs() < 1e-12);
    }

    #[test]
    fn multiple_roots_are_found_once() {
        let double = Polynomial::from_roots(&[0.3, 0.3, -0.5]);
        let r = double.real_roots(iv(-1.0, 1.0)).unwrap();
        assert_eq!(r.len(), 2, "{r:?}");
        assert!((r[1] - 0.3).abs() < 1e-7);
        let quad = Polynomial::from_roots(&[0.25; 4]);
        let r = quad.real_roots(iv(-1.0, 1.0)).unwrap();
        assert_eq!(r.len(), 1, "{r:?}");
        assert!((r[0] - 0.25).abs() < 1e-3);
    }

    #[test]
    fn close_simple_roots_inside_one_grid_cell() {
        // 1e-5 apart, far below the bracketing grid spacing.
        let p = Polynomial::from_roots(&[0.1, 0.10001]);
        let r = p.real_roots(iv(-1.0, 1.0)).unwrap();
        assert_eq!(r.len(), 2, "{r:?}");
    }

    #[test]
    fn sup_abs_examples() {
        let e = p3().sup_abs(iv(-3.0, 3.0));
        assert_eq!((e.value, e.arg), (7.5, -3.0));
        let e = Polynomial::constant(2.0).sup_abs(iv(0.0, 1.0));
        assert_eq!((e.value, e.arg), (2.0, 0.0));
        let e = p5().sup_abs(iv(-3.0, 3.0));
        assert_eq!(e.value, 40.0);
        assert_eq!(e.arg.abs(), 3.0);
    }

    #[test]
    fn signed_extrema() {
        let e = p3().min_on(iv(-3.0, 3.0));
        assert!((e.value + 0.5).abs() < 1e-15 && (e.arg - 1.0).abs() < 1e-12);
        assert_eq!(p3().max_on(iv(-3.0, 3.0)).value, 7.5);
    }

    #[test]
    fn inflection_examples() {
        let s = (5.0f64 / 6.0).sqrt();
        let r = p5().inflection_points(iv(-3.0, 3.0));
        assert_eq!(r.len(), 2);
        assert!((r[0] + s).abs() < 1e-12 && (r[1] - s).abs() < 1e-12);
        assert!(p3().inflection_points(iv(-3.0, 3.0)).is_empty());
        let cube = Polynomial::new(vec![0.0, 0.0, 0.0, 1.0]);
        assert_eq!(cube.inflection_points(iv(-1.0, 1.0)), vec![0.0]);
        // x^4: p'' = 12x^2 touches zero without a sign change.
        let quartic = Polynomial::new(vec![0.0, 0.0, 0.0, 0.0, 1.0]);
        assert!(quartic.inflection_points(iv(-1.0, 1.0)).is_empty());
    }

    #[test]
    fn preimage_examples() {
        let d = iv(-3.0, 3.0);
        assert_eq!(Polynomial::x().preimage_interval(iv(0.0, 1.0), d), vec![iv(0.0, 1.0)]);

        let pre = p3().preimage_interval(iv(0.0, 1.5), d);
        assert_eq!(pre.len(), 2, "{pre:?}");
        assert!((pre[0].lo() + 1.0).abs() < 1e-10 && pre[0].hi().abs() < 1e-10);
        assert!((pre[1].lo() - 2.0).abs() < 1e-10 && pre[1].hi() == 3.0);

        let pre = p5().preimage_interval(iv(0.0, 0.0), d);
        assert_eq!(pre.len(), 4);
        for (piece, r) in pre.iter().zip([-2.0, -1.0, 1.0, 2.0]) {
            assert!(piece.width() == 0.0 && (piece.lo() - r).abs() < 1e-10);
        }
    }

    #[test]
    fn preimage_of_constant() {
        let c = Polynomial::constant(0.5);
        assert_eq!(c.preimage_interval(iv(0.0, 1.0), iv(-1.0, 2.0)), vec![iv(-1.0, 2.0)]);
        assert!(c.preimage_interval(iv(1.0, 2.0), iv(-1.0, 2.0)).is_empty());
    }

    #[test]
    fn compose_and_display() {
        let shift = Polynomial::new(vec![1.0, 2.0]);
        let q = p3().compose(&shift);
        for x in [-1.0, 0.0, 0.7] {
            assert!((q.eval(x) - p3().eval(1.0 + 2.0 * x)).abs() < 1e-14);
        }
        assert_eq!(p3().to_string(), "0.5*x^2 - 1*x");
        assert_eq!(Polynomial::zero().to_string(), "0");
    }

    #[test]
    fn interval_validation() {
        assert!(Interval::new(1.0, 0.0).is_err());
        assert!(Interval::new(f64::NAN, 0.0).is_err());
        assert!(Interval::new(0.0, f64::INFINITY).is_err());
        assert_eq!(iv(-3.0, 3.0).linspace(3), vec![-3.0, 0.0, 3.0]);
    }
}
