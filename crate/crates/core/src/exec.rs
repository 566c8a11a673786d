//! Execution strategy for grid scans.
//!
//! Every reduction here is order-independent (ties go to the lowest grid
//! index), so sequential and parallel runs return bit-identical results.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How a grid scan is executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

/// Result of a max-reduction over a grid where some samples may be missing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMax {
    /// Grid index of the maximum, `None` if every sample was skipped.
    pub index: Option<usize>,
    pub value: f64,
    /// Number of samples the evaluator declined (returned `None`).
    pub skipped: usize,
}

impl GridMax {
    const EMPTY: GridMax = GridMax {
        index: None,
        value: f64::NEG_INFINITY,
        skipped: 0,
    };

    fn single(i: usize, v: Option<f64>) -> GridMax {
        match v {
            Some(v) => GridMax {
                index: Some(i),
                value: v,
                skipped: 0,
            },
            None => GridMax {
                skipped: 1,
                ..GridMax::EMPTY
            },
        }
    }

    fn merge(a: GridMax, b: GridMax) -> GridMax {
        let skipped = a.skipped + b.skipped;
        let pick_b = match (a.index, b.index) {
            (None, _) => true,
            (_, None) => false,
            (Some(ia), Some(ib)) => b.value > a.value || (b.value == a.value && ib < ia),
        };
        let best = if pick_b { b } else { a };
        GridMax { skipped, ..best }
    }
}

impl Exec {
    /// Maximum of `eval(i)` over `0..n`, skipping `None` samples.
    pub fn grid_max<F>(self, n: usize, eval: F) -> GridMax
    where
        F: Fn(usize) -> Option<f64> + Sync + Send,
    {
        match self {
            Exec::Sequential => (0..n)
                .map(|i| GridMax::single(i, eval(i)))
                .fold(GridMax::EMPTY, GridMax::merge),
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..n)
                .into_par_iter()
                .map(|i| GridMax::single(i, eval(i)))
                .reduce(|| GridMax::EMPTY, GridMax::merge),
        }
    }

    /// `eval` applied to every index, in index order.
    pub fn map<T, F>(self, n: usize, eval: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Exec::Sequential => (0..n).map(eval).collect(),
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..n).into_par_iter().map(eval).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ties_resolve_to_lowest_index() {
        let vals = [1.0, 3.0, 2.0, 3.0, 3.0];
        let m = Exec::Sequential.grid_max(vals.len(), |i| Some(vals[i]));
        assert_eq!(m.index, Some(1));
        assert_eq!(m.value, 3.0);
        #[cfg(feature = "parallel")]
        assert_eq!(Exec::Parallel.grid_max(vals.len(), |i| Some(vals[i])), m);
    }

    #[test]
    fn skipped_samples_are_counted() {
        let m = Exec::default().grid_max(10, |i| if i % 3 == 0 { None } else { Some(-(i as f64)) });
        assert_eq!(m.skipped, 4);
        assert_eq!(m.index, Some(1));
        let none = Exec::default().grid_max(3, |_| None);
        assert_eq!(none.index, None);
        assert_eq!(none.skipped, 3);
    }
}
