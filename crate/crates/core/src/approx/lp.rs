//! Two-phase revised simplex on dense data.
//!
//! Sized for the problems this crate produces: a dozen equality rows and a
//! few thousand columns (the minimax dual), or a handful of rows and
//! columns in primal form.

use thiserror::Error;

const PIVOT_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-10;
const FEAS_TOL: f64 = 1e-9;
const MAX_PIVOTS: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("the linear program is infeasible")]
    Infeasible,
    #[error("the linear program is unbounded")]
    Unbounded,
    #[error("pivot limit reached")]
    PivotLimit,
    #[error("the basis matrix became singular")]
    SingularBasis,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn new(coeffs: Vec<f64>, relation: Relation, rhs: f64) -> Self {
        Constraint {
            coeffs,
            relation,
            rhs,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarBound {
    Free,
    NonNegative,
}

/// `minimize objective·x` subject to the constraints and variable bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub bounds: Vec<VarBound>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>, bounds: Vec<VarBound>) -> Self {
        LinearProgram {
            objective,
            bounds,
            constraints: Vec::new(),
        }
    }

    pub fn constrain(&mut self, c: Constraint) -> &mut Self {
        self.constraints.push(c);
        self
    }

    pub fn solve(&self) -> Result<LpSolution, LpError> {
        let n = self.objective.len();
        if self.bounds.len() != n {
            return Err(LpError::Dimension("one bound per variable".into()));
        }
        if let Some(c) = self.constraints.iter().find(|c| c.coeffs.len() != n) {
            return Err(LpError::Dimension(format!(
                "constraint has {} coefficients, expected {n}",
                c.coeffs.len()
            )));
        }

        // Column layout: one column per non-negative variable, two per free
        // variable (x = x⁺ - x⁻), then one slack per inequality.
        let mut col_of = Vec::with_capacity(n);
        let mut ncols = 0;
        for b in &self.bounds {
            col_of.push(ncols);
            ncols += if *b == VarBound::Free { 2 } else { 1 };
        }
        let slack_start = ncols;
        ncols += self
            .constraints
            .iter()
            .filter(|c| c.relation != Relation::Eq)
            .count();

        let mut rows = Vec::with_capacity(self.constraints.len());
        let mut rhs = Vec::with_capacity(self.constraints.len());
        let mut slack = slack_start;
        for c in &self.constraints {
            let mut row = vec![0.0; ncols];
            for (v, &a) in c.coeffs.iter().enumerate() {
                row[col_of[v]] = a;
                if self.bounds[v] == VarBound::Free {
                    row[col_of[v] + 1] = -a;
                }
            }
            match c.relation {
                Relation::Le => {
                    row[slack] = 1.0;
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -1.0;
                    slack += 1;
                }
                Relation::Eq => {}
            }
            rows.push(row);
            rhs.push(c.rhs);
        }
        let mut cost = vec![0.0; ncols];
        for (v, &c) in self.objective.iter().enumerate() {
            cost[col_of[v]] = c;
            if self.bounds[v] == VarBound::Free {
                cost[col_of[v] + 1] = -c;
            }
        }

        let sol = solve_standard(&rows, &rhs, &cost)?;
        let x = (0..n)
            .map(|v| match self.bounds[v] {
                VarBound::Free => sol.y[col_of[v]] - sol.y[col_of[v] + 1],
                VarBound::NonNegative => sol.y[col_of[v]],
            })
            .collect();
        Ok(LpSolution {
            x,
            objective: sol.objective,
        })
    }
}

/// Optimum of a standard-form problem with its simplex multipliers.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardSolution {
    /// Primal variables.
    pub y: Vec<f64>,
    pub objective: f64,
    /// Multipliers `π` with `Bᵀπ = c_B` for the final basis; they solve the
    /// dual `max bᵀπ s.t. Aᵀπ ≤ c`.
    pub multipliers: Vec<f64>,
}

/// `minimize cost·y` subject to `rows·y = rhs`, `y ≥ 0`.
///
/// Revised simplex: the basis matrix is refactorised every iteration, so
/// rounding does not accumulate across pivots. Columns `n..n+m` are the
/// phase-1 artificials.
pub fn solve_standard(rows: &[Vec<f64>], rhs: &[f64], cost: &[f64]) -> Result<StandardSolution, LpError> {
    let m = rows.len();
    let n = cost.len();
    if rhs.len() != m || rows.iter().any(|r| r.len() != n) {
        return Err(LpError::Dimension("rows, rhs and cost disagree".into()));
    }
    let mut s = Simplex::new(rows, rhs, n);

    let phase1: Vec<f64> = (0..n + m).map(|j| if j >= n { 1.0 } else { 0.0 }).collect();
    s.run(&phase1, n + m)?;
    let scale = 1.0 + rhs.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    let infeasibility: f64 = s.basic_values()?.iter().zip(&s.basis).filter(|(_, &b)| b >= n).map(|(v, _)| v).sum();
    if infeasibility > FEAS_TOL * scale {
        return Err(LpError::Infeasible);
    }
    s.evict_artificials()?;
    s.pinned = true;

    let mut full = cost.to_vec();
    full.resize(n + m, 0.0);
    s.run(&full, n)?;

    let xb = s.basic_values()?;
    let mut y = vec![0.0; n];
    for (&b, &v) in s.basis.iter().zip(&xb) {
        if b < n {
            y[b] = v.max(0.0);
        }
    }
    let multipliers = s.multipliers(&full)?;
    let objective = cost.iter().zip(&y).map(|(c, v)| c * v).sum();
    Ok(StandardSolution {
        y,
        objective,
        multipliers,
    })
}

struct Simplex<'a> {
    rows: &'a [Vec<f64>],
    rhs: &'a [f64],
    n: usize,
    /// Sign of the artificial column of each row, chosen so the starting
    /// basis is feasible.
    art_sign: Vec<f64>,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    /// Set after phase 1: remaining basic artificials must stay at zero.
    pinned: bool,
}

impl<'a> Simplex<'a> {
    fn new(rows: &'a [Vec<f64>], rhs: &'a [f64], n: usize) -> Self {
        let m = rows.len();
        let mut in_basis = vec![false; n + m];
        in_basis[n..].iter_mut().for_each(|b| *b = true);
        Simplex {
            rows,
            rhs,
            n,
            art_sign: rhs.iter().map(|&b| if b < 0.0 { -1.0 } else { 1.0 }).collect(),
            basis: (n..n + m).collect(),
            in_basis,
            pinned: false,
        }
    }

    fn entry(&self, i: usize, j: usize) -> f64 {
        if j < self.n {
            self.rows[i][j]
        } else if j - self.n == i {
            self.art_sign[i]
        } else {
            0.0
        }
    }

    fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows.len()).map(|i| self.entry(i, j)).collect()
    }

    fn basis_matrix(&self) -> Vec<Vec<f64>> {
        let m = self.rows.len();
        (0..m).map(|i| self.basis.iter().map(|&b| self.entry(i, b)).collect()).collect()
    }

    fn basic_values(&self) -> Result<Vec<f64>, LpError> {
        lu_solve(self.basis_matrix(), self.rhs.to_vec(), false)
    }

    fn multipliers(&self, cost: &[f64]) -> Result<Vec<f64>, LpError> {
        let cb = self.basis.iter().map(|&b| cost[b]).collect();
        lu_solve(self.basis_matrix(), cb, true)
    }

    /// Minimises `cost` from the current basis; only columns `< enter_limit`
    /// may enter. Dantzig pricing, falling back to Bland's rule after a run
    /// of degenerate pivots.
    fn run(&mut self, cost: &[f64], enter_limit: usize) -> Result<(), LpError> {
        let m = self.rows.len();
        let cost_tol = COST_TOL * (1.0 + cost.iter().fold(0.0f64, |a, c| a.max(c.abs())));
        let mut degenerate_run = 0;
        for _ in 0..MAX_PIVOTS {
            let pi = self.multipliers(cost)?;
            let bland = degenerate_run > 2 * m + 10;
            let mut enter: Option<(usize, f64)> = None;
            for j in (0..enter_limit).filter(|&j| !self.in_basis[j]) {
                let dj = cost[j] - (0..m).map(|i| pi[i] * self.entry(i, j)).sum::<f64>();
                if dj < -cost_tol {
                    if bland {
                        enter = Some((j, dj));
                        break;
                    }
                    if enter.is_none_or(|(_, best)| dj < best) {
                        enter = Some((j, dj));
                    }
                }
            }
            let Some((col, _)) = enter else {
                return Ok(());
            };
            let xb = self.basic_values()?;
            let d = lu_solve(self.basis_matrix(), self.column(col), false)?;
            let leave = self.ratio_test(&xb, &d, bland);
            let Some((row, step)) = leave else {
                return Err(LpError::Unbounded);
            };
            degenerate_run = if step <= FEAS_TOL { degenerate_run + 1 } else { 0 };
            self.in_basis[self.basis[row]] = false;
            self.in_basis[col] = true;
            self.basis[row] = col;
        }
        Err(LpError::PivotLimit)
    }

    /// Harris two-pass ratio test: among rows whose ratio is within the
    /// relaxed bound, take the largest pivot. Basic artificials (kept only
    /// for redundant rows) leave at step zero whenever they would move.
    fn ratio_test(&self, xb: &[f64], d: &[f64], bland: bool) -> Option<(usize, f64)> {
        let dmax = d.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let tol = PIVOT_TOL * (1.0 + dmax);
        if self.pinned {
            for (i, &b) in self.basis.iter().enumerate() {
                if b >= self.n && d[i].abs() > tol {
                    return Some((i, 0.0));
                }
            }
        }
        let bound = (0..d.len())
            .filter(|&i| d[i] > tol)
            .map(|i| (xb[i].max(0.0) + FEAS_TOL) / d[i])
            .fold(f64::INFINITY, f64::min);
        if bound.is_infinite() {
            return None;
        }
        let candidates = (0..d.len()).filter(|&i| d[i] > tol && xb[i].max(0.0) / d[i] <= bound);
        let row = if bland {
            candidates.min_by_key(|&i| self.basis[i])
        } else {
            candidates.max_by(|&i, &k| d[i].total_cmp(&d[k]))
        }?;
        Some((row, xb[row].max(0.0) / d[row]))
    }

    /// Swaps basic artificials for structural columns where the basis stays
    /// nonsingular. Rows where no swap exists are redundant.
    fn evict_artificials(&mut self) -> Result<(), LpError> {
        let m = self.rows.len();
        for i in 0..m {
            if self.basis[i] < self.n {
                continue;
            }
            // Row i of B⁻¹ gives the entries of each column in this basis row.
            let mut e = vec![0.0; m];
            e[i] = 1.0;
            let r = lu_solve(self.basis_matrix(), e, true)?;
            let best = (0..self.n)
                .filter(|&j| !self.in_basis[j])
                .map(|j| (j, (0..m).map(|k| r[k] * self.entry(k, j)).sum::<f64>().abs()))
                .filter(|&(_, v)| v > 1e-7)
                .max_by(|a, b| a.1.total_cmp(&b.1));
            if let Some((j, _)) = best {
                self.in_basis[self.basis[i]] = false;
                self.in_basis[j] = true;
                self.basis[i] = j;
            }
        }
        Ok(())
    }
}

/// Solves `A x = b` (or `Aᵀ x = b`) by Gaussian elimination with partial pivoting.
fn lu_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>, transpose: bool) -> Result<Vec<f64>, LpError> {
    let m = b.len();
    if transpose {
        a = (0..m).map(|i| (0..m).map(|j| a[j][i]).collect()).collect();
    }
    let scale = a.iter().flatten().fold(0.0f64, |s, v| s.max(v.abs()));
    for k in 0..m {
        let p = (k..m)
            .max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))
            .expect("nonempty range");
        if a[p][k].abs() <= 1e-14 * scale {
            return Err(LpError::SingularBasis);
        }
        a.swap(k, p);
        b.swap(k, p);
        for i in k + 1..m {
            let f = a[i][k] / a[k][k];
            if f != 0.0 {
                let (top, bottom) = a.split_at_mut(i);
                for (x, y) in bottom[0][k..].iter_mut().zip(&top[k][k..]) {
                    *x -= f * y;
                }
                b[i] -= f * b[k];
            }
        }
    }
    for k in (0..m).rev() {
        let s: f64 = (k + 1..m).map(|j| a[k][j] * b[j]).sum();
        b[k] = (b[k] - s) / a[k][k];
    }
    Ok(b)
}
