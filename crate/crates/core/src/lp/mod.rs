//! Sparse linear programs `max c·x  s.t.  A x ≤ b,  lo ≤ x ≤ hi`.
//!
//! Programs are assembled row by row into compressed sparse rows and handed
//! to [`solve`]. Every row is a one-sided inequality; absolute-value
//! constraints are expanded by the caller.

mod backend;
mod dump;

pub use backend::{solve, solve_with, Method};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    objective: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    row_start: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
    rhs: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// `c·x` at `primal`; NaN unless optimal.
    pub objective_value: f64,
    /// Empty unless optimal.
    pub primal: Vec<f64>,
    pub iterations: u64,
}

impl LinearProgram {
    /// `var_count` free variables, zero objective, no rows.
    pub fn new(var_count: usize) -> Self {
        LinearProgram {
            objective: vec![0.0; var_count],
            lower: vec![f64::NEG_INFINITY; var_count],
            upper: vec![f64::INFINITY; var_count],
            row_start: vec![0],
            cols: Vec::new(),
            vals: Vec::new(),
            rhs: Vec::new(),
        }
    }

    pub fn var_count(&self) -> usize {
        self.objective.len()
    }

    pub fn row_count(&self) -> usize {
        self.rhs.len()
    }

    pub fn nonzeros(&self) -> usize {
        self.vals.len()
    }

    pub fn set_objective(&mut self, var: usize, coeff: f64) {
        self.objective[var] = coeff;
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn set_bounds(&mut self, var: usize, lo: f64, hi: f64) {
        self.lower[var] = lo;
        self.upper[var] = hi;
    }

    pub fn bounds(&self, var: usize) -> (f64, f64) {
        (self.lower[var], self.upper[var])
    }

    /// Appends `Σ coeff·x_var ≤ rhs`. Zero coefficients are dropped.
    pub fn add_row(&mut self, terms: &[(usize, f64)], rhs: f64) {
        for &(var, coeff) in terms {
            if coeff != 0.0 {
                self.cols.push(var);
                self.vals.push(coeff);
            }
        }
        self.row_start.push(self.cols.len());
        self.rhs.push(rhs);
    }

    /// Appends the pair `e ≤ r` and `−e ≤ r`, i.e. `|e| ≤ r`.
    pub fn add_abs_row(&mut self, terms: &[(usize, f64)], rhs: f64) {
        self.add_row(terms, rhs);
        for &(var, coeff) in terms {
            if coeff != 0.0 {
                self.cols.push(var);
                self.vals.push(-coeff);
            }
        }
        self.row_start.push(self.cols.len());
        self.rhs.push(rhs);
    }

    /// Column indices, coefficients and right-hand side of row `r`.
    pub fn row(&self, r: usize) -> (&[usize], &[f64], f64) {
        let span = self.row_start[r]..self.row_start[r + 1];
        (&self.cols[span.clone()], &self.vals[span], self.rhs[r])
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.var_count();
        if let Some(&bad) = self.cols.iter().find(|&&c| c >= n) {
            return Err(Error::Parameter(format!("row references variable {bad} of {n}")));
        }
        if self.objective.iter().chain(&self.vals).any(|v| !v.is_finite()) {
            return Err(Error::Parameter("non-finite LP coefficient".into()));
        }
        if self.rhs.iter().any(|b| b.is_nan()) {
            return Err(Error::Parameter("NaN right-hand side".into()));
        }
        for j in 0..n {
            let (lo, hi) = self.bounds(j);
            if lo.is_nan() || hi.is_nan() || lo > hi {
                return Err(Error::Parameter(format!("variable {j} has bounds [{lo}, {hi}]")));
            }
        }
        Ok(())
    }

    /// `c·x`.
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Largest violation of any row or bound at `x` (zero when feasible).
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let rows = (0..self.row_count()).map(|r| {
            let (cols, vals, b) = self.row(r);
            let ax: f64 = cols.iter().zip(vals).map(|(&c, v)| v * x[c]).sum();
            ax - b
        });
        let bounds = x
            .iter()
            .enumerate()
            .map(|(j, &v)| (self.lower[j] - v).max(v - self.upper[j]));
        rows.chain(bounds).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abs_row_expands_to_two_rows() {
        let mut lp = LinearProgram::new(2);
        lp.add_abs_row(&[(0, 1.0), (1, -2.0)], 3.0);
        assert_eq!(lp.row_count(), 2);
        assert_eq!(lp.row(0), (&[0usize, 1][..], &[1.0, -2.0][..], 3.0));
        assert_eq!(lp.row(1), (&[0usize, 1][..], &[-1.0, 2.0][..], 3.0));
    }

    #[test]
    fn violation_check() {
        let mut lp = LinearProgram::new(2);
        lp.set_bounds(0, 0.0, 1.0);
        lp.add_row(&[(0, 1.0), (1, 1.0)], 1.0);
        assert_eq!(lp.max_violation(&[0.5, 0.5]), 0.0);
        assert!((lp.max_violation(&[1.0, 0.5]) - 0.5).abs() < 1e-15);
        assert!((lp.max_violation(&[-0.25, 0.0]) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn validation_catches_bad_programs() {
        let mut lp = LinearProgram::new(1);
        lp.add_row(&[(3, 1.0)], 1.0);
        assert!(lp.validate().is_err());
        let mut lp = LinearProgram::new(1);
        lp.set_objective(0, f64::NAN);
        assert!(lp.validate().is_err());
        let mut lp = LinearProgram::new(1);
        lp.set_bounds(0, 1.0, 0.0);
        assert!(lp.validate().is_err());
    }
}
