//! Maximize-form linear programming with equality constraints and box
//! bounds.
//!
//! [`solve`] runs a bounded-variable primal simplex (Phase 1 feasibility
//! with artificial variables, then Phase 2 on the real objective).
//! [`enumerate_vertices`] is a brute-force oracle over basic feasible
//! points, deliberately independent of the simplex code path, for testing
//! solver output on small instances.
//!
//! The pivot rules are deterministic: Dantzig pricing with lowest-index
//! tie-breaking, a relative-tolerance ratio test, and a switch to Bland's
//! rule after a stall. Identical inputs always produce identical outputs,
//! which the ensemble experiments rely on.

mod simplex;
mod vertex;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

pub use simplex::{feasible_basis, solve, solve_with_basis, FeasibleBasis};
pub use vertex::{enumerate_vertices, VERTEX_VAR_LIMIT};

/// maximize `c . v` subject to `A v = b`, `lower <= v <= upper`.
///
/// Infinite bounds are expressed with `-inf` / `+inf` scalar values.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem<S> {
    objective: Vec<S>,
    eq_matrix: Vec<S>, // row-major, m x n
    eq_rhs: Vec<S>,
    lower: Vec<S>,
    upper: Vec<S>,
    rows: usize,
    cols: usize,
}

impl<S: Scalar> LpProblem<S> {
    /// `eq_matrix` is row-major with `eq_rhs.len()` rows and
    /// `objective.len()` columns.
    pub fn new(
        objective: Vec<S>,
        eq_matrix: Vec<S>,
        eq_rhs: Vec<S>,
        lower: Vec<S>,
        upper: Vec<S>,
    ) -> Result<Self, LpError> {
        let cols = objective.len();
        let rows = eq_rhs.len();
        if eq_matrix.len() != rows * cols || lower.len() != cols || upper.len() != cols {
            return Err(LpError::Shape {
                rows,
                cols,
                matrix_len: eq_matrix.len(),
                lower_len: lower.len(),
                upper_len: upper.len(),
            });
        }
        for j in 0..cols {
            if lower[j] > upper[j] || lower[j].is_nan() || upper[j].is_nan() {
                return Err(LpError::BoundOrder { variable: j });
            }
        }
        Ok(LpProblem {
            objective,
            eq_matrix,
            eq_rhs,
            lower,
            upper,
            rows,
            cols,
        })
    }

    /// Pure box problem without equality constraints.
    pub fn boxed(objective: Vec<S>, lower: Vec<S>, upper: Vec<S>) -> Result<Self, LpError> {
        let n = objective.len();
        Self::new(objective, Vec::new(), Vec::new(), lower, upper).and_then(|p| {
            if p.cols == n {
                Ok(p)
            } else {
                unreachable!()
            }
        })
    }

    pub fn num_variables(&self) -> usize {
        self.cols
    }

    pub fn num_constraints(&self) -> usize {
        self.rows
    }

    pub fn objective(&self) -> &[S] {
        &self.objective
    }

    pub fn rhs(&self) -> &[S] {
        &self.eq_rhs
    }

    pub fn lower(&self) -> &[S] {
        &self.lower
    }

    pub fn upper(&self) -> &[S] {
        &self.upper
    }

    pub fn matrix_entry(&self, row: usize, col: usize) -> S {
        self.eq_matrix[row * self.cols + col]
    }

    /// Replaces the objective vector, keeping constraints and bounds.
    pub fn with_objective(&self, objective: Vec<S>) -> Result<Self, LpError> {
        if objective.len() != self.cols {
            return Err(LpError::Shape {
                rows: self.rows,
                cols: self.cols,
                matrix_len: self.eq_matrix.len(),
                lower_len: self.lower.len(),
                upper_len: self.upper.len(),
            });
        }
        let mut p = self.clone();
        p.objective = objective;
        Ok(p)
    }

    /// Overrides the bounds of one variable.
    pub fn set_bounds(&mut self, var: usize, lower: S, upper: S) -> Result<(), LpError> {
        if lower > upper || lower.is_nan() || upper.is_nan() {
            return Err(LpError::BoundOrder { variable: var });
        }
        self.lower[var] = lower;
        self.upper[var] = upper;
        Ok(())
    }

    pub fn dot_objective(&self, values: &[S]) -> S {
        self.objective
            .iter()
            .zip(values)
            .fold(S::zero(), |acc, (c, v)| acc + *c * *v)
    }

    /// max-norm of `A v - b`.
    pub fn constraint_residual(&self, values: &[S]) -> S {
        let mut worst = S::zero();
        for i in 0..self.rows {
            let mut acc = -self.eq_rhs[i];
            for j in 0..self.cols {
                acc = acc + self.matrix_entry(i, j) * values[j];
            }
            if acc.abs() > worst {
                worst = acc.abs();
            }
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SolveStatus::Optimal => write!(f, "optimal"),
            SolveStatus::Infeasible => write!(f, "infeasible"),
            SolveStatus::Unbounded => write!(f, "unbounded"),
        }
    }
}

/// Solver output. `objective_value` and `values` are present iff the status
/// is optimal.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution<S> {
    pub status: SolveStatus,
    pub objective_value: Option<S>,
    pub values: Option<Vec<S>>,
    pub iterations: usize,
}

impl<S: Scalar> LpSolution<S> {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}

/// Numerical tolerances and safety limits.
///
/// Feasibility tolerances are applied relative to the scale of the problem
/// data (right-hand side and finite bounds), so models with fluxes in the
/// hundreds are not held to an absolute 1e-9.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions<S> {
    /// Constraint and bound satisfaction tolerance (relative).
    pub eps_feas: S,
    /// Objective/reduced-cost tolerance (relative).
    pub eps_obj: S,
    /// Pivot cap; `None` selects `10 * (n + m) * 10`.
    pub max_iterations: Option<usize>,
    /// Engage Bland's rule after a stall; disable only for experiments.
    pub anti_cycling: bool,
}

impl<S: Scalar> Default for SolverOptions<S> {
    fn default() -> Self {
        SolverOptions {
            eps_feas: S::from_f64_lossy(1e-9),
            eps_obj: S::from_f64_lossy(1e-8),
            max_iterations: None,
            anti_cycling: true,
        }
    }
}

impl<S: Scalar> SolverOptions<S> {
    pub(crate) fn iteration_cap(&self, n: usize, m: usize) -> usize {
        self.max_iterations.unwrap_or(10 * (n + m) * 10)
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum LpError {
    #[error("inconsistent problem shape: {rows} rows x {cols} cols, matrix len {matrix_len}, lower len {lower_len}, upper len {upper_len}")]
    Shape {
        rows: usize,
        cols: usize,
        matrix_len: usize,
        lower_len: usize,
        upper_len: usize,
    },
    #[error("variable {variable}: lower bound exceeds upper bound (or NaN bound)")]
    BoundOrder { variable: usize },
    #[error("iteration limit reached after {iterations} pivots (cycling or numerical trouble)")]
    IterationLimit { iterations: usize },
    #[error("numerical failure: {detail}")]
    Numerical { detail: String },
    #[error("vertex enumeration limited to {limit} variables, got {cols}")]
    VertexGuard { cols: usize, limit: usize },
    #[error("vertex enumeration requires finite bounds (variable {variable})")]
    VertexUnboundedVariable { variable: usize },
    #[error("warm-start basis does not match problem shape")]
    BasisMismatch,
}
