//! Solution engines. All of them pin vertex 1 to `V1` and break ties towards
//! the lexicographically smallest `V1`.

mod bnb;
mod brute;
mod local;

use std::fmt;
use std::time::Duration;

use thiserror::Error;

use crate::graph::{Bisection, CutReport, Graph};

pub use bnb::{branch_and_bound_solve, BranchAndBound, NodeTrace};
pub use brute::{
    balanced_bisections, brute_force_solve, brute_force_solve_with, feasible_bisections,
    BruteForceOptions,
};
pub use local::{local_search_solve, LocalSearch};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("bisection needs an even number of vertices, got {0}")]
    OddVertexCount(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Feasible,
    Infeasible,
    /// A limit was reached before any feasible bisection was found.
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Optimal => "optimal",
            Status::Feasible => "feasible",
            Status::Infeasible => "infeasible",
            Status::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub bisection: Bisection,
    pub cut: CutReport,
}

impl Solution {
    pub fn weight(&self) -> f64 {
        self.cut.weight
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub status: Status,
    pub best: Option<Solution>,
    pub nodes_explored: u64,
    pub elapsed: Duration,
    pub optimality_proved: bool,
}

impl SolveReport {
    pub fn weight(&self) -> Option<f64> {
        self.best.as_ref().map(Solution::weight)
    }
}

pub(crate) fn require_even(g: &Graph) -> Result<(), SolveError> {
    let n = g.vertex_count();
    if n.is_multiple_of(2) {
        Ok(())
    } else {
        Err(SolveError::OddVertexCount(n))
    }
}

/// Solution from a membership mask (slot 0 unused, `true` means `V1`).
pub(crate) fn solution_from_mask(g: &Graph, mask: &[bool]) -> Solution {
    let side = (1..=g.vertex_count()).filter(|&v| mask[v]);
    let bisection = Bisection::from_side(g.vertex_count(), side);
    let canonical = g
        .membership(&bisection.side_one)
        .expect("mask vertices are in range");
    Solution {
        cut: g.cut_report(&canonical),
        bisection,
    }
}
