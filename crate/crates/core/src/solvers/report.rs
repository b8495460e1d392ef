//! Solver status reporting.

/// Terminal status of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// Converged with the residual below the declared tolerance.
    Optimal,
    /// Lemke pivoting left along a secondary ray; no solution found.
    RayTermination,
    /// Iteration limit hit before convergence.
    IterationLimit,
    /// Numerical breakdown (singular system, diverging iterates).
    NumericalFailure,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::RayTermination => "ray-termination",
            SolveStatus::IterationLimit => "iteration-limit",
            SolveStatus::NumericalFailure => "numerical-failure",
        }
    }

    pub fn is_optimal(&self) -> bool {
        matches!(self, SolveStatus::Optimal)
    }
}

/// Outcome summary carried by every solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub iterations: usize,
    /// Max scaled KKT / complementarity residual at the returned point.
    pub residual: f64,
    pub wall_ms: f64,
}

impl SolveReport {
    pub fn new(status: SolveStatus, iterations: usize, residual: f64, wall_ms: f64) -> Self {
        SolveReport {
            status,
            iterations,
            residual,
            wall_ms,
        }
    }
}
