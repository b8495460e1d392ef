//! Solvers: interior-point QP, Lemke complementary pivoting, closed-form
//! CVaR, and the EQM fixed-point iteration with homotopy continuation.
//!
//! Every solve is single-threaded and deterministic; distinct solves share
//! no state and may run concurrently.

mod cvar;
mod ipm;
mod lemke;
mod pipeline;
mod report;

pub use cvar::{cvar, CvarResult};
pub use ipm::{kkt_residual, solve_qp, QpSolution};
pub use lemke::{lemke, lemke_with_basis, ComplementBasis};
pub use pipeline::{
    canonical_face_selection, market_kkt_residual, solve_com, solve_com_via_kkt, solve_eqm,
    unpack_qp_solution,
};
pub use report::{SolveReport, SolveStatus};

use crate::market::ModelError;
use crate::numerics::NumericsError;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum SolveError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("solve failed ({status:?}): {message}")]
    Unsolved {
        status: SolveStatus,
        message: String,
    },
}

impl SolveError {
    /// The terminal status carried by the failure, for reporting rows.
    pub fn status(&self) -> SolveStatus {
        match self {
            SolveError::Unsolved { status, .. } => *status,
            _ => SolveStatus::NumericalFailure,
        }
    }
}
