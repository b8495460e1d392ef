//! Laboratory for comparing co-optimized (COM) and separately cleared
//! (EQM) energy-and-reserve electricity markets under wind uncertainty.
//!
//! The crate is organized bottom-up:
//!
//! - [`numerics`]: dense LU, log-gamma, regularized incomplete beta and
//!   its inverse.
//! - [`scenarios`]: equal-probability Beta-distribution wind scenarios.
//! - [`market`]: market data model, the co-optimized QP, its KKT
//!   complementarity system, and the equilibrium variant with the
//!   homotopy-scaled reserve couplings.
//! - [`solvers`]: interior-point QP solver, Lemke pivoting, CVaR, and the
//!   fixed-point iteration for the equilibrium model.
//! - [`metrics`]: the six reported quantities with percent-of-base
//!   normalization.
//! - [`presets`]: the built-in generation fleets and the eight market
//!   configurations.

pub mod market;
pub mod metrics;
pub mod numerics;
pub mod presets;
pub mod scenarios;
pub mod solvers;
