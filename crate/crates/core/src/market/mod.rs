//! Market data model and the two market-design formulations: the
//! co-optimized QP and the equilibrium complementarity system, linked by a
//! homotopy on the reserve-requirement opportunity-cost couplings.

mod kkt;
mod qp;
mod solution;
mod types;

pub use kkt::{build_eqm_mcp, com_kkt, ComplementarityProblem, EqmProblem};
pub use qp::{
    build_com_qp, build_fixed_weight_qp, scenario_profit, MarketProgram, QuadraticProgram,
    RowMap, VarMap,
};
pub use solution::{MarketSolution, ModelKind};
pub use types::{
    reserve_requirement, DemandCurve, DispatchableGen, MarketConfig, ModelError, ReservePolicy,
    SystemConfig,
};
