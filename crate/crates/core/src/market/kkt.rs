//! KKT systems as mixed complementarity problems.
//!
//! For a concave QP `max 0.5 x'Qx + c'x` with `A_eq x = b_eq` (free duals
//! nu), `A_in x <= b_in` (duals lambda >= 0), and box bounds on x, the KKT
//! points are exactly the solutions of the box-constrained complementarity
//! problem over z = (x, lambda, nu):
//!
//! ```text
//!   F(z) = M z + q,
//!   M = [ -Q     A_in'  A_eq' ]        q = [ -c   ]
//!       [ -A_in  0      0     ]            [ b_in ]
//!       [ -A_eq  0      0     ]            [ b_eq ]
//! ```
//!
//! with x keeping its bounds, lambda in [0, inf), nu free. At a solution,
//! F_i >= 0 where z_i sits on its lower bound, F_i <= 0 on the upper bound,
//! and F_i = 0 in the interior.
//!
//! The equilibrium model (EQM) is the same system built from the
//! fixed-weight program, except that the energy-side stationarity rows
//! (dispatch x_g and wind schedule y) no longer see the duals of the
//! reserve-requirement band: those coupling coefficients are scaled by a
//! homotopy parameter t, with t = 1 recovering the co-optimized coupling
//! and t = 0 the separately cleared market.

use super::qp::{build_fixed_weight_qp, MarketProgram, QuadraticProgram, RowMap, VarMap};
use super::types::{MarketConfig, ModelError, SystemConfig};
use crate::numerics::DenseMatrix;
use crate::scenarios::ScenarioSet;

/// Box-constrained linear complementarity problem: find z in [lower, upper]
/// with F(z) = M z + q complementary to the bounds.
#[derive(Debug, Clone)]
pub struct ComplementarityProblem {
    pub m: DenseMatrix,
    pub q: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub names: Vec<String>,
}

impl ComplementarityProblem {
    pub fn n(&self) -> usize {
        self.q.len()
    }

    /// F(z) = M z + q.
    pub fn f_value(&self, z: &[f64]) -> Vec<f64> {
        let mut f = self.m.matvec(z);
        for (fi, qi) in f.iter_mut().zip(&self.q) {
            *fi += qi;
        }
        f
    }

    /// Worst violation of feasibility/complementarity at z: the scaled
    /// natural-map residual `z - clamp(z - F(z), lower, upper)` plus any
    /// outright bound violation.
    pub fn residual(&self, z: &[f64]) -> f64 {
        let f = self.f_value(z);
        let mut worst = 0.0f64;
        for i in 0..self.n() {
            let out = (self.lower[i] - z[i]).max(z[i] - self.upper[i]).max(0.0);
            let natural = z[i] - (z[i] - f[i]).clamp(self.lower[i], self.upper[i]);
            let scale = 1.0 + z[i].abs() + f[i].abs();
            worst = worst.max(out).max(natural.abs() / scale);
        }
        worst
    }
}

/// Derive the KKT complementarity system of a QP.
pub fn com_kkt(qp: &QuadraticProgram) -> ComplementarityProblem {
    let n = qp.n();
    let mi = qp.n_in();
    let me = qp.n_eq();
    let total = n + mi + me;
    let mut m = DenseMatrix::zeros(total, total);
    let mut q = vec![0.0; total];
    let mut lower = vec![0.0; total];
    let mut upper = vec![f64::INFINITY; total];
    let mut names = Vec::with_capacity(total);

    // stationarity rows for x
    for i in 0..n {
        for j in 0..n {
            let v = -qp.quad.get(i, j);
            if v != 0.0 {
                m.set(i, j, v);
            }
        }
        for r in 0..mi {
            let v = qp.a_in.get(r, i);
            if v != 0.0 {
                m.set(i, n + r, v);
            }
        }
        for r in 0..me {
            let v = qp.a_eq.get(r, i);
            if v != 0.0 {
                m.set(i, n + mi + r, v);
            }
        }
        q[i] = -qp.linear[i];
        lower[i] = qp.lower[i];
        upper[i] = qp.upper[i];
        names.push(format!("stat[{}]", qp.var_names[i]));
    }
    // slack rows for inequality duals
    for r in 0..mi {
        for j in 0..n {
            let v = -qp.a_in.get(r, j);
            if v != 0.0 {
                m.set(n + r, j, v);
            }
        }
        q[n + r] = qp.b_in[r];
        names.push(format!("dual[{}]", qp.in_names[r]));
    }
    // residual rows for equality duals (free)
    for r in 0..me {
        for j in 0..n {
            let v = -qp.a_eq.get(r, j);
            if v != 0.0 {
                m.set(n + mi + r, j, v);
            }
        }
        q[n + mi + r] = qp.b_eq[r];
        lower[n + mi + r] = f64::NEG_INFINITY;
        names.push(format!("price[{}]", qp.eq_names[r]));
    }
    ComplementarityProblem {
        m,
        q,
        lower,
        upper,
        names,
    }
}

/// An equilibrium-model instance: the complementarity system plus the
/// index maps of the underlying fixed-weight program.
#[derive(Debug, Clone)]
pub struct EqmProblem {
    pub mcp: ComplementarityProblem,
    pub vars: VarMap,
    pub rows: RowMap,
    pub weights: Vec<f64>,
    pub homotopy: f64,
    /// The fixed-weight QP the system was derived from (used for
    /// diagnostics; its objective is not what EQM maximizes).
    pub program: MarketProgram,
}

/// Build the EQM complementarity system at scenario weights `weights` and
/// homotopy parameter `t` (t = 0 is the separately cleared market, t = 1
/// keeps the co-optimized coupling).
pub fn build_eqm_mcp(
    sys: &SystemConfig,
    mkt: &MarketConfig,
    scen: &ScenarioSet,
    weights: &[f64],
    t: f64,
) -> Result<EqmProblem, ModelError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(ModelError::InvalidConfig(format!(
            "homotopy parameter must lie in [0,1], got {t}"
        )));
    }
    let program = build_fixed_weight_qp(sys, mkt, scen, weights)?;
    let mut mcp = com_kkt(&program.qp);
    let n = program.qp.n();
    let vars = program.vars;
    let rows = program.rows;

    // scale the reserve-requirement opportunity-cost couplings in the
    // energy-side stationarity rows
    let kappa_col = n + rows.in_req_lower();
    let gamma_col = n + rows.in_req_upper();
    for col in [kappa_col, gamma_col] {
        let y = vars.wind_schedule();
        let v = mcp.m.get(y, col);
        mcp.m.set(y, col, t * v);
        for g in 0..vars.n_gens {
            let x = vars.dispatch(g);
            let v = mcp.m.get(x, col);
            mcp.m.set(x, col, t * v);
        }
    }
    Ok(EqmProblem {
        mcp,
        vars,
        rows,
        weights: weights.to_vec(),
        homotopy: t,
        program,
    })
}
