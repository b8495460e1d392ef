//! Market solution container: first-stage schedule, per-scenario recourse,
//! dual prices, and solver diagnostics, for either market design.

use super::qp::{scenario_profit, MarketProgram};
use super::types::{ModelError, ReservePolicy, SystemConfig};
use crate::solvers::SolveReport;

/// Which market design produced a solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    /// Co-optimized energy and reserve (single convex program).
    Com,
    /// Separately cleared energy and reserve (complementarity system).
    Eqm,
}

impl ModelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::Com => "COM",
            ModelKind::Eqm => "EQM",
        }
    }
}

/// Solved market outcome.
#[derive(Debug, Clone)]
pub struct MarketSolution {
    pub model: ModelKind,
    /// Day-ahead energy sales d (MWh).
    pub demand: f64,
    /// Scheduled wind y (MW).
    pub wind_schedule: f64,
    /// Scheduled dispatch x_g (MW).
    pub dispatch: Vec<f64>,
    /// Committed upward reserve ru_g (MW).
    pub reserve_up: Vec<f64>,
    /// Committed downward reserve rd_g (MW).
    pub reserve_down: Vec<f64>,
    /// Upward deployment u[k][g] (MW).
    pub deploy_up: Vec<Vec<f64>>,
    /// Downward deployment v[k][g] (MW).
    pub deploy_down: Vec<Vec<f64>>,
    /// Delivered wind per scenario (MW).
    pub wind_delivered: Vec<f64>,
    /// Shed load per scenario (MW).
    pub shed: Vec<f64>,
    /// CVaR value-at-risk level eta (EUR); for EQM this is derived from
    /// the realized scenario profits rather than a program variable.
    pub var_level: f64,
    /// CVaR shortfalls s_k (EUR).
    pub shortfalls: Vec<f64>,
    /// Scenario-varying profit parts delta_k (EUR).
    pub scenario_profits: Vec<f64>,
    /// Scenario weights in force (probabilities for COM, terminal
    /// fixed-point weights for EQM).
    pub scenario_weights: Vec<f64>,
    /// Day-ahead balance-row multiplier (EUR/MWh). Because demand also
    /// appears in every real-time balance, the marginal value of energy
    /// splits across stages; the quoted market price is the inverse-demand
    /// price at `demand`, not this multiplier.
    pub da_price: f64,
    /// Real-time balance duals per scenario.
    pub rt_prices: Vec<f64>,
    /// Dual of the reserve-requirement lower band (kappa-bar).
    pub kappa_up: f64,
    /// Dual of the reserve-requirement upper band (gamma-bar).
    pub gamma_up: f64,
    /// Dual of the downward-reserve lower band (kappa-underbar).
    pub kappa_down: f64,
    /// Dual of the downward-reserve upper band (gamma-underbar).
    pub gamma_down: f64,
    /// Capacity-constraint duals per generator.
    pub capacity_duals: Vec<f64>,
    /// Ramp-limit duals per generator (upward).
    pub ramp_up_duals: Vec<f64>,
    /// Ramp-limit duals per generator (downward).
    pub ramp_down_duals: Vec<f64>,
    /// Objective value of the program that produced the solution.
    pub objective: f64,
    pub report: SolveReport,
    /// Sup-norm weight change at termination of the EQM fixed point.
    pub fixed_point_residual: Option<f64>,
    /// Raw primal vector in the producing program's variable order.
    pub primal: Vec<f64>,
    /// Raw inequality duals in the producing program's row order.
    pub in_duals: Vec<f64>,
    /// Raw equality duals in the producing program's row order.
    pub eq_duals: Vec<f64>,
    /// Bound multipliers per variable (lower side).
    pub lower_duals: Vec<f64>,
    /// Bound multipliers per variable (upper side).
    pub upper_duals: Vec<f64>,
}

impl MarketSolution {
    /// Unpack primal and dual vectors produced for a market program.
    ///
    /// Simultaneous up- and down-deployment of one generator in one
    /// scenario is objective-neutral (only u - v enters the model), so
    /// solutions carry an arbitrary circulation component that differs
    /// between solution methods. Unpacking cancels it (u, v) -= min(u, v)
    /// whenever both deployment-cap duals are slack, which keeps
    /// feasibility, objective, and complementarity intact.
    pub fn unpack(
        model: ModelKind,
        sys: &SystemConfig,
        program: &MarketProgram,
        mut primal: Vec<f64>,
        in_duals: Vec<f64>,
        eq_duals: Vec<f64>,
        objective: f64,
        report: SolveReport,
    ) -> Self {
        let vars = &program.vars;
        let rows = &program.rows;
        let n_g = vars.n_gens;
        let n_k = vars.n_scen;
        for k in 0..n_k {
            for g in 0..n_g {
                let iu = vars.deploy_up(k, g);
                let iv = vars.deploy_down(k, g);
                let circ = primal[iu].min(primal[iv]);
                if circ > 0.0
                    && in_duals[rows.in_deploy_up(k, g)].abs() <= 1e-6
                    && in_duals[rows.in_deploy_down(k, g)].abs() <= 1e-6
                {
                    primal[iu] -= circ;
                    primal[iv] -= circ;
                }
            }
        }
        let dispatch: Vec<f64> = (0..n_g).map(|g| primal[vars.dispatch(g)]).collect();
        let scenario_profits: Vec<f64> =
            (0..n_k).map(|k| scenario_profit(sys, vars, &primal, k)).collect();
        MarketSolution {
            model,
            demand: primal[vars.demand()],
            wind_schedule: primal[vars.wind_schedule()],
            dispatch,
            reserve_up: (0..n_g).map(|g| primal[vars.reserve_up(g)]).collect(),
            reserve_down: (0..n_g).map(|g| primal[vars.reserve_down(g)]).collect(),
            deploy_up: (0..n_k)
                .map(|k| (0..n_g).map(|g| primal[vars.deploy_up(k, g)]).collect())
                .collect(),
            deploy_down: (0..n_k)
                .map(|k| (0..n_g).map(|g| primal[vars.deploy_down(k, g)]).collect())
                .collect(),
            wind_delivered: (0..n_k).map(|k| primal[vars.wind_delivered(k)]).collect(),
            shed: (0..n_k).map(|k| primal[vars.shed(k)]).collect(),
            var_level: if vars.risk_block {
                primal[vars.var_level()]
            } else {
                0.0
            },
            shortfalls: if vars.risk_block {
                (0..n_k).map(|k| primal[vars.shortfall(k)]).collect()
            } else {
                vec![0.0; n_k]
            },
            scenario_profits,
            scenario_weights: program.weights.clone(),
            da_price: eq_duals[rows.eq_da_balance()],
            rt_prices: (0..n_k).map(|k| eq_duals[rows.eq_rt_balance(k)]).collect(),
            kappa_up: in_duals[rows.in_req_lower()],
            gamma_up: in_duals[rows.in_req_upper()],
            kappa_down: in_duals[rows.in_down_lower()],
            gamma_down: in_duals[rows.in_down_upper()],
            capacity_duals: (0..n_g).map(|g| in_duals[rows.in_capacity(g)]).collect(),
            ramp_up_duals: (0..n_g).map(|g| in_duals[rows.in_ramp_up(g)]).collect(),
            ramp_down_duals: (0..n_g).map(|g| in_duals[rows.in_ramp_down(g)]).collect(),
            objective,
            report,
            fixed_point_residual: None,
            lower_duals: vec![0.0; primal.len()],
            upper_duals: vec![0.0; primal.len()],
            primal,
            in_duals,
            eq_duals,
        }
    }

    pub fn total_reserve_up(&self) -> f64 {
        self.reserve_up.iter().sum()
    }

    pub fn total_reserve_down(&self) -> f64 {
        self.reserve_down.iter().sum()
    }

    pub fn total_dispatch(&self) -> f64 {
        self.dispatch.iter().sum()
    }

    /// Check the reserve bands and the balance residuals; called by the
    /// solve pipelines before a solution is returned.
    pub fn verify_physical(
        &self,
        policy: &ReservePolicy,
        tol: f64,
    ) -> Result<(), ModelError> {
        let req = super::types::reserve_requirement(&self.dispatch, self.wind_schedule, policy);
        let ru = self.total_reserve_up();
        let rd = self.total_reserve_down();
        let scale = 1.0 + req.abs();
        if ru < policy.a_lo * req - tol * scale || ru > policy.a_up * req + tol * scale {
            return Err(ModelError::InvalidConfig(format!(
                "upward reserve {ru} outside [{}, {}]",
                policy.a_lo * req,
                policy.a_up * req
            )));
        }
        if rd < policy.b * ru - tol * scale || rd > ru + tol * scale {
            return Err(ModelError::InvalidConfig(format!(
                "downward reserve {rd} outside [{}, {ru}]",
                policy.b * ru
            )));
        }
        let da = self.total_dispatch() + self.wind_schedule - self.demand;
        if da.abs() > tol * (1.0 + self.demand.abs()) {
            return Err(ModelError::InvalidConfig(format!(
                "day-ahead balance residual {da}"
            )));
        }
        for k in 0..self.shed.len() {
            let supply: f64 = self
                .dispatch
                .iter()
                .enumerate()
                .map(|(g, x)| x + self.deploy_up[k][g] - self.deploy_down[k][g])
                .sum::<f64>()
                + self.wind_delivered[k]
                + self.shed[k];
            let r = supply - self.demand;
            if r.abs() > tol * (1.0 + self.demand.abs()) {
                return Err(ModelError::InvalidConfig(format!(
                    "real-time balance residual {r} in scenario {k}"
                )));
            }
        }
        Ok(())
    }
}
