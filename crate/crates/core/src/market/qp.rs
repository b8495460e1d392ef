//! Two-stage market program assembly.
//!
//! The co-optimized market (COM) is a concave quadratic program over the
//! day-ahead schedule (energy sales d, dispatch x_g, wind schedule y,
//! committed reserves ru_g / rd_g), per-scenario recourse (reserve
//! deployments u/v, delivered wind, shed load), and the CVaR auxiliaries
//! (value-at-risk level eta and per-scenario shortfalls s_k).
//!
//! Objective (maximized):
//!
//! ```text
//!   gamma0*d - phi0/2*d^2 + fip*y
//!     + (1 - psi) * sum_k p_k * delta_k
//!     + psi * (eta - 1/(1-theta) * sum_k p_k * s_k)
//! ```
//!
//! where `delta_k = -sum_g C_g (x_g + u_gk - v_gk) - voll*l_k` is the
//! scenario-varying part of profit. Only `delta_k` enters the CVaR hinge,
//! which keeps every constraint linear and the objective's sole curvature
//! on d.
//!
//! In the risk-neutral limit (psi = 0) the hinge block has an unbounded
//! optimal face (eta can drift to -inf at zero objective cost), which no
//! interior-point or pivoting method resolves deterministically. The
//! builder therefore pins eta and s_k to zero and omits the hinge rows in
//! that case; their objective coefficients are zero either way and no other
//! constraint references them, so the optimum is unchanged.

use super::types::{MarketConfig, ModelError, SystemConfig};
use crate::numerics::DenseMatrix;
use crate::scenarios::ScenarioSet;

/// Variable index map for a market program.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarMap {
    pub n_gens: usize,
    pub n_scen: usize,
    /// Whether the layout carries the CVaR auxiliaries (eta, s_k).
    pub risk_block: bool,
}

impl VarMap {
    pub fn demand(&self) -> usize {
        0
    }
    pub fn wind_schedule(&self) -> usize {
        1
    }
    pub fn dispatch(&self, g: usize) -> usize {
        2 + g
    }
    pub fn reserve_up(&self, g: usize) -> usize {
        2 + self.n_gens + g
    }
    pub fn reserve_down(&self, g: usize) -> usize {
        2 + 2 * self.n_gens + g
    }
    fn scen_base(&self) -> usize {
        2 + 3 * self.n_gens
    }
    fn scen_block(&self) -> usize {
        2 * self.n_gens + 2
    }
    pub fn deploy_up(&self, k: usize, g: usize) -> usize {
        self.scen_base() + k * self.scen_block() + g
    }
    pub fn deploy_down(&self, k: usize, g: usize) -> usize {
        self.scen_base() + k * self.scen_block() + self.n_gens + g
    }
    pub fn wind_delivered(&self, k: usize) -> usize {
        self.scen_base() + k * self.scen_block() + 2 * self.n_gens
    }
    pub fn shed(&self, k: usize) -> usize {
        self.scen_base() + k * self.scen_block() + 2 * self.n_gens + 1
    }
    /// CVaR value-at-risk level; only present when the layout has a risk block.
    pub fn var_level(&self) -> usize {
        debug_assert!(self.risk_block);
        self.scen_base() + self.n_scen * self.scen_block()
    }
    pub fn shortfall(&self, k: usize) -> usize {
        debug_assert!(self.risk_block);
        self.var_level() + 1 + k
    }
    pub fn len(&self) -> usize {
        let base = self.scen_base() + self.n_scen * self.scen_block();
        if self.risk_block {
            base + 1 + self.n_scen
        } else {
            base
        }
    }

    pub fn names(&self) -> Vec<String> {
        let mut names = vec![String::new(); self.len()];
        names[self.demand()] = "d".into();
        names[self.wind_schedule()] = "y".into();
        for g in 0..self.n_gens {
            names[self.dispatch(g)] = format!("x[{g}]");
            names[self.reserve_up(g)] = format!("ru[{g}]");
            names[self.reserve_down(g)] = format!("rd[{g}]");
        }
        for k in 0..self.n_scen {
            for g in 0..self.n_gens {
                names[self.deploy_up(k, g)] = format!("u[{k},{g}]");
                names[self.deploy_down(k, g)] = format!("v[{k},{g}]");
            }
            names[self.wind_delivered(k)] = format!("ywind[{k}]");
            names[self.shed(k)] = format!("shed[{k}]");
        }
        if self.risk_block {
            names[self.var_level()] = "eta".into();
            for k in 0..self.n_scen {
                names[self.shortfall(k)] = format!("s[{k}]");
            }
        }
        names
    }
}

/// Constraint row index map (equalities and inequalities are separate blocks).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowMap {
    pub n_gens: usize,
    pub n_scen: usize,
    /// Whether the hinge rows s_k >= eta - delta_k are present.
    pub hinge: bool,
}

impl RowMap {
    // equalities
    pub fn eq_da_balance(&self) -> usize {
        0
    }
    pub fn eq_rt_balance(&self, k: usize) -> usize {
        1 + k
    }
    pub fn n_eq(&self) -> usize {
        1 + self.n_scen
    }

    // inequalities
    pub fn in_capacity(&self, g: usize) -> usize {
        g
    }
    pub fn in_rd_le_x(&self, g: usize) -> usize {
        self.n_gens + g
    }
    pub fn in_ramp_up(&self, g: usize) -> usize {
        2 * self.n_gens + g
    }
    pub fn in_ramp_down(&self, g: usize) -> usize {
        3 * self.n_gens + g
    }
    pub fn in_req_lower(&self) -> usize {
        4 * self.n_gens
    }
    pub fn in_req_upper(&self) -> usize {
        4 * self.n_gens + 1
    }
    pub fn in_down_lower(&self) -> usize {
        4 * self.n_gens + 2
    }
    pub fn in_down_upper(&self) -> usize {
        4 * self.n_gens + 3
    }
    pub fn in_wind_sched_cap(&self) -> usize {
        4 * self.n_gens + 4
    }
    fn scen_in_base(&self) -> usize {
        4 * self.n_gens + 5
    }
    fn scen_in_block(&self) -> usize {
        2 * self.n_gens + 2
    }
    pub fn in_deploy_up(&self, k: usize, g: usize) -> usize {
        self.scen_in_base() + k * self.scen_in_block() + g
    }
    pub fn in_deploy_down(&self, k: usize, g: usize) -> usize {
        self.scen_in_base() + k * self.scen_in_block() + self.n_gens + g
    }
    pub fn in_wind_avail(&self, k: usize) -> usize {
        self.scen_in_base() + k * self.scen_in_block() + 2 * self.n_gens
    }
    pub fn in_shed_cap(&self, k: usize) -> usize {
        self.scen_in_base() + k * self.scen_in_block() + 2 * self.n_gens + 1
    }
    pub fn in_hinge(&self, k: usize) -> usize {
        debug_assert!(self.hinge);
        self.scen_in_base() + self.n_scen * self.scen_in_block() + k
    }
    pub fn n_in(&self) -> usize {
        let base = self.scen_in_base() + self.n_scen * self.scen_in_block();
        if self.hinge {
            base + self.n_scen
        } else {
            base
        }
    }

    pub fn eq_names(&self) -> Vec<String> {
        let mut names = vec![String::new(); self.n_eq()];
        names[self.eq_da_balance()] = "da_balance".into();
        for k in 0..self.n_scen {
            names[self.eq_rt_balance(k)] = format!("rt_balance[{k}]");
        }
        names
    }

    pub fn in_names(&self) -> Vec<String> {
        let mut names = vec![String::new(); self.n_in()];
        for g in 0..self.n_gens {
            names[self.in_capacity(g)] = format!("capacity[{g}]");
            names[self.in_rd_le_x(g)] = format!("rd_le_x[{g}]");
            names[self.in_ramp_up(g)] = format!("ramp_up[{g}]");
            names[self.in_ramp_down(g)] = format!("ramp_down[{g}]");
        }
        names[self.in_req_lower()] = "req_lower".into();
        names[self.in_req_upper()] = "req_upper".into();
        names[self.in_down_lower()] = "down_lower".into();
        names[self.in_down_upper()] = "down_upper".into();
        names[self.in_wind_sched_cap()] = "wind_sched_cap".into();
        for k in 0..self.n_scen {
            for g in 0..self.n_gens {
                names[self.in_deploy_up(k, g)] = format!("deploy_up[{k},{g}]");
                names[self.in_deploy_down(k, g)] = format!("deploy_down[{k},{g}]");
            }
            names[self.in_wind_avail(k)] = format!("wind_avail[{k}]");
            names[self.in_shed_cap(k)] = format!("shed_cap[{k}]");
        }
        if self.hinge {
            for k in 0..self.n_scen {
                names[self.in_hinge(k)] = format!("hinge[{k}]");
            }
        }
        names
    }
}

/// A concave QP in maximization form with equalities, inequalities
/// (`a_in x <= b_in`), and simple bounds.
#[derive(Debug, Clone)]
pub struct QuadraticProgram {
    pub quad: DenseMatrix,
    pub linear: Vec<f64>,
    pub a_eq: DenseMatrix,
    pub b_eq: Vec<f64>,
    pub a_in: DenseMatrix,
    pub b_in: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub var_names: Vec<String>,
    pub eq_names: Vec<String>,
    pub in_names: Vec<String>,
}

impl QuadraticProgram {
    pub fn n(&self) -> usize {
        self.linear.len()
    }

    pub fn n_eq(&self) -> usize {
        self.b_eq.len()
    }

    pub fn n_in(&self) -> usize {
        self.b_in.len()
    }

    /// 0.5 x'Qx + c'x.
    pub fn objective_value(&self, x: &[f64]) -> f64 {
        let qx = self.quad.matvec(x);
        0.5 * crate::numerics::dot(&qx, x) + crate::numerics::dot(&self.linear, x)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let n = self.n();
        let dims_ok = self.quad.rows() == n
            && self.quad.cols() == n
            && self.a_eq.cols() == n
            && self.a_in.cols() == n
            && self.a_eq.rows() == self.b_eq.len()
            && self.a_in.rows() == self.b_in.len()
            && self.lower.len() == n
            && self.upper.len() == n;
        if !dims_ok {
            return Err(ModelError::Dimension("inconsistent QP blocks".into()));
        }
        for i in 0..n {
            if self.lower[i] > self.upper[i] {
                return Err(ModelError::InvalidConfig(format!(
                    "variable {i}: lower bound above upper bound"
                )));
            }
            for j in 0..i {
                if (self.quad.get(i, j) - self.quad.get(j, i)).abs() > 1e-12 {
                    return Err(ModelError::InvalidConfig(
                        "quadratic matrix must be symmetric".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// A market program together with its index maps and scenario weights.
#[derive(Debug, Clone)]
pub struct MarketProgram {
    pub qp: QuadraticProgram,
    pub vars: VarMap,
    pub rows: RowMap,
    /// Scenario weights carried by the objective (probabilities for COM).
    pub weights: Vec<f64>,
}

fn validate_inputs(
    sys: &SystemConfig,
    mkt: &MarketConfig,
    scen: &ScenarioSet,
) -> Result<(), ModelError> {
    sys.validate()?;
    mkt.validate()?;
    if scen.is_empty() {
        return Err(ModelError::InvalidConfig("empty scenario set".into()));
    }
    if scen.values.len() != scen.probabilities.len() {
        return Err(ModelError::Dimension(
            "scenario values/probabilities length mismatch".into(),
        ));
    }
    Ok(())
}

/// Shared constraint assembly for both program variants.
///
/// `scen_weights` are the objective weights on the scenario profit parts
/// delta_k; `risk` carries (psi, theta, probabilities) when the CVaR block
/// is wanted (COM with psi > 0).
fn assemble(
    sys: &SystemConfig,
    mkt: &MarketConfig,
    scen: &ScenarioSet,
    scen_weights: &[f64],
    risk: Option<(f64, f64)>,
) -> MarketProgram {
    let n_g = sys.generators.len();
    let n_k = scen.len();
    let hinge = matches!(risk, Some((psi, _)) if psi > 0.0);
    // COM keeps the auxiliaries in the layout even at psi = 0 (pinned to 0).
    let vars = VarMap {
        n_gens: n_g,
        n_scen: n_k,
        risk_block: risk.is_some(),
    };
    let rows = RowMap {
        n_gens: n_g,
        n_scen: n_k,
        hinge,
    };
    let n = vars.len();
    let policy = sys.reserve.with_my(mkt.my);

    // objective
    let mut quad = DenseMatrix::zeros(n, n);
    quad.set(vars.demand(), vars.demand(), -sys.demand.phi0);
    let mut linear = vec![0.0; n];
    linear[vars.demand()] = sys.demand.gamma0;
    linear[vars.wind_schedule()] = mkt.fip;
    for (g, gen) in sys.generators.iter().enumerate() {
        linear[vars.dispatch(g)] = -scen_weights.iter().sum::<f64>() * gen.cost;
        for k in 0..n_k {
            linear[vars.deploy_up(k, g)] = -scen_weights[k] * gen.cost;
            linear[vars.deploy_down(k, g)] = scen_weights[k] * gen.cost;
        }
    }
    for k in 0..n_k {
        linear[vars.shed(k)] = -scen_weights[k] * sys.voll;
    }
    if let Some((psi_v, theta)) = risk {
        linear[vars.var_level()] = psi_v;
        for k in 0..n_k {
            linear[vars.shortfall(k)] = -psi_v * scen.probabilities[k] / (1.0 - theta);
        }
    }

    // bounds: everything nonnegative except the CVaR level
    let mut lower = vec![0.0; n];
    let mut upper = vec![f64::INFINITY; n];
    // zero-capacity entities are pinned so no constraint row is left with
    // an empty interior (interior-point methods need strict slack)
    for (g, gen) in sys.generators.iter().enumerate() {
        if gen.capacity == 0.0 {
            upper[vars.dispatch(g)] = 0.0;
            upper[vars.reserve_up(g)] = 0.0;
            upper[vars.reserve_down(g)] = 0.0;
            for k in 0..n_k {
                upper[vars.deploy_up(k, g)] = 0.0;
                upper[vars.deploy_down(k, g)] = 0.0;
            }
        }
    }
    if sys.wind_capacity == 0.0 {
        upper[vars.wind_schedule()] = 0.0;
        for k in 0..n_k {
            upper[vars.wind_delivered(k)] = 0.0;
        }
    }
    if let Some((psi_v, _)) = risk {
        if psi_v > 0.0 {
            lower[vars.var_level()] = f64::NEG_INFINITY;
        } else {
            // pinned: the hinge rows are absent and the coefficients zero
            upper[vars.var_level()] = 0.0;
            for k in 0..n_k {
                upper[vars.shortfall(k)] = 0.0;
            }
        }
    }

    // equalities
    let mut a_eq = DenseMatrix::zeros(rows.n_eq(), n);
    let b_eq = vec![0.0; rows.n_eq()];
    {
        let r = rows.eq_da_balance();
        a_eq.set(r, vars.demand(), 1.0);
        a_eq.set(r, vars.wind_schedule(), -1.0);
        for g in 0..n_g {
            a_eq.set(r, vars.dispatch(g), -1.0);
        }
    }
    for k in 0..n_k {
        let r = rows.eq_rt_balance(k);
        a_eq.set(r, vars.demand(), 1.0);
        for g in 0..n_g {
            a_eq.set(r, vars.dispatch(g), -1.0);
            a_eq.set(r, vars.deploy_up(k, g), -1.0);
            a_eq.set(r, vars.deploy_down(k, g), 1.0);
        }
        a_eq.set(r, vars.wind_delivered(k), -1.0);
        a_eq.set(r, vars.shed(k), -1.0);
    }

    // inequalities
    let mut a_in = DenseMatrix::zeros(rows.n_in(), n);
    let mut b_in = vec![0.0; rows.n_in()];
    for (g, gen) in sys.generators.iter().enumerate() {
        let r = rows.in_capacity(g);
        a_in.set(r, vars.dispatch(g), 1.0);
        a_in.set(r, vars.reserve_up(g), 1.0);
        b_in[r] = gen.capacity;

        let r = rows.in_rd_le_x(g);
        a_in.set(r, vars.reserve_down(g), 1.0);
        a_in.set(r, vars.dispatch(g), -1.0);

        let r = rows.in_ramp_up(g);
        a_in.set(r, vars.reserve_up(g), 1.0);
        a_in.set(r, vars.dispatch(g), gen.ramp_up * sys.lambda);
        b_in[r] = gen.ramp_up * gen.capacity;

        let r = rows.in_ramp_down(g);
        a_in.set(r, vars.reserve_down(g), 1.0);
        a_in.set(r, vars.dispatch(g), gen.ramp_down * sys.lambda);
        b_in[r] = gen.ramp_down * gen.capacity;
    }
    {
        // requirement band on upward reserve
        let lo = rows.in_req_lower();
        let up = rows.in_req_upper();
        for g in 0..n_g {
            a_in.set(lo, vars.dispatch(g), policy.a_lo * policy.mx);
            a_in.set(lo, vars.reserve_up(g), -1.0);
            a_in.set(up, vars.dispatch(g), -policy.a_up * policy.mx);
            a_in.set(up, vars.reserve_up(g), 1.0);
        }
        a_in.set(lo, vars.wind_schedule(), policy.a_lo * policy.my);
        a_in.set(up, vars.wind_schedule(), -policy.a_up * policy.my);

        // band tying downward to upward reserve
        let dlo = rows.in_down_lower();
        let dup = rows.in_down_upper();
        for g in 0..n_g {
            a_in.set(dlo, vars.reserve_up(g), policy.b);
            a_in.set(dlo, vars.reserve_down(g), -1.0);
            a_in.set(dup, vars.reserve_up(g), -1.0);
            a_in.set(dup, vars.reserve_down(g), 1.0);
        }

        let r = rows.in_wind_sched_cap();
        a_in.set(r, vars.wind_schedule(), 1.0);
        b_in[r] = sys.wind_capacity;
    }
    for k in 0..n_k {
        for g in 0..n_g {
            let r = rows.in_deploy_up(k, g);
            a_in.set(r, vars.deploy_up(k, g), 1.0);
            a_in.set(r, vars.reserve_up(g), -1.0);

            let r = rows.in_deploy_down(k, g);
            a_in.set(r, vars.deploy_down(k, g), 1.0);
            a_in.set(r, vars.reserve_down(g), -1.0);
        }
        let r = rows.in_wind_avail(k);
        a_in.set(r, vars.wind_delivered(k), 1.0);
        b_in[r] = scen.values[k] * sys.wind_capacity;

        let r = rows.in_shed_cap(k);
        a_in.set(r, vars.shed(k), 1.0);
        a_in.set(r, vars.demand(), -1.0);
    }
    if hinge {
        // eta - delta_k - s_k <= 0, with delta_k spelled out
        for k in 0..n_k {
            let r = rows.in_hinge(k);
            a_in.set(r, vars.var_level(), 1.0);
            for (g, gen) in sys.generators.iter().enumerate() {
                a_in.set(r, vars.dispatch(g), gen.cost);
                a_in.set(r, vars.deploy_up(k, g), gen.cost);
                a_in.set(r, vars.deploy_down(k, g), -gen.cost);
            }
            a_in.set(r, vars.shed(k), sys.voll);
            a_in.set(r, vars.shortfall(k), -1.0);
        }
    }

    let qp = QuadraticProgram {
        quad,
        linear,
        a_eq,
        b_eq,
        a_in,
        b_in,
        lower,
        upper,
        var_names: vars.names(),
        eq_names: rows.eq_names(),
        in_names: rows.in_names(),
    };
    MarketProgram {
        qp,
        vars,
        rows,
        weights: scen_weights.to_vec(),
    }
}

/// Build the co-optimized two-stage program (COM).
pub fn build_com_qp(
    sys: &SystemConfig,
    mkt: &MarketConfig,
    scen: &ScenarioSet,
) -> Result<MarketProgram, ModelError> {
    validate_inputs(sys, mkt, scen)?;
    let weights: Vec<f64> = scen
        .probabilities
        .iter()
        .map(|p| (1.0 - mkt.psi) * p)
        .collect();
    Ok(assemble(sys, mkt, scen, &weights, Some((mkt.psi, mkt.theta))))
}

/// Build the fixed-weight program variant used by the equilibrium model:
/// the CVaR machinery is absent and the scenario profit parts are weighted
/// by the given probability vector.
pub fn build_fixed_weight_qp(
    sys: &SystemConfig,
    mkt: &MarketConfig,
    scen: &ScenarioSet,
    weights: &[f64],
) -> Result<MarketProgram, ModelError> {
    validate_inputs(sys, mkt, scen)?;
    if weights.len() != scen.len() {
        return Err(ModelError::Dimension(
            "weights length does not match scenario count".into(),
        ));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(ModelError::BadWeights(total));
    }
    if weights.iter().any(|w| *w < -1e-12) {
        return Err(ModelError::BadWeights(f64::NAN));
    }
    Ok(assemble(sys, mkt, scen, weights, None))
}

/// Scenario-varying profit part delta_k at a given primal point.
pub fn scenario_profit(
    sys: &SystemConfig,
    vars: &VarMap,
    primal: &[f64],
    k: usize,
) -> f64 {
    let mut cost = 0.0;
    for (g, gen) in sys.generators.iter().enumerate() {
        cost += gen.cost
            * (primal[vars.dispatch(g)] + primal[vars.deploy_up(k, g)]
                - primal[vars.deploy_down(k, g)]);
    }
    -cost - sys.voll * primal[vars.shed(k)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::scenarios::build_default_scenarios;

    fn ll_setup() -> (SystemConfig, MarketConfig, ScenarioSet) {
        let sys = presets::system_preset(presets::SystemPreset::LL);
        let mkt = presets::market_preset(presets::MarketPreset::FiPL);
        let scen = build_default_scenarios(mkt.mu).unwrap();
        (sys, mkt, scen)
    }

    #[test]
    fn variable_count_matches_index_map() {
        let (sys, mkt, scen) = ll_setup();
        let prog = build_com_qp(&sys, &mkt, &scen).unwrap();
        let g = sys.generators.len();
        let k = scen.len();
        assert_eq!(g, 9);
        assert_eq!(k, 12);
        let expect = 2 + 3 * g + k * (2 * g + 2) + 1 + k;
        assert_eq!(prog.qp.n(), expect);
        assert_eq!(prog.vars.len(), expect);
        assert_eq!(prog.qp.n_eq(), 1 + k);
        assert_eq!(prog.qp.n_in(), 4 * g + 5 + k * (2 * g + 2) + k);
    }

    #[test]
    fn single_quadratic_entry() {
        let (sys, mkt, scen) = ll_setup();
        let prog = build_com_qp(&sys, &mkt, &scen).unwrap();
        assert_eq!(prog.qp.quad.count_nonzero(0.0), 1);
        let d = prog.vars.demand();
        assert!((prog.qp.quad.get(d, d) + sys.demand.phi0).abs() < 1e-15);
        prog.qp.validate().unwrap();
    }

    #[test]
    fn risk_neutral_zeroes_cvar_coefficients() {
        let (sys, _, scen) = ll_setup();
        let mkt = presets::market_preset(presets::MarketPreset::RiskL);
        assert_eq!(mkt.psi, 0.0);
        let prog = build_com_qp(&sys, &mkt, &scen).unwrap();
        assert_eq!(prog.qp.linear[prog.vars.var_level()], 0.0);
        for k in 0..scen.len() {
            assert_eq!(prog.qp.linear[prog.vars.shortfall(k)], 0.0);
        }
        // pinned auxiliaries, no hinge rows
        assert!(!prog.rows.hinge);
        assert_eq!(prog.qp.upper[prog.vars.var_level()], 0.0);
    }

    #[test]
    fn zero_wind_degenerate_model() {
        let (mut sys, mut mkt, scen) = ll_setup();
        sys.wind_capacity = 0.0;
        mkt.my = 0.0;
        let prog = build_com_qp(&sys, &mkt, &scen).unwrap();
        // wind schedule capped at zero
        let r = prog.rows.in_wind_sched_cap();
        assert_eq!(prog.qp.b_in[r], 0.0);
        // the requirement rows carry no wind coefficient
        let lo = prog.rows.in_req_lower();
        assert_eq!(prog.qp.a_in.get(lo, prog.vars.wind_schedule()), 0.0);
        for k in 0..scen.len() {
            assert_eq!(prog.qp.b_in[prog.rows.in_wind_avail(k)], 0.0);
        }
    }

    #[test]
    fn fixed_weight_variant_drops_risk_block() {
        let (sys, mkt, scen) = ll_setup();
        let w = vec![1.0 / 12.0; 12];
        let prog = build_fixed_weight_qp(&sys, &mkt, &scen, &w).unwrap();
        assert!(!prog.vars.risk_block);
        assert!(!prog.rows.hinge);
        let g = sys.generators.len();
        let k = scen.len();
        assert_eq!(prog.qp.n(), 2 + 3 * g + k * (2 * g + 2));
        // dispatch cost coefficient is the full marginal cost
        assert!((prog.qp.linear[prog.vars.dispatch(0)] + sys.generators[0].cost).abs() < 1e-12);
    }

    #[test]
    fn fixed_weight_rejects_bad_sum() {
        let (sys, mkt, scen) = ll_setup();
        let w = vec![0.1; 12];
        match build_fixed_weight_qp(&sys, &mkt, &scen, &w) {
            Err(ModelError::BadWeights(_)) => {}
            other => panic!("expected BadWeights, got {other:?}"),
        }
    }
}
