//! End-to-end market solves.
//!
//! COM goes through the interior-point QP solver. EQM runs the fixed-point
//! iteration: solve the complementarity system at the current scenario
//! weights, recompute the CVaR weights from the realized scenario profits,
//! blend and damp, repeat until the weights settle. When Lemke ray-terminates
//! away from the co-optimized coupling, the homotopy parameter is walked
//! down from the last value that solved (the separately cleared market is
//! a continuous transformation of the co-optimized one).

use super::cvar::cvar;
use super::ipm::{kkt_residual, solve_qp, QpSolution};
use super::lemke::{lemke_with_basis, ComplementBasis};
use super::report::{SolveReport, SolveStatus};
use super::SolveError;
use crate::market::{
    build_com_qp, build_eqm_mcp, com_kkt, scenario_profit, MarketConfig, MarketProgram,
    MarketSolution, ModelKind, SystemConfig,
};
use crate::scenarios::ScenarioSet;
use std::time::Instant;

/// Damping factor on the weight update.
const WEIGHT_DAMPING: f64 = 0.5;
/// Fixed-point stopping tolerance on the weight change (sup norm).
const WEIGHT_TOL: f64 = 1e-8;
/// Fixed-point iteration cap.
const MAX_FIXED_POINT_ITERS: usize = 100;
/// Physical verification tolerance on returned solutions.
const VERIFY_TOL: f64 = 1e-6;

/// Solve the co-optimized market as a QP.
pub fn solve_com(
    sys: &SystemConfig,
    mkt: &MarketConfig,
    scen: &ScenarioSet,
) -> Result<MarketSolution, SolveError> {
    let program = build_com_qp(sys, mkt, scen).map_err(SolveError::Model)?;
    let qp_sol = solve_qp(&program.qp)?;
    if !qp_sol.report.status.is_optimal() {
        return Err(SolveError::Unsolved {
            status: qp_sol.report.status,
            message: format!(
                "QP solve ended {} with residual {:.3e}",
                qp_sol.report.status.as_str(),
                qp_sol.report.residual
            ),
        });
    }
    let sol = unpack_qp_solution(ModelKind::Com, sys, &program, qp_sol);
    let policy = sys.reserve.with_my(mkt.my);
    sol.verify_physical(&policy, VERIFY_TOL)
        .map_err(SolveError::Model)?;
    Ok(sol)
}

/// Solve the co-optimized market through its KKT complementarity system
/// (the crosscheck route).
pub fn solve_com_via_kkt(
    sys: &SystemConfig,
    mkt: &MarketConfig,
    scen: &ScenarioSet,
) -> Result<MarketSolution, SolveError> {
    let start = Instant::now();
    let program = build_com_qp(sys, mkt, scen).map_err(SolveError::Model)?;
    let mcp = com_kkt(&program.qp);
    let (z, report, _) = lemke_with_basis(&mcp, None);
    if !report.status.is_optimal() {
        return Err(SolveError::Unsolved {
            status: report.status,
            message: format!(
                "KKT complementarity solve ended {} with residual {:.3e}",
                report.status.as_str(),
                report.residual
            ),
        });
    }
    let sol = unpack_mcp_point(
        ModelKind::Com,
        sys,
        &program,
        &mcp,
        &z,
        SolveReport::new(
            report.status,
            report.iterations,
            report.residual,
            start.elapsed().as_secs_f64() * 1e3,
        ),
        None,
    );
    let policy = sys.reserve.with_my(mkt.my);
    sol.verify_physical(&policy, VERIFY_TOL)
        .map_err(SolveError::Model)?;
    Ok(sol)
}

/// Solve the equilibrium model at homotopy parameter `t` (0 = separately
/// cleared market, 1 = co-optimized coupling).
pub fn solve_eqm(
    sys: &SystemConfig,
    mkt: &MarketConfig,
    scen: &ScenarioSet,
    t: f64,
) -> Result<MarketSolution, SolveError> {
    let start = Instant::now();
    let probs = scen.probabilities.clone();
    let mut phi = probs.clone();
    let mut basis: Option<ComplementBasis> = None;
    let mut fixed_point_residual = f64::INFINITY;
    let mut converged = false;
    let mut iterations = 0usize;
    let mut last: Option<(MarketProgram, crate::market::ComplementarityProblem, Vec<f64>, SolveReport)> =
        None;

    for iter in 1..=MAX_FIXED_POINT_ITERS {
        iterations = iter;
        let (eqm, z, report, new_basis) =
            solve_mcp_with_continuation(sys, mkt, scen, &phi, t, basis.as_ref())?;
        basis = Some(new_basis);

        let delta: Vec<f64> = (0..scen.len())
            .map(|k| scenario_profit(sys, &eqm.vars, &z, k))
            .collect();
        let tail = cvar(&delta, &probs, mkt.theta);
        let mut next = vec![0.0; phi.len()];
        let mut diff = 0.0f64;
        for k in 0..phi.len() {
            let raw = (1.0 - mkt.psi) * probs[k] + mkt.psi * tail.weights[k];
            next[k] = (1.0 - WEIGHT_DAMPING) * phi[k] + WEIGHT_DAMPING * raw;
            diff = diff.max((next[k] - phi[k]).abs());
        }
        fixed_point_residual = diff;
        last = Some((eqm.program, eqm.mcp, z, report));
        if diff <= WEIGHT_TOL {
            converged = true;
            break;
        }
        // renormalize to guard against drift over many iterations
        let total: f64 = next.iter().sum();
        for w in &mut next {
            *w /= total;
        }
        phi = next;
    }

    let (program, mcp, z, mcp_report) = last.expect("at least one iteration ran");
    let status = if converged {
        mcp_report.status
    } else {
        SolveStatus::IterationLimit
    };
    let report = SolveReport::new(
        status,
        iterations,
        mcp_report.residual,
        start.elapsed().as_secs_f64() * 1e3,
    );
    let mut sol = unpack_mcp_point(
        ModelKind::Eqm,
        sys,
        &program,
        &mcp,
        &z,
        report,
        Some((&probs, mkt.theta)),
    );
    sol.fixed_point_residual = Some(fixed_point_residual);
    if converged {
        let policy = sys.reserve.with_my(mkt.my);
        sol.verify_physical(&policy, VERIFY_TOL)
            .map_err(SolveError::Model)?;
    }
    Ok(sol)
}

/// One EQM complementarity solve at fixed weights, with homotopy
/// continuation as the fallback when Lemke ray-terminates: step from the
/// last homotopy value that solved toward the target, giving up after
/// three failed continuations.
fn solve_mcp_with_continuation(
    sys: &SystemConfig,
    mkt: &MarketConfig,
    scen: &ScenarioSet,
    phi: &[f64],
    t_target: f64,
    warm: Option<&ComplementBasis>,
) -> Result<(crate::market::EqmProblem, Vec<f64>, SolveReport, ComplementBasis), SolveError> {
    let eqm = build_eqm_mcp(sys, mkt, scen, phi, t_target).map_err(SolveError::Model)?;
    let (z, report, basis) = lemke_with_basis(&eqm.mcp, warm);
    if report.status.is_optimal() {
        return Ok((eqm, z, report, basis));
    }

    // the co-optimized coupling is monotone; anchor the path there
    let eqm_anchor = build_eqm_mcp(sys, mkt, scen, phi, 1.0).map_err(SolveError::Model)?;
    let (_, report_anchor, mut carry_basis) = lemke_with_basis(&eqm_anchor.mcp, warm);
    if !report_anchor.status.is_optimal() {
        return Err(SolveError::Unsolved {
            status: report_anchor.status,
            message: format!(
                "complementarity solve failed even at the co-optimized coupling ({})",
                report_anchor.status.as_str()
            ),
        });
    }
    let mut t_good = 1.0;
    let mut t_try = t_target;
    let mut failures = 1; // the direct attempt above already failed
    let mut pivots = report.iterations + report_anchor.iterations;
    loop {
        let eqm_try = build_eqm_mcp(sys, mkt, scen, phi, t_try).map_err(SolveError::Model)?;
        let (z_try, rep_try, b_try) = lemke_with_basis(&eqm_try.mcp, Some(&carry_basis));
        pivots += rep_try.iterations;
        if rep_try.status.is_optimal() {
            carry_basis = b_try;
            if (t_try - t_target).abs() < 1e-15 {
                let rep = SolveReport::new(SolveStatus::Optimal, pivots, rep_try.residual, 0.0);
                return Ok((eqm_try, z_try, rep, carry_basis));
            }
            t_good = t_try;
            t_try = t_target;
        } else {
            failures += 1;
            if failures > 3 {
                return Err(SolveError::Unsolved {
                    status: rep_try.status,
                    message: format!(
                        "homotopy continuation gave up after {failures} failures (last good t = {t_good})"
                    ),
                });
            }
            t_try = 0.5 * (t_good + t_try);
        }
    }
}

/// Assemble a market solution from a QP solve.
pub fn unpack_qp_solution(
    model: ModelKind,
    sys: &SystemConfig,
    program: &MarketProgram,
    qp_sol: QpSolution,
) -> MarketSolution {
    let objective = qp_sol.objective;
    let mut sol = MarketSolution::unpack(
        model,
        sys,
        program,
        qp_sol.primal,
        qp_sol.in_duals,
        qp_sol.eq_duals,
        objective,
        qp_sol.report,
    );
    sol.lower_duals = qp_sol.lower_duals;
    sol.upper_duals = qp_sol.upper_duals;
    sol
}

/// Assemble a market solution from a complementarity point z = (x, lambda, nu).
/// `risk_info` carries (probabilities, theta) so the CVaR level can be
/// derived for layouts without the risk block.
fn unpack_mcp_point(
    model: ModelKind,
    sys: &SystemConfig,
    program: &MarketProgram,
    mcp: &crate::market::ComplementarityProblem,
    z: &[f64],
    report: SolveReport,
    risk_info: Option<(&[f64], f64)>,
) -> MarketSolution {
    let n = program.qp.n();
    let mi = program.qp.n_in();
    let primal = z[..n].to_vec();
    let in_duals = z[n..n + mi].to_vec();
    let eq_duals = z[n + mi..].to_vec();
    let objective = program.qp.objective_value(&primal);

    // implicit bound duals from the complementarity residues
    let f = mcp.f_value(z);
    let mut lower_duals = vec![0.0; n];
    let mut upper_duals = vec![0.0; n];
    for i in 0..n {
        let lo = mcp.lower[i];
        let up = mcp.upper[i];
        let scale = 1.0 + z[i].abs();
        if lo == up {
            // pinned variable: the reduced gradient splits by sign
            lower_duals[i] = f[i].max(0.0);
            upper_duals[i] = (-f[i]).max(0.0);
        } else if lo.is_finite() && (z[i] - lo).abs() <= 1e-7 * scale {
            lower_duals[i] = f[i].max(0.0);
        } else if up.is_finite() && (up - z[i]).abs() <= 1e-7 * scale {
            upper_duals[i] = (-f[i]).max(0.0);
        }
    }

    let mut sol = MarketSolution::unpack(
        model,
        sys,
        program,
        primal,
        in_duals,
        eq_duals,
        objective,
        report,
    );
    sol.lower_duals = lower_duals;
    sol.upper_duals = upper_duals;
    if !program.vars.risk_block {
        if let Some((probs, theta)) = risk_info {
            // derive the risk auxiliaries from the realized profits
            let tail = cvar(&sol.scenario_profits, probs, theta);
            sol.var_level = tail.var_level;
            sol.shortfalls = sol
                .scenario_profits
                .iter()
                .map(|d| (tail.var_level - d).max(0.0))
                .collect();
        }
    }
    sol
}

/// Canonical representative of the optimal face a solution lies on.
///
/// Optimal schedules are not unique in every coordinate: committed reserve
/// may be split freely across generators when the requirement band is
/// slack, and recourse with zero scenario weight floats inside its
/// polytope. Every such optimum attains the same objective, metrics, and
/// duals; only the representative point differs between solution methods.
/// This selects one deterministically: fix the (strictly concave, hence
/// unique) demand, cut the feasible set at the achieved linear objective
/// minus a hair, and minimize the squared norm of the remaining variables.
/// The result is the unique nearest-to-origin point of the optimal face;
/// the original duals remain valid for it, so the pair still satisfies the
/// program's KKT conditions.
///
/// Only meaningful for solutions of the co-optimized program (including
/// its complementarity route and the equilibrium model at homotopy 1 with
/// risk aversion zero, whose solutions lie on the same face).
pub fn canonical_face_selection(
    sys: &SystemConfig,
    mkt: &MarketConfig,
    scen: &ScenarioSet,
    sol: &MarketSolution,
) -> Result<MarketSolution, SolveError> {
    let program = build_com_qp(sys, mkt, scen).map_err(SolveError::Model)?;
    let n = program.qp.n();
    // extend an equilibrium-layout primal with the pinned risk auxiliaries
    let primal: Vec<f64> = if sol.primal.len() == n {
        sol.primal.clone()
    } else if mkt.psi == 0.0 && sol.primal.len() + 1 + scen.len() == n {
        let mut p = sol.primal.clone();
        p.resize(n, 0.0);
        p
    } else {
        return Err(SolveError::Model(crate::market::ModelError::Dimension(
            "solution layout does not match the co-optimized program".into(),
        )));
    };
    if sol.in_duals.len() != program.qp.n_in() || sol.eq_duals.len() != program.qp.n_eq() {
        return Err(SolveError::Model(crate::market::ModelError::Dimension(
            "dual layout does not match the co-optimized program".into(),
        )));
    }

    let linear_value = crate::numerics::dot(&program.qp.linear, &primal);
    let slack = 1e-8 * (1.0 + linear_value.abs());

    let mut canon = program.qp.clone();
    // pin demand at its (unique) optimal value
    let d_idx = program.vars.demand();
    canon.lower[d_idx] = primal[d_idx];
    canon.upper[d_idx] = primal[d_idx];
    // objective-level cut: c'x >= c'x* - slack
    let rows = canon.a_in.rows();
    let mut a_in = crate::numerics::DenseMatrix::zeros(rows + 1, n);
    for r in 0..rows {
        for j in 0..n {
            let v = canon.a_in.get(r, j);
            if v != 0.0 {
                a_in.set(r, j, v);
            }
        }
    }
    for j in 0..n {
        let v = -canon.linear[j];
        if v != 0.0 {
            a_in.set(rows, j, v);
        }
    }
    canon.a_in = a_in;
    canon.b_in.push(-(linear_value - slack));
    canon.in_names.push("objective_cut".into());
    // minimize the squared norm over the face
    canon.quad = {
        let mut q = crate::numerics::DenseMatrix::zeros(n, n);
        for i in 0..n {
            q.set(i, i, -1.0);
        }
        q
    };
    canon.linear = vec![0.0; n];

    let canon_sol = solve_qp(&canon)?;
    if !canon_sol.report.status.is_optimal() {
        return Err(SolveError::Unsolved {
            status: canon_sol.report.status,
            message: "canonical face selection did not converge".into(),
        });
    }
    let objective = program.qp.objective_value(&canon_sol.primal);
    let mut out = MarketSolution::unpack(
        sol.model,
        sys,
        &program,
        canon_sol.primal,
        sol.in_duals.clone(),
        sol.eq_duals.clone(),
        objective,
        sol.report,
    );
    out.fixed_point_residual = sol.fixed_point_residual;
    Ok(out)
}

/// Scaled KKT residual of a market solution against its program.
pub fn market_kkt_residual(program: &MarketProgram, sol: &MarketSolution) -> f64 {
    let view = QpSolution {
        primal: sol.primal.clone(),
        eq_duals: sol.eq_duals.clone(),
        in_duals: sol.in_duals.clone(),
        lower_duals: sol.lower_duals.clone(),
        upper_duals: sol.upper_duals.clone(),
        objective: sol.objective,
        report: sol.report,
    };
    kkt_residual(&program.qp, &view)
}
