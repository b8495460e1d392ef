//! Dense primal-dual interior-point solver for concave QPs with Mehrotra
//! predictor-corrector steps.
//!
//! The public problem is a maximization (see [`QuadraticProgram`]); it is
//! flipped to the internal minimization form `min 0.5 x'Px + g'x` with
//! `P = -Q`, `g = -c`. Inequalities get slacks `s >= 0` with duals
//! `z >= 0`; finite variable bounds get diagonal barrier terms instead of
//! explicit rows. Each iteration eliminates the complementarity blocks and
//! solves one augmented system
//!
//! ```text
//!   [ P + C'WC + D   A' ] [dx]   [ r1 ]
//!   [ A              0  ] [dy] = [ r2 ]
//! ```
//!
//! by dense LU, reusing the factors for the corrector step.
//!
//! Dual sign convention (maximization): `L = f - lambda'(A_in x - b_in)
//! - nu'(A_eq x - b_eq)`, all inequality duals nonnegative; a lower-bound
//! dual pushes the stationarity up, an upper-bound dual down.

use super::report::{SolveReport, SolveStatus};
use super::SolveError;
use crate::market::QuadraticProgram;
use crate::numerics::{inf_norm, DenseMatrix, LinearSystemFactors};
use std::time::Instant;

const MAX_ITER: usize = 200;
const TOL: f64 = 1e-9;
const COMP_TOL: f64 = 5e-12;
const STEP_FRACTION: f64 = 0.99995;

/// Primal/dual solution of a QP in maximization convention.
#[derive(Debug, Clone)]
pub struct QpSolution {
    pub primal: Vec<f64>,
    pub eq_duals: Vec<f64>,
    pub in_duals: Vec<f64>,
    pub lower_duals: Vec<f64>,
    pub upper_duals: Vec<f64>,
    pub objective: f64,
    pub report: SolveReport,
}

/// Scaled KKT residual of a primal/dual pair for a maximization QP:
/// the max over stationarity, primal feasibility, dual feasibility, and
/// complementarity violations.
pub fn kkt_residual(qp: &QuadraticProgram, sol: &QpSolution) -> f64 {
    let n = qp.n();
    let x = &sol.primal;
    let obj_scale = 1.0 + inf_norm(&qp.linear);

    // stationarity: Qx + c - A_in' lambda - A_eq' nu + zeta - xi = 0
    let mut stat = qp.quad.matvec(x);
    for (si, ci) in stat.iter_mut().zip(&qp.linear) {
        *si += ci;
    }
    let at_l = qp.a_in.matvec_transpose(&sol.in_duals);
    let at_n = qp.a_eq.matvec_transpose(&sol.eq_duals);
    let mut worst = 0.0f64;
    for i in 0..n {
        let r = stat[i] - at_l[i] - at_n[i] + sol.lower_duals[i] - sol.upper_duals[i];
        worst = worst.max(r.abs() / obj_scale);
    }

    // primal feasibility
    let b_scale = 1.0 + inf_norm(&qp.b_eq);
    for (ax, b) in qp.a_eq.matvec(x).iter().zip(&qp.b_eq) {
        worst = worst.max((ax - b).abs() / b_scale);
    }
    let h_scale = 1.0 + inf_norm(&qp.b_in);
    let slack: Vec<f64> = qp
        .a_in
        .matvec(x)
        .iter()
        .zip(&qp.b_in)
        .map(|(ax, h)| h - ax)
        .collect();
    for (r, sl) in slack.iter().enumerate() {
        worst = worst.max((-sl).max(0.0) / h_scale);
        // dual feasibility and complementarity
        let lam = sol.in_duals[r];
        worst = worst.max((-lam).max(0.0));
        worst = worst.max((lam * sl).abs() / (1.0 + lam.abs() + sl.abs()));
    }
    for i in 0..n {
        if qp.lower[i].is_finite() {
            let gap = x[i] - qp.lower[i];
            worst = worst.max((-gap).max(0.0) / (1.0 + qp.lower[i].abs()));
            let zl = sol.lower_duals[i];
            worst = worst.max((-zl).max(0.0));
            if qp.lower[i] < qp.upper[i] {
                worst = worst.max((zl * gap).abs() / (1.0 + zl.abs() + gap.abs()));
            }
        }
        if qp.upper[i].is_finite() {
            let gap = qp.upper[i] - x[i];
            worst = worst.max((-gap).max(0.0) / (1.0 + qp.upper[i].abs()));
            let zu = sol.upper_duals[i];
            worst = worst.max((-zu).max(0.0));
            if qp.lower[i] < qp.upper[i] {
                worst = worst.max((zu * gap).abs() / (1.0 + zu.abs() + gap.abs()));
            }
        }
    }
    worst
}

struct Reduced {
    /// positions of the kept (non-fixed) variables in the original order
    keep: Vec<usize>,
    /// fixed values by original index (None when kept)
    fixed: Vec<Option<f64>>,
    p: DenseMatrix,
    g: Vec<f64>,
    a: DenseMatrix,
    b: Vec<f64>,
    c: DenseMatrix,
    h: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    /// original indices of the kept equality / inequality rows
    kept_eq: Vec<usize>,
    kept_in: Vec<usize>,
}

/// Substitute variables with equal bounds out of the problem and drop
/// rows whose coefficients all vanish afterwards (they arise from pinned
/// zero-capacity blocks and would leave the feasible set without strict
/// interior).
fn presolve(qp: &QuadraticProgram) -> Result<Reduced, SolveError> {
    let n = qp.n();
    let mut keep = Vec::with_capacity(n);
    let mut fixed = vec![None; n];
    for i in 0..n {
        if qp.lower[i] == qp.upper[i] {
            fixed[i] = Some(qp.lower[i]);
        } else {
            keep.push(i);
        }
    }
    let nr = keep.len();
    let mut p = DenseMatrix::zeros(nr, nr);
    let mut g = Vec::with_capacity(nr);
    // min form: P = -Q, g = -c, with fixed columns folded into g
    for (ri, &i) in keep.iter().enumerate() {
        for (rj, &j) in keep.iter().enumerate() {
            p.set(ri, rj, -qp.quad.get(i, j));
        }
        let mut gi = -qp.linear[i];
        for (j, fx) in fixed.iter().enumerate() {
            if let Some(v) = fx {
                gi += -qp.quad.get(i, j) * v;
            }
        }
        g.push(gi);
    }
    // fold fixed values into the rhs and keep only rows that still have
    // coefficients; `is_eq` decides how a degenerate row must be satisfied
    let fold = |mat: &DenseMatrix,
                rhs: &[f64],
                is_eq: bool|
     -> Result<(DenseMatrix, Vec<f64>, Vec<usize>), SolveError> {
        let m = mat.rows();
        let mut rows = Vec::new();
        let mut folded = Vec::with_capacity(m);
        for r in 0..m {
            let mut rhs_r = rhs[r];
            for (j, fx) in fixed.iter().enumerate() {
                if let Some(v) = fx {
                    rhs_r -= mat.get(r, j) * v;
                }
            }
            let alive = keep.iter().any(|&i| mat.get(r, i) != 0.0);
            if alive {
                rows.push(r);
                folded.push(rhs_r);
            } else {
                let violated = if is_eq {
                    rhs_r.abs() > 1e-9
                } else {
                    rhs_r < -1e-9
                };
                if violated {
                    return Err(SolveError::Unsolved {
                        status: SolveStatus::NumericalFailure,
                        message: format!("row {r} is trivially infeasible after presolve"),
                    });
                }
            }
        }
        let mut out = DenseMatrix::zeros(rows.len(), nr);
        for (rr, &r) in rows.iter().enumerate() {
            for (ci, &i) in keep.iter().enumerate() {
                out.set(rr, ci, mat.get(r, i));
            }
        }
        Ok((out, folded, rows))
    };
    let (a, b, kept_eq) = fold(&qp.a_eq, &qp.b_eq, true)?;
    let (c, h, kept_in) = fold(&qp.a_in, &qp.b_in, false)?;
    Ok(Reduced {
        lower: keep.iter().map(|&i| qp.lower[i]).collect(),
        upper: keep.iter().map(|&i| qp.upper[i]).collect(),
        keep,
        fixed,
        p,
        g,
        a,
        b,
        c,
        h,
        kept_eq,
        kept_in,
    })
}

/// Sparse row view used to build C'WC cheaply.
fn row_nonzeros(mat: &DenseMatrix) -> Vec<Vec<(usize, f64)>> {
    (0..mat.rows())
        .map(|r| {
            mat.row(r)
                .iter()
                .enumerate()
                .filter(|(_, v)| **v != 0.0)
                .map(|(j, v)| (j, *v))
                .collect()
        })
        .collect()
}

/// Solve a concave QP (maximization). Soft failures come back as a
/// non-optimal status in the report rather than an error.
pub fn solve_qp(qp: &QuadraticProgram) -> Result<QpSolution, SolveError> {
    qp.validate().map_err(SolveError::Model)?;
    let start = Instant::now();
    let red = presolve(qp)?;
    let nr = red.keep.len();
    let me = red.b.len();
    let mi = red.h.len();

    let fin_lo: Vec<usize> = (0..nr).filter(|&i| red.lower[i].is_finite()).collect();
    let fin_up: Vec<usize> = (0..nr).filter(|&i| red.upper[i].is_finite()).collect();
    let pairs = mi + fin_lo.len() + fin_up.len();

    let c_rows = row_nonzeros(&red.c);
    let a_rows = row_nonzeros(&red.a);

    // starting point strictly inside the bounds
    let mut x = vec![0.0; nr];
    for i in 0..nr {
        let (l, u) = (red.lower[i], red.upper[i]);
        x[i] = match (l.is_finite(), u.is_finite()) {
            (true, true) => 0.5 * (l + u),
            (true, false) => l + 1.0,
            (false, true) => u - 1.0,
            (false, false) => 0.0,
        };
    }
    let mut y = vec![0.0; me];
    let scale0 = (1.0 + inf_norm(&red.g).max(inf_norm(&red.h)).max(inf_norm(&red.b))).sqrt();
    let cx0 = red.c.matvec(&x);
    let mut s: Vec<f64> = (0..mi).map(|r| (red.h[r] - cx0[r]).max(scale0)).collect();
    let mut z = vec![scale0; mi];
    let mut pl: Vec<f64> = fin_lo.iter().map(|&i| x[i] - red.lower[i]).collect();
    let mut zl = vec![scale0; fin_lo.len()];
    let mut qu: Vec<f64> = fin_up.iter().map(|&i| red.upper[i] - x[i]).collect();
    let mut zu = vec![scale0; fin_up.len()];

    let mut status = SolveStatus::IterationLimit;
    let mut iterations = 0usize;
    let mut tiny_steps = 0usize;
    let mut best_merit = f64::INFINITY;
    let mut stalled = 0usize;
    // best iterate seen, restored on exit: late steps at the numerical
    // floor can destroy an already-converged point
    let mut snapshot: Option<(Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>)> = None;

    if pairs == 0 {
        // equality-constrained (or unconstrained) QP: one KKT solve
        let nk = nr + me;
        let mut kkt = DenseMatrix::zeros(nk, nk);
        for i in 0..nr {
            for j in 0..nr {
                kkt.set(i, j, red.p.get(i, j));
            }
        }
        for r in 0..me {
            for &(j, v) in &a_rows[r] {
                kkt.set(nr + r, j, v);
                kkt.set(j, nr + r, v);
            }
        }
        let mut rhs = vec![0.0; nk];
        for i in 0..nr {
            rhs[i] = -red.g[i];
        }
        for r in 0..me {
            rhs[nr + r] = red.b[r];
        }
        match LinearSystemFactors::factor_with_pivot_floor(&kkt, 1e-250) {
            Ok(f) => {
                let sol = f.solve(&rhs);
                x.copy_from_slice(&sol[..nr]);
                y.copy_from_slice(&sol[nr..]);
                status = SolveStatus::Optimal;
                iterations = 1;
            }
            Err(_) => status = SolveStatus::NumericalFailure,
        }
    } else {
        for iter in 0..MAX_ITER {
            iterations = iter + 1;
            // residuals (minimization form)
            let px = red.p.matvec(&x);
            let mut r_d: Vec<f64> = (0..nr).map(|i| px[i] + red.g[i]).collect();
            for r in 0..me {
                for &(j, v) in &a_rows[r] {
                    r_d[j] += v * y[r];
                }
            }
            for r in 0..mi {
                for &(j, v) in &c_rows[r] {
                    r_d[j] += v * z[r];
                }
            }
            for (t, &i) in fin_lo.iter().enumerate() {
                r_d[i] -= zl[t];
            }
            for (t, &i) in fin_up.iter().enumerate() {
                r_d[i] += zu[t];
            }
            let ax = red.a.matvec(&x);
            let r_b: Vec<f64> = (0..me).map(|r| ax[r] - red.b[r]).collect();
            let cx = red.c.matvec(&x);
            let r_c: Vec<f64> = (0..mi).map(|r| cx[r] + s[r] - red.h[r]).collect();

            let gap = crate::numerics::dot(&s, &z)
                + crate::numerics::dot(&pl, &zl)
                + crate::numerics::dot(&qu, &zu);
            let mu = gap / pairs as f64;

            // worst pairwise complementarity, scaled the same way the
            // final KKT gate scales it
            let mut comp_worst = 0.0f64;
            for r in 0..mi {
                comp_worst = comp_worst.max(s[r] * z[r] / (1.0 + s[r] + z[r]));
            }
            for t in 0..pl.len() {
                comp_worst = comp_worst.max(pl[t] * zl[t] / (1.0 + pl[t] + zl[t]));
            }
            for t in 0..qu.len() {
                comp_worst = comp_worst.max(qu[t] * zu[t] / (1.0 + qu[t] + zu[t]));
            }
            let rel_d = inf_norm(&r_d) / (1.0 + inf_norm(&red.g));
            let rel_b = inf_norm(&r_b) / (1.0 + inf_norm(&red.b));
            let rel_c = inf_norm(&r_c) / (1.0 + inf_norm(&red.h));
            let merit = rel_d.max(rel_b).max(rel_c).max(comp_worst);
            if std::env::var_os("COMEQ_IPM_TRACE").is_some() {
                eprintln!(
                    "ipm iter {iter}: rel_d {rel_d:.2e} rel_b {rel_b:.2e} rel_c {rel_c:.2e} comp {comp_worst:.2e} mu {mu:.2e}"
                );
            }
            if merit < best_merit {
                best_merit = merit;
                snapshot = Some((x.clone(), y.clone(), z.clone(), zl.clone(), zu.clone()));
                stalled = 0;
            } else {
                stalled += 1;
                // over the numerical cliff or simply stalled: stop grinding
                if stalled >= 12 || (best_merit < 1e-8 && merit > 1e4 * best_merit) {
                    break;
                }
            }
            if rel_d <= TOL && rel_b <= TOL && rel_c <= TOL && comp_worst <= COMP_TOL {
                status = SolveStatus::Optimal;
                break;
            }
            if inf_norm(&x) > 1e14 || !mu.is_finite() {
                status = SolveStatus::NumericalFailure;
                break;
            }

            // assemble the augmented system
            let nk = nr + me;
            let mut kkt = DenseMatrix::zeros(nk, nk);
            for i in 0..nr {
                for j in 0..nr {
                    let v = red.p.get(i, j);
                    if v != 0.0 {
                        kkt.set(i, j, v);
                    }
                }
            }
            let w: Vec<f64> = (0..mi).map(|r| z[r] / s[r]).collect();
            for r in 0..mi {
                let wr = w[r];
                for &(j1, v1) in &c_rows[r] {
                    for &(j2, v2) in &c_rows[r] {
                        kkt.add_to(j1, j2, wr * v1 * v2);
                    }
                }
            }
            for (t, &i) in fin_lo.iter().enumerate() {
                kkt.add_to(i, i, zl[t] / pl[t]);
            }
            for (t, &i) in fin_up.iter().enumerate() {
                kkt.add_to(i, i, zu[t] / qu[t]);
            }
            for r in 0..me {
                for &(j, v) in &a_rows[r] {
                    kkt.set(nr + r, j, v);
                    kkt.set(j, nr + r, v);
                }
            }
            let factors = match LinearSystemFactors::factor_with_pivot_floor(&kkt, 1e-250) {
                Ok(f) => f,
                Err(_) => {
                    status = SolveStatus::NumericalFailure;
                    break;
                }
            };

            // one Newton solve for a given complementarity target
            let kkt_ref = &kkt;
            let solve_dir = |factors: &LinearSystemFactors,
                             rs_sz: &[f64],
                             rs_pl: &[f64],
                             rs_qu: &[f64]|
             -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>) {
                let mut rhs = vec![0.0; nr + me];
                for i in 0..nr {
                    rhs[i] = -r_d[i];
                }
                for r in 0..mi {
                    let t = rs_sz[r] / s[r] + w[r] * r_c[r];
                    for &(j, v) in &c_rows[r] {
                        rhs[j] -= v * t;
                    }
                }
                for (t, &i) in fin_lo.iter().enumerate() {
                    rhs[i] += rs_pl[t] / pl[t];
                }
                for (t, &i) in fin_up.iter().enumerate() {
                    rhs[i] -= rs_qu[t] / qu[t];
                }
                for r in 0..me {
                    rhs[nr + r] = -r_b[r];
                }
                let mut sol = factors.solve(&rhs);
                // one refinement pass keeps late iterations accurate as the
                // scaling matrix spreads over many orders of magnitude
                let mut resid = rhs.clone();
                for (i, row) in (0..nr + me).map(|i| (i, kkt_ref.row(i))) {
                    let mut acc = 0.0;
                    for (a, b) in row.iter().zip(&sol) {
                        acc += a * b;
                    }
                    resid[i] -= acc;
                }
                let corr = factors.solve(&resid);
                for (si, ci) in sol.iter_mut().zip(&corr) {
                    *si += ci;
                }
                let dx = sol[..nr].to_vec();
                let dy = sol[nr..].to_vec();
                let cdx = red.c.matvec(&dx);
                let ds: Vec<f64> = (0..mi).map(|r| -r_c[r] - cdx[r]).collect();
                let dz: Vec<f64> = (0..mi)
                    .map(|r| (rs_sz[r] - z[r] * ds[r]) / s[r])
                    .collect();
                let dpl: Vec<f64> = fin_lo.iter().map(|&i| dx[i]).collect();
                let dzl: Vec<f64> = (0..fin_lo.len())
                    .map(|t| (rs_pl[t] - zl[t] * dpl[t]) / pl[t])
                    .collect();
                let dqu: Vec<f64> = fin_up.iter().map(|&i| -dx[i]).collect();
                let dzu: Vec<f64> = (0..fin_up.len())
                    .map(|t| (rs_qu[t] - zu[t] * dqu[t]) / qu[t])
                    .collect();
                (dx, dy, ds, dz, dzl, dqu, dzu)
            };

            // affine predictor
            let rs_sz_aff: Vec<f64> = (0..mi).map(|r| -s[r] * z[r]).collect();
            let rs_pl_aff: Vec<f64> = (0..pl.len()).map(|t| -pl[t] * zl[t]).collect();
            let rs_qu_aff: Vec<f64> = (0..qu.len()).map(|t| -qu[t] * zu[t]).collect();
            let (dx_a, _dy_a, ds_a, dz_a, dzl_a, dqu_a, dzu_a) =
                solve_dir(&factors, &rs_sz_aff, &rs_pl_aff, &rs_qu_aff);
            let dpl_a: Vec<f64> = fin_lo.iter().map(|&i| dx_a[i]).collect();

            let step = |cur: &[f64], dir: &[f64]| -> f64 {
                let mut a = 1.0f64;
                for (c, d) in cur.iter().zip(dir) {
                    if *d < 0.0 {
                        a = a.min(-c / d);
                    }
                }
                a
            };
            let ap_aff = step(&s, &ds_a).min(step(&pl, &dpl_a)).min(step(&qu, &dqu_a));
            let ad_aff = step(&z, &dz_a).min(step(&zl, &dzl_a)).min(step(&zu, &dzu_a));
            let mut gap_aff = 0.0;
            for r in 0..mi {
                gap_aff += (s[r] + ap_aff * ds_a[r]) * (z[r] + ad_aff * dz_a[r]);
            }
            for t in 0..pl.len() {
                gap_aff += (pl[t] + ap_aff * dpl_a[t]) * (zl[t] + ad_aff * dzl_a[t]);
            }
            for t in 0..qu.len() {
                gap_aff += (qu[t] + ap_aff * dqu_a[t]) * (zu[t] + ad_aff * dzu_a[t]);
            }
            let mu_aff = gap_aff / pairs as f64;
            let sigma = (mu_aff / mu).powi(3).clamp(0.0, 1.0);

            // corrector
            let rs_sz: Vec<f64> = (0..mi)
                .map(|r| -s[r] * z[r] + sigma * mu - ds_a[r] * dz_a[r])
                .collect();
            let rs_pl: Vec<f64> = (0..pl.len())
                .map(|t| -pl[t] * zl[t] + sigma * mu - dpl_a[t] * dzl_a[t])
                .collect();
            let rs_qu: Vec<f64> = (0..qu.len())
                .map(|t| -qu[t] * zu[t] + sigma * mu - dqu_a[t] * dzu_a[t])
                .collect();
            let (dx, dy, ds, dz, dzl, dqu_d, dzu) = solve_dir(&factors, &rs_sz, &rs_pl, &rs_qu);
            let dpl: Vec<f64> = fin_lo.iter().map(|&i| dx[i]).collect();

            let ap = (STEP_FRACTION
                * step(&s, &ds).min(step(&pl, &dpl)).min(step(&qu, &dqu_d)))
            .min(1.0);
            let ad = (STEP_FRACTION
                * step(&z, &dz).min(step(&zl, &dzl)).min(step(&zu, &dzu)))
            .min(1.0);

            for i in 0..nr {
                x[i] += ap * dx[i];
            }
            for r in 0..me {
                y[r] += ad * dy[r];
            }
            for r in 0..mi {
                s[r] += ap * ds[r];
                z[r] += ad * dz[r];
            }
            for t in 0..pl.len() {
                pl[t] += ap * dpl[t];
                zl[t] += ad * dzl[t];
            }
            for t in 0..qu.len() {
                qu[t] += ap * dqu_d[t];
                zu[t] += ad * dzu[t];
            }

            if ap.min(ad) < 1e-10 {
                tiny_steps += 1;
                if tiny_steps >= 5 {
                    status = SolveStatus::NumericalFailure;
                    break;
                }
            } else {
                tiny_steps = 0;
            }
        }
    }

    if let Some((bx, by, bz, bzl, bzu)) = snapshot {
        x = bx;
        y = by;
        z = bz;
        zl = bzl;
        zu = bzu;
    }
    // postsolve: expand to the full variable set and attach duals
    let full_x = expand(&red, &x);
    let n = qp.n();
    let mut lower_duals = vec![0.0; n];
    let mut upper_duals = vec![0.0; n];
    for (t, &i) in fin_lo.iter().enumerate() {
        lower_duals[red.keep[i]] = zl[t];
    }
    for (t, &i) in fin_up.iter().enumerate() {
        upper_duals[red.keep[i]] = zu[t];
    }
    let mut in_duals = vec![0.0; qp.n_in()];
    for (rr, &r) in red.kept_in.iter().enumerate() {
        in_duals[r] = z[rr];
    }
    let mut eq_duals = vec![0.0; qp.n_eq()];
    for (rr, &r) in red.kept_eq.iter().enumerate() {
        eq_duals[r] = y[rr];
    }
    // reduced gradients of fixed variables become their bound duals
    let stat_fix = {
        let mut v = qp.quad.matvec(&full_x);
        for (vi, ci) in v.iter_mut().zip(&qp.linear) {
            *vi += ci;
        }
        let at_l = qp.a_in.matvec_transpose(&in_duals);
        let at_n = qp.a_eq.matvec_transpose(&eq_duals);
        for i in 0..n {
            v[i] -= at_l[i] + at_n[i];
        }
        v
    };
    for (i, fx) in red.fixed.iter().enumerate() {
        if fx.is_some() {
            // stationarity: stat + zeta - xi = 0
            lower_duals[i] = (-stat_fix[i]).max(0.0);
            upper_duals[i] = stat_fix[i].max(0.0);
        }
    }

    let objective = qp.objective_value(&full_x);
    let mut sol = QpSolution {
        primal: full_x,
        eq_duals,
        in_duals,
        lower_duals,
        upper_duals,
        objective,
        report: SolveReport::new(status, iterations, f64::NAN, 0.0),
    };
    let residual = kkt_residual(qp, &sol);
    let status = if residual <= 1e-8 && status != SolveStatus::NumericalFailure {
        SolveStatus::Optimal
    } else if status == SolveStatus::Optimal {
        SolveStatus::NumericalFailure
    } else {
        status
    };
    sol.report = SolveReport::new(
        status,
        iterations,
        residual,
        start.elapsed().as_secs_f64() * 1e3,
    );
    Ok(sol)
}

fn expand(red: &Reduced, x: &[f64]) -> Vec<f64> {
    let mut full = vec![0.0; red.fixed.len()];
    for (i, fx) in red.fixed.iter().enumerate() {
        if let Some(v) = fx {
            full[i] = *v;
        }
    }
    for (ri, &i) in red.keep.iter().enumerate() {
        full[i] = x[ri];
    }
    full
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simple_qp(
        quad: DenseMatrix,
        linear: Vec<f64>,
        a_eq: DenseMatrix,
        b_eq: Vec<f64>,
        a_in: DenseMatrix,
        b_in: Vec<f64>,
        lower: Vec<f64>,
        upper: Vec<f64>,
    ) -> QuadraticProgram {
        let n = linear.len();
        QuadraticProgram {
            var_names: (0..n).map(|i| format!("x{i}")).collect(),
            eq_names: (0..b_eq.len()).map(|i| format!("eq{i}")).collect(),
            in_names: (0..b_in.len()).map(|i| format!("in{i}")).collect(),
            quad,
            linear,
            a_eq,
            b_eq,
            a_in,
            b_in,
            lower,
            upper,
        }
    }

    #[test]
    fn clipped_scalar_maximum() {
        // max -x^2/2 + x on [0, 0.5]: optimum at the bound with dual 0.5
        let qp = simple_qp(
            DenseMatrix::from_rows(&[&[-1.0]]).unwrap(),
            vec![1.0],
            DenseMatrix::zeros(0, 1),
            vec![],
            DenseMatrix::zeros(0, 1),
            vec![],
            vec![0.0],
            vec![0.5],
        );
        let sol = solve_qp(&qp).unwrap();
        assert!(sol.report.status.is_optimal(), "{:?}", sol.report);
        assert!((sol.primal[0] - 0.5).abs() < 1e-7);
        assert!((sol.upper_duals[0] - 0.5).abs() < 1e-6);
        assert!(sol.lower_duals[0].abs() < 1e-6);
    }

    #[test]
    fn symmetric_equality_qp() {
        // max -(x^2+y^2)/2 s.t. x + y = 2 => x = y = 1, equality dual -1
        let qp = simple_qp(
            DenseMatrix::from_rows(&[&[-1.0, 0.0], &[0.0, -1.0]]).unwrap(),
            vec![0.0, 0.0],
            DenseMatrix::from_rows(&[&[1.0, 1.0]]).unwrap(),
            vec![2.0],
            DenseMatrix::zeros(0, 2),
            vec![],
            vec![f64::NEG_INFINITY; 2],
            vec![f64::INFINITY; 2],
        );
        let sol = solve_qp(&qp).unwrap();
        assert!(sol.report.status.is_optimal());
        assert!((sol.primal[0] - 1.0).abs() < 1e-8);
        assert!((sol.primal[1] - 1.0).abs() < 1e-8);
        assert!((sol.eq_duals[0] + 1.0).abs() < 1e-8);
        assert!(kkt_residual(&qp, &sol) < 1e-8);
    }

    #[test]
    fn inequality_and_bound_mix() {
        // max -x'x/2 + [1,2]x  s.t. x0 + x1 <= 1, x >= 0
        let qp = simple_qp(
            DenseMatrix::from_rows(&[&[-1.0, 0.0], &[0.0, -1.0]]).unwrap(),
            vec![1.0, 2.0],
            DenseMatrix::zeros(0, 2),
            vec![],
            DenseMatrix::from_rows(&[&[1.0, 1.0]]).unwrap(),
            vec![1.0],
            vec![0.0, 0.0],
            vec![f64::INFINITY; 2],
        );
        let sol = solve_qp(&qp).unwrap();
        assert!(sol.report.status.is_optimal());
        // KKT: x0 = 1 - lambda (or 0), x1 = 2 - lambda, x0 + x1 = 1
        // interior in x1, x0 = 0 boundary? try x0 = 0: lambda = 1 from x1 = 1
        // then stat x0: 1 - lambda + zeta = 0 => zeta = 0, degenerate-free:
        // actually x0 + x1 = 1 with x0 = 0, x1 = 1, lambda = 1, zeta = 0.
        assert!(sol.primal[0].abs() < 1e-5);
        assert!((sol.primal[1] - 1.0).abs() < 1e-5);
        assert!((sol.in_duals[0] - 1.0).abs() < 1e-5);
    }

    #[test]
    fn fixed_variables_are_substituted() {
        // second variable pinned to zero
        let qp = simple_qp(
            DenseMatrix::from_rows(&[&[-1.0, 0.0], &[0.0, 0.0]]).unwrap(),
            vec![1.0, 5.0],
            DenseMatrix::zeros(0, 2),
            vec![],
            DenseMatrix::zeros(0, 2),
            vec![],
            vec![0.0, 0.0],
            vec![f64::INFINITY, 0.0],
        );
        let sol = solve_qp(&qp).unwrap();
        assert!(sol.report.status.is_optimal());
        assert!((sol.primal[0] - 1.0).abs() < 1e-7);
        assert_eq!(sol.primal[1], 0.0);
        // the pinned variable's attractive gradient shows up as an upper dual
        assert!((sol.upper_duals[1] - 5.0).abs() < 1e-8);
    }
}

