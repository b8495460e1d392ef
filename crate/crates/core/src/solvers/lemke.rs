//! Lemke complementary pivoting for box-constrained linear
//! complementarity problems.
//!
//! A mixed problem (finite lower/upper bounds, free variables) is first
//! reduced to the standard form `w = M z + q, w >= 0, z >= 0, w'z = 0`:
//! fixed variables are substituted out, lower bounds shifted, upper-only
//! variables mirrored, two-sided variables paired with an excess
//! multiplier, and free variables split into positive and negative parts.
//!
//! The pivoting itself is the classic scheme with an all-ones covering
//! vector and lexicographic ratio tests for cycling protection. When the
//! path terminates, the solution is recomputed from the final basis with a
//! fresh LU factorization of the original data, so hundreds of pivots do
//! not erode the reported values. A basis can be carried between calls:
//! re-solving a problem whose `q` (or mildly whose `M`) changed often
//! succeeds with a single factorization and no pivoting at all.

use super::report::{SolveReport, SolveStatus};
use crate::market::ComplementarityProblem;
use crate::numerics::{DenseMatrix, LinearSystemFactors};
use std::time::Instant;

const RESIDUAL_TOL: f64 = 1e-8;

/// Complementary basis over the reduced standard-form variables:
/// `true` marks the z-variable of a pair as basic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplementBasis {
    z_basic: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum VarClass {
    Fixed(f64),
    LowerOnly(f64),
    UpperOnly(f64),
    TwoSided(f64, f64),
    Free,
}

/// Standard-form reduction of a box MCP.
struct Standard {
    m: DenseMatrix,
    q: Vec<f64>,
    /// kept original indices (non-fixed), in reduced order
    keep: Vec<usize>,
    class: Vec<VarClass>,
    /// reduced index of the negative part of each free variable
    neg_part: Vec<(usize, usize)>,
    n_orig: usize,
}

fn classify(lower: f64, upper: f64) -> VarClass {
    match (lower.is_finite(), upper.is_finite()) {
        (true, true) if lower == upper => VarClass::Fixed(lower),
        (true, true) => VarClass::TwoSided(lower, upper),
        (true, false) => VarClass::LowerOnly(lower),
        (false, true) => VarClass::UpperOnly(upper),
        (false, false) => VarClass::Free,
    }
}

fn reduce(cp: &ComplementarityProblem) -> Standard {
    let n = cp.n();
    let class: Vec<VarClass> = (0..n).map(|i| classify(cp.lower[i], cp.upper[i])).collect();
    let keep: Vec<usize> = (0..n)
        .filter(|&i| !matches!(class[i], VarClass::Fixed(_)))
        .collect();
    let n1 = keep.len();
    // reduced index lookup
    let mut pos = vec![usize::MAX; n];
    for (r, &i) in keep.iter().enumerate() {
        pos[i] = r;
    }
    // shift and sign per original variable
    let shift: Vec<f64> = (0..n)
        .map(|i| match class[i] {
            VarClass::Fixed(v) => v,
            VarClass::LowerOnly(l) | VarClass::TwoSided(l, _) => l,
            VarClass::UpperOnly(u) => u,
            VarClass::Free => 0.0,
        })
        .collect();
    let sign: Vec<f64> = (0..n)
        .map(|i| match class[i] {
            VarClass::UpperOnly(_) => -1.0,
            _ => 1.0,
        })
        .collect();

    let free_list: Vec<usize> = keep
        .iter()
        .copied()
        .filter(|&i| matches!(class[i], VarClass::Free))
        .collect();
    let two_list: Vec<usize> = keep
        .iter()
        .copied()
        .filter(|&i| matches!(class[i], VarClass::TwoSided(_, _)))
        .collect();
    let total = n1 + free_list.len() + two_list.len();

    let mut m = DenseMatrix::zeros(total, total);
    let mut q = vec![0.0; total];

    // base block: rows and columns for the kept variables
    for (ri, &i) in keep.iter().enumerate() {
        let mut qi = cp.q[i];
        for j in 0..n {
            qi += cp.m.get(i, j) * shift[j];
        }
        q[ri] = sign[i] * qi;
        for (rj, &j) in keep.iter().enumerate() {
            let v = sign[i] * cp.m.get(i, j) * sign[j];
            if v != 0.0 {
                m.set(ri, rj, v);
            }
        }
    }
    // free splits: extra column (negative part) and negated row
    let mut neg_part = Vec::with_capacity(free_list.len());
    for (t, &f) in free_list.iter().enumerate() {
        let col = n1 + t;
        let row = n1 + t;
        let rf = pos[f];
        for rj in 0..n1 {
            let v = m.get(rf, rj);
            if v != 0.0 {
                m.set(row, rj, -v);
            }
        }
        q[row] = -q[rf];
        neg_part.push((f, col));
    }
    // columns of the negative parts (including within the split rows)
    for &(f, col) in &neg_part {
        let rf = pos[f];
        for row in 0..n1 + free_list.len() {
            let v = m.get(row, rf);
            if v != 0.0 {
                m.set(row, col, -v);
            }
        }
        let _ = rf;
    }
    // two-sided: excess multiplier column + range row
    for (t, &i) in two_list.iter().enumerate() {
        let idx = n1 + free_list.len() + t;
        let ri = pos[i];
        m.set(ri, idx, 1.0);
        m.set(idx, ri, -1.0);
        if let VarClass::TwoSided(l, u) = class[i] {
            q[idx] = u - l;
        }
    }

    Standard {
        m,
        q,
        keep,
        class,
        neg_part,
        n_orig: n,
    }
}

impl Standard {
    /// Map a standard-form point back to the original variables.
    fn restore(&self, zs: &[f64]) -> Vec<f64> {
        let mut z = vec![0.0; self.n_orig];
        for (r, &i) in self.keep.iter().enumerate() {
            z[i] = match self.class[i] {
                VarClass::LowerOnly(l) | VarClass::TwoSided(l, _) => l + zs[r],
                VarClass::UpperOnly(u) => u - zs[r],
                VarClass::Free => zs[r],
                VarClass::Fixed(v) => v,
            };
        }
        for &(f, col) in &self.neg_part {
            z[f] -= zs[col];
        }
        for (i, c) in (0..self.n_orig).zip(&self.class) {
            if let VarClass::Fixed(v) = c {
                z[i] = *v;
            }
        }
        z
    }
}

/// Solve the values of a complementary basis directly from the original
/// standard-form data. Returns the standard-form point when the basis is
/// feasible (all basic values nonnegative within tolerance).
fn basis_values(std_form: &Standard, basis: &ComplementBasis) -> Option<Vec<f64>> {
    let n = std_form.q.len();
    if basis.z_basic.len() != n {
        return None;
    }
    // columns: e_i for basic w_i, -M[:,i] for basic z_i
    let mut mat = DenseMatrix::zeros(n, n);
    for (col, &zb) in basis.z_basic.iter().enumerate() {
        if zb {
            for row in 0..n {
                let v = -std_form.m.get(row, col);
                if v != 0.0 {
                    mat.set(row, col, v);
                }
            }
        } else {
            mat.set(col, col, 1.0);
        }
    }
    let f = LinearSystemFactors::factor_with_pivot_floor(&mat, 1e-250).ok()?;
    let u = f.solve(&std_form.q);
    // feasibility of the basis
    let scale = 1.0 + std_form.q.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if u.iter().any(|v| *v < -1e-9 * scale) {
        return None;
    }
    let mut zs = vec![0.0; n];
    for (i, &zb) in basis.z_basic.iter().enumerate() {
        if zb {
            zs[i] = u[i].max(0.0);
        }
    }
    Some(zs)
}

struct Tableau {
    /// n rows; columns: [w block (n) | z block (n) | z0 | q]
    t: Vec<Vec<f64>>,
    basis: Vec<usize>, // w_i = i, z_i = n + i, z0 = 2n
    n: usize,
}

impl Tableau {
    fn new(m: &DenseMatrix, q: &[f64]) -> Self {
        let n = q.len();
        let mut t = vec![vec![0.0; 2 * n + 2]; n];
        for i in 0..n {
            t[i][i] = 1.0;
            for j in 0..n {
                t[i][n + j] = -m.get(i, j);
            }
            t[i][2 * n] = -1.0; // covering vector of ones
            t[i][2 * n + 1] = q[i];
        }
        Tableau {
            t,
            basis: (0..n).collect(),
            n,
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.t[row][col];
        let inv = 1.0 / piv;
        for v in self.t[row].iter_mut() {
            *v *= inv;
        }
        let prow = self.t[row].clone();
        for (i, r) in self.t.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let f = r[col];
            if f != 0.0 {
                for (rv, pv) in r.iter_mut().zip(&prow) {
                    *rv -= f * pv;
                }
            }
        }
    }

    /// Lexicographic minimum ratio test over rows with positive pivot
    /// column entries; prefers driving z0 out when it ties.
    fn ratio_test(&self, col: usize) -> Option<usize> {
        let n = self.n;
        let qcol = 2 * n + 1;
        let col_scale = self
            .t
            .iter()
            .map(|r| r[col].abs())
            .fold(0.0f64, f64::max)
            .max(1.0);
        let eps = 1e-11 * col_scale;
        let mut best: Option<usize> = None;
        for i in 0..n {
            let a = self.t[i][col];
            if a <= eps {
                continue;
            }
            match best {
                None => best = Some(i),
                Some(b) => {
                    let ab = self.t[b][col];
                    // compare (q, w-block)/pivot lexicographically
                    let mut better = false;
                    let mut tie = true;
                    let r_i = self.t[i][qcol] / a;
                    let r_b = self.t[b][qcol] / ab;
                    if (r_i - r_b).abs() > 1e-12 * (1.0 + r_i.abs().max(r_b.abs())) {
                        better = r_i < r_b;
                        tie = false;
                    }
                    if tie {
                        for k in 0..n {
                            let w_i = self.t[i][k] / a;
                            let w_b = self.t[b][k] / ab;
                            if (w_i - w_b).abs() > 1e-12 * (1.0 + w_i.abs().max(w_b.abs())) {
                                better = w_i < w_b;
                                tie = false;
                                break;
                            }
                        }
                    }
                    if tie {
                        // fully tied: prefer z0, then the smaller basis index
                        better = self.basis[i] == 2 * n
                            || (self.basis[b] != 2 * n && self.basis[i] < self.basis[b]);
                    }
                    if better {
                        best = Some(i);
                    }
                }
            }
        }
        // prefer z0 if it is eligible at (numerically) the same ratio
        if let Some(b) = best {
            if self.basis[b] != 2 * n {
                if let Some(z0_row) = (0..n).find(|&i| self.basis[i] == 2 * n) {
                    let a = self.t[z0_row][col];
                    if a > eps {
                        let r0 = self.t[z0_row][qcol] / a;
                        let rb = self.t[b][qcol] / self.t[b][col];
                        if r0 <= rb + 1e-9 * (1.0 + rb.abs()) {
                            return Some(z0_row);
                        }
                    }
                }
            }
        }
        best
    }
}

/// Outcome of a standard-form Lemke run.
struct PivotOutcome {
    zs: Vec<f64>,
    status: SolveStatus,
    iterations: usize,
    basis: ComplementBasis,
}

fn lemke_pivot(std_form: &Standard) -> PivotOutcome {
    let n = std_form.q.len();
    let scale = 1.0 + std_form.q.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if std_form.q.iter().all(|v| *v >= -1e-12 * scale) {
        // trivial solution z = 0
        return PivotOutcome {
            zs: vec![0.0; n],
            status: SolveStatus::Optimal,
            iterations: 0,
            basis: ComplementBasis {
                z_basic: vec![false; n],
            },
        };
    }
    let mut tab = Tableau::new(&std_form.m, &std_form.q);
    // z0 enters; the most negative q row leaves
    let mut leave_row = 0usize;
    let mut most_neg = f64::INFINITY;
    for i in 0..n {
        if std_form.q[i] < most_neg {
            most_neg = std_form.q[i];
            leave_row = i;
        }
    }
    let mut entering = 2 * n; // z0
    let max_pivots = 10 * n;
    let mut iterations = 0usize;
    loop {
        let leaving_var = tab.basis[leave_row];
        tab.pivot(leave_row, entering);
        tab.basis[leave_row] = entering;
        iterations += 1;
        if leaving_var == 2 * n {
            break; // z0 left: complementary solution reached
        }
        // complement of the leaving variable enters next
        entering = if leaving_var < n {
            n + leaving_var
        } else {
            leaving_var - n
        };
        match tab.ratio_test(entering) {
            Some(r) => leave_row = r,
            None => {
                let basis = basis_from_tableau(&tab, n);
                return PivotOutcome {
                    zs: read_tableau(&tab, n),
                    status: SolveStatus::RayTermination,
                    iterations,
                    basis,
                };
            }
        }
        if iterations >= max_pivots {
            let basis = basis_from_tableau(&tab, n);
            return PivotOutcome {
                zs: read_tableau(&tab, n),
                status: SolveStatus::IterationLimit,
                iterations,
                basis,
            };
        }
    }
    let basis = basis_from_tableau(&tab, n);
    // recompute the terminal values cleanly from the original data
    let zs = basis_values(std_form, &basis).unwrap_or_else(|| read_tableau(&tab, n));
    PivotOutcome {
        zs,
        status: SolveStatus::Optimal,
        iterations,
        basis,
    }
}

fn basis_from_tableau(tab: &Tableau, n: usize) -> ComplementBasis {
    let mut z_basic = vec![false; n];
    for &b in &tab.basis {
        if b >= n && b < 2 * n {
            z_basic[b - n] = true;
        }
    }
    ComplementBasis { z_basic }
}

fn read_tableau(tab: &Tableau, n: usize) -> Vec<f64> {
    let mut zs = vec![0.0; n];
    for (row, &b) in tab.basis.iter().enumerate() {
        if b >= n && b < 2 * n {
            zs[b - n] = tab.t[row][2 * n + 1].max(0.0);
        }
    }
    zs
}

/// Solve a box MCP by Lemke pivoting.
pub fn lemke(problem: &ComplementarityProblem) -> (Vec<f64>, SolveReport) {
    let (z, report, _) = lemke_with_basis(problem, None);
    (z, report)
}

/// Solve with an optional warm-start basis from a previous, structurally
/// identical problem. Returns the terminal basis for reuse.
pub fn lemke_with_basis(
    problem: &ComplementarityProblem,
    warm: Option<&ComplementBasis>,
) -> (Vec<f64>, SolveReport, ComplementBasis) {
    let start = Instant::now();
    let std_form = reduce(problem);
    if let Some(basis) = warm {
        if let Some(zs) = basis_values(&std_form, basis) {
            let z = std_form.restore(&zs);
            let residual = problem.residual(&z);
            if residual <= RESIDUAL_TOL {
                let report = SolveReport::new(
                    SolveStatus::Optimal,
                    0,
                    residual,
                    start.elapsed().as_secs_f64() * 1e3,
                );
                return (z, report, basis.clone());
            }
        }
    }
    let outcome = lemke_pivot(&std_form);
    let z = std_form.restore(&outcome.zs);
    let residual = problem.residual(&z);
    let status = match outcome.status {
        SolveStatus::Optimal if residual <= RESIDUAL_TOL => SolveStatus::Optimal,
        SolveStatus::Optimal => SolveStatus::NumericalFailure,
        other => other,
    };
    let report = SolveReport::new(
        status,
        outcome.iterations,
        residual,
        start.elapsed().as_secs_f64() * 1e3,
    );
    (z, report, outcome.basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plain_lcp(m: DenseMatrix, q: Vec<f64>) -> ComplementarityProblem {
        let n = q.len();
        ComplementarityProblem {
            m,
            q,
            lower: vec![0.0; n],
            upper: vec![f64::INFINITY; n],
            names: (0..n).map(|i| format!("z{i}")).collect(),
        }
    }

    #[test]
    fn identity_lcp() {
        let cp = plain_lcp(DenseMatrix::identity(2), vec![-1.0, -2.0]);
        let (z, report) = lemke(&cp);
        assert!(report.status.is_optimal(), "{report:?}");
        assert!((z[0] - 1.0).abs() < 1e-10);
        assert!((z[1] - 2.0).abs() < 1e-10);
    }

    #[test]
    fn two_by_two_pd() {
        let m = DenseMatrix::from_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        let cp = plain_lcp(m, vec![-5.0, -6.0]);
        let (z, report) = lemke(&cp);
        assert!(report.status.is_optimal());
        assert!((z[0] - 4.0 / 3.0).abs() < 1e-10, "z = {z:?}");
        assert!((z[1] - 7.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn nonnegative_q_is_trivial() {
        let m = DenseMatrix::from_rows(&[&[1.0, 0.5], &[0.5, 1.0]]).unwrap();
        let cp = plain_lcp(m, vec![0.5, 0.0]);
        let (z, report) = lemke(&cp);
        assert!(report.status.is_optimal());
        assert_eq!(report.iterations, 0);
        assert_eq!(z, vec![0.0, 0.0]);
    }

    #[test]
    fn free_variables_solve_linear_equations() {
        // free z with F(z) = Mz + q must end at F = 0
        let m = DenseMatrix::from_rows(&[&[2.0, 1.0], &[1.0, 3.0]]).unwrap();
        let cp = ComplementarityProblem {
            m,
            q: vec![-4.0, -7.0],
            lower: vec![f64::NEG_INFINITY; 2],
            upper: vec![f64::INFINITY; 2],
            names: vec!["a".into(), "b".into()],
        };
        let (z, report) = lemke(&cp);
        assert!(report.status.is_optimal(), "{report:?}");
        let f = cp.f_value(&z);
        assert!(f[0].abs() < 1e-9 && f[1].abs() < 1e-9, "F = {f:?}");
        // unique solution of the linear system: z = (1, 2)
        assert!((z[0] - 1.0).abs() < 1e-9);
        assert!((z[1] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn two_sided_bounds_clip() {
        // F(z) = z - 3 wants z = 3 but the box stops at 2: F(2) = -1 <= 0 ok
        let cp = ComplementarityProblem {
            m: DenseMatrix::identity(1),
            q: vec![-3.0],
            lower: vec![0.0],
            upper: vec![2.0],
            names: vec!["z".into()],
        };
        let (z, report) = lemke(&cp);
        assert!(report.status.is_optimal(), "{report:?}");
        assert!((z[0] - 2.0).abs() < 1e-10);
    }

    #[test]
    fn upper_only_variable() {
        // z <= 1 free below, F(z) = z: interior solution F = 0 at z = 0
        let cp = ComplementarityProblem {
            m: DenseMatrix::identity(1),
            q: vec![0.0],
            lower: vec![f64::NEG_INFINITY],
            upper: vec![1.0],
            names: vec!["z".into()],
        };
        let (z, report) = lemke(&cp);
        assert!(report.status.is_optimal());
        assert!(z[0].abs() < 1e-10);
    }

    #[test]
    fn fixed_variables_substituted() {
        // first variable fixed at 2 shifts the second's solution
        let m = DenseMatrix::from_rows(&[&[1.0, 0.0], &[1.0, 1.0]]).unwrap();
        let cp = ComplementarityProblem {
            m,
            q: vec![0.0, -5.0],
            lower: vec![2.0, 0.0],
            upper: vec![2.0, f64::INFINITY],
            names: vec!["fixed".into(), "z".into()],
        };
        let (z, report) = lemke(&cp);
        assert!(report.status.is_optimal());
        assert_eq!(z[0], 2.0);
        assert!((z[1] - 3.0).abs() < 1e-10);
    }

    #[test]
    fn warm_basis_skips_pivoting() {
        let m = DenseMatrix::from_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        let cp = plain_lcp(m.clone(), vec![-5.0, -6.0]);
        let (_, _, basis) = lemke_with_basis(&cp, None);
        // perturb q mildly: same basis stays optimal
        let cp2 = plain_lcp(m, vec![-5.2, -5.9]);
        let (z, report, _) = lemke_with_basis(&cp2, Some(&basis));
        assert!(report.status.is_optimal());
        assert_eq!(report.iterations, 0);
        assert!(cp2.residual(&z) <= 1e-8);
    }
}
