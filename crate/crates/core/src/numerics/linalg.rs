//! Dense linear algebra: row-major matrices and LU factorization with
//! partial pivoting. Everything here is plain `f64`; problem sizes in this
//! crate stay in the low hundreds, so no sparse or blocked paths.

use super::NumericsError;

/// Dense row-major matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    /// All-zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Identity matrix of order `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    /// Build from a row-major entry vector. Fails if the shape does not
    /// match or any entry is non-finite.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, NumericsError> {
        if data.len() != rows * cols {
            return Err(NumericsError::Shape(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                rows * cols,
                rows,
                cols,
                data.len()
            )));
        }
        if let Some(idx) = data.iter().position(|v| !v.is_finite()) {
            return Err(NumericsError::Shape(format!(
                "non-finite entry at flat index {idx}"
            )));
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    /// Build from row slices (each row must have the same length).
    pub fn from_rows(rows: &[&[f64]]) -> Result<Self, NumericsError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(NumericsError::Shape("ragged rows".into()));
            }
            data.extend_from_slice(row);
        }
        Self::from_vec(r, c, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i < self.rows && j < self.cols);
        debug_assert!(v.is_finite());
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] += v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// y = A x.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        let mut y = vec![0.0; self.rows];
        for i in 0..self.rows {
            let row = self.row(i);
            let mut acc = 0.0;
            for (a, b) in row.iter().zip(x) {
                acc += a * b;
            }
            y[i] = acc;
        }
        y
    }

    /// y = A' x.
    pub fn matvec_transpose(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.rows);
        let mut y = vec![0.0; self.cols];
        for i in 0..self.rows {
            let xi = x[i];
            if xi == 0.0 {
                continue;
            }
            let row = self.row(i);
            for (yj, a) in y.iter_mut().zip(row) {
                *yj += a * xi;
            }
        }
        y
    }

    /// Count of entries with magnitude above `tol`.
    pub fn count_nonzero(&self, tol: f64) -> usize {
        self.data.iter().filter(|v| v.abs() > tol).count()
    }

    /// max_ij |A_ij − B_ij|.
    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// LU factors of a square matrix with partial (row) pivoting.
///
/// Stores L and U packed into one matrix plus the row permutation. A pivot
/// is declared singular when its magnitude drops below `1e-12` times the
/// largest row sup-norm of the original matrix.
#[derive(Debug, Clone)]
pub struct LinearSystemFactors {
    lu: DenseMatrix,
    perm: Vec<usize>,
}

impl LinearSystemFactors {
    pub fn factor(a: &DenseMatrix) -> Result<Self, NumericsError> {
        let n = a.rows();
        let max_row_norm = (0..n)
            .map(|i| a.row(i).iter().fold(0.0f64, |m, v| m.max(v.abs())))
            .fold(0.0f64, f64::max);
        Self::factor_with_pivot_floor(a, 1e-12 * max_row_norm.max(1e-300))
    }

    /// Factor with an explicit absolute pivot floor. Interior-point KKT
    /// systems are badly row-scaled on purpose; a global relative floor
    /// would reject them even though partial pivoting handles them fine.
    pub fn factor_with_pivot_floor(a: &DenseMatrix, pivot_floor: f64) -> Result<Self, NumericsError> {
        let n = a.rows();
        if a.cols() != n {
            return Err(NumericsError::Shape(format!(
                "LU needs a square matrix, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            // pick the largest pivot in this column
            let mut best = col;
            let mut best_mag = lu.get(col, col).abs();
            for r in col + 1..n {
                let mag = lu.get(r, col).abs();
                if mag > best_mag {
                    best = r;
                    best_mag = mag;
                }
            }
            if best_mag <= pivot_floor {
                return Err(NumericsError::SingularMatrix { pivot_index: col });
            }
            if best != col {
                perm.swap(col, best);
                for j in 0..n {
                    let tmp = lu.get(col, j);
                    lu.set(col, j, lu.get(best, j));
                    lu.set(best, j, tmp);
                }
            }
            let piv = lu.get(col, col);
            for r in col + 1..n {
                let factor = lu.get(r, col) / piv;
                lu.set(r, col, factor);
                if factor != 0.0 {
                    for j in col + 1..n {
                        let v = lu.get(r, j) - factor * lu.get(col, j);
                        lu.set(r, j, v);
                    }
                }
            }
        }
        Ok(LinearSystemFactors { lu, perm })
    }

    pub fn order(&self) -> usize {
        self.lu.rows()
    }

    /// Solve A x = b for one right-hand side.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.order();
        assert_eq!(b.len(), n);
        // forward substitution on the permuted rhs
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            let row = self.lu.row(i);
            let mut acc = x[i];
            for j in 0..i {
                acc -= row[j] * x[j];
            }
            x[i] = acc;
        }
        // back substitution
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let mut acc = x[i];
            for j in i + 1..n {
                acc -= row[j] * x[j];
            }
            x[i] = acc / row[i];
        }
        x
    }

    /// Reconstruct P·A (for factorization-quality checks).
    pub fn reconstruct(&self) -> DenseMatrix {
        let n = self.order();
        let mut pa = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                let upper_start = i.min(j + 1);
                for k in 0..upper_start {
                    acc += self.lu.get(i, k) * self.lu.get(k, j);
                }
                if i <= j {
                    acc += self.lu.get(i, j);
                }
                pa.set(i, j, acc);
            }
        }
        // undo the permutation: rows of PA are rows perm[i] of A
        let mut a = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                a.set(self.perm[i], j, pa.get(i, j));
            }
        }
        a
    }
}

/// Factor and solve in one call.
pub fn lu_solve(a: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>, NumericsError> {
    Ok(LinearSystemFactors::factor(a)?.solve(b))
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_well_conditioned(n: usize, rng: &mut StdRng) -> DenseMatrix {
        // diagonally dominant => well conditioned enough for these sizes
        let mut a = DenseMatrix::zeros(n, n);
        for i in 0..n {
            let mut rowsum = 0.0;
            for j in 0..n {
                if i != j {
                    let v = rng.gen_range(-1.0..1.0);
                    a.set(i, j, v);
                    rowsum += v.abs();
                }
            }
            a.set(i, i, rowsum + rng.gen_range(1.0..2.0));
        }
        a
    }

    #[test]
    fn identity_solve() {
        let a = DenseMatrix::identity(3);
        let x = lu_solve(&a, &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(x, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn diagonal_solve() {
        let a = DenseMatrix::from_rows(&[&[2.0, 0.0], &[0.0, 4.0]]).unwrap();
        let x = lu_solve(&a, &[2.0, 8.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-14);
        assert!((x[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn random_20x20_residual() {
        let mut rng = StdRng::seed_from_u64(7);
        let a = random_well_conditioned(20, &mut rng);
        let b: Vec<f64> = (0..20).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let x = lu_solve(&a, &b).unwrap();
        let r: Vec<f64> = a
            .matvec(&x)
            .iter()
            .zip(&b)
            .map(|(ax, bi)| ax - bi)
            .collect();
        let bound = 1e-8 * (1.0 + inf_norm(&b));
        assert!(inf_norm(&r) <= bound, "residual {} > {}", inf_norm(&r), bound);
    }

    #[test]
    fn singular_names_pivot() {
        let a = DenseMatrix::from_rows(&[&[1.0, 2.0], &[2.0, 4.0]]).unwrap();
        match lu_solve(&a, &[1.0, 1.0]) {
            Err(NumericsError::SingularMatrix { pivot_index }) => assert_eq!(pivot_index, 1),
            other => panic!("expected singular error, got {other:?}"),
        }
    }

    #[test]
    fn reconstructs_matrix() {
        let mut rng = StdRng::seed_from_u64(11);
        let a = random_well_conditioned(30, &mut rng);
        let f = LinearSystemFactors::factor(&a).unwrap();
        let back = f.reconstruct();
        let rel = back.max_abs_diff(&a) / a.frobenius_norm();
        assert!(rel < 1e-10, "relative reconstruction error {rel}");
    }

    #[test]
    fn solves_known_solution_up_to_200() {
        let mut rng = StdRng::seed_from_u64(42);
        for &n in &[5usize, 50, 200] {
            let a = random_well_conditioned(n, &mut rng);
            let x_known: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let b = a.matvec(&x_known);
            let x = lu_solve(&a, &b).unwrap();
            let scale = inf_norm(&x_known).max(1.0);
            let err = x
                .iter()
                .zip(&x_known)
                .map(|(u, v)| (u - v).abs())
                .fold(0.0f64, f64::max);
            assert!(err / scale < 1e-8, "n={n}: relative error {}", err / scale);
        }
    }

    #[test]
    fn rejects_non_finite() {
        assert!(DenseMatrix::from_vec(1, 2, vec![1.0, f64::NAN]).is_err());
        assert!(DenseMatrix::from_vec(2, 2, vec![1.0, 2.0]).is_err());
    }
}
