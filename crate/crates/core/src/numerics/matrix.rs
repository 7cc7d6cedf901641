//! Row-major dense matrices with the Cholesky machinery used by the GP
//! posterior and the Levenberg-Marquardt normal equations.

use serde::{Deserialize, Serialize};

use super::NumericsError;

/// Dense row-major matrix of `f64`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        DenseMatrix { rows, cols, data }
    }

    /// Builds a matrix from row slices. Panics if the rows are ragged.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        DenseMatrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn transpose(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "matvec shape mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Largest relative asymmetry |a_ij - a_ji| / max|a|.
    pub fn asymmetry(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let scale = self
            .data
            .iter()
            .fold(0.0_f64, |acc, v| acc.max(v.abs()))
            .max(f64::MIN_POSITIVE);
        let mut worst = 0.0_f64;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs() / scale);
            }
        }
        worst
    }
}

/// Lower Cholesky factor of a symmetric positive-definite matrix.
///
/// On a non-positive pivot the factorization is retried with diagonal
/// jitter `1e-10 * trace/n`, escalating tenfold up to `1e-4 * trace/n`,
/// before giving up with [`NumericsError::NotPositiveDefinite`].
pub fn cholesky(m: &DenseMatrix) -> Result<DenseMatrix, NumericsError> {
    if !m.is_square() {
        return Err(NumericsError::Shape(format!(
            "cholesky needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if m.asymmetry() > 1e-10 {
        return Err(NumericsError::Shape(
            "cholesky needs a symmetric matrix".into(),
        ));
    }
    match cholesky_attempt(m, 0.0) {
        Ok(l) => return Ok(l),
        Err(e) => {
            let base = m.trace() / m.rows() as f64;
            if !(base > 0.0) {
                return Err(e);
            }
            let mut jitter = 1e-10 * base;
            let cap = 1e-4 * base;
            loop {
                match cholesky_attempt(m, jitter) {
                    Ok(l) => return Ok(l),
                    Err(e) if jitter >= cap => return Err(e),
                    Err(_) => jitter *= 10.0,
                }
            }
        }
    }
}

fn cholesky_attempt(m: &DenseMatrix, jitter: f64) -> Result<DenseMatrix, NumericsError> {
    let n = m.rows();
    let mut l = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut s = m.get(i, j);
            if i == j {
                s += jitter;
            }
            for k in 0..j {
                s -= l.get(i, k) * l.get(j, k);
            }
            if i == j {
                if s <= 0.0 || !s.is_finite() {
                    return Err(NumericsError::NotPositiveDefinite { row: i, pivot: s });
                }
                l.set(i, j, s.sqrt());
            } else {
                l.set(i, j, s / l.get(j, j));
            }
        }
    }
    Ok(l)
}

/// Solves `m x = b` for symmetric positive-definite `m` via Cholesky.
pub fn solve_spd(m: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>, NumericsError> {
    if b.len() != m.rows() {
        return Err(NumericsError::Shape(format!(
            "rhs length {} does not match matrix order {}",
            b.len(),
            m.rows()
        )));
    }
    let l = cholesky(m)?;
    Ok(solve_with_factor(&l, b))
}

/// Solves `L Lᵀ x = b` given a precomputed lower factor.
pub fn solve_with_factor(l: &DenseMatrix, b: &[f64]) -> Vec<f64> {
    let n = l.rows();
    // forward: L y = b
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l.get(i, k) * y[k];
        }
        y[i] = s / l.get(i, i);
    }
    // backward: Lᵀ x = y
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in (i + 1)..n {
            s -= l.get(k, i) * x[k];
        }
        x[i] = s / l.get(i, i);
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RandomStream;

    /// Independent elimination oracle used to cross-check the Cholesky path.
    pub(crate) fn gauss_jordan_solve(m: &DenseMatrix, b: &[f64]) -> Vec<f64> {
        let n = m.rows();
        let mut a = vec![vec![0.0; n + 1]; n];
        for i in 0..n {
            for j in 0..n {
                a[i][j] = m.get(i, j);
            }
            a[i][n] = b[i];
        }
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&p, &q| a[p][col].abs().partial_cmp(&a[q][col].abs()).unwrap())
                .unwrap();
            a.swap(col, pivot_row);
            let pivot = a[col][col];
            for j in col..=n {
                a[col][j] /= pivot;
            }
            for row in 0..n {
                if row != col {
                    let factor = a[row][col];
                    for j in col..=n {
                        a[row][j] -= factor * a[col][j];
                    }
                }
            }
        }
        (0..n).map(|i| a[i][n]).collect()
    }

    fn random_spd(n: usize, stream: &mut RandomStream) -> DenseMatrix {
        let a = DenseMatrix::from_fn(n, n, |_, _| stream.uniform_in(-1.0, 1.0));
        let mut m = a.transpose().matmul(&a);
        for i in 0..n {
            m.set(i, i, m.get(i, i) + 1.0);
        }
        m
    }

    #[test]
    fn cholesky_two_by_two() {
        let m = DenseMatrix::from_rows(&[vec![4.0, 2.0], vec![2.0, 3.0]]);
        let l = cholesky(&m).unwrap();
        assert!((l.get(0, 0) - 2.0).abs() < 1e-12);
        assert!((l.get(1, 0) - 1.0).abs() < 1e-12);
        assert!((l.get(1, 1) - 2.0_f64.sqrt()).abs() < 1e-12);
        // reconstruction oracle: L Lᵀ must give the input back
        let rec = l.matmul(&l.transpose());
        let mut diff = DenseMatrix::zeros(2, 2);
        for i in 0..2 {
            for j in 0..2 {
                diff.set(i, j, rec.get(i, j) - m.get(i, j));
            }
        }
        assert!(diff.frobenius_norm() / m.frobenius_norm() < 1e-10);
    }

    #[test]
    fn cholesky_identity() {
        let m = DenseMatrix::identity(3);
        assert_eq!(cholesky(&m).unwrap(), DenseMatrix::identity(3));
    }

    #[test]
    fn cholesky_indefinite_rejected() {
        let m = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]);
        assert!(matches!(
            cholesky(&m),
            Err(NumericsError::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn cholesky_rejects_asymmetric() {
        let m = DenseMatrix::from_rows(&[vec![1.0, 0.5], vec![0.0, 1.0]]);
        assert!(matches!(cholesky(&m), Err(NumericsError::Shape(_))));
    }

    #[test]
    fn solve_identity_and_diagonal() {
        let x = solve_spd(&DenseMatrix::identity(2), &[3.0, 5.0]).unwrap();
        assert_eq!(x, vec![3.0, 5.0]);
        let d = DenseMatrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 4.0]]);
        let x = solve_spd(&d, &[2.0, 8.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-14 && (x[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn solve_matches_gauss_jordan_oracle() {
        let m = DenseMatrix::from_rows(&[vec![4.0, 2.0], vec![2.0, 3.0]]);
        let b = [10.0, 9.0];
        let x = solve_spd(&m, &b).unwrap();
        let oracle = gauss_jordan_solve(&m, &b);
        for (a, o) in x.iter().zip(&oracle) {
            assert!((a - o).abs() < 1e-10);
        }
        let residual: f64 = m
            .matvec(&x)
            .iter()
            .zip(&b)
            .map(|(mx, bi)| (mx - bi).powi(2))
            .sum::<f64>()
            .sqrt();
        assert!(residual < 1e-10);
    }

    #[test]
    fn random_spd_systems_agree_with_oracle() {
        let mut stream = RandomStream::new(42);
        for n in 2..=8 {
            for _ in 0..5 {
                let m = random_spd(n, &mut stream);
                let b: Vec<f64> = (0..n).map(|_| stream.uniform_in(-2.0, 2.0)).collect();
                let x = solve_spd(&m, &b).unwrap();
                let oracle = gauss_jordan_solve(&m, &b);
                let scale = oracle.iter().fold(1.0_f64, |a, v| a.max(v.abs()));
                for (a, o) in x.iter().zip(&oracle) {
                    assert!((a - o).abs() / scale < 1e-8, "n={n}: {a} vs {o}");
                }
            }
        }
    }

    #[test]
    fn random_spd_factorizations_reconstruct() {
        let mut stream = RandomStream::new(7);
        for n in 2..=10 {
            let m = random_spd(n, &mut stream);
            let l = cholesky(&m).unwrap();
            let rec = l.matmul(&l.transpose());
            let mut err = 0.0_f64;
            for i in 0..n {
                for j in 0..n {
                    err += (rec.get(i, j) - m.get(i, j)).powi(2);
                }
            }
            assert!(err.sqrt() / m.frobenius_norm() < 1e-9);
        }
    }
}
