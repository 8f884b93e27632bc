//! Small dense real matrices and a one-sided Jacobi SVD.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row-major dense matrix. Serializes as a list of rows.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `x^T A`, i.e. the combination of rows weighted by `x`.
    pub fn vec_mul(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for (i, &w) in x.iter().enumerate().take(self.rows) {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += w * a;
            }
        }
        out
    }

    pub fn with_row(&self, row: &[f64]) -> Result<Self> {
        if row.len() != self.cols {
            return Err(Error::Shape(format!(
                "row of length {} for {} columns",
                row.len(),
                self.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(row);
        Ok(Self {
            rows: self.rows + 1,
            cols: self.cols,
            data,
        })
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

impl TryFrom<Vec<Vec<f64>>> for Matrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Matrix::from_rows(&rows)
    }
}

impl From<Matrix> for Vec<Vec<f64>> {
    fn from(m: Matrix) -> Self {
        m.to_rows()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// `A = U diag(s) V^T` with `s` sorted in decreasing order.
///
/// `v` is square (`cols x cols`). `u` has one column per singular value; a
/// column whose singular value is zero is left as the zero vector.
#[derive(Debug, Clone)]
pub struct Svd {
    pub singular_values: Vec<f64>,
    pub u: Matrix,
    pub v: Matrix,
}

const JACOBI_SWEEPS: usize = 60;

/// One-sided (Hestenes) Jacobi SVD.
///
/// Plane rotations are applied to pairs of columns of a working copy until
/// every pair is orthogonal to working precision; the accumulated rotations
/// form `V` and the column norms are the singular values. Works for any
/// shape: for a wide matrix the surplus columns converge to zero, and the
/// matching columns of `V` span the null space.
pub fn jacobi_svd(a: &Matrix) -> Svd {
    let (m, n) = (a.rows, a.cols);
    let mut w = a.clone();
    let mut v = Matrix::identity(n);

    for _ in 0..JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for i in 0..m {
                    let (x, y) = (w[(i, p)], w[(i, q)]);
                    alpha += x * x;
                    beta += y * y;
                    gamma += x * y;
                }
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let (x, y) = (w[(i, p)], w[(i, q)]);
                    w[(i, p)] = c * x - s * y;
                    w[(i, q)] = s * x + c * y;
                }
                for i in 0..n {
                    let (x, y) = (v[(i, p)], v[(i, q)]);
                    v[(i, p)] = c * x - s * y;
                    v[(i, q)] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = (0..n)
        .map(|j| (0..m).map(|i| w[(i, j)].powi(2)).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    // stable on ties so the output is reproducible
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]).then(x.cmp(&y)));

    let mut u = Matrix::zeros(m, n);
    let mut vs = Matrix::zeros(n, n);
    let mut s = Vec::with_capacity(n);
    for (k, &j) in order.iter().enumerate() {
        s.push(norms[j]);
        if norms[j] > 0.0 {
            for i in 0..m {
                u[(i, k)] = w[(i, j)] / norms[j];
            }
        }
        for i in 0..n {
            vs[(i, k)] = v[(i, j)];
        }
    }
    Svd {
        singular_values: s,
        u,
        v: vs,
    }
}

/// Orthonormal basis of `{ y : y^T A = 0 }`, from singular values below
/// `threshold`. Also returns the full singular spectrum of `A^T`.
pub fn left_null_space(a: &Matrix, threshold: f64) -> (Vec<Vec<f64>>, Vec<f64>) {
    let svd = jacobi_svd(&a.transpose());
    let basis = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s < threshold)
        .map(|(k, _)| svd.v.column(k))
        .collect();
    (basis, svd.singular_values)
}

/// Solves the square system `A x = b` through the SVD, refusing when the
/// condition estimate `s_max / s_min` exceeds `max_condition`.
pub fn solve_square(a: &Matrix, b: &[f64], max_condition: f64) -> Result<Vec<f64>> {
    if a.rows != a.cols || b.len() != a.rows {
        return Err(Error::Shape(format!(
            "{}x{} system with rhs of length {}",
            a.rows,
            a.cols,
            b.len()
        )));
    }
    let svd = jacobi_svd(a);
    let smax = svd.singular_values[0];
    let smin = *svd.singular_values.last().expect("nonempty");
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(condition <= max_condition) {
        return Err(Error::SingularJacobian { condition });
    }
    // x = V diag(1/s) U^T b
    let n = a.cols;
    let mut x = vec![0.0; n];
    for k in 0..n {
        let coef: f64 = (0..n).map(|i| svd.u[(i, k)] * b[i]).sum::<f64>() / svd.singular_values[k];
        for (i, xi) in x.iter_mut().enumerate() {
            *xi += svd.v[(i, k)] * coef;
        }
    }
    Ok(x)
}
