//! Small dense linear algebra: LU with partial pivoting, a 1-norm condition
//! estimate, and Householder least squares.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Result, WaveError};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
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

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn set_col(&mut self, j: usize, col: &[f64]) {
        debug_assert_eq!(col.len(), self.rows);
        for (i, v) in col.iter().enumerate() {
            self[(i, j)] = *v;
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
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

/// `P A = L U` with unit lower `L` stored below the diagonal.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
    norm_one: f64,
}

impl Lu {
    pub fn factor(a: &Matrix) -> Result<Self> {
        assert_eq!(a.rows, a.cols, "LU needs a square matrix");
        let n = a.rows;
        let norm_one = a.norm_one();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|i| (i, lu[(i, k)].abs()))
                .fold((k, -1.0), |best, c| if c.1 > best.1 { c } else { best });
            if !(pivot > 0.0) || !pivot.is_finite() {
                return Err(WaveError::Singular {
                    condition: f64::INFINITY,
                });
            }
            if p != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let d = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / d;
                lu[(i, k)] = f;
                if f != 0.0 {
                    for j in k + 1..n {
                        lu.data[i * n + j] -= f * lu.data[k * n + j];
                    }
                }
            }
        }
        Ok(Self { lu, perm, norm_one })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let lu = &self.lu;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| lu[(i, j)] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| lu[(i, j)] * x[j]).sum();
            x[i] = (x[i] - s) / lu[(i, i)];
        }
        x
    }

    /// Solves `A^T x = b`.
    pub fn solve_transpose(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let lu = &self.lu;
        // A^T = U^T L^T P, so solve U^T z = b, L^T w = z, x = P^T w.
        let mut z = b.to_vec();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| lu[(j, i)] * z[j]).sum();
            z[i] = (z[i] - s) / lu[(i, i)];
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| lu[(j, i)] * z[j]).sum();
            z[i] -= s;
        }
        let mut x = vec![0.0; n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = z[k];
        }
        x
    }

    /// Hager/Higham estimate of `||A||_1 ||A^{-1}||_1`.
    pub fn condition_estimate(&self) -> f64 {
        let n = self.dim();
        let mut x = vec![1.0 / n as f64; n];
        let mut est = 0.0;
        for _ in 0..5 {
            let y = self.solve(&x);
            let y_norm: f64 = y.iter().map(|v| v.abs()).sum();
            if !y_norm.is_finite() {
                return f64::INFINITY;
            }
            if y_norm <= est {
                break;
            }
            est = y_norm;
            let xi: Vec<f64> = y
                .iter()
                .map(|v| if *v >= 0.0 { 1.0 } else { -1.0 })
                .collect();
            let z = self.solve_transpose(&xi);
            let (jmax, zmax) =
                z.iter().enumerate().fold(
                    (0, -1.0),
                    |b, (j, v)| if v.abs() > b.1 { (j, v.abs()) } else { b },
                );
            let ztx: f64 = z.iter().zip(&x).map(|(a, b)| a * b).sum();
            if zmax <= ztx {
                break;
            }
            x = vec![0.0; n];
            x[jmax] = 1.0;
        }
        est * self.norm_one
    }
}

/// Least-squares solution of `A x ~ b` for a tall matrix of full column rank,
/// by Householder QR. Returns the solution and the ratio of the smallest to the
/// largest diagonal entry of `R`.
pub fn least_squares(a: &Matrix, b: &[f64]) -> (Vec<f64>, f64) {
    let (m, n) = (a.rows, a.cols);
    assert!(m >= n, "least squares needs rows >= cols");
    assert_eq!(b.len(), m);
    let mut r = a.clone();
    let mut rhs = b.to_vec();
    for k in 0..n {
        let norm = (k..m).map(|i| r[(i, k)].powi(2)).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if r[(k, k)] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..m).map(|i| r[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for j in k..n {
            let s: f64 = v.iter().enumerate().map(|(t, vi)| vi * r[(k + t, j)]).sum();
            let f = 2.0 * s / vnorm2;
            for (t, vi) in v.iter().enumerate() {
                r[(k + t, j)] -= f * vi;
            }
        }
        let s: f64 = v.iter().enumerate().map(|(t, vi)| vi * rhs[k + t]).sum();
        let f = 2.0 * s / vnorm2;
        for (t, vi) in v.iter().enumerate() {
            rhs[k + t] -= f * vi;
        }
    }
    let diag: Vec<f64> = (0..n).map(|i| r[(i, i)].abs()).collect();
    let dmax = diag.iter().cloned().fold(0.0, f64::max);
    let dmin = diag.iter().cloned().fold(f64::INFINITY, f64::min);
    let ratio = if dmax > 0.0 { dmin / dmax } else { 0.0 };
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| r[(i, j)] * x[j]).sum();
        x[i] = if r[(i, i)] != 0.0 {
            (rhs[i] - s) / r[(i, i)]
        } else {
            0.0
        };
    }
    (x, ratio)
}
