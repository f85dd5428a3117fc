//! Dense row-major matrix and Householder QR, just enough for least squares.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::math::sqrt;

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

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// `vᵀ M v` for a square matrix.
    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        assert_eq!(self.rows, self.cols);
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| v[i] * dot(self.row(i), v)).sum()
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Householder QR of a tall matrix, stored column-major.
///
/// Below the diagonal each column holds its Householder vector; the strict
/// upper triangle holds `R` and `r_diag` its diagonal.
#[derive(Debug, Clone)]
pub struct HouseholderQr {
    n: usize,
    k: usize,
    cols: Vec<Vec<f64>>,
    r_diag: Vec<f64>,
}

impl HouseholderQr {
    pub fn factor(a: &Matrix) -> Self {
        let (n, k) = (a.rows(), a.cols());
        let mut cols: Vec<Vec<f64>> = (0..k).map(|j| a.column(j)).collect();
        let mut r_diag = vec![0.0; k];
        for j in 0..k {
            let (head, tail) = cols.split_at_mut(j + 1);
            let v = &mut head[j];
            let mut norm = sqrt(v[j..].iter().map(|x| x * x).sum());
            if norm != 0.0 {
                if v[j] < 0.0 {
                    norm = -norm;
                }
                for x in &mut v[j..] {
                    *x /= norm;
                }
                v[j] += 1.0;
                for c in tail.iter_mut() {
                    let s = -dot(&v[j..], &c[j..]) / v[j];
                    for (ci, vi) in c[j..].iter_mut().zip(&v[j..]) {
                        *ci += s * vi;
                    }
                }
            }
            r_diag[j] = -norm;
        }
        Self { n, k, cols, r_diag }
    }

    pub fn r_diag(&self) -> &[f64] {
        &self.r_diag
    }

    #[inline]
    fn r(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.r_diag[i]
        } else if i < j {
            self.cols[j][i]
        } else {
            0.0
        }
    }

    /// Applies `Qᵀ` to `y` in place.
    pub fn apply_qt(&self, y: &mut [f64]) {
        assert_eq!(y.len(), self.n);
        for j in 0..self.k {
            let v = &self.cols[j];
            if v[j] == 0.0 {
                continue;
            }
            let s = -dot(&v[j..], &y[j..]) / v[j];
            for (yi, vi) in y[j..].iter_mut().zip(&v[j..]) {
                *yi += s * vi;
            }
        }
    }

    /// Least-squares solution of `A x ≈ y`. `R` must be non-singular.
    pub fn solve(&self, y: &[f64]) -> Vec<f64> {
        let mut qty = y.to_vec();
        self.apply_qt(&mut qty);
        let mut x = vec![0.0; self.k];
        for i in (0..self.k).rev() {
            let mut s = qty[i];
            for j in i + 1..self.k {
                s -= self.r(i, j) * x[j];
            }
            x[i] = s / self.r_diag[i];
        }
        x
    }

    /// `(AᵀA)⁻¹ = R⁻¹ R⁻ᵀ`.
    pub fn gram_inverse(&self) -> Matrix {
        let k = self.k;
        // R⁻¹ is upper triangular; solve column by column.
        let mut rinv = Matrix::zeros(k, k);
        for c in 0..k {
            for i in (0..=c).rev() {
                let mut s = if i == c { 1.0 } else { 0.0 };
                for j in i + 1..=c {
                    s -= self.r(i, j) * rinv[(j, c)];
                }
                rinv[(i, c)] = s / self.r_diag[i];
            }
        }
        let mut g = Matrix::zeros(k, k);
        for i in 0..k {
            for j in i..k {
                let start = j.max(i);
                let s: f64 = (start..k).map(|m| rinv[(i, m)] * rinv[(j, m)]).sum();
                g[(i, j)] = s;
                g[(j, i)] = s;
            }
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_square_system() {
        let a = Matrix::from_row_major(3, 3, vec![2.0, 1.0, 1.0, 1.0, 3.0, 2.0, 1.0, 0.0, 0.0]);
        let x_true = [1.0, -2.0, 3.0];
        let y = a.mul_vec(&x_true);
        let x = HouseholderQr::factor(&a).solve(&y);
        for (u, v) in x.iter().zip(&x_true) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn gram_inverse_is_inverse() {
        let a = Matrix::from_row_major(4, 2, vec![1.0, 0.5, 1.0, 1.5, 1.0, -2.0, 1.0, 4.0]);
        let g = HouseholderQr::factor(&a).gram_inverse();
        // AᵀA
        let mut ata = Matrix::zeros(2, 2);
        for i in 0..2 {
            for j in 0..2 {
                ata[(i, j)] = (0..4).map(|r| a[(r, i)] * a[(r, j)]).sum();
            }
        }
        for i in 0..2 {
            for j in 0..2 {
                let e: f64 = (0..2).map(|m| ata[(i, m)] * g[(m, j)]).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((e - expect).abs() < 1e-12);
            }
        }
    }
}
