//! Dense square matrices over any commutative ring.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};


use crate::scalar::{Ring, Scalar, C64};

#[derive(Clone, PartialEq)]
pub struct Mat<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = self.data.chunks(self.dim.max(1)).collect();
        f.debug_list().entries(rows).finish()
    }
}

impl<T: Ring> Mat<T> {
    pub fn zeros(dim: usize) -> Self {
        Mat {
            dim,
            data: vec![T::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(vec![T::one(); dim])
    }

    pub fn scalar(dim: usize, v: T) -> Self {
        Self::diagonal(vec![v; dim])
    }

    pub fn diagonal(diag: Vec<T>) -> Self {
        let dim = diag.len();
        let mut m = Self::zeros(dim);
        for (i, v) in diag.into_iter().enumerate() {
            m.data[i * dim + i] = v;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Option<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return None;
        }
        Some(Mat {
            dim,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Mat { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.dim + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.data
            .chunks(self.dim.max(1))
            .map(|r| r.to_vec())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn trace(&self) -> T {
        (0..self.dim).fold(T::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        Mat {
            dim: self.dim,
            data: self.data.iter().map(|v| v.clone() * s.clone()).collect(),
        }
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat {
            dim: self.dim,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.data[k * n + j];
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * n + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * b.clone();
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::identity(self.dim);
        for _ in 0..k {
            acc = acc.matmul(self);
        }
        acc
    }

    /// `A ⊗ B` with `A` indexing the outer block.
    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        Self::from_fn(n * m, |i, j| {
            self.get(i / m, j / m).clone() * other.get(i % m, j % m).clone()
        })
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| *self.get(i, j) == -self.get(j, i).clone()))
    }
}

impl<S: Scalar> Mat<S> {
    pub fn to_c64(&self) -> Mat<C64> {
        self.map(|v| v.to_c64())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }
}

impl Mat<C64> {
    /// Induced 1-norm (max column sum).
    pub fn norm1(&self) -> f64 {
        (0..self.dim)
            .map(|j| (0..self.dim).map(|i| self.get(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn antisymmetry_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                worst = worst.max((self.get(i, j) + self.get(j, i)).norm());
            }
        }
        worst
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.dim;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n).max_by(|&x, &y| {
                a.get(x, col)
                    .norm()
                    .partial_cmp(&a.get(y, col).norm())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })?;
            let pv = *a.get(pivot, col);
            if pv.norm() == 0.0 || !pv.norm().is_finite() {
                return None;
            }
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let scale = pv.inv();
            for j in 0..n {
                a.data[col * n + j] *= scale;
                inv.data[col * n + j] *= scale;
            }
            for i in 0..n {
                if i == col {
                    continue;
                }
                let f = a.data[i * n + col];
                if f.norm() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let av = a.data[col * n + j];
                    let iv = inv.data[col * n + j];
                    a.data[i * n + j] -= f * av;
                    inv.data[i * n + j] -= f * iv;
                }
            }
        }
        Some(inv)
    }
}

impl<T: Ring> Add for Mat<T> {
    type Output = Mat<T>;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<T: Ring> Add for &Mat<T> {
    type Output = Mat<T>;
    fn add(self, rhs: Self) -> Mat<T> {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        Mat {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<T: Ring> Sub for Mat<T> {
    type Output = Mat<T>;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<T: Ring> Sub for &Mat<T> {
    type Output = Mat<T>;
    fn sub(self, rhs: Self) -> Mat<T> {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        Mat {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<T: Ring> Mul for Mat<T> {
    type Output = Mat<T>;
    fn mul(self, rhs: Self) -> Self {
        self.matmul(&rhs)
    }
}

impl<T: Ring> Mul for &Mat<T> {
    type Output = Mat<T>;
    fn mul(self, rhs: Self) -> Mat<T> {
        self.matmul(rhs)
    }
}

impl<T: Ring> Neg for Mat<T> {
    type Output = Mat<T>;
    fn neg(self) -> Self {
        self.map(|v| -v.clone())
    }
}

impl<T: Ring> Neg for &Mat<T> {
    type Output = Mat<T>;
    fn neg(self) -> Mat<T> {
        self.map(|v| -v.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn kron_dimensions_and_entries() {
        let a = Mat::from_rows(vec![vec![q(1, 1), q(2, 1)], vec![q(0, 1), q(1, 1)]]).unwrap();
        let b = Mat::<crate::scalar::ExactComplex>::identity(2);
        let k = a.kron(&b);
        assert_eq!(k.dim(), 4);
        assert_eq!(*k.get(0, 2), q(2, 1));
        assert_eq!(*k.get(1, 3), q(2, 1));
        assert_eq!(*k.get(2, 0), q(0, 1));
    }

    #[test]
    fn inverse_recovers_identity() {
        let m = Mat::from_rows(vec![
            vec![C64::new(2.0, 1.0), C64::new(0.5, 0.0)],
            vec![C64::new(-1.0, 0.0), C64::new(0.0, 3.0)],
        ])
        .unwrap();
        let prod = m.matmul(&m.inverse().unwrap());
        assert!((prod - Mat::identity(2)).max_abs() < 1e-14);
    }
}
