//! Dense symmetric solves for the handful of active joints.

use crate::scalar::Scalar;

/// Row-major square matrix.
#[derive(Debug, Clone)]
pub(crate) struct SymMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> SymMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    pub fn add(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = self.data[i * self.n + j] + v;
    }

    /// Principal submatrix on `idx`.
    pub fn select(&self, idx: &[usize]) -> Self {
        let mut out = Self::zeros(idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out.data[a * idx.len() + b] = self.get(i, j);
            }
        }
        out
    }

    /// Cholesky factor `L` with `L Lᵀ = self + shift·I`, or `None` if not positive definite.
    fn cholesky(&self, shift: T) -> Option<Vec<T>> {
        let n = self.n;
        let mut l = vec![T::zero(); n * n];
        for i in 0..n {
            for j in 0..=i {
                let mut sum = self.get(i, j);
                if i == j {
                    sum = sum + shift;
                }
                for k in 0..j {
                    sum = sum - l[i * n + k] * l[j * n + k];
                }
                if i == j {
                    if sum <= T::zero() || !sum.is_finite() {
                        return None;
                    }
                    l[i * n + i] = sum.sqrt();
                } else {
                    l[i * n + j] = sum / l[j * n + j];
                }
            }
        }
        Some(l)
    }

    /// Solves `(self + τI) x = rhs`, raising `τ` from zero until the
    /// shifted matrix is positive definite.
    pub fn solve_regularized(&self, rhs: &[T]) -> Vec<T> {
        let n = self.n;
        let scale = (0..n)
            .map(|i| self.get(i, i).abs())
            .fold(T::zero(), T::max)
            .max(T::one());
        let mut shift = T::zero();
        let l = loop {
            if let Some(l) = self.cholesky(shift) {
                break l;
            }
            shift = if shift == T::zero() {
                scale * T::of(1e-8)
            } else {
                shift * T::of(10.0)
            };
        };
        let mut y = vec![T::zero(); n];
        for i in 0..n {
            let mut s = rhs[i];
            for k in 0..i {
                s = s - l[i * n + k] * y[k];
            }
            y[i] = s / l[i * n + i];
        }
        let mut x = vec![T::zero(); n];
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..n {
                s = s - l[k * n + i] * x[k];
            }
            x[i] = s / l[i * n + i];
        }
        x
    }
}
