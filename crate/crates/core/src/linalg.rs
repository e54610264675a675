//! Small dense symmetric matrices and a cyclic Jacobi eigensolver.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dense symmetric `n × n` matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> SymMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    /// Builds from rows, rejecting anything that is not exactly symmetric.
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(Error::InvalidArgument("matrix must be square".into()));
            }
            data.extend_from_slice(r);
        }
        let m = Self { n, data };
        for i in 0..n {
            for j in 0..i {
                if m.get(i, j) != m.get(j, i) {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
    }

    /// Sets both `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set_sym(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn trace(&self) -> T {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_sq(&self) -> T {
        self.data.iter().map(|&v| v * v).sum()
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// `xᵀ A x`
    pub fn quadratic_form(&self, x: &[T]) -> T {
        debug_assert_eq!(x.len(), self.n);
        let mut acc = T::zero();
        for i in 0..self.n {
            let row = self.row(i);
            let mut s = T::zero();
            for j in 0..self.n {
                s = s + row[j] * x[j];
            }
            acc = acc + x[i] * s;
        }
        acc
    }

    /// Leading `k × k` block.
    pub fn leading(&self, k: usize) -> Self {
        let k = k.min(self.n);
        let mut m = Self::zeros(k);
        for i in 0..k {
            m.data[i * k..(i + 1) * k].copy_from_slice(&self.row(i)[..k]);
        }
        m
    }

    pub fn add_scaled_outer(&mut self, c: T, v: &[T]) {
        for i in 0..self.n {
            let ci = c * v[i];
            for j in 0..self.n {
                self.data[i * self.n + j] = self.data[i * self.n + j] + ci * v[j];
            }
        }
    }
}

/// Eigenvalues and column eigenvectors of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymEigen<T> {
    pub values: Vec<T>,
    /// `vectors[k]` is the unit eigenvector for `values[k]`.
    pub vectors: Vec<Vec<T>>,
    pub sweeps: usize,
}

/// Cyclic Jacobi rotations until the off-diagonal mass is negligible.
pub fn jacobi_eigen<T: Real>(m: &SymMatrix<T>) -> SymEigen<T> {
    jacobi(m, true)
}

/// Same as [`jacobi_eigen`] without accumulating eigenvectors.
pub fn jacobi_eigenvalues<T: Real>(m: &SymMatrix<T>) -> Vec<T> {
    jacobi(m, false).values
}

fn jacobi<T: Real>(m: &SymMatrix<T>, want_vectors: bool) -> SymEigen<T> {
    const MAX_SWEEPS: usize = 100;
    let n = m.n;
    let mut a = m.data.clone();
    let mut v = if want_vectors {
        SymMatrix::identity(n).data
    } else {
        Vec::new()
    };
    let scale = m.frobenius_sq();
    let tiny = T::epsilon() * T::epsilon() * scale;
    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS {
        let off: T = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum();
        if off <= tiny || scale.is_zero() {
            break;
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.is_zero() {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (T::two() * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                if want_vectors {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
    let values: Vec<T> = (0..n).map(|i| a[i * n + i]).collect();
    let vectors = if want_vectors {
        (0..n).map(|k| (0..n).map(|i| v[i * n + k]).collect()).collect()
    } else {
        Vec::new()
    };
    SymEigen {
        values,
        vectors,
        sweeps,
    }
}

/// `Σ |μ_i|` over the eigenvalues.
pub fn nuclear_norm<T: Real>(m: &SymMatrix<T>) -> T {
    jacobi_eigenvalues(m).into_iter().map(|x| x.abs()).sum()
}
