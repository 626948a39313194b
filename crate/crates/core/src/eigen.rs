//! Cyclic Jacobi eigenvalues for complex Hermitian matrices.

use num_complex::Complex64;

use crate::CoreError;

pub const JACOBI_TOL: f64 = 1e-12;
pub const MAX_SWEEPS: usize = 100;

/// Dense square matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    pub n: usize,
    pub data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix { n, data: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = f(i, j);
            }
        }
        m
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    fn at_mut(&mut self, i: usize, j: usize) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.at(j, i).conj())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            let dst = &mut out.data[i * n..(i + 1) * n];
            for (k, a) in row.iter().enumerate() {
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let src = &other.data[k * n..(k + 1) * n];
                for (d, b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.at(i, i)).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    fn off_diagonal(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    s += self.at(i, j).norm_sqr();
                }
            }
        }
        s.sqrt()
    }
}

/// Eigenvalues in ascending order.
pub fn hermitian_eigen(h: &CMatrix) -> Result<Vec<f64>, CoreError> {
    let n = h.n;
    let norm = h.frobenius();
    for i in 0..n {
        for j in i..n {
            if (h.at(i, j) - h.at(j, i).conj()).norm() > 1e-12 * norm.max(1.0) {
                return Err(CoreError::Domain(format!("matrix is not Hermitian at ({i},{j})")));
            }
        }
    }
    let mut a = h.clone();
    let target = JACOBI_TOL * norm;
    let mut converged = a.off_diagonal() <= target;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(CoreError::NonConvergence(format!("Jacobi did not converge in {MAX_SWEEPS} sweeps")));
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, p, q);
            }
        }
        converged = a.off_diagonal() <= target;
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a.at(i, i).re).collect();
    ev.sort_by(|x, y| x.total_cmp(y));
    Ok(ev)
}

/// Annihilates `a[p][q]` by `A <- U^H A U`, `U = diag(1, e^{-i phi}) R(theta)` on the `(p, q)` plane.
/// Only rows `p` and `q` are recomputed; the columns follow by Hermitian symmetry.
fn rotate(a: &mut CMatrix, p: usize, q: usize) {
    let apq = a.at(p, q);
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let (app, aqq) = (a.at(p, p).re, a.at(q, q).re);
    let theta = 0.5 * (2.0 * r).atan2(aqq - app);
    let (s, c) = theta.sin_cos();
    // conj of the phase that makes the (p, q) entry real
    let phase = apq / r;
    let n = a.n;
    let (lo, hi) = a.data.split_at_mut(q * n);
    let row_p = &mut lo[p * n..(p + 1) * n];
    let row_q = &mut hi[..n];
    for k in 0..n {
        let bp = row_p[k];
        let bq = phase * row_q[k];
        row_p[k] = bp * c - bq * s;
        row_q[k] = bp * s + bq * c;
    }
    for k in 0..n {
        if k != p && k != q {
            let (vp, vq) = (a.at(p, k).conj(), a.at(q, k).conj());
            *a.at_mut(k, p) = vp;
            *a.at_mut(k, q) = vq;
        }
    }
    let (c2, s2, cs) = (c * c, s * s, c * s);
    *a.at_mut(p, p) = Complex64::new(c2 * app - 2.0 * cs * r + s2 * aqq, 0.0);
    *a.at_mut(q, q) = Complex64::new(s2 * app + 2.0 * cs * r + c2 * aqq, 0.0);
    *a.at_mut(p, q) = Complex64::new(0.0, 0.0);
    *a.at_mut(q, p) = Complex64::new(0.0, 0.0);
}
