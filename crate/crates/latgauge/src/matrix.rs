//! Dense complex matrices sized for structure-group work (N <= 3 stays on the
//! stack), with the two factorizations everything else is built on: a
//! twice-through modified Gram-Schmidt QR and a complex Hermitian Jacobi
//! eigensolver extended to unitary (normal) matrices via simultaneous
//! diagonalization of the Hermitian and anti-Hermitian parts.

use alloc::vec::Vec;

use num_complex::Complex64;
use smallvec::SmallVec;

use crate::math;
use crate::{Error, Result};

/// Maximum number of Jacobi sweeps before giving up. Hermitian Jacobi
/// converges cubically; for the 1x1..3x3 blocks used here a handful of
/// sweeps suffices and hitting the cap means the input was malformed.
const JACOBI_SWEEP_CAP: usize = 48;

/// Eigenvalues of the Hermitian part closer than this are treated as one
/// cluster when building a joint eigenbasis of a unitary matrix.
const CLUSTER_GAP: f64 = 1e-8;

/// Row-major dense complex matrix. Storage is inline up to 3x3, which keeps
/// the Monte Carlo hot paths free of heap traffic.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: SmallVec<[Complex64; 9]>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        ComplexMatrix {
            n,
            data: smallvec::smallvec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Build from row-major (re, im) pairs; `entries.len()` must be `n*n`.
    pub fn from_entries(n: usize, entries: &[(f64, f64)]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::InvalidParameter(alloc::format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                entries.len()
            )));
        }
        Ok(Self::from_fn(n, |i, j| {
            let (re, im) = entries[i * n + j];
            Complex64::new(re, im)
        }))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    pub fn mul(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        debug_assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let v = out.at(i, j) + a * rhs.at(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        debug_assert_eq!(self.n, rhs.n);
        ComplexMatrix::from_fn(self.n, |i, j| self.at(i, j) + rhs.at(i, j))
    }

    pub fn sub(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        debug_assert_eq!(self.n, rhs.n);
        ComplexMatrix::from_fn(self.n, |i, j| self.at(i, j) - rhs.at(i, j))
    }

    pub fn scale(&self, s: Complex64) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.n, |i, j| self.at(i, j) * s)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.n, |i, j| self.at(j, i).conj())
    }

    pub fn trace(&self) -> Complex64 {
        let mut t = Complex64::new(0.0, 0.0);
        for i in 0..self.n {
            t += self.at(i, i);
        }
        t
    }

    /// Hilbert-Schmidt (Frobenius) norm: sqrt(sum |a_ij|^2) = sqrt(tr A*A).
    pub fn hs_norm(&self) -> f64 {
        math::sqrt(self.hs_norm_sq())
    }

    pub fn hs_norm_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// ||A*A - 1||_HS, zero for exactly unitary matrices.
    pub fn unitarity_deviation(&self) -> f64 {
        let g = self.adjoint().mul(self);
        let mut acc = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                let expect = if i == j { 1.0 } else { 0.0 };
                let d = g.at(i, j) - Complex64::new(expect, 0.0);
                acc += d.norm_sqr();
            }
        }
        math::sqrt(acc)
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> Complex64 {
        let n = self.n;
        let mut m = self.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            let mut pivot = col;
            let mut best = m.at(col, col).norm_sqr();
            for row in (col + 1)..n {
                let mag = m.at(row, col).norm_sqr();
                if mag > best {
                    best = mag;
                    pivot = row;
                }
            }
            if best == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if pivot != col {
                for j in 0..n {
                    let a = m.at(col, j);
                    let b = m.at(pivot, j);
                    m.set(col, j, b);
                    m.set(pivot, j, a);
                }
                det = -det;
            }
            let d = m.at(col, col);
            det *= d;
            for row in (col + 1)..n {
                let factor = m.at(row, col) / d;
                if factor.re == 0.0 && factor.im == 0.0 {
                    continue;
                }
                for j in col..n {
                    let v = m.at(row, j) - factor * m.at(col, j);
                    m.set(row, j, v);
                }
            }
        }
        det
    }

    /// Orthonormal Q factor of the QR decomposition by modified Gram-Schmidt,
    /// run twice for orthogonality down to machine precision even for poorly
    /// conditioned inputs. The R diagonal is kept real positive, which is
    /// exactly the convention that makes Q Haar-distributed when the input
    /// has i.i.d. complex Gaussian entries.
    pub fn gram_schmidt_q(&self) -> Result<ComplexMatrix> {
        let n = self.n;
        let mut cols: Vec<Vec<Complex64>> = (0..n)
            .map(|j| (0..n).map(|i| self.at(i, j)).collect())
            .collect();
        for j in 0..n {
            let original_norm = math::sqrt(cols[j].iter().map(|z| z.norm_sqr()).sum());
            for _pass in 0..2 {
                for i in 0..j {
                    let mut r = Complex64::new(0.0, 0.0);
                    for k in 0..n {
                        r += cols[i][k].conj() * cols[j][k];
                    }
                    for k in 0..n {
                        let v = cols[i][k] * r;
                        cols[j][k] -= v;
                    }
                }
            }
            let norm = math::sqrt(cols[j].iter().map(|z| z.norm_sqr()).sum());
            if norm <= 1e-13 * original_norm {
                return Err(Error::InvalidParameter(alloc::format!(
                    "rank-deficient input to QR (column {j} collapsed)"
                )));
            }
            for k in 0..n {
                cols[j][k] = cols[j][k] / norm;
            }
        }
        Ok(ComplexMatrix::from_fn(n, |i, j| cols[j][i]))
    }

    /// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
    /// rotations. Returns eigenvalues ascending and the matching unitary
    /// eigenvector matrix (eigenvectors in columns).
    pub fn eigen_hermitian(&self) -> Result<(Vec<f64>, ComplexMatrix)> {
        let n = self.n;
        let mut m = self.clone();
        let mut v = ComplexMatrix::identity(n);
        if n > 1 {
            let tol = 1e-14 * (1.0 + self.hs_norm());
            let mut converged = false;
            for _sweep in 0..JACOBI_SWEEP_CAP {
                if off_diagonal_norm(&m) <= tol {
                    converged = true;
                    break;
                }
                for p in 0..n - 1 {
                    for q in p + 1..n {
                        jacobi_rotate(&mut m, &mut v, p, q);
                    }
                }
            }
            if !converged && off_diagonal_norm(&m) > tol {
                return Err(Error::EigenNoConvergence {
                    off_diagonal: off_diagonal_norm(&m),
                });
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            m.at(a, a)
                .re
                .partial_cmp(&m.at(b, b).re)
                .unwrap_or(core::cmp::Ordering::Equal)
        });
        let values = order.iter().map(|&i| m.at(i, i).re).collect();
        let vectors = ComplexMatrix::from_fn(n, |i, j| v.at(i, order[j]));
        Ok((values, vectors))
    }

    /// Joint spectral decomposition of a unitary matrix: U = V D V* with
    /// D = diag(exp(i lambda_k)) and the eigenphases lambda_k ascending in
    /// (-pi, pi] (+pi at the branch boundary). Works by diagonalizing the
    /// Hermitian part, then the anti-Hermitian part inside each near-degenerate
    /// eigenspace; the two commute exactly when the input is normal, and the
    /// residual off-diagonal of V*UV is checked before returning.
    pub fn eigen_unitary(&self) -> Result<(Vec<f64>, ComplexMatrix)> {
        let n = self.n;
        let h = ComplexMatrix::from_fn(n, |i, j| (self.at(i, j) + self.at(j, i).conj()) * 0.5);
        let k = ComplexMatrix::from_fn(n, |i, j| {
            let d = self.at(i, j) - self.at(j, i).conj();
            Complex64::new(d.im * 0.5, -d.re * 0.5)
        });
        let (hvals, mut v) = h.eigen_hermitian()?;

        // Within clusters of the Hermitian spectrum the eigenbasis is not yet
        // pinned down; rotate each cluster to diagonalize the anti-Hermitian
        // part there as well.
        let mut start = 0;
        while start < n {
            let mut end = start + 1;
            while end < n && hvals[end] - hvals[end - 1] <= CLUSTER_GAP {
                end += 1;
            }
            if end - start > 1 {
                let cols: Vec<usize> = (start..end).collect();
                let block = conjugated_block(&k, &v, &cols);
                let (_, w) = block.eigen_hermitian()?;
                apply_block_rotation(&mut v, &cols, &w);
            }
            start = end;
        }

        let d = v.adjoint().mul(self).mul(&v);
        let residual = off_diagonal_norm(&d);
        if residual > 1e-7 * (n as f64) {
            return Err(Error::EigenNoConvergence {
                off_diagonal: residual,
            });
        }

        let mut pairs: Vec<(f64, usize)> = (0..n)
            .map(|j| {
                let z = d.at(j, j);
                (math::atan2(z.im, z.re), j)
            })
            .collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(core::cmp::Ordering::Equal));
        let phases: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let vectors = ComplexMatrix::from_fn(n, |i, j| v.at(i, pairs[j].1));
        Ok((phases, vectors))
    }

    /// exp(i X) for Hermitian X, through the spectral decomposition.
    pub fn exp_i_hermitian(&self) -> Result<ComplexMatrix> {
        let (vals, v) = self.eigen_hermitian()?;
        let n = self.n;
        let mut out = ComplexMatrix::zeros(n);
        for (k, lam) in vals.iter().enumerate() {
            let phase = Complex64::new(math::cos(*lam), math::sin(*lam));
            for i in 0..n {
                let vik = v.at(i, k) * phase;
                for j in 0..n {
                    let add = vik * v.at(j, k).conj();
                    let cur = out.at(i, j) + add;
                    out.set(i, j, cur);
                }
            }
        }
        Ok(out)
    }

    /// Largest entry magnitude of (self - other); convenient in tests.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                let d = (self.at(i, j) - other.at(i, j)).norm();
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += m.at(i, j).norm_sqr();
            }
        }
    }
    math::sqrt(acc)
}

/// One complex Jacobi rotation zeroing the (p, q) entry of the Hermitian
/// working matrix `m`, accumulated into `v`.
fn jacobi_rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let beta = m.at(p, q);
    let b = beta.norm();
    if b == 0.0 {
        return;
    }
    let phase = beta / b; // e^{i phi}
    let alpha = m.at(p, p).re;
    let gamma = m.at(q, q).re;
    let tau = (gamma - alpha) / (2.0 * b);
    let t = if tau >= 0.0 {
        1.0 / (tau + math::sqrt(1.0 + tau * tau))
    } else {
        -1.0 / (-tau + math::sqrt(1.0 + tau * tau))
    };
    let c = 1.0 / math::sqrt(1.0 + t * t);
    let s = t * c;

    // The rotation is J = P G with P = diag(1, e^{-i phi}) on (p, q) and G a
    // real Givens rotation, so J has block [[c, s], [-s e^{-i phi}, c e^{-i phi}]].
    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    let n = m.dim();
    // m <- J* m J
    for k in 0..n {
        let mkp = m.at(k, p);
        let mkq = m.at(k, q);
        m.set(k, p, mkp * jpp + mkq * jqp);
        m.set(k, q, mkp * jpq + mkq * jqq);
    }
    for k in 0..n {
        let mpk = m.at(p, k);
        let mqk = m.at(q, k);
        m.set(p, k, mpk * jpp.conj() + mqk * jqp.conj());
        m.set(q, k, mpk * jpq.conj() + mqk * jqq.conj());
    }
    // Clean the entries the rotation is meant to zero and keep the diagonal
    // exactly real; this stops rounding dust from accumulating over sweeps.
    m.set(p, q, Complex64::new(0.0, 0.0));
    m.set(q, p, Complex64::new(0.0, 0.0));
    let dp = m.at(p, p);
    let dq = m.at(q, q);
    m.set(p, p, Complex64::new(dp.re, 0.0));
    m.set(q, q, Complex64::new(dq.re, 0.0));
    // v <- v J
    for k in 0..n {
        let vkp = v.at(k, p);
        let vkq = v.at(k, q);
        v.set(k, p, vkp * jpp + vkq * jqp);
        v.set(k, q, vkp * jpq + vkq * jqq);
    }
}

/// B_ab = (v_a)* K (v_b) restricted to the given columns of v.
fn conjugated_block(k: &ComplexMatrix, v: &ComplexMatrix, cols: &[usize]) -> ComplexMatrix {
    let n = k.dim();
    let m = cols.len();
    ComplexMatrix::from_fn(m, |a, b| {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            let mut kv = Complex64::new(0.0, 0.0);
            for j in 0..n {
                kv += k.at(i, j) * v.at(j, cols[b]);
            }
            acc += v.at(i, cols[a]).conj() * kv;
        }
        acc
    })
}

/// Replace the selected columns of v by their mix through the small unitary w.
fn apply_block_rotation(v: &mut ComplexMatrix, cols: &[usize], w: &ComplexMatrix) {
    let n = v.dim();
    let m = cols.len();
    for i in 0..n {
        let old: Vec<Complex64> = cols.iter().map(|&c| v.at(i, c)).collect();
        for (b, &cb) in cols.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for a in 0..m {
                acc += old[a] * w.at(a, b);
            }
            v.set(i, cb, acc);
        }
    }
}
