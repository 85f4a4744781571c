//! Unitary structure groups U(N) and SU(N) for small N: validated group
//! elements, orthonormal Lie-algebra bases, exponential/logarithm maps
//! between algebra coefficients and group elements, angular eigenvalues,
//! and exact Haar sampling.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::math;
use crate::matrix::ComplexMatrix;
use crate::{Error, Result};

/// Which compact group a matrix or coefficient vector belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    /// Full unitary group U(N).
    U(usize),
    /// Special unitary group SU(N) (determinant one).
    Su(usize),
}

impl GroupKind {
    /// Matrix order N.
    pub fn order(&self) -> usize {
        match self {
            GroupKind::U(n) | GroupKind::Su(n) => *n,
        }
    }

    /// Real dimension d(N) of the Lie algebra: N^2 for U(N), N^2 - 1 for SU(N).
    pub fn algebra_dim(&self) -> usize {
        match self {
            GroupKind::U(n) => n * n,
            GroupKind::Su(n) => n * n - 1,
        }
    }

    pub fn is_special(&self) -> bool {
        matches!(self, GroupKind::Su(_))
    }

    fn validate(&self) -> Result<()> {
        if self.order() == 0 {
            return Err(Error::InvalidParameter(alloc::format!(
                "unsupported group: order must be positive, got {self:?}"
            )));
        }
        Ok(())
    }
}

impl core::fmt::Display for GroupKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            GroupKind::U(n) => write!(f, "U({n})"),
            GroupKind::Su(n) => write!(f, "SU({n})"),
        }
    }
}

/// A group element: a complex matrix checked against the unitarity invariant
/// ||U*U - 1|| <= 1e-12 N and, for SU(N), |det U - 1| <= 1e-10.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix {
    kind: GroupKind,
    m: ComplexMatrix,
}

/// Enforced on every validated construction.
pub const UNITARITY_TOL_PER_ORDER: f64 = 1e-12;
/// Determinant slack allowed for SU(N) elements.
pub const SU_DET_TOL: f64 = 1e-10;

impl UnitaryMatrix {
    pub fn new(kind: GroupKind, m: ComplexMatrix) -> Result<Self> {
        kind.validate()?;
        let n = kind.order();
        if m.dim() != n {
            return Err(Error::InvalidParameter(alloc::format!(
                "matrix order {} does not match group {kind}",
                m.dim()
            )));
        }
        let deviation = m.unitarity_deviation();
        let tolerance = UNITARITY_TOL_PER_ORDER * n as f64;
        // NaN must fail, hence the negated comparison.
        if !(deviation <= tolerance) {
            return Err(Error::NotUnitary {
                deviation,
                tolerance,
            });
        }
        if kind.is_special() {
            let det_deviation = (m.det() - Complex64::new(1.0, 0.0)).norm();
            if !(det_deviation <= SU_DET_TOL) {
                return Err(Error::NotSpecialUnitary { det_deviation });
            }
        }
        Ok(UnitaryMatrix { kind, m })
    }

    /// Construction without the invariant checks, for internal hot paths
    /// where the result is unitary by construction (products, adjoints,
    /// sampler output). Debug builds still verify.
    pub(crate) fn new_unchecked(kind: GroupKind, m: ComplexMatrix) -> Self {
        debug_assert!(
            m.unitarity_deviation() <= 10.0 * UNITARITY_TOL_PER_ORDER * kind.order() as f64
        );
        UnitaryMatrix { kind, m }
    }

    pub fn identity(kind: GroupKind) -> Result<Self> {
        kind.validate()?;
        Ok(UnitaryMatrix {
            kind,
            m: ComplexMatrix::identity(kind.order()),
        })
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.m.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    /// Group product. Closed: unitarity and unit determinant are preserved.
    pub fn mul(&self, rhs: &UnitaryMatrix) -> UnitaryMatrix {
        debug_assert_eq!(self.kind, rhs.kind);
        UnitaryMatrix {
            kind: self.kind,
            m: self.m.mul(&rhs.m),
        }
    }

    /// Group inverse U* (= U^{-1} for unitary U).
    pub fn adjoint(&self) -> UnitaryMatrix {
        UnitaryMatrix {
            kind: self.kind,
            m: self.m.adjoint(),
        }
    }
}

/// Real coordinates of an algebra element X = sum_a x_a T_a over the
/// orthonormal basis returned by `basis`, so |x|^2 = ||X||^2.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraCoefficients {
    pub kind: GroupKind,
    pub x: Vec<f64>,
}

impl AlgebraCoefficients {
    pub fn new(kind: GroupKind, x: Vec<f64>) -> Result<Self> {
        kind.validate()?;
        if x.len() != kind.algebra_dim() {
            return Err(Error::InvalidParameter(alloc::format!(
                "expected {} coefficients for {kind}, got {}",
                kind.algebra_dim(),
                x.len()
            )));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "non-finite algebra coefficient".into(),
            ));
        }
        Ok(AlgebraCoefficients { kind, x })
    }

    pub fn zero(kind: GroupKind) -> Result<Self> {
        kind.validate()?;
        Ok(AlgebraCoefficients {
            kind,
            x: alloc::vec![0.0; kind.algebra_dim()],
        })
    }

    /// Euclidean length |x|, equal to the Hilbert-Schmidt norm of X.
    pub fn norm(&self) -> f64 {
        math::sqrt(self.x.iter().map(|v| v * v).sum())
    }
}

/// The N angular eigenvalues of a group element, each in (-pi, pi] and
/// sorted ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct AngularSpectrum {
    pub lambda: Vec<f64>,
}

impl AngularSpectrum {
    /// Euclidean length |lambda|.
    pub fn norm(&self) -> f64 {
        math::sqrt(self.lambda.iter().map(|v| v * v).sum())
    }

    pub fn sum(&self) -> f64 {
        self.lambda.iter().sum()
    }
}

/// Hilbert-Schmidt norm [Tr(M*M)]^{1/2}.
pub fn hs_norm(m: &ComplexMatrix) -> f64 {
    m.hs_norm()
}

/// Orthonormal self-adjoint basis of the Lie algebra: Tr(T_a T_b) = delta_ab,
/// traceless for SU. Ordering: symmetric off-diagonal pairs (row-major),
/// antisymmetric off-diagonal pairs, diagonal traceless generators, and for
/// U(N) finally the normalized identity.
pub fn basis(kind: GroupKind) -> Result<Vec<ComplexMatrix>> {
    kind.validate()?;
    let n = kind.order();
    let mut out = Vec::with_capacity(kind.algebra_dim());
    let inv_sqrt2 = 1.0 / math::sqrt(2.0);
    for j in 0..n {
        for k in (j + 1)..n {
            let mut sym = ComplexMatrix::zeros(n);
            sym.set(j, k, Complex64::new(inv_sqrt2, 0.0));
            sym.set(k, j, Complex64::new(inv_sqrt2, 0.0));
            out.push(sym);
        }
    }
    for j in 0..n {
        for k in (j + 1)..n {
            let mut asym = ComplexMatrix::zeros(n);
            asym.set(j, k, Complex64::new(0.0, -inv_sqrt2));
            asym.set(k, j, Complex64::new(0.0, inv_sqrt2));
            out.push(asym);
        }
    }
    // diag(1, ..., 1, -l, 0, ..., 0) / sqrt(l(l+1)) with l leading ones.
    for l in 1..n {
        let norm = 1.0 / math::sqrt((l * (l + 1)) as f64);
        let mut diag = ComplexMatrix::zeros(n);
        for i in 0..l {
            diag.set(i, i, Complex64::new(norm, 0.0));
        }
        diag.set(l, l, Complex64::new(-(l as f64) * norm, 0.0));
        out.push(diag);
    }
    if !kind.is_special() {
        let norm = 1.0 / math::sqrt(n as f64);
        let mut id = ComplexMatrix::zeros(n);
        for i in 0..n {
            id.set(i, i, Complex64::new(norm, 0.0));
        }
        out.push(id);
    }
    debug_assert_eq!(out.len(), kind.algebra_dim());
    Ok(out)
}

/// e^{iX} for X = sum_a x_a T_a. For SU kinds X is traceless by basis
/// construction, so the result has determinant one.
pub fn exp_map(coeffs: &AlgebraCoefficients) -> Result<UnitaryMatrix> {
    let gens = basis(coeffs.kind)?;
    if coeffs.x.len() != gens.len() {
        return Err(Error::InvalidParameter(alloc::format!(
            "expected {} coefficients for {}, got {}",
            gens.len(),
            coeffs.kind,
            coeffs.x.len()
        )));
    }
    if coeffs.x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(
            "non-finite algebra coefficient".into(),
        ));
    }
    let n = coeffs.kind.order();
    let mut x = ComplexMatrix::zeros(n);
    for (c, t) in coeffs.x.iter().zip(gens.iter()) {
        x = x.add(&t.scale(Complex64::new(*c, 0.0)));
    }
    let u = x.exp_i_hermitian()?;
    UnitaryMatrix::new(coeffs.kind, u)
}

/// Principal logarithm -i ln U as a self-adjoint matrix, defined when every
/// eigenphase is strictly inside (-pi, pi).
pub(crate) fn principal_log(u: &UnitaryMatrix) -> Result<ComplexMatrix> {
    let (phases, v) = u.matrix().eigen_unitary()?;
    for &phase in &phases {
        if core::f64::consts::PI - math::abs(phase) < 1e-12 {
            return Err(Error::BranchCutEigenphase { phase });
        }
    }
    let n = u.order();
    let mut x = ComplexMatrix::zeros(n);
    for (k, lam) in phases.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                let add = v.at(i, k) * *lam * v.at(j, k).conj();
                let cur = x.at(i, j) + add;
                x.set(i, j, cur);
            }
        }
    }
    Ok(x)
}

/// Algebra coordinates of the principal logarithm. For SU kinds the
/// eigenphase sum must vanish (the principal log must land in the traceless
/// algebra); an element whose principal phases sum to a nonzero multiple of
/// 2 pi is reported as an error rather than silently re-branched.
pub fn log_map(u: &UnitaryMatrix) -> Result<AlgebraCoefficients> {
    let mut x = principal_log(u)?;
    let n = u.order();
    if u.kind().is_special() {
        let phase_sum = x.trace().re;
        if math::abs(phase_sum) > 1e-8 {
            return Err(Error::LogOutsideAlgebra { phase_sum });
        }
        // Remove the rounding-level trace so the SU coefficients are exact.
        let shift = phase_sum / n as f64;
        for i in 0..n {
            let d = x.at(i, i) - Complex64::new(shift, 0.0);
            x.set(i, i, d);
        }
    }
    let gens = basis(u.kind())?;
    let coeffs = gens
        .iter()
        .map(|t| t.mul(&x).trace().re)
        .collect::<Vec<f64>>();
    Ok(AlgebraCoefficients {
        kind: u.kind(),
        x: coeffs,
    })
}

/// Eigenphases in (-pi, pi], ascending (+pi kept at the branch boundary).
pub fn angular_eigenvalues(u: &UnitaryMatrix) -> Result<AngularSpectrum> {
    let (phases, _) = u.matrix().eigen_unitary()?;
    Ok(AngularSpectrum { lambda: phases })
}

/// Exact Haar sample: orthonormalize a matrix of i.i.d. standard complex
/// Gaussian entries. The Gram-Schmidt convention (positive real R diagonal)
/// makes Q exactly Haar on U(N); an SU(N) sample is the U(N) sample times a
/// uniformly random N-th root of det^{-1}.
pub fn haar_sample<R: Rng + ?Sized>(kind: GroupKind, rng: &mut R) -> Result<UnitaryMatrix> {
    kind.validate()?;
    let n = kind.order();
    let g = ComplexMatrix::from_fn(n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    });
    let q = g.gram_schmidt_q()?;
    if !kind.is_special() {
        return Ok(UnitaryMatrix::new_unchecked(kind, q));
    }
    let det = q.det();
    let root_index = rng.gen_range(0..n as u32);
    let angle = (-math::atan2(det.im, det.re) + core::f64::consts::TAU * root_index as f64)
        / n as f64;
    let phase = Complex64::new(math::cos(angle), math::sin(angle));
    Ok(UnitaryMatrix::new_unchecked(kind, q.scale(phase)))
}
