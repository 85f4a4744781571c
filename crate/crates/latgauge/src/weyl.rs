//! Weyl integration formula machinery: class-function integrals over U(N)
//! and SU(N) reduced to eigenphase quadrature with the squared-Vandermonde
//! density, the single-bond partition function z(c), the small-field
//! restricted integral that powers the lower bound, and the truncated GUE
//! integral I(u).

use alloc::vec::Vec;


use crate::group::{self, AngularSpectrum, GroupKind};
use crate::math;
use crate::mc::{self, McEstimate};
use crate::quad;
use crate::{Error, Result};

/// Points per dimension for eigenphase quadrature.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadratureGrid {
    points_per_dim: usize,
}

impl QuadratureGrid {
    pub const MIN_POINTS: usize = 8;

    pub fn new(points_per_dim: usize) -> Result<Self> {
        if points_per_dim < Self::MIN_POINTS {
            return Err(Error::InvalidParameter(alloc::format!(
                "quadrature grid needs at least {} points per dimension, got {points_per_dim}",
                Self::MIN_POINTS
            )));
        }
        Ok(QuadratureGrid { points_per_dim })
    }

    /// Defaults that hold quadrature error below 1e-10 for smooth integrands
    /// at moderate coupling while keeping N = 3 tensor grids affordable.
    pub fn default_for(kind: GroupKind) -> Self {
        let points_per_dim = if kind.order() <= 2 { 256 } else { 96 };
        QuadratureGrid { points_per_dim }
    }

    pub fn points_per_dim(&self) -> usize {
        self.points_per_dim
    }

    pub fn doubled(&self) -> Self {
        QuadratureGrid {
            points_per_dim: self.points_per_dim * 2,
        }
    }
}

/// The Weyl measure normalization 1 / ((2 pi)^N N!).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeylNormalization {
    n: usize,
}

impl WeylNormalization {
    pub fn for_order(n: usize) -> Self {
        WeylNormalization { n }
    }

    pub fn value(&self) -> f64 {
        let two_pi = core::f64::consts::TAU;
        1.0 / (math::powf(two_pi, self.n as f64) * math::factorial(self.n))
    }
}

/// Small-field cutoff gamma = 1/N restricting each eigenphase.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmallFieldCutoff {
    gamma: f64,
}

impl SmallFieldCutoff {
    pub fn for_order(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("unsupported group: order 0".into()));
        }
        Ok(SmallFieldCutoff {
            gamma: 1.0 / n as f64,
        })
    }

    /// A custom cutoff in (0, 1]; the canonical choice is 1/N.
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(Error::InvalidParameter(alloc::format!(
                "small-field cutoff must lie in (0, 1], got {gamma}"
            )));
        }
        Ok(SmallFieldCutoff { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// Squared-Vandermonde eigenphase density prod_{j<k} 2 [1 - cos(lambda_j -
/// lambda_k)] on a raw phase vector (symmetric, so ordering is irrelevant).
pub fn vandermonde_density_of(lambda: &[f64]) -> f64 {
    let mut density = 1.0;
    for j in 0..lambda.len() {
        for k in (j + 1)..lambda.len() {
            density *= 2.0 * (1.0 - math::cos(lambda[j] - lambda[k]));
        }
    }
    density
}

/// Density of an angular spectrum.
pub fn vandermonde_density(spectrum: &AngularSpectrum) -> f64 {
    vandermonde_density_of(&spectrum.lambda)
}

/// Odometer over a tensor grid: calls `visit` with one point per dimension
/// selection. `axes` holds (nodes, weights) per dimension.
fn tensor_accumulate<F>(axes: &[(Vec<f64>, Vec<f64>)], mut visit: F) -> Result<f64>
where
    F: FnMut(&[f64]) -> f64,
{
    let dims = axes.len();
    if dims == 0 {
        let v = visit(&[]);
        if !v.is_finite() {
            return Err(Error::NonFiniteIntegrand);
        }
        return Ok(v);
    }
    let mut idx = alloc::vec![0usize; dims];
    let mut point = alloc::vec![0.0f64; dims];
    let mut total = 0.0;
    'outer: loop {
        let mut weight = 1.0;
        for (axis, &i) in idx.iter().enumerate() {
            point[axis] = axes[axis].0[i];
            weight *= axes[axis].1[i];
        }
        let v = visit(&point);
        if !v.is_finite() {
            return Err(Error::NonFiniteIntegrand);
        }
        total += weight * v;
        // Advance the odometer, last axis fastest.
        let mut axis = dims;
        loop {
            if axis == 0 {
                break 'outer;
            }
            axis -= 1;
            idx[axis] += 1;
            if idx[axis] < axes[axis].0.len() {
                break;
            }
            idx[axis] = 0;
        }
    }
    Ok(total)
}

/// Normalized class-function integral over the group: for U(N) the Weyl
/// formula N(N) * integral of f(lambda) rho(lambda) over the torus; for
/// SU(N) the eigenphase-sum constraint is resolved by eliminating lambda_N =
/// -(lambda_1 + ... + lambda_{N-1}) (wrapped) with a 2 pi delta factor.
/// `f` receives all N eigenphases.
pub fn class_integral<F>(kind: GroupKind, grid: QuadratureGrid, f: F) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
{
    let n = kind.order();
    if n == 0 {
        return Err(Error::InvalidParameter("unsupported group: order 0".into()));
    }
    let norm = WeylNormalization::for_order(n).value();
    let (points, h) = quad::periodic_points(grid.points_per_dim());
    let weights = alloc::vec![h; points.len()];
    let axis = (points, weights);
    match kind {
        GroupKind::U(_) => {
            let axes = alloc::vec![axis; n];
            let total = tensor_accumulate(&axes, |lambda| {
                f(lambda) * vandermonde_density_of(lambda)
            })?;
            Ok(norm * total)
        }
        GroupKind::Su(_) => {
            let axes = alloc::vec![axis; n - 1];
            let mut full = alloc::vec![0.0f64; n];
            let total = tensor_accumulate(&axes, |reduced| {
                full[..n - 1].copy_from_slice(reduced);
                full[n - 1] = math::wrap_angle(-reduced.iter().sum::<f64>());
                f(&full) * vandermonde_density_of(&full)
            })?;
            Ok(norm * core::f64::consts::TAU * total)
        }
    }
}

/// Single-bond single-plaquette partition function
/// z(c) = E_Haar[e^{-c ||1-g||^2}] = N(N) * integral of
/// e^{-2c sum (1 - cos lambda_k)} rho(lambda).
pub fn single_plaquette_z(c: f64, kind: GroupKind, grid: QuadratureGrid) -> Result<f64> {
    if !(c >= 0.0) {
        return Err(Error::InvalidParameter(alloc::format!(
            "coupling prefactor must be nonnegative, got {c}"
        )));
    }
    if kind.order() == 0 {
        return Err(Error::InvalidParameter("unsupported group: order 0".into()));
    }
    if c == 0.0 {
        // Exact by Haar normalization; avoids returning 1 +/- quadrature dust.
        return Ok(1.0);
    }
    class_integral(kind, grid, |lambda| {
        let action: f64 = lambda.iter().map(|l| 2.0 * (1.0 - math::cos(*l))).sum();
        math::exp(-c * action)
    })
}

/// Composite Gauss-Legendre axis on [lo, hi] split at zero, clustering nodes
/// where the small-field Gaussian weight concentrates.
fn split_axis(lo: f64, hi: f64, points: usize) -> (Vec<f64>, Vec<f64>) {
    debug_assert!(lo <= 0.0 && 0.0 <= hi);
    let per_panel = (points / 2).max(QuadratureGrid::MIN_POINTS);
    let (mut nodes, mut weights) = quad::gauss_legendre_on(lo, 0.0, per_panel);
    let (right_nodes, right_weights) = quad::gauss_legendre_on(0.0, hi, per_panel);
    nodes.extend(right_nodes);
    weights.extend(right_weights);
    (nodes, weights)
}

/// Restricted small-field integral
/// z-check = N(N) * integral over |lambda_k| < gamma of
/// e^{-2 c (d-1) C^2 sum lambda_k^2} rho(lambda), with C the quadratic
/// plaquette-action constant. For SU(N) the eigenphase-sum constraint holds
/// exactly inside the small-field box (no wrapping), and the admissible
/// region is the slab |lambda_1 + ... + lambda_{N-1}| < gamma.
pub fn restricted_z(
    c: f64,
    cutoff: SmallFieldCutoff,
    d: usize,
    kind: GroupKind,
    grid: QuadratureGrid,
) -> Result<f64> {
    if !(c >= 0.0) {
        return Err(Error::InvalidParameter(alloc::format!(
            "coupling prefactor must be nonnegative, got {c}"
        )));
    }
    if !(2..=4).contains(&d) {
        return Err(Error::InvalidParameter(alloc::format!(
            "dimension must be 2, 3, or 4, got {d}"
        )));
    }
    let n = kind.order();
    if n == 0 {
        return Err(Error::InvalidParameter("unsupported group: order 0".into()));
    }
    let gamma = cutoff.gamma();
    let big_c = math::small_field_constant(n);
    let rate = 2.0 * c * (d as f64 - 1.0) * big_c * big_c;
    let norm = WeylNormalization::for_order(n).value();
    let weight_fn = |lambda: &[f64]| {
        let sum_sq: f64 = lambda.iter().map(|l| l * l).sum();
        math::exp(-rate * sum_sq) * vandermonde_density_of(lambda)
    };
    match kind {
        GroupKind::U(_) => {
            let axis = split_axis(-gamma, gamma, grid.points_per_dim());
            let axes = alloc::vec![axis; n];
            let total = tensor_accumulate(&axes, weight_fn)?;
            Ok(norm * total)
        }
        GroupKind::Su(_) => match n {
            1 => Ok(1.0),
            2 => {
                // lambda_2 = -lambda_1; |lambda_2| < gamma is automatic.
                let axis = split_axis(-gamma, gamma, grid.points_per_dim());
                let total = tensor_accumulate(&[axis], |reduced| {
                    weight_fn(&[reduced[0], -reduced[0]])
                })?;
                Ok(norm * core::f64::consts::TAU * total)
            }
            3 => {
                // Hexagonal region: |lambda_1|, |lambda_2|, |lambda_1 +
                // lambda_2| all below gamma; inner bounds depend on the outer
                // variable.
                let per_dim = grid.points_per_dim();
                let outer = split_axis(-gamma, gamma, per_dim);
                let mut total = 0.0;
                for (l1, w1) in outer.0.iter().zip(outer.1.iter()) {
                    let lo = (-gamma).max(-gamma - l1);
                    let hi = gamma.min(gamma - l1);
                    if lo >= hi {
                        continue;
                    }
                    let inner = split_axis(lo.min(0.0), hi.max(0.0), per_dim);
                    for (l2, w2) in inner.0.iter().zip(inner.1.iter()) {
                        if *l2 < lo || *l2 > hi {
                            continue;
                        }
                        let l3 = -l1 - l2;
                        let v = weight_fn(&[*l1, *l2, l3]);
                        if !v.is_finite() {
                            return Err(Error::NonFiniteIntegrand);
                        }
                        total += w1 * w2 * v;
                    }
                }
                Ok(norm * core::f64::consts::TAU * total)
            }
            _ => Err(Error::InvalidParameter(alloc::format!(
                "restricted integral for SU({n}) is not supported (N <= 3 only)"
            ))),
        },
    }
}

/// Closed form I(infinity) = (2 pi)^{-N/2} prod_{j=1..N-1} j!.
pub fn gue_integral_infinite(n: usize) -> f64 {
    let mut product = 1.0;
    for j in 1..n {
        product *= math::factorial(j);
    }
    product * math::powf(core::f64::consts::TAU, -(n as f64) / 2.0)
}

/// Truncated GUE-normalization integral
/// I(u) = N(N) * integral over [-u, u]^N of e^{-|y|^2 / 2} prod_{j<k}
/// (y_j - y_k)^2. Pass `f64::INFINITY` for the closed-form limit.
pub fn gue_integral(u: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("unsupported group: order 0".into()));
    }
    if u.is_nan() || u < 0.0 {
        return Err(Error::InvalidParameter(alloc::format!(
            "truncation radius must be nonnegative, got {u}"
        )));
    }
    if u.is_infinite() {
        return Ok(gue_integral_infinite(n));
    }
    if u == 0.0 {
        return Ok(0.0);
    }
    // Gauss-Legendre resolves e^{-y^2/2} times a polynomial; the node count
    // grows with the interval so wide truncations stay spectrally accurate.
    let points = (64 + 8 * ((u * u) / 8.0) as usize).min(256);
    let axis = quad::gauss_legendre_on(-u, u, points);
    let axes = alloc::vec![axis; n];
    let norm = WeylNormalization::for_order(n).value();
    let total = tensor_accumulate(&axes, |y| {
        let gauss: f64 = y.iter().map(|v| v * v).sum();
        let mut vdm = 1.0;
        for j in 0..n {
            for k in (j + 1)..n {
                let diff = y[j] - y[k];
                vdm *= diff * diff;
            }
        }
        math::exp(-0.5 * gauss) * vdm
    })?;
    Ok(norm * total)
}

/// Agreement report between the Haar Monte Carlo and eigenphase quadrature
/// representations of z(c).
#[derive(Clone, Copy, Debug)]
pub struct CrosscheckReport {
    pub mc: McEstimate,
    pub quadrature: f64,
    pub sigma_distance: f64,
}

/// Estimates E_Haar[e^{-c ||1 - U||^2}] by direct sampling and compares with
/// the quadrature value of z(c).
pub fn weyl_haar_crosscheck(
    kind: GroupKind,
    c: f64,
    n_samples: u64,
    seed: u64,
    grid: QuadratureGrid,
) -> Result<CrosscheckReport> {
    if !(c >= 0.0) {
        return Err(Error::InvalidParameter(alloc::format!(
            "coupling prefactor must be nonnegative, got {c}"
        )));
    }
    let n = kind.order();
    let quadrature = single_plaquette_z(c, kind, grid)?;
    let mut failure: Option<Error> = None;
    let mc = mc::estimate_serial(n_samples, seed, |rng| {
        if failure.is_some() {
            return 0.0;
        }
        match group::haar_sample(kind, rng) {
            Ok(u) => {
                // ||1 - U||^2 = 2N - 2 Re Tr U.
                let action = 2.0 * n as f64 - 2.0 * u.matrix().trace().re;
                math::exp(-c * action)
            }
            Err(e) => {
                failure = Some(e);
                0.0
            }
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    let sigma_distance = mc.sigma_from(quadrature);
    Ok(CrosscheckReport {
        mc,
        quadrature,
        sigma_distance,
    })
}
