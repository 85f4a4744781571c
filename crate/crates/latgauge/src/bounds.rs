//! Analytic stability machinery: scalar cosine comparisons, the small-field
//! quadratic bound on the plaquette action, upper and lower bounds on the
//! normalized partition function, a Monte Carlo feasibility screen, and
//! end-to-end certificates that sandwich a Monte Carlo estimate between the
//! two analytic bounds.

use alloc::format;

use crate::group::{self, AlgebraCoefficients, GroupKind};
use crate::lattice;
use crate::math;
use crate::mc::McEstimate;
use crate::quad;
use crate::weyl::{self, QuadratureGrid, SmallFieldCutoff, WeylNormalization};
use crate::wilson::{self, ActionParams};
use crate::{Error, Result};

const PI: f64 = core::f64::consts::PI;

/// Widest samples-to-mean relative error the Monte Carlo route will accept.
pub const MAX_PREDICTED_REL_ERR: f64 = 1.0 / 3.0;

/// Truncation radius beyond which the Gaussian spectral integrals have
/// absorbed all their mass at double precision.
const SPECTRAL_RADIUS_CAP: f64 = 16.0;

/// Scalar plaquette action 2(1 - cos theta) against its quadratic minorant
/// 4 theta^2 / pi^2, valid strictly inside (-pi, pi).
pub fn cosine_lower(theta: f64) -> Result<(f64, f64)> {
    if !(math::abs(theta) < PI) {
        return Err(Error::InvalidParameter(format!(
            "quadratic minorant requires |theta| < pi, got {theta}"
        )));
    }
    Ok((2.0 * (1.0 - math::cos(theta)), 4.0 * theta * theta / (PI * PI)))
}

/// Scalar plaquette action 2(1 - cos theta) against its quadratic majorant
/// theta^2, valid on the whole real line.
pub fn cosine_upper(theta: f64) -> (f64, f64) {
    (2.0 * (1.0 - math::cos(theta)), theta * theta)
}

/// The constant C = 2(1 + 2 N^{3/2}) controlling the quadratic plaquette
/// bound C^2 sum_j |x^j|^2 inside the small-field region |x^j| < N^{-1/2}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmallFieldConstant {
    order: usize,
    value: f64,
}

impl SmallFieldConstant {
    pub fn for_order(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidParameter("unsupported group: order 0".into()));
        }
        Ok(SmallFieldConstant {
            order,
            value: math::small_field_constant(order),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    /// Radius N^{-1/2} of the coefficient-norm ball on which the quadratic
    /// bound is proved.
    pub fn field_limit(&self) -> f64 {
        1.0 / math::sqrt(self.order as f64)
    }
}

/// One plaquette action together with its two analytic caps: the polynomial
/// form 4 (1 + N^2 s + N^4 q) q in s = sum_j |x^j| and q = sum_j |x^j|^2, and
/// the quadratic form C^2 q that majorizes it on the small-field ball.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmallFieldBound {
    pub action: f64,
    pub polynomial: f64,
    pub quadratic: f64,
}

/// Evaluates the plaquette action of the holonomy e^{iX_1} e^{iX_2}
/// (e^{iX_3})^dagger (e^{iX_4})^dagger along with its polynomial and
/// quadratic caps. Every link must satisfy |x^j| < N^{-1/2}.
pub fn small_field_plaquette_bound(links: &[AlgebraCoefficients; 4]) -> Result<SmallFieldBound> {
    let kind = links[0].kind;
    if links.iter().any(|l| l.kind != kind) {
        return Err(Error::InvalidParameter(
            "all four link fields must share one group".into(),
        ));
    }
    let constant = SmallFieldConstant::for_order(kind.order())?;
    let limit = constant.field_limit();
    let mut norm_sum = 0.0;
    let mut norm_sq_sum = 0.0;
    for link in links {
        let norm = link.norm();
        if !(norm < limit) {
            return Err(Error::SmallFieldViolation { norm, limit });
        }
        norm_sum += norm;
        norm_sq_sum += norm * norm;
    }

    let u1 = group::exp_map(&links[0])?;
    let u2 = group::exp_map(&links[1])?;
    let u3 = group::exp_map(&links[2])?;
    let u4 = group::exp_map(&links[3])?;
    let holonomy = u1.mul(&u2).mul(&u3.adjoint()).mul(&u4.adjoint());
    let action = wilson::plaquette_action(&holonomy);

    let n2 = (kind.order() * kind.order()) as f64;
    let polynomial = 4.0 * (1.0 + n2 * norm_sum + n2 * n2 * norm_sq_sum) * norm_sq_sum;
    let quadratic = constant.value * constant.value * norm_sq_sum;
    Ok(SmallFieldBound {
        action,
        polynomial,
        quadratic,
    })
}

/// Closed-form constant in front of the truncated Gaussian spectral integral
/// of the lower bound: N(N) (4/pi^2)^{N(N-1)/2} [(d-1)^{1/2} 2 C gamma]^{-d(N)}
/// with gamma = 1/N. Reported for comparison; certificates use quadrature.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RestrictedGaussianConstant {
    kind: GroupKind,
    dimension: usize,
    value: f64,
}

impl RestrictedGaussianConstant {
    pub fn new(kind: GroupKind, dimension: usize) -> Result<Self> {
        if !(2..=4).contains(&dimension) {
            return Err(Error::InvalidParameter(format!(
                "dimension must be 2, 3, or 4, got {dimension}"
            )));
        }
        let n = kind.order();
        let gamma = SmallFieldCutoff::for_order(n)?.gamma();
        let c_n = math::small_field_constant(n);
        let pairs = (n * (n - 1) / 2) as f64;
        let bracket = math::sqrt((dimension - 1) as f64) * 2.0 * c_n * gamma;
        let value = WeylNormalization::for_order(n).value()
            * math::powf(4.0 / (PI * PI), pairs)
            * math::powf(bracket, -(kind.algebra_dim() as f64));
        Ok(RestrictedGaussianConstant {
            kind,
            dimension,
            value,
        })
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn value(&self) -> f64 {
        self.value
    }
}

/// Truncated Gaussian spectral integral of the traceless upper-bound route:
/// the (N-1)-variable integral of e^{-|y|^2/2} prod_{j<k<N} (y_j - y_k)^2
/// prod_{j<N} (y_j + s)^2 with s = y_1 + ... + y_{N-1}, over [-u, u]^{N-1}.
/// Pass infinity for the saturated value.
fn traceless_spectral_integral(u: f64, n: usize) -> Result<f64> {
    if !(2..=3).contains(&n) {
        return Err(Error::InvalidParameter(format!(
            "traceless spectral integral is implemented for orders 2 and 3, got {n}"
        )));
    }
    if u.is_nan() || u < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "truncation radius must be nonnegative, got {u}"
        )));
    }
    let u = if u.is_infinite() {
        SPECTRAL_RADIUS_CAP
    } else {
        u.min(SPECTRAL_RADIUS_CAP)
    };
    if u == 0.0 {
        return Ok(0.0);
    }
    let points = (64 + 8 * ((u * u) / 8.0) as usize).min(256);
    let (nodes, weights) = quad::gauss_legendre_on(-u, u, points);
    if n == 2 {
        let mut total = 0.0;
        for (y, w) in nodes.iter().zip(weights.iter()) {
            total += w * math::exp(-y * y / 2.0) * 4.0 * y * y;
        }
        return Ok(total);
    }
    let mut total = 0.0;
    for (y1, w1) in nodes.iter().zip(weights.iter()) {
        for (y2, w2) in nodes.iter().zip(weights.iter()) {
            let gauss = math::exp(-(y1 * y1 + y2 * y2) / 2.0);
            let spread = (y1 - y2) * (y1 - y2);
            let t1 = 2.0 * y1 + y2;
            let t2 = y1 + 2.0 * y2;
            total += w1 * w2 * gauss * spread * t1 * t1 * t2 * t2;
        }
    }
    Ok(total)
}

/// Per-degree-of-freedom upper bound on ln Z^n: the pair (finite truncation,
/// saturated truncation). The normalization prefactor cancels the coupling
/// power exactly, so both values depend on the coupling only through the
/// truncation radius, and the saturated value not at all.
fn upper_per_dof(kind: GroupKind, c: f64) -> Result<(f64, f64, f64)> {
    let n = kind.order();
    let dn = kind.algebra_dim() as f64;
    if kind.is_special() {
        let u = 2.0 * math::sqrt(c);
        let prefactor = math::ln(core::f64::consts::TAU * WeylNormalization::for_order(n).value())
            + dn * math::ln(PI / 2.0);
        let finite = (prefactor + math::ln(traceless_spectral_integral(u, n)?)) / dn;
        let saturated =
            (prefactor + math::ln(traceless_spectral_integral(f64::INFINITY, n)?)) / dn;
        return Ok((finite, saturated, u));
    }
    let u = 2.0 * math::sqrt(2.0 * c);
    let prefactor = dn * math::ln(PI / (2.0 * math::sqrt(2.0)));
    let finite = (prefactor + math::ln(weyl::gue_integral(u, n)?)) / dn;
    let saturated = (prefactor + math::ln(weyl::gue_integral_infinite(n))) / dn;
    Ok((finite, saturated, u))
}

/// Upper bound on the normalized log partition function. `per_dof` is the
/// bound divided by d(N) Lambda_r and is computed once, independent of the
/// volume, so per-degree columns collapse bit-for-bit across lattice sizes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UpperStabilityBound {
    pub per_dof: f64,
    pub uniform_per_dof: f64,
    pub truncation_radius: f64,
    pub ln_zn: f64,
    pub ln_zn_uniform: f64,
}

pub fn upper_bound_ln_zn(params: &ActionParams, retained: usize) -> Result<UpperStabilityBound> {
    let c = positive_prefactor(params)?;
    let dn = positive_algebra_dim(params.kind())?;
    let (per_dof, uniform_per_dof, truncation_radius) = upper_per_dof(params.kind(), c)?;
    let dofs = (dn * retained) as f64;
    Ok(UpperStabilityBound {
        per_dof,
        uniform_per_dof,
        truncation_radius,
        ln_zn: per_dof * dofs,
        ln_zn_uniform: uniform_per_dof * dofs,
    })
}

/// Lower bound on the normalized log partition function via quadrature of
/// the restricted single-bond integral; the closed-form constant route is
/// evaluated at the reference coupling (a = 1, g = g_0) and reported only.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LowerStabilityBound {
    pub per_dof: f64,
    pub closed_form_per_dof: f64,
    pub ln_restricted: f64,
    pub ln_zn: f64,
}

pub fn lower_bound_ln_zn(params: &ActionParams, retained: usize) -> Result<LowerStabilityBound> {
    let c = positive_prefactor(params)?;
    let dn = positive_algebra_dim(params.kind())?;
    let kind = params.kind();
    let n = kind.order();
    let d = params.spec().dimension();
    let cutoff = SmallFieldCutoff::for_order(n)?;
    let grid = QuadratureGrid::default_for(kind);
    let restricted = weyl::restricted_z(c, cutoff, d, kind, grid)?;
    if !(restricted > 0.0) {
        return Err(Error::NonFiniteIntegrand);
    }
    let ln_restricted = math::ln(restricted);
    let per_dof = 0.5 * math::ln(c) + ln_restricted / dn as f64;

    let constant = RestrictedGaussianConstant::new(kind, d)?;
    let reference_c = 1.0 / params.g0sq();
    let radius = 2.0 * math::sqrt(reference_c * (d - 1) as f64)
        * math::small_field_constant(n)
        * cutoff.gamma();
    let closed_form_per_dof =
        math::ln(constant.value() * weyl::gue_integral(radius, n)?) / dn as f64;

    let dofs = (dn * retained) as f64;
    Ok(LowerStabilityBound {
        per_dof,
        closed_form_per_dof,
        ln_restricted,
        ln_zn: per_dof * dofs,
    })
}

/// Screening report for the plain Monte Carlo estimator. The second-moment
/// ratio z(2c)/z(c)^2 per retained bond is exact under the two-dimensional
/// factorization and serves as a screening model in higher dimensions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McFeasibility {
    pub ln_moment_ratio: f64,
    pub predicted_rel_err: f64,
    pub required_samples: f64,
    pub feasible: bool,
}

pub fn mc_feasibility(params: &ActionParams, n_samples: u64) -> Result<McFeasibility> {
    if n_samples == 0 {
        return Err(Error::InvalidParameter(
            "sample count must be positive".into(),
        ));
    }
    let retained = lattice::retained_count(params.spec()) as f64;
    let kind = params.kind();
    let c = params.prefactor();
    let grid = QuadratureGrid::default_for(kind);
    let ln_moment_ratio = if c == 0.0 {
        0.0
    } else {
        let z_single = weyl::single_plaquette_z(c, kind, grid)?;
        let z_double = weyl::single_plaquette_z(2.0 * c, kind, grid)?;
        if !(z_single > 0.0 && z_double > 0.0) {
            return Err(Error::NonFiniteIntegrand);
        }
        retained * (math::ln(z_double) - 2.0 * math::ln(z_single))
    };
    let excess = math::exp(ln_moment_ratio) - 1.0;
    let predicted_rel_err = math::sqrt(excess / n_samples as f64);
    let needed = excess / (MAX_PREDICTED_REL_ERR * MAX_PREDICTED_REL_ERR);
    let required_samples = if needed <= 1.0 { 1.0 } else { math::ceil(needed) };
    Ok(McFeasibility {
        ln_moment_ratio,
        predicted_rel_err,
        feasible: predicted_rel_err <= MAX_PREDICTED_REL_ERR,
        required_samples,
    })
}

/// How a certificate obtained its partition-function estimate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EstimateRoute {
    /// Monte Carlo over the non-tree bonds in the enhanced temporal gauge.
    GaugeFixedMc,
    /// Exact single-bond factorization, available in two dimensions only.
    ExactFactorization,
}

impl core::fmt::Display for EstimateRoute {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            EstimateRoute::GaugeFixedMc => write!(f, "gauge-fixed-mc"),
            EstimateRoute::ExactFactorization => write!(f, "exact-factorization"),
        }
    }
}

/// Picks the estimate route for the given budget: Monte Carlo when the
/// predicted relative error is acceptable, the exact factorization when it
/// is not but the dimension permits it, an error otherwise.
pub fn select_route(params: &ActionParams, n_samples: u64) -> Result<EstimateRoute> {
    positive_prefactor(params)?;
    let feasibility = mc_feasibility(params, n_samples)?;
    if feasibility.feasible {
        return Ok(EstimateRoute::GaugeFixedMc);
    }
    if params.spec().dimension() == 2 {
        return Ok(EstimateRoute::ExactFactorization);
    }
    Err(Error::McGuard {
        predicted_rel_err: feasibility.predicted_rel_err,
        samples: n_samples,
        required_samples: feasibility.required_samples,
    })
}

/// One sandwich verdict: an estimate of ln Z^n framed by the analytic lower
/// and upper bounds, passing when it sits inside the bracket widened by
/// three standard errors of the log estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StabilityCertificate {
    pub params: ActionParams,
    pub retained: usize,
    pub route: EstimateRoute,
    pub n_samples: u64,
    pub seed: u64,
    pub ln_zn_mc: f64,
    pub sigma_ln: f64,
    pub ln_lower: f64,
    pub ln_upper: f64,
    pub lower_per_dof: f64,
    pub upper_per_dof: f64,
    pub pass: bool,
}

fn assemble_certificate(
    params: &ActionParams,
    route: EstimateRoute,
    n_samples: u64,
    seed: u64,
    ln_zn_mc: f64,
    sigma_ln: f64,
) -> Result<StabilityCertificate> {
    let retained = lattice::retained_count(params.spec());
    let lower = lower_bound_ln_zn(params, retained)?;
    let upper = upper_bound_ln_zn(params, retained)?;
    let pass = lower.ln_zn - 3.0 * sigma_ln <= ln_zn_mc && ln_zn_mc <= upper.ln_zn + 3.0 * sigma_ln;
    Ok(StabilityCertificate {
        params: *params,
        retained,
        route,
        n_samples,
        seed,
        ln_zn_mc,
        sigma_ln,
        ln_lower: lower.ln_zn,
        ln_upper: upper.ln_zn,
        lower_per_dof: lower.per_dof,
        upper_per_dof: upper.per_dof,
        pass,
    })
}

/// Wraps an externally computed gauge-fixed Monte Carlo estimate of the
/// partition function into a certificate; the estimate must come from the
/// sampler of `wilson` with the same parameters.
pub fn certificate_from_estimate(
    params: &ActionParams,
    estimate: &McEstimate,
) -> Result<StabilityCertificate> {
    let c = positive_prefactor(params)?;
    let dn = positive_algebra_dim(params.kind())?;
    if !(estimate.mean > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "partition estimate must be positive, got {}",
            estimate.mean
        )));
    }
    let retained = lattice::retained_count(params.spec());
    let dofs = (dn * retained) as f64;
    let ln_zn_mc = 0.5 * dofs * math::ln(c) + math::ln(estimate.mean);
    let sigma_ln = estimate.std_error / estimate.mean;
    assemble_certificate(
        params,
        EstimateRoute::GaugeFixedMc,
        estimate.n_samples,
        estimate.seed,
        ln_zn_mc,
        sigma_ln,
    )
}

/// Certificate along the exact two-dimensional factorization Z = z(c)^{L_r};
/// the estimate carries no statistical error.
pub fn certificate_exact(params: &ActionParams) -> Result<StabilityCertificate> {
    let c = positive_prefactor(params)?;
    let dn = positive_algebra_dim(params.kind())?;
    if params.spec().dimension() != 2 {
        return Err(Error::InvalidParameter(format!(
            "the exact factorization route requires dimension 2, got {}",
            params.spec().dimension()
        )));
    }
    let grid = QuadratureGrid::default_for(params.kind());
    let z_single = weyl::single_plaquette_z(c, params.kind(), grid)?;
    if !(z_single > 0.0) {
        return Err(Error::NonFiniteIntegrand);
    }
    let retained = lattice::retained_count(params.spec());
    let dofs = (dn * retained) as f64;
    let ln_zn_mc = 0.5 * dofs * math::ln(c) + retained as f64 * math::ln(z_single);
    assemble_certificate(params, EstimateRoute::ExactFactorization, 0, 0, ln_zn_mc, 0.0)
}

/// Runs the full pipeline at one parameter point: route selection, estimate,
/// bounds, verdict.
pub fn stability_certificate(
    params: &ActionParams,
    n_samples: u64,
    seed: u64,
) -> Result<StabilityCertificate> {
    match select_route(params, n_samples)? {
        EstimateRoute::GaugeFixedMc => {
            let estimate = wilson::gauge_fixed_mc_estimate(params, n_samples, seed)?;
            certificate_from_estimate(params, &estimate)
        }
        EstimateRoute::ExactFactorization => certificate_exact(params),
    }
}

fn positive_prefactor(params: &ActionParams) -> Result<f64> {
    let c = params.prefactor();
    if !(c > 0.0) {
        return Err(Error::InvalidParameter(
            "stability bounds require a positive action prefactor".into(),
        ));
    }
    Ok(c)
}

fn positive_algebra_dim(kind: GroupKind) -> Result<usize> {
    let dn = kind.algebra_dim();
    if dn == 0 {
        return Err(Error::InvalidParameter(
            "stability bounds require a group with at least one generator".into(),
        ));
    }
    Ok(dn)
}
