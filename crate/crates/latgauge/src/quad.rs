//! Quadrature primitives: Gauss-Legendre rules for truncated Gaussian
//! integrals and uniform periodic grids for torus integrals (where the
//! trapezoid rule is spectrally accurate).

use alloc::vec::Vec;

use crate::math;

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1], by
/// Newton iteration on the Legendre polynomial from the standard cosine
/// initial guesses.
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = math::cos(core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n and P_n' by the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let delta = p1 / dp;
            x -= delta;
            if math::abs(delta) < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = x;
        weights[i] = w;
        nodes[n - 1 - i] = -x;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    // Ascending order for readability; the guesses above start near +1.
    nodes.reverse();
    weights.reverse();
    (nodes, weights)
}

/// Gauss-Legendre rule mapped onto [lo, hi].
pub(crate) fn gauss_legendre_on(lo: f64, hi: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let (xs, ws) = gauss_legendre(n);
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    (
        xs.iter().map(|x| mid + half * x).collect(),
        ws.iter().map(|w| half * w).collect(),
    )
}

/// Uniform m-point grid on the circle (-pi, pi], offset to midpoints so no
/// node hits the branch boundary; returns (points, uniform weight 2 pi / m).
pub(crate) fn periodic_points(m: usize) -> (Vec<f64>, f64) {
    assert!(m >= 1);
    let h = core::f64::consts::TAU / m as f64;
    let points = (0..m)
        .map(|i| -core::f64::consts::PI + (i as f64 + 0.5) * h)
        .collect();
    (points, h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_point_rule_matches_tabulated_values() {
        let (nodes, weights) = gauss_legendre(5);
        let want_nodes = [
            -0.906179845938664,
            -0.5384693101056831,
            0.0,
            0.5384693101056831,
            0.906179845938664,
        ];
        let want_weights = [
            0.23692688505618908,
            0.47862867049936647,
            0.5688888888888889,
            0.47862867049936647,
            0.23692688505618908,
        ];
        for (got, want) in nodes.iter().zip(want_nodes.iter()) {
            assert!((got - want).abs() < 1e-15, "node {got} vs {want}");
        }
        for (got, want) in weights.iter().zip(want_weights.iter()) {
            assert!((got - want).abs() < 1e-15, "weight {got} vs {want}");
        }
    }

    #[test]
    fn polynomials_are_integrated_exactly() {
        // n points are exact through degree 2n-1.
        let (xs, ws) = gauss_legendre(4);
        let integral: f64 = xs
            .iter()
            .zip(ws.iter())
            .map(|(x, w)| w * (x.powi(7) + 3.0 * x.powi(6) - x.powi(2) + 2.0))
            .sum();
        // odd terms vanish; 3 x^6 -> 6/7, -x^2 -> -2/3, 2 -> 4
        let want = 6.0 / 7.0 - 2.0 / 3.0 + 4.0;
        assert!((integral - want).abs() < 1e-14);
    }

    #[test]
    fn gaussian_mass_on_wide_interval() {
        let (xs, ws) = gauss_legendre_on(-8.0, 8.0, 48);
        let integral: f64 = xs
            .iter()
            .zip(ws.iter())
            .map(|(x, w)| w * (-0.5 * x * x).exp())
            .sum();
        let want = (2.0 * core::f64::consts::PI).sqrt();
        assert!((integral - want).abs() < 1e-13, "{integral} vs {want}");
    }

    #[test]
    fn periodic_grid_avoids_boundary_and_sums_to_circle() {
        let (points, h) = periodic_points(16);
        assert_eq!(points.len(), 16);
        for p in &points {
            assert!(*p > -core::f64::consts::PI && *p < core::f64::consts::PI);
        }
        let total: f64 = h * points.len() as f64;
        assert!((total - core::f64::consts::TAU).abs() < 1e-14);
        // Spectral accuracy: integral of e^{cos x} over the circle equals
        // 2 pi I_0(1); 16 uniform points already give ~1e-12.
        let quad: f64 = points.iter().map(|x| h * x.cos().exp()).sum();
        let bessel_i0_1 = 1.2660658777520084;
        assert!((quad - core::f64::consts::TAU * bessel_i0_1).abs() < 1e-11);
    }
}
