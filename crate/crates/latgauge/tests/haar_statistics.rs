//! Statistical validation of the Haar sampler: eigenphase law, invariance
//! under fixed left multiplication, and unitarity drift through products.

use latgauge::group::{
    angular_eigenvalues, exp_map, haar_sample, AlgebraCoefficients, GroupKind,
};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// CDF of the positive eigenphase of a Haar SU(2) matrix, whose density is
/// (2/pi) sin^2(theta) on [0, pi].
fn su2_phase_cdf(theta: f64) -> f64 {
    (theta - theta.sin() * theta.cos()) / std::f64::consts::PI
}

#[test]
fn su2_eigenphase_law_passes_ks_test() {
    let mut rng = ChaCha12Rng::seed_from_u64(7001);
    let n = 100_000;
    let mut phases: Vec<f64> = (0..n)
        .map(|_| {
            let u = haar_sample(GroupKind::Su(2), &mut rng).unwrap();
            let spectrum = angular_eigenvalues(&u).unwrap();
            spectrum.lambda[1]
        })
        .collect();
    phases.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut ks = 0.0f64;
    for (i, theta) in phases.iter().enumerate() {
        let model = su2_phase_cdf(*theta);
        let low = i as f64 / n as f64;
        let high = (i + 1) as f64 / n as f64;
        ks = ks.max((model - low).abs()).max((high - model).abs());
    }
    assert!(ks < 0.01, "KS statistic {ks}");
}

#[test]
fn haar_measure_is_left_invariant() {
    let kind = GroupKind::U(2);
    let rotation = exp_map(
        &AlgebraCoefficients::new(kind, vec![0.31, -0.22, 0.17, 0.40]).unwrap(),
    )
    .unwrap();

    let action = |u: &latgauge::group::UnitaryMatrix| {
        let trace = u.matrix().trace();
        2.0 * u.order() as f64 - 2.0 * trace.re
    };

    let n = 50_000;
    let mut plain = ChaCha12Rng::seed_from_u64(88);
    let mut rotated = ChaCha12Rng::seed_from_u64(167);
    let (mut sum_a, mut sq_a, mut sum_b, mut sq_b) = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..n {
        let a = action(&haar_sample(kind, &mut plain).unwrap());
        sum_a += a;
        sq_a += a * a;
        let b = action(&rotation.mul(&haar_sample(kind, &mut rotated).unwrap()));
        sum_b += b;
        sq_b += b * b;
    }
    let nf = n as f64;
    let (mean_a, mean_b) = (sum_a / nf, sum_b / nf);
    let var_a = (sq_a - nf * mean_a * mean_a) / (nf - 1.0);
    let var_b = (sq_b - nf * mean_b * mean_b) / (nf - 1.0);
    let sigma = ((var_a + var_b) / nf).sqrt();
    assert!(
        (mean_a - mean_b).abs() <= 3.0 * sigma,
        "{mean_a} vs {mean_b} (sigma {sigma})"
    );
}

#[test]
fn holonomy_products_stay_unitary() {
    let mut rng = ChaCha12Rng::seed_from_u64(9100);
    for kind in [
        GroupKind::U(1),
        GroupKind::U(2),
        GroupKind::U(3),
        GroupKind::Su(2),
        GroupKind::Su(3),
    ] {
        let tolerance = 1e-11 * kind.order() as f64;
        for _ in 0..1000 {
            let u1 = haar_sample(kind, &mut rng).unwrap();
            let u2 = haar_sample(kind, &mut rng).unwrap();
            let u3 = haar_sample(kind, &mut rng).unwrap();
            let u4 = haar_sample(kind, &mut rng).unwrap();
            let product = u1.mul(&u2).mul(&u3.adjoint()).mul(&u4.adjoint());
            let deviation = product.matrix().unitarity_deviation();
            assert!(
                deviation <= tolerance,
                "{kind}: deviation {deviation} over {tolerance}"
            );
        }
    }
}
