//! Self-checks of the independent test oracles against closed forms, and
//! cross-checks of the solver against them. The oracles live in test code
//! and share no solution path with the library.

mod common;

use common::{dual_ascent_value, grid_minnorm, SplitMix};
use entroq::solver::minnorm;
use entroq::{BlochVector, EntropyOrder, SolverOptions};

fn order(k: u32) -> EntropyOrder {
    EntropyOrder::new(k).unwrap()
}

#[test]
fn grid_oracle_matches_closed_forms() {
    // k = 1: the minimum 2-norm is |(r,1)|_2 / sqrt(8) for every r.
    for &r in &[
        BlochVector::new(0.0, 0.0, 0.0),
        BlochVector::new(0.3, -0.4, 0.2),
        BlochVector::new(1.0, 1.0, 1.0),
    ] {
        let value = grid_minnorm(&r, order(1));
        let expected = r.augmented_norm() / 8.0f64.sqrt();
        assert!((value - expected).abs() < 1e-8, "{value} vs {expected}");
    }
    // Axis state at k = 2: analytic optimum 2^{-3/2}.
    let value = grid_minnorm(&BlochVector::new(1.0, 0.0, 0.0), order(2));
    assert!((value - 2.0f64.powf(-1.5)).abs() < 1e-8);
    // Origin at k = 3: uniform, 8^{-5/6}.
    let value = grid_minnorm(&BlochVector::new(0.0, 0.0, 0.0), order(3));
    assert!((value - 8.0f64.powf(-5.0 / 6.0)).abs() < 1e-8);
}

#[test]
fn dual_ascent_matches_closed_forms() {
    // k = 1 dual optimum value |(r,1)|_2 / sqrt(8).
    let r = BlochVector::new(0.6, 0.0, 0.8);
    let value = dual_ascent_value(&r, order(1), 3);
    assert!((value - 0.5).abs() < 1e-9, "{value}");
    // Axis state at k = 2.
    let value = dual_ascent_value(&BlochVector::new(1.0, 0.0, 0.0), order(2), 3);
    assert!((value - 2.0f64.powf(-1.5)).abs() < 1e-7, "{value}");
}

#[test]
fn newton_agrees_with_independent_dual_ascent() {
    let options = SolverOptions::default();
    let mut rng = SplitMix::new(0x51);
    for i in 0..10u32 {
        let r = rng.in_ball(1.0);
        let k = order(1 + i % 3);
        let report = minnorm(&r, k, &options);
        assert!(report.converged);
        let ascent = dual_ascent_value(&r, k, 0x600 + u64::from(i));
        // The ascent value is a certified lower bound on the primal optimum
        // and should essentially attain it.
        assert!(
            ascent <= report.primal_value + 1e-9,
            "ascent {ascent} exceeds primal {}",
            report.primal_value
        );
        assert!(
            (ascent - report.dual_value).abs() < 1e-6,
            "instance {i}: ascent {ascent} vs certificate {}",
            report.dual_value
        );
    }
}
