//! Rényi entropy for signed and unsigned distributions, and the
//! finite-difference probe of smoothness at zero weight that motivates
//! restricting signed entropies to even integer orders.
//!
//! For a signed distribution the order-2k entropy is
//! `H_2k(q) = -(1/(2k-1)) log2(sum q_n^(2k)) = -(2k/(2k-1)) log2 |q|_2k`.
//! Even integer orders are the ones for which `H_alpha((q, 1-q))` stays
//! infinitely differentiable at `q = 0` once weights may change sign:
//! non-integer orders blow up there, odd integers eventually jump. The
//! [`smoothness_probe`] demonstrates this numerically; it is a demonstration
//! of the selection criterion, not a proof.

use crate::{tol, Error, Result, SignedDistribution};
use alloc::vec::Vec;
// Redundant whenever feature unification pulls std into the graph
// (test builds), required for the standalone no_std build.
#[allow(unused_imports)]
use num_traits::Float;

/// Even entropy order `2k` with `k >= 1`, carrying the dual exponent
/// `p' = 2k/(2k-1)` of the associated norm and the odd-root exponent
/// `gamma = 1/(2k-1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EntropyOrder {
    k: u32,
}

impl EntropyOrder {
    pub fn new(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidOrder);
        }
        Ok(Self { k })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// The entropy order `2k`.
    pub fn order(&self) -> u32 {
        2 * self.k
    }

    /// Dual exponent `p' = 2k/(2k-1)`, in `(1, 2]`.
    pub fn dual_exponent(&self) -> f64 {
        let two_k = f64::from(2 * self.k);
        two_k / (two_k - 1.0)
    }

    /// `gamma = 1/(2k-1)`, the exponent of the signed odd root.
    pub fn gamma(&self) -> f64 {
        1.0 / (f64::from(2 * self.k) - 1.0)
    }
}

/// General positive entropy order `alpha`; `alpha = 1` is the Shannon limit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneralOrder {
    alpha: f64,
}

impl GeneralOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidOrder);
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn is_shannon(&self) -> bool {
        self.alpha == 1.0
    }
}

/// Signed Rényi entropy `H_2k(q)` in bits.
///
/// Both equivalent formulas (through the power sum and through the 2k-norm)
/// are evaluated and must agree to 1e-12; the power-sum route is returned.
pub fn renyi_signed(q: &SignedDistribution, k: EntropyOrder) -> Result<f64> {
    renyi_signed_components(q.components(), k)
}

pub(crate) fn renyi_signed_components(q: &[f64], k: EntropyOrder) -> Result<f64> {
    let exponent = k.order() as i32;
    let power_sum: f64 = q.iter().map(|qn| qn.powi(exponent)).sum();
    if power_sum == 0.0 {
        return Err(Error::UndefinedEntropy);
    }
    let denominator = f64::from(k.order()) - 1.0;
    let by_sum = -power_sum.log2() / denominator;
    let norm = power_sum.powf(1.0 / f64::from(k.order()));
    let by_norm = -(f64::from(k.order()) / denominator) * norm.log2();
    debug_assert!((by_sum - by_norm).abs() <= 1e-12 * by_sum.abs().max(1.0));
    Ok(by_sum)
}

/// Rényi entropy of an ordinary (unsigned) distribution in bits, with the
/// Shannon limit at `alpha = 1` (`0 log 0 = 0`).
pub fn renyi_unsigned(p: &[f64], alpha: GeneralOrder) -> Result<f64> {
    if let Some(index) = p.iter().position(|&v| v < 0.0) {
        return Err(Error::NegativeComponent { index });
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > tol::SUM {
        return Err(Error::InvalidDistribution { sum });
    }
    if alpha.is_shannon() {
        return Ok(p
            .iter()
            .filter(|&&v| v > 0.0)
            .map(|&v| -v * v.log2())
            .sum());
    }
    let a = alpha.alpha();
    let power_sum: f64 = p.iter().map(|&v| v.powf(a)).sum();
    if power_sum == 0.0 {
        return Err(Error::UndefinedEntropy);
    }
    Ok(-power_sum.log2() / (a - 1.0))
}

/// How the one-sided derivative estimates of `H_alpha((q, 1-q))` at `q = 0`
/// behave as the step shrinks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    /// Both sides converge to a common value: the derivative exists.
    Match,
    /// Both sides converge but to different values: the derivative jumps.
    Jump,
    /// Estimates grow without bound: the derivative blows up.
    Diverge,
}

/// One-sided finite-difference estimates of a derivative of
/// `g(q) = H_alpha((q, 1-q))` at `q = 0`, with their classification.
#[derive(Clone, Debug)]
pub struct ProbeReport {
    pub alpha: f64,
    /// Derivative order probed.
    pub order: u32,
    /// The step schedule used, largest first.
    pub steps: Vec<f64>,
    /// Forward-difference estimates (approach from `q > 0`), one per step.
    pub plus: Vec<f64>,
    /// Backward-difference estimates (approach from `q < 0`), one per step.
    pub minus: Vec<f64>,
    /// Best estimate of the right-sided derivative.
    pub plus_limit: f64,
    /// Best estimate of the left-sided derivative.
    pub minus_limit: f64,
    /// Estimated rounding-noise floor of the estimates at the finest step.
    pub noise_floor: f64,
    pub classification: Classification,
}

/// Default step schedule for [`smoothness_probe`].
pub const DEFAULT_STEPS: [f64; 3] = [1e-2, 1e-3, 1e-4];

/// Probes the `order`-th derivative of `g(q) = H_alpha((q, 1-q))` at
/// `q = 0` from both sides with one-sided stencils over `steps`.
///
/// Classification rules, with `nf` the rounding-noise floor at the finest
/// step: DIVERGE when either side's estimate magnitude grows by 10x or more
/// across the schedule while ending well above `nf`; otherwise MATCH when
/// the sided estimates differ by at most `10 nf` at the finest step or when
/// their difference has decayed to under 0.3x its coarsest-step value (the
/// difference is vanishing with the step); otherwise JUMP.
///
/// `alpha = 1` is rejected: for negative weights the signed power sum does
/// not approach 1 as `alpha -> 1`, so the left side of `g` has no Shannon
/// limit to probe.
pub fn smoothness_probe(alpha: GeneralOrder, order: u32, steps: &[f64]) -> Result<ProbeReport> {
    if order == 0 || alpha.is_shannon() {
        return Err(Error::InvalidOrder);
    }
    if steps.is_empty()
        || steps.iter().any(|&h| !(h > 0.0))
        || steps.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(Error::InvalidStepSchedule);
    }

    let a = alpha.alpha();
    // H_alpha of the signed pair (q, 1-q).
    let g = |q: f64| -> f64 {
        let power_sum = q.abs().powf(a) + (1.0 - q).abs().powf(a);
        -power_sum.log2() / (a - 1.0)
    };

    let m = order as usize;
    let binomials = binomial_row(m);
    let mut plus = Vec::with_capacity(steps.len());
    let mut minus = Vec::with_capacity(steps.len());
    let mut g_scale: f64 = 1.0;
    for &h in steps {
        let mut forward = 0.0;
        let mut backward = 0.0;
        for (j, &binom) in binomials.iter().enumerate() {
            let sign_fwd = if (m - j) % 2 == 0 { 1.0 } else { -1.0 };
            let sign_bwd = if j % 2 == 0 { 1.0 } else { -1.0 };
            let gp = g(j as f64 * h);
            let gm = g(-(j as f64) * h);
            g_scale = g_scale.max(gp.abs()).max(gm.abs());
            forward += sign_fwd * binom * gp;
            backward += sign_bwd * binom * gm;
        }
        let scale = h.powi(order as i32);
        plus.push(forward / scale);
        minus.push(backward / scale);
    }

    let noise_at = |h: f64| -> f64 {
        2f64.powi(order as i32) * 4.0 * f64::EPSILON * g_scale / h.powi(order as i32)
    };
    let noise_floor = noise_at(steps[steps.len() - 1]);

    let plus_limit = plus[pick_limit_index(&plus, steps, noise_at)];
    let minus_limit = minus[pick_limit_index(&minus, steps, noise_at)];

    let last = steps.len() - 1;
    let diverges = |d: &[f64]| -> bool {
        d[last].abs() >= 10.0 * d[0].abs() && d[last].abs() >= 10.0 * noise_floor
    };
    let classification = if diverges(&plus) || diverges(&minus) {
        Classification::Diverge
    } else {
        let diff_first = (plus[0] - minus[0]).abs();
        let diff_last = (plus[last] - minus[last]).abs();
        if diff_last <= 10.0 * noise_floor || diff_last <= 0.3 * diff_first {
            Classification::Match
        } else {
            Classification::Jump
        }
    };

    Ok(ProbeReport {
        alpha: a,
        order,
        steps: steps.to_vec(),
        plus,
        minus,
        plus_limit,
        minus_limit,
        noise_floor,
        classification,
    })
}

/// [`smoothness_probe`] with the default step schedule.
pub fn smoothness_probe_default(alpha: GeneralOrder, order: u32) -> Result<ProbeReport> {
    smoothness_probe(alpha, order, &DEFAULT_STEPS)
}

// Index of the estimate with the smallest (truncation-change + noise) proxy.
fn pick_limit_index(d: &[f64], steps: &[f64], noise_at: impl Fn(f64) -> f64) -> usize {
    if d.len() == 1 {
        return 0;
    }
    let mut best = 1;
    let mut best_err = f64::INFINITY;
    for i in 1..d.len() {
        let err = (d[i] - d[i - 1]).abs() + noise_at(steps[i]);
        if err < best_err {
            best_err = err;
            best = i;
        }
    }
    best
}

// Row m of Pascal's triangle as f64.
fn binomial_row(m: usize) -> Vec<f64> {
    let mut row = Vec::with_capacity(m + 1);
    let mut value = 1.0f64;
    row.push(value);
    for j in 0..m {
        value = value * (m - j) as f64 / (j + 1) as f64;
        row.push(value);
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use core::f64::consts::LN_2;

    fn order(k: u32) -> EntropyOrder {
        EntropyOrder::new(k).unwrap()
    }

    fn diagonal_qstar() -> SignedDistribution {
        let s3 = 3.0f64.sqrt();
        SignedDistribution::new([
            (1.0 + s3) / 8.0,
            (1.0 + 1.0 / s3) / 8.0,
            (1.0 + 1.0 / s3) / 8.0,
            (1.0 - 1.0 / s3) / 8.0,
            (1.0 + 1.0 / s3) / 8.0,
            (1.0 - 1.0 / s3) / 8.0,
            (1.0 - 1.0 / s3) / 8.0,
            (1.0 - s3) / 8.0,
        ])
        .unwrap()
    }

    #[test]
    fn order_accessors() {
        let k2 = order(2);
        assert_eq!(k2.order(), 4);
        assert_abs_diff_eq!(k2.dual_exponent(), 4.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(k2.gamma(), 1.0 / 3.0, epsilon = 1e-15);
        assert!(EntropyOrder::new(0).is_err());
        assert!(GeneralOrder::new(0.0).is_err());
        assert!(GeneralOrder::new(-2.0).is_err());
    }

    #[test]
    fn uniform_has_three_bits_at_every_order() {
        for k in 1..=8 {
            let h = renyi_signed(&SignedDistribution::uniform(), order(k)).unwrap();
            assert_abs_diff_eq!(h, 3.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn diagonal_state_has_two_bits_at_k1() {
        let h = renyi_signed(&diagonal_qstar(), order(1)).unwrap();
        assert_abs_diff_eq!(h, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn point_mass_has_zero_entropy() {
        let q = SignedDistribution::new([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        for k in 1..=8 {
            assert_eq!(renyi_signed(&q, order(k)).unwrap(), 0.0);
        }
    }

    #[test]
    fn zero_vector_is_an_error() {
        assert_eq!(
            renyi_signed_components(&[0.0; 8], order(2)),
            Err(Error::UndefinedEntropy)
        );
    }

    #[test]
    fn unsigned_examples() {
        let uniform = [0.125; 8];
        let h = renyi_unsigned(&uniform, GeneralOrder::new(2.0).unwrap()).unwrap();
        assert_abs_diff_eq!(h, 3.0, epsilon = 1e-12);

        let fair = [0.5, 0.5];
        let h = renyi_unsigned(&fair, GeneralOrder::new(1.0).unwrap()).unwrap();
        assert_abs_diff_eq!(h, 1.0, epsilon = 1e-15);

        let skew = [0.25, 0.75];
        let h = renyi_unsigned(&skew, GeneralOrder::new(2.0).unwrap()).unwrap();
        assert_abs_diff_eq!(h, -(10.0f64 / 16.0).log2(), epsilon = 1e-15);
    }

    #[test]
    fn unsigned_rejects_negative_components() {
        let err = renyi_unsigned(&[0.5, 0.7, -0.2], GeneralOrder::new(2.0).unwrap()).unwrap_err();
        assert_eq!(err, Error::NegativeComponent { index: 2 });
    }

    #[test]
    fn signed_and_unsigned_agree_on_nonnegative_input() {
        let p = [0.3, 0.05, 0.15, 0.1, 0.2, 0.05, 0.05, 0.1];
        let q = SignedDistribution::new(p).unwrap();
        for k in 1..=4u32 {
            let signed = renyi_signed(&q, order(k)).unwrap();
            let unsigned =
                renyi_unsigned(&p, GeneralOrder::new(f64::from(2 * k)).unwrap()).unwrap();
            assert_abs_diff_eq!(signed, unsigned, epsilon = 1e-12);
        }
    }

    #[test]
    fn sign_flips_and_permutations_do_not_change_signed_entropy() {
        let q = SignedDistribution::new([0.4, -0.1, 0.3, 0.2, -0.05, 0.1, 0.05, 0.1]).unwrap();
        let flipped =
            SignedDistribution::with_tolerance([0.4, 0.1, 0.3, 0.2, 0.05, 0.1, 0.05, 0.1], 0.5)
                .unwrap();
        let permuted =
            SignedDistribution::new([0.1, 0.05, 0.1, -0.05, 0.2, 0.3, -0.1, 0.4]).unwrap();
        for k in 1..=5u32 {
            let base = renyi_signed_components(q.components(), order(k)).unwrap();
            let f = renyi_signed_components(flipped.components(), order(k)).unwrap();
            let p = renyi_signed_components(permuted.components(), order(k)).unwrap();
            assert_abs_diff_eq!(base, f, epsilon = 1e-12);
            assert_abs_diff_eq!(base, p, epsilon = 1e-12);
        }
    }

    #[test]
    fn probe_input_validation() {
        let a2 = GeneralOrder::new(2.0).unwrap();
        assert!(smoothness_probe(a2, 0, &DEFAULT_STEPS).is_err());
        assert!(smoothness_probe(GeneralOrder::new(1.0).unwrap(), 2, &DEFAULT_STEPS).is_err());
        assert!(smoothness_probe(a2, 2, &[]).is_err());
        assert!(smoothness_probe(a2, 2, &[1e-3, 1e-2]).is_err());
        assert!(smoothness_probe(a2, 2, &[1e-2, -1.0]).is_err());
    }

    #[test]
    fn probe_alpha_two_matches_at_orders_one_to_three() {
        let a2 = GeneralOrder::new(2.0).unwrap();
        for m in 1..=3 {
            let report = smoothness_probe_default(a2, m).unwrap();
            assert_eq!(report.classification, Classification::Match, "order {m}");
        }
        // First derivative: g = -log2(1 - 2q + 2q^2), g'(0) = 2/ln 2.
        let report = smoothness_probe_default(a2, 1).unwrap();
        assert_abs_diff_eq!(report.plus_limit, 2.0 / LN_2, epsilon = 1e-4);
        assert_abs_diff_eq!(report.minus_limit, 2.0 / LN_2, epsilon = 1e-4);
    }

    #[test]
    fn probe_alpha_four_matches() {
        let a4 = GeneralOrder::new(4.0).unwrap();
        for m in 1..=3 {
            let report = smoothness_probe_default(a4, m).unwrap();
            assert_eq!(report.classification, Classification::Match, "order {m}");
        }
    }

    #[test]
    fn probe_alpha_three_jumps_at_third_order() {
        // From the right, |q|^3 + |1-q|^3 = 1 - 3q + 3q^2: third derivative
        // of g is 0. From the left the cubic term survives and contributes
        // 6/ln 2. Both values verified symbolically.
        let a3 = GeneralOrder::new(3.0).unwrap();
        let report = smoothness_probe_default(a3, 3).unwrap();
        assert_eq!(report.classification, Classification::Jump);
        assert_abs_diff_eq!(report.plus_limit, 0.0, epsilon = 5e-2);
        assert_abs_diff_eq!(report.minus_limit, 6.0 / LN_2, epsilon = 5e-2);

        for m in 1..=2 {
            let report = smoothness_probe_default(a3, m).unwrap();
            assert_eq!(report.classification, Classification::Match, "order {m}");
        }
    }

    #[test]
    fn probe_alpha_three_halves_diverges_at_second_order() {
        let a = GeneralOrder::new(1.5).unwrap();
        let report = smoothness_probe_default(a, 2).unwrap();
        assert_eq!(report.classification, Classification::Diverge);
        // Oracle: the closed-form second derivative blows up like
        // 0.75 q^{-1/2} inside the log; evaluating it at q = 1e-2, 1e-4
        // shows the 10x-per-two-decades growth the classifier keys on.
        let g2 = |q: f64| {
            let u = q.powf(1.5) + (1.0 - q).powf(1.5);
            let du = 1.5 * (q.sqrt() - (1.0 - q).sqrt());
            let d2u = 0.75 * (1.0 / q.sqrt() + 1.0 / (1.0 - q).sqrt());
            -(d2u / u - (du / u) * (du / u)) / (0.5 * LN_2)
        };
        assert!(g2(1e-4).abs() > 9.0 * g2(1e-2).abs());
        // First derivative still exists (|q|^{3/2} is C^1).
        let report = smoothness_probe_default(a, 1).unwrap();
        assert_eq!(report.classification, Classification::Match);
    }

    #[test]
    fn probe_match_errors_decay_with_step() {
        // Richardson-style decay for a smooth case: the error of the
        // first-derivative estimate shrinks with h until the noise floor.
        let a2 = GeneralOrder::new(2.0).unwrap();
        let report = smoothness_probe_default(a2, 1).unwrap();
        let truth = 2.0 / LN_2;
        let errors: Vec<f64> = report.plus.iter().map(|d| (d - truth).abs()).collect();
        assert!(errors[1] < errors[0]);
        assert!(errors[2] < errors[1]);
    }
}
