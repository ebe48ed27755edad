//! The norm-ratio functional `f(w) = |A^T w|_2 / |A^T w|_{2k/(2k-1)}` on
//! dual space, its first-order-condition system, sign-pattern enumeration,
//! and multistart ascent.
//!
//! `f` is scale-invariant and permutation-invariant in the four coordinates
//! of `w`, and its critical points have all nonzero coordinates of equal
//! magnitude, so the sign vectors `{0, 1, -1}^4` exhaust the critical values.
//! The global maximum is `(1/2)^((k-1)/k)`, attained exactly when two of the
//! four weights vanish. That maximum bounds the ratio of optimal dual values
//! between order 2k and order 2, which is what pushes the entropy bound from
//! `k = 1` to every higher order on the Bloch ball.

use crate::entropy::EntropyOrder;
use crate::phase_space::{build_matrix, BlochVector, NUM_POINTS};
use crate::solver::{self, lp_norm, SolverOptions};
use crate::{Error, Result};
use alloc::vec::Vec;
// Redundant whenever feature unification pulls std into the graph
// (test builds), required for the standalone no_std build.
#[allow(unused_imports)]
use num_traits::Float;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// A candidate critical point of the ratio functional.
#[derive(Clone, Copy, Debug)]
pub struct RatioPoint {
    pub w: [f64; 4],
    pub f_value: f64,
    /// Scaled residual of the first-order-condition system at `w`.
    pub foc_residual: f64,
}

impl RatioPoint {
    /// `v = A^T w`.
    pub fn v(&self) -> [f64; NUM_POINTS] {
        build_matrix().apply_transpose(&self.w)
    }

    /// `t_n = sign(v_n) |v_n|^(1/(2k-1))`, the real odd root.
    pub fn t(&self, k: EntropyOrder) -> [f64; NUM_POINTS] {
        let v = self.v();
        let mut t = [0.0; NUM_POINTS];
        for (slot, &vn) in t.iter_mut().zip(v.iter()) {
            *slot = signed_root(vn, k.gamma());
        }
        t
    }

    /// Number of coordinates of `w` larger than `threshold` in magnitude.
    pub fn nonzeros(&self, threshold: f64) -> usize {
        self.w.iter().filter(|c| c.abs() > threshold).count()
    }
}

/// The nested dual-norm bodies `C_1 = {x : |A^T x|_2 <= 1}` (the Euclidean
/// ball of radius `1/sqrt(8)`) and `C_k = {x : |A^T x|_{2k/(2k-1)} <= 1}`,
/// with `C_k` contained in `C_1`.
#[derive(Clone, Copy, Debug)]
pub struct DualBallPair {
    k: EntropyOrder,
}

impl DualBallPair {
    pub fn new(k: EntropyOrder) -> Self {
        Self { k }
    }

    pub fn k(&self) -> EntropyOrder {
        self.k
    }

    /// Radius of `C_1` as a Euclidean ball.
    pub fn radius_c1() -> f64 {
        1.0 / 8.0f64.sqrt()
    }

    pub fn contains_c1(&self, x: &[f64; 4], tolerance: f64) -> bool {
        lp_norm(&build_matrix().apply_transpose(x), 2.0) <= 1.0 + tolerance
    }

    pub fn contains_ck(&self, x: &[f64; 4], tolerance: f64) -> bool {
        lp_norm(&build_matrix().apply_transpose(x), self.k.dual_exponent()) <= 1.0 + tolerance
    }

    /// Boundary scalings of this pair along `w`.
    pub fn scalings(&self, w: &[f64; 4]) -> Result<BoundaryScalings> {
        boundary_scalings(w, self.k)
    }
}

/// The unique positive scalings putting `w` on the two boundaries:
/// `|A^T (nu w)|_2 = 1` and `|A^T (lambda w)|_{2k/(2k-1)} = 1`.
#[derive(Clone, Copy, Debug)]
pub struct BoundaryScalings {
    pub lambda: f64,
    pub nu: f64,
    /// Set when `lambda` and `nu` coincide to within 1e-12 relative: the
    /// two norms agree along this direction (always the case at `k = 1`).
    pub degenerate: bool,
}

/// `f(w) = |A^T w|_2 / |A^T w|_{2k/(2k-1)}`, in `(0, 1]`; identically 1 at
/// `k = 1` and scale-invariant in `w`.
pub fn f_ratio(w: &[f64; 4], k: EntropyOrder) -> Result<f64> {
    let v = a_transpose(w)?;
    Ok(lp_norm(&v, 2.0) / lp_norm(&v, k.dual_exponent()))
}

/// Boundary scalings `(lambda, nu)` with `lambda <= nu` and
/// `f(w) = lambda / nu`.
pub fn boundary_scalings(w: &[f64; 4], k: EntropyOrder) -> Result<BoundaryScalings> {
    let v = a_transpose(w)?;
    let nu = 1.0 / lp_norm(&v, 2.0);
    let lambda = 1.0 / lp_norm(&v, k.dual_exponent());
    debug_assert!(lambda <= nu * (1.0 + 1e-12));
    let degenerate = nu - lambda <= 1e-12 * nu;
    Ok(BoundaryScalings { lambda, nu, degenerate })
}

/// Scaled residual `|w - h(w) A t|_inf / max(1, |w|_inf)` of the
/// first-order-condition system, where `h(w) = |w|_2^2 / |v|_p'^p'` and
/// `t` is the signed (2k-1)-th root of `v`.
pub fn foc_residual(w: &[f64; 4], k: EntropyOrder) -> Result<f64> {
    let v = a_transpose(w)?;
    let p_dual = k.dual_exponent();
    let gamma = k.gamma();
    let w_norm_sq: f64 = w.iter().map(|c| c * c).sum();
    let v_power: f64 = v.iter().map(|vn| vn.abs().powf(p_dual)).sum();
    let h = w_norm_sq / v_power;

    let mut t = [0.0; NUM_POINTS];
    for (slot, &vn) in t.iter_mut().zip(v.iter()) {
        *slot = signed_root(vn, gamma);
    }
    let at = build_matrix().apply(&t);
    let scale = w.iter().fold(0.0f64, |acc, c| acc.max(c.abs())).max(1.0);
    let residual = w
        .iter()
        .zip(at.iter())
        .map(|(&wi, &ati)| (wi - h * ati).abs())
        .fold(0.0f64, f64::max);
    Ok(residual / scale)
}

/// Evaluates `f` and the FOC residual on all 80 nonzero sign vectors
/// `{0, 1, -1}^4`, sorted by `f` descending (ties broken by fewer nonzeros,
/// then lexicographically, for determinism).
pub fn enumerate_candidates(k: EntropyOrder) -> Vec<RatioPoint> {
    let mut points = Vec::with_capacity(80);
    for code in 1..81usize {
        let mut digits = code;
        let mut w = [0.0f64; 4];
        for slot in &mut w {
            *slot = match digits % 3 {
                0 => 0.0,
                1 => 1.0,
                _ => -1.0,
            };
            digits /= 3;
        }
        if w.iter().all(|&c| c == 0.0) {
            continue;
        }
        let f_value = f_ratio(&w, k).expect("nonzero sign vector");
        let foc = foc_residual(&w, k).expect("nonzero sign vector");
        points.push(RatioPoint { w, f_value, foc_residual: foc });
    }
    points.sort_by(|a, b| {
        b.f_value
            .partial_cmp(&a.f_value)
            .unwrap()
            .then(a.nonzeros(0.5).cmp(&b.nonzeros(0.5)))
            .then_with(|| a.w.partial_cmp(&b.w).unwrap())
    });
    points
}

/// One orbit of sign vectors sharing a nonzero count; `f` is constant on the
/// orbit (symmetry under scaling, permutations, and sign flips).
#[derive(Clone, Copy, Debug)]
pub struct CandidateClass {
    pub nonzeros: usize,
    pub f_value: f64,
    /// Number of sign vectors in the class.
    pub count: usize,
    pub max_foc_residual: f64,
}

/// Groups [`enumerate_candidates`] by nonzero count, sorted by `f`
/// descending.
pub fn candidate_classes(k: EntropyOrder) -> Vec<CandidateClass> {
    let mut classes: Vec<CandidateClass> = Vec::with_capacity(4);
    for point in enumerate_candidates(k) {
        let nonzeros = point.nonzeros(0.5);
        match classes.iter_mut().find(|c| c.nonzeros == nonzeros) {
            Some(class) => {
                class.count += 1;
                class.f_value = class.f_value.max(point.f_value);
                class.max_foc_residual = class.max_foc_residual.max(point.foc_residual);
            }
            None => classes.push(CandidateClass {
                nonzeros,
                f_value: point.f_value,
                count: 1,
                max_foc_residual: point.foc_residual,
            }),
        }
    }
    classes.sort_by(|a, b| {
        b.f_value
            .partial_cmp(&a.f_value)
            .unwrap()
            .then(a.nonzeros.cmp(&b.nonzeros))
    });
    classes
}

/// Projected gradient ascent on `f` over the unit sphere from `n_starts`
/// seeded random directions; returns the best point found. Deterministic for
/// a given seed: start `i` draws from stream `i` of a counter-based
/// generator, so results do not depend on evaluation order.
pub fn multistart_maximize(k: EntropyOrder, n_starts: u32, seed: u64) -> RatioPoint {
    let mut best: Option<RatioPoint> = None;
    for start in 0..n_starts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(u64::from(start));
        let w0 = random_unit_direction(&mut rng);
        let w = ascend(w0, k);
        let f_value = f_ratio(&w, k).expect("unit vector");
        let foc = foc_residual(&w, k).expect("unit vector");
        let point = RatioPoint { w, f_value, foc_residual: foc };
        if best.as_ref().map_or(true, |b| point.f_value > b.f_value) {
            best = Some(point);
        }
    }
    best.expect("at least one start")
}

// Ascent on ln f over the sphere with backtracking; f is C^1 away from
// v = 0 coordinates, where the maxima sit, so progress slows to geometric
// shrinking of the vanishing coordinates, plenty for 1e-6 localization.
fn ascend(mut w: [f64; 4], k: EntropyOrder) -> [f64; 4] {
    let a = build_matrix();
    let p_dual = k.dual_exponent();
    let gamma = k.gamma();
    let ln_f = |w: &[f64; 4]| -> f64 {
        let v = a.apply_transpose(w);
        lp_norm(&v, 2.0).ln() - lp_norm(&v, p_dual).ln()
    };

    let mut value = ln_f(&w);
    for _ in 0..500 {
        let v = a.apply_transpose(&w);
        let w_norm_sq: f64 = w.iter().map(|c| c * c).sum();
        let v_power: f64 = v.iter().map(|vn| vn.abs().powf(p_dual)).sum();
        let mut t = [0.0; NUM_POINTS];
        for (slot, &vn) in t.iter_mut().zip(v.iter()) {
            *slot = signed_root(vn, gamma);
        }
        let at = a.apply(&t);
        // grad ln f = w / |w|^2 - A t / |v|_p'^p'
        let mut grad = [0.0f64; 4];
        for i in 0..4 {
            grad[i] = w[i] / w_norm_sq - at[i] / v_power;
        }
        let radial: f64 = grad.iter().zip(w.iter()).map(|(&g, &wi)| g * wi).sum();
        let mut tangent = [0.0f64; 4];
        for i in 0..4 {
            tangent[i] = grad[i] - radial * w[i];
        }
        let tangent_norm_sq: f64 = tangent.iter().map(|g| g * g).sum();
        if tangent_norm_sq.sqrt() <= 1e-10 {
            break;
        }

        let mut step = 0.1f64;
        let mut accepted = false;
        while step >= 1e-18 {
            let mut candidate = [0.0f64; 4];
            for i in 0..4 {
                candidate[i] = w[i] + step * tangent[i];
            }
            let norm: f64 = candidate.iter().map(|c| c * c).sum::<f64>().sqrt();
            for c in &mut candidate {
                *c /= norm;
            }
            let candidate_value = ln_f(&candidate);
            if candidate_value >= value + 1e-4 * step * tangent_norm_sq {
                w = candidate;
                value = candidate_value;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    w
}

/// Canonical representative of `w` under the symmetries of `f`: unit
/// 2-norm, coordinates sorted by absolute value descending, overall sign
/// flipped so the largest-magnitude coordinate is positive.
pub fn canonicalize(w: &[f64; 4]) -> [f64; 4] {
    let norm: f64 = w.iter().map(|c| c * c).sum::<f64>().sqrt();
    let mut out = *w;
    if norm > 0.0 {
        for c in &mut out {
            *c /= norm;
        }
    }
    out.sort_by(|a, b| b.abs().partial_cmp(&a.abs()).unwrap());
    if out[0] < 0.0 {
        for c in &mut out {
            *c = -*c;
        }
    }
    out
}

/// The projection-inequality chain at a quantum state `r`:
/// `|z^k|/|y^1| <= f(w^1) <= (1/2)^((k-1)/k)`, with the left ratio equal to
/// the ratio of optimal dual values at orders 2k and 2.
#[derive(Clone, Copy, Debug)]
pub struct ProjectionChainReport {
    /// Closed-form order-2 dual optimum `rhat / (sqrt(8) |rhat|)`.
    pub y1: [f64; 4],
    /// Order-2k dual optimum from the solver.
    pub yk: [f64; 4],
    /// Projection of `yk` onto `rhat`.
    pub zk: [f64; 4],
    /// `nu yk`, on the boundary of `C_1`.
    pub w1: [f64; 4],
    /// `|zk|_2 / |y1|_2`.
    pub ratio: f64,
    /// Ratio of dual optimal values (order 2k over order 2).
    pub dual_ratio: f64,
    pub f_w1: f64,
    /// `(1/2)^((k-1)/k)`.
    pub bound: f64,
    /// Both inequalities of the chain, with 1e-9 slack.
    pub chain_holds: bool,
    /// Whether `ratio` equals `dual_ratio` within 1e-8.
    pub ratio_matches_dual: bool,
}

/// Verifies the projection inequality at `r` (expected inside the closed
/// unit ball) for `k >= 2`. Solver or certificate failures propagate.
pub fn projection_chain_check(
    r: &BlochVector,
    k: EntropyOrder,
    options: &SolverOptions,
) -> Result<ProjectionChainReport> {
    if k.k() < 2 {
        return Err(Error::InvalidOrder);
    }
    let rhat = r.augmented();
    let rhat_norm = r.augmented_norm();
    let sqrt8 = 8.0f64.sqrt();

    let mut y1 = rhat;
    for c in &mut y1 {
        *c /= sqrt8 * rhat_norm;
    }

    let solve = solver::minnorm(r, k, options);
    if !solve.converged {
        return Err(Error::NonConvergence { k: k.k() });
    }
    let yk = solver::dual_certificate(r, k, &solve.q_opt, options)?;

    let dual_k: f64 = rhat.iter().zip(yk.iter()).map(|(&a, &b)| a * b).sum();
    let dual_1 = rhat_norm / sqrt8;

    let projection = dual_k / (rhat_norm * rhat_norm);
    let mut zk = rhat;
    for c in &mut zk {
        *c *= projection;
    }

    let nu = 1.0 / lp_norm(&build_matrix().apply_transpose(&yk), 2.0);
    let mut w1 = yk;
    for c in &mut w1 {
        *c *= nu;
    }

    let ratio = lp_norm(&zk, 2.0) / lp_norm(&y1, 2.0);
    let dual_ratio = dual_k / dual_1;
    let f_w1 = f_ratio(&w1, k)?;
    let bound = 0.5f64.powf((f64::from(k.k()) - 1.0) / f64::from(k.k()));

    Ok(ProjectionChainReport {
        y1,
        yk,
        zk,
        w1,
        ratio,
        dual_ratio,
        f_w1,
        bound,
        chain_holds: ratio <= f_w1 + 1e-9 && f_w1 <= bound + 1e-9,
        ratio_matches_dual: (ratio - dual_ratio).abs() <= 1e-8,
    })
}

/// Sign-change scan of the scalar reduction of the FOC system on the
/// two-nonzero pattern: `phi(x) = x - ((1+x)^g - (1-x)^g) / ((1+x)^g +
/// (1-x)^g)` with `g = 1/(2k-1)`, over `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct ScalarFocScan {
    pub step: f64,
    /// Roots located by exact zeros or sign changes, one representative per
    /// bracket.
    pub roots: Vec<f64>,
    /// Roots not within one step of -1, 0, or 1. Empty when the scalar
    /// equation has no interior solutions beside 0.
    pub spurious: Vec<f64>,
}

/// Scans the scalar FOC equation at resolution `step`.
pub fn scalar_foc_scan(k: EntropyOrder, step: f64) -> ScalarFocScan {
    let gamma = k.gamma();
    let phi = |x: f64| -> f64 {
        let up = (1.0 + x).max(0.0).powf(gamma);
        let down = (1.0 - x).max(0.0).powf(gamma);
        x - (up - down) / (up + down)
    };

    let count = (2.0 / step).round() as usize;
    let mut roots = Vec::new();
    let mut prev_x = -1.0f64;
    let mut prev = phi(prev_x);
    if prev == 0.0 {
        roots.push(prev_x);
    }
    for j in 1..=count {
        let x = (-1.0 + j as f64 * step).min(1.0);
        let val = phi(x);
        if val == 0.0 {
            roots.push(x);
        } else if prev != 0.0 && val.signum() != prev.signum() {
            roots.push(0.5 * (prev_x + x));
        }
        prev_x = x;
        prev = val;
    }

    let spurious = roots
        .iter()
        .copied()
        .filter(|&root| {
            let nearest = root.abs().min((root - 1.0).abs()).min((root + 1.0).abs());
            nearest > step
        })
        .collect();
    ScalarFocScan { step, roots, spurious }
}

// A^T w, rejecting the zero vector.
fn a_transpose(w: &[f64; 4]) -> Result<[f64; NUM_POINTS]> {
    if w.iter().all(|&c| c == 0.0) {
        return Err(Error::ZeroVector);
    }
    Ok(build_matrix().apply_transpose(w))
}

// Real odd root: sign(v) |v|^gamma, with 0^gamma = 0.
fn signed_root(v: f64, gamma: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v.signum() * v.abs().powf(gamma)
    }
}

// Standard gaussian 4-vector normalized to the sphere.
fn random_unit_direction(rng: &mut ChaCha8Rng) -> [f64; 4] {
    loop {
        let (g0, g1) = gaussian_pair(rng);
        let (g2, g3) = gaussian_pair(rng);
        let w = [g0, g1, g2, g3];
        let norm: f64 = w.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return [w[0] / norm, w[1] / norm, w[2] / norm, w[3] / norm];
        }
    }
}

// Box-Muller from 53-bit uniforms.
fn gaussian_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let scale = 1.0 / (1u64 << 53) as f64;
    let u1 = ((rng.next_u64() >> 11) + 1) as f64 * scale; // (0, 1]
    let u2 = (rng.next_u64() >> 11) as f64 * scale; // [0, 1)
    let radius = (-2.0 * u1.ln()).sqrt();
    let angle = 2.0 * core::f64::consts::PI * u2;
    (radius * angle.cos(), radius * angle.sin())
}
