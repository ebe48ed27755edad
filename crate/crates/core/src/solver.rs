//! Maximum-entropy representations of a potential state: the closed form at
//! `k = 1`, damped Newton iteration over the nullspace for `k > 1`, dual-norm
//! certificates, and the nonnegative variant used for classicality tests.
//!
//! Maximizing `H_2k` over representations of `r` is minimizing the 2k-norm
//! over the affine set `{q : A q = (r, 1)}`. At `k = 1` the minimizer is
//! `q* = A^T (A A^T)^{-1} (r, 1) = A^T (r, 1) / 8`. For `k > 1` the feasible
//! set is parameterized as `q* + N z` with `N` an orthonormal nullspace
//! basis, and the smooth convex polynomial `sum q_n^(2k)` is minimized over
//! `z` by Newton's method with backtracking. The dual problem maximizes
//! `(r, 1)^T x` over `|A^T x|_{2k/(2k-1)} <= 1`; a certificate is read off
//! the norm gradient at the primal optimum, and the duality gap it yields is
//! part of every report.

use crate::entropy::EntropyOrder;
use crate::linalg;
use crate::phase_space::{build_matrix, BlochVector, SignedDistribution, NUM_POINTS};
use crate::{tol, Error, Result};
// Redundant whenever feature unification pulls std into the graph
// (test builds), required for the standalone no_std build.
#[allow(unused_imports)]
use num_traits::Float;

/// Orthonormal basis of the nullspace of the representation matrix.
///
/// The four columns are the entrywise products of rows of `A` with patterns
/// {1,2}, {1,3}, {2,3}, {1,2,3}, scaled by `1/sqrt(8)`: the sign characters
/// missing from `A`'s own rows. `A N = 0` exactly and `N^T N = I`.
#[derive(Clone, Copy, Debug)]
pub struct NullspaceBasis {
    n: [[f64; 4]; NUM_POINTS],
}

impl NullspaceBasis {
    pub fn new() -> Self {
        let a = build_matrix();
        let patterns: [&[usize]; 4] = [&[0, 1], &[0, 2], &[1, 2], &[0, 1, 2]];
        let scale = 1.0 / 8.0f64.sqrt();
        let mut n = [[0.0; 4]; NUM_POINTS];
        for (col, rows) in patterns.iter().enumerate() {
            for (point, slot) in n.iter_mut().enumerate() {
                let sign: i32 = rows.iter().map(|&i| a.entries()[i][point]).product();
                slot[col] = sign as f64 * scale;
            }
        }
        Self { n }
    }

    /// Entries, one row of four coefficients per phase-space point.
    pub fn matrix(&self) -> &[[f64; 4]; NUM_POINTS] {
        &self.n
    }

    /// `N z`.
    pub fn apply(&self, z: &[f64; 4]) -> [f64; NUM_POINTS] {
        let mut out = [0.0; NUM_POINTS];
        for (row, slot) in self.n.iter().zip(out.iter_mut()) {
            *slot = row.iter().zip(z.iter()).map(|(&n, &zj)| n * zj).sum();
        }
        out
    }

    /// `N^T v`.
    pub fn apply_transpose(&self, v: &[f64; NUM_POINTS]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (row, &vn) in self.n.iter().zip(v.iter()) {
            for (slot, &n) in out.iter_mut().zip(row.iter()) {
                *slot += n * vn;
            }
        }
        out
    }
}

impl Default for NullspaceBasis {
    fn default() -> Self {
        Self::new()
    }
}

/// Solver tolerances and iteration budget.
#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    /// Gradient infinity-norm target for the Newton iteration.
    pub grad_tol: f64,
    /// Duality-gap target for declaring convergence.
    pub gap_tol: f64,
    /// Dual-feasibility slack.
    pub feas_tol: f64,
    /// KKT-residual bound for accepting a certificate.
    pub kkt_tol: f64,
    pub max_iter: u32,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            grad_tol: tol::GRADIENT,
            gap_tol: tol::GAP,
            feas_tol: tol::FEASIBILITY,
            kkt_tol: tol::KKT,
            max_iter: 200,
        }
    }
}

impl SolverOptions {
    pub fn with_grad_tol(grad_tol: f64) -> Self {
        Self { grad_tol, ..Self::default() }
    }
}

/// Outcome of a 2k-norm minimization.
#[derive(Clone, Copy, Debug)]
pub struct SolveReport {
    pub q_opt: SignedDistribution,
    /// Dual point, feasible for `|A^T x|_{2k/(2k-1)} <= 1` by construction.
    pub x_dual: [f64; 4],
    /// `|q_opt|_2k`.
    pub primal_value: f64,
    /// `(r, 1)^T x_dual`, a lower bound on the primal value.
    pub dual_value: f64,
    /// `primal_value - dual_value`.
    pub gap: f64,
    pub iterations: u32,
    /// Never silently wrong: a report that missed the gradient or gap target
    /// within the iteration budget says so here.
    pub converged: bool,
}

/// The unique maximum-2-entropy (minimum 2-norm) representation,
/// componentwise `q*_n = (1 + e_n . r) / 8`. Satisfies
/// `|q*|_2^2 = (1 + |r|_2^2) / 8`.
pub fn maxent2(r: &BlochVector) -> SignedDistribution {
    let a = build_matrix();
    let mut q = a.apply_transpose(&r.augmented());
    for v in &mut q {
        *v *= 0.125;
    }
    SignedDistribution::from_components_unchecked(q)
}

/// Minimizes `|q|_2k` over representations of `r`.
///
/// `k = 1` returns [`maxent2`] exactly. For `k > 1`, damped Newton over the
/// nullspace coordinates starting from the `k = 1` solution, stopping when
/// both the gradient infinity-norm and the duality gap meet their targets.
/// The minimizer is unique by strict convexity of the 2k-norm.
pub fn minnorm(r: &BlochVector, k: EntropyOrder, options: &SolverOptions) -> SolveReport {
    let rhat = r.augmented();
    let q_star = maxent2(r);

    if k.k() == 1 {
        let q = *q_star.components();
        let primal = lp_norm(&q, 2.0);
        let (x, _kkt, dual) = certificate_parts(&q, k, &rhat);
        return SolveReport {
            q_opt: q_star,
            x_dual: x,
            primal_value: primal,
            dual_value: dual,
            gap: primal - dual,
            iterations: 0,
            converged: true,
        };
    }

    let basis = NullspaceBasis::new();
    let power = k.order() as i32;
    let two_k = f64::from(k.order());
    let mut z = [0.0f64; 4];
    let mut iterations = 0u32;
    let mut converged = false;
    let mut resolution_steps = 0u32;

    let objective = |z: &[f64; 4]| -> f64 {
        let shift = basis.apply(z);
        q_star
            .components()
            .iter()
            .zip(shift.iter())
            .map(|(&qs, &s)| (qs + s).powi(power))
            .sum()
    };

    let assemble = |z: &[f64; 4]| -> [f64; NUM_POINTS] {
        let shift = basis.apply(z);
        let mut q = *q_star.components();
        for (qn, s) in q.iter_mut().zip(shift.iter()) {
            *qn += s;
        }
        q
    };

    for iter in 0..options.max_iter {
        let q = assemble(&z);
        let fval: f64 = q.iter().map(|qn| qn.powi(power)).sum();
        let mut signed_powers = [0.0; NUM_POINTS];
        for (slot, &qn) in signed_powers.iter_mut().zip(q.iter()) {
            *slot = qn.powi(power - 1);
        }
        let mut grad = basis.apply_transpose(&signed_powers);
        for g in &mut grad {
            *g *= two_k;
        }
        let grad_norm = grad.iter().fold(0.0f64, |acc, g| acc.max(g.abs()));

        if grad_norm <= options.grad_tol {
            let primal = fval.powf(1.0 / two_k);
            let (_, _, dual) = certificate_parts(&q, k, &rhat);
            if primal - dual <= options.gap_tol {
                converged = true;
                break;
            }
        }

        // Newton direction with escalating regularization; the Hessian can be
        // near-singular where components vanish.
        let mut weights = [0.0; NUM_POINTS];
        for (slot, &qn) in weights.iter_mut().zip(q.iter()) {
            *slot = qn.powi(power - 2);
        }
        let curvature = two_k * (two_k - 1.0);
        let mut hessian = [[0.0f64; 4]; 4];
        for (row, &d) in basis.matrix().iter().zip(weights.iter()) {
            for a in 0..4 {
                for b in a..4 {
                    hessian[a][b] += curvature * d * row[a] * row[b];
                }
            }
        }
        for a in 0..4 {
            for b in 0..a {
                hessian[a][b] = hessian[b][a];
            }
        }

        let mut lambda = 1e-12;
        let factor = loop {
            let mut regularized = hessian;
            for (d, row) in regularized.iter_mut().enumerate() {
                row[d] += lambda;
            }
            if let Some(l) = linalg::cholesky4(&regularized) {
                break l;
            }
            lambda *= 100.0;
            if lambda > 1e6 {
                // Hopeless curvature; fall back to a steepest-descent scale.
                break [
                    [1.0, 0.0, 0.0, 0.0],
                    [0.0, 1.0, 0.0, 0.0],
                    [0.0, 0.0, 1.0, 0.0],
                    [0.0, 0.0, 0.0, 1.0],
                ];
            }
        };
        let neg_grad = [-grad[0], -grad[1], -grad[2], -grad[3]];
        let step = linalg::cholesky_solve4(&factor, &neg_grad);
        let slope: f64 = grad.iter().zip(step.iter()).map(|(&g, &s)| g * s).sum();
        if slope >= 0.0 {
            break; // not a descent direction; nothing more to gain
        }

        // Inside the quadratic basin the predicted decrease falls below the
        // resolution of the objective; a sufficient-decrease test cannot
        // accept anything there, so take the unit Newton step on trust.
        if -slope <= 1e-13 * fval.abs() {
            if resolution_steps >= 3 {
                break; // stalled at floating-point resolution
            }
            resolution_steps += 1;
            for (zj, s) in z.iter_mut().zip(step.iter()) {
                *zj += s;
            }
            iterations = iter + 1;
            continue;
        }

        // Backtracking Armijo line search, halving steps.
        let mut t = 1.0f64;
        let mut accepted = false;
        while t >= 1e-20 {
            let candidate = [
                z[0] + t * step[0],
                z[1] + t * step[1],
                z[2] + t * step[2],
                z[3] + t * step[3],
            ];
            if objective(&candidate) <= fval + 1e-4 * t * slope {
                z = candidate;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        iterations = iter + 1;
        if !accepted {
            break; // stalled at floating-point resolution
        }
    }

    let q = assemble(&z);
    let primal = lp_norm(&q, two_k);
    let (x, _kkt, dual) = certificate_parts(&q, k, &rhat);
    SolveReport {
        q_opt: SignedDistribution::from_components_unchecked(q),
        x_dual: x,
        primal_value: primal,
        dual_value: dual,
        gap: primal - dual,
        iterations,
        converged,
    }
}

/// Builds the dual certificate at a (near-)optimal `q_opt`: the gradient
/// `u_n = q_n^(2k-1) / |q|_2k^(2k-1)` of the norm, mapped into the row space
/// as `x = A u / 8` and rescaled to exact dual feasibility.
///
/// Fails with [`Error::CertificateFailure`] when the KKT residual
/// `|A^T x - u|_2` exceeds `options.kkt_tol`, which signals that the primal
/// point has not converged.
pub fn dual_certificate(
    r: &BlochVector,
    k: EntropyOrder,
    q_opt: &SignedDistribution,
    options: &SolverOptions,
) -> Result<[f64; 4]> {
    let (x, kkt, _dual) = certificate_parts(q_opt.components(), k, &r.augmented());
    if kkt > options.kkt_tol {
        return Err(Error::CertificateFailure { residual: kkt });
    }
    let a = build_matrix();
    let feas = lp_norm(&a.apply_transpose(&x), k.dual_exponent());
    if feas > 1.0 + options.feas_tol {
        return Err(Error::CertificateFailure { residual: feas - 1.0 });
    }
    Ok(x)
}

// Certificate pieces shared by `minnorm` and `dual_certificate`. The raw
// `x = A u / 8` is scaled by `1 / |A^T x|_p'`, so the returned point is dual
// feasible (and its value a true lower bound) even at non-optimal `q`; at an
// optimum the scale is already 1 to within rounding.
fn certificate_parts(
    q: &[f64; NUM_POINTS],
    k: EntropyOrder,
    rhat: &[f64; 4],
) -> ([f64; 4], f64, f64) {
    let a = build_matrix();
    let power = k.order() as i32;
    let norm = lp_norm(q, f64::from(k.order()));
    let norm_pow = norm.powi(power - 1);
    let mut u = [0.0; NUM_POINTS];
    for (slot, &qn) in u.iter_mut().zip(q.iter()) {
        *slot = qn.powi(power - 1) / norm_pow;
    }
    let mut x = a.apply(&u);
    for v in &mut x {
        *v *= 0.125;
    }
    let atx = a.apply_transpose(&x);
    let kkt: f64 = atx
        .iter()
        .zip(u.iter())
        .map(|(&p, &un)| (p - un) * (p - un))
        .sum::<f64>()
        .sqrt();
    let dual_norm = lp_norm(&atx, k.dual_exponent());
    for v in &mut x {
        *v /= dual_norm;
    }
    let dual_value: f64 = rhat.iter().zip(x.iter()).map(|(&r, &xv)| r * xv).sum();
    (x, kkt, dual_value)
}

/// Outcome of the nonnegative-representation problem.
#[derive(Clone, Debug)]
pub enum NonnegSolve {
    /// `r` lies outside the cube `max |r_i| <= 1`; no nonnegative
    /// representation exists at all.
    Infeasible,
    Optimal(NonnegReport),
}

impl NonnegSolve {
    pub fn is_feasible(&self) -> bool {
        matches!(self, NonnegSolve::Optimal(_))
    }

    pub fn report(&self) -> Option<&NonnegReport> {
        match self {
            NonnegSolve::Optimal(report) => Some(report),
            NonnegSolve::Infeasible => None,
        }
    }
}

/// Solution of `min |q|_2` over nonnegative representations.
#[derive(Clone, Debug)]
pub struct NonnegReport {
    pub q_opt: SignedDistribution,
    /// `|q_opt|_2`.
    pub value: f64,
    /// Multipliers of the four equality constraints.
    pub eq_multipliers: [f64; 4],
    /// Largest violation among stationarity, feasibility, bound
    /// nonnegativity, and multiplier sign at the returned point.
    pub kkt_residual: f64,
    pub iterations: u32,
}

/// Default activity/optimality tolerance for [`minnorm_nonneg2`].
pub const NONNEG_TOL: f64 = 1e-10;

/// Minimizes `|q|_2` over `{q >= 0, A q = (r, 1)}` by a primal active-set
/// method on the eight bound constraints, Bland's rule for anti-cycling.
///
/// Feasible exactly when `max |r_i| <= 1`; the independent-coin product
/// distribution `q_n = prod_i (1 + e_n(i) r_i) / 2` provides the starting
/// point. KKT conditions are checked at the returned point and their
/// residual reported.
pub fn minnorm_nonneg2(r: &BlochVector, tolerance: f64) -> NonnegSolve {
    let components = r.components();
    if components.iter().any(|c| c.abs() > 1.0 + tolerance) {
        return NonnegSolve::Infeasible;
    }

    let a = build_matrix();
    let rhat = r.augmented();

    // Feasible start: independent coins with biases (1 + r_i)/2.
    let mut q = [0.0f64; NUM_POINTS];
    for (n, slot) in q.iter_mut().enumerate() {
        let mut weight = 1.0;
        for i in 0..3 {
            weight *= 0.5 * (1.0 + a.entries()[i][n] as f64 * components[i]);
        }
        *slot = weight.max(0.0);
    }

    let mut active = [false; NUM_POINTS];
    for (n, &qn) in q.iter().enumerate() {
        if qn <= 0.0 {
            active[n] = true;
        }
    }

    let mut multipliers = [0.0f64; 4];
    let mut iterations = 0u32;
    for _ in 0..1000 {
        iterations += 1;
        let free: alloc::vec::Vec<usize> = (0..NUM_POINTS).filter(|&n| !active[n]).collect();
        let (candidate_free, y) = equality_subproblem(&a, &free, &rhat);
        multipliers = y;

        let mut candidate = [0.0f64; NUM_POINTS];
        for (&n, &v) in free.iter().zip(candidate_free.iter()) {
            candidate[n] = v;
        }

        if free
            .iter()
            .zip(candidate_free.iter())
            .all(|(_, &v)| v >= -tolerance)
        {
            q = candidate;
            // Bound multipliers mu_n = -(A^T y)_n on the active set.
            let aty = a.apply_transpose(&y);
            let mut drop_index = None;
            for n in 0..NUM_POINTS {
                if active[n] && -aty[n] < -tolerance {
                    drop_index = Some(n);
                    break; // Bland: smallest index
                }
            }
            match drop_index {
                Some(n) => active[n] = false,
                None => break, // KKT satisfied
            }
        } else {
            // Step toward the candidate until the first bound blocks.
            let mut alpha = 1.0f64;
            let mut blocker = None;
            for (&n, &v) in free.iter().zip(candidate_free.iter()) {
                if v < -tolerance {
                    let step = q[n] / (q[n] - v);
                    if step < alpha - 1e-15 {
                        alpha = step;
                        blocker = Some(n);
                    }
                }
            }
            for n in 0..NUM_POINTS {
                if !active[n] {
                    q[n] += alpha * (candidate[n] - q[n]);
                }
            }
            if let Some(n) = blocker {
                q[n] = 0.0;
                active[n] = true;
            } else {
                q = candidate;
            }
        }
    }

    // KKT verification at the returned point.
    let aty = a.apply_transpose(&multipliers);
    let aq = a.apply(&q);
    let mut residual = 0.0f64;
    for i in 0..4 {
        residual = residual.max((aq[i] - rhat[i]).abs());
    }
    for n in 0..NUM_POINTS {
        residual = residual.max(-q[n]); // q >= 0
        if active[n] {
            residual = residual.max(aty[n]); // mu_n = -(A^T y)_n >= 0
        } else {
            residual = residual.max((q[n] - aty[n]).abs()); // stationarity
        }
    }

    let value = lp_norm(&q, 2.0);
    NonnegSolve::Optimal(NonnegReport {
        q_opt: SignedDistribution::from_components_unchecked(q),
        value,
        eq_multipliers: multipliers,
        kkt_residual: residual,
        iterations,
    })
}

// Least-norm solution of A_F q_F = rhat over the free columns F:
// q_F = A_F^T y with (A_F A_F^T) y = rhat. Rank-deficient working sets get
// escalating jitter; the system stays consistent because the current iterate
// is feasible and supported on F.
fn equality_subproblem(
    a: &crate::phase_space::RepresentationMatrix,
    free: &[usize],
    rhat: &[f64; 4],
) -> (alloc::vec::Vec<f64>, [f64; 4]) {
    let mut gram = [[0.0f64; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            gram[i][j] = free
                .iter()
                .map(|&n| (a.entries()[i][n] * a.entries()[j][n]) as f64)
                .sum();
        }
    }
    let mut jitter = 0.0f64;
    let y = loop {
        let mut regularized = gram;
        for (d, row) in regularized.iter_mut().enumerate() {
            row[d] += jitter;
        }
        if let Some(l) = linalg::cholesky4(&regularized) {
            break linalg::cholesky_solve4(&l, rhat);
        }
        jitter = if jitter == 0.0 { 1e-10 } else { jitter * 100.0 };
        debug_assert!(jitter < 1.0, "working-set Gram matrix unreasonably singular");
    };
    let q_free = free
        .iter()
        .map(|&n| (0..4).map(|i| a.entries()[i][n] as f64 * y[i]).sum())
        .collect();
    (q_free, y)
}

// |v|_p for p >= 1, with |v|_2 special-cased.
pub(crate) fn lp_norm(v: &[f64], p: f64) -> f64 {
    if p == 2.0 {
        return v.iter().map(|x| x * x).sum::<f64>().sqrt();
    }
    v.iter()
        .map(|x| x.abs().powf(p))
        .sum::<f64>()
        .powf(1.0 / p)
}
