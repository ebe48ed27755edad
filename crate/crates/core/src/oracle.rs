//! Membership and classicality verdicts for potential states, and boundary
//! scans over the Bloch ball.
//!
//! A potential state is admitted when, at every order `2k`, some
//! representation reaches entropy 2. Satisfaction at `k = 1` forces
//! satisfaction at every higher order, so checking the finite prefix
//! `k = 1..k_max` decides membership exactly; the higher orders act as
//! consistency checks on the solver. Note the converse fails order by
//! order: outside the unit ball the `k = 1` test is the binding one, and an
//! individual `k > 1` test may still pass there (the single-order regions
//! bulge past the ball except along the coordinate axes).

use crate::entropy::{renyi_signed, EntropyOrder};
use crate::phase_space::BlochVector;
use crate::solver::{self, NonnegSolve, SolverOptions};
use crate::{tol, Error, Result};
use alloc::vec::Vec;
// Redundant whenever feature unification pulls std into the graph
// (test builds), required for the standalone no_std build.
#[allow(unused_imports)]
use num_traits::Float;

/// Tolerances for membership verdicts.
#[derive(Clone, Copy, Debug)]
pub struct OracleOptions {
    /// Entropy slack: order `2k` counts as satisfied when the maximum
    /// entropy reaches `2 - entropy_tol`, so exact-boundary states satisfy
    /// the non-strict bound.
    pub entropy_tol: f64,
    pub solver: SolverOptions,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            entropy_tol: tol::ENTROPY,
            solver: SolverOptions::default(),
        }
    }
}

/// Verdict at a single order.
#[derive(Clone, Copy, Debug)]
pub struct KVerdict {
    pub k: u32,
    /// Maximum of `H_2k` over representations.
    pub max_entropy: f64,
    pub satisfied: bool,
    /// Margin `max_entropy - 2`; negative when the bound fails.
    pub gap: f64,
}

/// Verdict over the order prefix `k = 1..k_max`.
#[derive(Clone, Debug)]
pub struct MembershipVerdict {
    pub r: BlochVector,
    pub per_k: Vec<KVerdict>,
    /// All orders in the prefix satisfied.
    pub overall: bool,
    /// Satisfaction at `k = 1` implied satisfaction at every checked order,
    /// as the theory requires of converged solves. (No claim is made in the
    /// other direction; see the module notes.)
    pub theorem_consistent: bool,
}

/// Maximum `H_2k` over representations of `r` and whether it reaches 2.
///
/// Propagates [`Error::NonConvergence`] when the Newton solve misses its
/// targets, rather than returning a verdict from an unconverged point.
pub fn satisfies_at_k(
    r: &BlochVector,
    k: EntropyOrder,
    options: &OracleOptions,
) -> Result<(bool, f64)> {
    let report = solver::minnorm(r, k, &options.solver);
    if !report.converged {
        return Err(Error::NonConvergence { k: k.k() });
    }
    let max_entropy = renyi_signed(&report.q_opt, k)?;
    Ok((max_entropy >= 2.0 - options.entropy_tol, max_entropy))
}

/// Evaluates [`satisfies_at_k`] for `k = 1..k_max` and aggregates.
pub fn membership(
    r: &BlochVector,
    k_max: u32,
    options: &OracleOptions,
) -> Result<MembershipVerdict> {
    if k_max == 0 {
        return Err(Error::InvalidOrder);
    }
    let mut per_k = Vec::with_capacity(k_max as usize);
    for kk in 1..=k_max {
        let order = EntropyOrder::new(kk).expect("k >= 1");
        let (satisfied, max_entropy) = satisfies_at_k(r, order, options)?;
        per_k.push(KVerdict {
            k: kk,
            max_entropy,
            satisfied,
            gap: max_entropy - 2.0,
        });
    }
    let overall = per_k.iter().all(|v| v.satisfied);
    let theorem_consistent = !per_k[0].satisfied || overall;
    Ok(MembershipVerdict {
        r: *r,
        per_k,
        overall,
        theorem_consistent,
    })
}

/// Whether a nonnegative representation reaches 2-entropy 2: feasible with
/// minimum 2-norm at most `1/2 + tolerance`. Infeasible states (outside the
/// cube) are simply not representable, hence `false`.
pub fn classical_representable(r: &BlochVector, tolerance: f64) -> bool {
    match solver::minnorm_nonneg2(r, solver::NONNEG_TOL) {
        NonnegSolve::Infeasible => false,
        NonnegSolve::Optimal(report) => report.value <= 0.5 + tolerance,
    }
}

/// Largest radius along `direction` (a unit vector within 1e-10) at which
/// the entropy bound holds at every order up to `k`, located by bisection on
/// `[0, 2]` to interval width `scan_tol`.
///
/// The `k = 1` order is evaluated first and is the binding one, so the
/// returned radius certifies the Bloch-ball boundary; orders `2..k` are
/// solved on the satisfied side as consistency checks.
pub fn boundary_scan(
    direction: &[f64; 3],
    k: EntropyOrder,
    scan_tol: f64,
    options: &OracleOptions,
) -> Result<f64> {
    let norm: f64 = direction.iter().map(|c| c * c).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidDirection { norm });
    }

    let satisfied_up_to = |radius: f64| -> Result<bool> {
        let r = BlochVector::new(
            radius * direction[0],
            radius * direction[1],
            radius * direction[2],
        );
        for kk in 1..=k.k() {
            let order = EntropyOrder::new(kk).expect("k >= 1");
            let (ok, _) = satisfies_at_k(&r, order, options)?;
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    };

    let mut lo = 0.0f64; // origin: maximal entropy 3 at every order
    let mut hi = 2.0f64;
    debug_assert!(!satisfied_up_to(hi).unwrap_or(false));
    while hi - lo > scan_tol {
        let mid = 0.5 * (lo + hi);
        if satisfied_up_to(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
