//! Shared helpers for the integration suites: deterministic sampling and the
//! independent oracles the solver results are checked against. Everything
//! here deliberately avoids the library's own solution paths.

#![allow(dead_code)]

use entroq::solver::{maxent2, NullspaceBasis};
use entroq::{BlochVector, EntropyOrder};
use std::time::{Duration, Instant};

/// Counter-based generator for reproducible test sampling.
#[derive(Clone)]
pub struct SplitMix {
    state: u64,
}

impl SplitMix {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard gaussian via Box-Muller.
    pub fn gaussian(&mut self) -> f64 {
        let u1 = self.uniform().max(1e-300);
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    /// Uniform direction on the unit sphere in R^3.
    pub fn unit_direction(&mut self) -> [f64; 3] {
        loop {
            let g = [self.gaussian(), self.gaussian(), self.gaussian()];
            let norm = (g[0] * g[0] + g[1] * g[1] + g[2] * g[2]).sqrt();
            if norm > 1e-6 {
                return [g[0] / norm, g[1] / norm, g[2] / norm];
            }
        }
    }

    /// Uniform point in the ball of the given radius.
    pub fn in_ball(&mut self, radius: f64) -> BlochVector {
        let dir = self.unit_direction();
        let rho = radius * self.uniform().powf(1.0 / 3.0);
        BlochVector::new(rho * dir[0], rho * dir[1], rho * dir[2])
    }
}

/// Independent primal oracle: minimizes `|q* + N z|_2k` over `z` by a
/// refining grid search (seven points per axis, shrink 0.6), no gradients or
/// Newton steps. The optimum lies within `|z|_inf <= 3` for any `|r| <= 1.5`.
pub fn grid_minnorm(r: &BlochVector, k: EntropyOrder) -> f64 {
    let basis = NullspaceBasis::new();
    let q_star = *maxent2(r).components();
    let power = k.order() as i32;
    let objective = |z: &[f64; 4]| -> f64 {
        let shift = basis.apply(z);
        q_star
            .iter()
            .zip(shift.iter())
            .map(|(&q, &s)| (q + s).powi(power))
            .sum::<f64>()
    };

    let mut center = [0.0f64; 4];
    let mut width = 3.0f64;
    let mut best_value = objective(&center);
    for _ in 0..48 {
        let mut best_point = center;
        for i0 in -3i32..=3 {
            for i1 in -3i32..=3 {
                for i2 in -3i32..=3 {
                    for i3 in -3i32..=3 {
                        let z = [
                            center[0] + width * f64::from(i0) / 3.0,
                            center[1] + width * f64::from(i1) / 3.0,
                            center[2] + width * f64::from(i2) / 3.0,
                            center[3] + width * f64::from(i3) / 3.0,
                        ];
                        let value = objective(&z);
                        if value < best_value {
                            best_value = value;
                            best_point = z;
                        }
                    }
                }
            }
        }
        center = best_point;
        width *= 0.6;
    }
    best_value.powf(1.0 / f64::from(k.order()))
}

/// Independent dual oracle: maximizes `(r,1)^T x / |A^T x|_p'` by gradient
/// ascent on the sphere from the closed-form k = 1 optimum direction plus a
/// few random restarts. Returns the best objective value found.
pub fn dual_ascent_value(r: &BlochVector, k: EntropyOrder, seed: u64) -> f64 {
    let a = entroq::phase_space::build_matrix();
    let rhat = r.augmented();
    let p_dual = k.dual_exponent();
    let gamma = k.gamma();

    let value = |x: &[f64; 4]| -> f64 {
        let v = a.apply_transpose(x);
        let norm = v
            .iter()
            .map(|vn| vn.abs().powf(p_dual))
            .sum::<f64>()
            .powf(1.0 / p_dual);
        let s: f64 = rhat.iter().zip(x.iter()).map(|(&r, &xv)| r * xv).sum();
        s / norm
    };

    let ascend = |mut x: [f64; 4]| -> f64 {
        let mut best = value(&x);
        let mut step0 = 0.2f64;
        for _ in 0..3000 {
            let v = a.apply_transpose(&x);
            let s: f64 = rhat.iter().zip(x.iter()).map(|(&r, &xv)| r * xv).sum();
            if s <= 0.0 {
                break;
            }
            let v_power: f64 = v.iter().map(|vn| vn.abs().powf(p_dual)).sum();
            let mut t = [0.0f64; 8];
            for (slot, &vn) in t.iter_mut().zip(v.iter()) {
                *slot = if vn == 0.0 {
                    0.0
                } else {
                    vn.signum() * vn.abs().powf(gamma)
                };
            }
            let at = a.apply(&t);
            // grad ln(value) = rhat/s - A t / |v|_p'^p'
            let mut grad = [0.0f64; 4];
            for i in 0..4 {
                grad[i] = rhat[i] / s - at[i] / v_power;
            }
            let norm_x: f64 = x.iter().map(|c| c * c).sum::<f64>().sqrt();
            let radial: f64 = grad.iter().zip(x.iter()).map(|(&g, &xi)| g * xi).sum::<f64>()
                / (norm_x * norm_x);
            let mut tangent = [0.0f64; 4];
            for i in 0..4 {
                tangent[i] = grad[i] - radial * x[i];
            }
            let t_norm: f64 = tangent.iter().map(|g| g * g).sum::<f64>().sqrt();
            if t_norm <= 1e-13 {
                break;
            }
            let mut step = step0;
            let mut moved = false;
            while step > 1e-18 {
                let candidate = [
                    x[0] + step * tangent[0],
                    x[1] + step * tangent[1],
                    x[2] + step * tangent[2],
                    x[3] + step * tangent[3],
                ];
                let candidate_value = value(&candidate);
                if candidate_value > best {
                    x = candidate;
                    best = candidate_value;
                    moved = true;
                    break;
                }
                step *= 0.5;
            }
            if !moved {
                break;
            }
            // Carry the accepted scale forward, letting it regrow.
            step0 = (step * 4.0).min(0.2);
        }
        best
    };

    let mut best = ascend(rhat);
    let mut rng = SplitMix::new(seed);
    for _ in 0..8 {
        let start = [
            rhat[0] + 0.5 * rng.gaussian(),
            rhat[1] + 0.5 * rng.gaussian(),
            rhat[2] + 0.5 * rng.gaussian(),
            rhat[3] + 0.5 * rng.gaussian(),
        ];
        best = best.max(ascend(start));
    }
    best
}

/// Prints the per-criterion verdict line and enforces it plus the runtime
/// budget.
pub fn report_criterion(number: u32, name: &str, failures: &[String], elapsed: Duration, budget: Duration) {
    let status = if failures.is_empty() && elapsed <= budget {
        "PASS"
    } else {
        "FAIL"
    };
    println!(
        "acceptance criterion {number} [{name}]: {status} ({elapsed:.2?}, budget {budget:.0?})"
    );
    for failure in failures {
        println!("    - {failure}");
    }
    assert!(
        failures.is_empty(),
        "criterion {number} failed: {:?}",
        failures
    );
    assert!(
        elapsed <= budget,
        "criterion {number} exceeded its runtime budget: {elapsed:.2?} > {budget:.2?}"
    );
}

/// Convenience: time a closure.
pub fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}
