//! The eight-point phase space, the representation matrix, and conversions
//! between signed distributions, Bloch vectors, and 2×2 state matrices.
//!
//! Phase-space point `n` (1-based) carries the sign triple
//! `e_n(i) = (-1)^(bit_(i-1)(n-1))`, bit 0 being the least-significant bit,
//! so the eight points enumerate `{+1,-1}^3` with direction 1 alternating
//! fastest. Column `n` of the representation matrix is `(e_n(1), e_n(2),
//! e_n(3), 1)`; the all-ones fourth row folds the normalization `sum q = 1`
//! into the linear system `A q = (r, 1)`.

use crate::{tol, Error, Result};
use num_complex::Complex64;
// Redundant whenever feature unification pulls std into the graph
// (test builds), required for the standalone no_std build.
#[allow(unused_imports)]
use num_traits::Float;

/// Number of phase-space points.
pub const NUM_POINTS: usize = 8;

/// A 2×2 complex matrix in row-major order.
pub type Matrix2 = [[Complex64; 2]; 2];

/// One of the eight outcome assignments to the three measurement directions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PhaseSpacePoint {
    index: usize,
}

impl PhaseSpacePoint {
    /// Point with 1-based index `n`; `None` unless `1 <= n <= 8`.
    pub fn new(n: usize) -> Option<Self> {
        (1..=NUM_POINTS).contains(&n).then_some(Self { index: n })
    }

    /// All eight points in index order.
    pub fn all() -> impl Iterator<Item = Self> {
        (1..=NUM_POINTS).map(|index| Self { index })
    }

    /// 1-based index `n`.
    pub fn index(&self) -> usize {
        self.index
    }

    /// Outcome sign `e_n(i)` for direction `i` in `1..=3`.
    pub fn sign(&self, direction: usize) -> i32 {
        debug_assert!((1..=3).contains(&direction));
        if (self.index - 1) >> (direction - 1) & 1 == 0 {
            1
        } else {
            -1
        }
    }

    /// The sign triple `(e_n(1), e_n(2), e_n(3))`.
    pub fn signs(&self) -> [i32; 3] {
        [self.sign(1), self.sign(2), self.sign(3)]
    }
}

/// The constant 4×8 sign matrix `A`: rows 1–3 read out the three measurement
/// directions, row 4 is all ones. Its rows are orthogonal, `A A^T = 8 I`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RepresentationMatrix {
    entries: [[i32; NUM_POINTS]; 4],
}

/// Returns the constant representation matrix. Idempotent.
pub fn build_matrix() -> RepresentationMatrix {
    let mut entries = [[0i32; NUM_POINTS]; 4];
    for point in PhaseSpacePoint::all() {
        let n = point.index() - 1;
        for i in 0..3 {
            entries[i][n] = point.sign(i + 1);
        }
        entries[3][n] = 1;
    }
    RepresentationMatrix { entries }
}

impl RepresentationMatrix {
    /// Integer entries, row-major.
    pub fn entries(&self) -> &[[i32; NUM_POINTS]; 4] {
        &self.entries
    }

    /// Row `i` in `0..4`.
    pub fn row(&self, i: usize) -> [i32; NUM_POINTS] {
        self.entries[i]
    }

    /// Column `n` in `0..8`, equal to `(e_n(1), e_n(2), e_n(3), 1)`.
    pub fn column(&self, n: usize) -> [i32; 4] {
        [
            self.entries[0][n],
            self.entries[1][n],
            self.entries[2][n],
            self.entries[3][n],
        ]
    }

    /// `A q`.
    pub fn apply(&self, q: &[f64; NUM_POINTS]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (row, slot) in self.entries.iter().zip(out.iter_mut()) {
            *slot = row
                .iter()
                .zip(q.iter())
                .map(|(&a, &qn)| a as f64 * qn)
                .sum();
        }
        out
    }

    /// `A^T x`.
    pub fn apply_transpose(&self, x: &[f64; 4]) -> [f64; NUM_POINTS] {
        let mut out = [0.0; NUM_POINTS];
        for (n, slot) in out.iter_mut().enumerate() {
            *slot = (0..4).map(|i| self.entries[i][n] as f64 * x[i]).sum();
        }
        out
    }

    /// `A A^T` in exact integer arithmetic.
    pub fn gram(&self) -> [[i32; 4]; 4] {
        let mut g = [[0i32; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                g[i][j] = (0..NUM_POINTS)
                    .map(|n| self.entries[i][n] * self.entries[j][n])
                    .sum();
            }
        }
        g
    }
}

/// A signed probability distribution on phase space: eight real weights
/// summing to one, any sign.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignedDistribution {
    q: [f64; NUM_POINTS],
}

impl SignedDistribution {
    /// Validates the sum invariant at the default tolerance [`tol::SUM`].
    pub fn new(q: [f64; NUM_POINTS]) -> Result<Self> {
        Self::with_tolerance(q, tol::SUM)
    }

    /// Validates the sum invariant at a caller-chosen tolerance.
    pub fn with_tolerance(q: [f64; NUM_POINTS], tol_sum: f64) -> Result<Self> {
        let sum: f64 = q.iter().sum();
        if (sum - 1.0).abs() > tol_sum {
            return Err(Error::InvalidDistribution { sum });
        }
        Ok(Self { q })
    }

    /// The uniform distribution, weight 1/8 everywhere.
    pub fn uniform() -> Self {
        Self { q: [0.125; NUM_POINTS] }
    }

    /// Component weights in point-index order.
    pub fn components(&self) -> &[f64; NUM_POINTS] {
        &self.q
    }

    // For solver output whose sum is exact by construction.
    pub(crate) fn from_components_unchecked(q: [f64; NUM_POINTS]) -> Self {
        debug_assert!((q.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        Self { q }
    }
}

/// A potential quantum state identified by its Bloch vector `r`; the
/// augmented form `(r1, r2, r3, 1)` is the right-hand side of the
/// representation system.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochVector {
    r: [f64; 3],
}

impl BlochVector {
    pub fn new(r1: f64, r2: f64, r3: f64) -> Self {
        Self { r: [r1, r2, r3] }
    }

    pub fn from_array(r: [f64; 3]) -> Self {
        Self { r }
    }

    pub fn components(&self) -> [f64; 3] {
        self.r
    }

    /// `(r1, r2, r3, 1)`.
    pub fn augmented(&self) -> [f64; 4] {
        [self.r[0], self.r[1], self.r[2], 1.0]
    }

    /// Euclidean length of `r`.
    pub fn norm(&self) -> f64 {
        self.r.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// `|r1| + |r2| + |r3|`, the threshold quantity for nonnegative
    /// representability.
    pub fn l1_norm(&self) -> f64 {
        self.r.iter().map(|v| v.abs()).sum()
    }

    /// Euclidean length of the augmented vector.
    pub fn augmented_norm(&self) -> f64 {
        (1.0 + self.r.iter().map(|v| v * v).sum::<f64>()).sqrt()
    }
}

/// The Pauli basis `(I, sigma_1, sigma_2, sigma_3)`.
pub fn pauli_matrices() -> [Matrix2; 4] {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    [
        [[one, zero], [zero, one]],
        [[zero, one], [one, zero]],
        [[zero, -i], [i, zero]],
        [[one, zero], [zero, -one]],
    ]
}

/// A 2×2 Hermitian matrix with unit trace, a potential quantum state. It is
/// a quantum state proper when additionally positive semi-definite, i.e.
/// when its Bloch vector lies in the unit ball.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HermitianState {
    m: Matrix2,
}

impl HermitianState {
    /// Validates Hermitian symmetry and unit trace within [`tol::HERMITIAN`].
    pub fn new(m: Matrix2) -> Result<Self> {
        Self::with_tolerance(m, tol::HERMITIAN)
    }

    /// Validates at a caller-chosen tolerance.
    pub fn with_tolerance(m: Matrix2, tol_herm: f64) -> Result<Self> {
        let deviation = (m[0][0].im.abs())
            .max(m[1][1].im.abs())
            .max((m[0][1] - m[1][0].conj()).norm());
        if deviation > tol_herm {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = m[0][0].re + m[1][1].re;
        if (trace - 1.0).abs() > tol_herm {
            return Err(Error::InvalidTrace { trace });
        }
        Ok(Self { m })
    }

    pub fn matrix(&self) -> &Matrix2 {
        &self.m
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0].re + self.m[1][1].re
    }

    /// Eigenvalues `(lo, hi)` from the closed form for 2×2 Hermitian
    /// matrices: `mean ± sqrt(((a-d)/2)^2 + |b|^2)`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let a = self.m[0][0].re;
        let d = self.m[1][1].re;
        let mean = 0.5 * (a + d);
        let radius = (0.25 * (a - d) * (a - d) + self.m[0][1].norm_sqr()).sqrt();
        (mean - radius, mean + radius)
    }
}

/// Expectation values `r_i = sum_n q_n e_n(i)`: the first three components
/// of `A q`.
pub fn expectations(q: &SignedDistribution) -> BlochVector {
    let a = build_matrix();
    let aq = a.apply(q.components());
    BlochVector::new(aq[0], aq[1], aq[2])
}

/// Whether `q` represents `r`, i.e. `|A q - (r, 1)|_inf <= tol`.
pub fn represents(q: &SignedDistribution, r: &BlochVector, tolerance: f64) -> bool {
    let a = build_matrix();
    let aq = a.apply(q.components());
    let rhat = r.augmented();
    aq.iter()
        .zip(rhat.iter())
        .all(|(&lhs, &rhs)| (lhs - rhs).abs() <= tolerance)
}

/// The linear map from signed distributions to potential quantum states:
/// `phi(q) = (I + r1 sigma_1 + r2 sigma_2 + r3 sigma_3) / 2` with
/// `r = expectations(q)`. Depends on `q` only through its expectations.
pub fn phi(q: &SignedDistribution) -> HermitianState {
    bloch_to_matrix(&expectations(q))
}

/// The trace-1 Hermitian matrix with Bloch vector `r`.
pub fn bloch_to_matrix(r: &BlochVector) -> HermitianState {
    let [r1, r2, r3] = r.components();
    let m = [
        [
            Complex64::new(0.5 * (1.0 + r3), 0.0),
            Complex64::new(0.5 * r1, -0.5 * r2),
        ],
        [
            Complex64::new(0.5 * r1, 0.5 * r2),
            Complex64::new(0.5 * (1.0 - r3), 0.0),
        ],
    ];
    HermitianState { m }
}

/// Bloch vector of a trace-1 Hermitian matrix: `r_i = Tr(M sigma_i)`.
/// Inverse of [`bloch_to_matrix`] up to rounding.
pub fn matrix_to_bloch(m: &HermitianState) -> BlochVector {
    let mat = m.matrix();
    let r1 = mat[0][1].re + mat[1][0].re;
    let r2 = mat[1][0].im - mat[0][1].im;
    let r3 = mat[0][0].re - mat[1][1].re;
    BlochVector::new(r1, r2, r3)
}

/// Whether `r` is a quantum state: `|r|_2 <= 1` within [`tol::PSD`].
pub fn is_quantum_state(r: &BlochVector) -> bool {
    is_quantum_state_with_tol(r, tol::PSD)
}

/// Ball membership at a caller-chosen tolerance. The norm criterion is
/// cross-checked against the eigenvalues `(1 ± |r|_2)/2` of the associated
/// matrix; the two agree away from exact ties with the tolerance itself.
pub fn is_quantum_state_with_tol(r: &BlochVector, tol_psd: f64) -> bool {
    let by_norm = r.norm() <= 1.0 + tol_psd;
    let (lo, _) = bloch_to_matrix(r).eigenvalues();
    let by_eigenvalue = lo >= -0.5 * tol_psd - 1e-15;
    debug_assert_eq!(by_norm, by_eigenvalue);
    by_norm || by_eigenvalue
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    // The displayed matrix, transcribed verbatim.
    const DISPLAYED: [[i32; 8]; 4] = [
        [1, -1, 1, -1, 1, -1, 1, -1],
        [1, 1, -1, -1, 1, 1, -1, -1],
        [1, 1, 1, 1, -1, -1, -1, -1],
        [1, 1, 1, 1, 1, 1, 1, 1],
    ];

    const INV_SQRT3: f64 = 0.577_350_269_189_625_8;

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
    fn matrix_matches_display() {
        assert_eq!(*build_matrix().entries(), DISPLAYED);
    }

    #[test]
    fn matrix_columns_are_sign_triples() {
        let a = build_matrix();
        for point in PhaseSpacePoint::all() {
            let [e1, e2, e3] = point.signs();
            assert_eq!(a.column(point.index() - 1), [e1, e2, e3, 1]);
        }
    }

    #[test]
    fn points_enumerate_all_sign_triples() {
        let mut seen = [false; 8];
        for point in PhaseSpacePoint::all() {
            let [e1, e2, e3] = point.signs();
            let code = ((e1 < 0) as usize) | ((e2 < 0) as usize) << 1 | ((e3 < 0) as usize) << 2;
            assert!(!seen[code], "duplicate sign triple");
            seen[code] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn gram_is_eight_identity() {
        let g = build_matrix().gram();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(g[i][j], if i == j { 8 } else { 0 });
            }
        }
    }

    #[test]
    fn corner_columns() {
        let a = build_matrix();
        assert_eq!(a.column(0), [1, 1, 1, 1]);
        assert_eq!(a.column(7), [-1, -1, -1, 1]);
        assert_eq!(a.row(3), [1; 8]);
    }

    #[test]
    fn expectations_uniform_is_origin() {
        let r = expectations(&SignedDistribution::uniform());
        assert_eq!(r.components(), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn expectations_point_mass_is_column_one() {
        let q = SignedDistribution::new([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(expectations(&q).components(), [1.0, 1.0, 1.0]);
    }

    #[test]
    fn expectations_of_diagonal_qstar() {
        let r = expectations(&diagonal_qstar());
        for c in r.components() {
            assert_abs_diff_eq!(c, INV_SQRT3, epsilon = 1e-14);
        }
    }

    #[test]
    fn represents_examples() {
        let origin = BlochVector::new(0.0, 0.0, 0.0);
        assert!(represents(&SignedDistribution::uniform(), &origin, 1e-12));

        let diag = BlochVector::new(INV_SQRT3, INV_SQRT3, INV_SQRT3);
        assert!(represents(&diagonal_qstar(), &diag, 1e-12));

        let point = SignedDistribution::new([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(!represents(&point, &origin, 1e-12));
    }

    #[test]
    fn represents_forces_unit_fourth_component() {
        let a = build_matrix();
        let q = diagonal_qstar();
        let diag = BlochVector::new(INV_SQRT3, INV_SQRT3, INV_SQRT3);
        assert!(represents(&q, &diag, 1e-12));
        let aq = a.apply(q.components());
        assert_abs_diff_eq!(aq[3], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn sum_invariant_enforced() {
        let err = SignedDistribution::new([0.25; 8]).unwrap_err();
        assert!(matches!(err, Error::InvalidDistribution { .. }));
    }

    #[test]
    fn phi_uniform_is_half_identity() {
        let m = phi(&SignedDistribution::uniform());
        let mat = m.matrix();
        assert_eq!(mat[0][0], Complex64::new(0.5, 0.0));
        assert_eq!(mat[1][1], Complex64::new(0.5, 0.0));
        assert_eq!(mat[0][1], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn phi_point_mass_is_pauli_sum() {
        let q = SignedDistribution::new([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let m = phi(&q);
        let [_, s1, s2, s3] = pauli_matrices();
        let identity = pauli_matrices()[0];
        for row in 0..2 {
            for col in 0..2 {
                let expected =
                    0.5 * (identity[row][col] + s1[row][col] + s2[row][col] + s3[row][col]);
                assert!((m.matrix()[row][col] - expected).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn phi_diagonal_qstar() {
        let m = phi(&diagonal_qstar());
        assert_abs_diff_eq!(m.matrix()[0][0].re, 0.5 * (1.0 + INV_SQRT3), epsilon = 1e-14);
        assert_abs_diff_eq!(m.matrix()[1][1].re, 0.5 * (1.0 - INV_SQRT3), epsilon = 1e-14);
    }

    #[test]
    fn bloch_matrix_round_trip() {
        let north = BlochVector::new(0.0, 0.0, 1.0);
        let m = bloch_to_matrix(&north);
        assert_abs_diff_eq!(m.matrix()[0][0].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.matrix()[1][1].re, 0.0, epsilon = 1e-15);
        assert_eq!(matrix_to_bloch(&m).components(), [0.0, 0.0, 1.0]);
    }

    #[test]
    fn hermitian_validation() {
        let bad = [
            [Complex64::new(0.5, 0.0), Complex64::new(0.1, 0.2)],
            [Complex64::new(0.1, 0.2), Complex64::new(0.5, 0.0)],
        ];
        assert!(matches!(
            HermitianState::new(bad),
            Err(Error::NotHermitian { .. })
        ));

        let bad_trace = [
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)],
        ];
        assert!(matches!(
            HermitianState::new(bad_trace),
            Err(Error::InvalidTrace { .. })
        ));
    }

    #[test]
    fn quantum_state_classification() {
        assert!(is_quantum_state(&BlochVector::new(0.0, 0.0, 0.0)));
        assert!(is_quantum_state(&BlochVector::new(
            INV_SQRT3, INV_SQRT3, INV_SQRT3
        )));
        assert!(!is_quantum_state(&BlochVector::new(1.0, 1.0, 1.0)));
        // (1,1,1) has a negative eigenvalue (1 - sqrt(3))/2.
        let (lo, _) = bloch_to_matrix(&BlochVector::new(1.0, 1.0, 1.0)).eigenvalues();
        assert_abs_diff_eq!(lo, 0.5 * (1.0 - 3.0f64.sqrt()), epsilon = 1e-14);
    }

    #[test]
    fn eigenvalues_match_norm_formula() {
        // (1 ± |r|)/2 for a grid of directions and radii.
        for &rho in &[0.0, 0.3, 0.9, 1.0, 1.3] {
            for &dir in &[[1.0, 0.0, 0.0], [0.6, 0.0, 0.8], [0.5, 0.5, 0.7]] {
                let norm = (dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]).sqrt();
                let r = BlochVector::new(
                    rho * dir[0] / norm,
                    rho * dir[1] / norm,
                    rho * dir[2] / norm,
                );
                let (lo, hi) = bloch_to_matrix(&r).eigenvalues();
                assert_abs_diff_eq!(lo, 0.5 * (1.0 - rho), epsilon = 1e-12);
                assert_abs_diff_eq!(hi, 0.5 * (1.0 + rho), epsilon = 1e-12);
            }
        }
    }
}
