//! Three-dimensional Gaussian mixtures with full per-component covariance.
//!
//! A component stores its covariance decomposed as `diag(σ) · R · diag(σ)`:
//! per-axis standard deviations `σ` and a correlation matrix `R`. The
//! correlations are what the adjusted information criterion penalizes.

mod em;
mod init;

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::FitError;
use crate::linalg::{Cholesky3, Mat3};
use crate::math::{ln, sqrt, LN_2PI};
use crate::pitch::Point;

pub use em::{e_step, fit_em, m_step, posterior_assign};

/// One Gaussian cluster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureComponent {
    pub mean: Point,
    pub stddev: [f64; 3],
    /// Symmetric, unit diagonal, off-diagonals in `[-1, 1]`.
    pub correlation: Mat3,
    pub weight: f64,
}

impl MixtureComponent {
    /// Splits a covariance matrix into standard deviations and correlations.
    ///
    /// Off-diagonal correlations are clamped into `[-1, 1]` and the diagonal
    /// is set to exactly one.
    pub fn from_covariance(mean: Point, covariance: &Mat3, weight: f64) -> Self {
        let stddev = [
            sqrt(covariance[0][0]),
            sqrt(covariance[1][1]),
            sqrt(covariance[2][2]),
        ];
        let mut correlation = crate::linalg::IDENTITY;
        for a in 0..3 {
            for b in (a + 1)..3 {
                let rho = (covariance[a][b] / (stddev[a] * stddev[b])).clamp(-1.0, 1.0);
                correlation[a][b] = rho;
                correlation[b][a] = rho;
            }
        }
        Self { mean, stddev, correlation, weight }
    }

    /// Component with independent axes.
    pub fn spherical(mean: Point, stddev: [f64; 3], weight: f64) -> Self {
        Self { mean, stddev, correlation: crate::linalg::IDENTITY, weight }
    }

    pub fn covariance(&self) -> Mat3 {
        let s = &self.stddev;
        let mut cov = [[0.0; 3]; 3];
        for a in 0..3 {
            for b in 0..3 {
                cov[a][b] = if a == b { s[a] * s[a] } else { s[a] * s[b] * self.correlation[a][b] };
            }
        }
        cov
    }

    /// `[ρ(speed, back), ρ(speed, side), ρ(back, side)]`.
    pub fn off_diagonal_correlations(&self) -> [f64; 3] {
        [self.correlation[0][1], self.correlation[0][2], self.correlation[1][2]]
    }

    /// Cholesky-factored form for repeated density evaluation.
    pub fn factor(&self) -> Option<GaussianFactor> {
        let chol = Cholesky3::factor(&self.covariance())?;
        Some(GaussianFactor {
            mean: self.mean,
            log_norm: -0.5 * (3.0 * LN_2PI + chol.log_det()),
            chol,
        })
    }

    /// Log multivariate normal density of `x`, ignoring the weight.
    ///
    /// Fails with [`FitError::SingularCovariance`] (component index 0) when
    /// the implied covariance cannot be factored.
    pub fn log_density(&self, x: &Point) -> Result<f64, FitError> {
        self.factor()
            .map(|f| f.log_density(x))
            .ok_or(FitError::SingularCovariance { component: 0 })
    }
}

/// A component's mean with the Cholesky factor of its covariance and the
/// log normalizing constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianFactor {
    mean: Point,
    chol: Cholesky3,
    log_norm: f64,
}

impl GaussianFactor {
    pub fn log_density(&self, x: &Point) -> f64 {
        let d = [x[0] - self.mean[0], x[1] - self.mean[1], x[2] - self.mean[2]];
        self.log_norm - 0.5 * self.chol.mahalanobis_sq(&d)
    }

    /// `vᵀ Σ⁻¹ v` for `v = x - mean`.
    pub fn mahalanobis_sq(&self, x: &Point) -> f64 {
        let d = [x[0] - self.mean[0], x[1] - self.mean[1], x[2] - self.mean[2]];
        self.chol.mahalanobis_sq(&d)
    }
}

/// Row-major `n × k` matrix of posterior membership probabilities.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Responsibilities {
    k: usize,
    values: Vec<f64>,
}

impl Responsibilities {
    /// Builds from row-major values; `values.len()` must be a multiple of `k`.
    pub fn from_row_major(k: usize, values: Vec<f64>) -> Option<Self> {
        if k == 0 || values.len() % k != 0 {
            return None;
        }
        Some(Self { k, values })
    }

    /// One-hot rows from hard assignments.
    pub fn one_hot(assignments: &[usize], k: usize) -> Self {
        let mut values = alloc::vec![0.0; assignments.len() * k];
        for (i, &a) in assignments.iter().enumerate() {
            values[i * k + a] = 1.0;
        }
        Self { k, values }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        if self.k == 0 {
            0
        } else {
            self.values.len() / self.k
        }
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.k..(i + 1) * self.k]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.k.max(1))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.k + j]
    }

    /// Most probable component per row; ties go to the lowest index.
    pub fn argmax_rows(&self) -> Vec<usize> {
        self.rows().map(argmax).collect()
    }

    /// Σᵢ r_ij for each column.
    pub fn column_sums(&self) -> Vec<f64> {
        let mut sums = alloc::vec![0.0; self.k];
        for row in self.rows() {
            for (s, r) in sums.iter_mut().zip(row) {
                *s += r;
            }
        }
        sums
    }
}

pub(crate) fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (j, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = j;
        }
    }
    best
}

/// Fitting hyper-parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EmConfig {
    pub seed: u64,
    /// Independent initializations; the highest final log-likelihood wins.
    pub restarts: usize,
    #[serde(alias = "max_iter")]
    pub max_iterations: usize,
    /// Stop when the relative log-likelihood change falls below this.
    #[serde(alias = "tol")]
    pub tolerance: f64,
    /// Covariance ridge, as a fraction of the mean per-axis variance.
    pub ridge: f64,
}

impl Default for EmConfig {
    fn default() -> Self {
        Self { seed: 42, restarts: 8, max_iterations: 1000, tolerance: 1e-8, ridge: 1e-6 }
    }
}

impl EmConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), FitError> {
        if self.restarts == 0 {
            return Err(FitError::InvalidConfig("restarts must be at least 1"));
        }
        if self.max_iterations == 0 {
            return Err(FitError::InvalidConfig("max_iterations must be at least 1"));
        }
        if !(self.tolerance >= 0.0 && self.tolerance.is_finite()) {
            return Err(FitError::InvalidConfig("tolerance must be finite and non-negative"));
        }
        if !(self.ridge >= 0.0 && self.ridge.is_finite()) {
            return Err(FitError::InvalidConfig("ridge must be finite and non-negative"));
        }
        Ok(())
    }
}

/// A fitted mixture and its fit diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedMixture {
    pub components: Vec<MixtureComponent>,
    pub log_likelihood: f64,
    /// EM iterations run by the winning restart.
    pub iterations: usize,
    pub converged: bool,
    /// Base seed the fit was run with.
    pub seed: u64,
    /// Index of the winning restart.
    pub restart: usize,
    /// Posterior memberships of the training points. Not persisted.
    #[serde(skip)]
    pub responsibilities: Responsibilities,
    /// Log-likelihood after initialization and after every iteration.
    #[serde(skip)]
    pub log_likelihood_trace: Vec<f64>,
}

impl FittedMixture {
    pub fn k(&self) -> usize {
        self.components.len()
    }

    /// Hard assignments of the training points.
    pub fn assignments(&self) -> Vec<usize> {
        self.responsibilities.argmax_rows()
    }

    pub fn factors(&self) -> Result<Vec<GaussianFactor>, FitError> {
        factor_all(&self.components)
    }

    /// Argmax-posterior cluster of every point.
    pub fn assign_points(&self, points: &[Point]) -> Result<Vec<usize>, FitError> {
        let (resp, _) = e_step(&self.components, points)?;
        Ok(resp.argmax_rows())
    }

    /// Log-likelihood of `points` under the current components.
    pub fn recompute_log_likelihood(&self, points: &[Point]) -> Result<f64, FitError> {
        e_step(&self.components, points).map(|(_, ll)| ll)
    }

    /// Largest decrease between consecutive entries of the trace (0 if none).
    pub fn max_log_likelihood_drop(&self) -> f64 {
        self.log_likelihood_trace
            .windows(2)
            .map(|w| w[0] - w[1])
            .fold(0.0, f64::max)
    }
}

pub(crate) fn factor_all(components: &[MixtureComponent]) -> Result<Vec<GaussianFactor>, FitError> {
    components
        .iter()
        .enumerate()
        .map(|(j, c)| c.factor().ok_or(FitError::SingularCovariance { component: j }))
        .collect()
}

pub(crate) fn ln_weights(components: &[MixtureComponent]) -> Vec<f64> {
    components.iter().map(|c| ln(c.weight)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::exp;

    fn det3(m: &Mat3) -> f64 {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    fn inverse3(m: &Mat3) -> Mat3 {
        let d = det3(m);
        let mut inv = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
                let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
                inv[i][j] = (m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]) / d;
            }
        }
        inv
    }

    /// Dense textbook evaluation: (2π)^(-3/2) |Σ|^(-1/2) exp(-½ dᵀΣ⁻¹d).
    fn dense_density(c: &MixtureComponent, x: &Point) -> f64 {
        let cov = c.covariance();
        let inv = inverse3(&cov);
        let d = [x[0] - c.mean[0], x[1] - c.mean[1], x[2] - c.mean[2]];
        let mut q = 0.0;
        for a in 0..3 {
            for b in 0..3 {
                q += d[a] * inv[a][b] * d[b];
            }
        }
        let two_pi = 2.0 * core::f64::consts::PI;
        exp(-0.5 * q) / (sqrt(two_pi * two_pi * two_pi) * sqrt(det3(&cov)))
    }

    #[test]
    fn standard_normal_at_mode() {
        let c = MixtureComponent::spherical([1.0, 2.0, 3.0], [1.0; 3], 1.0);
        let at_mode = c.log_density(&[1.0, 2.0, 3.0]).unwrap();
        assert!((at_mode - (-1.5 * LN_2PI)).abs() < 1e-15);
        let one_off = c.log_density(&[1.0, 3.0, 3.0]).unwrap();
        assert!((one_off - (at_mode - 0.5)).abs() < 1e-15);
    }

    #[test]
    fn matches_dense_formula() {
        let cases = [
            (
                MixtureComponent {
                    mean: [90.0, 120.0, -40.0],
                    stddev: [1.3, 14.0, 9.0],
                    correlation: [[1.0, 0.4, -0.2], [0.4, 1.0, 0.1], [-0.2, 0.1, 1.0]],
                    weight: 0.4,
                },
                [91.2, 101.0, -33.5],
            ),
            (
                MixtureComponent {
                    mean: [0.0, 0.0, 0.0],
                    stddev: [0.5, 2.0, 1.0],
                    correlation: [[1.0, -0.7, 0.3], [-0.7, 1.0, -0.45], [0.3, -0.45, 1.0]],
                    weight: 1.0,
                },
                [0.3, -1.0, 2.0],
            ),
        ];
        for (c, x) in &cases {
            let got = c.log_density(x).unwrap();
            let want = ln(dense_density(c, x));
            assert!(((got - want) / want).abs() < 1e-10, "{got} vs {want}");
        }
    }

    #[test]
    fn covariance_round_trip() {
        let cov = [[4.0, 1.2, -0.5], [1.2, 9.0, 2.0], [-0.5, 2.0, 1.0]];
        let c = MixtureComponent::from_covariance([0.0; 3], &cov, 1.0);
        assert_eq!(c.stddev, [2.0, 3.0, 1.0]);
        assert_eq!(c.correlation[0][0], 1.0);
        assert!((c.correlation[0][1] - 0.2).abs() < 1e-15);
        let back = c.covariance();
        for a in 0..3 {
            for b in 0..3 {
                assert!((back[a][b] - cov[a][b]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn singular_component_is_reported() {
        let c = MixtureComponent {
            mean: [0.0; 3],
            stddev: [1.0; 3],
            correlation: [[1.0, 1.0, 0.0], [1.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            weight: 1.0,
        };
        assert_eq!(c.log_density(&[0.0; 3]), Err(FitError::SingularCovariance { component: 0 }));
    }

    #[test]
    fn argmax_ties_go_low() {
        assert_eq!(argmax(&[0.5, 0.5]), 0);
        assert_eq!(argmax(&[0.1, 0.6, 0.3]), 1);
    }
}
