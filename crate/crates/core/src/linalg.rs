//! Fixed-size 3×3 linear algebra for the mixture components.

use crate::math::{ln, sqrt};

/// Row-major 3×3 matrix.
pub type Mat3 = [[f64; 3]; 3];

pub(crate) const IDENTITY: Mat3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

/// Lower-triangular Cholesky factor `L` with `L Lᵀ = A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Cholesky3 {
    lower: Mat3,
}

impl Cholesky3 {
    /// Factors a symmetric matrix, reading only its lower triangle.
    /// Returns `None` unless every pivot is strictly positive and finite.
    pub(crate) fn factor(a: &Mat3) -> Option<Self> {
        let mut l = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..=i {
                let mut sum = a[i][j];
                for p in 0..j {
                    sum -= l[i][p] * l[j][p];
                }
                if i == j {
                    if !(sum > 0.0) || !sum.is_finite() {
                        return None;
                    }
                    l[i][i] = sqrt(sum);
                } else {
                    l[i][j] = sum / l[j][j];
                }
            }
        }
        Some(Self { lower: l })
    }

    /// `ln det A`.
    pub(crate) fn log_det(&self) -> f64 {
        2.0 * (ln(self.lower[0][0]) + ln(self.lower[1][1]) + ln(self.lower[2][2]))
    }

    /// `‖L⁻¹ v‖²`, the quadratic form `vᵀ A⁻¹ v`.
    pub(crate) fn mahalanobis_sq(&self, v: &[f64; 3]) -> f64 {
        let l = &self.lower;
        let z0 = v[0] / l[0][0];
        let z1 = (v[1] - l[1][0] * z0) / l[1][1];
        let z2 = (v[2] - l[2][0] * z0 - l[2][1] * z1) / l[2][2];
        z0 * z0 + z1 * z1 + z2 * z2
    }

    fn forward(&self, v: &[f64; 3]) -> [f64; 3] {
        let l = &self.lower;
        let z0 = v[0] / l[0][0];
        let z1 = (v[1] - l[1][0] * z0) / l[1][1];
        let z2 = (v[2] - l[2][0] * z0 - l[2][1] * z1) / l[2][2];
        [z0, z1, z2]
    }

    /// `tr(A⁻¹ S)` for symmetric `S`, as `tr(L⁻¹ S L⁻ᵀ)`.
    pub(crate) fn trace_solve(&self, s: &Mat3) -> f64 {
        // W = L⁻¹ S column by column; S symmetric so its rows are its columns
        let w = [self.forward(&s[0]), self.forward(&s[1]), self.forward(&s[2])];
        // w[c] is column c of W; rows of W are columns of Wᵀ
        let mut total = 0.0;
        for r in 0..3 {
            let v = self.forward(&[w[0][r], w[1][r], w[2][r]]);
            total += v[r];
        }
        total
    }
}

pub(crate) fn trace(a: &Mat3) -> f64 {
    a[0][0] + a[1][1] + a[2][2]
}
