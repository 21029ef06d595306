//! Information criteria and choice of the number of clusters.
//!
//! Both criteria are minimized. The adjusted criterion adds
//! `penalty_scale · Σⱼ Σ_{a<b} |ρⱼ,ab|` to BIC, which discourages thin,
//! strongly correlated clusters that plain BIC tends to favor.

use alloc::vec::Vec;
use core::fmt;
use core::num::ParseFloatError;
use core::str::FromStr;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{FitError, SelectionError};
use crate::math::ln;
use crate::mixture::{fit_em, EmConfig, FittedMixture};
use crate::pitch::Point;

/// Scores within this distance count as tied; the smaller k wins a tie.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Free parameters of a `k`-component model: `k − 1` weights plus, per
/// component, 3 means, 3 standard deviations and 3 correlations.
pub fn parameter_count(k: usize) -> usize {
    10 * k - 1
}

/// `−2 ln L + p(k) ln n`.
pub fn bic(fit: &FittedMixture, n: usize) -> f64 {
    -2.0 * fit.log_likelihood + parameter_count(fit.k()) as f64 * ln(n as f64)
}

/// Sum of absolute off-diagonal correlations over all components.
pub fn total_abs_correlation(fit: &FittedMixture) -> f64 {
    fit.components
        .iter()
        .flat_map(|c| c.off_diagonal_correlations())
        .map(f64::abs)
        .sum()
}

/// Plain and adjusted BIC of one fit.
pub fn bic_adj(fit: &FittedMixture, n: usize, penalty_scale: f64) -> CriterionScore {
    let bic = bic(fit, n);
    let correlation_penalty = penalty_scale * total_abs_correlation(fit);
    CriterionScore {
        k: fit.k(),
        log_likelihood: fit.log_likelihood,
        converged: fit.converged,
        bic,
        correlation_penalty,
        bic_adj: bic + correlation_penalty,
        penalty_scale,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionScore {
    pub k: usize,
    pub log_likelihood: f64,
    pub converged: bool,
    pub bic: f64,
    pub bic_adj: f64,
    /// Cost per unit of absolute correlation.
    pub penalty_scale: f64,
    pub correlation_penalty: f64,
}

impl CriterionScore {
    pub fn value(&self, criterion: Criterion) -> f64 {
        match criterion {
            Criterion::Bic => self.bic,
            Criterion::BicAdj => self.bic_adj,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    Bic,
    #[default]
    #[serde(rename = "bicadj")]
    BicAdj,
}

/// Correlation penalty scale; `Auto` is `ln n`, the BIC cost of one parameter.
///
/// Serialized as the string `"auto"` or a bare number.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum PenaltyScale {
    #[default]
    Auto,
    Fixed(f64),
}

impl PenaltyScale {
    pub fn resolve(self, n: usize) -> f64 {
        match self {
            PenaltyScale::Auto => ln(n as f64),
            PenaltyScale::Fixed(v) => v,
        }
    }
}

impl FromStr for PenaltyScale {
    type Err = ParseFloatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            Ok(PenaltyScale::Auto)
        } else {
            s.parse().map(PenaltyScale::Fixed)
        }
    }
}

impl Serialize for PenaltyScale {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            PenaltyScale::Auto => serializer.serialize_str("auto"),
            PenaltyScale::Fixed(v) => serializer.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for PenaltyScale {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ScaleVisitor;

        impl Visitor<'_> for ScaleVisitor {
            type Value = PenaltyScale;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("\"auto\" or a non-negative number")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                v.parse().map_err(|_| E::invalid_value(de::Unexpected::Str(v), &self))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Self::Value, E> {
                Ok(PenaltyScale::Fixed(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
                Ok(PenaltyScale::Fixed(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
                Ok(PenaltyScale::Fixed(v as f64))
            }
        }

        deserializer.deserialize_any(ScaleVisitor)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SelectConfig {
    pub k_min: usize,
    pub k_max: usize,
    pub criterion: Criterion,
    pub penalty_scale: PenaltyScale,
    #[serde(skip)]
    pub em: EmConfig,
}

impl Default for SelectConfig {
    fn default() -> Self {
        Self {
            k_min: 1,
            k_max: 9,
            criterion: Criterion::BicAdj,
            penalty_scale: PenaltyScale::Auto,
            em: EmConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub best: FittedMixture,
    /// Index of the chosen fit in `scores`.
    pub best_index: usize,
    /// One entry per successfully fitted k, ascending.
    pub scores: Vec<CriterionScore>,
    /// k values whose fit failed, with the reason.
    pub failed: Vec<(usize, FitError)>,
    pub criterion: Criterion,
}

impl Selection {
    pub fn best_score(&self) -> &CriterionScore {
        &self.scores[self.best_index]
    }
}

/// Index of the minimizing score, preferring the earlier (smaller k) entry
/// when two scores are within [`TIE_TOLERANCE`].
pub fn choose(scores: &[CriterionScore], criterion: Criterion) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, s) in scores.iter().enumerate() {
        let v = s.value(criterion);
        if v.is_nan() {
            continue;
        }
        match best {
            Some(b) if v >= scores[b].value(criterion) - TIE_TOLERANCE => {}
            _ => best = Some(i),
        }
    }
    best
}

/// Fits every k in `[k_min, k_max]` and keeps the one minimizing the
/// configured criterion.
pub fn select_k(points: &[Point], config: &SelectConfig) -> Result<Selection, SelectionError> {
    let (k_min, k_max) = (config.k_min, config.k_max);
    if k_min == 0 || k_min > k_max {
        return Err(SelectionError::InvalidRange { k_min, k_max });
    }
    let n = points.len();
    if n < 4 * k_max {
        return Err(SelectionError::TooFewPoints { n, k_max, required: 4 * k_max });
    }
    let scale = config.penalty_scale.resolve(n);
    if !(scale >= 0.0 && scale.is_finite()) {
        return Err(SelectionError::InvalidPenaltyScale);
    }

    let mut fits = Vec::new();
    let mut scores = Vec::new();
    let mut failed = Vec::new();
    for k in k_min..=k_max {
        match fit_em(points, k, &config.em) {
            Ok(fit) => {
                scores.push(bic_adj(&fit, n, scale));
                fits.push(fit);
            }
            Err(e) => failed.push((k, e)),
        }
    }
    let best_index = choose(&scores, config.criterion).ok_or(SelectionError::NoViableK { k_min, k_max })?;
    Ok(Selection {
        best: fits.swap_remove(best_index),
        best_index,
        scores,
        failed,
        criterion: config.criterion,
    })
}
