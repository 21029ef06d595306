//! Versioned JSON model archives.

use std::path::Path;

use pitchmbc_core::{CriterionScore, FittedMixture, LabeledModel, PitchType, RuleCheck};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

pub const FORMAT_VERSION: u32 = 1;

/// A fitted, labeled model and the settings that produced it.
///
/// The per-point responsibilities are left out; they are recomputable from
/// the components and the data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelArchive {
    pub format_version: u32,
    pub pitcher_id: String,
    /// Pitches used for the fit, after filtering.
    pub n: usize,
    pub fit: FittedMixture,
    pub labels: Vec<PitchType>,
    pub anchor_index: usize,
    pub rule_trace: Vec<Vec<RuleCheck>>,
    pub score_table: Vec<CriterionScore>,
    /// `(k, reason)` for every k whose fit failed.
    #[serde(default)]
    pub failed_k: Vec<(usize, String)>,
    pub config: RunConfig,
}

#[derive(Debug, thiserror::Error)]
pub enum ArchiveError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("malformed archive: {0}")]
    Json(#[from] serde_json::Error),
    #[error("archive format version {found} is not supported (expected {expected})")]
    VersionMismatch { found: u64, expected: u32 },
}

#[derive(Deserialize)]
struct VersionProbe {
    format_version: u64,
}

impl ModelArchive {
    pub fn new(
        pitcher_id: String,
        n: usize,
        model: LabeledModel,
        score_table: Vec<CriterionScore>,
        failed_k: Vec<(usize, String)>,
        config: RunConfig,
    ) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            pitcher_id,
            n,
            fit: model.fit,
            labels: model.labels,
            anchor_index: model.anchor_index,
            rule_trace: model.rule_trace,
            score_table,
            failed_k,
            config,
        }
    }

    pub fn labeled_model(&self) -> LabeledModel {
        LabeledModel {
            fit: self.fit.clone(),
            labels: self.labels.clone(),
            anchor_index: self.anchor_index,
            rule_trace: self.rule_trace.clone(),
        }
    }

    /// Pretty JSON with a trailing newline. Floats are written in their
    /// shortest round-trip form, so [`ModelArchive::from_json`] restores
    /// them bit for bit.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("archive fields are serializable");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self, ArchiveError> {
        let probe: VersionProbe = serde_json::from_str(text)?;
        if probe.format_version != u64::from(FORMAT_VERSION) {
            return Err(ArchiveError::VersionMismatch { found: probe.format_version, expected: FORMAT_VERSION });
        }
        Ok(serde_json::from_str(text)?)
    }

    pub fn save(&self, path: &Path) -> Result<(), ArchiveError> {
        Ok(std::fs::write(path, self.to_json())?)
    }

    pub fn load(path: &Path) -> Result<Self, ArchiveError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}
