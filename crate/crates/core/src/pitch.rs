//! Pitch records and validated single-pitcher datasets.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::DataError;

/// A pitch in model space: `[start_speed, back_spin, side_spin]`.
pub type Point = [f64; 3];

/// Coordinate names in [`Point`] order.
pub const AXIS_NAMES: [&str; 3] = ["start_speed", "back_spin", "side_spin"];

/// One pitch.
///
/// Spin is positive for back spin and for left-to-right side spin. Both spin
/// columns share whatever unit the input uses; labeling thresholds are read
/// in that same unit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PitchRecord {
    pub pitcher_id: String,
    /// Release speed in mph.
    pub start_speed: f64,
    pub back_spin: f64,
    pub side_spin: f64,
    pub season: Option<String>,
    /// External classification kept for comparison reports only.
    pub reference_label: Option<String>,
    pub is_intentional_ball: bool,
}

impl PitchRecord {
    pub fn new(pitcher_id: impl Into<String>, start_speed: f64, back_spin: f64, side_spin: f64) -> Self {
        Self {
            pitcher_id: pitcher_id.into(),
            start_speed,
            back_spin,
            side_spin,
            season: None,
            reference_label: None,
            is_intentional_ball: false,
        }
    }

    pub fn point(&self) -> Point {
        [self.start_speed, self.back_spin, self.side_spin]
    }

    pub fn validate(&self) -> Result<(), DataError> {
        if self.pitcher_id.is_empty() {
            return Err(DataError::MissingPitcherId);
        }
        if !self.start_speed.is_finite() {
            return Err(DataError::NonFinite { field: "start_speed" });
        }
        if !(self.start_speed > 0.0 && self.start_speed < 200.0) {
            return Err(DataError::SpeedOutOfRange(self.start_speed));
        }
        if !self.back_spin.is_finite() {
            return Err(DataError::NonFinite { field: "back_spin" });
        }
        if !self.side_spin.is_finite() {
            return Err(DataError::NonFinite { field: "side_spin" });
        }
        Ok(())
    }
}

/// Non-empty, validated pitches of a single pitcher, in input order.
///
/// Immutable after construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PitchDataset {
    records: Vec<PitchRecord>,
}

impl PitchDataset {
    pub fn new(records: Vec<PitchRecord>) -> Result<Self, DataError> {
        let first = records.first().ok_or(DataError::EmptyDataset)?;
        for r in &records {
            r.validate()?;
            if r.pitcher_id != first.pitcher_id {
                return Err(DataError::MixedPitchers {
                    first: first.pitcher_id.clone(),
                    other: r.pitcher_id.clone(),
                });
            }
        }
        Ok(Self { records })
    }

    pub fn records(&self) -> &[PitchRecord] {
        &self.records
    }

    pub fn into_records(self) -> Vec<PitchRecord> {
        self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn pitcher_id(&self) -> &str {
        &self.records[0].pitcher_id
    }

    pub fn points(&self) -> Vec<Point> {
        self.records.iter().map(PitchRecord::point).collect()
    }

    /// Per-coordinate arithmetic means.
    pub fn column_means(&self) -> Point {
        let mut sum = [0.0; 3];
        for r in &self.records {
            let p = r.point();
            for d in 0..3 {
                sum[d] += p[d];
            }
        }
        let n = self.records.len() as f64;
        [sum[0] / n, sum[1] / n, sum[2] / n]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterOutcome {
    pub dataset: PitchDataset,
    /// Number of intentional balls removed.
    pub removed: usize,
}

/// Drops intentional balls, preserving record order.
pub fn filter_pitches(dataset: PitchDataset) -> Result<FilterOutcome, DataError> {
    let before = dataset.len();
    let kept: Vec<PitchRecord> = dataset
        .records
        .into_iter()
        .filter(|r| !r.is_intentional_ball)
        .collect();
    let removed = before - kept.len();
    if kept.is_empty() {
        return Err(DataError::EmptyDataset);
    }
    Ok(FilterOutcome { dataset: PitchDataset { records: kept }, removed })
}
