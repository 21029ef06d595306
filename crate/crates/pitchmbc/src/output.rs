//! CSV reports: score tables, labeled pitches, confusion summaries and
//! stability runs.

use std::collections::BTreeMap;
use std::io::Write;

use pitchmbc_core::{CriterionScore, PitchType, Replication, StabilityReport};

type CsvResult = Result<(), csv::Error>;

/// One row per k: `k,loglik,bic,penalty,bic_adj,converged`. Failed fits
/// get empty numeric cells and `failed` in the last column.
pub fn write_scores(sink: impl Write, scores: &[CriterionScore], failed: &[(usize, String)]) -> CsvResult {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["k", "loglik", "bic", "penalty", "bic_adj", "converged"])?;
    let mut rows: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for s in scores {
        rows.insert(
            s.k,
            vec![
                s.k.to_string(),
                s.log_likelihood.to_string(),
                s.bic.to_string(),
                s.correlation_penalty.to_string(),
                s.bic_adj.to_string(),
                s.converged.to_string(),
            ],
        );
    }
    for (k, _) in failed {
        rows.insert(*k, vec![k.to_string(), String::new(), String::new(), String::new(), String::new(), "failed".into()]);
    }
    for row in rows.values() {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

/// A classified pitch.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPitch {
    pub row_id: usize,
    pub cluster_index: usize,
    pub pitch_type: PitchType,
    pub posterior_max: f64,
    pub reference_label: Option<String>,
}

pub fn write_labeled(sink: impl Write, pitches: &[LabeledPitch]) -> CsvResult {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["row_id", "cluster_index", "pitch_type", "posterior_max", "reference_label"])?;
    for p in pitches {
        w.write_record([
            p.row_id.to_string(),
            p.cluster_index.to_string(),
            p.pitch_type.name().to_string(),
            p.posterior_max.to_string(),
            p.reference_label.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Counts of predicted pitch type per reference label. Pitches without a
/// reference label are left out.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Confusion {
    pub counts: BTreeMap<String, BTreeMap<PitchType, usize>>,
}

impl Confusion {
    pub fn from_pitches(pitches: &[LabeledPitch]) -> Self {
        let mut counts: BTreeMap<String, BTreeMap<PitchType, usize>> = BTreeMap::new();
        for p in pitches {
            if let Some(reference) = &p.reference_label {
                *counts.entry(reference.clone()).or_default().entry(p.pitch_type).or_default() += 1;
            }
        }
        Self { counts }
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn row_total(&self, reference: &str) -> usize {
        self.counts.get(reference).map_or(0, |row| row.values().sum())
    }

    /// `reference_label,<one column per pitch type>,total`.
    pub fn write(&self, sink: impl Write) -> CsvResult {
        let mut w = csv::Writer::from_writer(sink);
        let mut header = vec!["reference_label".to_string()];
        header.extend(PitchType::ALL.iter().map(|t| t.name().to_string()));
        header.push("total".into());
        w.write_record(&header)?;
        for (reference, row) in &self.counts {
            let mut cells = vec![reference.clone()];
            cells.extend(PitchType::ALL.iter().map(|t| row.get(t).copied().unwrap_or(0).to_string()));
            cells.push(self.row_total(reference).to_string());
            w.write_record(&cells)?;
        }
        w.flush()?;
        Ok(())
    }
}

const STABILITY_HEADER: [&str; 7] =
    ["pitcher_id", "replication", "agreement_80", "agreement_20", "stderr_80", "stderr_20", "status"];

fn number_or_blank(v: f64) -> String {
    if v.is_finite() {
        v.to_string()
    } else {
        String::new()
    }
}

fn stability_rows(report: &StabilityReport) -> Vec<[String; 7]> {
    let mut rows = Vec::new();
    for (i, rep) in report.per_replication.iter().enumerate() {
        let row = match rep {
            Replication::Completed { agreement_80, agreement_20 } => [
                report.pitcher_id.clone(),
                i.to_string(),
                agreement_80.to_string(),
                agreement_20.to_string(),
                String::new(),
                String::new(),
                "ok".into(),
            ],
            Replication::Failed { reason } => [
                report.pitcher_id.clone(),
                i.to_string(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                format!("failed: {reason}"),
            ],
        };
        rows.push(row);
    }
    rows.push(summary_row(report));
    rows
}

fn summary_row(report: &StabilityReport) -> [String; 7] {
    [
        report.pitcher_id.clone(),
        "mean".into(),
        number_or_blank(report.mean_80),
        number_or_blank(report.mean_20),
        number_or_blank(report.stderr_80),
        number_or_blank(report.stderr_20),
        format!("completed {}/{}", report.completed, report.replications),
    ]
}

/// One row per replication followed by a `mean` summary row.
pub fn write_stability(sink: impl Write, report: &StabilityReport) -> CsvResult {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(STABILITY_HEADER)?;
    for row in stability_rows(report) {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Summary rows only, one per pitcher: the raw data behind histograms of
/// per-pitcher agreement.
pub fn write_stability_summaries(sink: impl Write, reports: &[StabilityReport]) -> CsvResult {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(STABILITY_HEADER)?;
    for r in reports {
        w.write_record(&summary_row(r))?;
    }
    w.flush()?;
    Ok(())
}
