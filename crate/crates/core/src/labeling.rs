//! Pitch-type names for fitted clusters.
//!
//! The cluster with the highest mean start speed is the four-seam anchor.
//! Every other cluster is compared with the anchor's mean and labeled by the
//! first rule that matches:
//!
//! | rule | label | condition |
//! |------|-------|-----------|
//! | R1 | Knuckleball | spin variance > `knuckleball_spin_var_ratio` × anchor's, and slower |
//! | R2 | Changeup | same side-spin sign, Δspeed > `changeup_speed_gap`, Δside < `sidespin_band` |
//! | R3 | TwoSeam / Sinker | same side-spin sign: TwoSeam if Δside > Δback, else Sinker |
//! | R4 | Curveball | Δspeed > `changeup_speed_gap` and back spin ≤ `curveball_backspin_max` |
//! | R5 | Cutter | opposite sign and Δspeed ≤ `cutter_speed_gap` |
//! | R6 | Slider | opposite sign otherwise |
//!
//! Δspeed is anchor speed minus cluster speed; Δside and Δback are absolute
//! spin differences. A side spin of exactly zero counts as the anchor's side.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::error::FitError;
use crate::mixture::{posterior_assign, FittedMixture, MixtureComponent};
use crate::pitch::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PitchType {
    FourSeam,
    TwoSeam,
    Sinker,
    Cutter,
    Changeup,
    Slider,
    Curveball,
    Knuckleball,
}

impl PitchType {
    pub const ALL: [PitchType; 8] = [
        PitchType::FourSeam,
        PitchType::TwoSeam,
        PitchType::Sinker,
        PitchType::Cutter,
        PitchType::Changeup,
        PitchType::Slider,
        PitchType::Curveball,
        PitchType::Knuckleball,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PitchType::FourSeam => "FourSeam",
            PitchType::TwoSeam => "TwoSeam",
            PitchType::Sinker => "Sinker",
            PitchType::Cutter => "Cutter",
            PitchType::Changeup => "Changeup",
            PitchType::Slider => "Slider",
            PitchType::Curveball => "Curveball",
            PitchType::Knuckleball => "Knuckleball",
        }
    }

    /// Plot color. Curveball is black; a second curveball cluster is drawn
    /// in [`PitchType::ALTERNATE_CURVEBALL_COLOR`].
    pub fn color(self) -> &'static str {
        match self {
            PitchType::FourSeam => "red",
            PitchType::TwoSeam => "grey",
            PitchType::Sinker => "lightblue",
            PitchType::Cutter => "blue",
            PitchType::Changeup => "green",
            PitchType::Curveball => "black",
            PitchType::Knuckleball => "orange",
            PitchType::Slider => "brown",
        }
    }

    pub const ALTERNATE_CURVEBALL_COLOR: &'static str = "purple";
    pub const INTENTIONAL_BALL_COLOR: &'static str = "yellow";

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.name().eq_ignore_ascii_case(name))
    }
}

impl fmt::Display for PitchType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Labeling thresholds, in mph and in the spin unit of the input data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LabelConfig {
    pub changeup_speed_gap: f64,
    pub sidespin_band: f64,
    pub cutter_speed_gap: f64,
    pub knuckleball_spin_var_ratio: f64,
    pub curveball_backspin_max: f64,
    /// Forces this cluster to be the four-seam anchor instead of the fastest.
    pub anchor_override: Option<usize>,
}

impl Default for LabelConfig {
    fn default() -> Self {
        Self {
            changeup_speed_gap: 6.0,
            sidespin_band: 60.0,
            cutter_speed_gap: 5.0,
            knuckleball_spin_var_ratio: 4.0,
            curveball_backspin_max: 0.0,
            anchor_override: None,
        }
    }
}

impl LabelConfig {
    pub fn validate(&self, k: usize) -> Result<(), &'static str> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(self.changeup_speed_gap) {
            return Err("changeup_speed_gap must be positive");
        }
        if !positive(self.sidespin_band) {
            return Err("sidespin_band must be positive");
        }
        if !positive(self.cutter_speed_gap) {
            return Err("cutter_speed_gap must be positive");
        }
        if !positive(self.knuckleball_spin_var_ratio) {
            return Err("knuckleball_spin_var_ratio must be positive");
        }
        if !self.curveball_backspin_max.is_finite() {
            return Err("curveball_backspin_max must be finite");
        }
        if matches!(self.anchor_override, Some(a) if a >= k) {
            return Err("anchor override is out of range");
        }
        Ok(())
    }
}

/// One rule evaluation in a component's audit trail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleCheck {
    pub rule: String,
    pub matched: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledModel {
    pub fit: FittedMixture,
    pub labels: Vec<PitchType>,
    pub anchor_index: usize,
    pub rule_trace: Vec<Vec<RuleCheck>>,
}

/// Picks the anchor: highest mean speed, then larger weight, then lower index.
pub fn anchor_index(components: &[MixtureComponent]) -> usize {
    let mut best = 0;
    for (j, c) in components.iter().enumerate().skip(1) {
        let b = &components[best];
        let faster = c.mean[0] > b.mean[0];
        let tie_heavier = c.mean[0] == b.mean[0] && c.weight > b.weight;
        if faster || tie_heavier {
            best = j;
        }
    }
    best
}

fn spin_variance(c: &MixtureComponent) -> f64 {
    c.stddev[1] * c.stddev[1] + c.stddev[2] * c.stddev[2]
}

fn check(trace: &mut Vec<RuleCheck>, rule: &str, matched: bool, detail: String) -> bool {
    trace.push(RuleCheck { rule: rule.into(), matched, detail });
    matched
}

/// Runs the cascade for one non-anchor component.
fn label_one(c: &MixtureComponent, anchor: &MixtureComponent, cfg: &LabelConfig) -> (PitchType, Vec<RuleCheck>) {
    let mut trace = Vec::new();
    let d_speed = anchor.mean[0] - c.mean[0];
    let d_back = (c.mean[1] - anchor.mean[1]).abs();
    let d_side = (c.mean[2] - anchor.mean[2]).abs();
    let same_side = c.mean[2] * anchor.mean[2] >= 0.0;
    let back = c.mean[1];

    let var = spin_variance(c);
    let anchor_var = spin_variance(anchor);
    let knuckle = var > cfg.knuckleball_spin_var_ratio * anchor_var && d_speed > 0.0;
    let detail = format!(
        "spin variance {var:.3} vs {:.3} x anchor {anchor_var:.3}; dspeed {d_speed:.3}",
        cfg.knuckleball_spin_var_ratio
    );
    if check(&mut trace, "R1 knuckleball", knuckle, detail) {
        return (PitchType::Knuckleball, trace);
    }

    let side = if same_side { "same" } else { "opposite" };
    if same_side {
        let changeup = d_speed > cfg.changeup_speed_gap && d_side < cfg.sidespin_band;
        let detail = format!(
            "{side} side; dspeed {d_speed:.3} > {:.3} and dside {d_side:.3} < {:.3}",
            cfg.changeup_speed_gap, cfg.sidespin_band
        );
        if check(&mut trace, "R2 changeup", changeup, detail) {
            return (PitchType::Changeup, trace);
        }
        let label = if d_side > d_back { PitchType::TwoSeam } else { PitchType::Sinker };
        check(
            &mut trace,
            "R3 two-seam/sinker",
            true,
            format!("{side} side; dside {d_side:.3} vs dback {d_back:.3} -> {label}"),
        );
        return (label, trace);
    }
    check(&mut trace, "R2 changeup", false, format!("{side} side"));
    check(&mut trace, "R3 two-seam/sinker", false, format!("{side} side"));

    let top_spin = back <= cfg.curveball_backspin_max;
    let curve = top_spin && d_speed > cfg.changeup_speed_gap;
    let detail = format!(
        "back spin {back:.3} <= {:.3} and dspeed {d_speed:.3} > {:.3}",
        cfg.curveball_backspin_max, cfg.changeup_speed_gap
    );
    if check(&mut trace, "R4 curveball", curve, detail) {
        return (PitchType::Curveball, trace);
    }
    let cutter = d_speed <= cfg.cutter_speed_gap;
    let detail = format!("dspeed {d_speed:.3} <= {:.3}", cfg.cutter_speed_gap);
    if check(&mut trace, "R5 cutter", cutter, detail) {
        return (PitchType::Cutter, trace);
    }
    check(&mut trace, "R6 slider", true, format!("{side} side, no earlier rule matched"));
    (PitchType::Slider, trace)
}

/// Names every cluster of `fit`.
///
/// Panics if `config.anchor_override` is out of range; use
/// [`LabelConfig::validate`] first for untrusted input.
pub fn label_clusters(fit: &FittedMixture, config: &LabelConfig) -> LabeledModel {
    let comps = &fit.components;
    let anchor = config.anchor_override.unwrap_or_else(|| anchor_index(comps));
    assert!(anchor < comps.len(), "anchor override {anchor} out of range");
    let mut labels = Vec::with_capacity(comps.len());
    let mut rule_trace = Vec::with_capacity(comps.len());
    for (j, c) in comps.iter().enumerate() {
        if j == anchor {
            let why = if config.anchor_override.is_some() { "manual override" } else { "highest mean start speed" };
            labels.push(PitchType::FourSeam);
            rule_trace.push(alloc::vec![RuleCheck {
                rule: "anchor".into(),
                matched: true,
                detail: format!("{why} ({:.3} mph)", c.mean[0]),
            }]);
        } else {
            let (label, trace) = label_one(c, &comps[anchor], config);
            labels.push(label);
            rule_trace.push(trace);
        }
    }
    LabeledModel { fit: fit.clone(), labels, anchor_index: anchor, rule_trace }
}

/// Posterior assignment of `x` mapped through the cluster labels.
pub fn classify_pitch(model: &LabeledModel, x: &Point) -> Result<(PitchType, usize, Vec<f64>), FitError> {
    let (index, posterior) = posterior_assign(&model.fit, x)?;
    Ok((model.labels[index], index, posterior))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mixture::Responsibilities;

    pub(crate) fn fit_of(comps: Vec<MixtureComponent>) -> FittedMixture {
        FittedMixture {
            components: comps,
            log_likelihood: 0.0,
            iterations: 0,
            converged: true,
            seed: 0,
            restart: 0,
            responsibilities: Responsibilities::default(),
            log_likelihood_trace: Vec::new(),
        }
    }

    fn comp(speed: f64, back: f64, side: f64) -> MixtureComponent {
        MixtureComponent::spherical([speed, back, side], [1.0, 10.0, 10.0], 0.2)
    }

    #[test]
    fn single_cluster_is_four_seam() {
        let m = label_clusters(&fit_of(alloc::vec![comp(88.0, 50.0, 10.0)]), &LabelConfig::default());
        assert_eq!(m.labels, [PitchType::FourSeam]);
        assert_eq!(m.anchor_index, 0);
        assert!(!m.rule_trace[0].is_empty());
    }

    #[test]
    fn changeup_example() {
        let m = label_clusters(
            &fit_of(alloc::vec![comp(91.0, 120.0, -40.0), comp(83.0, 60.0, -45.0)]),
            &LabelConfig::default(),
        );
        assert_eq!(m.labels, [PitchType::FourSeam, PitchType::Changeup]);
    }

    #[test]
    fn sinker_example() {
        let m = label_clusters(
            &fit_of(alloc::vec![comp(89.0, 40.0, -110.0), comp(91.0, 120.0, -40.0)]),
            &LabelConfig::default(),
        );
        assert_eq!(m.anchor_index, 1);
        assert_eq!(m.labels, [PitchType::Sinker, PitchType::FourSeam]);
        assert!(m.rule_trace[0].iter().any(|r| r.rule.starts_with("R3") && r.matched));
    }

    #[test]
    fn override_moves_anchor() {
        let fit = fit_of(alloc::vec![comp(92.0, 40.0, -100.0), comp(90.0, 120.0, -40.0)]);
        let auto = label_clusters(&fit, &LabelConfig::default());
        assert_eq!(auto.labels, [PitchType::FourSeam, PitchType::Sinker]);
        let cfg = LabelConfig { anchor_override: Some(1), ..LabelConfig::default() };
        let fixed = label_clusters(&fit, &cfg);
        assert_eq!(fixed.anchor_index, 1);
        assert_eq!(fixed.labels[1], PitchType::FourSeam);
    }

    #[test]
    fn config_validation() {
        assert!(LabelConfig::default().validate(3).is_ok());
        let bad = LabelConfig { sidespin_band: 0.0, ..LabelConfig::default() };
        assert!(bad.validate(3).is_err());
        let bad = LabelConfig { anchor_override: Some(3), ..LabelConfig::default() };
        assert!(bad.validate(3).is_err());
        let ok = LabelConfig { curveball_backspin_max: -20.0, ..LabelConfig::default() };
        assert!(ok.validate(3).is_ok());
    }

    #[test]
    fn names_round_trip() {
        for t in PitchType::ALL {
            assert_eq!(PitchType::from_name(t.name()), Some(t));
        }
        assert_eq!(PitchType::FourSeam.color(), "red");
        assert_eq!(PitchType::Curveball.color(), "black");
    }
}
