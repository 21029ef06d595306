//! Hand-walked labeling cases and an independent re-implementation of the
//! rule cascade used to cross-check them.

use pitchmbc_core::{FittedMixture, LabelConfig, MixtureComponent, PitchType, Responsibilities};
use PitchType::*;

/// `(speed, back spin, side spin, spin sd, weight)` per cluster.
pub type ClusterSpec = (f64, f64, f64, f64, f64);

pub struct Case {
    pub name: &'static str,
    pub clusters: Vec<ClusterSpec>,
    pub config: LabelConfig,
    pub expected: Vec<PitchType>,
}

const A: ClusterSpec = (91.0, 120.0, -40.0, 10.0, 0.4);

fn case(name: &'static str, clusters: Vec<ClusterSpec>, expected: Vec<PitchType>) -> Case {
    Case { name, clusters, config: LabelConfig::default(), expected }
}

pub fn fit_from(clusters: &[ClusterSpec]) -> FittedMixture {
    let total: f64 = clusters.iter().map(|c| c.4).sum();
    FittedMixture {
        components: clusters
            .iter()
            .map(|&(s, b, d, sd, w)| MixtureComponent::spherical([s, b, d], [1.0, sd, sd], w / total))
            .collect(),
        log_likelihood: 0.0,
        iterations: 0,
        converged: true,
        seed: 0,
        restart: 0,
        responsibilities: Responsibilities::default(),
        log_likelihood_trace: Vec::new(),
    }
}

pub fn cases() -> Vec<Case> {
    let w = 0.2;
    vec![
        case("single cluster is the anchor", vec![A], vec![FourSeam]),
        case("slower same-side cluster near in side spin", vec![A, (83.0, 60.0, -45.0, 10.0, w)], vec![FourSeam, Changeup]),
        case("back spin gap beats side spin gap", vec![A, (89.0, 40.0, -110.0, 10.0, w)], vec![FourSeam, Sinker]),
        case("side spin gap beats back spin gap", vec![A, (89.0, 100.0, -110.0, 10.0, w)], vec![FourSeam, TwoSeam]),
        case("equal spin gaps go to sinker", vec![A, (89.0, 70.0, -90.0, 10.0, w)], vec![FourSeam, Sinker]),
        case("speed gap exactly at threshold", vec![A, (85.0, 100.0, -50.0, 10.0, w)], vec![FourSeam, Sinker]),
        case("side spin gap exactly at band", vec![A, (80.0, 100.0, -100.0, 10.0, w)], vec![FourSeam, TwoSeam]),
        case("zero side spin counts as same side", vec![A, (82.0, 100.0, 0.0, 10.0, w)], vec![FourSeam, Changeup]),
        case("opposite side with top spin", vec![A, (75.0, -80.0, 60.0, 10.0, w)], vec![FourSeam, Curveball]),
        case("back spin exactly at curveball limit", vec![A, (78.0, 0.0, 50.0, 10.0, w)], vec![FourSeam, Curveball]),
        case("back spin just above curveball limit", vec![A, (78.0, 1.0, 50.0, 10.0, w)], vec![FourSeam, Slider]),
        case("fast opposite-side cluster", vec![A, (88.0, 100.0, 20.0, 10.0, w)], vec![FourSeam, Cutter]),
        case("cutter speed gap exactly at threshold", vec![A, (86.0, 100.0, 20.0, 10.0, w)], vec![FourSeam, Cutter]),
        case("just past cutter speed gap", vec![A, (85.5, 100.0, 20.0, 10.0, w)], vec![FourSeam, Slider]),
        case("top spin but too fast for a curveball", vec![A, (88.0, -10.0, 30.0, 10.0, w)], vec![FourSeam, Cutter]),
        case("same-side top spin never reaches curveball", vec![A, (75.0, -50.0, -30.0, 10.0, w)], vec![FourSeam, Changeup]),
        case("wide spin spread", vec![A, (75.0, 0.0, 10.0, 30.0, w)], vec![FourSeam, Knuckleball]),
        case("spin spread exactly at ratio", vec![A, (75.0, 0.0, 10.0, 20.0, w)], vec![FourSeam, Curveball]),
        case("wide spread at anchor speed", vec![A, (91.0, 50.0, -45.0, 30.0, 0.1)], vec![FourSeam, Sinker]),
        case("speed tie goes to heavier cluster", vec![(91.0, 120.0, -40.0, 10.0, 0.3), (91.0, 60.0, -100.0, 10.0, 0.5)], vec![Sinker, FourSeam]),
        case("full tie goes to lower index", vec![(91.0, 120.0, -40.0, 10.0, 0.4), (91.0, 60.0, -100.0, 10.0, 0.4)], vec![FourSeam, Sinker]),
        case("full tie in reverse order", vec![(91.0, 60.0, -100.0, 10.0, 0.4), (91.0, 120.0, -40.0, 10.0, 0.4)], vec![FourSeam, Sinker]),
        case("anchor listed last", vec![(83.0, 60.0, -45.0, 10.0, w), A], vec![Changeup, FourSeam]),
        case(
            "right-handed arsenal",
            vec![(94.0, 130.0, 45.0, 10.0, 0.4), (86.0, 90.0, 40.0, 10.0, w), (85.0, 10.0, -50.0, 10.0, w), (77.0, -60.0, -40.0, 10.0, w)],
            vec![FourSeam, Changeup, Slider, Curveball],
        ),
        case(
            "anchor with zero side spin",
            vec![(92.0, 130.0, 0.0, 10.0, 0.4), (84.0, 80.0, -20.0, 10.0, w), (84.0, 80.0, 20.0, 10.0, w)],
            vec![FourSeam, Changeup, Changeup],
        ),
        case(
            "five-pitch left-hander",
            vec![A, (89.0, 40.0, -100.0, 10.0, w), (82.0, 80.0, -60.0, 10.0, w), (84.0, 20.0, 60.0, 10.0, w), (75.0, -80.0, 60.0, 10.0, w)],
            vec![FourSeam, Sinker, Changeup, Slider, Curveball],
        ),
        case(
            "two curveball clusters",
            vec![A, (76.0, -80.0, 60.0, 10.0, w), (74.0, -85.0, 65.0, 10.0, w)],
            vec![FourSeam, Curveball, Curveball],
        ),
        case(
            "sinker faster than four-seam swaps the pair",
            vec![(91.0, 150.0, -40.0, 10.0, 0.4), (92.0, 70.0, -100.0, 10.0, 0.3)],
            vec![Sinker, FourSeam],
        ),
        Case {
            name: "manual anchor corrects the swap",
            clusters: vec![(91.0, 150.0, -40.0, 10.0, 0.4), (92.0, 70.0, -100.0, 10.0, 0.3)],
            config: LabelConfig { anchor_override: Some(0), ..LabelConfig::default() },
            expected: vec![FourSeam, Sinker],
        },
        Case {
            name: "wider changeup gap",
            clusters: vec![A, (83.0, 60.0, -45.0, 10.0, w)],
            config: LabelConfig { changeup_speed_gap: 10.0, ..LabelConfig::default() },
            expected: vec![FourSeam, Sinker],
        },
        Case {
            name: "stricter curveball back spin",
            clusters: vec![A, (75.0, -10.0, 50.0, 10.0, w)],
            config: LabelConfig { curveball_backspin_max: -20.0, ..LabelConfig::default() },
            expected: vec![FourSeam, Slider],
        },
    ]
}

/// The cascade written as one expression per rule, straight from the rule
/// table, sharing nothing with the library.
pub fn oracle(clusters: &[ClusterSpec], cfg: &LabelConfig) -> Vec<PitchType> {
    let anchor = cfg.anchor_override.unwrap_or_else(|| {
        (0..clusters.len())
            .max_by(|&i, &j| {
                let (a, b) = (clusters[i], clusters[j]);
                a.0.partial_cmp(&b.0).unwrap().then(a.4.partial_cmp(&b.4).unwrap()).then(j.cmp(&i))
            })
            .unwrap()
    });
    let (s0, b0, d0, sd0, _) = clusters[anchor];
    clusters
        .iter()
        .enumerate()
        .map(|(j, &(s, b, d, sd, _))| {
            let dspeed = s0 - s;
            let same = (d >= 0.0) == (d0 >= 0.0) || d == 0.0 || d0 == 0.0;
            if j == anchor {
                FourSeam
            } else if 2.0 * sd * sd > cfg.knuckleball_spin_var_ratio * 2.0 * sd0 * sd0 && dspeed > 0.0 {
                Knuckleball
            } else if same && dspeed > cfg.changeup_speed_gap && (d - d0).abs() < cfg.sidespin_band {
                Changeup
            } else if same && (d - d0).abs() > (b - b0).abs() {
                TwoSeam
            } else if same {
                Sinker
            } else if b <= cfg.curveball_backspin_max && dspeed > cfg.changeup_speed_gap {
                Curveball
            } else if dspeed <= cfg.cutter_speed_gap {
                Cutter
            } else {
                Slider
            }
        })
        .collect()
}
