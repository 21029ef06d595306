mod common;

use common::*;
use pitchmbc_core::*;

fn config(k_max: usize, seed: u64, criterion: Criterion, penalty_scale: PenaltyScale) -> SelectConfig {
    SelectConfig { k_min: 1, k_max, criterion, penalty_scale, em: EmConfig::with_seed(seed) }
}

#[test]
fn three_blobs_select_three() {
    for seed in [1, 2] {
        let (pts, _) = sample(&three_blobs(200), &mut rng(seed));
        let sel = select_k(&pts, &config(5, seed, Criterion::BicAdj, PenaltyScale::Auto)).unwrap();
        assert_eq!(sel.best.k(), 3);
        assert_eq!(sel.scores.len(), 5);
        let at = |k: usize| sel.scores.iter().find(|s| s.k == k).unwrap().bic_adj;
        assert!(at(2) > at(3) && at(4) > at(3));
        assert_eq!(sel.best_score().k, 3);
    }
}

#[test]
fn scores_recompute_from_reported_likelihood() {
    let (pts, _) = sample(&three_blobs(100), &mut rng(3));
    let n = pts.len() as f64;
    let sel = select_k(&pts, &config(4, 3, Criterion::BicAdj, PenaltyScale::Auto)).unwrap();
    for s in &sel.scores {
        let p = (10 * s.k - 1) as f64;
        let expected = -2.0 * s.log_likelihood + p * n.ln();
        assert!((s.bic - expected).abs() <= 1e-10 * expected.abs());
        assert_eq!(s.bic_adj, s.bic + s.correlation_penalty);
        assert!((s.penalty_scale - n.ln()).abs() < 1e-15);
    }
    let recomputed = sel.best.recompute_log_likelihood(&pts).unwrap();
    assert!((recomputed - sel.best.log_likelihood).abs() <= 1e-8 * recomputed.abs());
}

#[test]
fn zero_penalty_matches_plain_criterion() {
    for seed in [4, 5] {
        let (pts, _) = sample(&five_pitch_lefty(150), &mut rng(seed));
        let adj = select_k(&pts, &config(6, seed, Criterion::BicAdj, PenaltyScale::Fixed(0.0))).unwrap();
        let plain = select_k(&pts, &config(6, seed, Criterion::Bic, PenaltyScale::Auto)).unwrap();
        assert_eq!(adj.best.k(), plain.best.k());
        for (a, b) in adj.scores.iter().zip(&plain.scores) {
            assert_eq!(a.bic, b.bic);
            assert_eq!(a.bic_adj, a.bic);
        }
    }
}

#[test]
fn selection_is_deterministic() {
    let (pts, _) = sample(&five_pitch_lefty(120), &mut rng(6));
    let cfg = config(5, 6, Criterion::BicAdj, PenaltyScale::Auto);
    let a = select_k(&pts, &cfg).unwrap();
    let b = select_k(&pts, &cfg).unwrap();
    assert_eq!(a.scores, b.scores);
    assert_eq!(a.best, b.best);
}

#[test]
fn selection_errors() {
    let (pts, _) = sample(&three_blobs(3), &mut rng(1));
    assert!(matches!(
        select_k(&pts, &config(3, 1, Criterion::Bic, PenaltyScale::Auto)),
        Err(SelectionError::TooFewPoints { n: 9, k_max: 3, required: 12 })
    ));
    assert!(matches!(
        select_k(&pts, &config(2, 1, Criterion::BicAdj, PenaltyScale::Fixed(-1.0))),
        Err(SelectionError::InvalidPenaltyScale)
    ));
    assert!(matches!(
        select_k(&pts, &SelectConfig { k_min: 2, k_max: 1, ..Default::default() }),
        Err(SelectionError::InvalidRange { .. })
    ));
}
