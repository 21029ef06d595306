//! Stability of cluster memberships under subsampling.
//!
//! The full data is clustered once at a fixed k. Each replication splits the
//! points uniformly at random into a large and a small part, refits each
//! part at the same k, and counts how many points land in the same cluster
//! as in the full-data fit. Cluster indices of independent fits are
//! arbitrary, so each part's clusters are first matched to the reference
//! clusters by an optimal assignment on the confusion matrix.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{FitError, StabilityError};
use crate::math::{round, sqrt};
use crate::mixture::{fit_em, EmConfig};
use crate::pitch::{PitchDataset, Point};
use crate::rng::{derive_seed, stream_rng};

/// Best relabeling of a candidate partition onto a reference partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alignment {
    /// `permutation[c]` is the reference cluster matched to candidate cluster `c`.
    pub permutation: Vec<usize>,
    /// Points whose relabeled candidate cluster equals their reference cluster.
    pub agreement: usize,
}

impl Alignment {
    pub fn relabel(&self, candidate: &[usize]) -> Vec<usize> {
        candidate.iter().map(|&c| self.permutation[c]).collect()
    }
}

/// `table[c][r]` counts points with candidate cluster `c` and reference cluster `r`.
pub fn confusion_matrix(reference: &[usize], candidate: &[usize], k: usize) -> Vec<Vec<i64>> {
    let mut table = alloc::vec![alloc::vec![0i64; k]; k];
    for (&r, &c) in reference.iter().zip(candidate) {
        table[c][r] += 1;
    }
    table
}

/// Minimum-cost perfect matching on a square matrix (Kuhn-Munkres with
/// potentials). Returns the cost and `row -> column`.
fn min_cost_assignment(cost: &[Vec<i64>]) -> (i64, Vec<usize>) {
    let n = cost.len();
    if n == 0 {
        return (0, Vec::new());
    }
    // 1-based internally; column 0 is the virtual start.
    let inf = i64::MAX / 4;
    let mut u = alloc::vec![0i64; n + 1];
    let mut v = alloc::vec![0i64; n + 1];
    let mut row_of = alloc::vec![0usize; n + 1];
    let mut way = alloc::vec![0usize; n + 1];
    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0;
        let mut min_v = alloc::vec![inf; n + 1];
        let mut used = alloc::vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < min_v[j] {
                        min_v[j] = cur;
                        way[j] = j0;
                    }
                    if min_v[j] < delta {
                        delta = min_v[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_v[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = alloc::vec![0usize; n];
    for j in 1..=n {
        assignment[row_of[j] - 1] = j - 1;
    }
    let total = assignment.iter().enumerate().map(|(i, &j)| cost[i][j]).sum();
    (total, assignment)
}

/// Largest total of `table[row][perm[row]]` over permutations.
fn max_matching_value(table: &[Vec<i64>]) -> i64 {
    let top = table.iter().flatten().copied().max().unwrap_or(0);
    let cost: Vec<Vec<i64>> = table.iter().map(|row| row.iter().map(|&x| top - x).collect()).collect();
    let (c, _) = min_cost_assignment(&cost);
    top * table.len() as i64 - c
}

fn submatrix(table: &[Vec<i64>], rows_from: usize, used_cols: &[bool]) -> Vec<Vec<i64>> {
    table[rows_from..]
        .iter()
        .map(|row| row.iter().zip(used_cols).filter(|(_, &u)| !u).map(|(&x, _)| x).collect())
        .collect()
}

/// Relabels `candidate` clusters to maximize agreement with `reference`.
///
/// Among optimal permutations the lexicographically smallest is returned.
pub fn align_clusters(reference: &[usize], candidate: &[usize], k: usize) -> Result<Alignment, StabilityError> {
    if reference.len() != candidate.len() {
        return Err(StabilityError::DimensionMismatch { reference: reference.len(), candidate: candidate.len() });
    }
    if let Some(&index) = reference.iter().chain(candidate).find(|&&i| i >= k) {
        return Err(StabilityError::IndexOutOfRange { index, k });
    }
    let table = confusion_matrix(reference, candidate, k);
    let optimum = max_matching_value(&table);

    // Fix rows in order, taking the smallest column that keeps the optimum reachable.
    let mut permutation = Vec::with_capacity(k);
    let mut used = alloc::vec![false; k];
    let mut fixed = 0i64;
    for row in 0..k {
        let mut chosen = None;
        for col in 0..k {
            if used[col] {
                continue;
            }
            used[col] = true;
            let rest = max_matching_value(&submatrix(&table, row + 1, &used));
            if fixed + table[row][col] + rest == optimum {
                chosen = Some(col);
                break;
            }
            used[col] = false;
        }
        let col = chosen.expect("some column always preserves the optimum");
        fixed += table[row][col];
        permutation.push(col);
    }
    Ok(Alignment { permutation, agreement: optimum as usize })
}

fn choose2(x: u64) -> f64 {
    (x * x.saturating_sub(1)) as f64 / 2.0
}

/// Adjusted Rand index between two partitions of the same points.
///
/// Returns 1 when both partitions are trivial (the index is undefined).
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len(), "partitions must cover the same points");
    let ka = a.iter().max().map_or(0, |m| m + 1);
    let kb = b.iter().max().map_or(0, |m| m + 1);
    let mut table = alloc::vec![0u64; ka * kb];
    let mut rows = alloc::vec![0u64; ka];
    let mut cols = alloc::vec![0u64; kb];
    for (&x, &y) in a.iter().zip(b) {
        table[x * kb + y] += 1;
        rows[x] += 1;
        cols[y] += 1;
    }
    let index: f64 = table.iter().map(|&c| choose2(c)).sum();
    let sum_a: f64 = rows.iter().map(|&c| choose2(c)).sum();
    let sum_b: f64 = cols.iter().map(|&c| choose2(c)).sum();
    let total = choose2(a.len() as u64);
    let expected = if total > 0.0 { sum_a * sum_b / total } else { 0.0 };
    let max = 0.5 * (sum_a + sum_b);
    if max == expected {
        return 1.0;
    }
    (index - expected) / (max - expected)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StabilityConfig {
    /// Fraction of points in the large part.
    pub split: f64,
    pub replications: usize,
    pub seed: u64,
    #[serde(skip)]
    pub em: EmConfig,
}

impl Default for StabilityConfig {
    fn default() -> Self {
        Self { split: 0.8, replications: 20, seed: 42, em: EmConfig::default() }
    }
}

/// Outcome of one replication.
#[derive(Debug, Clone, PartialEq)]
pub enum Replication {
    Completed { agreement_80: f64, agreement_20: f64 },
    /// A subset fit failed; the replication is excluded from the summary.
    Failed { reason: FitError },
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub pitcher_id: alloc::string::String,
    pub k: usize,
    pub split: f64,
    /// Sizes of the large and small parts.
    pub subset_sizes: (usize, usize),
    /// Indexed by replication number.
    pub per_replication: Vec<Replication>,
    pub mean_80: f64,
    pub mean_20: f64,
    pub stderr_80: f64,
    pub stderr_20: f64,
    pub replications: usize,
    /// Replications that contributed to the summary.
    pub completed: usize,
    pub seed: u64,
}

/// Mean and standard error (`s / √m`, 0 for a single value, NaN for none).
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let m = values.len();
    if m == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / m as f64;
    if m == 1 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, sqrt(ss / (m - 1) as f64) / sqrt(m as f64))
}

/// Splits `0..n` into a random large part of `n_large` indices and the rest,
/// both sorted. This is the split `stability_run` uses for `replication`.
pub fn split_indices(n: usize, n_large: usize, seed: u64, replication: usize) -> (Vec<usize>, Vec<usize>) {
    let mut idx: Vec<usize> = (0..n).collect();
    let mut rng = stream_rng(derive_seed(seed, 0x5EED_5EED), replication as u64);
    idx.shuffle(&mut rng);
    let mut large = idx[..n_large].to_vec();
    let mut small = idx[n_large..].to_vec();
    large.sort_unstable();
    small.sort_unstable();
    (large, small)
}

fn subset_agreement(
    points: &[Point],
    reference: &[usize],
    subset: &[usize],
    k: usize,
    em: &EmConfig,
) -> Result<f64, FitError> {
    let sub_points: Vec<Point> = subset.iter().map(|&i| points[i]).collect();
    let fit = fit_em(&sub_points, k, em)?;
    let sub_reference: Vec<usize> = subset.iter().map(|&i| reference[i]).collect();
    let alignment = align_clusters(&sub_reference, &fit.assignments(), k)
        .expect("assignments share length and range");
    Ok(alignment.agreement as f64 / subset.len() as f64)
}

/// Replicated subsample stability at a fixed `k`.
pub fn stability_run(
    data: &PitchDataset,
    k: usize,
    config: &StabilityConfig,
) -> Result<StabilityReport, StabilityError> {
    if !(config.split > 0.0 && config.split < 1.0) {
        return Err(StabilityError::InvalidSplit(config.split));
    }
    if config.replications == 0 {
        return Err(StabilityError::NoReplications);
    }
    let points = data.points();
    let n = points.len();
    let n_large = round(config.split * n as f64) as usize;
    let n_small = n - n_large.min(n);
    let required = 4 * k.max(1);
    if n_large < required || n_small < required {
        return Err(StabilityError::TooFewPoints { small: n_small, large: n_large, k, required });
    }

    let reference = fit_em(&points, k, &config.em).map_err(StabilityError::ReferenceFit)?.assignments();

    let mut per_replication = Vec::with_capacity(config.replications);
    for rep in 0..config.replications {
        let (large, small) = split_indices(n, n_large, config.seed, rep);
        let em_large = EmConfig { seed: derive_seed(config.seed, 2 * rep as u64 + 1), ..config.em.clone() };
        let em_small = EmConfig { seed: derive_seed(config.seed, 2 * rep as u64 + 2), ..config.em.clone() };
        let outcome = subset_agreement(&points, &reference, &large, k, &em_large).and_then(|a80| {
            subset_agreement(&points, &reference, &small, k, &em_small).map(|a20| (a80, a20))
        });
        per_replication.push(match outcome {
            Ok((agreement_80, agreement_20)) => Replication::Completed { agreement_80, agreement_20 },
            Err(reason) => Replication::Failed { reason },
        });
    }

    let (a80, a20): (Vec<f64>, Vec<f64>) = per_replication
        .iter()
        .filter_map(|r| match r {
            Replication::Completed { agreement_80, agreement_20 } => Some((*agreement_80, *agreement_20)),
            Replication::Failed { .. } => None,
        })
        .unzip();
    let (mean_80, stderr_80) = mean_and_stderr(&a80);
    let (mean_20, stderr_20) = mean_and_stderr(&a20);
    Ok(StabilityReport {
        pitcher_id: data.pitcher_id().into(),
        k,
        split: config.split,
        subset_sizes: (n_large, n_small),
        completed: a80.len(),
        per_replication,
        mean_80,
        mean_20,
        stderr_80,
        stderr_20,
        replications: config.replications,
        seed: config.seed,
    })
}
