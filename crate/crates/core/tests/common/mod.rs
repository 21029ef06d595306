#![allow(dead_code)]

pub mod labeling_cases;

use pitchmbc_core::{PitchDataset, PitchRecord, Point};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Cholesky of a 3×3 SPD matrix, written out independently of the crate.
fn chol(a: [[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let l00 = a[0][0].sqrt();
    let l10 = a[1][0] / l00;
    let l20 = a[2][0] / l00;
    let l11 = (a[1][1] - l10 * l10).sqrt();
    let l21 = (a[2][1] - l20 * l10) / l11;
    let l22 = (a[2][2] - l20 * l20 - l21 * l21).sqrt();
    [[l00, 0.0, 0.0], [l10, l11, 0.0], [l20, l21, l22]]
}

#[derive(Clone, Debug)]
pub struct Blob {
    pub mean: Point,
    pub sd: [f64; 3],
    pub corr: [[f64; 3]; 3],
    pub count: usize,
}

impl Blob {
    pub fn spherical(mean: Point, sd: f64, count: usize) -> Self {
        Self { mean, sd: [sd; 3], corr: IDENT, count }
    }
}

pub const IDENT: [[f64; 3]; 3] = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

/// Draws every blob's points in order; returns points and generator labels.
pub fn sample(blobs: &[Blob], rng: &mut impl Rng) -> (Vec<Point>, Vec<usize>) {
    let mut pts = Vec::new();
    let mut labels = Vec::new();
    for (j, b) in blobs.iter().enumerate() {
        let l = chol(b.corr);
        for _ in 0..b.count {
            let z: [f64; 3] = [rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal)];
            let mut x = b.mean;
            for a in 0..3 {
                let e: f64 = (0..3).map(|c| l[a][c] * z[c]).sum();
                x[a] += b.sd[a] * e;
            }
            pts.push(x);
            labels.push(j);
        }
    }
    (pts, labels)
}

/// Three spherical blobs 10 standard deviations apart.
pub fn three_blobs(per: usize) -> Vec<Blob> {
    vec![
        Blob::spherical([0.0, 0.0, 0.0], 1.0, per),
        Blob::spherical([10.0, 0.0, 0.0], 1.0, per),
        Blob::spherical([0.0, 10.0, 10.0], 1.0, per),
    ]
}

/// A left-handed pitcher with five pitch types: four-seam, sinker,
/// changeup, slider, curveball. Counts follow 35/20/15/15/15 percent.
pub fn five_pitch_lefty(n: usize) -> Vec<Blob> {
    let share = [0.35, 0.20, 0.15, 0.15, 0.15];
    let mut counts: Vec<usize> = share.iter().map(|s| (s * n as f64).round() as usize).collect();
    let diff = n as isize - counts.iter().sum::<usize>() as isize;
    counts[0] = (counts[0] as isize + diff) as usize;
    let corr = [[1.0, 0.3, 0.0], [0.3, 1.0, 0.1], [0.0, 0.1, 1.0]];
    let sd = [1.2, 15.0, 15.0];
    let means = [
        [91.0, 150.0, -40.0],
        [89.0, 70.0, -100.0],
        [82.0, 80.0, -60.0],
        [84.0, 20.0, 60.0],
        [75.0, -80.0, 60.0],
    ];
    means
        .iter()
        .zip(counts)
        .map(|(&mean, count)| Blob { mean, sd, corr, count })
        .collect()
}

pub fn dataset(points: &[Point]) -> PitchDataset {
    PitchDataset::new(points.iter().map(|p| PitchRecord::new("synthetic", p[0], p[1], p[2])).collect())
        .unwrap()
}
