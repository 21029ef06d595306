//! Seeded starting partitions.

use alloc::vec::Vec;

use rand::Rng;

use crate::math::sqrt;
use crate::pitch::Point;

/// Column-standardized copy of `points` (zero-variance columns are only
/// centered).
pub(super) fn standardize(points: &[Point]) -> Vec<Point> {
    let n = points.len() as f64;
    let mut mean = [0.0; 3];
    for p in points {
        for d in 0..3 {
            mean[d] += p[d];
        }
    }
    mean.iter_mut().for_each(|m| *m /= n);
    let mut var = [0.0; 3];
    for p in points {
        for d in 0..3 {
            let e = p[d] - mean[d];
            var[d] += e * e;
        }
    }
    let scale = var.map(|v| {
        let sd = sqrt(v / n);
        if sd > 0.0 { sd } else { 1.0 }
    });
    points
        .iter()
        .map(|p| [(p[0] - mean[0]) / scale[0], (p[1] - mean[1]) / scale[1], (p[2] - mean[2]) / scale[2]])
        .collect()
}

fn dist_sq(a: &Point, b: &Point) -> f64 {
    let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    d[0] * d[0] + d[1] * d[1] + d[2] * d[2]
}

/// Picks `k` center indices: the first uniformly, each next one with
/// probability proportional to its squared distance from the nearest chosen
/// center.
pub(super) fn seed_centers<R: Rng>(z: &[Point], k: usize, rng: &mut R) -> Vec<usize> {
    let n = z.len();
    let mut centers = Vec::with_capacity(k);
    centers.push(rng.random_range(0..n));
    let mut nearest: Vec<f64> = z.iter().map(|p| dist_sq(p, &z[centers[0]])).collect();
    while centers.len() < k {
        let total: f64 = nearest.iter().sum();
        let next = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = None;
            for (i, &d) in nearest.iter().enumerate() {
                acc += d;
                if d > 0.0 && acc > target {
                    pick = Some(i);
                    break;
                }
            }
            // rounding can leave `target` just past the final partial sum
            pick.unwrap_or_else(|| nearest.iter().rposition(|&d| d > 0.0).unwrap_or(0))
        } else {
            rng.random_range(0..n)
        };
        centers.push(next);
        for (d, p) in nearest.iter_mut().zip(z) {
            *d = d.min(dist_sq(p, &z[next]));
        }
    }
    centers
}

/// Nearest-center assignment in standardized space, ties to the lower index.
pub(super) fn assign_nearest(z: &[Point], centers: &[usize]) -> Vec<usize> {
    z.iter()
        .map(|p| {
            let mut best = 0;
            let mut best_d = f64::INFINITY;
            for (j, &c) in centers.iter().enumerate() {
                let d = dist_sq(p, &z[c]);
                if d < best_d {
                    best = j;
                    best_d = d;
                }
            }
            best
        })
        .collect()
}
