//! Expectation-Maximization for full-covariance mixtures.

use alloc::boxed::Box;
use alloc::vec::Vec;

use super::init::{assign_nearest, seed_centers, standardize};
use super::{argmax, factor_all, ln_weights, EmConfig, FittedMixture, MixtureComponent, Responsibilities};
use crate::error::FitError;
use crate::linalg::{trace, Cholesky3, Mat3};
use crate::math::{exp, ln};
use crate::pitch::Point;
use crate::rng::stream_rng;

/// Posterior memberships of every point and the total log-likelihood
/// `Σᵢ ln Σⱼ wⱼ N(xᵢ | μⱼ, Σⱼ)`.
pub fn e_step(
    components: &[MixtureComponent],
    points: &[Point],
) -> Result<(Responsibilities, f64), FitError> {
    let k = components.len();
    if k == 0 {
        return Err(FitError::InvalidConfig("mixture has no components"));
    }
    let factors = factor_all(components)?;
    let ln_w = ln_weights(components);
    let mut values = alloc::vec![0.0; points.len() * k];
    let mut log_likelihood = 0.0;
    for (x, row) in points.iter().zip(values.chunks_exact_mut(k)) {
        let mut max = f64::NEG_INFINITY;
        for ((r, f), lw) in row.iter_mut().zip(&factors).zip(&ln_w) {
            *r = lw + f.log_density(x);
            max = max.max(*r);
        }
        if !max.is_finite() {
            return Err(FitError::NonFiniteLikelihood);
        }
        let mut sum = 0.0;
        for r in row.iter_mut() {
            *r = exp(*r - max);
            sum += *r;
        }
        row.iter_mut().for_each(|r| *r /= sum);
        log_likelihood += max + ln(sum);
    }
    if !log_likelihood.is_finite() {
        return Err(FitError::NonFiniteLikelihood);
    }
    Ok((Responsibilities { k, values }, log_likelihood))
}

/// Maximum-likelihood components for the given memberships.
///
/// Each covariance is the responsibility-weighted scatter about the weighted
/// mean, plus `ridge · trace / 3` on the diagonal.
pub fn m_step(
    points: &[Point],
    responsibilities: &Responsibilities,
    ridge: f64,
) -> Result<Vec<MixtureComponent>, FitError> {
    let moments = weighted_moments(points, responsibilities)?;
    let mut components = Vec::with_capacity(moments.len());
    for (j, m) in moments.iter().enumerate() {
        let component = MixtureComponent::from_covariance(m.mean, &m.ridged(ridge), m.weight);
        if component.factor().is_none() {
            return Err(FitError::SingularCovariance { component: j });
        }
        components.push(component);
    }
    Ok(components)
}

struct Moments {
    mean: Point,
    scatter: Mat3,
    weight: f64,
}

impl Moments {
    fn ridged(&self, ridge: f64) -> Mat3 {
        let mut cov = self.scatter;
        let bump = ridge * trace(&cov) / 3.0;
        for (d, row) in cov.iter_mut().enumerate() {
            row[d] += bump;
        }
        cov
    }
}

fn weighted_moments(points: &[Point], responsibilities: &Responsibilities) -> Result<Vec<Moments>, FitError> {
    let n = points.len();
    let k = responsibilities.k();
    if n == 0 || responsibilities.n() != n {
        return Err(FitError::ShapeMismatch { rows: responsibilities.n(), cols: k, n });
    }
    let masses = responsibilities.column_sums();
    let floor = 10.0 * f64::EPSILON * n as f64;
    if let Some((j, &mass)) = masses.iter().enumerate().find(|(_, &m)| !(m >= floor)) {
        return Err(FitError::EmptyCluster { component: j, mass });
    }
    let total: f64 = masses.iter().sum();

    let mut means = alloc::vec![[0.0; 3]; k];
    for (x, row) in points.iter().zip(responsibilities.rows()) {
        for (m, &r) in means.iter_mut().zip(row) {
            for d in 0..3 {
                m[d] += r * x[d];
            }
        }
    }
    for (m, &mass) in means.iter_mut().zip(&masses) {
        m.iter_mut().for_each(|v| *v /= mass);
    }

    let mut scatters = alloc::vec![[[0.0; 3]; 3]; k];
    for (x, row) in points.iter().zip(responsibilities.rows()) {
        for ((cov, m), &r) in scatters.iter_mut().zip(&means).zip(row) {
            let e = [x[0] - m[0], x[1] - m[1], x[2] - m[2]];
            for a in 0..3 {
                for b in 0..=a {
                    cov[a][b] += r * e[a] * e[b];
                }
            }
        }
    }

    Ok(scatters
        .into_iter()
        .zip(means)
        .zip(masses)
        .map(|((mut scatter, mean), mass)| {
            for a in 0..3 {
                for b in 0..=a {
                    scatter[a][b] /= mass;
                    scatter[b][a] = scatter[a][b];
                }
            }
            Moments { mean, scatter, weight: mass / total }
        })
        .collect())
}

/// M-step used inside the EM loop. The ridge moves each covariance away
/// from the exact maximizer, which on thin clusters can cost likelihood.
/// A component whose ridged covariance scores worse than its previous one
/// under the expected complete-data objective `ln|Σ| + tr(Σ⁻¹ S)` keeps the
/// previous covariance. Weights and means are always the exact maximizers,
/// so every iteration is a generalized EM step and the likelihood cannot
/// decrease.
fn guarded_m_step(
    points: &[Point],
    responsibilities: &Responsibilities,
    ridge: f64,
    previous: &[MixtureComponent],
) -> Result<Vec<MixtureComponent>, FitError> {
    let moments = weighted_moments(points, responsibilities)?;
    let mut components = Vec::with_capacity(moments.len());
    for (j, (m, prev)) in moments.iter().zip(previous).enumerate() {
        let proposed = m.ridged(ridge);
        let old = prev.covariance();
        let objective = |cov: &Mat3| Cholesky3::factor(cov).map(|c| c.log_det() + c.trace_solve(&m.scatter));
        let cov = match (objective(&proposed), objective(&old)) {
            (Some(new), Some(kept)) if kept < new => old,
            (Some(_), _) => proposed,
            (None, _) => return Err(FitError::SingularCovariance { component: j }),
        };
        components.push(MixtureComponent::from_covariance(m.mean, &cov, m.weight));
    }
    Ok(components)
}

/// Fits a `k`-component mixture, keeping the best of `config.restarts`
/// seeded initializations.
///
/// Each restart seeds centers by squared-distance sampling on standardized
/// data, hard-assigns every point to its nearest center, takes one M-step,
/// then alternates E and M steps until the relative log-likelihood change
/// drops below `config.tolerance` or `config.max_iterations` is reached.
/// Restarts that collapse a cluster or lose positive definiteness are
/// skipped. A later restart replaces the current best only when its
/// log-likelihood is higher by more than `tolerance · |best|`.
/// Deterministic in `(points, k, config)`.
pub fn fit_em(points: &[Point], k: usize, config: &EmConfig) -> Result<FittedMixture, FitError> {
    config.validate()?;
    if k == 0 {
        return Err(FitError::InvalidConfig("k must be at least 1"));
    }
    let n = points.len();
    let required = 4 * k;
    if n < required {
        return Err(FitError::TooFewPoints { n, k, required });
    }

    // every restart of k = 1 starts from the same partition
    let restarts = if k == 1 { 1 } else { config.restarts };
    let z = standardize(points);
    let mut best: Option<FittedMixture> = None;
    let mut last_err = None;
    for restart in 0..restarts {
        let mut rng = stream_rng(config.seed, restart as u64);
        let start = if k == 1 {
            alloc::vec![0; n]
        } else {
            let centers = seed_centers(&z, k, &mut rng);
            assign_nearest(&z, &centers)
        };
        match run_from_partition(points, &start, k, config) {
            Ok(mut fit) => {
                fit.restart = restart;
                // restarts that reach the same optimum differ only by convergence
                // slack; a later one must beat the best by more than that
                let better = best.as_ref().map_or(true, |b| {
                    fit.log_likelihood - b.log_likelihood > config.tolerance * b.log_likelihood.abs()
                });
                if better {
                    best = Some(fit);
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    best.ok_or_else(|| FitError::AllRestartsDegenerate {
        restarts,
        last: Box::new(last_err.unwrap_or(FitError::NonFiniteLikelihood)),
    })
}

fn run_from_partition(
    points: &[Point],
    partition: &[usize],
    k: usize,
    config: &EmConfig,
) -> Result<FittedMixture, FitError> {
    let mut components = m_step(points, &Responsibilities::one_hot(partition, k), config.ridge)?;
    let (mut resp, mut ll) = e_step(&components, points)?;
    let mut trace = alloc::vec![ll];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < config.max_iterations {
        let next = guarded_m_step(points, &resp, config.ridge, &components)?;
        let (next_resp, next_ll) = e_step(&next, points)?;
        iterations += 1;
        trace.push(next_ll);
        let change = (next_ll - ll).abs();
        components = next;
        resp = next_resp;
        ll = next_ll;
        if change <= config.tolerance * ll.abs() {
            converged = true;
            break;
        }
    }
    Ok(FittedMixture {
        components,
        log_likelihood: ll,
        iterations,
        converged,
        seed: config.seed,
        restart: 0,
        responsibilities: resp,
        log_likelihood_trace: trace,
    })
}

/// Argmax-posterior cluster of `x` and the full posterior vector. Ties go to
/// the lowest index.
pub fn posterior_assign(model: &FittedMixture, x: &Point) -> Result<(usize, Vec<f64>), FitError> {
    let (resp, _) = e_step(&model.components, core::slice::from_ref(x))?;
    let posterior = resp.row(0).to_vec();
    Ok((argmax(&posterior), posterior))
}
