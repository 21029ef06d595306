//! Model-based clustering of a pitcher's pitches.
//!
//! Pitches live in a three-dimensional space of start speed, back spin and
//! side spin. This crate fits full-covariance Gaussian mixtures to them by
//! Expectation-Maximization, scores the fits with BIC and a
//! correlation-penalized BIC, names each cluster with a rule cascade anchored
//! at the fastest cluster, and measures how stable the clustering is under
//! subsampling.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command
//! line and plotting live in the `pitchmbc` crate.

#![no_std]

extern crate alloc;

mod error;
mod linalg;
mod math;

pub mod labeling;
pub mod mixture;
pub mod pitch;
pub mod rng;
pub mod selection;
pub mod stability;

pub use error::{DataError, FitError, SelectionError, StabilityError};
pub use labeling::{classify_pitch, label_clusters, LabelConfig, LabeledModel, PitchType, RuleCheck};
pub use linalg::Mat3;
pub use mixture::{
    e_step, fit_em, m_step, posterior_assign, EmConfig, FittedMixture, GaussianFactor,
    MixtureComponent, Responsibilities,
};
pub use pitch::{filter_pitches, FilterOutcome, PitchDataset, PitchRecord, Point};
pub use selection::{
    bic, bic_adj, parameter_count, select_k, Criterion, CriterionScore, PenaltyScale,
    SelectConfig, Selection,
};
pub use stability::{
    adjusted_rand_index, align_clusters, stability_run, Alignment, Replication, StabilityConfig,
    StabilityReport,
};
