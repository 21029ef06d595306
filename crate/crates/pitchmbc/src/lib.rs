//! Pitch clustering front end: CSV ingestion, TOML configuration, JSON
//! model archives, CSV reports, SVG plots and the `pitchmbc` command line.
//!
//! The numerical work lives in [`pitchmbc_core`], re-exported here as
//! [`core`].

pub use pitchmbc_core as core;

pub mod archive;
pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod ingest;
pub mod output;
pub mod plot;

pub use archive::{ArchiveError, ModelArchive, FORMAT_VERSION};
pub use cli::Cli;
pub use config::{ConfigError, RunConfig};
pub use error::CliError;
pub use ingest::{parse_pitch_csv, read_pitch_table, write_pitch_csv, IngestError, MalformedRow, PitchTable, Schema};
