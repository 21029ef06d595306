//! TOML run configuration.
//!
//! Every section is optional; missing keys take the library defaults.
//!
//! ```toml
//! [schema]
//! delimiter = ","
//! start_speed = "velo"
//!
//! [em]
//! seed = 7
//! restarts = 8
//!
//! [selection]
//! k_max = 7
//! criterion = "bicadj"
//! penalty_scale = "auto"
//!
//! [labels]
//! changeup_speed_gap = 6.0
//!
//! [stability]
//! replications = 20
//! ```

use std::path::Path;

use pitchmbc_core::{EmConfig, LabelConfig, SelectConfig, StabilityConfig};
use serde::{Deserialize, Serialize};

use crate::ingest::Schema;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub schema: Schema,
    pub em: EmConfig,
    pub selection: SelectConfig,
    pub labels: LabelConfig,
    pub stability: StabilityConfig,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("reading {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parsing {path}: {source}")]
    Toml { path: String, source: toml::de::Error },
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let shown = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: shown.clone(), source })?;
        Self::from_toml(&text).map_err(|source| ConfigError::Toml { path: shown, source })
    }

    /// Selection settings with the shared EM settings filled in.
    pub fn select_config(&self) -> SelectConfig {
        SelectConfig { em: self.em.clone(), ..self.selection.clone() }
    }

    /// Stability settings; the reference fit uses the stability seed.
    pub fn stability_config(&self) -> StabilityConfig {
        StabilityConfig {
            em: EmConfig { seed: self.stability.seed, ..self.em.clone() },
            ..self.stability.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use pitchmbc_core::{Criterion, PenaltyScale};

    #[test]
    fn empty_document_is_all_defaults() {
        assert_eq!(RunConfig::from_toml("").unwrap(), RunConfig::default());
    }

    #[test]
    fn sections_override_defaults() {
        let cfg = RunConfig::from_toml(
            "[schema]\ndelimiter = \";\"\nstart_speed = \"velo\"\n\
             [em]\nseed = 7\ntol = 1e-6\n\
             [selection]\nk_max = 6\ncriterion = \"bic\"\npenalty_scale = 2.5\n\
             [labels]\nchangeup_speed_gap = 7.5\n\
             [stability]\nreplications = 5\nseed = 3\n",
        )
        .unwrap();
        assert_eq!(cfg.schema.delimiter, ';');
        assert_eq!(cfg.schema.start_speed, "velo");
        assert_eq!(cfg.em.seed, 7);
        assert_eq!(cfg.em.tolerance, 1e-6);
        let sel = cfg.select_config();
        assert_eq!((sel.k_max, sel.criterion, sel.penalty_scale), (6, Criterion::Bic, PenaltyScale::Fixed(2.5)));
        assert_eq!(sel.em.seed, 7);
        assert_eq!(cfg.labels.changeup_speed_gap, 7.5);
        let stab = cfg.stability_config();
        assert_eq!((stab.replications, stab.seed, stab.em.seed), (5, 3, 3));
    }

    #[test]
    fn unknown_sections_are_rejected() {
        assert!(RunConfig::from_toml("[emm]\nseed = 1\n").is_err());
    }
}
