use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Svg,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum AdjacencyMode {
    #[default]
    Witness,
    Refute,
}

/// Every parameter any command reads. Unset fields fall back to the command's
/// defaults; values from a config file replace values given as flags.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub region: Option<String>,
    pub ladder: Option<Vec<f64>>,
    pub budget: Option<usize>,
    pub grid: Option<usize>,
    pub levels: Option<u32>,
    pub truncation: Option<u32>,
    pub b: Option<u32>,
    pub c: Option<f64>,
    pub mode: Option<AdjacencyMode>,
    pub density: Option<usize>,
    pub verify_budget: Option<usize>,
    pub indicator: Option<String>,
    pub points: Option<String>,
    pub artifact: Option<PathBuf>,
    /// number of random boundary samples for `verify` (grid when unset)
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub with_sets: Option<bool>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

macro_rules! overlay {
    ($dst:ident, $src:ident, $($f:ident),*) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f.clone(); } )*
    };
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Invalid { field: "config".into(), reason: e.to_string() })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    /// Fields set in `other` win.
    pub fn overlay(&mut self, other: &RunConfig) {
        overlay!(
            self, other, region, ladder, budget, grid, levels, truncation, b, c, mode, density, verify_budget,
            indicator, points, artifact, samples, seed, with_sets, out, format
        );
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    /// Rejects zero or non-finite numeric parameters, naming the first offender.
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |field: &str, reason: String| Err(CliError::Invalid { field: field.into(), reason });
        for (name, v) in [
            ("budget", self.budget),
            ("grid", self.grid),
            ("density", self.density),
            ("verify_budget", self.verify_budget),
            ("samples", self.samples),
        ] {
            if v == Some(0) {
                return bad(name, "must be positive".into());
            }
        }
        for (name, v) in [("levels", self.levels), ("truncation", self.truncation), ("b", self.b)] {
            if v == Some(0) {
                return bad(name, "must be positive".into());
            }
        }
        if let Some(c) = self.c {
            if !(c > 0.0 && c.is_finite()) {
                return bad("c", format!("must be positive, got {c}"));
            }
        }
        if let Some(l) = &self.ladder {
            if l.is_empty() {
                return bad("ladder", "is empty".into());
            }
            if let Some(x) = l.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
                return bad("ladder", format!("entry {x} is not positive"));
            }
        }
        if let (Some(l), Some(t)) = (self.levels, self.truncation) {
            if t < l {
                return bad("truncation", format!("{t} is below levels {l}"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_values_replace_flags() {
        let mut flags = RunConfig { budget: Some(16), grid: Some(64), ..Default::default() };
        let file = RunConfig::from_toml("budget = 32\nformat = \"csv\"\nladder = [0.1, 0.01]").unwrap();
        flags.overlay(&file);
        assert_eq!(flags.budget, Some(32));
        assert_eq!(flags.grid, Some(64));
        assert_eq!(flags.format(), Format::Csv);
        assert_eq!(flags.ladder, Some(vec![0.1, 0.01]));
    }

    #[test]
    fn validation_names_the_field() {
        let err = RunConfig { grid: Some(0), ..Default::default() }.validate().unwrap_err();
        assert!(matches!(err, CliError::Invalid { ref field, .. } if field == "grid"));
        let err = RunConfig { levels: Some(5), truncation: Some(3), ..Default::default() }.validate().unwrap_err();
        assert!(err.to_string().contains("truncation"));
        assert!(RunConfig::from_toml("bogus = 1").is_err());
        assert_eq!(RunConfig::default().seed(), 0);
    }
}
