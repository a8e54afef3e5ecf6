//! Run configuration: one TOML document shared by every CLI command.
//!
//! Relative paths in a configuration file are resolved against the file's
//! own directory (see [`RunConfig::resolved`]), so a run is reproducible
//! no matter where the process was started.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::model::HandSide;
use crate::signal::{SignalError, SmoothingConfig};
use crate::stats::{TTestVariant, DEFAULT_THRESHOLD_K};

/// Errors from loading, saving, or checking a run configuration.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{}: i/o error: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Parse {
        path: PathBuf,
        #[source]
        source: Box<toml::de::Error>,
    },
    #[error("configuration did not serialize: {0}")]
    Format(#[from] toml::ser::Error),
    #[error("{what} not found: {}", path.display())]
    MissingPath { what: &'static str, path: PathBuf },
    #[error(transparent)]
    Smoothing(#[from] SignalError),
    #[error("{field} must lie in (0, 1], got {value}")]
    InvalidFraction { field: &'static str, value: f64 },
    #[error("threshold_k must be finite and positive, got {value}")]
    InvalidThreshold { value: f64 },
}

/// Everything a batch run needs: where the data lives, where outputs go,
/// and the knobs of each pipeline stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    /// Directory scanned for recording subdirectories.
    pub dataset_root: PathBuf,
    /// Directory all command outputs are written under (created on demand).
    pub output_dir: PathBuf,
    /// Expert baseline file: written by `baseline`, read by `feedback`.
    pub baseline: PathBuf,
    /// Optional proxy binding table; the built-in table applies when unset.
    pub bindings: Option<PathBuf>,
    /// Optional feedback message templates; built-ins apply when unset.
    pub templates: Option<PathBuf>,
    /// Gate -> impute -> smooth parameters.
    pub smoothing: SmoothingConfig,
    /// Whether background segments take part in edit score and F1.
    pub include_background: bool,
    /// Two-sample test variant used by `stats`.
    pub ttest: TTestVariant,
    /// Minimum fraction of a segment's frames a tool must cover for
    /// tool-based hand selection.
    pub tool_min_fraction: f64,
    /// Hand preferred when both sides match the tool equally well.
    pub tool_tie_break: HandSide,
    /// Feedback trigger width in expert standard deviations.
    pub threshold_k: f64,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            dataset_root: PathBuf::from("dataset"),
            output_dir: PathBuf::from("out"),
            baseline: PathBuf::from("out/baseline.json"),
            bindings: None,
            templates: None,
            smoothing: SmoothingConfig::default(),
            include_background: true,
            ttest: TTestVariant::default(),
            tool_min_fraction: 0.5,
            tool_tie_break: HandSide::Right,
            threshold_k: DEFAULT_THRESHOLD_K,
        }
    }
}

impl RunConfig {
    /// Checks every field that can be wrong independent of the filesystem.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.smoothing.validate()?;
        if !self.tool_min_fraction.is_finite()
            || self.tool_min_fraction <= 0.0
            || self.tool_min_fraction > 1.0
        {
            return Err(ConfigError::InvalidFraction {
                field: "tool_min_fraction",
                value: self.tool_min_fraction,
            });
        }
        if !self.threshold_k.is_finite() || self.threshold_k <= 0.0 {
            return Err(ConfigError::InvalidThreshold { value: self.threshold_k });
        }
        Ok(())
    }

    /// Checks that the input paths every command needs actually exist.
    /// Output paths (`output_dir`, `baseline`) are exempt: commands create
    /// them.
    pub fn check_input_paths(&self) -> Result<(), ConfigError> {
        if !self.dataset_root.is_dir() {
            return Err(ConfigError::MissingPath {
                what: "dataset root",
                path: self.dataset_root.clone(),
            });
        }
        for (what, path) in [
            ("bindings file", &self.bindings),
            ("templates file", &self.templates),
        ] {
            if let Some(path) = path {
                if !path.is_file() {
                    return Err(ConfigError::MissingPath { what, path: path.clone() });
                }
            }
        }
        Ok(())
    }

    /// Returns a copy with every relative path resolved against `base`.
    /// Absolute paths are untouched.
    pub fn resolved(mut self, base: &Path) -> RunConfig {
        let resolve = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        resolve(&mut self.dataset_root);
        resolve(&mut self.output_dir);
        resolve(&mut self.baseline);
        if let Some(p) = &mut self.bindings {
            resolve(p);
        }
        if let Some(p) = &mut self.templates {
            resolve(p);
        }
        self
    }
}

/// Loads a configuration file, validating fields but not paths. Relative
/// paths are left as written; callers resolve them explicitly.
pub fn load_run_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
    let config: RunConfig = toml::from_str(&text)
        .map_err(|source| ConfigError::Parse { path: path.to_path_buf(), source: Box::new(source) })?;
    config.validate()?;
    Ok(config)
}

/// Writes a configuration file in its canonical TOML form.
pub fn save_run_config(path: &Path, config: &RunConfig) -> Result<(), ConfigError> {
    let text = toml::to_string_pretty(config)?;
    std::fs::write(path, text)
        .map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })
}
