// SPDX-License-Identifier: Apache-2.0

//! Run configuration, read from a TOML file and overridden by CLI flags.
//!
//! ```toml
//! arch = "9T"            # built-in name or path to an architecture file
//! min_fins = 2
//! max_fins = 3
//! extra_width = 2        # placement widths explored beyond the minimum
//! placement_limit = 20000
//! top_n = 10
//! # load = 8.0           # fixed sizing load; FO4 when absent
//! # poly_pitch = 54.0
//! # overrides = "tuning.toml"
//! basic_cells = ["INV_X1", "NAND2_X1", "NOR2_X1"]
//!
//! [model]
//! r1 = 1.0
//! cg = 1.0
//! cd = 0.5
//! cw = 1.0
//! beta = 1.1
//!
//! [pin_cap]
//! g = 1.0
//! m = 0.5
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::arch::{load_architecture, ArchError, Architecture};
use crate::library;
use crate::placer::{PinCapModel, PlaceOptions};
use crate::sizing::DelayModel;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parsing config: {0}")]
    Toml(#[from] toml::de::Error),
    #[error(transparent)]
    Arch(#[from] ArchError),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub arch: String,
    pub min_fins: u32,
    pub max_fins: u32,
    pub extra_width: usize,
    pub placement_limit: usize,
    pub top_n: usize,
    pub load: Option<f64>,
    pub poly_pitch: Option<f64>,
    pub overrides: Option<PathBuf>,
    pub basic_cells: Vec<String>,
    pub model: DelayModel,
    pub pin_cap: PinCapModel,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            arch: "9T".into(),
            min_fins: 2,
            max_fins: 3,
            extra_width: 2,
            placement_limit: 20_000,
            top_n: 10,
            load: None,
            poly_pitch: None,
            overrides: None,
            basic_cells: library::BASIC_CELLS.iter().map(|s| s.to_string()).collect(),
            model: DelayModel::default(),
            pin_cap: PinCapModel::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        Ok(toml::from_str(text)?)
    }

    /// Reads a config file; relative `overrides` paths resolve against its directory.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        let mut c = Self::from_toml(&text)?;
        if let (Some(o), Some(dir)) = (&c.overrides, path.parent()) {
            if o.is_relative() {
                c.overrides = Some(dir.join(o));
            }
        }
        Ok(c)
    }

    /// Resolves the architecture and checks every invariant.
    pub fn resolve_arch(&self) -> Result<Architecture, ConfigError> {
        let mut a = load_architecture(&self.arch)?;
        if let Some(p) = self.poly_pitch {
            a.poly_pitch = p;
        }
        a.validate()?;
        self.validate(&a)?;
        Ok(a)
    }

    pub fn validate(&self, arch: &Architecture) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError::Invalid(m));
        if self.min_fins == 0 || self.min_fins > self.max_fins {
            return bad(format!("need 1 <= min_fins <= max_fins, got {}..{}", self.min_fins, self.max_fins));
        }
        if self.max_fins > arch.fins_per_transistor {
            return bad(format!("max_fins {} exceeds the {} limit of {} fins per transistor", self.max_fins, arch.name, arch.fins_per_transistor));
        }
        if self.placement_limit == 0 || self.top_n == 0 {
            return bad("placement_limit and top_n must be at least 1".into());
        }
        if let Some(l) = self.load {
            if !l.is_finite() || l < 0.0 {
                return bad("load must be non-negative".into());
            }
        }
        self.model.validate().map_err(ConfigError::Invalid)?;
        if !(self.pin_cap.g >= 0.0 && self.pin_cap.m >= 0.0) {
            return bad("pin_cap constants must be non-negative".into());
        }
        Ok(())
    }

    pub fn place_options(&self) -> PlaceOptions {
        PlaceOptions { extra_width: self.extra_width, limit: self.placement_limit, pin_cap: self.pin_cap }
    }
}
