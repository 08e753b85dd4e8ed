//! Optional settings file mirroring the global flags, in TOML key = value form.

use std::fs;

use cbap::Error;
use serde::Deserialize;

use crate::{Failure, GlobalArgs};

const DEFAULT_SEED: u64 = 7;

#[derive(Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FileSettings {
    pub json: Option<bool>,
    pub grid: Option<usize>,
    pub window: Option<f64>,
    pub seed: Option<u64>,
    pub timings: Option<bool>,
}

/// Flags merged over the settings file.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Settings {
    pub json: bool,
    pub grid: Option<usize>,
    pub window: Option<f64>,
    pub seed: u64,
    pub timings: bool,
}

impl Settings {
    pub fn resolve(args: &GlobalArgs) -> Result<Settings, Failure> {
        let file = match &args.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {}", path.display(), e.message())))?
            }
            None => FileSettings::default(),
        };
        let settings = Settings {
            json: args.json || file.json.unwrap_or(false),
            grid: args.grid.or(file.grid),
            window: args.window.or(file.window),
            seed: args.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            timings: args.timings || file.timings.unwrap_or(false),
        };
        if settings.grid == Some(0) {
            return Err(Error::Config("grid must be positive".into()).into());
        }
        if settings.window.is_some_and(|w| !(w.is_finite() && w > 0.0)) {
            return Err(Error::Config("window must be positive".into()).into());
        }
        Ok(settings)
    }
}
