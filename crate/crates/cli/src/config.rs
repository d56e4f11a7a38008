//! Flat `key = value` scenario files.
//!
//! ```text
//! # network-size sweep
//! k_max = 9
//! snr_db = 10, 20, 30
//! t_values = 50, 100, 500
//! r = 2
//! trials = 2000
//! base_seed = 1
//! alpha_th_values = 0.1, 0.2, 0.5, 1.0
//! ```
//!
//! Keys mirror [`dmimo_core::SimConfig`]; lists are comma-separated and
//! `#` starts a comment.

use std::path::Path;
use std::str::FromStr;

use crate::error::CliError;

/// Scenario parameters, each optional until defaults are applied.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub k_max: Option<usize>,
    pub snr_db: Option<Vec<f64>>,
    pub t_values: Option<Vec<u64>>,
    pub r: Option<f64>,
    pub trials: Option<usize>,
    pub base_seed: Option<u64>,
    pub alpha_th_values: Option<Vec<f64>>,
}

fn parse_scalar<T: FromStr>(key: &str, raw: &str) -> Result<T, CliError> {
    raw.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("invalid value for {key}: {raw:?}")))
}

fn parse_list<T: FromStr>(key: &str, raw: &str) -> Result<Vec<T>, CliError> {
    if raw.trim().is_empty() {
        return Ok(Vec::new());
    }
    raw.split(',').map(|item| parse_scalar(key, item)).collect()
}

impl Settings {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut s = Settings::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("line {}: expected key = value", lineno + 1)))?;
            let key = key.trim();
            match key {
                "k_max" => s.k_max = Some(parse_scalar(key, value)?),
                "snr_db" => s.snr_db = Some(parse_list(key, value)?),
                "t_values" => s.t_values = Some(parse_list(key, value)?),
                "r" => s.r = Some(parse_scalar(key, value)?),
                "trials" => s.trials = Some(parse_scalar(key, value)?),
                "base_seed" => s.base_seed = Some(parse_scalar(key, value)?),
                "alpha_th_values" => s.alpha_th_values = Some(parse_list(key, value)?),
                other => return Err(CliError::Usage(format!("line {}: unknown key {other:?}", lineno + 1))),
            }
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Fields set in `other` replace those in `self`.
    pub fn overlay(self, other: Settings) -> Settings {
        Settings {
            k_max: other.k_max.or(self.k_max),
            snr_db: other.snr_db.or(self.snr_db),
            t_values: other.t_values.or(self.t_values),
            r: other.r.or(self.r),
            trials: other.trials.or(self.trials),
            base_seed: other.base_seed.or(self.base_seed),
            alpha_th_values: other.alpha_th_values.or(self.alpha_th_values),
        }
    }
}
