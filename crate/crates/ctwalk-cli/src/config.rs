//! Defaults file and precedence: CLI flags override file values, file
//! values override built-ins.

use std::path::Path;

use serde::Deserialize;

use ctwalk::{Error, Result};

#[derive(Clone, Copy, Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub tol_sym: Option<f64>,
    pub tol_sum: Option<f64>,
    pub tol_herm: Option<f64>,
    pub seed: Option<u64>,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub points: Option<usize>,
}

/// Fully resolved runtime defaults.
#[derive(Clone, Copy, Debug)]
pub struct Config {
    pub tol_sym: f64,
    pub tol_sum: f64,
    pub tol_herm: f64,
    pub seed: u64,
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            tol_sym: 1e-10,
            tol_sum: 1e-10,
            tol_herm: 1e-10,
            seed: 0,
            t_min: 1e-3,
            t_max: 1e2,
            points: 50,
        }
    }
}

/// Parses the JSON defaults file. Malformed input fails with the
/// parser's line/column position.
pub fn parse_config(text: &str) -> Result<ConfigFile> {
    serde_json::from_str(text).map_err(Error::Json)
}

/// Reads and parses the optional defaults file.
pub fn load_config(path: Option<&Path>) -> Result<ConfigFile> {
    match path {
        None => Ok(ConfigFile::default()),
        Some(p) => parse_config(&std::fs::read_to_string(p)?),
    }
}

pub struct Overrides {
    pub tol_sym: Option<f64>,
    pub tol_sum: Option<f64>,
    pub tol_herm: Option<f64>,
    pub seed: Option<u64>,
}

pub fn resolve(file: ConfigFile, flags: Overrides) -> Config {
    let defaults = Config::default();
    Config {
        tol_sym: flags.tol_sym.or(file.tol_sym).unwrap_or(defaults.tol_sym),
        tol_sum: flags.tol_sum.or(file.tol_sum).unwrap_or(defaults.tol_sum),
        tol_herm: flags.tol_herm.or(file.tol_herm).unwrap_or(defaults.tol_herm),
        seed: flags.seed.or(file.seed).unwrap_or(defaults.seed),
        t_min: file.t_min.unwrap_or(defaults.t_min),
        t_max: file.t_max.unwrap_or(defaults.t_max),
        points: file.points.unwrap_or(defaults.points),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_flag_over_file_over_builtin() {
        let file: ConfigFile = serde_json::from_str(r#"{"tol_sym": 1e-8}"#).unwrap();
        let resolved = resolve(
            file,
            Overrides {
                tol_sym: Some(1e-6),
                tol_sum: None,
                tol_herm: None,
                seed: None,
            },
        );
        assert_eq!(resolved.tol_sym, 1e-6);
        assert_eq!(resolved.tol_sum, 1e-10);

        let resolved = resolve(
            file,
            Overrides {
                tol_sym: None,
                tol_sum: None,
                tol_herm: None,
                seed: None,
            },
        );
        assert_eq!(resolved.tol_sym, 1e-8);
    }

    #[test]
    fn malformed_config_reports_position() {
        let dir = std::env::temp_dir().join("ctwalk-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.json");
        std::fs::write(&path, "{\n  \"tol_sym\": oops\n}").unwrap();
        let err = load_config(Some(&path)).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 2"), "missing position in: {msg}");
    }
}
