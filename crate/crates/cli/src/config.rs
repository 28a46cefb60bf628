//! Run configuration: an optional TOML or JSON file, overridden by flags.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use vilenkin::{FejerConvention, VilenkinBase};

use crate::CliResult;

/// Largest admissible `M_K`.
pub const MAX_GROUP_SIZE: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Keys accepted in a config file. Every key is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub base: Option<Vec<usize>>,
    pub depth: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub convention: Option<FejerConvention>,
}

impl FileConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let parsed = match path.extension().and_then(|e| e.to_str()) {
            Some("json") => serde_json::from_str(&text).map_err(|e| e.to_string()),
            _ => toml::from_str(&text).map_err(|e| e.to_string()),
        };
        Ok(parsed.map_err(|e| format!("invalid config {}: {e}", path.display()))?)
    }
}

/// Fully resolved settings shared by all commands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub moduli: Vec<usize>,
    pub depth: usize,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub convention: FejerConvention,
}

/// Provenance block written into JSON reports. The output path is left out
/// so that reports do not depend on where they were written.
#[derive(Debug, Serialize)]
pub struct ConfigEcho<'a> {
    pub command: &'a str,
    pub base: &'a [usize],
    pub depth: usize,
    pub seed: Option<u64>,
    pub convention: FejerConvention,
    pub log_base: &'static str,
    pub version: &'static str,
}

impl RunConfig {
    /// Builds the base, refusing anything with `M_K` above [`MAX_GROUP_SIZE`].
    pub fn base(&self) -> CliResult<VilenkinBase> {
        base_with_guard(&self.moduli, self.depth)
    }

    pub fn require_seed(&self, what: &str) -> CliResult<u64> {
        self.seed
            .ok_or_else(|| format!("{what} is randomized: pass --seed or set `seed` in the config").into())
    }

    pub fn echo<'a>(&'a self, command: &'a str) -> ConfigEcho<'a> {
        ConfigEcho {
            command,
            base: &self.moduli,
            depth: self.depth,
            seed: self.seed,
            convention: self.convention,
            log_base: "natural",
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

pub fn base_with_guard(moduli: &[usize], depth: usize) -> CliResult<VilenkinBase> {
    if moduli.is_empty() {
        return Err("the base needs at least one modulus".into());
    }
    let mut size: usize = 1;
    for k in 0..depth {
        let m = moduli[k % moduli.len()];
        size = size.saturating_mul(m.max(1));
        if size > MAX_GROUP_SIZE {
            return Err(vilenkin::Error::ResourceGuard {
                size,
                limit: MAX_GROUP_SIZE,
            }
            .into());
        }
    }
    Ok(VilenkinBase::new(moduli, depth)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn guard_refuses_large_groups() {
        assert!(base_with_guard(&[2], 20).is_ok());
        let err = base_with_guard(&[2], 21).unwrap_err().to_string();
        assert!(err.contains("resource guard"), "{err}");
        assert!(base_with_guard(&[3, 5], 40).is_err());
    }

    #[test]
    fn config_files() {
        let dir = std::env::temp_dir().join(format!("vilenkin-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let toml_path = dir.join("run.toml");
        std::fs::write(&toml_path, "base = [2, 3]\ndepth = 5\nformat = \"json\"\n").unwrap();
        let c = FileConfig::load(&toml_path).unwrap();
        assert_eq!(c.base, Some(vec![2, 3]));
        assert_eq!(c.format, Some(Format::Json));
        let json_path = dir.join("run.json");
        std::fs::write(&json_path, r#"{"seed": 7, "convention": "paper"}"#).unwrap();
        let c = FileConfig::load(&json_path).unwrap();
        assert_eq!((c.seed, c.convention), (Some(7), Some(FejerConvention::Paper)));
        std::fs::write(&json_path, r#"{"sede": 7}"#).unwrap();
        assert!(FileConfig::load(&json_path).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
