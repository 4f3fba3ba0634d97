//! Flat `key = value` configuration file.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use kuhn_core::TrackerConfig;

pub const DEFAULT_CORPUS_DIR: &str = "kuhn-corpus";

#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub corpus_dir: PathBuf,
    pub tracker: TrackerConfig,
    pub lexicon_path: Option<PathBuf>,
}

impl Default for CliConfig {
    fn default() -> Self {
        CliConfig {
            corpus_dir: PathBuf::from(DEFAULT_CORPUS_DIR),
            tracker: TrackerConfig::default(),
            lexicon_path: None,
        }
    }
}

fn unquote(v: &str) -> &str {
    v.strip_prefix('"')
        .and_then(|s| s.strip_suffix('"'))
        .unwrap_or(v)
}

impl CliConfig {
    /// Parses the config text. Unknown keys, repeated keys and malformed
    /// values are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = CliConfig::default();
        let mut seen = std::collections::HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected `key = value`", i + 1))?;
            let key = key.trim();
            let value = unquote(value.trim());
            if !seen.insert(key.to_string()) {
                bail!("line {}: key `{key}` set twice", i + 1);
            }
            let bad = |what: &str| anyhow!("line {}: `{key}` expects {what}, got `{value}`", i + 1);
            match key {
                "corpus_dir" => cfg.corpus_dir = PathBuf::from(value),
                "lexicon_path" => cfg.lexicon_path = Some(PathBuf::from(value)),
                "window" => cfg.tracker.window = value.parse().map_err(|_| bad("an integer"))?,
                "min_establish" => {
                    cfg.tracker.min_establish = value.parse().map_err(|_| bad("an integer"))?
                }
                "theta_drift" => {
                    cfg.tracker.theta_drift = value.parse().map_err(|_| bad("a number"))?
                }
                "theta_crisis" => {
                    cfg.tracker.theta_crisis = value.parse().map_err(|_| bad("a number"))?
                }
                other => bail!("line {}: unknown config key `{other}`", i + 1),
            }
        }
        cfg.tracker
            .validate()
            .map_err(|e| anyhow!("{e}"))?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("invalid config {}", path.display()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_file() {
        let cfg = CliConfig::parse(
            "# tracker\ncorpus_dir = /tmp/c\nwindow = 10\nmin_establish=2\n\
             theta_drift = 0.3\ntheta_crisis = \"0.4\"\nlexicon_path = cues.tsv\n",
        )
        .unwrap();
        assert_eq!(cfg.corpus_dir, PathBuf::from("/tmp/c"));
        assert_eq!(
            cfg.tracker,
            TrackerConfig { window: 10, min_establish: 2, theta_drift: 0.3, theta_crisis: 0.4 }
        );
        assert_eq!(cfg.lexicon_path, Some(PathBuf::from("cues.tsv")));
    }

    #[test]
    fn empty_is_default() {
        assert_eq!(CliConfig::parse("").unwrap(), CliConfig::default());
    }

    #[test]
    fn rejects_unknown_and_malformed() {
        assert!(CliConfig::parse("colour = blue").is_err());
        assert!(CliConfig::parse("window").is_err());
        assert!(CliConfig::parse("window = ten").is_err());
        assert!(CliConfig::parse("window = 0").is_err());
        assert!(CliConfig::parse("theta_drift = 1.5").is_err());
        assert!(CliConfig::parse("window = 3\nwindow = 4").is_err());
    }
}
