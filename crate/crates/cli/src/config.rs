//! Plain-text `key = value` configuration. Command-line flags override it,
//! and it overrides the built-in defaults.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context, Result};

/// Keys understood in a configuration file.
pub const KEYS: &[&str] = &[
    "kappa", "format", "seed", "physical", "levels", "m_max", "tolerance", "points", "rho_max", "samples", "rmax",
    "alpha", "mass", "dt", "t_end",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (number, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("config line {}: expected key = value, got '{raw}'", number + 1);
            };
            let key = key.trim().replace('-', "_");
            if !KEYS.contains(&key.as_str()) {
                bail!("config line {}: unknown key '{key}'", number + 1);
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Config { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config {}", path.display()))
    }

    /// The file named by `--config`, else by `CURVASPEC_CONFIG`, else empty.
    pub fn discover(flag: Option<&Path>) -> Result<Self> {
        if let Some(path) = flag {
            return Self::load(path);
        }
        match std::env::var_os("CURVASPEC_CONFIG") {
            Some(path) if !path.is_empty() => Self::load(Path::new(&path)),
            _ => Ok(Config::default()),
        }
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.values
            .get(key)
            .map(|v| v.parse::<T>().map_err(|e| anyhow::anyhow!("config key '{key}' = '{v}': {e}")))
            .transpose()
    }

    /// Flag, then config, then default.
    pub fn resolve<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        Ok(match flag {
            Some(v) => v,
            None => self.get(key)?.unwrap_or(default),
        })
    }

    /// Like [`resolve`](Config::resolve) without a default.
    pub fn resolve_opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        Ok(match flag {
            Some(v) => Some(v),
            None => self.get(key)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_precedence() {
        let c = Config::parse("# comment\nkappa = 0.5\n\nformat=json  # trailing\nm-max = 2\n").unwrap();
        assert_eq!(c.get::<f64>("kappa").unwrap(), Some(0.5));
        assert_eq!(c.get::<u32>("m_max").unwrap(), Some(2));
        assert_eq!(c.resolve(Some(1.0), "kappa", 0.0).unwrap(), 1.0);
        assert_eq!(c.resolve(None, "kappa", 0.0).unwrap(), 0.5);
        assert_eq!(c.resolve(None, "seed", 9u64).unwrap(), 9);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(Config::parse("kappa 0.5").is_err());
        assert!(Config::parse("colour = red").is_err());
        let c = Config::parse("kappa = abc").unwrap();
        assert!(c.get::<f64>("kappa").is_err());
    }
}
