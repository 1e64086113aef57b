//! `key = value` configuration files. `#` starts a comment; `domain` and
//! `var` may repeat. Command-line flags override file values (a repeated key
//! given on the command line replaces the file's list).

use std::path::Path;

use anyhow::Context;

use crate::UsageError;

pub const KEYS: &[&str] = &[
    "property",
    "grid",
    "random",
    "seed",
    "domain",
    "var",
    "slack_tol",
    "tail_bound",
    "eta_terms",
    "fd_step",
    "report_tol",
    "format",
    "output",
    "quick",
    "exact",
    "expect_violations",
    "label",
    "reproducible",
    "threads",
];

#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    entries: Vec<(String, String)>,
}

impl FileConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Ok(Self::parse(&text)?)
    }

    pub fn parse(text: &str) -> Result<Self, UsageError> {
        let mut entries = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| UsageError(format!("config line {}: expected key = value", n + 1)))?;
            let k = k.trim();
            if !KEYS.contains(&k) {
                return Err(UsageError(format!("config line {}: unknown key `{k}`", n + 1)));
            }
            entries.push((k.to_string(), v.trim().to_string()));
        }
        Ok(FileConfig { entries })
    }

    /// Last value of a single-valued key.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn all(&self, key: &str) -> Vec<String> {
        self.entries
            .iter()
            .filter(|(k, _)| k == key)
            .map(|(_, v)| v.clone())
            .collect()
    }

    pub fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, UsageError> {
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| UsageError(format!("config key `{key}`: invalid value `{v}`")))
            })
            .transpose()
    }

    pub fn flag(&self, key: &str) -> Result<bool, UsageError> {
        match self.get(key) {
            None => Ok(false),
            Some("true" | "yes" | "1") => Ok(true),
            Some("false" | "no" | "0") => Ok(false),
            Some(v) => Err(UsageError(format!(
                "config key `{key}`: expected true/false, got `{v}`"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_rejects_unknown_keys() {
        let c = FileConfig::parse(
            "# comment\nproperty = check_abq_direct\nseed=3 # trailing\ndomain = a>b\ndomain = x<2\n",
        )
        .unwrap();
        assert_eq!(c.get("property"), Some("check_abq_direct"));
        assert_eq!(c.parsed::<u64>("seed").unwrap(), Some(3));
        assert_eq!(c.all("domain"), ["a>b", "x<2"]);
        assert!(FileConfig::parse("bogus = 1").is_err());
        assert!(FileConfig::parse("no equals sign").is_err());
        assert!(FileConfig::parse("seed = x")
            .unwrap()
            .parsed::<u64>("seed")
            .is_err());
    }
}
