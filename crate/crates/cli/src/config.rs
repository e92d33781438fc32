use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use cdf_core::codec::MissingPolicy;

use crate::Format;

/// Environment override for the missing-value policy used when reading.
pub const POLICY_ENV: &str = "CDF_MISSING_POLICY";
/// Config file used when `--config` is not given.
pub const CONFIG_ENV: &str = "CDF_CONFIG";

/// Defaults read from a `key = value` file. Flags override these.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    pub missing_policy: Option<MissingPolicy>,
    pub precision: Option<u32>,
    pub format: Option<Format>,
    pub strict_warnings: Option<bool>,
    pub jobs: Option<usize>,
    pub cap: Option<usize>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = Config::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() || line.starts_with('[') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("line {}: expected `key = value`", n + 1);
            };
            let key = key.trim();
            let value = value.trim().trim_matches('"');
            let at = || format!("line {}: bad value for `{key}`", n + 1);
            match key {
                "missing_policy" => c.missing_policy = Some(value.parse().with_context(at)?),
                "precision" => c.precision = Some(value.parse().with_context(at)?),
                "format" => c.format = Some(value.parse().with_context(at)?),
                "strict_warnings" => c.strict_warnings = Some(value.parse().with_context(at)?),
                "jobs" => c.jobs = Some(value.parse().with_context(at)?),
                "cap" => c.cap = Some(value.parse().with_context(at)?),
                _ => bail!("line {}: unknown key `{key}`", n + 1),
            }
        }
        Ok(c)
    }

    /// Reads `path`, or the file named by `CDF_CONFIG`, or nothing.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let from_env = std::env::var_os(CONFIG_ENV).map(std::path::PathBuf::from);
        let Some(path) = path.map(Path::to_path_buf).or(from_env) else {
            return Ok(Config::default());
        };
        let text = std::fs::read_to_string(&path).with_context(|| format!("reading config {}", path.display()))?;
        Config::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    /// Reading policy: flag, then environment, then config, then the default.
    pub fn policy(&self, flag: Option<MissingPolicy>) -> Result<MissingPolicy> {
        if let Some(p) = flag {
            return Ok(p);
        }
        if let Ok(v) = std::env::var(POLICY_ENV) {
            return MissingPolicy::from_str(v.trim()).with_context(|| format!("in {POLICY_ENV}"));
        }
        Ok(self.missing_policy.unwrap_or_default())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_and_comments() {
        let c = Config::parse("# defaults\nmissing_policy = sentinel\nprecision=2\nformat = \"json\"\n\nstrict_warnings = true # trailing\n").unwrap();
        assert_eq!(c.missing_policy, Some(MissingPolicy::Sentinel));
        assert_eq!(c.precision, Some(2));
        assert_eq!(c.format, Some(Format::Json));
        assert_eq!(c.strict_warnings, Some(true));
    }

    #[test]
    fn rejects_unknown_keys_and_values() {
        assert!(Config::parse("colour = red").is_err());
        assert!(Config::parse("precision = many").is_err());
        assert!(Config::parse("just words").is_err());
    }

    #[test]
    fn flag_wins() {
        let c = Config { missing_policy: Some(MissingPolicy::Sentinel), ..Config::default() };
        assert_eq!(c.policy(Some(MissingPolicy::Null)).unwrap(), MissingPolicy::Null);
    }
}
