//! `key = value` run files. Command-line flags take precedence over the file.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};

/// Keys a run file may set.
pub const KEYS: &[&str] = &[
    "p", "s", "n", "l", "r", "mvec", "t", "verify", "series", "cutoff", "prec", "smax", "samples", "seed", "beta",
    "u-form", "classic", "translation", "workers", "output",
];

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunFile {
    values: BTreeMap<String, String>,
}

impl RunFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| anyhow!("line {}: expected key = value", no + 1))?;
            let key = k.trim().replace('_', "-");
            if !KEYS.contains(&key.as_str()) {
                bail!("line {}: unknown key `{}`", no + 1, k.trim());
            }
            if values.insert(key, v.trim().to_string()).is_some() {
                bail!("line {}: `{}` set twice", no + 1, k.trim());
            }
        }
        Ok(RunFile { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.values
            .get(key)
            .map(|v| v.parse::<T>().map_err(|e| anyhow!("`{key} = {v}`: {e}")))
            .transpose()
    }

    /// The flag if given, else the file value.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }

    pub fn require<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        self.pick(flag, key)?.ok_or_else(|| anyhow!("missing --{key} (flag or run file)"))
    }

    /// Boolean switches: a set flag wins, otherwise `true`/`false` from the file.
    pub fn switch(&self, flag: bool, key: &str) -> Result<bool> {
        Ok(flag || self.get::<bool>(key)?.unwrap_or(false))
    }
}

/// Comma or whitespace separated list of exponents.
pub fn parse_list(s: &str) -> Result<Vec<u64>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<u64>().with_context(|| format!("`{t}` is not a nonnegative integer")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let f = RunFile::parse("p = 5\n# comment\ns=2  # trailing\nseed = 9\nu_form = true\n").unwrap();
        assert_eq!(f.pick(None::<u64>, "p").unwrap(), Some(5));
        assert_eq!(f.pick(Some(7u64), "p").unwrap(), Some(7));
        assert_eq!(f.require(None::<u32>, "s").unwrap(), 2);
        assert!(f.require(None::<u64>, "l").is_err());
        assert!(f.switch(false, "u-form").unwrap());
        assert!(!f.switch(false, "series").unwrap());
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(RunFile::parse("p 5").is_err());
        assert!(RunFile::parse("q = 5").is_err());
        assert!(RunFile::parse("p = 5\np = 7").is_err());
        assert!(RunFile::parse("p = five").unwrap().get::<u64>("p").is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list("2, 7 12").unwrap(), vec![2, 7, 12]);
        assert!(parse_list("2,-1").is_err());
    }
}
