//! Run configuration. Sources, strongest first: command-line flags,
//! `TREELAB_*` environment variables, a `key = value` config file, defaults.

use std::path::Path;

use crate::catalog::DEFAULT_MAX_K;
use crate::error::{Error, Result};
use crate::exact::DEFAULT_PRECISION;
use crate::generators::DEFAULT_VERTEX_CAP;

pub const ENV_PREFIX: &str = "TREELAB_";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub max_k: usize,
    pub vertex_cap: usize,
    pub decimal_precision: usize,
    /// Worker threads; `None` lets the pool pick.
    pub threads: Option<usize>,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_k: DEFAULT_MAX_K,
            vertex_cap: DEFAULT_VERTEX_CAP,
            decimal_precision: DEFAULT_PRECISION,
            threads: None,
            seed: 0,
        }
    }
}

/// A partial configuration from one source.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Overrides {
    pub max_k: Option<usize>,
    pub vertex_cap: Option<usize>,
    pub decimal_precision: Option<usize>,
    /// `Some(None)` is an explicit "auto".
    pub threads: Option<Option<usize>>,
    pub seed: Option<u64>,
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("{key}: cannot parse {value:?}")))
}

impl Overrides {
    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim().trim_matches('"');
        match key {
            "max_k" => self.max_k = Some(parse_num(key, value)?),
            "vertex_cap" => self.vertex_cap = Some(parse_num(key, value)?),
            "decimal_precision" | "precision" => {
                self.decimal_precision = Some(parse_num(key, value)?)
            }
            "threads" | "parallelism" => {
                self.threads = Some(if value == "auto" { None } else { Some(parse_num(key, value)?) })
            }
            "seed" => self.seed = Some(parse_num(key, value)?),
            _ => return Err(Error::InvalidParameter(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    /// `key = value` lines; `#` starts a comment, blank lines and `[section]`
    /// headers are ignored.
    pub fn from_file_text(text: &str) -> Result<Self> {
        let mut out = Overrides::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() || line.starts_with('[') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidParameter(format!("config line {}: expected key = value", i + 1))
            })?;
            out.set(key.trim(), value)?;
        }
        Ok(out)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_file_text(&std::fs::read_to_string(path)?)
    }

    /// Reads `TREELAB_MAX_K`, `TREELAB_VERTEX_CAP`, `TREELAB_DECIMAL_PRECISION`,
    /// `TREELAB_THREADS`, and `TREELAB_SEED`; other variables are ignored.
    pub fn from_env<I: IntoIterator<Item = (String, String)>>(vars: I) -> Result<Self> {
        let mut out = Overrides::default();
        for (name, value) in vars {
            let Some(key) = name.strip_prefix(ENV_PREFIX) else { continue };
            let key = key.to_ascii_lowercase();
            if matches!(key.as_str(), "max_k" | "vertex_cap" | "decimal_precision" | "threads" | "seed") {
                out.set(&key, &value)?;
            }
        }
        Ok(out)
    }

    fn apply(&self, c: &mut Config) {
        if let Some(v) = self.max_k {
            c.max_k = v;
        }
        if let Some(v) = self.vertex_cap {
            c.vertex_cap = v;
        }
        if let Some(v) = self.decimal_precision {
            c.decimal_precision = v;
        }
        if let Some(v) = self.threads {
            c.threads = v;
        }
        if let Some(v) = self.seed {
            c.seed = v;
        }
    }
}

impl Config {
    /// Layers `file`, then `env`, then `flags` over the defaults.
    pub fn resolve(file: &Overrides, env: &Overrides, flags: &Overrides) -> Result<Config> {
        let mut c = Config::default();
        for layer in [file, env, flags] {
            layer.apply(&mut c);
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParameter(format!("{what} must be positive")));
        if self.max_k == 0 {
            return bad("max_k");
        }
        if self.vertex_cap == 0 {
            return bad("vertex_cap");
        }
        if self.decimal_precision == 0 {
            return bad("decimal_precision");
        }
        if self.threads == Some(0) {
            return bad("threads");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env(pairs: &[(&str, &str)]) -> Vec<(String, String)> {
        pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    #[test]
    fn precedence() {
        let file = Overrides::from_file_text("seed = 1\nmax_k = 10\n# note\nthreads = 2\n").unwrap();
        let vars = Overrides::from_env(env(&[("TREELAB_SEED", "2"), ("PATH", "/bin")])).unwrap();
        let flags = Overrides { max_k: Some(11), ..Overrides::default() };
        let c = Config::resolve(&file, &vars, &flags).unwrap();
        assert_eq!(c.seed, 2);
        assert_eq!(c.max_k, 11);
        assert_eq!(c.threads, Some(2));
        assert_eq!(c.vertex_cap, DEFAULT_VERTEX_CAP);
    }

    #[test]
    fn defaults() {
        let none = Overrides::default();
        let c = Config::resolve(&none, &none, &none).unwrap();
        assert_eq!(c, Config::default());
        assert_eq!((c.max_k, c.decimal_precision), (12, 12));
    }

    #[test]
    fn auto_threads_and_errors() {
        let vars = Overrides::from_env(env(&[("TREELAB_THREADS", "auto")])).unwrap();
        assert_eq!(vars.threads, Some(None));
        assert!(Overrides::from_file_text("colour = red").is_err());
        assert!(Overrides::from_file_text("seed").is_err());
        assert!(Overrides::from_env(env(&[("TREELAB_SEED", "x")])).is_err());
        let zero = Overrides { decimal_precision: Some(0), ..Overrides::default() };
        let none = Overrides::default();
        assert!(Config::resolve(&none, &none, &zero).is_err());
    }
}
