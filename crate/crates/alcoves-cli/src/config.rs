//! Run configuration: flags override a simple `key=value` file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use alcoves::basering::{make_base_ring, parse_inverted, BaseRing};
use alcoves::rootsys::{build_root_system, CartanType};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("config line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("bad value for {key}: {value}")]
    Value { key: String, value: String },
}

/// Raw settings, all optional; merged from flags and the config file.
#[derive(Clone, Debug, Default)]
pub struct Settings {
    pub ty: Option<String>,
    pub p: Option<u32>,
    pub inverted: Option<String>,
    pub window: Option<i64>,
    pub padding: Option<i64>,
    pub max_deg: Option<i32>,
    pub seed: Option<u64>,
    pub suite: Option<String>,
    pub report: Option<PathBuf>,
    pub dot: Option<PathBuf>,
    pub object: Option<String>,
    pub s: Option<usize>,
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::Value { key: key.into(), value: value.into() })
}

impl Settings {
    /// Reads `key=value` lines; `#` starts a comment.
    pub fn from_file(path: &Path) -> Result<Settings, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.into(), source })?;
        Settings::from_text(&text)
    }

    pub fn from_text(text: &str) -> Result<Settings, ConfigError> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| ConfigError::Syntax { line: i + 1, msg: "expected key=value".into() })?;
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        let mut s = Settings::default();
        for (k, v) in &map {
            match k.as_str() {
                "type" => s.ty = Some(v.clone()),
                "p" => s.p = Some(parse(k, v)?),
                "inverted" => s.inverted = Some(v.clone()),
                "window" => s.window = Some(parse(k, v)?),
                "padding" => s.padding = Some(parse(k, v)?),
                "max-deg" => s.max_deg = Some(parse(k, v)?),
                "seed" => s.seed = Some(parse(k, v)?),
                "suite" => s.suite = Some(v.clone()),
                "report" => s.report = Some(v.into()),
                "dot" => s.dot = Some(v.into()),
                "object" => s.object = Some(v.clone()),
                "s" => s.s = Some(parse(k, v)?),
                _ => return Err(ConfigError::Syntax { line: 0, msg: format!("unknown key {k}") }),
            }
        }
        Ok(s)
    }

    /// Fields set in `self` win over `base`.
    pub fn over(self, base: Settings) -> Settings {
        Settings {
            ty: self.ty.or(base.ty),
            p: self.p.or(base.p),
            inverted: self.inverted.or(base.inverted),
            window: self.window.or(base.window),
            padding: self.padding.or(base.padding),
            max_deg: self.max_deg.or(base.max_deg),
            seed: self.seed.or(base.seed),
            suite: self.suite.or(base.suite),
            report: self.report.or(base.report),
            dot: self.dot.or(base.dot),
            object: self.object.or(base.object),
            s: self.s.or(base.s),
        }
    }
}

/// Fully resolved configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub ty: CartanType,
    pub p: u32,
    pub inverted: String,
    pub window: i64,
    pub padding: i64,
    pub max_deg: i32,
    pub seed: u64,
    pub suite: String,
    pub report: Option<PathBuf>,
    pub dot: Option<PathBuf>,
    pub object: Option<String>,
    pub s: usize,
}

impl RunConfig {
    pub fn resolve(s: Settings) -> Result<RunConfig, ConfigError> {
        let ty_s = s.ty.unwrap_or_else(|| "A1".into());
        let ty = ty_s.parse().map_err(|_| ConfigError::Value { key: "type".into(), value: ty_s })?;
        Ok(RunConfig {
            ty,
            p: s.p.unwrap_or(5),
            inverted: s.inverted.unwrap_or_else(|| "none".into()),
            window: s.window.unwrap_or(3),
            padding: s.padding.unwrap_or(2),
            max_deg: s.max_deg.unwrap_or(4),
            seed: s.seed.unwrap_or(0),
            suite: s.suite.unwrap_or_else(|| "all".into()),
            report: s.report,
            dot: s.dot,
            object: s.object,
            s: s.s.unwrap_or(0),
        })
    }

    /// Base ring after the GKM and saturation checks.
    pub fn ring(&self) -> alcoves::Result<BaseRing> {
        let rs = Arc::new(build_root_system(self.ty));
        let inv = parse_inverted(&rs, &self.inverted)?;
        make_base_ring(rs, self.p, inv)
    }

    pub fn header(&self) -> String {
        format!(
            "type={} p={} inverted={} window={} padding={} max-deg={} seed={}",
            self.ty, self.p, self.inverted, self.window, self.padding, self.max_deg, self.seed
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win() {
        let file = Settings::from_text("type = A2\np=7 # comment\nwindow=1\n").unwrap();
        let flags = Settings { p: Some(5), ..Default::default() };
        let c = RunConfig::resolve(flags.over(file)).unwrap();
        assert_eq!(c.ty, CartanType::A2);
        assert_eq!(c.p, 5);
        assert_eq!(c.window, 1);
        assert!(Settings::from_text("nonsense").is_err());
        assert!(Settings::from_text("colour=red").is_err());
    }
}
