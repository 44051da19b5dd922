//! Flat `key = value` run configuration.
//!
//! Keys mirror the `run` flags: `test`, `nx`, `method`, `levelset`,
//! `dt_factor`, `final_time`, `dump_fields`, `out`, `log` and `timing`.
//! Blank lines and lines starting with `#` are ignored.

use std::path::PathBuf;
use std::str::FromStr;

use slgfm_core::driver::{LevelSetMode, Method};

use crate::cases::CaseId;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: bad value for `{key}`: {reason}")]
    Value { line: usize, key: String, reason: String },
    #[error("line {line}: duplicate key `{key}`")]
    Duplicate { line: usize, key: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MethodArg(pub Method);

impl FromStr for MethodArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "slgfm" => Ok(Self(Method::SlGfm)),
            "slbdf2" => Ok(Self(Method::SlBdf2)),
            _ => Err(format!("unknown method `{s}` (expected slgfm or slbdf2)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelSetArg(pub LevelSetMode);

impl FromStr for LevelSetArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "computed" => Ok(Self(LevelSetMode::Extended)),
            "no-extension" => Ok(Self(LevelSetMode::Raw)),
            "exact" => Ok(Self(LevelSetMode::Exact)),
            _ => Err(format!("unknown level-set mode `{s}` (expected computed, no-extension or exact)")),
        }
    }
}

/// Settings of one run; unset fields fall back to the test's defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunSettings {
    pub test: Option<CaseId>,
    pub nx: Option<usize>,
    pub method: Option<Method>,
    pub levelset: Option<LevelSetMode>,
    pub dt_factor: Option<f64>,
    pub final_time: Option<f64>,
    pub dump_fields: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub log: Option<PathBuf>,
    pub timing: Option<bool>,
}

impl RunSettings {
    /// Fields set in `other` win.
    pub fn overridden_by(self, other: RunSettings) -> RunSettings {
        RunSettings {
            test: other.test.or(self.test),
            nx: other.nx.or(self.nx),
            method: other.method.or(self.method),
            levelset: other.levelset.or(self.levelset),
            dt_factor: other.dt_factor.or(self.dt_factor),
            final_time: other.final_time.or(self.final_time),
            dump_fields: other.dump_fields.or(self.dump_fields),
            out: other.out.or(self.out),
            log: other.log.or(self.log),
            timing: other.timing.or(self.timing),
        }
    }
}

fn parse<T: FromStr>(line: usize, key: &str, v: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    v.parse().map_err(|e: T::Err| ConfigError::Value { line, key: key.into(), reason: e.to_string() })
}

fn set<T>(slot: &mut Option<T>, value: T, line: usize, key: &str) -> Result<(), ConfigError> {
    if slot.is_some() {
        return Err(ConfigError::Duplicate { line, key: key.into() });
    }
    *slot = Some(value);
    Ok(())
}

pub fn parse_config(text: &str) -> Result<RunSettings, ConfigError> {
    let mut s = RunSettings::default();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let (key, value) = body.split_once('=').ok_or(ConfigError::Syntax { line })?;
        let (key, v) = (key.trim(), value.trim());
        if key.is_empty() || v.is_empty() {
            return Err(ConfigError::Syntax { line });
        }
        match key {
            "test" => set(&mut s.test, parse(line, key, v)?, line, key)?,
            "nx" => set(&mut s.nx, parse(line, key, v)?, line, key)?,
            "method" => set(&mut s.method, parse::<MethodArg>(line, key, v)?.0, line, key)?,
            "levelset" => set(&mut s.levelset, parse::<LevelSetArg>(line, key, v)?.0, line, key)?,
            "dt_factor" => set(&mut s.dt_factor, parse(line, key, v)?, line, key)?,
            "final_time" => set(&mut s.final_time, parse(line, key, v)?, line, key)?,
            "dump_fields" => set(&mut s.dump_fields, PathBuf::from(v), line, key)?,
            "out" => set(&mut s.out, PathBuf::from(v), line, key)?,
            "log" => set(&mut s.log, PathBuf::from(v), line, key)?,
            "timing" => set(&mut s.timing, parse(line, key, v)?, line, key)?,
            _ => return Err(ConfigError::UnknownKey { line, key: key.into() }),
        }
    }
    Ok(s)
}
