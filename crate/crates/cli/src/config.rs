//! Run configuration: a flat `key = value` file merged with command-line flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use splitkdv_core::splitting::SplitScheme;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Problem {
    Logistic,
    KdvSoliton,
    KdvCustom,
}

impl FromStr for Problem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "logistic" => Ok(Problem::Logistic),
            "kdv-soliton" => Ok(Problem::KdvSoliton),
            "kdv-custom" => Ok(Problem::KdvCustom),
            other => Err(format!(
                "unknown problem '{other}' (expected logistic, kdv-soliton or kdv-custom)"
            )),
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Problem::Logistic => "logistic",
            Problem::KdvSoliton => "kdv-soliton",
            Problem::KdvCustom => "kdv-custom",
        })
    }
}

/// Which solution the KdV errors are measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleKind {
    Reference,
    Soliton,
}

impl FromStr for OracleKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "reference" => Ok(OracleKind::Reference),
            "soliton" => Ok(OracleKind::Soliton),
            other => Err(format!(
                "unknown oracle '{other}' (expected reference or soliton)"
            )),
        }
    }
}

pub fn parse_scheme(s: &str) -> Result<SplitScheme, String> {
    s.parse::<SplitScheme>().map_err(|e| e.to_string())
}

/// Comma-separated list, e.g. `0.1,0.05,0.025`.
pub fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>, String>
where
    T::Err: fmt::Display,
{
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<T>().map_err(|e| format!("'{p}': {e}")))
        .collect()
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s.trim() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        other => Err(format!("'{other}' is not a boolean")),
    }
}

/// Every field is optional; unset fields fall back to per-command defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    pub problem: Option<Problem>,
    pub scheme: Option<SplitScheme>,
    pub dt: Option<f64>,
    pub ladder: Option<Vec<f64>>,
    pub final_time: Option<f64>,
    pub length: Option<f64>,
    pub n: Option<usize>,
    pub kappa: Option<f64>,
    pub u0: Option<f64>,
    pub norms: Option<Vec<u32>>,
    pub out: Option<PathBuf>,
    pub strict: Option<bool>,
    pub jobs: Option<usize>,
    pub init: Option<PathBuf>,
    pub snapshot_every: Option<usize>,
    pub oracle: Option<OracleKind>,
}

fn value<T: FromStr>(key: &str, raw: &str) -> Result<T, String>
where
    T::Err: fmt::Display,
{
    raw.parse::<T>()
        .map_err(|e| format!("bad value for '{key}': {e}"))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut cfg = RunConfig::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, raw) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected 'key = value'", lineno + 1))?;
            let (key, raw) = (key.trim(), raw.trim());
            cfg.set(key, raw)
                .map_err(|e| format!("line {}: {e}", lineno + 1))?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    fn set(&mut self, key: &str, raw: &str) -> Result<(), String> {
        match key {
            "problem" => self.problem = Some(value(key, raw)?),
            "scheme" => self.scheme = Some(parse_scheme(raw)?),
            "dt" => self.dt = Some(value(key, raw)?),
            "ladder" => self.ladder = Some(parse_list(raw)?),
            "T" => self.final_time = Some(value(key, raw)?),
            "L" => self.length = Some(value(key, raw)?),
            "N" => self.n = Some(value(key, raw)?),
            "kappa" => self.kappa = Some(value(key, raw)?),
            "u0" => self.u0 = Some(value(key, raw)?),
            "norm" => self.norms = Some(parse_list(raw)?),
            "out" => self.out = Some(PathBuf::from(raw)),
            "strict" => self.strict = Some(parse_bool(raw)?),
            "jobs" => self.jobs = Some(value(key, raw)?),
            "init" => self.init = Some(PathBuf::from(raw)),
            "snapshot-every" => self.snapshot_every = Some(value(key, raw)?),
            "oracle" => self.oracle = Some(value(key, raw)?),
            other => return Err(format!("unknown key '{other}'")),
        }
        Ok(())
    }

    /// Fields set in `flags` replace those in `self`.
    pub fn overlay(self, flags: RunConfig) -> RunConfig {
        RunConfig {
            problem: flags.problem.or(self.problem),
            scheme: flags.scheme.or(self.scheme),
            dt: flags.dt.or(self.dt),
            ladder: flags.ladder.or(self.ladder),
            final_time: flags.final_time.or(self.final_time),
            length: flags.length.or(self.length),
            n: flags.n.or(self.n),
            kappa: flags.kappa.or(self.kappa),
            u0: flags.u0.or(self.u0),
            norms: flags.norms.or(self.norms),
            out: flags.out.or(self.out),
            strict: flags.strict.or(self.strict),
            jobs: flags.jobs.or(self.jobs),
            init: flags.init.or(self.init),
            snapshot_every: flags.snapshot_every.or(self.snapshot_every),
            oracle: flags.oracle.or(self.oracle),
        }
    }
}
