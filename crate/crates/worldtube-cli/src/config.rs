//! Experiment configuration: flag/file layering and typed key resolution.
//!
//! Values come from three layers, highest precedence first: command-line
//! flags, the `[command]` section of a config file, and the file's leading
//! key block shared by every command. Each key a run consumes is echoed in
//! its original string form into [`ExperimentConfig`], which every report
//! embeds, so an experiment can be reproduced from its output file alone.
//!
//! Config files hold `key = value` lines; blank lines and `#` comments are
//! skipped; `[command]` headers open per-command sections; a repeated key
//! keeps the last value. Keys in the active command's section must all be
//! recognized (typos fail loudly); keys in the shared leading block may be
//! left unused by commands that do not know them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::Path;

use serde::Serialize;
use worldtube::Dim;

/// Failure classes the process maps onto exit codes: usage errors exit 2,
/// numeric failures exit 3 (check failures exit 1 without an error).
#[derive(Debug)]
pub enum CliError {
    /// Invalid invocation, config file, or output destination.
    Usage(String),
    /// A numerical operation failed at runtime.
    Numeric(worldtube::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Numeric(e) => write!(f, "numeric failure: {e}"),
        }
    }
}

impl From<worldtube::Error> for CliError {
    fn from(e: worldtube::Error) -> Self {
        CliError::Numeric(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Parsed config file: the shared leading block plus one block per command.
#[derive(Debug, Default)]
pub struct FileConfig {
    global: BTreeMap<String, String>,
    sections: BTreeMap<String, BTreeMap<String, String>>,
}

pub fn load_file(path: &Path) -> CliResult<FileConfig> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config file {}: {e}", path.display())))?;
    parse_file(&text, &path.display().to_string())
}

fn parse_file(text: &str, origin: &str) -> CliResult<FileConfig> {
    let mut cfg = FileConfig::default();
    let mut current: Option<String> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = match raw.split_once('#') {
            Some((head, _)) => head,
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(inner) = line.strip_prefix('[') {
            let name = inner
                .strip_suffix(']')
                .ok_or_else(|| {
                    usage(format!("{origin}:{}: unterminated section header `{line}`", idx + 1))
                })?
                .trim();
            if name.is_empty() {
                return Err(usage(format!("{origin}:{}: empty section name", idx + 1)));
            }
            cfg.sections.entry(name.to_string()).or_default();
            current = Some(name.to_string());
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            usage(format!("{origin}:{}: expected `key = value`, got `{line}`", idx + 1))
        })?;
        let key = key.trim();
        if key.is_empty() {
            return Err(usage(format!("{origin}:{}: empty key", idx + 1)));
        }
        let target = match &current {
            Some(name) => cfg.sections.get_mut(name).expect("section entry exists"),
            None => &mut cfg.global,
        };
        target.insert(key.to_string(), value.trim().to_string());
    }
    Ok(cfg)
}

/// Fully resolved configuration: the command name plus every key the run
/// consumed, in canonical string form. Feeding these keys back as flags
/// reproduces the run exactly.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub command: String,
    pub keys: BTreeMap<String, String>,
}

/// Layered key lookup that records everything it resolves.
pub struct Resolver {
    command: String,
    section: BTreeMap<String, String>,
    global: BTreeMap<String, String>,
    used: BTreeSet<String>,
    echo: BTreeMap<String, String>,
}

impl Resolver {
    pub fn new(command: &str, file: FileConfig) -> Self {
        let FileConfig { global, mut sections } = file;
        let section = sections.remove(command).unwrap_or_default();
        Resolver {
            command: command.to_string(),
            section,
            global,
            used: BTreeSet::new(),
            echo: BTreeMap::new(),
        }
    }

    pub fn command(&self) -> &str {
        &self.command
    }

    fn lookup(&mut self, key: &str, flag: Option<&str>) -> Option<String> {
        self.used.insert(key.to_string());
        flag.map(str::to_string)
            .or_else(|| self.section.get(key).cloned())
            .or_else(|| self.global.get(key).cloned())
    }

    fn record(&mut self, key: &str, value: &str) {
        self.echo.insert(key.to_string(), value.to_string());
    }

    /// Optional string key; echoed only when present.
    pub fn opt_str(&mut self, key: &str, flag: Option<&str>) -> Option<String> {
        let v = self.lookup(key, flag);
        if let Some(v) = &v {
            self.record(key, v);
        }
        v
    }

    pub fn str_or(&mut self, key: &str, flag: Option<&str>, default: &str) -> String {
        let v = self.lookup(key, flag).unwrap_or_else(|| default.to_string());
        self.record(key, &v);
        v
    }

    pub fn require(&mut self, key: &str, flag: Option<&str>) -> CliResult<String> {
        self.opt_str(key, flag).ok_or_else(|| {
            usage(format!("missing required key `{key}` for command `{}`", self.command))
        })
    }

    pub fn f64_or(&mut self, key: &str, flag: Option<&str>, default: f64) -> CliResult<f64> {
        match self.lookup(key, flag) {
            Some(s) => {
                let v = parse_f64(key, &s)?;
                self.record(key, &s);
                Ok(v)
            }
            None => {
                self.record(key, &format!("{default}"));
                Ok(default)
            }
        }
    }

    pub fn require_f64(&mut self, key: &str, flag: Option<&str>) -> CliResult<f64> {
        let s = self.require(key, flag)?;
        parse_f64(key, &s)
    }

    pub fn usize_or(&mut self, key: &str, flag: Option<&str>, default: usize) -> CliResult<usize> {
        match self.lookup(key, flag) {
            Some(s) => {
                let v: usize = s.trim().parse().map_err(|_| {
                    usage(format!("key `{key}`: expected a non-negative integer, got `{s}`"))
                })?;
                self.record(key, &s);
                Ok(v)
            }
            None => {
                self.record(key, &format!("{default}"));
                Ok(default)
            }
        }
    }

    /// Spacetime dimension: required, `4` or `6`.
    pub fn dim(&mut self, flag: Option<&str>) -> CliResult<Dim> {
        match self.require("dim", flag)?.trim() {
            "4" => Ok(Dim::Four),
            "6" => Ok(Dim::Six),
            other => Err(usage(format!("key `dim` must be 4 or 6, got `{other}`"))),
        }
    }

    /// Required `a,b` pair of numbers.
    pub fn pair(&mut self, key: &str, flag: Option<&str>) -> CliResult<(f64, f64)> {
        let s = self.require(key, flag)?;
        let list = split_f64_list(key, &s)?;
        if list.len() != 2 {
            return Err(usage(format!("key `{key}` must be two comma-separated numbers, got `{s}`")));
        }
        Ok((list[0], list[1]))
    }

    /// Required comma-separated list of numbers.
    pub fn f64_list(&mut self, key: &str, flag: Option<&str>) -> CliResult<Vec<f64>> {
        let s = self.require(key, flag)?;
        split_f64_list(key, &s)
    }

    /// Optional RNG seed: validated and echoed, reserved for commands
    /// that sample check points.
    pub fn seed(&mut self, flag: Option<&str>) -> CliResult<()> {
        if let Some(s) = self.lookup("seed", flag) {
            s.trim()
                .parse::<u64>()
                .map_err(|_| usage(format!("key `seed`: expected an unsigned integer, got `{s}`")))?;
            self.record("seed", &s);
        }
        Ok(())
    }

    /// Fail on unrecognized keys in this command's file section, then
    /// freeze the echo into the config record.
    pub fn finish(self) -> CliResult<ExperimentConfig> {
        for key in self.section.keys() {
            if !self.used.contains(key) {
                return Err(usage(format!(
                    "unknown key `{key}` in [{}] config section",
                    self.command
                )));
            }
        }
        Ok(ExperimentConfig { command: self.command, keys: self.echo })
    }
}

fn parse_f64(key: &str, s: &str) -> CliResult<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| usage(format!("key `{key}`: expected a number, got `{s}`")))?;
    if !v.is_finite() {
        return Err(usage(format!("key `{key}` must be finite, got `{s}`")));
    }
    Ok(v)
}

fn split_f64_list(key: &str, s: &str) -> CliResult<Vec<f64>> {
    s.split(',').map(|item| parse_f64(key, item)).collect()
}
