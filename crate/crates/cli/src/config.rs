//! Run configuration: a `key = value` file with command-line overrides.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ssp_lmm::controller::Order;
use ssp_lmm::spatial::{Reconstruction, PROBLEM_NAMES};

use crate::CliError;

/// Time integrator selected by `--method`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Ssprk2Only,
    Msv { k: usize, order: Order },
}

impl Method {
    /// MC for second order and the blast wave, WENO5 for third order.
    pub fn reconstruction(self, problem: &str) -> Reconstruction {
        match self {
            Method::Msv { order: Order::Third, .. } if problem != "blastwave" => Reconstruction::Weno5,
            _ => Reconstruction::Mc,
        }
    }
}

impl FromStr for Method {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CliError::Config(format!("unknown method {s:?}; expected ssprk2-only, msv-32..msv-62, msv-43 or msv-53"));
        if s == "ssprk2-only" {
            return Ok(Method::Ssprk2Only);
        }
        let digits = s.strip_prefix("msv-").ok_or_else(bad)?.as_bytes();
        let [k, p] = digits else { return Err(bad()) };
        match (k.wrapping_sub(b'0') as usize, p) {
            (k @ 3..=6, b'2') => Ok(Method::Msv { k, order: Order::Second }),
            (k @ 4..=5, b'3') => Ok(Method::Msv { k, order: Order::Third }),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Ssprk2Only => f.write_str("ssprk2-only"),
            Method::Msv { k, order } => write!(f, "msv-{k}{}", order.as_u32()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: String,
    pub method: Method,
    pub n_cells: usize,
    /// Falls back to the problem's standard final time.
    pub t_final: Option<f64>,
    pub h1: f64,
    pub gamma: f64,
    pub cfl_fe: f64,
    pub enforce_conditions: bool,
    pub out: PathBuf,
    pub snapshot: bool,
    pub seed: u64,
    pub resolutions: Vec<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            problem: "advection".into(),
            method: Method::Msv { k: 3, order: Order::Second },
            n_cells: 256,
            t_final: None,
            h1: 0.1,
            gamma: 0.9,
            cfl_fe: 0.5,
            enforce_conditions: true,
            out: PathBuf::from("out"),
            snapshot: false,
            seed: 0,
            resolutions: vec![128, 256, 512, 1024, 2048],
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Config(format!("invalid value {value:?} for {key}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, CliError> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(CliError::Config(format!("invalid boolean {value:?} for {key}"))),
    }
}

pub fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>, CliError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse(key, s))
        .collect()
}

impl RunConfig {
    /// Apply one `key = value` setting. Dashes and underscores in keys are interchangeable.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        match key.as_str() {
            "problem" => self.problem = value.to_string(),
            "method" => self.method = value.parse()?,
            "cells" | "n_cells" => self.n_cells = parse(&key, value)?,
            "tfinal" | "t_final" => self.t_final = Some(parse(&key, value)?),
            "h1" => self.h1 = parse(&key, value)?,
            "gamma" => self.gamma = parse(&key, value)?,
            "cfl_fe" => self.cfl_fe = parse(&key, value)?,
            "enforce_conditions" => self.enforce_conditions = parse_bool(&key, value)?,
            "out" => self.out = PathBuf::from(value),
            "snapshot" => self.snapshot = parse_bool(&key, value)?,
            "seed" => self.seed = parse(&key, value)?,
            "resolutions" => self.resolutions = parse_list(&key, value)?,
            _ => return Err(CliError::Config(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    /// Parse a config file. `#` starts a comment; blank lines are ignored.
    pub fn from_text(text: &str) -> Result<Self, CliError> {
        let mut config = Self::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", lineno + 1)))?;
            config.set(key, value)?;
        }
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_text(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !PROBLEM_NAMES.contains(&self.problem.as_str()) {
            return Err(CliError::Config(format!(
                "unknown problem {:?}; expected one of {}",
                self.problem,
                PROBLEM_NAMES.join(", ")
            )));
        }
        if let Some(t) = self.t_final {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Config(format!("tfinal must be positive, got {t}")));
            }
        }
        for (name, v) in [("h1", self.h1), ("gamma", self.gamma), ("cfl_fe", self.cfl_fe)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.n_cells == 0 {
            return Err(CliError::Config("cells must be positive".into()));
        }
        Ok(())
    }

    /// The effective settings, one `key=value` per line.
    pub fn to_text(&self) -> String {
        let t_final = self.t_final.map(|t| format!("{t:.16e}")).unwrap_or_default();
        let resolutions: Vec<String> = self.resolutions.iter().map(usize::to_string).collect();
        format!(
            "problem={}\nmethod={}\ncells={}\ntfinal={}\nh1={:.16e}\ngamma={:.16e}\ncfl_fe={:.16e}\n\
             enforce_conditions={}\nsnapshot={}\nseed={}\nresolutions={}\n",
            self.problem,
            self.method,
            self.n_cells,
            t_final,
            self.h1,
            self.gamma,
            self.cfl_fe,
            self.enforce_conditions,
            self.snapshot,
            self.seed,
            resolutions.join(","),
        )
    }
}
