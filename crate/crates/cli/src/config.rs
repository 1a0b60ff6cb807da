//! Run configuration: defaults, then a `key = value` file, then `SE2SR_*`
//! environment variables, then command-line flags.

use std::collections::BTreeMap;
use std::path::Path;

use se2sr_core::synthesis::SolverConfig;

use crate::CliError;

/// Prefix of the environment variables that override tolerances.
pub const ENV_PREFIX: &str = "SE2SR_";

const KEYS: &[&str] = &["exp_tol", "solver_tol", "samples", "max_starts", "grid", "seed"];
const ENV_KEYS: &[&str] = &["exp_tol", "solver_tol"];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunConfig {
    pub exp_tol: f64,
    pub solver_tol: f64,
    pub samples: usize,
    pub max_starts: usize,
    pub grid: usize,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let s = SolverConfig::default();
        Self {
            exp_tol: s.exp_tol,
            solver_tol: s.tol,
            samples: s.samples,
            max_starts: s.max_starts,
            grid: 24,
            seed: 1,
        }
    }
}

/// Values given on the command line; `None` keeps the lower layers.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub exp_tol: Option<f64>,
    pub solver_tol: Option<f64>,
    pub samples: Option<usize>,
    pub max_starts: Option<usize>,
    pub grid: Option<usize>,
    pub seed: Option<u64>,
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str, origin: &str) -> Result<T, CliError> {
    value
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("{origin}: cannot parse {key} = {value:?}")))
}

impl RunConfig {
    fn set(&mut self, key: &str, value: &str, origin: &str) -> Result<(), CliError> {
        match key {
            "exp_tol" => self.exp_tol = parse_value(key, value, origin)?,
            "solver_tol" => self.solver_tol = parse_value(key, value, origin)?,
            "samples" => self.samples = parse_value(key, value, origin)?,
            "max_starts" => self.max_starts = parse_value(key, value, origin)?,
            "grid" => self.grid = parse_value(key, value, origin)?,
            "seed" => self.seed = parse_value(key, value, origin)?,
            _ => {
                return Err(CliError::Config(format!(
                    "{origin}: unknown key {key:?} (known: {})",
                    KEYS.join(", ")
                )))
            }
        }
        Ok(())
    }

    /// Applies a `key = value` document; `#` starts a comment.
    pub fn apply_file_text(&mut self, text: &str, name: &str) -> Result<(), CliError> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let origin = format!("{name}:{}", i + 1);
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("{origin}: expected key = value")))?;
            self.set(key.trim(), value, &origin)?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        self.apply_file_text(&text, &path.display().to_string())
    }

    pub fn apply_env(&mut self, vars: &BTreeMap<String, String>) -> Result<(), CliError> {
        for key in ENV_KEYS {
            let name = format!("{ENV_PREFIX}{}", key.to_ascii_uppercase());
            if let Some(v) = vars.get(&name) {
                self.set(key, v, &name)?;
            }
        }
        Ok(())
    }

    pub fn apply_overrides(&mut self, o: &Overrides) {
        if let Some(v) = o.exp_tol {
            self.exp_tol = v;
        }
        if let Some(v) = o.solver_tol {
            self.solver_tol = v;
        }
        if let Some(v) = o.samples {
            self.samples = v;
        }
        if let Some(v) = o.max_starts {
            self.max_starts = v;
        }
        if let Some(v) = o.grid {
            self.grid = v;
        }
        if let Some(v) = o.seed {
            self.seed = v;
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        for (name, v) in [("exp_tol", self.exp_tol), ("solver_tol", self.solver_tol)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.samples < 2 {
            return Err(CliError::Config("samples must be >= 2".into()));
        }
        if self.max_starts == 0 || self.grid == 0 {
            return Err(CliError::Config("max_starts and grid must be >= 1".into()));
        }
        Ok(())
    }

    pub fn solver(&self) -> SolverConfig {
        SolverConfig {
            tol: self.solver_tol,
            exp_tol: self.exp_tol,
            samples: self.samples,
            max_starts: self.max_starts,
        }
    }
}
