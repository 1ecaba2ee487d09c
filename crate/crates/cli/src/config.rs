//! Validated run configuration shared by every subcommand.

use std::path::PathBuf;

use pdmwell::Space;

use crate::error::{CliError, CliResult};
use crate::table::Format;

pub const DEFAULT_GRID: usize = 1001;
pub const DEFAULT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub n_list: Vec<u32>,
    pub gamma_a_list: Vec<f64>,
    pub grid_points: usize,
    pub spaces: Vec<Space>,
    pub tol: f64,
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n_list: vec![1],
            gamma_a_list: vec![0.0],
            grid_points: DEFAULT_GRID,
            spaces: vec![Space::Position],
            tol: DEFAULT_TOL,
            format: Format::Csv,
            output: None,
        }
    }
}

impl RunConfig {
    pub fn validate(self) -> CliResult<Self> {
        if self.n_list.is_empty() || self.n_list.contains(&0) {
            return Err(CliError::InvalidConfig(
                "quantum numbers must be a non-empty list of positive integers".into(),
            ));
        }
        if self.gamma_a_list.is_empty() {
            return Err(CliError::InvalidConfig(
                "no deformation values given".into(),
            ));
        }
        if let Some(g) = self
            .gamma_a_list
            .iter()
            .find(|g| !(g.is_finite() && g.abs() < 1.0))
        {
            return Err(CliError::InvalidConfig(format!(
                "deformation {g} is outside (-1, 1)"
            )));
        }
        if self.grid_points < 2 {
            return Err(CliError::InvalidConfig(
                "grid needs at least 2 points".into(),
            ));
        }
        if self.spaces.is_empty() {
            return Err(CliError::InvalidConfig("no spaces selected".into()));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(CliError::InvalidConfig(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        Ok(self)
    }
}

/// Parses `MIN:MAX:STEPS` into an inclusive, evenly spaced list.
pub fn parse_range(text: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || CliError::InvalidConfig(format!("range '{text}' is not MIN:MAX:STEPS"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let steps: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if steps == 0 || !(lo <= hi) || (steps == 1 && lo != hi) {
        return Err(bad());
    }
    Ok(linspace(lo, hi, steps))
}

/// `count` evenly spaced points from `lo` to `hi` inclusive, with the
/// midpoint of a symmetric range landing exactly on zero.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let last = (count - 1) as f64;
    (0..count)
        .map(|i| {
            let t = i as f64;
            // Each half is stepped from its own end: both ends are exact and
            // symmetric ranges mirror exactly.
            if 2.0 * t <= last {
                lo + (hi - lo) * (t / last)
            } else {
                hi - (hi - lo) * ((last - t) / last)
            }
        })
        .collect()
}
