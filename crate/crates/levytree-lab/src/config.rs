//! Config schema, TOML loading, and dotted key=value overrides.
//!
//! A config is a flat TOML document with three sections. Only the fields a
//! given experiment reads matter to it; everything has typed defaults so a
//! minimal file is `experiment = "..."` plus a `[mechanism]` block (and
//! `seeds` for the stochastic experiments).
//!
//! ```toml
//! experiment = "density"        # one of the registered experiment names
//! output_dir = "lab-out"        # created if missing; env override wins
//! seeds = [1, 2]                # required (nonempty) for stochastic runs
//!
//! [mechanism]
//! kind = "stable"               # "stable" | "quadratic" | "counterexample"
//! gamma = 2.0                   # stable, counterexample
//! alpha = 0.0                   # quadratic: ψ(λ) = αλ + βλ²
//! beta = 1.0                    # quadratic
//! n_max = 40                    # counterexample: last atom index
//!
//! [scales]
//! walk_length = 2048            # up-steps of sampled tree excursions
//! scale_p = 64                  # lattice approximation scale p
//! grid_points = 200             # scan grid sizes (≥ 64)
//! dyadic_depth = 16             # dyadic grid depth (radii down to 2^-depth)
//! centers = 5                   # density centers per tree
//! replicates = 300              # Monte Carlo replicates per table row
//! intervals = 4                 # packing-ratio intervals per tree
//! max_points = 60               # packing subsample cap per interval
//! window_lo = 9.765625e-4       # radius window (density, subliminf, doubling)
//! window_hi = 3.125e-2
//! epsilon = 1.5625e-2           # packing ball-radius bound
//! # r_values = [0.5, 1.0]       # optional explicit grids
//! # lambda_values = [0.5, 1.0, 2.0]
//!
//! [tolerances]
//! identity_rtol = 1e-6          # kernels-check pass threshold
//! sigma_band = 3.0              # Monte-Carlo agreement band (std errors)
//! ```
//!
//! Overrides on the command line are TOML fragments with dotted keys, e.g.
//! `scales.replicates=50`, `mechanism.gamma=1.5`, `seeds=[7,8]`. A bare
//! word on the right-hand side is taken as a string, so
//! `experiment=doubling` works unquoted.

use std::fs;
use std::path::Path;

use levylab::mechanism::{build_counterexample, BranchingMechanism, LevyMeasure};
use serde::Deserialize;

use crate::error::CliError;
use crate::experiments;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabConfig {
    pub experiment: String,
    #[serde(default = "default_output_dir")]
    pub output_dir: String,
    #[serde(default)]
    pub seeds: Vec<u64>,
    pub mechanism: MechanismSpec,
    #[serde(default)]
    pub scales: Scales,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// The merged TOML the config was read from, echoed into summaries.
    #[serde(skip)]
    pub raw: toml::Table,
}

fn default_output_dir() -> String {
    "lab-out".into()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MechanismSpec {
    pub kind: String,
    pub gamma: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub n_max: Option<u32>,
}

impl MechanismSpec {
    /// Builds the mechanism; config mistakes surface as schema errors.
    pub fn build(&self) -> Result<BranchingMechanism, CliError> {
        let need = |field: &str, v: Option<f64>| {
            v.ok_or_else(|| {
                CliError::Schema(format!(
                    "mechanism.kind = \"{}\" needs mechanism.{field}",
                    self.kind
                ))
            })
        };
        let built = match self.kind.as_str() {
            "stable" => BranchingMechanism::stable(need("gamma", self.gamma)?),
            "quadratic" => BranchingMechanism::new(
                self.alpha.unwrap_or(0.0),
                self.beta.unwrap_or(1.0),
                LevyMeasure::Null,
            ),
            "counterexample" => {
                let n_max = self.n_max.ok_or_else(|| {
                    CliError::Schema("mechanism.kind = \"counterexample\" needs mechanism.n_max".into())
                })?;
                build_counterexample(need("gamma", self.gamma)?, n_max)
            }
            other => {
                return Err(CliError::Schema(format!(
                    "unknown mechanism.kind \"{other}\"; expected stable, quadratic, or counterexample"
                )))
            }
        };
        built.map_err(|e| CliError::Schema(format!("mechanism does not validate: {e}")))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Scales {
    pub walk_length: usize,
    pub scale_p: u32,
    pub grid_points: usize,
    pub dyadic_depth: u32,
    pub centers: usize,
    pub replicates: u32,
    pub intervals: usize,
    pub max_points: usize,
    pub window_lo: f64,
    pub window_hi: f64,
    pub epsilon: f64,
    pub r_values: Option<Vec<f64>>,
    pub lambda_values: Option<Vec<f64>>,
}

impl Default for Scales {
    fn default() -> Self {
        Self {
            walk_length: 2048,
            scale_p: 64,
            grid_points: 200,
            dyadic_depth: 16,
            centers: 5,
            replicates: 300,
            intervals: 4,
            max_points: 60,
            window_lo: f64::powi(2.0, -10),
            window_hi: f64::powi(2.0, -5),
            epsilon: f64::powi(2.0, -6),
            r_values: None,
            lambda_values: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub identity_rtol: f64,
    pub sigma_band: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { identity_rtol: 1e-6, sigma_band: 3.0 }
    }
}

impl LabConfig {
    /// Explicit r-grid, or the experiment's documented default.
    pub fn r_grid(&self, default: &[f64]) -> Vec<f64> {
        self.scales.r_values.clone().unwrap_or_else(|| default.to_vec())
    }

    pub fn lambda_grid(&self, default: &[f64]) -> Vec<f64> {
        self.scales.lambda_values.clone().unwrap_or_else(|| default.to_vec())
    }

    /// Schema-level validation beyond what serde typing enforces.
    pub fn validate(&self) -> Result<(), CliError> {
        let stochastic = experiments::stochastic(&self.experiment).ok_or_else(|| {
            CliError::Schema(format!(
                "unknown experiment \"{}\"; known: {}",
                self.experiment,
                experiments::names().join(", ")
            ))
        })?;
        if stochastic && self.seeds.is_empty() {
            return Err(CliError::Schema(format!(
                "experiment \"{}\" is stochastic and needs a nonempty seeds list",
                self.experiment
            )));
        }
        if self.experiment == "counterexample" && self.mechanism.kind != "counterexample" {
            return Err(CliError::Schema(
                "the counterexample experiment needs mechanism.kind = \"counterexample\"".into(),
            ));
        }
        self.mechanism.build()?;

        let s = &self.scales;
        let positives = [
            ("walk_length", s.walk_length as f64),
            ("grid_points", s.grid_points as f64),
            ("centers", s.centers as f64),
            ("replicates", f64::from(s.replicates)),
            ("intervals", s.intervals as f64),
            ("max_points", s.max_points as f64),
            ("scale_p", f64::from(s.scale_p)),
            ("epsilon", s.epsilon),
        ];
        for (name, v) in positives {
            if !(v > 0.0) {
                return Err(CliError::Schema(format!("scales.{name} must be positive")));
            }
        }
        if s.grid_points < 64 {
            return Err(CliError::Schema("scales.grid_points must be at least 64".into()));
        }
        if !(s.dyadic_depth >= 1 && s.dyadic_depth <= 60) {
            return Err(CliError::Schema("scales.dyadic_depth must lie in 1..=60".into()));
        }
        if !(s.window_lo > 0.0 && s.window_lo < s.window_hi) {
            return Err(CliError::Schema(
                "scales.window_lo/window_hi must satisfy 0 < lo < hi".into(),
            ));
        }
        for (name, grid) in [("r_values", &s.r_values), ("lambda_values", &s.lambda_values)] {
            if let Some(g) = grid {
                if g.is_empty() || g.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
                    return Err(CliError::Schema(format!(
                        "scales.{name} must be nonempty with positive finite entries"
                    )));
                }
            }
        }
        if !(self.tolerances.identity_rtol > 0.0 && self.tolerances.sigma_band > 0.0) {
            return Err(CliError::Schema("tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// Reads a config file and applies `key=value` overrides in order.
pub fn load_config(path: &Path, overrides: &[String]) -> Result<LabConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Schema(format!("cannot read {}: {e}", path.display())))?;
    let mut table: toml::Table = text
        .parse()
        .map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?;
    for raw in overrides {
        let fragment = parse_override(raw)?;
        merge_tables(&mut table, fragment);
    }
    let mut config: LabConfig = table
        .clone()
        .try_into()
        .map_err(|e| CliError::Schema(format!("config does not match the schema: {e}")))?;
    config.raw = table;
    config.validate()?;
    Ok(config)
}

/// Parses one `dotted.key=value` override as a TOML fragment. Unquoted
/// non-TOML right-hand sides are retried as strings.
fn parse_override(raw: &str) -> Result<toml::Table, CliError> {
    let (key, value) = raw
        .split_once('=')
        .ok_or_else(|| CliError::Schema(format!("override \"{raw}\" is not of the form key=value")))?;
    let attempt = format!("{key} = {value}");
    if let Ok(t) = attempt.parse::<toml::Table>() {
        return Ok(t);
    }
    let quoted = format!("{key} = {:?}", value.trim());
    quoted
        .parse::<toml::Table>()
        .map_err(|e| CliError::Schema(format!("override \"{raw}\" does not parse: {e}")))
}

/// Right-biased deep merge: tables merge recursively, everything else is
/// replaced.
fn merge_tables(base: &mut toml::Table, over: toml::Table) {
    for (key, value) in over {
        match (base.get_mut(&key), value) {
            (Some(toml::Value::Table(bt)), toml::Value::Table(ot)) => merge_tables(bt, ot),
            (_, v) => {
                base.insert(key, v);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str, overrides: &[&str]) -> Result<LabConfig, CliError> {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        fs::write(&path, text).unwrap();
        let ov: Vec<String> = overrides.iter().map(|s| s.to_string()).collect();
        load_config(&path, &ov)
    }

    const MINIMAL: &str = "experiment = \"mech-report\"\n[mechanism]\nkind = \"stable\"\ngamma = 2.0\n";

    #[test]
    fn minimal_config_and_defaults() {
        let c = parse(MINIMAL, &[]).unwrap();
        assert_eq!(c.experiment, "mech-report");
        assert_eq!(c.output_dir, "lab-out");
        assert_eq!(c.scales.walk_length, 2048);
        assert!(c.seeds.is_empty());
    }

    #[test]
    fn overrides_merge_and_retype() {
        let c = parse(
            MINIMAL,
            &["scales.walk_length=99", "experiment=doubling", "seeds=[4,5]"],
        )
        .unwrap();
        assert_eq!(c.scales.walk_length, 99);
        assert_eq!(c.experiment, "doubling");
        assert_eq!(c.seeds, vec![4, 5]);
        // The raw echo carries the merged values.
        assert_eq!(c.raw["experiment"].as_str(), Some("doubling"));
    }

    #[test]
    fn schema_violations() {
        assert!(matches!(parse(MINIMAL, &["experiment=nope"]), Err(CliError::Schema(_))));
        assert!(matches!(parse(MINIMAL, &["scales.grid_points=8"]), Err(CliError::Schema(_))));
        assert!(matches!(parse(MINIMAL, &["mechanism.kind=warp"]), Err(CliError::Schema(_))));
        assert!(matches!(parse(MINIMAL, &["unknown_key=1"]), Err(CliError::Schema(_))));
        // Stochastic experiments need seeds.
        assert!(matches!(parse(MINIMAL, &["experiment=density"]), Err(CliError::Schema(_))));
        assert!(parse(MINIMAL, &["experiment=density", "seeds=[1]"]).is_ok());
        // The counterexample experiment needs the matching mechanism kind.
        assert!(matches!(parse(MINIMAL, &["experiment=counterexample"]), Err(CliError::Schema(_))));
    }

    #[test]
    fn counterexample_mechanism_builds() {
        let text = "experiment = \"counterexample\"\n[mechanism]\nkind = \"counterexample\"\ngamma = 1.5\nn_max = 12\n";
        let c = parse(text, &[]).unwrap();
        assert!(c.mechanism.build().is_ok());
        assert!(matches!(parse(text, &["mechanism.n_max=2"]), Err(CliError::Schema(_))));
    }
}
