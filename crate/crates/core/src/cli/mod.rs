//! Configuration file handling and the command-line entry point.
//!
//! The run configuration is a single TOML file; unknown keys are rejected,
//! constraint violations are reported exhaustively rather than
//! first-failure, and `parse(serialize(config))` reproduces the config
//! exactly.

mod commands;
mod output;

pub use commands::{cmd_scan, cmd_simulate, cmd_sweep, cmd_verify};
pub use output::{write_csv, write_summary, Clause};

use crate::error::ConfigError;
use crate::experiments::Scene;
use crate::manifold::{LambdaSpec, MetricSpec};
use crate::phasefield::{DoubleWell, InitialInterface};
use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case", tag = "kind")]
pub enum MetricConfig {
    FlatTorus {
        side: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        resolution: Option<usize>,
    },
    ConformalTorus {
        side: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        resolution: Option<usize>,
        lambda: LambdaSpec,
    },
    Sphere {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        resolution: Option<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case", tag = "kind")]
pub enum InterfaceConfig {
    Circle { center: [f64; 2], radius: f64 },
    Cap { theta0: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WellConfig {
    pub kind: String,
    pub alpha: f64,
}

impl Default for WellConfig {
    fn default() -> Self {
        WellConfig { kind: "quartic".into(), alpha: 0.6 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub eps: Vec<f64>,
    pub t_end: f64,
    /// dt = dt_factor * eps^2.
    #[serde(default = "default_dt_factor")]
    pub dt_factor: f64,
    /// h = h_factor * eps when no explicit resolution is given.
    #[serde(default = "default_h_factor")]
    pub h_factor: f64,
    /// Diagnostic cadence in steps; 0 picks ~40 samples per run.
    #[serde(default)]
    pub cadence: usize,
}

fn default_dt_factor() -> f64 {
    0.5
}
fn default_h_factor() -> f64 {
    0.25
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnchorsConfig {
    /// "auto" places anchors on and off the interface; "explicit" uses
    /// `list`.
    pub mode: String,
    pub count: usize,
    pub list: Vec<AnchorEntry>,
}

impl Default for AnchorsConfig {
    fn default() -> Self {
        AnchorsConfig { mode: "auto".into(), count: 5, list: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnchorEntry {
    /// Chart position: (x, y) on tori, (theta, phi) on the sphere.
    pub pos: [f64; 2],
    /// Anchor time.
    pub s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: Option<String>,
    /// Write a checkpoint every k-th diagnostic sample; 0 = final state only.
    pub checkpoint_every: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub metric: MetricConfig,
    pub interface: InterfaceConfig,
    #[serde(default)]
    pub well: WellConfig,
    pub run: RunSection,
    #[serde(default)]
    pub anchors: AnchorsConfig,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub ledger: BTreeMap<String, f64>,
    #[serde(default)]
    pub output: OutputConfig,
}

impl RunConfig {
    /// Chart extent that the h-rule divides: torus side or pi (colatitude).
    fn extent(&self) -> f64 {
        match &self.metric {
            MetricConfig::FlatTorus { side, .. } | MetricConfig::ConformalTorus { side, .. } => {
                *side
            }
            MetricConfig::Sphere { .. } => std::f64::consts::PI,
        }
    }

    fn resolution_override(&self) -> Option<usize> {
        match &self.metric {
            MetricConfig::FlatTorus { resolution, .. }
            | MetricConfig::ConformalTorus { resolution, .. }
            | MetricConfig::Sphere { resolution } => *resolution,
        }
    }

    pub fn resolution_for(&self, eps: f64) -> usize {
        self.resolution_override()
            .unwrap_or_else(|| (self.extent() / (self.run.h_factor * eps)).ceil() as usize)
    }

    pub fn grid_spacing(&self, eps: f64) -> f64 {
        self.extent() / self.resolution_for(eps) as f64
    }

    /// Exhaustive constraint validation; all violations reported at once.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let mut errs = Vec::new();
        if self.run.eps.is_empty() {
            errs.push("run.eps: at least one interface width required".to_string());
        }
        for &e in &self.run.eps {
            if !(e > 0.0) {
                errs.push(format!("run.eps: {e} is not positive"));
            }
        }
        if !self.run.eps.windows(2).all(|w| w[0] > w[1]) {
            let mut sorted = self.run.eps.clone();
            sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
            errs.push(format!(
                "run.eps: list must be strictly decreasing; try {sorted:?}"
            ));
        }
        if !(self.run.t_end > 0.0) {
            errs.push(format!("run.t_end: {} is not positive", self.run.t_end));
        }
        if !(self.run.dt_factor > 0.0 && self.run.dt_factor <= 0.5) {
            errs.push(format!(
                "run.dt_factor: {} outside (0, 0.5]; dt must satisfy dt <= eps^2/2",
                self.run.dt_factor
            ));
        }
        if !(self.run.h_factor > 0.0) {
            errs.push(format!("run.h_factor: {} is not positive", self.run.h_factor));
        }
        for &e in &self.run.eps {
            if e > 0.0 {
                let h = self.grid_spacing(e);
                if e < 4.0 * h - 1e-12 {
                    errs.push(format!(
                        "run.eps = {e} under-resolved vs grid spacing h = {h} (requires eps >= 4h)"
                    ));
                }
            }
        }
        match (&self.metric, &self.interface) {
            (MetricConfig::Sphere { .. }, InterfaceConfig::Circle { .. }) => errs.push(
                "interface.kind = circle requires a torus metric (metric.kind)".to_string(),
            ),
            (MetricConfig::FlatTorus { .. }, InterfaceConfig::Cap { .. })
            | (MetricConfig::ConformalTorus { .. }, InterfaceConfig::Cap { .. }) => errs.push(
                "interface.kind = cap requires metric.kind = sphere".to_string(),
            ),
            _ => {}
        }
        if self.well.kind != "quartic" {
            errs.push(format!(
                "well.kind: '{}' unknown (the configuration format supports 'quartic')",
                self.well.kind
            ));
        }
        if !(self.well.alpha > 0.0 && self.well.alpha < 1.0) {
            errs.push(format!("well.alpha: {} outside (0, 1)", self.well.alpha));
        }
        match self.anchors.mode.as_str() {
            "auto" | "none" => {}
            "explicit" => {
                for (k, a) in self.anchors.list.iter().enumerate() {
                    if a.s > self.run.t_end {
                        errs.push(format!(
                            "anchors.list[{k}].s = {} exceeds run.t_end = {}",
                            a.s, self.run.t_end
                        ));
                    }
                }
                if self.anchors.list.is_empty() {
                    errs.push("anchors.mode = explicit but anchors.list is empty".to_string());
                }
            }
            other => errs.push(format!(
                "anchors.mode: '{other}' unknown (auto | none | explicit)"
            )),
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(ConfigError::Constraints(errs))
        }
    }

    pub fn well(&self) -> DoubleWell {
        DoubleWell::quartic_with_alpha(self.well.alpha)
    }

    /// Concrete scene for one interface width.
    pub fn scene_for(&self, eps: f64) -> Scene {
        let resolution = self.resolution_for(eps);
        let metric = match &self.metric {
            MetricConfig::FlatTorus { side, .. } => {
                MetricSpec::FlatTorus { side: *side, resolution }
            }
            MetricConfig::ConformalTorus { side, lambda, .. } => MetricSpec::ConformalTorus {
                side: *side,
                resolution,
                lambda: lambda.clone(),
            },
            MetricConfig::Sphere { .. } => MetricSpec::Sphere { resolution },
        };
        let interface = match &self.interface {
            InterfaceConfig::Circle { center, radius } => InitialInterface::Circle {
                center: (center[0], center[1]),
                radius: *radius,
            },
            InterfaceConfig::Cap { theta0 } => InitialInterface::Cap { theta0: *theta0 },
        };
        let explicit_anchors = if self.anchors.mode == "explicit" {
            self.anchors.list.iter().map(|a| (a.pos, a.s)).collect()
        } else {
            Vec::new()
        };
        Scene {
            metric,
            interface,
            well: self.well(),
            eps,
            dt_factor: self.run.dt_factor,
            t_end: self.run.t_end,
            cadence: self.run.cadence,
            anchor_count: if self.anchors.mode == "none" { 0 } else { self.anchors.count },
            explicit_anchors,
            ledger_overrides: self.ledger.iter().map(|(k, v)| (k.clone(), *v)).collect(),
        }
    }
}

/// Parse and validate a configuration file.
pub fn parse_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path)?;
    let cfg: RunConfig =
        toml::from_str(&text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn serialize_config(cfg: &RunConfig) -> String {
    toml::to_string_pretty(cfg).expect("config serialization")
}

#[derive(Parser)]
#[command(name = "acflow", about = "Phase-field mean curvature flow laboratory", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Path to the run configuration file.
    #[arg(long, global = true, default_value = "acflow.toml")]
    config: PathBuf,
    /// Output directory (overrides output.dir from the config).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for independent runs in a sweep.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Promote report-only scans to hard assertions.
    #[arg(long, global = true, default_value_t = false)]
    strict: bool,
}

#[derive(Subcommand)]
enum Command {
    /// One canonical run: flow, diagnostics, checkpoints.
    Simulate,
    /// Run the eps list and check the vanishing-discrepancy trends.
    Sweep,
    /// Re-check the invariant suite on stored checkpoints.
    Verify,
    /// Clearing-out scan, support probes and forward densities on stored
    /// checkpoints.
    Scan,
}

/// CLI entry point; returns the process exit code (0 pass, 1 failed
/// assertions, 2 configuration or i/o errors).
pub fn run() -> i32 {
    let cli = Cli::parse();
    let cfg = match parse_config(&cli.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let out_dir = cli
        .out
        .clone()
        .or_else(|| cfg.output.dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    if let Err(e) = std::fs::create_dir_all(&out_dir) {
        eprintln!("error: cannot create output dir {}: {e}", out_dir.display());
        return 2;
    }
    let result = match cli.command {
        Command::Simulate => cmd_simulate(&cfg, &out_dir, cli.strict),
        Command::Sweep => cmd_sweep(&cfg, &out_dir, cli.threads, cli.strict),
        Command::Verify => cmd_verify(&cfg, &out_dir, cli.strict),
        Command::Scan => cmd_scan(&cfg, &out_dir, cli.strict),
    };
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
