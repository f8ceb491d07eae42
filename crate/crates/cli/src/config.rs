//! Run configuration: built-in scenarios, custom JSON scenarios, and
//! parameter overrides.
//!
//! Built-ins are code (see `crowdwave_core::scenarios`) so their constants
//! are version-controlled with the solvers; custom scenarios are JSON files
//! validated against the schema below. Overrides apply on top of either.
//! `dt` is always re-derived as `dx / 2` after a `dx` override unless `dt`
//! itself is overridden too.

use crowdwave_core::scenarios;
use crowdwave_core::solver1d::{DensityBlock, GateSpec, InflowSpec, Scenario1D};
use crowdwave_core::solver2d::{Block, ExitSpec, PinnedCell, Scenario2D, Side, SweepOrder};
use crowdwave_core::SimParams;
use serde::Deserialize;
use std::fmt;
use std::path::Path;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

/// A fully resolved scenario, either corridor (1D) or room (2D).
#[derive(Debug, Clone)]
pub enum Scenario {
    Corridor(Scenario1D),
    Room(Scenario2D),
}

impl Scenario {
    pub fn params(&self) -> &SimParams {
        match self {
            Scenario::Corridor(s) => &s.params,
            Scenario::Room(s) => &s.params,
        }
    }

    pub fn params_mut(&mut self) -> &mut SimParams {
        match self {
            Scenario::Corridor(s) => &mut s.params,
            Scenario::Room(s) => &mut s.params,
        }
    }
}

pub const BUILTINS: [&str; 5] = ["test1", "test2", "test3", "test4a", "test4b"];

pub fn builtin(name: &str) -> Result<Scenario, ConfigError> {
    match name {
        "test1" => Ok(Scenario::Corridor(scenarios::test1())),
        "test2" => Ok(Scenario::Corridor(scenarios::test2())),
        "test3" => Ok(Scenario::Room(scenarios::test3())),
        "test4a" => Ok(Scenario::Room(scenarios::test4a())),
        "test4b" => Ok(Scenario::Room(scenarios::test4b())),
        other => err(format!(
            "unknown builtin scenario {other:?}; expected one of {BUILTINS:?} or `custom`"
        )),
    }
}

/// Partial parameter set merged over the defaults (Table-1 values).
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsPatch {
    pub f_max: Option<f64>,
    pub sigma: Option<f64>,
    pub tau_lo: Option<f64>,
    pub tau_hi: Option<f64>,
    pub u_lo: Option<f64>,
    pub u_hi: Option<f64>,
    pub eps: Option<f64>,
    pub alpha_pos: Option<f64>,
    pub alpha_neg: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub delta: Option<f64>,
    pub nu: Option<f64>,
    pub dx: Option<f64>,
    pub dt: Option<f64>,
    pub t_end: Option<f64>,
}

impl ParamsPatch {
    /// Applies the patch; `dt` follows `dx / 2` unless given explicitly.
    pub fn apply(&self, p: &mut SimParams) {
        macro_rules! merge {
            ($($field:ident),*) => {
                $(if let Some(v) = self.$field { p.$field = v; })*
            };
        }
        merge!(
            f_max, sigma, tau_lo, tau_hi, u_lo, u_hi, eps, alpha_pos, alpha_neg, beta, gamma,
            delta, nu, t_end
        );
        if let Some(dx) = self.dx {
            p.dx = dx;
            p.dt = dx / 2.0;
        }
        if let Some(dt) = self.dt {
            p.dt = dt;
        }
    }
}

/// Sets one parameter by name (the `--set name=value` surface).
pub fn set_param(p: &mut SimParams, name: &str, value: f64) -> Result<(), ConfigError> {
    match name {
        "f_max" => p.f_max = value,
        "sigma" => p.sigma = value,
        "tau_lo" => p.tau_lo = value,
        "tau_hi" => p.tau_hi = value,
        "u_lo" => p.u_lo = value,
        "u_hi" => p.u_hi = value,
        "eps" => p.eps = value,
        "alpha_pos" => p.alpha_pos = value,
        "alpha_neg" => p.alpha_neg = value,
        "beta" => p.beta = value,
        "gamma" => p.gamma = value,
        "delta" => p.delta = value,
        "nu" => p.nu = value,
        "dx" => {
            p.dx = value;
            p.dt = value / 2.0;
        }
        "dt" => p.dt = value,
        "t_end" => p.t_end = value,
        other => return err(format!("unknown parameter {other:?}")),
    }
    Ok(())
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct GateFile {
    position: f64,
    opens_at: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct InflowFile {
    density: f64,
    until: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockFile1D {
    from: f64,
    to: f64,
    value: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExitFile {
    side: String,
    offset: usize,
    #[serde(default = "one")]
    factor: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct PinnedFile {
    j: usize,
    k: usize,
    rho: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockFile2D {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    value: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum ScenarioFile {
    Corridor {
        length: f64,
        #[serde(default)]
        params: ParamsPatch,
        gate: Option<GateFile>,
        inflow: Option<InflowFile>,
        #[serde(default)]
        initial: Vec<BlockFile1D>,
        #[serde(default = "one")]
        right_outflow_factor: f64,
        steady_stop: Option<f64>,
    },
    Room {
        width: f64,
        height: f64,
        #[serde(default)]
        params: ParamsPatch,
        #[serde(default)]
        exits: Vec<ExitFile>,
        #[serde(default)]
        walls: Vec<[f64; 4]>,
        #[serde(default)]
        pinned: Vec<PinnedFile>,
        #[serde(default)]
        initial: Vec<BlockFile2D>,
        stop_when_empty: Option<f64>,
    },
}

fn parse_side(s: &str) -> Result<Side, ConfigError> {
    match s {
        "left" => Ok(Side::Left),
        "right" => Ok(Side::Right),
        "bottom" => Ok(Side::Bottom),
        "top" => Ok(Side::Top),
        other => err(format!(
            "unknown exit side {other:?}; expected left, right, bottom, or top"
        )),
    }
}

pub fn load_custom(path: &Path) -> Result<Scenario, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
    let file: ScenarioFile = serde_json::from_str(&text)
        .map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
    match file {
        ScenarioFile::Corridor {
            length,
            params,
            gate,
            inflow,
            initial,
            right_outflow_factor,
            steady_stop,
        } => {
            let mut p = SimParams::default();
            params.apply(&mut p);
            let mut s = Scenario1D::corridor(length, p);
            s.gate = gate.map(|g| GateSpec {
                position: g.position,
                opens_at: g.opens_at,
            });
            s.inflow = inflow.map(|i| InflowSpec {
                density: i.density,
                until: i.until,
            });
            s.initial = initial
                .into_iter()
                .map(|b| DensityBlock {
                    from: b.from,
                    to: b.to,
                    value: b.value,
                })
                .collect();
            s.right_outflow_factor = right_outflow_factor;
            s.steady_stop = steady_stop;
            Ok(Scenario::Corridor(s))
        }
        ScenarioFile::Room {
            width,
            height,
            params,
            exits,
            walls,
            pinned,
            initial,
            stop_when_empty,
        } => {
            let mut p = SimParams::default();
            params.apply(&mut p);
            let mut s = Scenario2D::room(width, height, p);
            for e in exits {
                s.exits.push(ExitSpec {
                    side: parse_side(&e.side)?,
                    offset: e.offset,
                    factor: e.factor,
                });
            }
            s.walls = walls.into_iter().map(|w| (w[0], w[1], w[2], w[3])).collect();
            s.pinned = pinned
                .into_iter()
                .map(|c| PinnedCell {
                    j: c.j,
                    k: c.k,
                    rho: c.rho,
                })
                .collect();
            s.initial = initial
                .into_iter()
                .map(|b| Block {
                    x0: b.x0,
                    x1: b.x1,
                    y0: b.y0,
                    y1: b.y1,
                    value: b.value,
                })
                .collect();
            s.sweep_order = SweepOrder::XThenY;
            s.stop_when_empty = stop_when_empty;
            Ok(Scenario::Room(s))
        }
    }
}

/// Resolves a scenario selector plus `--set` overrides into a validated
/// scenario.
pub fn resolve(
    name: &str,
    config: Option<&Path>,
    sets: &[(String, f64)],
) -> Result<Scenario, ConfigError> {
    let mut scenario = if name == "custom" {
        let Some(path) = config else {
            return err("scenario `custom` needs --config <file.json>");
        };
        load_custom(path)?
    } else {
        builtin(name)?
    };
    for (key, value) in sets {
        set_param(scenario.params_mut(), key, *value)?;
    }
    scenario
        .params()
        .validate()
        .map_err(|e| ConfigError(format!("invalid parameters after overrides: {e:?}")))?;
    Ok(scenario)
}

/// Parses one `name=value` override.
pub fn parse_set(arg: &str) -> Result<(String, f64), ConfigError> {
    let Some((key, value)) = arg.split_once('=') else {
        return err(format!("override {arg:?} is not of the form name=value"));
    };
    let value: f64 = value
        .parse()
        .map_err(|_| ConfigError(format!("override {arg:?}: value is not a number")))?;
    Ok((key.to_string(), value))
}
