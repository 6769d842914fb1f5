//! Run configuration files.
//!
//! A plain `key = value` format with `[section]` headers and `#` comments.
//! Top-level keys (before any header) are `command`, `seed` and `samples`.
//!
//! ```text
//! command = check
//!
//! [model]
//! gamma = 2
//! dim = 1
//!
//! [profile]
//! density = gaussian
//! ```
//!
//! Every value is checked as soon as it is read; cross-field checks run at
//! the end and point back at the line that set the offending key.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::criteria::CriterionKind;
use crate::error::{Error, Result};
use crate::gas_state::{
    parse_table, DensityProfile, MIN_CELLS, EntropyProfile, FlowKind, GasModel, Grid, ProfileSpec, Regime, VelocityProfile,
};
use crate::simulate::{Limiter, RunOptions, SolverOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Check,
    Tstar,
    Simulate,
    Verify,
    Chemin,
    Sweep,
}

impl Command {
    pub const ALL: [Command; 6] =
        [Command::Check, Command::Tstar, Command::Simulate, Command::Verify, Command::Chemin, Command::Sweep];

    pub fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Tstar => "tstar",
            Command::Simulate => "simulate",
            Command::Verify => "verify",
            Command::Chemin => "chemin",
            Command::Sweep => "sweep",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Command::ALL.into_iter().find(|c| c.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeKind {
    Euler,
    Constant,
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub gamma: f64,
    pub dim: usize,
    pub flow: FlowKind,
    pub regime: RegimeKind,
    pub mu: f64,
    pub lambda: f64,
    pub kappa: f64,
    pub alpha: f64,
    pub gas_constant: f64,
    /// Overrides the criterion picked from the model.
    pub criterion: Option<CriterionKind>,
    pub c13: Option<f64>,
    pub c14: Option<f64>,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            gamma: f64::NAN,
            dim: 1,
            flow: FlowKind::Isentropic,
            regime: RegimeKind::Euler,
            mu: 0.0,
            lambda: 0.0,
            kappa: 0.0,
            alpha: 2.0,
            gas_constant: 1.0,
            criterion: None,
            c13: None,
            c14: None,
        }
    }
}

impl ModelConfig {
    pub fn to_model(&self) -> Result<GasModel> {
        let regime = match self.regime {
            RegimeKind::Euler => Regime::Euler,
            RegimeKind::Constant => Regime::ConstantViscosity { mu: self.mu, lambda: self.lambda, kappa: self.kappa },
            RegimeKind::Degenerate => Regime::Degenerate { alpha: self.alpha },
        };
        GasModel::new(self.gamma, self.dim, regime, self.flow)?.with_gas_constant(self.gas_constant)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityKind {
    Gaussian,
    Bump,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VelocityKind {
    Zero,
    Uniform,
    Tanh,
    Xgaussian,
    Sine,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyKind {
    Constant,
    Bump,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileConfig {
    pub density: DensityKind,
    pub amplitude: f64,
    pub width: f64,
    pub radius: f64,
    pub order: u32,
    /// Path of a two/three-column table, relative to the working directory.
    pub table: Option<String>,
    pub velocity: VelocityKind,
    pub velocity_amplitude: f64,
    pub velocity_width: f64,
    pub velocity_wavenumber: f64,
    pub entropy: EntropyKind,
    /// Constant entropy, or the base level of a bump.
    pub entropy_shift: f64,
    pub entropy_amplitude: f64,
    pub entropy_width: f64,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        ProfileConfig {
            density: DensityKind::Gaussian,
            amplitude: 1.0,
            width: 1.0,
            radius: 1.0,
            order: 2,
            table: None,
            velocity: VelocityKind::Zero,
            velocity_amplitude: 0.0,
            velocity_width: 1.0,
            velocity_wavenumber: 1.0,
            entropy: EntropyKind::Constant,
            entropy_shift: 0.0,
            entropy_amplitude: 0.0,
            entropy_width: 1.0,
        }
    }
}

impl ProfileConfig {
    /// Builds the profile, reading the table file if there is one.
    pub fn to_spec(&self) -> Result<ProfileSpec> {
        let density = match self.density {
            DensityKind::Gaussian => DensityProfile::Gaussian { amplitude: self.amplitude, width: self.width },
            DensityKind::Bump => {
                DensityProfile::CompactBump { amplitude: self.amplitude, radius: self.radius, order: self.order }
            }
            DensityKind::Table => {
                let path = self.table.as_deref().ok_or_else(|| Error::InvalidInput("density table path missing".into()))?;
                let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
                parse_table(&text)?
            }
        };
        let a = self.velocity_amplitude;
        let velocity = match self.velocity {
            VelocityKind::Zero => VelocityProfile::Zero,
            VelocityKind::Uniform => VelocityProfile::Uniform { value: a },
            VelocityKind::Tanh => VelocityProfile::Tanh { amplitude: a },
            VelocityKind::Xgaussian => VelocityProfile::XGaussian { amplitude: a, width: self.velocity_width },
            VelocityKind::Sine => VelocityProfile::Sine { amplitude: a, wavenumber: self.velocity_wavenumber },
            VelocityKind::Table => VelocityProfile::Table,
        };
        let entropy = match self.entropy {
            EntropyKind::Constant => EntropyProfile::Constant { value: self.entropy_shift },
            EntropyKind::Bump => EntropyProfile::Bump {
                base: self.entropy_shift,
                amplitude: self.entropy_amplitude,
                width: self.entropy_width,
            },
        };
        Ok(ProfileSpec { density, velocity, entropy })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub half_width: f64,
    pub cells: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { half_width: 10.0, cells: 1024 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub cfl: f64,
    pub t_end: f64,
    pub snapshot_every: f64,
    pub limiter: Limiter,
    pub theta: f64,
    /// Horizon of the bound curves written to `curves.csv`; `t_end` if unset.
    pub curve_horizon: Option<f64>,
    pub curve_points: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            cfl: 0.4,
            t_end: 0.5,
            snapshot_every: 0.01,
            limiter: Limiter::Minmod,
            theta: 0.5,
            curve_horizon: None,
            curve_points: 201,
        }
    }
}

impl SolverConfig {
    pub fn run_options(&self) -> RunOptions {
        RunOptions {
            t_end: self.t_end,
            snapshot_every: self.snapshot_every,
            solver: SolverOptions { cfl: self.cfl, limiter: self.limiter, theta: self.theta, ..Default::default() },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct OutputConfig {
    /// Output directory; the CLI `--out` flag takes precedence.
    pub dir: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    /// Dotted key, e.g. `profile.entropy_shift`.
    pub parameter: String,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    /// Command run for every child.
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub seed: u64,
    /// Random fields added to a `chemin` batch.
    pub samples: usize,
    pub model: ModelConfig,
    pub profile: ProfileConfig,
    pub grid: GridConfig,
    pub solver: SolverConfig,
    pub output: OutputConfig,
    pub sweep: Option<SweepConfig>,
}

impl RunConfig {
    pub fn model(&self) -> Result<GasModel> {
        self.model.to_model()
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::for_dim(self.model.dim, self.grid.half_width, self.grid.cells)
    }
}

fn num(v: &str) -> std::result::Result<f64, String> {
    let x: f64 = v.parse().map_err(|_| format!("expected a number, got `{v}`"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("expected a finite number, got `{v}`"))
    }
}

fn int<T: std::str::FromStr>(v: &str) -> std::result::Result<T, String> {
    v.parse().map_err(|_| format!("expected a non-negative integer, got `{v}`"))
}

fn choice<T: Copy>(v: &str, options: &[(&str, T)]) -> std::result::Result<T, String> {
    options.iter().find(|(k, _)| *k == v).map(|(_, t)| *t).ok_or_else(|| {
        let names: Vec<&str> = options.iter().map(|(k, _)| *k).collect();
        format!("expected one of {}, got `{v}`", names.join(", "))
    })
}

const FLOWS: [(&str, FlowKind); 2] = [("isentropic", FlowKind::Isentropic), ("full", FlowKind::Full)];
const REGIMES: [(&str, RegimeKind); 3] =
    [("euler", RegimeKind::Euler), ("constant", RegimeKind::Constant), ("degenerate", RegimeKind::Degenerate)];
const DENSITIES: [(&str, DensityKind); 3] =
    [("gaussian", DensityKind::Gaussian), ("bump", DensityKind::Bump), ("table", DensityKind::Table)];
const VELOCITIES: [(&str, VelocityKind); 6] = [
    ("zero", VelocityKind::Zero),
    ("uniform", VelocityKind::Uniform),
    ("tanh", VelocityKind::Tanh),
    ("xgaussian", VelocityKind::Xgaussian),
    ("sine", VelocityKind::Sine),
    ("table", VelocityKind::Table),
];
const ENTROPIES: [(&str, EntropyKind); 2] = [("constant", EntropyKind::Constant), ("bump", EntropyKind::Bump)];
const LIMITERS: [(&str, Limiter); 3] =
    [("none", Limiter::None), ("minmod", Limiter::Minmod), ("mc", Limiter::MonotonizedCentral)];

fn name_of<T: Copy + PartialEq>(v: T, options: &[(&'static str, T)]) -> &'static str {
    options.iter().find(|(_, t)| *t == v).map(|(k, _)| *k).unwrap_or("?")
}

fn command(v: &str) -> std::result::Result<Command, String> {
    Command::parse(v).ok_or_else(|| format!("unknown command `{v}`"))
}

impl RunConfig {
    fn empty() -> Self {
        RunConfig {
            command: Command::Check,
            seed: 0,
            samples: 0,
            model: ModelConfig::default(),
            profile: ProfileConfig::default(),
            grid: GridConfig::default(),
            solver: SolverConfig::default(),
            output: OutputConfig::default(),
            sweep: None,
        }
    }

    /// Sets one key; `section` is empty for top-level keys.
    pub fn set(&mut self, section: &str, key: &str, v: &str) -> std::result::Result<(), String> {
        let m = &mut self.model;
        let p = &mut self.profile;
        match (section, key) {
            ("", "command") => self.command = command(v)?,
            ("", "seed") => self.seed = int(v)?,
            ("", "samples") => self.samples = int(v)?,
            ("model", "gamma") => m.gamma = num(v)?,
            ("model", "dim") => m.dim = int(v)?,
            ("model", "flow") => m.flow = choice(v, &FLOWS)?,
            ("model", "regime") => m.regime = choice(v, &REGIMES)?,
            ("model", "mu") => m.mu = num(v)?,
            ("model", "lambda") => m.lambda = num(v)?,
            ("model", "kappa") => m.kappa = num(v)?,
            ("model", "alpha") => m.alpha = num(v)?,
            ("model", "gas_constant") => m.gas_constant = num(v)?,
            ("model", "criterion") => {
                m.criterion = Some(CriterionKind::parse(v).ok_or_else(|| format!("unknown criterion `{v}`"))?)
            }
            ("model", "c13") => m.c13 = Some(num(v)?),
            ("model", "c14") => m.c14 = Some(num(v)?),
            ("profile", "density") => p.density = choice(v, &DENSITIES)?,
            ("profile", "amplitude") => p.amplitude = num(v)?,
            ("profile", "width") => p.width = num(v)?,
            ("profile", "radius") => p.radius = num(v)?,
            ("profile", "order") => p.order = int(v)?,
            ("profile", "table") => p.table = Some(v.to_string()),
            ("profile", "velocity") => p.velocity = choice(v, &VELOCITIES)?,
            ("profile", "velocity_amplitude") => p.velocity_amplitude = num(v)?,
            ("profile", "velocity_width") => p.velocity_width = num(v)?,
            ("profile", "velocity_wavenumber") => p.velocity_wavenumber = num(v)?,
            ("profile", "entropy") => p.entropy = choice(v, &ENTROPIES)?,
            ("profile", "entropy_shift") => p.entropy_shift = num(v)?,
            ("profile", "entropy_amplitude") => p.entropy_amplitude = num(v)?,
            ("profile", "entropy_width") => p.entropy_width = num(v)?,
            ("grid", "half_width") => self.grid.half_width = num(v)?,
            ("grid", "cells") => self.grid.cells = int(v)?,
            ("solver", "cfl") => self.solver.cfl = num(v)?,
            ("solver", "t_end") => self.solver.t_end = num(v)?,
            ("solver", "snapshot_every") => self.solver.snapshot_every = num(v)?,
            ("solver", "limiter") => self.solver.limiter = choice(v, &LIMITERS)?,
            ("solver", "theta") => self.solver.theta = num(v)?,
            ("solver", "curve_horizon") => self.solver.curve_horizon = Some(num(v)?),
            ("solver", "curve_points") => self.solver.curve_points = int(v)?,
            ("output", "dir") => self.output.dir = Some(v.to_string()),
            ("sweep", k) => {
                let s = self.sweep.get_or_insert_with(|| SweepConfig {
                    parameter: String::new(),
                    start: 0.0,
                    stop: 0.0,
                    count: 0,
                    command: Command::Check,
                });
                match k {
                    "parameter" => s.parameter = v.to_string(),
                    "start" => s.start = num(v)?,
                    "stop" => s.stop = num(v)?,
                    "count" => s.count = int(v)?,
                    "command" => s.command = command(v)?,
                    _ => return Err(format!("unknown key `{k}` in [sweep]")),
                }
            }
            ("", k) => return Err(format!("unknown top-level key `{k}`")),
            (s, k) => return Err(format!("unknown key `{k}` in [{s}]")),
        }
        Ok(())
    }

    /// Writes every field back in the file format.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let kv = |out: &mut String, k: &str, v: &dyn std::fmt::Display| {
            let _ = writeln!(out, "{k} = {v}");
        };
        kv(&mut out, "command", &self.command.name());
        kv(&mut out, "seed", &self.seed);
        kv(&mut out, "samples", &self.samples);

        let m = &self.model;
        out.push_str("\n[model]\n");
        kv(&mut out, "gamma", &m.gamma);
        kv(&mut out, "dim", &m.dim);
        kv(&mut out, "flow", &name_of(m.flow, &FLOWS));
        kv(&mut out, "regime", &name_of(m.regime, &REGIMES));
        kv(&mut out, "mu", &m.mu);
        kv(&mut out, "lambda", &m.lambda);
        kv(&mut out, "kappa", &m.kappa);
        kv(&mut out, "alpha", &m.alpha);
        kv(&mut out, "gas_constant", &m.gas_constant);
        if let Some(c) = m.criterion {
            kv(&mut out, "criterion", &c.name());
        }
        if let Some(c) = m.c13 {
            kv(&mut out, "c13", &c);
        }
        if let Some(c) = m.c14 {
            kv(&mut out, "c14", &c);
        }

        let p = &self.profile;
        out.push_str("\n[profile]\n");
        kv(&mut out, "density", &name_of(p.density, &DENSITIES));
        kv(&mut out, "amplitude", &p.amplitude);
        kv(&mut out, "width", &p.width);
        kv(&mut out, "radius", &p.radius);
        kv(&mut out, "order", &p.order);
        if let Some(t) = &p.table {
            kv(&mut out, "table", t);
        }
        kv(&mut out, "velocity", &name_of(p.velocity, &VELOCITIES));
        kv(&mut out, "velocity_amplitude", &p.velocity_amplitude);
        kv(&mut out, "velocity_width", &p.velocity_width);
        kv(&mut out, "velocity_wavenumber", &p.velocity_wavenumber);
        kv(&mut out, "entropy", &name_of(p.entropy, &ENTROPIES));
        kv(&mut out, "entropy_shift", &p.entropy_shift);
        kv(&mut out, "entropy_amplitude", &p.entropy_amplitude);
        kv(&mut out, "entropy_width", &p.entropy_width);

        out.push_str("\n[grid]\n");
        kv(&mut out, "half_width", &self.grid.half_width);
        kv(&mut out, "cells", &self.grid.cells);

        let s = &self.solver;
        out.push_str("\n[solver]\n");
        kv(&mut out, "cfl", &s.cfl);
        kv(&mut out, "t_end", &s.t_end);
        kv(&mut out, "snapshot_every", &s.snapshot_every);
        kv(&mut out, "limiter", &name_of(s.limiter, &LIMITERS));
        kv(&mut out, "theta", &s.theta);
        if let Some(h) = s.curve_horizon {
            kv(&mut out, "curve_horizon", &h);
        }
        kv(&mut out, "curve_points", &s.curve_points);

        if let Some(d) = &self.output.dir {
            out.push_str("\n[output]\n");
            kv(&mut out, "dir", d);
        }
        if let Some(w) = &self.sweep {
            out.push_str("\n[sweep]\n");
            kv(&mut out, "parameter", &w.parameter);
            kv(&mut out, "start", &w.start);
            kv(&mut out, "stop", &w.stop);
            kv(&mut out, "count", &w.count);
            kv(&mut out, "command", &w.command.name());
        }
        out
    }
}

const SECTIONS: [&str; 6] = ["model", "profile", "grid", "solver", "output", "sweep"];

/// Parses and validates a configuration; defaults fill every omitted key.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::empty();
    let mut section = String::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut lines: HashMap<String, usize> = HashMap::new();
    let perr = |line: usize, message: String| Error::Parse { line, message };

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(rest) = body.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| perr(line, format!("malformed section header `{body}`")))?
                .trim();
            if !SECTIONS.contains(&name) {
                return Err(perr(line, format!("unknown section [{name}]")));
            }
            if seen.insert(name.to_string(), line).is_some() {
                return Err(perr(line, format!("duplicate section [{name}]")));
            }
            section = name.to_string();
            continue;
        }
        let (k, v) = body.split_once('=').ok_or_else(|| perr(line, format!("expected `key = value`, got `{body}`")))?;
        let (k, v) = (k.trim(), v.trim());
        if v.is_empty() {
            return Err(perr(line, format!("empty value for `{k}`")));
        }
        let dotted = if section.is_empty() { k.to_string() } else { format!("{section}.{k}") };
        if lines.insert(dotted.clone(), line).is_some() {
            return Err(perr(line, format!("duplicate key `{dotted}`")));
        }
        cfg.set(&section, k, v).map_err(|m| perr(line, m))?;
    }
    let end = text.lines().count() + 1;
    let at = |key: &str| lines.get(key).copied().unwrap_or(end);

    for required in ["model", "profile"] {
        if !seen.contains_key(required) {
            return Err(perr(end, format!("missing required section [{required}]")));
        }
    }
    if !lines.contains_key("model.gamma") {
        return Err(perr(at("model"), "missing required key `gamma` in [model]".into()));
    }
    validate(&cfg, &at, &seen)?;
    Ok(cfg)
}

fn validate(cfg: &RunConfig, at: &dyn Fn(&str) -> usize, seen: &HashMap<String, usize>) -> Result<()> {
    let perr = |key: &str, message: String| Error::Parse { line: at(key), message };
    let m = &cfg.model;
    if !(m.gamma > 1.0) {
        return Err(perr("model.gamma", format!("gamma > 1 required, got {}", m.gamma)));
    }
    if m.dim == 0 {
        return Err(perr("model.dim", "dim >= 1 required".into()));
    }
    cfg.model().map_err(|e| {
        let key = match m.regime {
            RegimeKind::Degenerate => "model.alpha",
            RegimeKind::Constant => "model.mu",
            RegimeKind::Euler => "model.gamma",
        };
        perr(key, e.to_string())
    })?;
    if !(cfg.grid.half_width > 0.0) {
        return Err(perr("grid.half_width", "half_width > 0 required".into()));
    }
    if cfg.grid.cells < MIN_CELLS {
        return Err(perr("grid.cells", format!("cells >= {} required", MIN_CELLS)));
    }
    let s = &cfg.solver;
    if !(s.cfl > 0.0 && s.cfl <= 1.0) {
        return Err(perr("solver.cfl", "cfl in (0, 1] required".into()));
    }
    if !(s.t_end >= 0.0) {
        return Err(perr("solver.t_end", "t_end >= 0 required".into()));
    }
    if !(s.snapshot_every > 0.0) {
        return Err(perr("solver.snapshot_every", "snapshot_every > 0 required".into()));
    }
    if !(s.theta >= 0.5 && s.theta <= 1.0) {
        return Err(perr("solver.theta", "theta in [0.5, 1] required".into()));
    }
    if let Some(h) = s.curve_horizon {
        if !(h > 0.0) {
            return Err(perr("solver.curve_horizon", "curve_horizon > 0 required".into()));
        }
    }
    if s.curve_points < 2 {
        return Err(perr("solver.curve_points", "curve_points >= 2 required".into()));
    }
    let p = &cfg.profile;
    if !(p.amplitude >= 0.0) {
        return Err(perr("profile.amplitude", "amplitude >= 0 required".into()));
    }
    if !(p.width > 0.0 && p.radius > 0.0 && p.velocity_width > 0.0 && p.entropy_width > 0.0) {
        return Err(perr("profile", "widths and radius must be positive".into()));
    }
    if p.density == DensityKind::Table && p.table.is_none() {
        return Err(perr("profile.density", "density = table needs a `table` path".into()));
    }
    if p.velocity == VelocityKind::Table && p.density != DensityKind::Table {
        return Err(perr("profile.velocity", "velocity = table needs density = table".into()));
    }
    if cfg.command == Command::Sweep || seen.contains_key("sweep") {
        let w = cfg.sweep.as_ref().ok_or_else(|| perr("command", "command sweep needs a [sweep] section".into()))?;
        if w.parameter.is_empty() {
            return Err(perr("sweep", "sweep needs a `parameter`".into()));
        }
        if w.count == 0 {
            return Err(perr("sweep.count", "sweep count >= 1 required".into()));
        }
        if w.command == Command::Sweep {
            return Err(perr("sweep.command", "sweep children cannot sweep".into()));
        }
        let (sec, key) = split_dotted(&w.parameter).ok_or_else(|| {
            perr("sweep.parameter", format!("sweep parameter `{}` is not `section.key`", w.parameter))
        })?;
        let mut probe = cfg.clone();
        probe
            .set(sec, key, &format!("{}", w.start))
            .map_err(|m| perr("sweep.parameter", format!("sweep parameter `{}`: {m}", w.parameter)))?;
    }
    Ok(())
}

fn split_dotted(s: &str) -> Option<(&str, &str)> {
    let (a, b) = s.split_once('.')?;
    (SECTIONS.contains(&a) && a != "sweep" && !b.is_empty()).then_some((a, b))
}

/// Parameter values of a sweep: `count` evenly spaced points from `start` to `stop`.
pub fn sweep_values(w: &SweepConfig) -> Vec<f64> {
    if w.count == 1 {
        return vec![w.start];
    }
    (0..w.count).map(|i| w.start + (w.stop - w.start) * i as f64 / (w.count - 1) as f64).collect()
}

/// One child configuration per sweep value, each running `sweep.command`.
pub fn expand_sweep(cfg: &RunConfig) -> Result<Vec<(f64, RunConfig)>> {
    let w = cfg.sweep.as_ref().ok_or_else(|| Error::InvalidInput("no [sweep] section".into()))?;
    let (sec, key) = split_dotted(&w.parameter)
        .ok_or_else(|| Error::InvalidInput(format!("bad sweep parameter `{}`", w.parameter)))?;
    let mut out = Vec::with_capacity(w.count);
    for v in sweep_values(w) {
        let mut child = cfg.clone();
        child.command = w.command;
        child.sweep = None;
        child.set(sec, key, &format!("{v}")).map_err(Error::InvalidInput)?;
        out.push((v, child));
    }
    Ok(out)
}
