//! Command dispatch and report files.
//!
//! Every command writes `report.json` into the output directory. Commands
//! that evolve the flow add `series.csv`, and commands with bound curves
//! add `curves.csv`. All files are written to a temporary name and renamed
//! into place.
//!
//! `series.csv` columns, one row per snapshot:
//!
//! ```text
//! t,M,P,F,G,E_k,E_i_or_I,E_or_IE,H_or_IH_or_DIH,J_or_IJ,indicator,dissipation
//! ```
//!
//! `curves.csv` columns: `t,lower,upper,g_lower,g_upper`.
//!
//! Numbers are printed in the shortest form that reads back to the same
//! `f64`. The wall time is kept out of the files so that reruns are
//! byte-identical.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::blowup_time::{bounds_for_model, bounds_for_report, find_tstar, BoundCurves, TStarResult};
use crate::config::{expand_sweep, Command, RunConfig};
use crate::criteria::{
    check_cns, check_dicns_1d_high_alpha, check_dicns_1d_mid_alpha, check_dicns_nd, check_icns,
    compact_support_lifespan, constants_table, ConstantInputs, Constants, CriterionInputs, CriterionKind,
    CriterionReport,
};
use crate::error::{Error, Result};
use crate::functionals::{chemin, snapshot, CheminResult, FunctionalSnapshot};
use crate::gas_state::{build_initial_data, FlowState, GasModel, Grid, Regime};
use crate::simulate::{
    max_virial_energy_rate, run_with, verify_bounds, verify_identities, BoundsReport, IdentityReport, RunStatus,
    SchemeInfo, StateDigest, TimeSeries,
};

pub const VERSION: &str = concat!("blowup-lab ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lifespan {
    /// Radius of the smallest centred ball holding the support.
    pub support_radius: f64,
    pub lifespan: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub scheme: SchemeInfo,
    pub steps: usize,
    pub status: RunStatus,
    pub onset_time: Option<f64>,
    pub peak_indicator: f64,
    pub snapshots: usize,
    pub final_digest: Option<StateDigest>,
    pub warnings: Vec<String>,
}

impl RunSummary {
    fn of(s: &TimeSeries) -> Self {
        RunSummary {
            scheme: s.scheme.clone(),
            steps: s.steps,
            status: s.status.clone(),
            onset_time: s.onset_time,
            peak_indicator: s.peak_indicator(),
            snapshots: s.entries.len(),
            final_digest: s.entries.last().map(|e| e.digest),
            warnings: s.warnings.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepChild {
    pub index: usize,
    pub value: f64,
    pub dir: String,
    pub exit_code: i32,
    pub error: Option<String>,
    /// A few headline numbers of the child's payload.
    pub summary: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Payload {
    Check {
        criterion: Option<CriterionReport>,
        lifespan: Option<Lifespan>,
        constants: Option<Constants>,
        initial: FunctionalSnapshot,
    },
    Tstar {
        criterion: CriterionReport,
        tstar: TStarResult,
    },
    Simulate {
        run: RunSummary,
    },
    Verify {
        run: RunSummary,
        identities: IdentityReport,
        bounds: Option<BoundsReport>,
        /// Largest `dJ/dt` or `dIJ/dt` seen; reported above the critical `γ`.
        max_virial_energy_rate: Option<f64>,
    },
    Chemin {
        results: Vec<CheminResult>,
    },
    Sweep {
        parameter: String,
        children: Vec<SweepChild>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub version: String,
    pub config: RunConfig,
    pub payload: Payload,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Writes `contents` to `path` via a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = dir.join(format!(".{name}.tmp-{}", std::process::id()));
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        Error::from(e)
    })
}

pub const SERIES_HEADER: &str =
    "t,M,P,F,G,E_k,E_i_or_I,E_or_IE,H_or_IH_or_DIH,J_or_IJ,indicator,dissipation";

pub fn series_csv(series: &TimeSeries) -> String {
    let flow = series.model.flow;
    let mut out = String::from(SERIES_HEADER);
    out.push('\n');
    for e in &series.entries {
        let s = &e.snapshot;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            e.t,
            s.m,
            s.p,
            s.f,
            s.g,
            s.e_k,
            s.potential(flow),
            s.energy(flow),
            s.virial_rate(&series.model),
            s.virial_energy(flow),
            e.indicator,
            e.dissipation
        );
    }
    out
}

pub fn curves_csv(curves: &BoundCurves, t_end: f64, points: usize) -> String {
    let mut out = String::from("t,lower,upper,g_lower,g_upper\n");
    for i in 0..points {
        let t = t_end * i as f64 / (points - 1) as f64;
        let (gl, gu) = curves.g_bounds(t);
        let _ = writeln!(out, "{t},{},{},{gl},{gu}", curves.lower(t), curves.upper(t));
    }
    out
}

fn initial_state(cfg: &RunConfig, model: &GasModel) -> Result<FlowState> {
    let grid = cfg.grid()?;
    build_initial_data(&cfg.profile.to_spec()?, &grid, model)
}

/// Criterion named in the config, or the one matching the model.
pub fn evaluate_criterion(cfg: &RunConfig, state: &FlowState, model: &GasModel) -> Result<CriterionReport> {
    let kind = match cfg.model.criterion {
        Some(k) => k,
        None => CriterionKind::for_model(model)?,
    };
    match kind {
        CriterionKind::FullCns => check_cns(state, model),
        CriterionKind::Isentropic => check_icns(state, model),
        CriterionKind::DegenerateHighAlpha => {
            let c14 = cfg.model.c14.unwrap_or_else(|| state.max_density());
            check_dicns_1d_high_alpha(state, model, c14)
        }
        CriterionKind::DegenerateMidAlpha => {
            let (inputs, _) = CriterionInputs::from_state(state, model)?;
            check_dicns_1d_mid_alpha(state, model, cfg.model.c13.unwrap_or(inputs.e0))
        }
        CriterionKind::DegenerateMultiD => {
            let (inputs, _) = CriterionInputs::from_state(state, model)?;
            check_dicns_nd(state, model, cfg.model.c13.unwrap_or(inputs.e0))
        }
        CriterionKind::CompactSupport => {
            Err(Error::RegimeMismatch("compact-support bound is not a blow-up criterion".into()))
        }
    }
}

fn lifespan(state: &FlowState, model: &GasModel, snap: &FunctionalSnapshot) -> Result<Lifespan> {
    let x = state.grid.centers();
    let half = 0.5 * state.grid.dx();
    let d = state
        .rho
        .iter()
        .zip(x)
        .filter(|(r, _)| **r > 0.0)
        .map(|(_, x)| x.abs() + half)
        .fold(0.0, f64::max);
    if state.rho[0] > 0.0 || state.rho[state.rho.len() - 1] > 0.0 {
        return Err(Error::InvalidInput("density does not vanish before the domain edge".into()));
    }
    let e0 = snap.energy(model.flow);
    let t = compact_support_lifespan(snap.m, e0, snap.f, snap.g, d, model.gamma, model.dim)?;
    Ok(Lifespan { support_radius: d, lifespan: t })
}

fn curves_for(model: &GasModel, state: &FlowState, criterion: Option<&CriterionReport>) -> Result<BoundCurves> {
    let (inputs, snap) = CriterionInputs::from_state(state, model)?;
    match (model.regime, criterion) {
        (Regime::Degenerate { .. }, Some(r)) => bounds_for_report(r, model, &snap),
        _ => bounds_for_model(model, &inputs, &snap),
    }
}

struct Outputs<'a> {
    dir: Option<&'a Path>,
}

impl Outputs<'_> {
    fn write(&self, name: &str, contents: &str) -> Result<()> {
        match self.dir {
            Some(d) => write_atomic(&d.join(name), contents),
            None => Ok(()),
        }
    }
}

/// Runs the configured command, writing files under `out` when given.
/// `workers` bounds the number of concurrent sweep children.
pub fn execute(cfg: &RunConfig, out: Option<&Path>, workers: usize) -> Result<RunReport> {
    let started = Instant::now();
    let outputs = Outputs { dir: out };
    let payload = match cfg.command {
        Command::Sweep => run_sweep(cfg, out, workers)?,
        c => single(c, cfg, &outputs)?,
    };
    let report = RunReport { version: VERSION.into(), config: cfg.clone(), payload, wall_time: started.elapsed() };
    outputs.write("report.json", &report.to_json())?;
    Ok(report)
}

fn single(command: Command, cfg: &RunConfig, outputs: &Outputs) -> Result<Payload> {
    let model = cfg.model()?;
    let state = initial_state(cfg, &model)?;
    let horizon = |default: f64| cfg.solver.curve_horizon.unwrap_or(default);
    match command {
        Command::Check => {
            let initial = snapshot(&state, &model)?;
            if cfg.model.criterion == Some(CriterionKind::CompactSupport) {
                let l = lifespan(&state, &model, &initial)?;
                return Ok(Payload::Check { criterion: None, lifespan: Some(l), constants: None, initial });
            }
            let report = evaluate_criterion(cfg, &state, &model)?;
            let constants = constants_table(report.kind, &model, &ConstantInputs::from_report(&report, &initial)).ok();
            if let Ok(curves) = curves_for(&model, &state, Some(&report)) {
                outputs.write("curves.csv", &curves_csv(&curves, horizon(cfg.solver.t_end.max(1.0)), cfg.solver.curve_points))?;
            }
            Ok(Payload::Check { criterion: Some(report), lifespan: None, constants, initial })
        }
        Command::Tstar => {
            let report = evaluate_criterion(cfg, &state, &model)?;
            let curves = curves_for(&model, &state, Some(&report))?;
            let tstar = find_tstar(&curves);
            let h = horizon(tstar.tstar.map_or(cfg.solver.t_end.max(1.0), |t| 2.0 * t));
            outputs.write("curves.csv", &curves_csv(&curves, h, cfg.solver.curve_points))?;
            Ok(Payload::Tstar { criterion: report, tstar })
        }
        Command::Simulate => {
            let series = run_with(&state, &model, &cfg.solver.run_options())?;
            outputs.write("series.csv", &series_csv(&series))?;
            Ok(Payload::Simulate { run: RunSummary::of(&series) })
        }
        Command::Verify => {
            let series = run_with(&state, &model, &cfg.solver.run_options())?;
            outputs.write("series.csv", &series_csv(&series))?;
            let identities = verify_identities(&series, &model)?;
            let criterion = evaluate_criterion(cfg, &state, &model).ok();
            let curves = curves_for(&model, &state, criterion.as_ref()).ok();
            if let Some(c) = &curves {
                outputs.write("curves.csv", &curves_csv(c, horizon(cfg.solver.t_end), cfg.solver.curve_points))?;
            }
            let bounds = curves.as_ref().map(|c| verify_bounds(&series, c));
            let rate = if model.gamma > model.critical_gamma() { max_virial_energy_rate(&series).ok() } else { None };
            Ok(Payload::Verify { run: RunSummary::of(&series), identities, bounds, max_virial_energy_rate: rate })
        }
        Command::Chemin => {
            let mut results = vec![chemin(&state.rho, &state.grid, model.gamma)?];
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            for _ in 0..cfg.samples {
                let f = random_field(&state.grid, &mut rng);
                results.push(chemin(&f, &state.grid, model.gamma)?);
            }
            Ok(Payload::Chemin { results })
        }
        Command::Sweep => Err(Error::InvalidInput("sweep children cannot sweep".into())),
    }
}

/// Nonnegative sum of one to four Gaussian bumps inside the grid.
pub fn random_field(grid: &Grid, rng: &mut impl Rng) -> Vec<f64> {
    let l = grid.half_width;
    let radial = grid.dim() > 1;
    let bumps: Vec<(f64, f64, f64)> = (0..rng.gen_range(1..=4))
        .map(|_| {
            let c = if radial { 0.0 } else { rng.gen_range(-0.4 * l..0.4 * l) };
            (rng.gen_range(0.1..2.0), c, rng.gen_range(0.05 * l..0.2 * l))
        })
        .collect();
    grid.centers()
        .iter()
        .map(|&x| bumps.iter().map(|(a, c, w)| a * (-((x - c) / w).powi(2)).exp()).sum())
        .collect()
}

fn headline(p: &Payload) -> serde_json::Value {
    match p {
        Payload::Check { criterion: Some(r), .. } => {
            json!({"lhs": r.lhs, "rhs": r.rhs, "margin": r.margin, "satisfied": r.satisfied})
        }
        Payload::Check { lifespan: Some(l), .. } => json!({"lifespan": l.lifespan}),
        Payload::Check { .. } => json!({}),
        Payload::Tstar { criterion, tstar } => {
            json!({"satisfied": criterion.satisfied, "tstar": tstar.tstar, "limit_ratio": tstar.limit_ratio})
        }
        Payload::Simulate { run } => json!({"steps": run.steps, "onset_time": run.onset_time}),
        Payload::Verify { identities, bounds, .. } => {
            let mut m = serde_json::Map::new();
            for r in &identities.residuals {
                m.insert(r.name.clone(), json!(r.max));
            }
            m.insert("bounds_hold".into(), json!(bounds.as_ref().map(|b| b.all_satisfied())));
            serde_json::Value::Object(m)
        }
        Payload::Chemin { results } => json!({"ratio": results.first().map(|r| r.ratio)}),
        Payload::Sweep { .. } => json!({}),
    }
}

fn run_sweep(cfg: &RunConfig, out: Option<&Path>, workers: usize) -> Result<Payload> {
    let w = cfg.sweep.as_ref().ok_or_else(|| Error::InvalidInput("no [sweep] section".into()))?;
    let children = expand_sweep(cfg)?;
    let width = children.len().saturating_sub(1).to_string().len().max(3);
    let slots: Vec<Mutex<Option<SweepChild>>> = children.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = workers.clamp(1, children.len().max(1));

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some((value, child)) = children.get(i) else { break };
                let name = format!("child-{i:0width$}");
                let dir: Option<PathBuf> = out.map(|o| o.join(&name));
                let record = match execute(child, dir.as_deref(), 1) {
                    Ok(r) => SweepChild {
                        index: i,
                        value: *value,
                        dir: name,
                        exit_code: 0,
                        error: None,
                        summary: headline(&r.payload),
                    },
                    Err(e) => SweepChild {
                        index: i,
                        value: *value,
                        dir: name,
                        exit_code: e.exit_code(),
                        error: Some(e.to_string()),
                        summary: json!({}),
                    },
                };
                *slots[i].lock().expect("slot lock") = Some(record);
            });
        }
    });

    let children = slots.into_iter().map(|m| m.into_inner().expect("slot lock").expect("child ran")).collect();
    Ok(Payload::Sweep { parameter: w.parameter.clone(), children })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    fn cfg(extra: &str) -> RunConfig {
        parse_config(&format!("[model]\ngamma = 2\n[profile]\ndensity = gaussian\n{extra}")).unwrap()
    }

    #[test]
    fn check_reports_rhs() {
        let r = execute(&cfg(""), None, 1).unwrap();
        let Payload::Check { criterion: Some(c), .. } = &r.payload else { panic!() };
        assert!((c.rhs - 0.088_388_347_648_318_45).abs() < 1e-15);
        assert!(r.to_json().contains("\"rhs\""));
        assert!(!r.to_json().contains("wall_time"));
    }

    #[test]
    fn verify_zero_time_fails() {
        let mut c = cfg("[grid]\ncells = 128\n[solver]\nt_end = 0\n");
        c.command = Command::Verify;
        let e = execute(&c, None, 1).unwrap_err();
        assert!(e.to_string().contains("insufficient snapshots"), "{e}");
        assert_eq!(e.exit_code(), 3);
    }

    #[test]
    fn atomic_write_replaces() {
        let d = tempfile::tempdir().unwrap();
        let p = d.path().join("a/b.txt");
        write_atomic(&p, "one").unwrap();
        write_atomic(&p, "two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(std::fs::read_dir(p.parent().unwrap()).unwrap().count(), 1);
    }

    #[test]
    fn random_fields_are_nonnegative() {
        let grid = Grid::radial(3, 5.0, 64).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert!(random_field(&grid, &mut rng).iter().all(|v| *v >= 0.0));
    }
}
