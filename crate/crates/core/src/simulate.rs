//! One-dimensional finite-volume solver with functional tracking.
//!
//! Rusanov fluxes on a MUSCL reconstruction of the primitive variables,
//! SSP-RK2 in time. Viscous terms are integrated implicitly with a
//! θ-scheme on the velocity, Strang-split around the hyperbolic step.
//! Snapshots of every functional are recorded at a fixed cadence and can
//! be checked against the evolution identities and the two-sided bounds.

use serde::{Deserialize, Serialize};

use crate::blowup_time::BoundCurves;
use crate::error::{Error, Result};
use crate::functionals::{dissipation_rate, snapshot, viscous_virial_term, FunctionalSnapshot};
use crate::gas_state::{pressure, validate_decay, DecayFlag, FlowKind, FlowState, GasModel, Geometry, Grid, Regime};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Limiter {
    /// Unlimited central slopes (positivity still enforced).
    None,
    Minmod,
    /// Monotonized central.
    MonotonizedCentral,
}

impl Limiter {
    fn slope(self, dm: f64, dp: f64) -> f64 {
        match self {
            Limiter::None => 0.5 * (dm + dp),
            Limiter::Minmod => minmod2(dm, dp),
            Limiter::MonotonizedCentral => minmod3(2.0 * dm, 2.0 * dp, 0.5 * (dm + dp)),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "none" => Some(Limiter::None),
            "minmod" => Some(Limiter::Minmod),
            "mc" | "monotonized_central" => Some(Limiter::MonotonizedCentral),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Limiter::None => "none",
            Limiter::Minmod => "minmod",
            Limiter::MonotonizedCentral => "mc",
        }
    }
}

fn minmod2(a: f64, b: f64) -> f64 {
    if a * b <= 0.0 {
        0.0
    } else if a.abs() < b.abs() {
        a
    } else {
        b
    }
}

fn minmod3(a: f64, b: f64, c: f64) -> f64 {
    if a > 0.0 && b > 0.0 && c > 0.0 {
        a.min(b).min(c)
    } else if a < 0.0 && b < 0.0 && c < 0.0 {
        a.max(b).max(c)
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub cfl: f64,
    pub limiter: Limiter,
    /// Implicitness of the viscous step: 0.5 is Crank-Nicolson, 1 backward Euler.
    pub theta: f64,
    pub dt_max: Option<f64>,
    pub max_steps: usize,
    /// Indicator growth over its initial value that flags gradient blow-up onset.
    pub onset_factor: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            cfl: 0.4,
            limiter: Limiter::Minmod,
            theta: 0.5,
            dt_max: None,
            max_steps: 10_000_000,
            onset_factor: 100.0,
        }
    }
}

/// Conserved variables on the cells.
#[derive(Debug, Clone, PartialEq)]
struct Cons {
    rho: Vec<f64>,
    mom: Vec<f64>,
    /// Total energy density, full system only.
    ener: Option<Vec<f64>>,
}

impl Cons {
    fn axpy(&self, a: f64, other: &Cons, b: f64) -> Cons {
        let comb = |x: &[f64], y: &[f64]| -> Vec<f64> { x.iter().zip(y).map(|(p, q)| a * p + b * q).collect() };
        Cons {
            rho: comb(&self.rho, &other.rho),
            mom: comb(&self.mom, &other.mom),
            ener: match (&self.ener, &other.ener) {
                (Some(x), Some(y)) => Some(comb(x, y)),
                _ => None,
            },
        }
    }
}

/// Evolves conserved variables for a fixed model and grid.
#[derive(Debug, Clone)]
pub struct Solver {
    model: GasModel,
    grid: Grid,
    opts: SolverOptions,
    eps: f64,
}

fn check_supported(model: &GasModel, grid: &Grid) -> Result<()> {
    if !matches!(grid.geometry, Geometry::Line1D) {
        return Err(Error::RegimeMismatch("time evolution is implemented on the line only".into()));
    }
    if model.dim != 1 {
        return Err(Error::RegimeMismatch("time evolution needs a one-dimensional model".into()));
    }
    if model.flow == FlowKind::Full && model.is_viscous() {
        return Err(Error::RegimeMismatch(
            "viscous flows are evolved in the isentropic specialization".into(),
        ));
    }
    Ok(())
}

impl Solver {
    pub fn new(model: GasModel, grid: Grid, opts: SolverOptions) -> Result<Self> {
        model.validate()?;
        check_supported(&model, &grid)?;
        if !(opts.cfl > 0.0 && opts.cfl <= 1.0) {
            return Err(Error::InvalidInput("CFL number must lie in (0, 1]".into()));
        }
        if !(opts.theta >= 0.5 && opts.theta <= 1.0) {
            return Err(Error::InvalidInput("viscous theta must lie in [0.5, 1]".into()));
        }
        Ok(Solver { model, grid, opts, eps: 0.0 })
    }

    fn velocity(&self, rho: f64, m: f64) -> f64 {
        if rho > self.eps {
            m / rho
        } else if self.eps > 0.0 {
            m * rho / (self.eps * self.eps)
        } else {
            0.0
        }
    }

    fn to_cons(&self, state: &FlowState) -> Cons {
        let rho = state.rho.clone();
        let mom: Vec<f64> = rho.iter().zip(&state.u).map(|(r, u)| r * u).collect();
        let ener = match self.model.flow {
            FlowKind::Full => {
                let p = pressure(state, &self.model);
                let gm1 = self.model.gamma - 1.0;
                Some(
                    rho.iter()
                        .zip(&state.u)
                        .zip(&p)
                        .map(|((r, u), p)| 0.5 * r * u * u + p / gm1)
                        .collect(),
                )
            }
            FlowKind::Isentropic => None,
        };
        Cons { rho, mom, ener }
    }

    fn pressure_of(&self, rho: f64, m: f64, e: Option<f64>) -> f64 {
        match e {
            Some(e) => {
                let u = self.velocity(rho, m);
                ((self.model.gamma - 1.0) * (e - 0.5 * m * u)).max(0.0)
            }
            None => {
                if rho > 0.0 {
                    rho.powf(self.model.gamma)
                } else {
                    0.0
                }
            }
        }
    }

    fn to_state(&self, c: &Cons, t: f64) -> Result<FlowState> {
        let n = c.rho.len();
        let u: Vec<f64> = (0..n).map(|i| self.velocity(c.rho[i], c.mom[i])).collect();
        let s = c.ener.as_ref().map(|e| {
            let cv = self.model.c_nu();
            (0..n)
                .map(|i| {
                    let p = self.pressure_of(c.rho[i], c.mom[i], Some(e[i]));
                    if c.rho[i] > 0.0 && p > 0.0 {
                        cv * (p.ln() - self.model.gamma * c.rho[i].ln())
                    } else {
                        f64::NEG_INFINITY
                    }
                })
                .collect()
        });
        FlowState::new(self.grid.clone(), c.rho.clone(), u, s, t)
    }

    fn max_speed(&self, c: &Cons) -> f64 {
        let g = self.model.gamma;
        let mut a: f64 = 0.0;
        for i in 0..c.rho.len() {
            let r = c.rho[i];
            if r <= 0.0 {
                continue;
            }
            let p = self.pressure_of(r, c.mom[i], c.ener.as_ref().map(|e| e[i]));
            let u = self.velocity(r, c.mom[i]);
            a = a.max(u.abs() + (g * p / r).sqrt());
        }
        a
    }

    fn stable_dt(&self, c: &Cons) -> f64 {
        let a = self.max_speed(c);
        let dt = if a > 0.0 { self.opts.cfl * self.grid.dx() / a } else { f64::INFINITY };
        match self.opts.dt_max {
            Some(m) => dt.min(m),
            None => dt,
        }
    }

    /// Semi-discrete hyperbolic right-hand side.
    fn rhs(&self, c: &Cons) -> Cons {
        let n = c.rho.len();
        let full = c.ener.is_some();
        let g = self.model.gamma;
        let gm1 = g - 1.0;
        // primitives with two ghost cells per side, zero-gradient
        let idx = |k: usize| -> usize { k.saturating_sub(2).min(n - 1) };
        let ext = n + 4;
        let mut pr = vec![0.0; ext];
        let mut pu = vec![0.0; ext];
        let mut pp = vec![0.0; ext];
        for k in 0..ext {
            let i = idx(k);
            pr[k] = c.rho[i];
            pu[k] = self.velocity(c.rho[i], c.mom[i]);
            pp[k] = self.pressure_of(c.rho[i], c.mom[i], c.ener.as_ref().map(|e| e[i]));
        }
        let slopes = |q: &[f64], positive: bool| -> Vec<f64> {
            let mut s = vec![0.0; ext];
            for k in 1..ext - 1 {
                let mut v = self.opts.limiter.slope(q[k] - q[k - 1], q[k + 1] - q[k]);
                if positive {
                    v = v.clamp(-2.0 * q[k], 2.0 * q[k]);
                }
                s[k] = v;
            }
            s
        };
        let sr = slopes(&pr, true);
        let su = slopes(&pu, false);
        let sp = if full { slopes(&pp, true) } else { vec![0.0; ext] };

        // face k + 1/2 between extended cells k and k + 1, k = 1..=n + 1
        let mut fr = vec![0.0; n + 1];
        let mut fm = vec![0.0; n + 1];
        let mut fe = vec![0.0; n + 1];
        let state = |r: f64, u: f64, p: f64| -> (f64, f64, f64, f64) {
            // (rho, m, E, wave speed)
            let p = if full { p } else if r > 0.0 { r.powf(g) } else { 0.0 };
            let c = if r > 0.0 { (g * p / r).sqrt() } else { 0.0 };
            (r, r * u, 0.5 * r * u * u + p / gm1, u.abs() + c)
        };
        for (j, k) in (1..=n + 1).enumerate() {
            let rl = pr[k] + 0.5 * sr[k];
            let ul = pu[k] + 0.5 * su[k];
            let pl = pp[k] + 0.5 * sp[k];
            let rr = pr[k + 1] - 0.5 * sr[k + 1];
            let ur = pu[k + 1] - 0.5 * su[k + 1];
            let prr = pp[k + 1] - 0.5 * sp[k + 1];
            let (r0, m0, e0, a0) = state(rl, ul, pl);
            let (r1, m1, e1, a1) = state(rr, ur, prr);
            let p0 = if full { pl } else if rl > 0.0 { rl.powf(g) } else { 0.0 };
            let p1 = if full { prr } else if rr > 0.0 { rr.powf(g) } else { 0.0 };
            let a = a0.max(a1);
            fr[j] = 0.5 * (m0 + m1) - 0.5 * a * (r1 - r0);
            fm[j] = 0.5 * (m0 * ul + p0 + m1 * ur + p1) - 0.5 * a * (m1 - m0);
            if full {
                fe[j] = 0.5 * ((e0 + p0) * ul + (e1 + p1) * ur) - 0.5 * a * (e1 - e0);
            }
        }
        let dx = self.grid.dx();
        let div = |f: &[f64]| -> Vec<f64> { (0..n).map(|i| -(f[i + 1] - f[i]) / dx).collect() };
        Cons { rho: div(&fr), mom: div(&fm), ener: if full { Some(div(&fe)) } else { None } }
    }

    fn viscous_coefficient(&self, rho: &[f64]) -> Option<Vec<f64>> {
        let n = rho.len();
        match self.model.regime {
            Regime::Euler => None,
            Regime::ConstantViscosity { mu, lambda, .. } => {
                let mut k = vec![2.0 * mu + lambda; n + 1];
                k[0] = 0.0;
                k[n] = 0.0;
                Some(k)
            }
            Regime::Degenerate { alpha } => {
                let h: Vec<f64> = rho.iter().map(|&r| if r > 0.0 { alpha * r.powf(alpha) } else { 0.0 }).collect();
                let mut k = vec![0.0; n + 1];
                for j in 1..n {
                    let (a, b) = (h[j - 1], h[j]);
                    k[j] = if a > 0.0 && b > 0.0 { 2.0 * a * b / (a + b) } else { 0.0 };
                }
                Some(k)
            }
        }
    }

    /// `rho du/dt = d/dx(k du/dx)` over `dt` with the θ-scheme; density fixed.
    fn viscous_step(&self, c: &mut Cons, dt: f64) {
        let Some(k) = self.viscous_coefficient(&c.rho) else {
            return;
        };
        let n = c.rho.len();
        let dx2 = self.grid.dx().powi(2);
        let th = self.opts.theta;
        let u: Vec<f64> = (0..n).map(|i| self.velocity(c.rho[i], c.mom[i])).collect();
        let mut lower = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut upper = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        for i in 0..n {
            let (kl, kr) = (k[i], k[i + 1]);
            let ul = if i > 0 { u[i - 1] } else { u[i] };
            let ur = if i + 1 < n { u[i + 1] } else { u[i] };
            let lu = (kr * (ur - u[i]) - kl * (u[i] - ul)) / dx2;
            let r = c.rho[i].max(0.0);
            lower[i] = -th * dt * kl / dx2;
            upper[i] = -th * dt * kr / dx2;
            diag[i] = r + th * dt * (kl + kr) / dx2;
            rhs[i] = r * u[i] + (1.0 - th) * dt * lu;
        }
        let v = solve_tridiagonal(&lower, &diag, &upper, &rhs);
        for ((m, &r), &vi) in c.mom.iter_mut().zip(&c.rho).zip(&v) {
            if r > 0.0 && vi.is_finite() {
                *m = r * vi;
            }
        }
    }

    fn refresh_eps(&mut self, c: &Cons) {
        // viscosity keeps the velocity regular at low density
        if self.model.is_viscous() {
            self.eps = 0.0;
            return;
        }
        let rmax = c.rho.iter().cloned().fold(0.0, f64::max);
        self.eps = 1e-14 * rmax;
    }

    /// One Strang-split step: half viscous, SSP-RK2, half viscous.
    fn advance(&mut self, c: &Cons, dt: f64) -> Cons {
        self.refresh_eps(c);
        let mut u0 = c.clone();
        if self.model.is_viscous() {
            self.viscous_step(&mut u0, 0.5 * dt);
        }
        let l0 = self.rhs(&u0);
        let u1 = u0.axpy(1.0, &l0, dt);
        let l1 = self.rhs(&u1);
        let mut u2 = u0.axpy(0.5, &u1.axpy(1.0, &l1, dt), 0.5);
        if self.model.is_viscous() {
            self.viscous_step(&mut u2, 0.5 * dt);
        }
        u2
    }
}

fn solve_tridiagonal(a: &[f64], b: &[f64], c: &[f64], d: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut cp = vec![0.0; n];
    let mut dp = vec![0.0; n];
    let guard = |x: f64| if x.abs() < 1e-300 { 1e-300 } else { x };
    let mut m = guard(b[0]);
    cp[0] = c[0] / m;
    dp[0] = d[0] / m;
    for i in 1..n {
        m = guard(b[i] - a[i] * cp[i - 1]);
        cp[i] = c[i] / m;
        dp[i] = (d[i] - a[i] * dp[i - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = dp[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = dp[i] - cp[i] * x[i + 1];
    }
    x
}

fn check_cons(c: &Cons) -> Result<()> {
    for (i, &r) in c.rho.iter().enumerate() {
        if !r.is_finite() || r < 0.0 {
            return Err(Error::Numerical(format!("density {r} at cell {i}")));
        }
    }
    if let Some(i) = c.mom.iter().position(|m| !m.is_finite()) {
        return Err(Error::Numerical(format!("non-finite momentum at cell {i}")));
    }
    if let Some(e) = &c.ener {
        if let Some(i) = e.iter().position(|v| !v.is_finite()) {
            return Err(Error::Numerical(format!("non-finite energy at cell {i}")));
        }
    }
    Ok(())
}

/// Largest step the default options allow for `state`.
pub fn stable_dt(state: &FlowState, model: &GasModel, cfl: f64) -> Result<f64> {
    let solver = Solver::new(*model, state.grid.clone(), SolverOptions { cfl, ..Default::default() })?;
    Ok(solver.stable_dt(&solver.to_cons(state)))
}

/// Advances `state` by `dt` (negative steps run the scheme backwards).
pub fn step(state: &FlowState, model: &GasModel, dt: f64) -> Result<FlowState> {
    step_with(state, model, dt, &SolverOptions::default())
}

pub fn step_with(state: &FlowState, model: &GasModel, dt: f64, opts: &SolverOptions) -> Result<FlowState> {
    let mut solver = Solver::new(*model, state.grid.clone(), *opts)?;
    let c = solver.to_cons(state);
    let limit = solver.stable_dt(&c);
    if dt.abs() > limit * (1.0 + 1e-12) {
        return Err(Error::InvalidInput(format!("dt = {dt} exceeds the CFL limit {limit}")));
    }
    let next = solver.advance(&c, dt);
    check_cons(&next)?;
    solver.to_state(&next, state.t + dt)
}

/// `max |du/dx| + |drho/dx| / rho_ref` over cells with `rho >= 1e-6 rho_ref`,
/// `rho_ref = max rho`.
pub fn blowup_indicator(state: &FlowState) -> f64 {
    let rho_ref = state.max_density();
    if rho_ref <= 0.0 {
        return 0.0;
    }
    let du = state.grid.derivative(&state.u);
    let dr = state.grid.derivative(&state.rho);
    state
        .rho
        .iter()
        .enumerate()
        .filter(|(_, &r)| r >= 1e-6 * rho_ref)
        .map(|(i, _)| du[i].abs() + dr[i].abs() / rho_ref)
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateDigest {
    pub max_rho: f64,
    pub min_rho: f64,
    pub max_abs_u: f64,
}

impl StateDigest {
    fn of(state: &FlowState) -> Self {
        StateDigest {
            max_rho: state.max_density(),
            min_rho: state.rho.iter().cloned().fold(f64::INFINITY, f64::min),
            max_abs_u: state.u.iter().map(|u| u.abs()).fold(0.0, f64::max),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesEntry {
    pub t: f64,
    pub digest: StateDigest,
    pub snapshot: FunctionalSnapshot,
    pub indicator: f64,
    /// `d(IE)/dt` predicted by the dissipation quadratic form.
    pub dissipation: f64,
    /// Constant-viscosity stress contribution to `dF/dt` on the truncated domain.
    pub viscous_virial: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RunStatus {
    Completed,
    /// Stopped early; the series holds everything up to `t`.
    Terminated { t: f64, reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeInfo {
    pub cells: usize,
    pub dx: f64,
    pub cfl: f64,
    pub flux: String,
    pub limiter: Limiter,
    pub theta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub model: GasModel,
    pub scheme: SchemeInfo,
    pub entries: Vec<SeriesEntry>,
    /// `(t, indicator, min rho)` after every step.
    pub indicator_trace: Vec<(f64, f64, f64)>,
    /// First time the indicator exceeded `onset_factor` times its initial value.
    pub onset_time: Option<f64>,
    pub status: RunStatus,
    pub steps: usize,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub final_state: Option<FlowState>,
}

impl TimeSeries {
    pub fn times(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.t).collect()
    }

    pub fn peak_indicator(&self) -> f64 {
        self.indicator_trace.iter().map(|x| x.1).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunOptions {
    pub t_end: f64,
    pub snapshot_every: f64,
    pub solver: SolverOptions,
}

impl RunOptions {
    pub fn new(t_end: f64, snapshot_every: f64) -> Self {
        RunOptions { t_end, snapshot_every, solver: SolverOptions::default() }
    }
}

pub fn run(data: &FlowState, model: &GasModel, t_end: f64, snapshot_every: f64) -> Result<TimeSeries> {
    run_with(data, model, &RunOptions::new(t_end, snapshot_every))
}

fn entry(state: &FlowState, model: &GasModel) -> Result<SeriesEntry> {
    Ok(SeriesEntry {
        t: state.t,
        digest: StateDigest::of(state),
        snapshot: snapshot(state, model)?,
        indicator: blowup_indicator(state),
        dissipation: dissipation_rate(state, model),
        viscous_virial: viscous_virial_term(state, model),
    })
}

/// Evolves `data` to `opts.t_end`, recording snapshots at every multiple
/// of `opts.snapshot_every`. Numerical failures end the run early with a
/// [`RunStatus::Terminated`] status.
pub fn run_with(data: &FlowState, model: &GasModel, opts: &RunOptions) -> Result<TimeSeries> {
    if !(opts.t_end >= 0.0 && opts.t_end.is_finite()) {
        return Err(Error::InvalidInput("t_end must be finite and >= 0".into()));
    }
    if !(opts.snapshot_every > 0.0) {
        return Err(Error::InvalidInput("snapshot interval must be positive".into()));
    }
    let mut solver = Solver::new(*model, data.grid.clone(), opts.solver)?;
    let mut warnings = Vec::new();
    let decay = validate_decay(data, model);
    for c in decay.conditions.iter().filter(|c| c.flag == DecayFlag::Violated) {
        warnings.push(format!("initial {} decays slower than |x|^-{}", c.name, c.required_exponent));
    }

    let first = entry(data, model)?;
    let ind0 = first.indicator;
    let threshold = opts.solver.onset_factor * ind0.max(1e-12);
    let mut series = TimeSeries {
        model: *model,
        scheme: SchemeInfo {
            cells: data.grid.cells,
            dx: data.grid.dx(),
            cfl: opts.solver.cfl,
            flux: "rusanov".into(),
            limiter: opts.solver.limiter,
            theta: opts.solver.theta,
        },
        entries: vec![first],
        indicator_trace: vec![(0.0, ind0, StateDigest::of(data).min_rho)],
        onset_time: None,
        status: RunStatus::Completed,
        steps: 0,
        warnings,
        final_state: Some(data.clone()),
    };

    let mut c = solver.to_cons(data);
    let mut t = data.t;
    let t_end = data.t + opts.t_end;
    let mut k = 1usize;
    while t < t_end {
        let next_snap = (data.t + k as f64 * opts.snapshot_every).min(t_end);
        let mut dt = solver.stable_dt(&c);
        if !(dt > 0.0 && dt.is_finite()) {
            dt = next_snap - t;
        }
        let land = t + dt >= next_snap * (1.0 - 1e-14) || next_snap - (t + dt) < 1e-12 * dt;
        if land {
            dt = next_snap - t;
        }
        let next = solver.advance(&c, dt);
        if let Err(e) = check_cons(&next) {
            series.status = RunStatus::Terminated { t, reason: e.to_string() };
            break;
        }
        c = next;
        t = if land { next_snap } else { t + dt };
        series.steps += 1;
        let state = solver.to_state(&c, t)?;
        let ind = blowup_indicator(&state);
        series.indicator_trace.push((t, ind, StateDigest::of(&state).min_rho));
        if series.onset_time.is_none() && ind > threshold {
            series.onset_time = Some(t);
        }
        if land {
            match entry(&state, model) {
                Ok(e) => series.entries.push(e),
                Err(e) => {
                    series.status = RunStatus::Terminated { t, reason: e.to_string() };
                    break;
                }
            }
            k += 1;
        }
        series.final_state = Some(state);
        if series.steps >= opts.solver.max_steps {
            series.status = RunStatus::Terminated { t, reason: "step limit reached".into() };
            break;
        }
    }
    Ok(series)
}

/// Gradient blow-up onset seen on two grids, the finer one (half the cell
/// width) flagging it no later than the coarse one and reaching a peak
/// indicator at least 1.5 times higher, as a jump resolved over one or two
/// cells does.
pub fn onset_persists(coarse: &TimeSeries, fine: &TimeSeries) -> bool {
    match (coarse.onset_time, fine.onset_time) {
        (Some(a), Some(b)) => b <= a * 1.05 && fine.peak_indicator() >= 1.5 * coarse.peak_indicator(),
        _ => false,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityResidual {
    pub name: String,
    /// Maximum residual over interior snapshot times.
    pub max: f64,
    pub at_time: f64,
    pub scale: f64,
    pub trace: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub residuals: Vec<IdentityResidual>,
    /// First time the `dF/dt` residual exceeds ten times its initial value.
    pub moment_growth_time: Option<f64>,
}

impl IdentityReport {
    pub fn get(&self, name: &str) -> Option<&IdentityResidual> {
        self.residuals.iter().find(|r| r.name == name)
    }

    pub fn max(&self, name: &str) -> Option<f64> {
        self.get(name).map(|r| r.max)
    }
}

/// Three-point derivative at interior sample `i` on a possibly uneven grid.
fn central_derivative(t: &[f64], y: &[f64], i: usize) -> f64 {
    let (h0, h1) = (t[i] - t[i - 1], t[i + 1] - t[i]);
    (-h1 / (h0 * (h0 + h1))) * y[i - 1] + ((h1 - h0) / (h0 * h1)) * y[i] + (h0 / (h1 * (h0 + h1))) * y[i + 1]
}

/// Time derivatives of the snapshot traces compared with the evolution
/// identities: `M`, `P` conserved, `dG/dt = F`, `dF/dt = H` (`IH`, `DIH`),
/// `E` conserved without viscosity and `d(IE)/dt` equal to minus the
/// dissipation with it.
pub fn verify_identities(series: &TimeSeries, model: &GasModel) -> Result<IdentityReport> {
    let e = &series.entries;
    if e.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "insufficient snapshots: need at least 3, got {}",
            e.len()
        )));
    }
    let t: Vec<f64> = e.iter().map(|x| x.t).collect();
    let col = |f: &dyn Fn(&SeriesEntry) -> f64| -> Vec<f64> { e.iter().map(f).collect() };
    let s0 = &e[0].snapshot;
    let max_abs = |v: &[f64]| v.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let nonzero = |s: f64, fallback: f64| if s > 0.0 { s } else { fallback };

    let m = col(&|x| x.snapshot.m);
    let p = col(&|x| x.snapshot.p);
    let g = col(&|x| x.snapshot.g);
    let f = col(&|x| x.snapshot.f);
    let rate = col(&|x| x.snapshot.virial_rate(model));
    let energy = col(&|x| x.snapshot.energy(model.flow));
    let ie = col(&|x| x.snapshot.ie);
    let diss = col(&|x| x.dissipation);
    let visc = col(&|x| x.viscous_virial);

    let mut residuals = Vec::new();
    let mut push = |name: &str, scale: f64, r: &dyn Fn(usize) -> f64| {
        let trace: Vec<(f64, f64)> = (1..t.len() - 1).map(|i| (t[i], r(i).abs() / scale)).collect();
        let (at_time, max) = trace.iter().cloned().fold((t[1], 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        residuals.push(IdentityResidual { name: name.into(), max, at_time, scale, trace });
    };

    let m0 = nonzero(s0.m, 1.0);
    push("mass", m0, &|i| central_derivative(&t, &m, i));
    let p_scale = nonzero((2.0 * s0.m * s0.ie).sqrt(), 1.0);
    push("momentum", p_scale, &|i| central_derivative(&t, &p, i));
    push("virial", nonzero(max_abs(&f), 1.0), &|i| central_derivative(&t, &g, i) - f[i]);
    push("moment", nonzero(max_abs(&rate), 1.0), &|i| central_derivative(&t, &f, i) - rate[i]);
    if model.is_viscous() {
        push("dissipation", nonzero(max_abs(&diss), 1.0), &|i| central_derivative(&t, &ie, i) - diss[i]);
        if matches!(model.regime, Regime::ConstantViscosity { .. }) {
            push("viscous_boundary", nonzero(max_abs(&rate), 1.0), &|i| visc[i]);
            push("moment_with_boundary", nonzero(max_abs(&rate), 1.0), &|i| {
                central_derivative(&t, &f, i) - rate[i] - visc[i]
            });
        }
    } else {
        push("energy", nonzero(energy[0].abs(), 1.0), &|i| central_derivative(&t, &energy, i));
    }

    let moment_growth_time = residuals.iter().find(|r| r.name == "moment").and_then(|r| {
        let base = r.trace.first().map(|x| x.1).unwrap_or(0.0).max(1e-14);
        r.trace.iter().find(|x| x.1 > 10.0 * base).map(|x| x.0)
    });
    Ok(IdentityReport { residuals, moment_growth_time })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundMargin {
    pub name: String,
    /// Largest normalized violation; `<= 0` when the bound held throughout.
    pub worst: f64,
    pub at_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub margins: Vec<BoundMargin>,
}

impl BoundsReport {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.margins.iter().find(|m| m.name == name).map(|m| m.worst)
    }

    pub fn all_satisfied(&self) -> bool {
        self.margins.iter().all(|m| m.worst <= 0.0)
    }
}

/// Cauchy-Schwarz slack: relative and absolute.
pub const CS_REL_TOL: f64 = 1e-10;
pub const CS_ABS_TOL: f64 = 1e-14;

fn normalized(lhs: f64, rhs: f64) -> f64 {
    let scale = lhs.abs().max(rhs.abs());
    if scale == 0.0 {
        0.0
    } else {
        (lhs - rhs) / scale
    }
}

/// Worst margins of the two-sided bounds along a run; each margin is
/// `(lhs - rhs) / max(|lhs|, |rhs|)` for a bound `lhs <= rhs`.
pub fn verify_bounds(series: &TimeSeries, curves: &BoundCurves) -> BoundsReport {
    let flow = series.model.flow;
    let n = series.model.dim as f64;
    let g = series.model.gamma;
    let k = n * (g - 1.0) / 2.0;
    let c3 = curves.lower_coeff;
    let s0 = series.entries[0].snapshot;
    let j0 = s0.virial_energy(flow);
    let low = g <= 1.0 + 2.0 / n;

    let mut acc: Vec<BoundMargin> = Vec::new();
    let mut record = |name: &str, t: f64, margin: f64| match acc.iter_mut().find(|m| m.name == name) {
        Some(m) => {
            if margin > m.worst {
                m.worst = margin;
                m.at_time = t;
            }
        }
        None => acc.push(BoundMargin { name: name.into(), worst: margin, at_time: t }),
    };

    for e in &series.entries {
        let s = &e.snapshot;
        let t = e.t;
        let cs_rhs = 4.0 * s.g * s.e_k * (1.0 + CS_REL_TOL) + CS_ABS_TOL;
        record("cauchy_schwarz", t, normalized(s.f * s.f, cs_rhs));
        let (gl, gu) = curves.g_bounds(t);
        record("g_lower", t, normalized(gl, s.g));
        record("g_upper", t, normalized(s.g, gu));
        let (fl, fu) = curves.f_bounds(t);
        record("f_lower", t, normalized(fl, s.f));
        record("f_upper", t, normalized(s.f, fu));
        let pot = s.potential(flow);
        record("potential_lower", t, normalized(c3 / s.g.powf(k), pot));
        record("envelope_lower", t, normalized(curves.lower(t), pot));
        record("envelope_upper", t, normalized(pot, curves.upper(t)));
        let jt = s.virial_energy(flow);
        record("virial_energy_decay", t, normalized(pot, jt / (t + 1.0).powi(2)));
        let cap = if low { j0 * (t + 1.0).powf(2.0 - n * (g - 1.0)) } else { j0 };
        record("virial_energy_growth", t, normalized(jt, cap));
    }
    BoundsReport { margins: acc }
}

/// Largest `dJ/dt` (or `dIJ/dt`) over interior snapshots.
pub fn max_virial_energy_rate(series: &TimeSeries) -> Result<f64> {
    let e = &series.entries;
    if e.len() < 3 {
        return Err(Error::InsufficientData("need at least 3 snapshots".into()));
    }
    let t: Vec<f64> = e.iter().map(|x| x.t).collect();
    let j: Vec<f64> = e.iter().map(|x| x.snapshot.virial_energy(series.model.flow)).collect();
    Ok((1..t.len() - 1).map(|i| central_derivative(&t, &j, i)).fold(f64::NEG_INFINITY, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gas_state::{build_initial_data, ProfileSpec};

    fn gaussian(model: &GasModel, cells: usize) -> FlowState {
        let grid = Grid::line(10.0, cells).unwrap();
        build_initial_data(&ProfileSpec::gaussian(1.0, 1.0), &grid, model).unwrap()
    }

    #[test]
    fn constant_state_is_fixed() {
        let model = GasModel::isentropic(1.4, 1).unwrap();
        let grid = Grid::line(1.0, 64).unwrap();
        let st = FlowState::new(grid, vec![1.0; 64], vec![0.0; 64], None, 0.0).unwrap();
        let next = step(&st, &model, 0.01).unwrap();
        assert!(next.rho.iter().all(|r| (r - 1.0).abs() < 1e-15));
        assert!(next.u.iter().all(|u| u.abs() < 1e-15));
        assert_eq!(blowup_indicator(&next), 0.0);
    }

    #[test]
    fn cfl_violation_rejected() {
        let model = GasModel::isentropic(2.0, 1).unwrap();
        let st = gaussian(&model, 64);
        assert!(matches!(step(&st, &model, 10.0), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn radial_and_full_viscous_rejected() {
        let model = GasModel::isentropic(1.5, 2).unwrap();
        let grid = Grid::radial(2, 5.0, 64).unwrap();
        let st = build_initial_data(&ProfileSpec::gaussian(1.0, 1.0), &grid, &model).unwrap();
        assert!(matches!(run(&st, &model, 0.1, 0.05), Err(Error::RegimeMismatch(_))));
        let full = GasModel::full(1.4, 1)
            .unwrap()
            .with_regime(Regime::ConstantViscosity { mu: 0.1, lambda: 0.0, kappa: 0.0 })
            .unwrap();
        let st = build_initial_data(&ProfileSpec::gaussian(1.0, 1.0), &Grid::line(5.0, 64).unwrap(), &full).unwrap();
        assert!(matches!(run(&st, &full, 0.1, 0.05), Err(Error::RegimeMismatch(_))));
    }

    #[test]
    fn zero_time_run_has_one_snapshot() {
        let model = GasModel::isentropic(2.0, 1).unwrap();
        let s = run(&gaussian(&model, 128), &model, 0.0, 0.1).unwrap();
        assert_eq!(s.entries.len(), 1);
        assert!(matches!(
            verify_identities(&s, &model),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn snapshots_land_on_cadence() {
        let model = GasModel::isentropic(2.0, 1).unwrap();
        let s = run(&gaussian(&model, 128), &model, 0.3, 0.1).unwrap();
        let t = s.times();
        assert_eq!(t.len(), 4);
        for (i, ti) in t.iter().enumerate() {
            assert!((ti - 0.1 * i as f64).abs() < 1e-14, "{t:?}");
        }
        assert_eq!(s.status, RunStatus::Completed);
    }

    #[test]
    fn limiters() {
        assert_eq!(minmod2(1.0, 2.0), 1.0);
        assert_eq!(minmod2(-1.0, 2.0), 0.0);
        assert_eq!(Limiter::MonotonizedCentral.slope(1.0, 1.0), 1.0);
        assert_eq!(Limiter::MonotonizedCentral.slope(0.1, 1.0), 0.2);
        assert_eq!(Limiter::parse("mc"), Some(Limiter::MonotonizedCentral));
    }

    #[test]
    fn tridiagonal_solve() {
        let x = solve_tridiagonal(&[0.0, -1.0, -1.0], &[2.0, 2.0, 2.0], &[-1.0, -1.0, 0.0], &[1.0, 0.0, 1.0]);
        for v in x {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn central_derivative_is_exact_on_quadratics() {
        let t = [0.0, 0.1, 0.25];
        let y: Vec<f64> = t.iter().map(|x| 3.0 * x * x + x).collect();
        assert!((central_derivative(&t, &y, 1) - (6.0 * 0.1 + 1.0)).abs() < 1e-12);
    }
}
