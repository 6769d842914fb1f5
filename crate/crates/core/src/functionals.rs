//! Integral quantities of a flow state.
//!
//! With `rho` the density, `u` the velocity and `p` the pressure:
//!
//! | symbol | definition |
//! |--------|------------|
//! | `M`   | `∫ rho` |
//! | `P`   | `∫ rho u` |
//! | `F`   | `∫ rho u·x` |
//! | `G`   | `½ ∫ rho |x|²` |
//! | `E_k` | `½ ∫ rho |u|²` |
//! | `E_i` | `∫ p / (gamma - 1)` |
//! | `I`   | `∫ rho^gamma / (gamma - 1)` |
//! | `E`, `IE` | `E_k + E_i`, `E_k + I` |
//! | `H`, `IH` | `2 E_k + n (gamma - 1) E_i`, same with `I` |
//! | `J`, `IJ` | `G - (t + 1) F + (t + 1)² E`, same with `IE` |
//! | `DIH` | `IH - [1 + n (alpha - 1)] ∫ rho^alpha div u` |
//!
//! In radial geometry the momentum vanishes by symmetry and `u·x = u_r r`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gas_state::{pressure, unit_ball_volume, FlowKind, FlowState, GasModel, Geometry, Grid, Regime};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionalSnapshot {
    pub t: f64,
    pub m: f64,
    pub p: f64,
    pub f: f64,
    pub g: f64,
    pub e_k: f64,
    /// Internal energy; equal to `i` for isentropic models.
    pub e_i: f64,
    pub i: f64,
    pub e: f64,
    pub ie: f64,
    pub h: f64,
    pub ih: f64,
    /// Only for degenerate viscosity.
    pub dih: Option<f64>,
    pub j: f64,
    pub ij: f64,
}

impl FunctionalSnapshot {
    /// `E_i` for the full system, `I` for the isentropic one.
    pub fn potential(&self, flow: FlowKind) -> f64 {
        match flow {
            FlowKind::Full => self.e_i,
            FlowKind::Isentropic => self.i,
        }
    }

    /// `E` or `IE`.
    pub fn energy(&self, flow: FlowKind) -> f64 {
        match flow {
            FlowKind::Full => self.e,
            FlowKind::Isentropic => self.ie,
        }
    }

    /// `J` or `IJ`.
    pub fn virial_energy(&self, flow: FlowKind) -> f64 {
        match flow {
            FlowKind::Full => self.j,
            FlowKind::Isentropic => self.ij,
        }
    }

    /// Right-hand side of `dF/dt`: `DIH` under degenerate viscosity,
    /// otherwise `H` or `IH`.
    pub fn virial_rate(&self, model: &GasModel) -> f64 {
        match (self.dih, model.flow) {
            (Some(d), _) => d,
            (None, FlowKind::Full) => self.h,
            (None, FlowKind::Isentropic) => self.ih,
        }
    }
}

fn finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow { integrand: name.to_string() })
    }
}

/// `x` on a line, `r` in radial geometry; `u·x` reduces to `u x` in both.
fn position(grid: &Grid) -> &[f64] {
    grid.centers()
}

/// Evaluates every integral quantity of `state` at time `state.t`.
pub fn snapshot(state: &FlowState, model: &GasModel) -> Result<FunctionalSnapshot> {
    let grid = &state.grid;
    if grid.dim() != model.dim {
        return Err(Error::RegimeMismatch(format!(
            "grid dimension {} differs from model dimension {}",
            grid.dim(),
            model.dim
        )));
    }
    if model.flow == FlowKind::Full && state.s.is_none() {
        return Err(Error::RegimeMismatch("full model needs an entropy field".into()));
    }
    let n = model.dim as f64;
    let gm1 = model.gamma - 1.0;
    let x = position(grid);
    let rho = &state.rho;
    let u = &state.u;

    let m = finite("rho", grid.integrate(rho))?;
    let p = match grid.geometry {
        Geometry::Line1D => finite("rho u", grid.integrate_with(|i, _| rho[i] * u[i]))?,
        Geometry::RadialND { .. } => 0.0,
    };
    let f = finite("rho u.x", grid.integrate_with(|i, _| rho[i] * u[i] * x[i]))?;
    let g = finite("rho |x|^2 / 2", 0.5 * grid.integrate_with(|i, xi| rho[i] * xi * xi))?;
    let e_k = finite("rho |u|^2 / 2", 0.5 * grid.integrate_with(|i, _| rho[i] * u[i] * u[i]))?;
    let i_pot = finite(
        "rho^gamma / (gamma - 1)",
        grid.integrate_with(|i, _| if rho[i] > 0.0 { rho[i].powf(model.gamma) } else { 0.0 }) / gm1,
    )?;
    let e_i = match model.flow {
        FlowKind::Full => finite("p / (gamma - 1)", grid.integrate(&pressure(state, model)) / gm1)?,
        FlowKind::Isentropic => i_pot,
    };
    let e = e_k + e_i;
    let ie = e_k + i_pot;
    let h = 2.0 * e_k + n * gm1 * e_i;
    let ih = 2.0 * e_k + n * gm1 * i_pot;
    let dih = match model.regime {
        Regime::Degenerate { alpha } => Some(finite("rho^alpha div u", ih - degenerate_virial_term(state, alpha))?),
        _ => None,
    };
    let tp1 = state.t + 1.0;
    let j = g - tp1 * f + tp1 * tp1 * e;
    let ij = g - tp1 * f + tp1 * tp1 * ie;
    Ok(FunctionalSnapshot { t: state.t, m, p, f, g, e_k, e_i, i: i_pot, e, ie, h, ih, dih, j, ij })
}

/// `[1 + n (alpha - 1)] ∫ rho^alpha div u`.
fn degenerate_virial_term(state: &FlowState, alpha: f64) -> f64 {
    let grid = &state.grid;
    let n = grid.dim() as f64;
    let div = grid.divergence(&state.u);
    let rho = &state.rho;
    (1.0 + n * (alpha - 1.0))
        * grid.integrate_with(|i, _| if rho[i] > 0.0 { rho[i].powf(alpha) * div[i] } else { 0.0 })
}

/// `DIH = 2 E_k + n (gamma - 1) I - [1 + n (alpha - 1)] ∫ rho^alpha div u`.
pub fn dih(state: &FlowState, model: &GasModel) -> Result<f64> {
    let Regime::Degenerate { alpha } = model.regime else {
        return Err(Error::RegimeMismatch("DIH needs degenerate viscosity".into()));
    };
    let iso = GasModel { flow: FlowKind::Isentropic, ..*model };
    let s = snapshot(state, &iso)?;
    finite("rho^alpha div u", s.ih - degenerate_virial_term(state, alpha))
}

/// `d(IE)/dt` for the viscous isentropic systems: minus the dissipation
/// quadratic form. Zero for Euler.
pub fn dissipation_rate(state: &FlowState, model: &GasModel) -> f64 {
    let grid = &state.grid;
    let du = grid.derivative(&state.u);
    let div = grid.divergence(&state.u);
    let rho = &state.rho;
    let x = grid.centers();
    // |grad u|^2 for a radial field: u_r'^2 + (n - 1) u_r^2 / r^2
    let grad_sq = |i: usize| -> f64 {
        match grid.geometry {
            Geometry::Line1D => du[i] * du[i],
            Geometry::RadialND { dim } => {
                du[i] * du[i] + (dim - 1) as f64 * (state.u[i] / x[i]).powi(2)
            }
        }
    };
    match model.regime {
        Regime::Euler => 0.0,
        Regime::ConstantViscosity { mu, lambda, .. } => {
            -grid.integrate_with(|i, _| 2.0 * mu * grad_sq(i) + lambda * div[i] * div[i])
        }
        Regime::Degenerate { alpha } => -grid.integrate_with(|i, _| {
            if rho[i] > 0.0 {
                let h = rho[i].powf(alpha);
                h * grad_sq(i) + (alpha - 1.0) * h * div[i] * div[i]
            } else {
                0.0
            }
        }),
    }
}

/// Contribution `-(2 mu + n lambda) ∫ div u` of the constant-viscosity
/// stress to `dF/dt`. It vanishes for decaying fields on the whole space
/// but not on a truncated domain.
pub fn viscous_virial_term(state: &FlowState, model: &GasModel) -> f64 {
    match model.regime {
        Regime::ConstantViscosity { mu, lambda, .. } => {
            let n = model.dim as f64;
            -(2.0 * mu + n * lambda) * state.grid.integrate(&state.grid.divergence(&state.u))
        }
        _ => 0.0,
    }
}

/// Mass bounded through the `L^gamma` norm and the second moment:
/// `‖f‖₁ ≤ C1 ‖f‖_γ^{2γ/D} ‖f‖_{1,|x|²}^{n(γ-1)/D}`, `D = (n + 2) γ - n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheminResult {
    pub n: usize,
    pub gamma: f64,
    pub lhs: f64,
    pub norm_gamma: f64,
    pub weighted: f64,
    pub c1: f64,
    pub rhs: f64,
    /// Minimiser of the split bound `|B_r|^{1-1/γ} ‖f‖_γ + r^{-2} ‖f‖_{1,|x|²}`.
    pub r_opt: f64,
    /// Value of the split bound at `r_opt`; never above `rhs`.
    pub bound_at_r_opt: f64,
    /// Radius balancing the two terms, at which the split bound equals `rhs`.
    pub r_balance: f64,
    pub ratio: f64,
    pub holds: bool,
}

/// `C1 = 2 |B1|^{2(γ-1)/D}`.
pub fn chemin_constant(gamma: f64, n: usize) -> f64 {
    let d = (n as f64 + 2.0) * gamma - n as f64;
    2.0 * unit_ball_volume(n).powf(2.0 * (gamma - 1.0) / d)
}

/// Relative slack allowed for `lhs <= rhs`.
pub const CHEMIN_TOL: f64 = 1e-6;

/// Evaluates the inequality from the three norms of some `f >= 0`.
pub fn chemin_from_norms(lhs: f64, norm_gamma: f64, weighted: f64, gamma: f64, n: usize) -> Result<CheminResult> {
    if !(gamma > 1.0) || n == 0 {
        return Err(Error::InvalidInput("need gamma > 1 and n >= 1".into()));
    }
    if !(lhs.is_finite() && norm_gamma.is_finite() && weighted.is_finite()) {
        return Err(Error::Overflow { integrand: "chemin norms".into() });
    }
    if lhs <= 0.0 || norm_gamma <= 0.0 || weighted <= 0.0 {
        return Err(Error::Degenerate("f vanishes identically".into()));
    }
    let nf = n as f64;
    let d = (nf + 2.0) * gamma - nf;
    let c1 = chemin_constant(gamma, n);
    let rhs = c1 * norm_gamma.powf(2.0 * gamma / d) * weighted.powf(nf * (gamma - 1.0) / d);
    let a = unit_ball_volume(n).powf(1.0 - 1.0 / gamma) * norm_gamma;
    let q = nf * (gamma - 1.0) / gamma;
    let r_balance = (weighted / a).powf(gamma / d);
    let r_opt = (2.0 * weighted / (q * a)).powf(1.0 / (q + 2.0));
    let bound_at_r_opt = split_bound(a, q, weighted, r_opt);
    let ratio = lhs / rhs;
    Ok(CheminResult {
        n,
        gamma,
        lhs,
        norm_gamma,
        weighted,
        c1,
        rhs,
        r_opt,
        bound_at_r_opt,
        r_balance,
        ratio,
        holds: ratio <= 1.0 + CHEMIN_TOL,
    })
}

fn split_bound(a: f64, q: f64, b: f64, r: f64) -> f64 {
    a * r.powf(q) + b / (r * r)
}

impl CheminResult {
    /// The split bound `|B_r|^{1-1/γ} ‖f‖_γ + r^{-2} ‖f‖_{1,|x|²}` at radius `r`.
    pub fn bound_at(&self, r: f64) -> f64 {
        let a = unit_ball_volume(self.n).powf(1.0 - 1.0 / self.gamma) * self.norm_gamma;
        split_bound(a, self.n as f64 * (self.gamma - 1.0) / self.gamma, self.weighted, r)
    }
}

/// Evaluates the inequality for a nonnegative field sampled on `grid`.
pub fn chemin(f: &[f64], grid: &Grid, gamma: f64) -> Result<CheminResult> {
    if f.len() != grid.cells {
        return Err(Error::InvalidInput("field length does not match grid".into()));
    }
    if let Some(i) = f.iter().position(|v| !(*v >= 0.0)) {
        return Err(Error::InvalidInput(format!("negative or NaN sample at cell {i}")));
    }
    if f.iter().all(|&v| v == 0.0) {
        return Err(Error::Degenerate("f vanishes identically".into()));
    }
    let x = grid.centers();
    let lhs = grid.integrate(f);
    let norm_gamma = grid.integrate_with(|i, _| f[i].powf(gamma)).powf(1.0 / gamma);
    let weighted = grid.integrate_with(|i, _| f[i] * x[i] * x[i]);
    chemin_from_norms(lhs, norm_gamma, weighted, gamma, grid.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gas_state::{build_initial_data, ProfileSpec, VelocityProfile};
    use std::f64::consts::PI;

    fn gaussian(model: &GasModel, n: usize) -> FlowState {
        let grid = Grid::line(10.0, n).unwrap();
        build_initial_data(&ProfileSpec::gaussian(1.0, 1.0), &grid, model).unwrap()
    }

    #[test]
    fn gaussian_moments() {
        let model = GasModel::isentropic(2.0, 1).unwrap();
        let s = snapshot(&gaussian(&model, 4096), &model).unwrap();
        assert!((s.m - PI.sqrt()).abs() < 1e-10);
        assert!((s.g - PI.sqrt() / 4.0).abs() < 1e-10);
        assert!((s.i - (PI / 2.0).sqrt()).abs() < 1e-10);
        assert_eq!(s.p, 0.0);
        assert_eq!(s.f, 0.0);
        assert_eq!(s.e_k, 0.0);
        assert_eq!(s.ie, s.i);
        assert!((s.ij - (s.g + s.ie)).abs() < 1e-15);
        assert_eq!(s.h, s.e_i);
        assert_eq!(s.h - s.ih, 0.0);
    }

    #[test]
    fn full_model_internal_energy_follows_entropy() {
        let model = GasModel::full(2.0, 1).unwrap();
        let grid = Grid::line(10.0, 2048).unwrap();
        let profile = ProfileSpec::gaussian(1.0, 1.0)
            .with_entropy(crate::gas_state::EntropyProfile::Constant { value: 1.0 });
        let s = snapshot(&build_initial_data(&profile, &grid, &model).unwrap(), &model).unwrap();
        assert!((s.e_i - std::f64::consts::E * s.i).abs() < 1e-12);
    }

    #[test]
    fn velocity_scaling() {
        let model = GasModel::isentropic(1.4, 1).unwrap();
        let grid = Grid::line(10.0, 512).unwrap();
        let profile = ProfileSpec::gaussian(1.0, 1.0).with_velocity(VelocityProfile::Tanh { amplitude: 0.5 });
        let a = build_initial_data(&profile, &grid, &model).unwrap();
        let mut b = a.clone();
        b.u.iter_mut().for_each(|v| *v *= 3.0);
        let (sa, sb) = (snapshot(&a, &model).unwrap(), snapshot(&b, &model).unwrap());
        assert!((sb.e_k - 9.0 * sa.e_k).abs() < 1e-12 * sb.e_k);
        assert!((sb.f - 3.0 * sa.f).abs() < 1e-12 * sb.f.abs());
        assert_eq!(sa.m, sb.m);
        assert_eq!(sa.g, sb.g);
        assert_eq!(sa.i, sb.i);
    }

    #[test]
    fn zero_velocity_dih() {
        let model = GasModel::isentropic(2.0, 1).unwrap().with_regime(Regime::Degenerate { alpha: 2.0 }).unwrap();
        let st = gaussian(&model, 512);
        let d = dih(&st, &model).unwrap();
        assert_eq!(d, snapshot(&st, &model).unwrap().i);
        assert!(dih(&st, &GasModel::isentropic(2.0, 1).unwrap()).is_err());
    }

    #[test]
    fn euler_has_no_dissipation() {
        let model = GasModel::isentropic(2.0, 1).unwrap();
        let mut st = gaussian(&model, 256);
        st.u = st.grid.centers().iter().map(|x| x.sin()).collect();
        assert_eq!(dissipation_rate(&st, &model), 0.0);
    }

    #[test]
    fn degenerate_dissipation_is_nonpositive() {
        let model = GasModel::isentropic(2.0, 1).unwrap().with_regime(Regime::Degenerate { alpha: 1.5 }).unwrap();
        let mut st = gaussian(&model, 256);
        st.u = st.grid.centers().iter().map(|x| (2.0 * x).cos()).collect();
        assert!(dissipation_rate(&st, &model) < 0.0);
    }

    #[test]
    fn constant_viscosity_dissipation_of_sine() {
        // -(2 mu) ∫_{-pi}^{pi} cos^2 = -2 pi
        let model = GasModel::isentropic(2.0, 1)
            .unwrap()
            .with_regime(Regime::ConstantViscosity { mu: 1.0, lambda: 0.0, kappa: 0.0 })
            .unwrap();
        let n = 1 << 17;
        let grid = Grid::line(PI, n).unwrap();
        let u = grid.centers().iter().map(|x| x.sin()).collect();
        let st = FlowState::new(grid, vec![1.0; n], u, None, 0.0).unwrap();
        assert!((dissipation_rate(&st, &model) + 2.0 * PI).abs() < 1e-8);
    }

    #[test]
    fn radial_dissipation_of_linear_field() {
        // u = x: |grad u|^2 = n, div u = n
        let model = GasModel::isentropic(1.5, 3)
            .unwrap()
            .with_regime(Regime::ConstantViscosity { mu: 1.0, lambda: 0.5, kappa: 0.0 })
            .unwrap();
        let grid = Grid::radial(3, 1.0, 1024).unwrap();
        let u = grid.centers().to_vec();
        let st = FlowState::new(grid, vec![1.0; 1024], u, None, 0.0).unwrap();
        let expect = -(2.0 * 3.0 + 0.5 * 9.0) * unit_ball_volume(3);
        assert!((dissipation_rate(&st, &model) - expect).abs() < 1e-6 * expect.abs() * 1e2);
    }

    #[test]
    fn chemin_constant_values() {
        assert!((chemin_constant(2.0, 1) - 2.0 * 2f64.powf(0.4)).abs() < 1e-14);
        assert!((chemin_constant(2.0, 1) - 2.639_015_821_545_788_6).abs() < 1e-12);
        assert!((chemin_constant(5.0 / 3.0, 3) - 2.861_225_902_226_510_3).abs() < 1e-12);
    }

    #[test]
    fn chemin_gaussian() {
        let grid = Grid::line(10.0, 4096).unwrap();
        let f: Vec<f64> = grid.centers().iter().map(|x| (-x * x).exp()).collect();
        let r = chemin(&f, &grid, 2.0).unwrap();
        assert!((r.lhs - PI.sqrt()).abs() < 1e-10);
        assert!((r.rhs - 2.819_518_558_150_107_5).abs() < 1e-9);
        assert!((r.ratio - 0.628_637_057_834_592_5).abs() < 1e-9);
        assert!(r.holds);
        assert!(r.bound_at_r_opt <= r.rhs);
        assert!((r.bound_at(r.r_balance) - r.rhs).abs() < 1e-12 * r.rhs);
    }

    #[test]
    fn chemin_is_one_homogeneous() {
        let grid = Grid::line(4.0, 512).unwrap();
        let f: Vec<f64> = grid.centers().iter().map(|x| if x.abs() < 0.5 { 1.0 } else { 0.0 }).collect();
        let a = chemin(&f, &grid, 1.7).unwrap();
        let g: Vec<f64> = f.iter().map(|v| 7.5 * v).collect();
        let b = chemin(&g, &grid, 1.7).unwrap();
        assert!((b.lhs / a.lhs - 7.5).abs() < 1e-12);
        assert!((b.rhs / a.rhs - 7.5).abs() < 1e-12);
        assert!((a.ratio - b.ratio).abs() < 1e-12);
    }

    #[test]
    fn chemin_rejects_zero_and_negative() {
        let grid = Grid::line(1.0, 16).unwrap();
        assert!(matches!(chemin(&[0.0; 16], &grid, 2.0), Err(Error::Degenerate(_))));
        let mut f = vec![1.0; 16];
        f[3] = -1.0;
        assert!(matches!(chemin(&f, &grid, 2.0), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn overflow_is_reported() {
        let model = GasModel::isentropic(400.0, 1).unwrap();
        let grid = Grid::line(1.0, 16).unwrap();
        let st = FlowState::new(grid, vec![1e3; 16], vec![0.0; 16], None, 0.0).unwrap();
        assert!(matches!(snapshot(&st, &model), Err(Error::Overflow { .. })));
    }
}
