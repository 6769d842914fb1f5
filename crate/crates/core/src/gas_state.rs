//! Gas model, spatial grid and flow states.
//!
//! The unbounded domain is truncated to `[-L, L]` on a line or to `[0, L]` in
//! radial coordinates for `n >= 2`. Radially symmetric data keeps every
//! functional a weighted one-dimensional sum, so all quadrature in the crate
//! goes through [`Grid::integrate`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Viscosity closure of the momentum equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Regime {
    /// No viscosity, no heat conduction.
    Euler,
    /// Constant Lamé coefficients and heat conductivity.
    ConstantViscosity { mu: f64, lambda: f64, kappa: f64 },
    /// `h(rho) = rho^alpha`, `g(rho) = (alpha - 1) rho^alpha`.
    Degenerate { alpha: f64 },
}

/// Whether the entropy is carried as an independent field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowKind {
    /// Full system: `p = exp(s / c_nu) rho^gamma`.
    Full,
    /// Isentropic system: `p = rho^gamma`.
    Isentropic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GasModel {
    pub gamma: f64,
    pub dim: usize,
    pub regime: Regime,
    pub flow: FlowKind,
    pub gas_constant: f64,
}

impl GasModel {
    pub fn new(gamma: f64, dim: usize, regime: Regime, flow: FlowKind) -> Result<Self> {
        let model = GasModel { gamma, dim, regime, flow, gas_constant: 1.0 };
        model.validate()?;
        Ok(model)
    }

    pub fn isentropic(gamma: f64, dim: usize) -> Result<Self> {
        Self::new(gamma, dim, Regime::Euler, FlowKind::Isentropic)
    }

    pub fn full(gamma: f64, dim: usize) -> Result<Self> {
        Self::new(gamma, dim, Regime::Euler, FlowKind::Full)
    }

    pub fn with_regime(mut self, regime: Regime) -> Result<Self> {
        self.regime = regime;
        self.validate()?;
        Ok(self)
    }

    pub fn with_gas_constant(mut self, r: f64) -> Result<Self> {
        self.gas_constant = r;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma.is_finite() && self.gamma > 1.0) {
            return Err(Error::InvalidInput(format!("gamma > 1 required, got {}", self.gamma)));
        }
        if self.dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        if !(self.gas_constant.is_finite() && self.gas_constant > 0.0) {
            return Err(Error::InvalidInput("gas constant must be positive".into()));
        }
        let n = self.dim as f64;
        match self.regime {
            Regime::Euler => {}
            Regime::ConstantViscosity { mu, lambda, kappa } => {
                if !(mu >= 0.0 && kappa >= 0.0 && 2.0 * mu + n * lambda >= 0.0) {
                    return Err(Error::InvalidInput(
                        "viscosity requires mu >= 0, kappa >= 0, 2 mu + n lambda >= 0".into(),
                    ));
                }
            }
            Regime::Degenerate { alpha } => {
                if !(alpha > 1.0 - 1.0 / n) {
                    return Err(Error::InvalidInput(format!(
                        "degenerate viscosity requires alpha > 1 - 1/n, got {alpha}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Specific heat at constant volume, `R / (gamma - 1)`.
    pub fn c_nu(&self) -> f64 {
        self.gas_constant / (self.gamma - 1.0)
    }

    /// `1 + 2/n`, the threshold separating the two decay branches.
    pub fn critical_gamma(&self) -> f64 {
        1.0 + 2.0 / self.dim as f64
    }

    pub fn alpha(&self) -> Option<f64> {
        match self.regime {
            Regime::Degenerate { alpha } => Some(alpha),
            _ => None,
        }
    }

    pub fn is_viscous(&self) -> bool {
        !matches!(self.regime, Regime::Euler)
    }
}

/// Volume of the unit ball in `R^n`.
pub fn unit_ball_volume(n: usize) -> f64 {
    // V_0 = 1, V_1 = 2, V_n = 2 pi / n * V_{n-2}
    let mut v = if n.is_multiple_of(2) { 1.0 } else { 2.0 };
    let mut k = if n.is_multiple_of(2) { 2 } else { 3 };
    while k <= n {
        v *= 2.0 * std::f64::consts::PI / k as f64;
        k += 2;
    }
    v
}

/// Surface area of the unit sphere `S^{n-1}`.
pub fn unit_sphere_area(n: usize) -> f64 {
    n as f64 * unit_ball_volume(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Geometry {
    Line1D,
    RadialND { dim: usize },
}

/// Uniform cell-centred grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub geometry: Geometry,
    pub half_width: f64,
    pub cells: usize,
    centers: Vec<f64>,
    weights: Vec<f64>,
}

pub const MIN_CELLS: usize = 16;

impl Grid {
    pub fn line(half_width: f64, cells: usize) -> Result<Self> {
        Self::build(Geometry::Line1D, half_width, cells)
    }

    pub fn radial(dim: usize, radius: f64, cells: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidInput("radial grids need dim >= 2".into()));
        }
        Self::build(Geometry::RadialND { dim }, radius, cells)
    }

    /// A line grid for `dim == 1`, a radial grid otherwise.
    pub fn for_dim(dim: usize, half_width: f64, cells: usize) -> Result<Self> {
        if dim == 1 {
            Self::line(half_width, cells)
        } else {
            Self::radial(dim, half_width, cells)
        }
    }

    fn build(geometry: Geometry, half_width: f64, cells: usize) -> Result<Self> {
        if cells < MIN_CELLS {
            return Err(Error::InvalidInput(format!("grid needs at least {MIN_CELLS} cells")));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidInput("grid half width must be positive".into()));
        }
        let (centers, weights) = match geometry {
            Geometry::Line1D => {
                let dx = 2.0 * half_width / cells as f64;
                let c: Vec<f64> =
                    (0..cells).map(|i| -half_width + (i as f64 + 0.5) * dx).collect();
                (c, vec![dx; cells])
            }
            Geometry::RadialND { dim } => {
                let dr = half_width / cells as f64;
                let area = unit_sphere_area(dim);
                let c: Vec<f64> = (0..cells).map(|i| (i as f64 + 0.5) * dr).collect();
                let w = c.iter().map(|r| area * r.powi(dim as i32 - 1) * dr).collect();
                (c, w)
            }
        };
        Ok(Grid { geometry, half_width, cells, centers, weights })
    }

    pub fn dim(&self) -> usize {
        match self.geometry {
            Geometry::Line1D => 1,
            Geometry::RadialND { dim } => dim,
        }
    }

    pub fn dx(&self) -> f64 {
        match self.geometry {
            Geometry::Line1D => 2.0 * self.half_width / self.cells as f64,
            Geometry::RadialND { .. } => self.half_width / self.cells as f64,
        }
    }

    /// Cell centres: `x` on a line, `r` in radial geometry.
    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    /// Volume of each cell, including the `|S^{n-1}| r^{n-1}` factor.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Composite midpoint sum `sum_i w_i f_i`.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        debug_assert_eq!(f.len(), self.cells);
        f.iter().zip(&self.weights).map(|(a, w)| a * w).sum()
    }

    pub fn integrate_with(&self, f: impl Fn(usize, f64) -> f64) -> f64 {
        self.centers.iter().zip(&self.weights).enumerate().map(|(i, (&x, w))| f(i, x) * w).sum()
    }

    /// Second-order central differences, one-sided second-order at the ends.
    pub fn derivative(&self, f: &[f64]) -> Vec<f64> {
        let n = f.len();
        let h = self.dx();
        let mut d = vec![0.0; n];
        for i in 1..n - 1 {
            d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
        }
        d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
        d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
        d
    }

    /// `div u` for a scalar (1D) or radial velocity field.
    pub fn divergence(&self, u: &[f64]) -> Vec<f64> {
        let mut d = self.derivative(u);
        if let Geometry::RadialND { dim } = self.geometry {
            let k = (dim - 1) as f64;
            for (di, (ui, r)) in d.iter_mut().zip(u.iter().zip(&self.centers)) {
                *di += k * ui / r;
            }
        }
        d
    }
}

/// Density, velocity and (for the full system) entropy on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowState {
    pub grid: Grid,
    pub rho: Vec<f64>,
    pub u: Vec<f64>,
    pub s: Option<Vec<f64>>,
    pub t: f64,
}

impl FlowState {
    pub fn new(grid: Grid, rho: Vec<f64>, u: Vec<f64>, s: Option<Vec<f64>>, t: f64) -> Result<Self> {
        let n = grid.cells;
        if rho.len() != n || u.len() != n || s.as_ref().is_some_and(|s| s.len() != n) {
            return Err(Error::InvalidInput("field length does not match grid".into()));
        }
        for (i, &r) in rho.iter().enumerate() {
            if !r.is_finite() {
                return Err(Error::InvalidInput(format!("non-finite density at cell {i}")));
            }
            if r < 0.0 {
                return Err(Error::InvalidInput(format!("negative density {r} at cell {i}")));
            }
        }
        if let Some(i) = u.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite velocity at cell {i}")));
        }
        if let Some(s) = &s {
            // -inf marks cells with zero pressure
            if let Some(i) = s.iter().position(|v| v.is_nan() || *v == f64::INFINITY) {
                return Err(Error::InvalidInput(format!("invalid entropy at cell {i}")));
            }
        }
        Ok(FlowState { grid, rho, u, s, t })
    }

    pub fn max_density(&self) -> f64 {
        self.rho.iter().cloned().fold(0.0, f64::max)
    }

    /// Minimum entropy over cells carrying mass; `None` without an entropy field.
    pub fn min_entropy(&self) -> Option<f64> {
        let s = self.s.as_ref()?;
        s.iter()
            .zip(&self.rho)
            .filter(|(_, &r)| r > 0.0)
            .map(|(&v, _)| v)
            .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.min(v))))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DensityProfile {
    /// `a exp(-x^2 / w^2)`
    Gaussian { amplitude: f64, width: f64 },
    /// `a (1 - x^2 / D^2)^q` on `|x| <= D`, zero outside.
    CompactBump { amplitude: f64, radius: f64, order: u32 },
    /// Linear interpolation of sampled values, zero outside the sampled range.
    Table { x: Vec<f64>, rho: Vec<f64>, u: Option<Vec<f64>> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VelocityProfile {
    Zero,
    Uniform { value: f64 },
    /// `A tanh(x)`
    Tanh { amplitude: f64 },
    /// `A x exp(-x^2 / w^2)`
    XGaussian { amplitude: f64, width: f64 },
    /// `A sin(k x)`
    Sine { amplitude: f64, wavenumber: f64 },
    /// Third column of a [`DensityProfile::Table`].
    Table,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EntropyProfile {
    Constant { value: f64 },
    /// `base + A exp(-x^2 / w^2)`
    Bump { base: f64, amplitude: f64, width: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileSpec {
    pub density: DensityProfile,
    pub velocity: VelocityProfile,
    pub entropy: EntropyProfile,
}

impl ProfileSpec {
    pub fn gaussian(amplitude: f64, width: f64) -> Self {
        ProfileSpec {
            density: DensityProfile::Gaussian { amplitude, width },
            velocity: VelocityProfile::Zero,
            entropy: EntropyProfile::Constant { value: 0.0 },
        }
    }

    pub fn with_velocity(mut self, velocity: VelocityProfile) -> Self {
        self.velocity = velocity;
        self
    }

    pub fn with_entropy(mut self, entropy: EntropyProfile) -> Self {
        self.entropy = entropy;
        self
    }
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    if xs.is_empty() || x < xs[0] || x > xs[xs.len() - 1] {
        return 0.0;
    }
    let j = xs.partition_point(|&v| v <= x);
    if j == 0 {
        return ys[0];
    }
    if j >= xs.len() {
        return ys[xs.len() - 1];
    }
    let (x0, x1) = (xs[j - 1], xs[j]);
    let w = (x - x0) / (x1 - x0);
    ys[j - 1] * (1.0 - w) + ys[j] * w
}

/// Samples a [`ProfileSpec`] at the cell centres.
pub fn build_initial_data(profile: &ProfileSpec, grid: &Grid, model: &GasModel) -> Result<FlowState> {
    model.validate()?;
    let xs = grid.centers();
    let rho: Vec<f64> = match &profile.density {
        DensityProfile::Gaussian { amplitude, width } => {
            if !(*amplitude >= 0.0 && *width > 0.0) {
                return Err(Error::InvalidInput("gaussian needs amplitude >= 0 and width > 0".into()));
            }
            xs.iter().map(|x| amplitude * (-(x / width).powi(2)).exp()).collect()
        }
        DensityProfile::CompactBump { amplitude, radius, order } => {
            if !(*amplitude >= 0.0 && *radius > 0.0) {
                return Err(Error::InvalidInput("bump needs amplitude >= 0 and radius > 0".into()));
            }
            xs.iter()
                .map(|x| {
                    let z = 1.0 - (x / radius).powi(2);
                    if z > 0.0 {
                        amplitude * z.powi(*order as i32)
                    } else {
                        0.0
                    }
                })
                .collect()
        }
        DensityProfile::Table { x, rho, u } => {
            validate_table(x, rho, u.as_deref())?;
            xs.iter().map(|&v| interpolate(x, rho, v)).collect()
        }
    };
    let u: Vec<f64> = match &profile.velocity {
        VelocityProfile::Zero => vec![0.0; xs.len()],
        VelocityProfile::Uniform { value } => vec![*value; xs.len()],
        VelocityProfile::Tanh { amplitude } => xs.iter().map(|x| amplitude * x.tanh()).collect(),
        VelocityProfile::XGaussian { amplitude, width } => {
            xs.iter().map(|x| amplitude * x * (-(x / width).powi(2)).exp()).collect()
        }
        VelocityProfile::Sine { amplitude, wavenumber } => {
            xs.iter().map(|x| amplitude * (wavenumber * x).sin()).collect()
        }
        VelocityProfile::Table => match &profile.density {
            DensityProfile::Table { x, u: Some(uu), .. } => {
                xs.iter().map(|&v| interpolate(x, uu, v)).collect()
            }
            _ => {
                return Err(Error::InvalidInput(
                    "tabulated velocity needs a three-column density table".into(),
                ))
            }
        },
    };
    let s = match model.flow {
        FlowKind::Isentropic => None,
        FlowKind::Full => Some(match &profile.entropy {
            EntropyProfile::Constant { value } => vec![*value; xs.len()],
            EntropyProfile::Bump { base, amplitude, width } => {
                xs.iter().map(|x| base + amplitude * (-(x / width).powi(2)).exp()).collect()
            }
        }),
    };
    FlowState::new(grid.clone(), rho, u, s, 0.0)
}

fn validate_table(x: &[f64], rho: &[f64], u: Option<&[f64]>) -> Result<()> {
    if x.len() < 2 || x.len() != rho.len() || u.is_some_and(|u| u.len() != x.len()) {
        return Err(Error::InvalidInput("table needs >= 2 rows of equal length".into()));
    }
    if x.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidInput("table abscissae must be strictly increasing".into()));
    }
    for (i, &r) in rho.iter().enumerate() {
        if !r.is_finite() || !x[i].is_finite() {
            return Err(Error::InvalidInput(format!("non-finite sample in table row {i}")));
        }
        if r < 0.0 {
            return Err(Error::InvalidInput(format!("negative density {r} in table row {i}")));
        }
    }
    if let Some(u) = u {
        if let Some(i) = u.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite velocity in table row {i}")));
        }
    }
    Ok(())
}

/// Parses whitespace-separated `x rho [u]` rows; `#` starts a comment.
pub fn parse_table(text: &str) -> Result<DensityProfile> {
    let (mut x, mut rho, mut u) = (Vec::new(), Vec::new(), Vec::new());
    let mut columns = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let vals: std::result::Result<Vec<f64>, _> =
            line.split_whitespace().map(str::parse::<f64>).collect();
        let vals = vals.map_err(|e| Error::Parse { line: lineno + 1, message: e.to_string() })?;
        if !(vals.len() == 2 || vals.len() == 3) {
            return Err(Error::Parse { line: lineno + 1, message: "expected 2 or 3 columns".into() });
        }
        if *columns.get_or_insert(vals.len()) != vals.len() {
            return Err(Error::Parse { line: lineno + 1, message: "column count changed".into() });
        }
        x.push(vals[0]);
        rho.push(vals[1]);
        if vals.len() == 3 {
            u.push(vals[2]);
        }
    }
    let u = if columns == Some(3) { Some(u) } else { None };
    validate_table(&x, &rho, u.as_deref())?;
    Ok(DensityProfile::Table { x, rho, u })
}

/// Pointwise pressure; vacuum cells give zero.
pub fn pressure(state: &FlowState, model: &GasModel) -> Vec<f64> {
    let g = model.gamma;
    match (&state.s, model.flow) {
        (Some(s), FlowKind::Full) => {
            let cv = model.c_nu();
            state
                .rho
                .iter()
                .zip(s)
                .map(|(&r, &si)| if r > 0.0 { (si / cv).exp() * r.powf(g) } else { 0.0 })
                .collect()
        }
        _ => state.rho.iter().map(|&r| if r > 0.0 { r.powf(g) } else { 0.0 }).collect(),
    }
}

/// Entropy recovered from density and pressure.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyField {
    pub s: Vec<f64>,
    /// Cells holding the `-inf` sentinel (zero pressure).
    pub sentinel_cells: Vec<usize>,
}

/// `s = c_nu ln(p / rho^gamma)`.
pub fn entropy_from_pressure(rho: &[f64], p: &[f64], model: &GasModel) -> Result<EntropyField> {
    if rho.len() != p.len() {
        return Err(Error::InvalidInput("density and pressure lengths differ".into()));
    }
    let cv = model.c_nu();
    let mut s = Vec::with_capacity(rho.len());
    let mut sentinel_cells = Vec::new();
    for (i, (&r, &pi)) in rho.iter().zip(p).enumerate() {
        if r < 0.0 || pi < 0.0 || !r.is_finite() || !pi.is_finite() {
            return Err(Error::InvalidInput(format!("invalid density/pressure at cell {i}")));
        }
        if pi == 0.0 {
            s.push(f64::NEG_INFINITY);
            sentinel_cells.push(i);
        } else if r == 0.0 {
            return Err(Error::UndefinedEntropy { cell: i });
        } else {
            s.push(cv * (pi.ln() - model.gamma * r.ln()));
        }
    }
    Ok(EntropyField { s, sentinel_cells })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayFlag {
    Satisfied,
    Violated,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayCondition {
    pub name: String,
    pub required_exponent: f64,
    /// `None` when the quantity vanishes on both shells.
    pub measured_exponent: Option<f64>,
    pub flag: DecayFlag,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub tail_mass: f64,
    pub conditions: Vec<DecayCondition>,
    /// Smallest measured / required exponent ratio over the checked conditions.
    pub worst_ratio: f64,
}

impl DecayReport {
    pub fn all_satisfied(&self) -> bool {
        self.conditions.iter().all(|c| c.flag == DecayFlag::Satisfied)
    }

    pub fn flag(&self, name: &str) -> Option<DecayFlag> {
        self.conditions.iter().find(|c| c.name == name).map(|c| c.flag)
    }
}

/// Shell maxima of `|q|` over `L/2 < |x| <= L` and `L/4 < |x| <= L/2`.
fn shell_maxima(grid: &Grid, q: &[f64]) -> Option<(f64, f64)> {
    let l = grid.half_width;
    let (mut outer, mut inner) = (None::<f64>, None::<f64>);
    for (x, v) in grid.centers().iter().zip(q) {
        let r = x.abs();
        let v = v.abs();
        if r > l / 2.0 {
            outer = Some(outer.map_or(v, |o| o.max(v)));
        } else if r > l / 4.0 {
            inner = Some(inner.map_or(v, |o| o.max(v)));
        }
    }
    Some((outer?, inner?))
}

fn decay_exponent(outer: f64, inner: f64) -> Option<f64> {
    if outer == 0.0 && inner == 0.0 {
        None
    } else if outer == 0.0 {
        Some(f64::INFINITY)
    } else if inner == 0.0 {
        Some(f64::NEG_INFINITY)
    } else {
        Some((inner / outer).ln() / std::f64::consts::LN_2)
    }
}

/// Estimates the far-field decay of the flow from the two outermost dyadic shells.
pub fn validate_decay(state: &FlowState, model: &GasModel) -> DecayReport {
    let grid = &state.grid;
    let n = model.dim as f64;
    let p = pressure(state, model);
    let du: Vec<f64> = grid.derivative(&state.u).iter().map(|v| v.abs()).collect();
    let mom: Vec<f64> = state.rho.iter().zip(&state.u).map(|(r, u)| r * u).collect();

    // Vacuum cells carry no velocity information.
    let u_masked: Vec<f64> =
        state.u.iter().zip(&state.rho).map(|(&u, &r)| if r > 0.0 { u } else { 0.0 }).collect();
    let du_masked: Vec<f64> =
        du.iter().zip(&state.rho).map(|(&d, &r)| if r > 0.0 { d } else { 0.0 }).collect();

    let mut checks: Vec<(&str, Vec<f64>, f64)> = vec![
        ("velocity", u_masked, 0.0),
        ("momentum_density", mom, n + 1.0),
        ("pressure", p, n),
    ];
    match model.regime {
        Regime::Degenerate { alpha } => {
            let q = state.rho.iter().zip(&du).map(|(r, d)| r.powf(alpha) * d).collect();
            checks.push(("weighted_velocity_gradient", q, n));
        }
        _ => checks.push(("velocity_gradient", du_masked, n)),
    }

    let mut conditions = Vec::new();
    let mut worst_ratio = f64::INFINITY;
    for (name, q, required) in checks {
        let (measured, flag) = match shell_maxima(grid, &q) {
            None => (None, DecayFlag::Indeterminate),
            Some((outer, inner)) => match decay_exponent(outer, inner) {
                None => (None, DecayFlag::Satisfied),
                Some(e) if e > required => (Some(e), DecayFlag::Satisfied),
                // `|u| -> 0` allows any positive rate; exactly zero is indeterminate.
                Some(e) if required == 0.0 && e == 0.0 => (Some(e), DecayFlag::Indeterminate),
                Some(e) => (Some(e), DecayFlag::Violated),
            },
        };
        if let Some(e) = measured {
            let ratio = if required > 0.0 { e / required } else if e > 0.0 { f64::INFINITY } else { 0.0 };
            worst_ratio = worst_ratio.min(ratio);
        }
        conditions.push(DecayCondition {
            name: name.to_string(),
            required_exponent: required,
            measured_exponent: measured,
            flag,
        });
    }

    DecayReport { tail_mass: tail_mass(state), conditions, worst_ratio }
}

/// Mass beyond the truncation radius, extrapolating a power law fitted on
/// the outermost shells; infinite when the fitted decay is not integrable.
fn tail_mass(state: &FlowState) -> f64 {
    let grid = &state.grid;
    let n = grid.dim() as f64;
    let l = grid.half_width;
    let Some((outer, inner)) = shell_maxima(grid, &state.rho) else {
        return f64::INFINITY;
    };
    let ends: Vec<f64> = match grid.geometry {
        Geometry::Line1D => vec![state.rho[0], state.rho[grid.cells - 1]],
        Geometry::RadialND { .. } => vec![state.rho[grid.cells - 1]],
    };
    if ends.iter().all(|&r| r == 0.0) {
        return 0.0;
    }
    let p = match decay_exponent(outer, inner) {
        Some(p) => p,
        None => return 0.0,
    };
    if p <= n {
        return f64::INFINITY;
    }
    let area = match grid.geometry {
        Geometry::Line1D => 1.0,
        Geometry::RadialND { dim } => unit_sphere_area(dim),
    };
    // int_L^inf rho_L (r/L)^-p r^{n-1} dr = rho_L L^n / (p - n)
    ends.iter().map(|&r| area * r * l.powf(n) / (p - n)).sum()
}
