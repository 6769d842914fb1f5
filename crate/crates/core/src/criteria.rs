//! Initial-data blow-up criteria and their explicit constants.
//!
//! Every criterion compares a data-dependent left-hand side with a constant
//! right-hand side; `lhs < rhs` means no classical solution survives beyond
//! a finite time. The criteria for degenerate viscosity carry a free
//! parameter (`C18` in one dimension, `C22` otherwise) that is scanned over
//! `(0, P(0)² / (2 M(0)))`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::{chemin_constant, snapshot, FunctionalSnapshot};
use crate::gas_state::{unit_ball_volume, FlowKind, FlowState, GasModel, Regime};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionKind {
    /// Full system with entropy, `1 < γ <= 1 + 2/n`.
    FullCns,
    /// Isentropic system, `1 < γ <= 1 + 2/n`.
    Isentropic,
    /// Degenerate viscosity, `n = 1`, `α >= γ`, `1 < γ <= 3`, bounded density.
    DegenerateHighAlpha,
    /// Degenerate viscosity, `n = 1`, `(γ+1)/2 < α <= γ`, `1 < γ < 3`.
    DegenerateMidAlpha,
    /// Degenerate viscosity, `n >= 2`, `(γ+1)/2 < α <= γ`, `1 < γ < 1 + 2/n`.
    DegenerateMultiD,
    /// Life-span bound for compactly supported data.
    CompactSupport,
}

impl CriterionKind {
    pub fn name(&self) -> &'static str {
        match self {
            CriterionKind::FullCns => "full_cns",
            CriterionKind::Isentropic => "isentropic",
            CriterionKind::DegenerateHighAlpha => "degenerate_high_alpha",
            CriterionKind::DegenerateMidAlpha => "degenerate_mid_alpha",
            CriterionKind::DegenerateMultiD => "degenerate_multi_d",
            CriterionKind::CompactSupport => "compact_support",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            CriterionKind::FullCns,
            CriterionKind::Isentropic,
            CriterionKind::DegenerateHighAlpha,
            CriterionKind::DegenerateMidAlpha,
            CriterionKind::DegenerateMultiD,
            CriterionKind::CompactSupport,
        ]
        .into_iter()
        .find(|k| k.name() == s)
    }

    /// The criterion matching a model's flow kind and viscosity regime.
    pub fn for_model(model: &GasModel) -> Result<Self> {
        match (model.flow, model.regime) {
            (FlowKind::Full, Regime::Degenerate { .. }) => {
                Err(Error::RegimeMismatch("degenerate viscosity is isentropic".into()))
            }
            (FlowKind::Full, _) => Ok(CriterionKind::FullCns),
            (FlowKind::Isentropic, Regime::Degenerate { alpha }) => {
                let g = model.gamma;
                if model.dim >= 2 {
                    Ok(CriterionKind::DegenerateMultiD)
                } else if alpha >= g {
                    Ok(CriterionKind::DegenerateHighAlpha)
                } else {
                    Ok(CriterionKind::DegenerateMidAlpha)
                }
            }
            (FlowKind::Isentropic, _) => Ok(CriterionKind::Isentropic),
        }
    }
}

/// Scalars of the initial data entering the criteria.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriterionInputs {
    pub gamma: f64,
    pub n: usize,
    pub c_nu: f64,
    pub alpha: Option<f64>,
    pub m0: f64,
    pub p0: f64,
    pub f0: f64,
    pub g0: f64,
    /// `E(0)` for the full system, `IE(0)` otherwise.
    pub e0: f64,
    /// `E_i(0)` or `I(0)`.
    pub potential0: f64,
    /// `J(0)` or `IJ(0)`.
    pub j0: f64,
    /// Minimum entropy over cells carrying mass.
    pub s1: Option<f64>,
    pub rho_max: f64,
    /// Assumed energy bound.
    pub c13: Option<f64>,
    /// Assumed density ceiling.
    pub c14: Option<f64>,
}

impl CriterionInputs {
    pub fn from_state(state: &FlowState, model: &GasModel) -> Result<(Self, FunctionalSnapshot)> {
        let snap = snapshot(state, model)?;
        let s1 = match model.flow {
            FlowKind::Full => state.min_entropy(),
            FlowKind::Isentropic => None,
        };
        let inputs = CriterionInputs {
            gamma: model.gamma,
            n: model.dim,
            c_nu: model.c_nu(),
            alpha: model.alpha(),
            m0: snap.m,
            p0: snap.p,
            f0: snap.f,
            g0: snap.g,
            e0: snap.energy(model.flow),
            potential0: snap.potential(model.flow),
            j0: snap.virial_energy(model.flow),
            s1,
            rho_max: state.max_density(),
            c13: None,
            c14: None,
        };
        Ok((inputs, snap))
    }

    fn d(&self) -> f64 {
        (self.n as f64 + 2.0) * self.gamma - self.n as f64
    }
}

/// One point of the free-parameter scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub value: f64,
    pub lhs: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreeParam {
    /// `C18` or `C22`.
    pub name: String,
    pub value: f64,
    /// Open admissible interval `(0, P(0)² / (2 M(0)))`.
    pub interval: (f64, f64),
    /// `false` when the interval is empty (zero momentum); the report then
    /// holds the limit `value -> 0+`.
    pub applicable: bool,
    pub trace: Vec<ScanPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub kind: CriterionKind,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub satisfied: bool,
    pub free_param: Option<FreeParam>,
    pub inputs: CriterionInputs,
    pub notes: Vec<String>,
}

impl CriterionReport {
    fn new(kind: CriterionKind, lhs: f64, rhs: f64, inputs: CriterionInputs) -> Self {
        CriterionReport {
            kind,
            lhs,
            rhs,
            margin: rhs - lhs,
            satisfied: lhs < rhs,
            free_param: None,
            inputs,
            notes: Vec::new(),
        }
    }

    /// Value of `C18` / `C22` used for the bound curves.
    pub fn free_value(&self) -> Option<f64> {
        self.free_param.as_ref().map(|f| f.value)
    }
}

/// `Γ(n/2 + 1) / π^{n/2} = 1 / |B1|`.
fn inv_ball(n: usize) -> f64 {
    1.0 / unit_ball_volume(n)
}

/// Right-hand side shared by the full and isentropic criteria.
pub fn rhs_inviscid(gamma: f64, n: usize) -> f64 {
    let d = (n as f64 + 2.0) * gamma - n as f64;
    inv_ball(n).powf(gamma - 1.0) / (2f64.powf(d / 2.0) * (gamma - 1.0))
}

/// Right-hand side of the high-α criterion.
pub fn rhs_high_alpha(gamma: f64, alpha: f64, c14: f64) -> f64 {
    ((1.0 - gamma) / 4.0 * c14.powf(alpha - gamma)).exp()
        / (4f64.powf(2.0 * gamma - 1.0) * (gamma - 1.0))
}

/// Right-hand side of the mid-α criterion, with `n = 1` substituted.
pub fn rhs_mid_alpha(gamma: f64) -> f64 {
    let gamma_3_2 = std::f64::consts::PI.sqrt() / 2.0;
    gamma_3_2.powf(gamma - 1.0)
        / ((gamma - 1.0) * std::f64::consts::PI.powf(gamma - 1.0) * 2f64.powf((3.0 * gamma - 1.0) / 2.0))
}

/// Right-hand side of the multi-dimensional degenerate criterion.
pub fn rhs_multi_d(gamma: f64, n: usize) -> f64 {
    rhs_inviscid(gamma, n)
}

fn require_positive(inputs: &CriterionInputs) -> Result<()> {
    if !(inputs.m0 > 0.0) {
        return Err(Error::InvalidInput("M(0) > 0 required".into()));
    }
    if !(inputs.e0 > 0.0) {
        return Err(Error::InvalidInput("initial energy must be positive".into()));
    }
    if !(inputs.j0 > 0.0) {
        return Err(Error::InconsistentData(format!(
            "virial energy at t = 0 must be positive, got {}",
            inputs.j0
        )));
    }
    Ok(())
}

fn inviscid_range(inputs: &CriterionInputs) -> Result<()> {
    let crit = 1.0 + 2.0 / inputs.n as f64;
    if !(inputs.gamma > 1.0 && inputs.gamma <= crit) {
        return Err(Error::OutOfRegime(format!(
            "gamma = {} outside (1, 1 + 2/n] = (1, {crit}]",
            inputs.gamma
        )));
    }
    Ok(())
}

/// Full-system criterion from precomputed scalars.
pub fn check_cns_from_scalars(inputs: &CriterionInputs) -> Result<CriterionReport> {
    inviscid_range(inputs)?;
    require_positive(inputs)?;
    let s1 = inputs.s1.ok_or(Error::MissingInput { constant: "C2".into(), scalar: "s1".into() })?;
    let (g, n) = (inputs.gamma, inputs.n as f64);
    let d = inputs.d();
    let lhs = inputs.e0.powf(n * (g - 1.0) / 2.0) * inputs.j0
        / ((s1 / inputs.c_nu).exp() * inputs.m0.powf(d / 2.0));
    let mut rep = CriterionReport::new(CriterionKind::FullCns, lhs, rhs_inviscid(g, inputs.n), *inputs);
    rep.notes.push("s1 is the minimum entropy over cells with positive density".into());
    Ok(rep)
}

/// Full-system criterion for gridded data.
pub fn check_cns(data: &FlowState, model: &GasModel) -> Result<CriterionReport> {
    if model.flow != FlowKind::Full || data.s.is_none() {
        return Err(Error::RegimeMismatch("full-system criterion needs an entropy field".into()));
    }
    let (inputs, _) = CriterionInputs::from_state(data, model)?;
    check_cns_from_scalars(&inputs)
}

/// Isentropic criterion from precomputed scalars.
pub fn check_icns_from_scalars(inputs: &CriterionInputs) -> Result<CriterionReport> {
    inviscid_range(inputs)?;
    require_positive(inputs)?;
    let (g, n) = (inputs.gamma, inputs.n as f64);
    let lhs = inputs.e0.powf(n * (g - 1.0) / 2.0) * inputs.j0 / inputs.m0.powf(inputs.d() / 2.0);
    Ok(CriterionReport::new(CriterionKind::Isentropic, lhs, rhs_inviscid(g, inputs.n), *inputs))
}

/// Isentropic criterion for gridded data.
pub fn check_icns(data: &FlowState, model: &GasModel) -> Result<CriterionReport> {
    if model.flow != FlowKind::Isentropic {
        return Err(Error::RegimeMismatch("isentropic criterion needs an isentropic model".into()));
    }
    let (inputs, _) = CriterionInputs::from_state(data, model)?;
    check_icns_from_scalars(&inputs)
}

/// Points of the free-parameter scan.
pub const SCAN_POINTS: usize = 64;

/// Log grid `upper · 10^{-6 + 6k/64}`, `k = 0..64`, strictly inside `(0, upper)`.
pub fn free_param_grid(upper: f64) -> Vec<f64> {
    (0..SCAN_POINTS).map(|k| upper * 10f64.powf(-6.0 + 6.0 * k as f64 / SCAN_POINTS as f64)).collect()
}

fn scan_free_param(
    kind: CriterionKind,
    name: &str,
    inputs: &CriterionInputs,
    rhs: f64,
    lhs_of: impl Fn(f64) -> f64,
) -> CriterionReport {
    let upper = inputs.p0 * inputs.p0 / (2.0 * inputs.m0);
    if !(upper > 0.0) {
        let lhs = lhs_of(0.0);
        let mut rep = CriterionReport::new(kind, lhs, rhs, *inputs);
        rep.free_param = Some(FreeParam {
            name: name.into(),
            value: 0.0,
            interval: (0.0, 0.0),
            applicable: false,
            trace: vec![ScanPoint { value: 0.0, lhs, margin: rhs - lhs }],
        });
        rep.notes.push(format!(
            "zero initial momentum leaves no admissible {name}; reported the limit {name} -> 0+"
        ));
        return rep;
    }
    let trace: Vec<ScanPoint> = free_param_grid(upper)
        .into_iter()
        .map(|c| {
            let lhs = lhs_of(c);
            ScanPoint { value: c, lhs, margin: rhs - lhs }
        })
        .collect();
    let best = *trace
        .iter()
        .max_by(|a, b| a.margin.total_cmp(&b.margin))
        .expect("scan grid is non-empty");
    let mut rep = CriterionReport::new(kind, best.lhs, rhs, *inputs);
    rep.free_param = Some(FreeParam {
        name: name.into(),
        value: best.value,
        interval: (0.0, upper),
        applicable: true,
        trace,
    });
    rep
}

fn degenerate_alpha(inputs: &CriterionInputs) -> Result<f64> {
    inputs
        .alpha
        .ok_or_else(|| Error::RegimeMismatch("degenerate criterion needs alpha".into()))
}

fn degenerate_model(model: &GasModel) -> Result<()> {
    if model.flow != FlowKind::Isentropic || model.alpha().is_none() {
        return Err(Error::RegimeMismatch(
            "degenerate criteria need an isentropic model with degenerate viscosity".into(),
        ));
    }
    Ok(())
}

/// High-α criterion (`n = 1`) from precomputed scalars; needs `c14`.
pub fn check_dicns_1d_high_alpha_from_scalars(inputs: &CriterionInputs) -> Result<CriterionReport> {
    let alpha = degenerate_alpha(inputs)?;
    let g = inputs.gamma;
    if inputs.n != 1 {
        return Err(Error::OutOfRegime("high-alpha criterion needs n = 1".into()));
    }
    if !(g > 1.0 && g <= 3.0) {
        return Err(Error::OutOfRegime(format!("gamma = {g} outside (1, 3]")));
    }
    if !(alpha >= g) {
        return Err(Error::OutOfRegime(format!("alpha = {alpha} below gamma = {g}")));
    }
    let c14 = inputs.c14.ok_or(Error::MissingInput { constant: "C14".into(), scalar: "density ceiling".into() })?;
    if c14 < inputs.rho_max {
        return Err(Error::InconsistentAssumption(format!(
            "density ceiling C14 = {c14} below max rho0 = {}",
            inputs.rho_max
        )));
    }
    require_positive(inputs)?;
    let rhs = rhs_high_alpha(g, alpha, c14);
    let lhs_of = |c18: f64| {
        inputs.j0 * (0.5 * (f64::max(2.0, g - 1.0) * inputs.e0 + c18)).powf((g - 1.0) / 2.0)
            / inputs.m0.powf((3.0 * g - 1.0) / 2.0)
    };
    Ok(scan_free_param(CriterionKind::DegenerateHighAlpha, "C18", inputs, rhs, lhs_of))
}

pub fn check_dicns_1d_high_alpha(data: &FlowState, model: &GasModel, c14: f64) -> Result<CriterionReport> {
    degenerate_model(model)?;
    let (mut inputs, _) = CriterionInputs::from_state(data, model)?;
    inputs.c14 = Some(c14);
    check_dicns_1d_high_alpha_from_scalars(&inputs)
}

fn mid_alpha_range(inputs: &CriterionInputs, alpha: f64, gamma_max: f64, strict: bool) -> Result<()> {
    let g = inputs.gamma;
    let in_gamma = g > 1.0 && if strict { g < gamma_max } else { g <= gamma_max };
    if !in_gamma {
        return Err(Error::OutOfRegime(format!("gamma = {g} outside (1, {gamma_max})")));
    }
    if !(alpha > (g + 1.0) / 2.0 && alpha <= g) {
        return Err(Error::OutOfRegime(format!(
            "alpha = {alpha} outside ((gamma + 1)/2, gamma] = ({}, {g}]",
            (g + 1.0) / 2.0
        )));
    }
    Ok(())
}

fn check_c13(inputs: &CriterionInputs) -> Result<f64> {
    let c13 = inputs.c13.unwrap_or(inputs.e0);
    if c13 < inputs.e0 * (1.0 - 1e-12) {
        return Err(Error::InconsistentAssumption(format!(
            "energy bound C13 = {c13} below IE(0) = {}",
            inputs.e0
        )));
    }
    Ok(c13)
}

/// Mid-α criterion (`n = 1`) from precomputed scalars.
pub fn check_dicns_1d_mid_alpha_from_scalars(inputs: &CriterionInputs) -> Result<CriterionReport> {
    let alpha = degenerate_alpha(inputs)?;
    if inputs.n != 1 {
        return Err(Error::OutOfRegime("mid-alpha criterion needs n = 1".into()));
    }
    mid_alpha_range(inputs, alpha, 3.0, true)?;
    check_c13(inputs)?;
    require_positive(inputs)?;
    let g = inputs.gamma;
    let y = mid_alpha_exponent(g, alpha, inputs.m0);
    let lhs_of = |c18: f64| {
        inputs.j0 * (0.5 * (f64::max(2.0, g - 1.0) * inputs.e0 + c18)).powf((g - 1.0) / 2.0)
            / (inputs.m0.powf((3.0 * g - 1.0) / 2.0) * (-y).exp())
    };
    Ok(scan_free_param(CriterionKind::DegenerateMidAlpha, "C18", inputs, rhs_mid_alpha(g), lhs_of))
}

pub fn check_dicns_1d_mid_alpha(data: &FlowState, model: &GasModel, c13: f64) -> Result<CriterionReport> {
    degenerate_model(model)?;
    let (mut inputs, _) = CriterionInputs::from_state(data, model)?;
    inputs.c13 = Some(c13);
    check_dicns_1d_mid_alpha_from_scalars(&inputs)
}

/// Multi-dimensional degenerate criterion from precomputed scalars.
pub fn check_dicns_nd_from_scalars(inputs: &CriterionInputs) -> Result<CriterionReport> {
    let alpha = degenerate_alpha(inputs)?;
    if inputs.n < 2 {
        return Err(Error::OutOfRegime("multi-dimensional criterion needs n >= 2".into()));
    }
    mid_alpha_range(inputs, alpha, 1.0 + 2.0 / inputs.n as f64, true)?;
    check_c13(inputs)?;
    require_positive(inputs)?;
    let (g, n) = (inputs.gamma, inputs.n as f64);
    let y = multi_d_exponent(g, alpha, inputs.n, inputs.m0);
    let d = inputs.d();
    let lhs_of = |c22: f64| {
        inputs.j0 * (0.5 * (f64::max(2.0, n * (g - 1.0)) * inputs.e0 + c22)).powf((g - 1.0) / 2.0)
            / (inputs.m0.powf(d / 2.0) * (-y).exp())
    };
    let mut rep = scan_free_param(CriterionKind::DegenerateMultiD, "C22", inputs, rhs_multi_d(g, inputs.n), lhs_of);
    rep.notes.push("radial data carries zero net momentum".into());
    Ok(rep)
}

pub fn check_dicns_nd(data: &FlowState, model: &GasModel, c13: f64) -> Result<CriterionReport> {
    degenerate_model(model)?;
    let (mut inputs, _) = CriterionInputs::from_state(data, model)?;
    inputs.c13 = Some(c13);
    check_dicns_nd_from_scalars(&inputs)
}

/// `α(γ-1) / (4(2α-γ-1)) · (γ-1)^{(α-1)/(γ-1)} M^{(γ-α)/(γ-1)}`, the exponent of `C30`.
pub fn mid_alpha_exponent(gamma: f64, alpha: f64, m0: f64) -> f64 {
    alpha * (gamma - 1.0) / (4.0 * (2.0 * alpha - gamma - 1.0)) * mass_power(gamma, alpha, m0)
}

/// `(γ-1) / (4(α-1)(2α-γ-1)) · [1+n(α-1)]² (γ-1)^{(α-1)/(γ-1)} M^{(γ-α)/(γ-1)}`, the exponent of `C27`.
pub fn multi_d_exponent(gamma: f64, alpha: f64, n: usize, m0: f64) -> f64 {
    let k = 1.0 + n as f64 * (alpha - 1.0);
    (gamma - 1.0) / (4.0 * (alpha - 1.0) * (2.0 * alpha - gamma - 1.0)) * k * k * mass_power(gamma, alpha, m0)
}

fn mass_power(gamma: f64, alpha: f64, m0: f64) -> f64 {
    (gamma - 1.0).powf((alpha - 1.0) / (gamma - 1.0)) * m0.powf((gamma - alpha) / (gamma - 1.0))
}

/// Upper bound on the life span of data supported in a ball of radius `d`.
///
/// Returns the positive root of `a T² + F0 T + G0 = M0 D² / 2` with
/// `a = n(γ-1) E0 / 2` for `γ <= 1 + 2/n` and `a = E0` otherwise.
pub fn compact_support_lifespan(m0: f64, e0: f64, f0: f64, g0: f64, d: f64, gamma: f64, n: usize) -> Result<f64> {
    if !(m0 > 0.0 && e0 > 0.0 && d > 0.0) {
        return Err(Error::InvalidInput("need M0 > 0, E0 > 0, D > 0".into()));
    }
    if !(gamma > 1.0) || n == 0 {
        return Err(Error::InvalidInput("need gamma > 1, n >= 1".into()));
    }
    let nf = n as f64;
    let a = if gamma <= 1.0 + 2.0 / nf { nf * (gamma - 1.0) * e0 / 2.0 } else { e0 };
    lifespan_root(a, f0, g0, 0.5 * m0 * d * d)
}

/// Positive root of `a T² + f0 T + g0 = b`, `a > 0`, `g0 < b`.
pub fn lifespan_root(a: f64, f0: f64, g0: f64, b: f64) -> Result<f64> {
    if !(g0 < b) {
        return Err(Error::InconsistentData(format!(
            "G(0) = {g0} exceeds M(0) D^2 / 2 = {b}"
        )));
    }
    let c = b - g0;
    let disc = f0 * f0 + 4.0 * a * c;
    let sq = disc.sqrt();
    // cancellation-free branch for each sign of f0
    Ok(if f0 >= 0.0 { 2.0 * c / (f0 + sq) } else { (sq - f0) / (2.0 * a) })
}

/// Named constant with the formula it was evaluated from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantEntry {
    pub name: String,
    pub value: f64,
    pub formula: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Constants {
    pub entries: Vec<ConstantEntry>,
}

impl Constants {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.entries.iter().find(|e| e.name == name).map(|e| e.value)
    }

    /// Like [`Constants::get`] but reports which scalar is missing.
    pub fn require(&self, name: &str) -> Result<f64> {
        self.get(name)
            .ok_or_else(|| Error::MissingInput { constant: name.into(), scalar: name.into() })
    }

    fn push(&mut self, name: &str, value: f64, formula: &str) {
        self.entries.push(ConstantEntry { name: name.into(), value, formula: formula.into() });
    }
}

/// Scalars the constants are built from; unset fields are only an error
/// when a constant needing them is requested.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ConstantInputs {
    pub m0: Option<f64>,
    pub s1: Option<f64>,
    pub c13: Option<f64>,
    pub c14: Option<f64>,
    pub alpha: Option<f64>,
    pub j0: Option<f64>,
    pub ij0: Option<f64>,
    pub c18: Option<f64>,
    pub c22: Option<f64>,
}

impl ConstantInputs {
    pub fn from_report(report: &CriterionReport, snap: &FunctionalSnapshot) -> Self {
        let i = &report.inputs;
        let free = report.free_value();
        let (c18, c22) = match report.kind {
            CriterionKind::DegenerateMultiD | CriterionKind::DegenerateMidAlpha => (None, free),
            CriterionKind::DegenerateHighAlpha => (free, None),
            _ => (None, None),
        };
        ConstantInputs {
            m0: Some(i.m0),
            s1: i.s1,
            c13: i.c13.or(Some(snap.ie)),
            c14: i.c14.or(Some(i.rho_max)),
            alpha: i.alpha,
            j0: Some(snap.j),
            ij0: Some(snap.ij),
            c18,
            c22,
        }
    }
}

fn need(v: Option<f64>, constant: &str, scalar: &str) -> Result<f64> {
    v.ok_or_else(|| Error::MissingInput { constant: constant.into(), scalar: scalar.into() })
}

/// Evaluates one named constant.
pub fn constant(name: &str, model: &GasModel, inp: &ConstantInputs) -> Result<ConstantEntry> {
    let g = model.gamma;
    let n = model.dim;
    let nf = n as f64;
    let d = (nf + 2.0) * g - nf;
    let base = || inv_ball(n).powf(g - 1.0) / (2f64.powf(d / 2.0) * (g - 1.0));
    let (value, formula): (f64, &str) = match name {
        "C1" => (chemin_constant(g, n), "2 |B1|^(2(gamma-1)/D)"),
        "C2" => {
            let m = need(inp.m0, name, "M(0)")?;
            let s1 = need(inp.s1, name, "s1")?;
            (base() * (s1 / model.c_nu()).exp() * m.powf(d / 2.0), "(1/|B1|)^(gamma-1) exp(s1/c_nu) M^(D/2) / (2^(D/2) (gamma-1))")
        }
        "C3" | "C23" => {
            let m = need(inp.m0, name, "M(0)")?;
            (base() * m.powf(d / 2.0), "(1/|B1|)^(gamma-1) M^(D/2) / (2^(D/2) (gamma-1))")
        }
        "C4" => (need(inp.j0, name, "J(0)")?, "J(0)"),
        "C5" => (need(inp.ij0, name, "IJ(0)")?, "IJ(0)"),
        "C13" => (need(inp.c13, name, "energy bound")?, "IE(0)"),
        "C14" => (need(inp.c14, name, "density ceiling")?, "max rho"),
        "C16" | "C15" | "C17" => {
            let a = need(inp.alpha, name, "alpha")?;
            let m = need(inp.m0, name, "M(0)")?;
            let c14 = need(inp.c14, name, "C14")?;
            let c18 = need(inp.c18, name, "C18")?;
            let c16 = a / 4.0 * m * c14.powf(a - 1.0) / c18;
            match name {
                "C16" => (c16, "(alpha/4) M C14^(alpha-1) / C18"),
                "C15" => (0.25 / c16, "1 / (4 C16)"),
                _ => (0.25 / c16 * a * c14.powf(a - 1.0), "C15 alpha C14^(alpha-1)"),
            }
        }
        "C18" => (need(inp.c18, name, "C18")?, "free, in (0, P^2/(2M))"),
        "C19" | "C20" | "C21" => {
            let a = need(inp.alpha, name, "alpha")?;
            let m = need(inp.m0, name, "M(0)")?;
            let c13 = need(inp.c13, name, "C13")?;
            let c19 = mass_power(g, a, m) * c13.powf((a - 1.0) / (g - 1.0));
            match name {
                "C19" => (c19, "(gamma-1)^((alpha-1)/(gamma-1)) M^((gamma-alpha)/(gamma-1)) C13^((alpha-1)/(gamma-1))"),
                "C20" => (need(inp.c22, name, "C22")? / c19, "C22 / C19"),
                _ => {
                    let k = 1.0 + nf * (a - 1.0);
                    (0.25 * c19 * nf * k * k / need(inp.c22, name, "C22")?, "C19 n [1+n(alpha-1)]^2 / (4 C22)")
                }
            }
        }
        "C22" => (need(inp.c22, name, "C22")?, "free, in (0, P^2/(2M))"),
        "C24" | "C25" | "C26" => {
            let a = need(inp.alpha, name, "alpha")?;
            let c14 = need(inp.c14, name, "C14")?;
            let c25 = a * (g - 1.0) / 4.0 * c14.powf(a - g);
            match name {
                "C24" => (a / 4.0 * c14.powf(a - g), "(alpha/4) C14^(alpha-gamma)"),
                "C25" => (c25, "alpha (gamma-1)/4 C14^(alpha-gamma)"),
                _ => (need(inp.ij0, name, "IJ(0)")? * c25.exp(), "IJ(0) exp(C25)"),
            }
        }
        "C27" | "C29" => {
            let a = need(inp.alpha, name, "alpha")?;
            let m = need(inp.m0, name, "M(0)")?;
            let y = multi_d_exponent(g, a, n, m);
            if name == "C27" {
                (y, "(gamma-1)/(4(alpha-1)(2alpha-gamma-1)) [1+n(alpha-1)]^2 (gamma-1)^((alpha-1)/(gamma-1)) M^((gamma-alpha)/(gamma-1))")
            } else {
                (need(inp.ij0, name, "IJ(0)")? * y.exp(), "IJ(0) exp(C27)")
            }
        }
        "C28" => {
            let a = need(inp.alpha, name, "alpha")?;
            ((2.0 * a - g - 1.0) / (g - 1.0), "(2alpha-gamma-1)/(gamma-1)")
        }
        "C30" | "C31" | "C32" => {
            let a = need(inp.alpha, name, "alpha")?;
            let m = need(inp.m0, name, "M(0)")?;
            let y = mid_alpha_exponent(g, a, m);
            if name == "C30" {
                (y, "alpha(gamma-1)/(4(2alpha-gamma-1)) (gamma-1)^((alpha-1)/(gamma-1)) M^((gamma-alpha)/(gamma-1))")
            } else {
                (need(inp.ij0, name, "IJ(0)")? * y.exp(), "IJ(0) exp(C30)")
            }
        }
        other => return Err(Error::InvalidInput(format!("unknown constant {other}"))),
    };
    Ok(ConstantEntry { name: name.into(), value, formula: formula.into() })
}

/// Names of the constants a criterion and its bound curves use.
pub fn constant_names(kind: CriterionKind) -> &'static [&'static str] {
    match kind {
        CriterionKind::FullCns => &["C1", "C2", "C4"],
        CriterionKind::Isentropic => &["C1", "C3", "C5"],
        CriterionKind::DegenerateHighAlpha => {
            &["C1", "C3", "C5", "C13", "C14", "C15", "C16", "C17", "C18", "C23", "C24", "C25", "C26"]
        }
        CriterionKind::DegenerateMidAlpha => &[
            "C1", "C3", "C5", "C13", "C19", "C20", "C21", "C22", "C23", "C28", "C30", "C31", "C32",
        ],
        CriterionKind::DegenerateMultiD => &[
            "C1", "C3", "C5", "C13", "C19", "C20", "C21", "C22", "C23", "C27", "C28", "C29",
        ],
        CriterionKind::CompactSupport => &[],
    }
}

/// Evaluates every constant `kind` needs.
pub fn constants_table(kind: CriterionKind, model: &GasModel, inputs: &ConstantInputs) -> Result<Constants> {
    let mut out = Constants::default();
    for name in constant_names(kind) {
        let e = constant(name, model, inputs)?;
        out.push(&e.name, e.value, &e.formula);
    }
    Ok(out)
}
