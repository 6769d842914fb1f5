//! Two-sided envelopes for the internal (or potential) energy and the
//! latest time `T*` they allow a classical solution to exist.
//!
//! The lower envelope comes from the interpolation inequality and an upper
//! quadratic bound on `G(t)`; the upper envelope is the decay estimate of
//! the regime. Where they cross, no solution can continue.

use serde::{Deserialize, Serialize};

use crate::criteria::{constant, ConstantInputs, Constants, CriterionInputs, CriterionKind, CriterionReport};
use crate::error::{Error, Result};
use crate::functionals::FunctionalSnapshot;
use crate::gas_state::{FlowKind, GasModel, Regime};

/// `a t² + b t + c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quadratic {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Quadratic {
    pub fn eval(&self, t: f64) -> f64 {
        (self.a * t + self.b) * t + self.c
    }

    pub fn derivative(&self, t: f64) -> f64 {
        2.0 * self.a * t + self.b
    }
}

/// Upper decay envelope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UpperEnvelope {
    /// `c / (1 + t)^p`
    Power { c: f64, p: f64 },
    /// `c (1 + t)^{-p} exp(-k / (1 + t)^q)`, plus `(1 + t)^{-2}` when `tail`.
    DampedPower { c: f64, p: f64, k: f64, q: f64, tail: bool },
}

impl UpperEnvelope {
    pub fn eval(&self, t: f64) -> f64 {
        let s = 1.0 + t;
        match *self {
            UpperEnvelope::Power { c, p } => c * s.powf(-p),
            UpperEnvelope::DampedPower { c, p, k, q, tail } => {
                c * s.powf(-p) * (-k * s.powf(-q)).exp() + if tail { s.powi(-2) } else { 0.0 }
            }
        }
    }

    /// `(coefficient, exponent)` of the leading behaviour `c t^{-p}` as `t -> ∞`.
    fn leading(&self) -> (f64, f64) {
        match *self {
            UpperEnvelope::Power { c, p } => (c, p),
            UpperEnvelope::DampedPower { c, p, tail, .. } => {
                if tail && p > 2.0 {
                    (1.0, 2.0)
                } else if tail && p == 2.0 {
                    (c + 1.0, 2.0)
                } else {
                    (c, p)
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCurves {
    pub kind: CriterionKind,
    pub gamma: f64,
    pub n: usize,
    /// `true` when `γ <= 1 + 2/n`.
    pub low_gamma_branch: bool,
    /// Numerator of the lower envelope (`C2`, `C3` or `C23`).
    pub lower_coeff: f64,
    /// Exponent `n (γ - 1) / 2` applied to the upper bound on `G`.
    pub lower_exponent: f64,
    pub g_upper: Quadratic,
    pub g_lower: Quadratic,
    pub upper: UpperEnvelope,
    pub constants: Constants,
}

impl BoundCurves {
    /// `C / G_upper(t)^{n(γ-1)/2}`.
    pub fn lower(&self, t: f64) -> f64 {
        let g = self.g_upper.eval(t);
        if g.is_finite() {
            self.lower_coeff / g.powf(self.lower_exponent)
        } else {
            0.0
        }
    }

    pub fn upper(&self, t: f64) -> f64 {
        self.upper.eval(t)
    }

    pub fn g_bounds(&self, t: f64) -> (f64, f64) {
        (self.g_lower.eval(t), self.g_upper.eval(t))
    }

    pub fn f_bounds(&self, t: f64) -> (f64, f64) {
        (self.g_lower.derivative(t), self.g_upper.derivative(t))
    }

    /// `lim lower(t) / upper(t)` as `t -> ∞`.
    pub fn limit_ratio(&self) -> f64 {
        let a = self.g_upper.a;
        if !(a.is_finite()) || !(self.g_upper.b.is_finite()) {
            return 0.0;
        }
        let (c, p) = self.upper.leading();
        let q = 2.0 * self.lower_exponent;
        if a <= 0.0 {
            return f64::INFINITY;
        }
        if (p - q).abs() < 1e-12 {
            self.lower_coeff / (a.powf(self.lower_exponent) * c)
        } else if p > q {
            f64::INFINITY
        } else {
            0.0
        }
    }

    /// `lower(t) / upper(t)` at a finite time.
    pub fn ratio_at(&self, t: f64) -> f64 {
        self.lower(t) / self.upper(t)
    }

    /// Samples `(t, lower, upper)` on `m + 1` evenly spaced points of `[0, t_end]`.
    pub fn sample(&self, t_end: f64, m: usize) -> Vec<(f64, f64, f64)> {
        (0..=m)
            .map(|i| {
                let t = t_end * i as f64 / m.max(1) as f64;
                (t, self.lower(t), self.upper(t))
            })
            .collect()
    }
}

/// Bound curves for the full and isentropic systems in either `γ` branch.
pub fn inviscid_bounds(flow: FlowKind, inputs: &CriterionInputs, constants: Constants) -> Result<BoundCurves> {
    let (g, n) = (inputs.gamma, inputs.n);
    let nf = n as f64;
    let k = nf * (g - 1.0) / 2.0;
    let low = g <= 1.0 + 2.0 / nf;
    let e0 = inputs.e0;
    let quad = |a: f64| Quadratic { a, b: inputs.f0, c: inputs.g0 };
    let (kind, lower_name, upper_name) = match flow {
        FlowKind::Full => (CriterionKind::FullCns, "C2", "C4"),
        FlowKind::Isentropic => (CriterionKind::Isentropic, "C3", "C5"),
    };
    let (g_lower, g_upper) = match (flow, low) {
        (FlowKind::Full, true) => (quad(k * e0), quad(e0)),
        (FlowKind::Full, false) => (quad(e0), quad(k * e0)),
        (FlowKind::Isentropic, true) => (quad(inputs.p0 * inputs.p0 / (2.0 * inputs.m0)), quad(e0)),
        (FlowKind::Isentropic, false) => (quad(inputs.p0 * inputs.p0 / (2.0 * inputs.m0)), quad(k * e0)),
    };
    let c_up = constants.require(upper_name)?;
    let upper = UpperEnvelope::Power { c: c_up, p: if low { nf * (g - 1.0) } else { 2.0 } };
    Ok(BoundCurves {
        kind,
        gamma: g,
        n,
        low_gamma_branch: low,
        lower_coeff: constants.require(lower_name)?,
        lower_exponent: k,
        g_upper,
        g_lower,
        upper,
        constants,
    })
}

/// Builds the envelopes of a criterion from its report, constants and the
/// functionals of the initial data.
pub fn build_bounds(report: &CriterionReport, constants: &Constants, snap0: &FunctionalSnapshot) -> Result<BoundCurves> {
    let inputs = &report.inputs;
    let (g, n) = (inputs.gamma, inputs.n);
    let nf = n as f64;
    let low = g <= 1.0 + 2.0 / nf;
    match report.kind {
        CriterionKind::FullCns | CriterionKind::Isentropic => {
            if !low {
                return Err(Error::RegimeMismatch(format!(
                    "criterion {} needs gamma <= 1 + 2/n",
                    report.kind.name()
                )));
            }
            let flow = if report.kind == CriterionKind::FullCns { FlowKind::Full } else { FlowKind::Isentropic };
            inviscid_bounds(flow, inputs, constants.clone())
        }
        CriterionKind::DegenerateHighAlpha | CriterionKind::DegenerateMidAlpha | CriterionKind::DegenerateMultiD => {
            if report.kind == CriterionKind::DegenerateHighAlpha && g > 3.0 {
                return Err(Error::RegimeMismatch("high-alpha envelopes need gamma <= 3".into()));
            }
            let alpha = inputs.alpha.ok_or_else(|| Error::RegimeMismatch("missing alpha".into()))?;
            let free = report.free_value().unwrap_or(0.0);
            let ie0 = snap0.ie;
            let gap = inputs.p0 * inputs.p0 / (2.0 * inputs.m0) - ie0;
            let max_coeff = match report.kind {
                CriterionKind::DegenerateMultiD => f64::max(2.0, nf * (g - 1.0)),
                _ => f64::max(2.0, g - 1.0),
            };
            // coupling constant multiplying the free parameter
            let product = match report.kind {
                CriterionKind::DegenerateHighAlpha => {
                    let c14 = inputs.c14.unwrap_or(inputs.rho_max);
                    alpha / 4.0 * inputs.m0 * c14.powf(alpha - 1.0)
                }
                _ => {
                    let c13 = inputs.c13.unwrap_or(ie0);
                    let c19 = (g - 1.0).powf((alpha - 1.0) / (g - 1.0))
                        * inputs.m0.powf((g - alpha) / (g - 1.0))
                        * c13.powf((alpha - 1.0) / (g - 1.0));
                    let kk = 1.0 + nf * (alpha - 1.0);
                    0.25 * c19 * nf * kk * kk
                }
            };
            let partner = product / free; // C16 or C21; infinite in the zero-momentum limit
            let g_upper = Quadratic {
                a: 0.5 * (max_coeff * ie0 + free),
                b: -partner * gap + inputs.f0,
                c: inputs.g0,
            };
            let g_lower = Quadratic {
                a: 0.5 * (2.0 * inputs.p0 * inputs.p0 / (2.0 * inputs.m0) - free),
                b: partner * gap + inputs.f0,
                c: inputs.g0,
            };
            let upper = match report.kind {
                CriterionKind::DegenerateHighAlpha => UpperEnvelope::DampedPower {
                    c: constants.require("C26")?,
                    p: g - 1.0,
                    k: constants.require("C25")?,
                    q: 1.0,
                    tail: false,
                },
                CriterionKind::DegenerateMidAlpha => UpperEnvelope::DampedPower {
                    c: constants.require("C31")?,
                    p: g - 1.0,
                    k: constants.require("C30")?,
                    q: constants.require("C28")?,
                    tail: true,
                },
                _ => UpperEnvelope::DampedPower {
                    c: constants.require("C29")?,
                    p: nf * (g - 1.0),
                    k: constants.require("C27")?,
                    q: constants.require("C28")?,
                    tail: true,
                },
            };
            Ok(BoundCurves {
                kind: report.kind,
                gamma: g,
                n,
                low_gamma_branch: low,
                lower_coeff: constants.require("C23")?,
                lower_exponent: nf * (g - 1.0) / 2.0,
                g_upper,
                g_lower,
                upper,
                constants: constants.clone(),
            })
        }
        CriterionKind::CompactSupport => {
            Err(Error::RegimeMismatch("compact-support bound has no energy envelopes".into()))
        }
    }
}

/// Constants for `report`, then its envelopes.
pub fn bounds_for_report(report: &CriterionReport, model: &GasModel, snap0: &FunctionalSnapshot) -> Result<BoundCurves> {
    let inputs = ConstantInputs::from_report(report, snap0);
    let constants = crate::criteria::constants_table(report.kind, model, &inputs)?;
    build_bounds(report, &constants, snap0)
}

/// Envelopes for an isentropic or full model in either `γ` branch, without
/// evaluating a criterion first.
pub fn bounds_for_model(model: &GasModel, inputs: &CriterionInputs, snap0: &FunctionalSnapshot) -> Result<BoundCurves> {
    if matches!(model.regime, Regime::Degenerate { .. }) {
        return Err(Error::RegimeMismatch("degenerate envelopes need a criterion report".into()));
    }
    let cin = ConstantInputs { m0: Some(inputs.m0), s1: inputs.s1, j0: Some(snap0.j), ij0: Some(snap0.ij), ..Default::default() };
    let names: &[&str] = match model.flow {
        FlowKind::Full => &["C1", "C2", "C4"],
        FlowKind::Isentropic => &["C1", "C3", "C5"],
    };
    let mut constants = Constants::default();
    for name in names {
        constants.entries.push(constant(name, model, &cin)?);
    }
    inviscid_bounds(model.flow, inputs, constants)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TStarOptions {
    /// Ratio of the geometric bracketing scan.
    pub growth: f64,
    /// Uniform subdivisions of the first bracket with a positive gap.
    pub subdivisions: usize,
    pub t_max: f64,
    /// Relative width at which bisection stops.
    pub rel_tol: f64,
}

impl Default for TStarOptions {
    fn default() -> Self {
        TStarOptions { growth: 2.0, subdivisions: 64, t_max: 1e12, rel_tol: 1e-10 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TStarResult {
    pub tstar: Option<f64>,
    pub bracket: Option<(f64, f64)>,
    /// `(t, lower - upper)` at every scan point.
    pub scan: Vec<(f64, f64)>,
    /// Scan intervals across which `lower - upper` changes sign.
    pub sign_changes: Vec<(f64, f64)>,
    pub bisection_iterations: usize,
    /// `lower(T*) - upper(T*)`.
    pub residual: Option<f64>,
    pub limit_ratio: f64,
    pub diagnostic: Option<String>,
}

pub fn find_tstar(curves: &BoundCurves) -> TStarResult {
    find_tstar_with(curves, &TStarOptions::default())
}

/// Smallest `t >= 0` with `lower(t) > upper(t)`.
pub fn find_tstar_with(curves: &BoundCurves, opts: &TStarOptions) -> TStarResult {
    let diff = |t: f64| curves.lower(t) - curves.upper(t);
    let limit_ratio = curves.limit_ratio();

    let mut ts = vec![0.0];
    let mut t = 1.0;
    while t < opts.t_max {
        ts.push(t);
        t *= opts.growth;
    }
    ts.push(opts.t_max);
    let scan: Vec<(f64, f64)> = ts.iter().map(|&t| (t, diff(t))).collect();
    let sign_changes: Vec<(f64, f64)> = scan
        .windows(2)
        .filter(|w| (w[0].1 > 0.0) != (w[1].1 > 0.0))
        .map(|w| (w[0].0, w[1].0))
        .collect();

    let mut result = TStarResult {
        tstar: None,
        bracket: None,
        scan,
        sign_changes,
        bisection_iterations: 0,
        residual: None,
        limit_ratio,
        diagnostic: None,
    };

    if result.scan[0].1 > 0.0 {
        result.tstar = Some(0.0);
        result.bracket = Some((0.0, 0.0));
        result.residual = Some(result.scan[0].1);
        result.diagnostic = Some("envelopes already crossed at t = 0".into());
        return result;
    }
    let Some(idx) = result.scan.iter().position(|&(_, d)| d > 0.0) else {
        result.diagnostic = Some(format!(
            "no crossing below t = {:e}; lower/upper -> {limit_ratio:e} as t -> inf",
            opts.t_max
        ));
        return result;
    };

    // Earlier crossings inside the first positive bracket are caught by a
    // uniform sweep of that bracket.
    let (mut lo, mut hi) = (result.scan[idx - 1].0, result.scan[idx].0);
    let m = opts.subdivisions.max(1);
    let width = hi - lo;
    for i in 1..=m {
        let t = lo + width * i as f64 / m as f64;
        if diff(t) > 0.0 {
            hi = t;
            lo = lo.max(t - width / m as f64);
            break;
        }
    }

    let mut iters = 0;
    while hi - lo > opts.rel_tol * hi * 1e-2 && iters < 200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if diff(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        iters += 1;
    }
    result.bisection_iterations = iters;
    result.bracket = Some((lo, hi));
    result.tstar = Some(hi);
    result.residual = Some(diff(hi));
    result
}
