//! Sod problem against the exact Riemann solution.

use blowup_lab::gas_state::{entropy_from_pressure, pressure};
use blowup_lab::simulate::run;
use blowup_lab::{FlowState, GasModel, Grid};

const GAMMA: f64 = 1.4;

#[derive(Clone, Copy)]
struct Side {
    rho: f64,
    u: f64,
    p: f64,
}

fn sound(s: Side) -> f64 {
    (GAMMA * s.p / s.rho).sqrt()
}

/// Pressure function of one side and its derivative.
fn f_k(p: f64, s: Side) -> (f64, f64) {
    let g = GAMMA;
    if p > s.p {
        let a = 2.0 / ((g + 1.0) * s.rho);
        let b = (g - 1.0) / (g + 1.0) * s.p;
        let q = (a / (p + b)).sqrt();
        ((p - s.p) * q, q * (1.0 - 0.5 * (p - s.p) / (p + b)))
    } else {
        let c = sound(s);
        let e = (g - 1.0) / (2.0 * g);
        let r = (p / s.p).powf(e);
        (2.0 * c / (g - 1.0) * (r - 1.0), r / (s.rho * c) * (s.p / p))
    }
}

/// Exact star pressure by Newton iteration.
fn star(l: Side, r: Side) -> (f64, f64) {
    let mut p = 0.5 * (l.p + r.p);
    for _ in 0..100 {
        let (fl, dl) = f_k(p, l);
        let (fr, dr) = f_k(p, r);
        let step = (fl + fr + r.u - l.u) / (dl + dr);
        p = (p - step).max(1e-12);
        if step.abs() < 1e-15 * p {
            break;
        }
    }
    let u = 0.5 * (l.u + r.u) + 0.5 * (f_k(p, r).0 - f_k(p, l).0);
    (p, u)
}

/// Density of the exact solution at `xi = x / t` (Sod: left rarefaction, right shock).
fn exact_density(l: Side, r: Side, xi: f64) -> f64 {
    let g = GAMMA;
    let (ps, us) = star(l, r);
    let cl = sound(l);
    let head = l.u - cl;
    let cs = cl * (ps / l.p).powf((g - 1.0) / (2.0 * g));
    let tail = us - cs;
    let rho_sl = l.rho * (ps / l.p).powf(1.0 / g);
    let rho_sr = r.rho * ((ps / r.p + (g - 1.0) / (g + 1.0)) / ((g - 1.0) / (g + 1.0) * ps / r.p + 1.0));
    let shock = r.u + sound(r) * ((g + 1.0) / (2.0 * g) * ps / r.p + (g - 1.0) / (2.0 * g)).sqrt();
    if xi < head {
        l.rho
    } else if xi < tail {
        l.rho * (2.0 / (g + 1.0) + (g - 1.0) / ((g + 1.0) * cl) * (l.u - xi)).powf(2.0 / (g - 1.0))
    } else if xi < us {
        rho_sl
    } else if xi < shock {
        rho_sr
    } else {
        r.rho
    }
}

fn sod_l1(cells: usize) -> f64 {
    let model = GasModel::full(GAMMA, 1).unwrap();
    let grid = Grid::line(0.5, cells).unwrap();
    let (l, r) = (Side { rho: 1.0, u: 0.0, p: 1.0 }, Side { rho: 0.125, u: 0.0, p: 0.1 });
    let x = grid.centers().to_vec();
    let rho: Vec<f64> = x.iter().map(|&x| if x < 0.0 { l.rho } else { r.rho }).collect();
    let p: Vec<f64> = x.iter().map(|&x| if x < 0.0 { l.p } else { r.p }).collect();
    let s = entropy_from_pressure(&rho, &p, &model).unwrap().s;
    let st = FlowState::new(grid.clone(), rho, vec![0.0; cells], Some(s), 0.0).unwrap();
    let p0 = pressure(&st, &model);
    assert!((p0[0] - 1.0).abs() < 1e-12 && (p0[cells - 1] - 0.1).abs() < 1e-12);
    let series = run(&st, &model, 0.2, 0.2).unwrap();
    let fin = series.final_state.unwrap();
    assert!((fin.t - 0.2).abs() < 1e-14);
    let dx = grid.dx();
    x.iter().zip(&fin.rho).map(|(&x, &rho)| (rho - exact_density(l, r, x / 0.2)).abs() * dx).sum()
}

#[test]
fn sod_density_l1_error() {
    let e = sod_l1(2048);
    assert!(e <= 0.01, "L1 error {e}");
}

#[test]
fn sod_error_shrinks_with_resolution() {
    let (e1, e2) = (sod_l1(256), sod_l1(512));
    assert!(e2 < 0.75 * e1, "{e1} -> {e2}");
}

#[test]
fn exact_star_state() {
    let (p, u) = star(Side { rho: 1.0, u: 0.0, p: 1.0 }, Side { rho: 0.125, u: 0.0, p: 0.1 });
    assert!((p - 0.30313).abs() < 1e-5, "{p}");
    assert!((u - 0.92745).abs() < 1e-5, "{u}");
}
