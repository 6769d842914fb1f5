//! Constant-viscosity and degenerate-viscosity runs: energy decays at the
//! dissipation rate.

use blowup_lab::gas_state::{build_initial_data, VelocityProfile};
use blowup_lab::simulate::{run, verify_identities};
use blowup_lab::{GasModel, Grid, ProfileSpec, Regime};

fn main() -> blowup_lab::Result<()> {
    let profile = ProfileSpec::gaussian(1.0, 1.0).with_velocity(VelocityProfile::XGaussian { amplitude: 0.3, width: 1.0 });
    let regimes = [
        Regime::ConstantViscosity { mu: 0.1, lambda: 0.0, kappa: 0.0 },
        Regime::Degenerate { alpha: 2.0 },
    ];
    for regime in regimes {
        let model = GasModel::isentropic(2.0, 1)?.with_regime(regime)?;
        let data = build_initial_data(&profile, &Grid::line(10.0, 1024)?, &model)?;
        let series = run(&data, &model, 0.3, 0.005)?;
        let first = &series.entries[0];
        let last = series.entries.last().unwrap();
        let rep = verify_identities(&series, &model)?;
        println!(
            "{regime:?}: IE {:.6} -> {:.6}, dissipation residual {:.2e}",
            first.snapshot.ie,
            last.snapshot.ie,
            rep.max("dissipation").unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
