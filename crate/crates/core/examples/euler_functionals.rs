//! Evolve an isentropic Euler flow and check the conservation and virial
//! identities along the trajectory.

use blowup_lab::gas_state::{build_initial_data, VelocityProfile};
use blowup_lab::simulate::{run, verify_identities};
use blowup_lab::{GasModel, Grid, ProfileSpec};

fn main() -> blowup_lab::Result<()> {
    let model = GasModel::isentropic(2.0, 1)?;
    let profile = ProfileSpec::gaussian(1.0, 1.0).with_velocity(VelocityProfile::XGaussian { amplitude: 0.2, width: 1.0 });
    let data = build_initial_data(&profile, &Grid::line(10.0, 2048)?, &model)?;
    let series = run(&data, &model, 0.5, 0.01)?;

    println!("{:>6} {:>14} {:>14} {:>14} {:>12}", "t", "M", "F", "G", "indicator");
    for e in series.entries.iter().step_by(10) {
        let s = &e.snapshot;
        println!("{:6.2} {:14.10} {:14.10} {:14.10} {:12.6}", e.t, s.m, s.f, s.g, e.indicator);
    }
    let report = verify_identities(&series, &model)?;
    for r in &report.residuals {
        println!("{:<22} {:.3e}", r.name, r.max);
    }
    Ok(())
}
