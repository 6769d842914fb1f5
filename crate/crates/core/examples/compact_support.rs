//! Life-span bound for data supported in a ball.

use blowup_lab::criteria::compact_support_lifespan;
use blowup_lab::gas_state::{build_initial_data, DensityProfile, EntropyProfile, VelocityProfile};
use blowup_lab::{snapshot, GasModel, Grid, ProfileSpec};

fn main() -> blowup_lab::Result<()> {
    let radius = 2.0;
    for gamma in [1.4, 2.0, 3.0, 5.0] {
        let model = GasModel::isentropic(gamma, 1)?;
        let profile = ProfileSpec {
            density: DensityProfile::CompactBump { amplitude: 1.0, radius, order: 2 },
            velocity: VelocityProfile::XGaussian { amplitude: 0.5, width: 1.0 },
            entropy: EntropyProfile::Constant { value: 0.0 },
        };
        let data = build_initial_data(&profile, &Grid::line(4.0, 2048)?, &model)?;
        let s = snapshot(&data, &model)?;
        let t = compact_support_lifespan(s.m, s.energy(model.flow), s.f, s.g, radius, gamma, 1)?;
        println!("gamma {gamma:>3}: T <= {t:.6}");
    }
    Ok(())
}
