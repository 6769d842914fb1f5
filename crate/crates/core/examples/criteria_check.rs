//! Evaluate the isentropic and full inviscid criteria for a Gaussian bump,
//! then for scalar inputs with the virial energy lowered below the threshold.

use blowup_lab::criteria::{check_cns, check_icns, check_icns_from_scalars, CriterionInputs};
use blowup_lab::gas_state::{build_initial_data, EntropyProfile};
use blowup_lab::{GasModel, Grid, ProfileSpec};

fn main() -> blowup_lab::Result<()> {
    let grid = Grid::line(10.0, 1024)?;
    let profile = ProfileSpec::gaussian(1.0, 1.0);

    let iso = GasModel::isentropic(2.0, 1)?;
    let data = build_initial_data(&profile, &grid, &iso)?;
    let r = check_icns(&data, &iso)?;
    println!("isentropic  lhs {:.6e}  rhs {:.6e}  satisfied {}", r.lhs, r.rhs, r.satisfied);

    let full = GasModel::full(1.4, 1)?;
    let data = build_initial_data(&profile.clone().with_entropy(EntropyProfile::Constant { value: 0.5 }), &grid, &full)?;
    let r = check_cns(&data, &full)?;
    println!("full        lhs {:.6e}  rhs {:.6e}  satisfied {}", r.lhs, r.rhs, r.satisfied);

    let data = build_initial_data(&profile, &grid, &iso)?;
    let (mut inputs, _): (CriterionInputs, _) = CriterionInputs::from_state(&data, &iso)?;
    inputs.j0 *= 0.1;
    let r = check_icns_from_scalars(&inputs)?;
    println!("scalars     lhs {:.6e}  rhs {:.6e}  satisfied {}", r.lhs, r.rhs, r.satisfied);
    Ok(())
}
