//! Build the internal-energy envelopes and locate the crossing time `T*`.

use blowup_lab::blowup_time::{find_tstar, inviscid_bounds};
use blowup_lab::criteria::{check_icns_from_scalars, constants_table, ConstantInputs, CriterionInputs, CriterionKind};
use blowup_lab::gas_state::build_initial_data;
use blowup_lab::{GasModel, Grid, ProfileSpec};

fn main() -> blowup_lab::Result<()> {
    let model = GasModel::isentropic(2.0, 1)?;
    let data = build_initial_data(&ProfileSpec::gaussian(1.0, 1.0), &Grid::line(10.0, 1024)?, &model)?;
    let (mut inputs, mut snap) = CriterionInputs::from_state(&data, &model)?;

    // push the data into the satisfied region and spread it out so the
    // envelopes start apart
    let r = check_icns_from_scalars(&inputs)?;
    inputs.j0 *= 0.5 * r.rhs / r.lhs;
    inputs.g0 = 50.0;
    snap.ij = inputs.j0;
    snap.g = inputs.g0;
    let r = check_icns_from_scalars(&inputs)?;

    let consts = constants_table(CriterionKind::Isentropic, &model, &ConstantInputs::from_report(&r, &snap))?;
    let curves = inviscid_bounds(model.flow, &inputs, consts)?;
    let res = find_tstar(&curves);
    match res.tstar {
        Some(t) => println!("T* = {t:.10}  (residual {:.2e})", res.residual.unwrap_or(0.0)),
        None => println!("no crossing: {}", res.diagnostic.unwrap_or_default()),
    }
    for (t, lo, hi) in curves.sample(res.tstar.unwrap_or(1.0) * 1.5, 6) {
        println!("{t:10.4}  lower {lo:.6e}  upper {hi:.6e}");
    }
    Ok(())
}
