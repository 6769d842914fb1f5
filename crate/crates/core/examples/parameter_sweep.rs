//! Sweep the entropy shift of a full-Euler configuration in parallel.

use blowup_lab::config::parse_config;
use blowup_lab::report::{execute, Payload};

const CONFIG: &str = "\
command = sweep
[model]
gamma = 1.4
flow = full
[profile]
density = gaussian
[sweep]
parameter = profile.entropy_shift
start = -4
stop = 4
count = 9
command = check
";

fn main() -> blowup_lab::Result<()> {
    let cfg = parse_config(CONFIG)?;
    let out = std::env::temp_dir().join("blowup-lab-sweep");
    let report = execute(&cfg, Some(&out), 4)?;
    if let Payload::Sweep { children, .. } = &report.payload {
        for c in children {
            let get = |k: &str| c.summary[k].as_f64().unwrap_or(f64::NAN);
            println!("shift {:>5.1}  lhs {:.4e}  rhs {:.4e}", c.value, get("lhs"), get("rhs"));
        }
    }
    println!("reports under {}", out.display());
    Ok(())
}
