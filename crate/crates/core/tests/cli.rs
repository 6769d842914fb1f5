use std::path::Path;
use std::process::Command;

const BASE: &str = "[model]\ngamma = 2\ndim = 1\n[profile]\ndensity = gaussian\n[grid]\ncells = 256\n[solver]\nt_end = 0.2\nsnapshot_every = 0.05\n";

fn cli(dir: &Path, cmd: &str, config: &str, extra: &[&str]) -> (i32, String, String) {
    let cfg = dir.join(format!("{cmd}.cfg"));
    std::fs::write(&cfg, config).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_blowup-lab"))
        .arg(cmd)
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join(format!("out-{cmd}")))
        .args(extra)
        .output()
        .unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn check_writes_report() {
    let d = tempfile::tempdir().unwrap();
    let (code, stdout, _) = cli(d.path(), "check", BASE, &[]);
    assert_eq!(code, 0);
    assert!(stdout.contains("satisfied"));
    let r = json(&d.path().join("out-check/report.json"));
    let rhs = r["payload"]["criterion"]["rhs"].as_f64().unwrap();
    assert!((rhs - 0.088_388_347_648_318_45).abs() < 1e-15);
    assert!(r["payload"]["criterion"]["satisfied"].is_boolean());
    assert!(r.get("wall_time").is_none());
    assert!(d.path().join("out-check/curves.csv").exists());
}

#[test]
fn tstar_and_verify_outputs() {
    let d = tempfile::tempdir().unwrap();
    let (code, _, _) = cli(d.path(), "tstar", BASE, &[]);
    assert_eq!(code, 0);
    let r = json(&d.path().join("out-tstar/report.json"));
    assert!(r["payload"]["tstar"]["tstar"].is_null());
    let (code, _, err) = cli(d.path(), "verify", BASE, &[]);
    assert_eq!(code, 0, "{err}");
    let series = std::fs::read_to_string(d.path().join("out-verify/series.csv")).unwrap();
    let lines: Vec<&str> = series.lines().collect();
    assert_eq!(lines[0], "t,M,P,F,G,E_k,E_i_or_I,E_or_IE,H_or_IH_or_DIH,J_or_IJ,indicator,dissipation");
    assert_eq!(lines.len(), 1 + 5);
    let r = json(&d.path().join("out-verify/report.json"));
    assert!(r["payload"]["identities"]["residuals"].is_array());
}

#[test]
fn exit_codes() {
    let d = tempfile::tempdir().unwrap();
    let (code, _, err) = cli(d.path(), "check", "[model]\ngamma = 0.9\n[profile]\n", &[]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2") && err.contains("gamma > 1"), "{err}");
    let (code, _, err) = cli(d.path(), "check", &BASE.replace("gamma = 2", "gamma = 4"), &[]);
    assert_eq!(code, 3, "{err}");
    let (code, _, err) = cli(d.path(), "verify", &BASE.replace("t_end = 0.2", "t_end = 0"), &[]);
    assert_eq!(code, 3);
    assert!(err.contains("insufficient snapshots"), "{err}");
    let (code, _, err) = cli(d.path(), "simulate", &BASE.replace("density = gaussian", "density = gaussian\namplitude = 1e200"), &[]);
    assert_eq!(code, 4, "{err}");
    assert!(!d.path().join("out-simulate/report.json").exists());
}

#[test]
fn identical_runs_are_byte_identical() {
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    for cmd in ["verify", "chemin"] {
        let cfg = format!("samples = 5\n{BASE}");
        assert_eq!(cli(d1.path(), cmd, &cfg, &["--seed", "11"]).0, 0);
        assert_eq!(cli(d2.path(), cmd, &cfg, &["--seed", "11"]).0, 0);
        let dir = format!("out-{cmd}");
        for f in std::fs::read_dir(d1.path().join(&dir)).unwrap() {
            let name = f.unwrap().file_name();
            let a = std::fs::read(d1.path().join(&dir).join(&name)).unwrap();
            let b = std::fs::read(d2.path().join(&dir).join(&name)).unwrap();
            assert_eq!(a, b, "{dir}/{name:?}");
        }
    }
}

#[test]
fn sweep_children_and_index() {
    let cfg = format!(
        "{BASE}[sweep]\nparameter = profile.entropy_shift\nstart = -1\nstop = 2.5\ncount = 8\ncommand = check\n"
    )
    .replace("gamma = 2", "gamma = 2\nflow = full");
    let d1 = tempfile::tempdir().unwrap();
    let d4 = tempfile::tempdir().unwrap();
    assert_eq!(cli(d1.path(), "sweep", &cfg, &["--workers", "1"]).0, 0);
    let (code, stdout, err) = cli(d4.path(), "sweep", &cfg, &["--workers", "4"]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(stdout.lines().count(), 8);
    let r = json(&d4.path().join("out-sweep/report.json"));
    let children = r["payload"]["children"].as_array().unwrap();
    assert_eq!(children.len(), 8);
    for (i, c) in children.iter().enumerate() {
        assert_eq!(c["index"].as_u64().unwrap() as usize, i);
        assert!(d4.path().join("out-sweep").join(c["dir"].as_str().unwrap()).join("report.json").exists());
    }
    let a = std::fs::read(d1.path().join("out-sweep/report.json")).unwrap();
    let b = std::fs::read(d4.path().join("out-sweep/report.json")).unwrap();
    assert_eq!(a, b);
}
