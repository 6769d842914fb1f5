use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use blowup_lab::config::{parse_config, Command};
use blowup_lab::report::{execute, Payload, RunReport};
use blowup_lab::Error;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Check,
    Tstar,
    Simulate,
    Verify,
    Chemin,
    Sweep,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Check => Command::Check,
            Cmd::Tstar => Command::Tstar,
            Cmd::Simulate => Command::Simulate,
            Cmd::Verify => Command::Verify,
            Cmd::Chemin => Command::Chemin,
            Cmd::Sweep => Command::Sweep,
        }
    }
}

/// Blow-up criteria, bound curves and flow simulations for compressible gases.
#[derive(Debug, Parser)]
#[command(name = "blowup-lab", version)]
struct Cli {
    command: Cmd,
    #[arg(long)]
    config: PathBuf,
    /// Output directory (default: `[output] dir`, else `out`).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long)]
    seed: Option<u64>,
}

fn table(report: &RunReport) {
    match &report.payload {
        Payload::Check { criterion: Some(c), .. } => {
            println!("criterion  {}", c.kind.name());
            println!("lhs        {}", c.lhs);
            println!("rhs        {}", c.rhs);
            println!("satisfied  {}", c.satisfied);
        }
        Payload::Check { lifespan: Some(l), .. } => {
            println!("support    {}", l.support_radius);
            println!("lifespan   {}", l.lifespan);
        }
        Payload::Check { .. } => {}
        Payload::Tstar { criterion, tstar } => {
            println!("satisfied  {}", criterion.satisfied);
            match tstar.tstar {
                Some(t) => println!("T*         {t}"),
                None => println!("T*         none ({})", tstar.diagnostic.as_deref().unwrap_or("no crossing")),
            }
        }
        Payload::Simulate { run } | Payload::Verify { run, .. } => {
            println!("steps      {}", run.steps);
            println!("status     {:?}", run.status);
            println!("onset      {:?}", run.onset_time);
            if let Payload::Verify { identities, bounds, .. } = &report.payload {
                for r in &identities.residuals {
                    println!("{:<22} {:.3e}", r.name, r.max);
                }
                if let Some(b) = bounds {
                    for m in &b.margins {
                        println!("{:<22} {:+.3e}", m.name, m.worst);
                    }
                }
            }
        }
        Payload::Chemin { results } => {
            for (i, r) in results.iter().enumerate() {
                println!("{i:>4}  ratio {:.6}  holds {}", r.ratio, r.holds);
            }
        }
        Payload::Sweep { parameter, children } => {
            for c in children {
                println!("{parameter} = {:<12} exit {}  {}", c.value, c.exit_code, c.summary);
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = match std::fs::read_to_string(&cli.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", cli.config.display());
            return ExitCode::from(2);
        }
    };
    let run = || -> Result<RunReport, Error> {
        let mut cfg = parse_config(&text)?;
        cfg.command = cli.command.into();
        if let Some(s) = cli.seed {
            cfg.seed = s;
        }
        if cfg.command == Command::Sweep && cfg.sweep.is_none() {
            return Err(Error::Parse { line: text.lines().count() + 1, message: "sweep needs a [sweep] section".into() });
        }
        let out = cli.out.clone().or_else(|| cfg.output.dir.as_ref().map(PathBuf::from)).unwrap_or("out".into());
        execute(&cfg, Some(&out), cli.workers.max(1))
    };
    match run() {
        Ok(report) => {
            table(&report);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}: {e}", cli.command.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
