use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ncbundle_cli::config::{parse_stage, KR_SWEEP_PRESET};
use ncbundle_cli::{
    kr_sweep, run_scenario, write_outputs, CliError, Overrides, RunReport, ScenarioConfig,
};

#[derive(Parser)]
#[command(
    name = "ncbundle",
    version,
    about = "Equivariant spectral triples over noncommutative torus bundles"
)]
struct Cli {
    /// Override the scenario tolerance.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Override the lattice cutoff Λ.
    #[arg(long, global = true)]
    lambda: Option<u32>,
    /// Override the sampling seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (default: out/<scenario id>).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every stage of a scenario and write the report and spectra.
    Run {
        /// Config file or preset name.
        config: String,
    },
    /// Verify the base real structures for all small (j, n).
    Sweep {
        #[arg(long, required = true)]
        kr: bool,
        /// Largest total dimension j + n to build.
        #[arg(long, default_value_t = 6)]
        max_dim: usize,
    },
    /// Run a single stage of a scenario.
    Verify {
        config: String,
        /// Stage name: principality, triple, projectability, fibres, base-kr,
        /// connection, compatibility, sectors, reprojection.
        #[arg(long)]
        only: String,
    },
}

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("NCG_NUM_THREADS") else {
        return Ok(());
    };
    let n: usize = v.parse().map_err(|_| {
        CliError::Usage(format!(
            "NCG_NUM_THREADS must be a positive integer, got {v:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}

fn print_report(r: &RunReport) {
    println!(
        "scenario {} (n={}, m={}, lambda={}, seed={}, tolerance={:e})",
        r.scenario, r.n, r.m, r.lambda, r.seed, r.tolerance
    );
    for s in &r.stages {
        let status = match (s.pass, s.required) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "INFO",
        };
        println!(
            "  {:<15} {status}  {:>4} checks  max violation {:.3e}",
            s.stage,
            s.checks.len(),
            s.checks.max_violation()
        );
        for f in s.checks.failures() {
            println!(
                "      {}: {:.3e} (radius {})",
                f.check, f.violation, f.radius
            );
        }
    }
}

fn load(arg: &str, o: &Overrides) -> Result<ScenarioConfig, CliError> {
    let mut c = ScenarioConfig::load(arg)?;
    c.apply(o);
    Ok(c)
}

fn sweep(cli: &Cli, max_dim: usize) -> Result<i32, CliError> {
    let seed = cli.seed.unwrap_or(1);
    let tol = cli.tolerance.unwrap_or(1e-12);
    let start = std::time::Instant::now();
    let r = kr_sweep(max_dim, cli.lambda, seed, tol)?;
    for c in &r.cases {
        let flags = [
            (c.recipe.pathological, " wrong-sign j0"),
            (c.recipe.amended, " amended D0'"),
        ]
        .iter()
        .filter(|f| f.0)
        .map(|f| f.1)
        .collect::<String>();
        println!(
            "  (j={}, n={}) cutoff {} {}  max violation {:.3e}{flags}",
            c.j,
            c.n,
            c.cutoff,
            if c.pass { "PASS" } else { "FAIL" },
            c.max_violation
        );
        for f in &c.failures {
            println!("      {f}");
        }
    }
    let dir = cli
        .out_dir
        .clone()
        .unwrap_or_else(|| Path::new("out").join(KR_SWEEP_PRESET));
    std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    let path = dir.join("kr_sweep.json");
    let json = serde_json::to_string_pretty(&r).expect("sweep report serializes") + "\n";
    std::fs::write(&path, json).map_err(|e| CliError::io(&path, e))?;
    println!("report: {}", path.display());
    println!("wall time: {:.2?}", start.elapsed());
    Ok(if r.pass { 0 } else { 1 })
}

fn dispatch(cli: &Cli) -> Result<i32, CliError> {
    init_threads()?;
    let o = Overrides {
        tolerance: cli.tolerance,
        lambda: cli.lambda,
        seed: cli.seed,
    };
    match &cli.command {
        Command::Sweep { max_dim, .. } => sweep(cli, *max_dim),
        Command::Run { config } if config == KR_SWEEP_PRESET => sweep(cli, 6),
        Command::Run { config } => {
            let c = load(config, &o)?;
            let mut outcome = run_scenario(&c, None)?;
            let dir = cli
                .out_dir
                .clone()
                .unwrap_or_else(|| Path::new("out").join(&c.id));
            let path = write_outputs(&mut outcome, &c, &dir)?;
            print_report(&outcome.report);
            for s in &outcome.report.spectra {
                println!(
                    "  spectrum {:<15} {} eigenvalues, {} distinct -> {}",
                    s.operator,
                    s.dimension,
                    s.distinct,
                    dir.join(&s.path).display()
                );
            }
            println!("report: {}", path.display());
            println!("wall time: {:.2?}", outcome.report.wall_time);
            Ok(outcome.exit_code())
        }
        Command::Verify { config, only } => {
            let stage = parse_stage(only)?;
            let c = load(config, &o)?;
            let mut outcome = run_scenario(&c, Some(stage))?;
            print_report(&outcome.report);
            if let Some(dir) = &cli.out_dir {
                let path = write_outputs(&mut outcome, &c, dir)?;
                println!("report: {}", path.display());
            }
            println!("wall time: {:.2?}", outcome.report.wall_time);
            Ok(outcome.exit_code())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
