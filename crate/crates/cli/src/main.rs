use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use antmesh_core::experiment::{self, jobs, run_once, RunRow};
use antmesh_core::scenario::{self, parse_scenario, preset, Scenario, PRESETS};
use antmesh_core::ConfigError;
use clap::{Parser, Subcommand};

/// Seeded discrete-event simulator for ant-colony routing in wireless mesh networks.
#[derive(Parser)]
#[command(name = "antmesh-sim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file (or `preset:<name>`) over its seeds and sweep.
    Run {
        scenario: String,
        /// Seed range `a..b` (inclusive) or list `a,b,c`; overrides the file.
        #[arg(long)]
        seeds: Option<String>,
        /// Extra sweep axes `key=v1,v2,...`; repeat for several axes.
        #[arg(long)]
        sweep: Vec<String>,
        /// Write one event trace per run next to the CSV (or in the working directory).
        #[arg(long)]
        trace: bool,
        /// CSV destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parse and check a scenario, printing its fully expanded form.
    Validate { scenario: String },
    /// List built-in presets.
    Presets,
}

enum Failure {
    Config(String),
    Runtime(String),
}

fn load(arg: &str) -> Result<Scenario, Failure> {
    if let Some(name) = arg.strip_prefix("preset:") {
        return preset(name).ok_or_else(|| Failure::Config(format!("unknown preset '{name}'")));
    }
    let text = fs::read_to_string(arg).map_err(|e| Failure::Config(format!("{arg}: {e}")))?;
    parse_scenario(&text).map_err(|e: ConfigError| Failure::Config(format!("{arg}: {e}")))
}

fn apply_overrides(s: &mut Scenario, seeds: Option<&str>, sweeps: &[String]) -> Result<(), Failure> {
    if let Some(v) = seeds {
        s.run.seeds = scenario::parse_seeds(v).map_err(|m| Failure::Config(format!("--seeds: {m}")))?;
    }
    for sw in sweeps {
        let (k, v) = sw.split_once('=').ok_or_else(|| Failure::Config(format!("--sweep expects key=values, got '{sw}'")))?;
        let values: Vec<String> = v.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect();
        let key = k.trim().to_string();
        s.sweep.retain(|a| a.key != key);
        s.sweep.push(scenario::SweepAxis { key, values });
    }
    s.validate().map_err(|e| Failure::Config(e.to_string()))
}

fn trace_path(dir: &Path, s: &Scenario, seed: u64, index: usize) -> PathBuf {
    dir.join(format!("{}-seed{seed}-point{index}.trace", s.name))
}

fn run(arg: &str, seeds: Option<&str>, sweeps: &[String], trace: bool, out: Option<&Path>) -> Result<(), Failure> {
    let mut s = load(arg)?;
    apply_overrides(&mut s, seeds, sweeps)?;
    let seeds = s.run.seeds.clone();
    let rows: Vec<RunRow> = if trace {
        // traced runs go one at a time so each file is written in full
        let dir = out.and_then(Path::parent).map(Path::to_path_buf).unwrap_or_default();
        let all = jobs(&s, &seeds).map_err(|e| Failure::Runtime(e.to_string()))?;
        let n_points = s.sweep_points().len();
        let mut rows = Vec::with_capacity(all.len());
        for (i, j) in all.iter().enumerate() {
            let path = trace_path(&dir, &s, j.seed, i % n_points);
            let file = File::create(&path).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
            let o = run_once(&j.scenario, j.seed, Some(Box::new(BufWriter::new(file)))).map_err(|e| Failure::Runtime(e.to_string()))?;
            rows.push(RunRow::from_ledger(&j.scenario, j.seed, &o.ledger));
        }
        rows
    } else {
        experiment::run_experiment(&s, &seeds).map_err(|e| Failure::Runtime(e.to_string()))?
    };
    let write = |w: &mut dyn Write| experiment::write_csv(w, &rows).map_err(|e| Failure::Runtime(e.to_string()));
    match out {
        Some(p) => {
            let mut f = File::create(p).map_err(|e| Failure::Runtime(format!("{}: {e}", p.display())))?;
            write(&mut f)
        }
        None => write(&mut io::stdout().lock()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { scenario, seeds, sweep, trace, out } => run(&scenario, seeds.as_deref(), &sweep, trace, out.as_deref()),
        Command::Validate { scenario } => load(&scenario).map(|s| print!("{}", scenario::serialize_scenario(&s))),
        Command::Presets => {
            for (name, about) in PRESETS {
                println!("{name:<22} {about}");
            }
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(m)) => {
            eprintln!("config error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("run aborted: {m}");
            ExitCode::from(2)
        }
    }
}
