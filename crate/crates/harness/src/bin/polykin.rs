use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use polykin_harness::{run, Experiment, HarnessError, RunConfig};

#[derive(Parser)]
#[command(name = "polykin", version, about = "Run the polykin acceptance experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its report and CSV files.
    Run {
        /// TOML configuration; omitted keys take the experiment's reference values.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Experiment to run; overrides the name in the file.
        #[arg(long)]
        experiment: Option<String>,
        /// Output root (POLYKIN_OUT takes precedence).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads for the parallel chain ensembles.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Parse and validate a configuration without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// List the experiment names.
    ListExperiments,
}

fn load(path: Option<&Path>, experiment: Option<&str>) -> Result<RunConfig, HarnessError> {
    let named = experiment.map(Experiment::from_str).transpose()?;
    let Some(path) = path else {
        return named.map(RunConfig::reference).ok_or_else(|| {
            HarnessError::Parse("pass --config or --experiment".into())
        });
    };
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Parse(format!("{}: {e}", path.display())))?;
    let Some(e) = named else {
        return RunConfig::from_toml_str(&text, None);
    };
    let mut table: toml::Table = toml::from_str(&text).map_err(|e| HarnessError::Parse(e.to_string()))?;
    let section = table
        .entry("experiment")
        .or_insert_with(|| toml::Value::Table(toml::Table::new()));
    if let Some(s) = section.as_table_mut() {
        s.insert("name".into(), toml::Value::String(e.name().into()));
    }
    RunConfig::from_toml_str(&table.to_string(), None)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::ListExperiments => {
            for e in Experiment::ALL {
                println!("{:<22} {}", e.name(), e.description());
            }
            Ok(0)
        }
        Command::Validate { config } => load(Some(&config), None).and_then(|c| {
            c.validate()?;
            println!("{}: valid {} configuration", config.display(), c.experiment.name);
            Ok(0)
        }),
        Command::Run { config, experiment, out, seed, threads } => {
            load(config.as_deref(), experiment.as_deref()).and_then(|mut c| {
                if let Some(o) = out {
                    c.experiment.output_dir = o;
                }
                if let Some(s) = seed {
                    c.experiment.seed = s;
                }
                if let Some(n) = threads {
                    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| {
                        HarnessError::Runtime { context: "thread pool".into(), message: e.to_string() }
                    })?;
                }
                let rep = run(&c)?;
                print!("{}", rep.summary());
                println!("report: {}", polykin_harness::output_dir(&c).join("report.json").display());
                Ok(if rep.pass { 0 } else { 1 })
            })
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
