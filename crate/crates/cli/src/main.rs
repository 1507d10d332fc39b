//! `magnetoflow` command-line front end.

mod error;
mod run;
mod runspec;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::error::CliError;
use crate::runspec::{parse_runspec, RunSpec, TaskSpec};

#[derive(Debug, Parser)]
#[command(name = "magnetoflow", version, about = "Magnetic flowlines on surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate one flowline.
    Integrate(Common),
    /// Locate magnetic parallels of a revolution surface or tube.
    Parallels(Common),
    /// Evaluate the functional, its Euler-Lagrange residual and variations.
    Variational(Common),
    /// Run the stability test on a critical curve.
    Stability(Common),
    /// Classify uniform-field flowlines on a space form.
    Classify(Common),
    /// Evaluate a closed-form formula.
    Oracle(Common),
    /// Regenerate every acceptance experiment as golden files.
    ReproducePaper(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// Run spec (TOML, schema "magnetoflow/1"); optional for reproduce-paper.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Seed for randomized experiments; overrides the spec's `seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the task's `tolerance`.
    #[arg(long)]
    tolerance: Option<f64>,
}

impl Command {
    fn parts(&self) -> (&'static str, &Common) {
        match self {
            Command::Integrate(c) => ("integrate", c),
            Command::Parallels(c) => ("parallels", c),
            Command::Variational(c) => ("variational", c),
            Command::Stability(c) => ("stability", c),
            Command::Classify(c) => ("classify", c),
            Command::Oracle(c) => ("oracle", c),
            Command::ReproducePaper(c) => ("reproduce-paper", c),
        }
    }
}

fn load(path: &Path) -> Result<RunSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::validation("--spec", format!("{}: {e}", path.display())))?;
    parse_runspec(&text)
}

fn execute(cli: &Cli) -> Result<run::RunOutput, CliError> {
    let (name, common) = cli.command.parts();
    let mut spec = match &common.spec {
        Some(path) => load(path)?,
        None if name == "reproduce-paper" => RunSpec {
            schema: runspec::SCHEMA.to_string(),
            seed: None,
            surface: None,
            field: None,
            task: TaskSpec::ReproducePaper {},
            output: Default::default(),
        },
        None => return Err(CliError::validation("--spec", format!("`{name}` needs a spec file"))),
    };
    if spec.task.name() != name {
        return Err(CliError::validation(
            "task.kind",
            format!("spec describes `{}` but the command is `{name}`", spec.task.name()),
        ));
    }
    if let Some(t) = common.tolerance {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::validation("--tolerance", "must be positive and finite"));
        }
        spec.task.override_tolerance(t)?;
        runspec::validate(&spec)?;
    }
    run::run(&spec, &common.out, common.seed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(out) => {
            for line in &out.lines {
                println!("{line}");
            }
            for f in &out.files {
                println!("wrote {}", f.display());
            }
            match out.failure {
                None => ExitCode::SUCCESS,
                Some(message) => {
                    let err = CliError::Failed(message);
                    report(&err);
                    ExitCode::from(err.exit_code())
                }
            }
        }
        Err(err) => {
            report(&err);
            ExitCode::from(err.exit_code())
        }
    }
}

fn report(err: &CliError) {
    let record = serde_json::to_string(&err.record()).unwrap_or_else(|_| format!("{{\"error\":\"{err}\"}}"));
    eprintln!("{record}");
}
