use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qes_cli::config::{parse_interval, Settings};
use qes_cli::{inspect, run, verify, CliError, EXIT_CHECK_FAILED, EXIT_INPUT_ERROR, EXIT_PASS};
use qes_core::expr::ParameterBindings;

/// Build QES potentials with two known eigenstates from a seed W+(x) and verify them.
#[derive(Parser)]
#[command(name = "qes", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in seed families.
    ListSeeds {
        #[arg(long, default_value = "text", value_parser = ["text", "records"])]
        format: String,
    },
    /// Write W, W1, V-, V+, psi0, psi1 on a grid as CSV plus a metadata file.
    Generate {
        #[command(flatten)]
        run: RunArgs,
        /// CSV output path.
        #[arg(short, long)]
        output: PathBuf,
        /// Metadata path (default: the CSV path with extension .meta).
        #[arg(long)]
        metadata: Option<PathBuf>,
    },
    /// Run the full check suite; exit 0 on pass, 1 on a failed check, 2 on bad input.
    Verify {
        #[command(flatten)]
        run: RunArgs,
        /// Also write the report to this file.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Parse an expression and test it as a seed without running the pipeline.
    CheckExpr {
        expr: String,
        #[arg(short = 'p', long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
        #[arg(long, value_name = "A,B", allow_hyphen_values = true)]
        interval: Option<String>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Built-in seed name (see list-seeds).
    #[arg(long, conflicts_with = "wplus")]
    seed: Option<String>,
    /// Custom seed expression in x.
    #[arg(long, allow_hyphen_values = true)]
    wplus: Option<String>,
    /// Parameter binding, repeatable.
    #[arg(short = 'p', long = "param", value_name = "NAME=VALUE")]
    params: Vec<String>,
    #[arg(long, value_name = "A,B", allow_hyphen_values = true)]
    interval: Option<String>,
    /// Number of grid points.
    #[arg(long)]
    points: Option<usize>,
    /// key=value configuration file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    eigen_tol: Option<f64>,
    #[arg(long)]
    residual_tol: Option<f64>,
    #[arg(long, value_parser = ["text", "records"])]
    format: Option<String>,
}

fn parse_params(items: &[String]) -> Result<ParameterBindings, CliError> {
    let mut out = ParameterBindings::new();
    for item in items {
        let (name, value) = ParameterBindings::parse_assignment(item).map_err(CliError::Config)?;
        out.insert(&name, value);
    }
    Ok(out)
}

impl RunArgs {
    fn settings(&self) -> Result<Settings, CliError> {
        let flags = Settings {
            seed: self.seed.clone(),
            wplus: self.wplus.clone(),
            params: parse_params(&self.params)?,
            interval: self.interval.as_deref().map(parse_interval).transpose()?,
            points: self.points,
            eigen_tol: self.eigen_tol,
            residual_tol: self.residual_tol,
            format: self.format.as_deref().map(str::parse).transpose()?,
        };
        let file = match &self.config {
            Some(path) => Settings::load(path)?,
            None => Settings::default(),
        };
        Ok(file.overridden_by(flags))
    }
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn execute(command: Command) -> Result<u8, CliError> {
    match command {
        Command::ListSeeds { format } => {
            print!("{}", inspect::list_seeds(format.parse()?));
            Ok(EXIT_PASS)
        }
        Command::Generate { run: args, output, metadata } => {
            let cfg = args.settings()?.into_config()?;
            let prepared = run::prepare(&cfg)?;
            let generated = run::generate(&prepared)?;
            let meta_path = metadata.unwrap_or_else(|| output.with_extension("meta"));
            write(&output, &generated.csv)?;
            write(&meta_path, &generated.metadata)?;
            eprintln!(
                "wrote {} rows to {} and metadata to {}",
                prepared.grid.len(),
                output.display(),
                meta_path.display()
            );
            Ok(EXIT_PASS)
        }
        Command::Verify { run: args, report } => {
            let cfg = args.settings()?.into_config()?;
            let prepared = run::prepare(&cfg)?;
            let result = verify::verify(&prepared, &cfg);
            let text = result.render(cfg.format);
            print!("{text}");
            if let Some(path) = report {
                write(&path, &text)?;
            }
            Ok(if result.overall() { EXIT_PASS } else { EXIT_CHECK_FAILED })
        }
        Command::CheckExpr { expr, params, interval } => {
            let params = parse_params(&params)?;
            let interval = interval.as_deref().map(parse_interval).transpose()?;
            let diag = inspect::check_expr(&expr, &params, interval)?;
            print!("{}", diag.text);
            Ok(if diag.admissible { EXIT_PASS } else { EXIT_CHECK_FAILED })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT_ERROR)
        }
    }
}
