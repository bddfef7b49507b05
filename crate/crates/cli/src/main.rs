//! `numrad` command-line front end.

mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use numrad::bounds::{self, catalog_list, parse_bound_list, BoundId, MatrixContext, Probe};
use numrad::ensemble::{run_study, EnsembleSpec, Family};
use numrad::io::{read_matrix, MatrixFormat};
use numrad::{numerical_radius, Error, RadiusConfig};

use render::{BoundRow, Output};

const EXIT_OK: u8 = 0;
const EXIT_INPUT: u8 = 1;
const EXIT_ENCLOSURE: u8 = 2;
const EXIT_VIOLATION: u8 = 3;

#[derive(Parser)]
#[command(
    name = "numrad",
    version,
    about = "Numerical radius enclosures and inequality checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certified enclosure of the numerical radius of a matrix file.
    Radius(RadiusArgs),
    /// Evaluate catalog bounds on a matrix file.
    Bounds(BoundsArgs),
    /// Run catalog bounds over a seeded random ensemble.
    Study(StudyArgs),
    /// List the bound catalog.
    Catalog(CatalogArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Auto,
    Matrixmarket,
    Json,
}

#[derive(Args)]
struct InputArgs {
    /// Matrix file (.mtx or .json).
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    format: FormatArg,
}

impl InputArgs {
    fn load(&self) -> numrad::Result<numrad::linalg::ComplexMatrix> {
        let format = match self.format {
            FormatArg::Auto => None,
            FormatArg::Matrixmarket => Some(MatrixFormat::MatrixMarket),
            FormatArg::Json => Some(MatrixFormat::Json),
        };
        read_matrix(&self.input, format)
    }
}

#[derive(Args)]
struct RadiusFlags {
    /// Initial grid size.
    #[arg(long, default_value_t = 1024)]
    grid: usize,
    /// Enclosure width target (default 1e-9 * max(1, ||A||)).
    #[arg(long)]
    width: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl RadiusFlags {
    fn config(&self, samples: usize) -> RadiusConfig {
        RadiusConfig {
            grid_points: self.grid,
            target_width: self.width,
            oracle_samples: samples,
            seed: self.seed,
            ..RadiusConfig::default()
        }
    }
}

#[derive(Args)]
struct RadiusArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    radius: RadiusFlags,
    /// Random unit vectors for the sampling cross-check (0 disables it).
    #[arg(long, default_value_t = 0)]
    samples: usize,
    #[arg(long, value_enum, default_value = "human")]
    output: Output,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundSelection {
    /// Comma-separated bound ids, or "all".
    #[arg(long, default_value = "all")]
    bounds: String,
    /// Corollary exponents, e.g. 2,3.
    #[arg(long, value_delimiter = ',')]
    r: Vec<f64>,
}

impl BoundSelection {
    fn ids(&self) -> numrad::Result<Vec<BoundId>> {
        parse_bound_list(&self.bounds)
    }
}

#[derive(Args)]
struct BoundsArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    selection: BoundSelection,
    #[command(flatten)]
    radius: RadiusFlags,
    #[arg(long, value_enum, default_value = "human")]
    output: Output,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StudyArgs {
    #[arg(long)]
    family: String,
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    count: usize,
    #[command(flatten)]
    selection: BoundSelection,
    #[command(flatten)]
    radius: RadiusFlags,
    #[arg(long, value_enum, default_value = "human")]
    output: Output,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CatalogArgs {
    #[arg(long, value_enum, default_value = "human")]
    output: Output,
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    if let Error::UnknownBound(_) = e {
        let ids: Vec<_> = BoundId::ALL.iter().map(|id| id.as_str()).collect();
        eprintln!("valid bound ids: {}", ids.join(", "));
    }
    ExitCode::from(EXIT_INPUT)
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_radius(args: &RadiusArgs) -> Result<u8, Error> {
    let a = args.input.load()?;
    let cfg = args.radius.config(args.samples);
    let (est, code) = match numerical_radius(&a, &cfg) {
        Ok(est) => (est, EXIT_OK),
        Err(Error::EnclosureNotReached {
            width,
            target,
            best,
        }) => {
            eprintln!("warning: enclosure width {width:e} above target {target:e}; reporting best estimate");
            (*best, EXIT_ENCLOSURE)
        }
        Err(e) => return Err(e),
    };
    emit(&render::radius(&est, args.output)?, args.out.as_deref())?;
    Ok(code)
}

fn cmd_bounds(args: &BoundsArgs) -> Result<u8, Error> {
    let ids = args.selection.ids()?;
    let a = args.input.load()?;
    let ctx = MatrixContext::new(&a, &args.radius.config(0))?;
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for probe in Probe::expand(&ids, &args.selection.r) {
        if probe.id.arity() == 2 {
            skipped.push(probe.label());
            continue;
        }
        let outcome = bounds::evaluate(&ctx, &probe, None)?;
        rows.push(BoundRow {
            label: probe.label(),
            diagnostic: probe.id.is_diagnostic(),
            outcome,
        });
    }
    let counted = rows.iter().any(|r| !r.diagnostic && r.outcome.violated());
    emit(
        &render::bounds(&rows, &skipped, args.output)?,
        args.out.as_deref(),
    )?;
    Ok(if counted { EXIT_VIOLATION } else { EXIT_OK })
}

fn cmd_study(args: &StudyArgs) -> Result<u8, Error> {
    let family: Family = args.family.parse()?;
    let ids = args.selection.ids()?;
    let spec = EnsembleSpec::new(family, args.dim, args.count, args.radius.seed)?;
    let probes = Probe::expand(&ids, &args.selection.r);
    let report = run_study(&spec, &probes, &args.radius.config(0))?;
    emit(&render::study(&report, args.output)?, args.out.as_deref())?;
    Ok(if report.counted_violations() > 0 {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    })
}

fn cmd_catalog(args: &CatalogArgs) -> Result<u8, Error> {
    print!("{}", render::catalog(&catalog_list(), args.output)?);
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { EXIT_OK });
        }
    };
    let result = match &cli.command {
        Command::Radius(a) => cmd_radius(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Study(a) => cmd_study(a),
        Command::Catalog(a) => cmd_catalog(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => fail(&e),
    }
}
