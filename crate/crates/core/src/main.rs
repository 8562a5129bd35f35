//! Command-line front end: run the jobs of a TOML run file and emit
//! JSON/CSV reports. Exit code 0 means every job ran and passed; 1 means
//! the suite ran but at least one job failed; 2 means the run could not
//! start (bad arguments, invalid configuration, unwritable output).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hardygroups::config::{OutputFormat, RunConfig};
use hardygroups::report::{
    prepare_output_dir, run_suite, summary_lines, write_outputs, SuiteSelection,
};

#[derive(Parser)]
#[command(
    name = "hardygroups",
    version,
    about = "Quadrature checks of radial weighted-norm identities, inequalities and their \
             sharp constants on groups with anisotropic dilations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run only the identity jobs of the run file.
    Verify(RunArgs),
    /// Run only the sharpness jobs of the run file.
    Sharpness(RunArgs),
    /// Run every job of the run file.
    All(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML run file.
    config: PathBuf,
    /// Output directory; overrides the run file's [output] dir.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format to write; overrides the run file's [output] format.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Worker threads (0 = one per core); overrides the run file.
    #[arg(long)]
    workers: Option<usize>,
    /// Seed for randomized cubature; overrides every seed in the run file.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Both,
}

impl From<FormatArg> for OutputFormat {
    fn from(v: FormatArg) -> Self {
        match v {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Both => OutputFormat::Both,
        }
    }
}

fn run(selection: SuiteSelection, args: &RunArgs) -> Result<bool, hardygroups::Error> {
    let mut raw = RunConfig::from_path(&args.config)?;
    if let Some(seed) = args.seed {
        raw.seed = Some(seed);
        if let Some(quad) = raw.quad.as_mut() {
            quad.seed = Some(seed);
        }
    }
    if let Some(workers) = args.workers {
        raw.workers = Some(workers);
    }
    let mut cfg = raw.resolve();
    if let Some(seed) = args.seed {
        cfg.quad.seed = seed;
    }
    if let Some(out) = &args.out {
        cfg.output.dir = out.display().to_string();
    }
    if let Some(format) = args.format {
        cfg.output.format = format.into();
    }
    cfg.validate()?;

    let dir = PathBuf::from(&cfg.output.dir);
    prepare_output_dir(&dir)?;

    let result = run_suite(&cfg, selection)?;
    print!("{}", summary_lines(&result));

    let (json, csv) = match cfg.output.format {
        OutputFormat::Json => (true, false),
        OutputFormat::Csv => (false, true),
        OutputFormat::Both => (true, true),
    };
    for path in write_outputs(&result, &dir, json, csv)? {
        println!("wrote {}", path.display());
    }
    Ok(result.overall_pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (selection, args) = match &cli.command {
        Command::Verify(a) => (SuiteSelection::Identities, a),
        Command::Sharpness(a) => (SuiteSelection::Sharpness, a),
        Command::All(a) => (SuiteSelection::All, a),
    };
    match run(selection, args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
    }
}
