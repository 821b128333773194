use bkeig::cli;
use bkeig::config::RunConfig;
use bkeig::error::Result;
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "bkeig",
    version,
    about = "Component-wise eigenpairs for Hammerstein operator systems on cones"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// TOML config file describing the problem
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Built-in problem (ode-example, pde-example)
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
}

impl Source {
    fn load(&self) -> Result<RunConfig> {
        match (&self.config, &self.preset) {
            (Some(path), None) => RunConfig::load(path),
            (None, Some(name)) => RunConfig::preset(name),
            _ => unreachable!("clap enforces exactly one source"),
        }
    }
}

#[derive(Args)]
struct CommonArgs {
    #[command(flatten)]
    source: Source,
    /// CSV output path (overrides output.csv_path)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Suppress stdout reporting
    #[arg(long)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for one eigenpair and write the eigenfunctions as CSV
    Solve(CommonArgs),
    /// Check the theorem hypotheses (lower-bound route + sampled probe)
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// Seed for the sampled inf probe
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Solve over an (r1, r2) lattice for every legal sign pattern
    Sweep(CommonArgs),
    /// Dump kernel samples as CSV
    KernelTable(CommonArgs),
    /// Show why a scalar eigenvalue cannot replace a component-wise pair
    DemoRemark {
        /// Suppress stdout reporting
        #[arg(long)]
        quiet: bool,
    },
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Solve(args) => {
            let cfg = args.source.load()?;
            cli::cmd_solve(&cfg, args.out.as_deref(), args.quiet)?;
            Ok(0)
        }
        Command::Verify { common, seed } => {
            let cfg = common.source.load()?;
            let outcome = cli::cmd_verify(&cfg, seed, common.out.as_deref(), common.quiet)?;
            Ok(if outcome.report.passes() { 0 } else { 1 })
        }
        Command::Sweep(args) => {
            let cfg = args.source.load()?;
            cli::cmd_sweep(&cfg, args.out.as_deref(), args.quiet)?;
            Ok(0)
        }
        Command::KernelTable(args) => {
            let cfg = args.source.load()?;
            cli::cmd_kernel_table(&cfg, args.out.as_deref(), args.quiet)?;
            Ok(0)
        }
        Command::DemoRemark { quiet } => {
            cli::cmd_demo_remark(quiet);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            // usage problems are configuration errors in this CLI's contract
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::exit_code(&e))
        }
    }
}
