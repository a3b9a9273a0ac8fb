mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use cga_core::emit::Target;
use cga_core::expr_io::Format;
use cga_core::HalfInt;
use clap::{Parser, Subcommand, ValueEnum};

/// Exact verification and emission of conformal Galilei algebra invariants.
#[derive(Parser, Debug)]
#[command(name = "cga", version, about)]
struct Cli {
    /// Half-integer spin, e.g. 3/2, 5/2, 7/2.
    #[arg(long, global = true, default_value = "3/2")]
    ell: HalfInt,

    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,

    /// Worker threads; 1 runs single-threaded, 0 uses every core.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute every bracket of the realization and compare with the commutation table.
    VerifyAlgebra,
    /// Check annihilation of every invariant and the intermediate statements.
    VerifyInvariants,
    /// Render a tower or the generator list.
    Emit {
        #[arg(long, value_enum)]
        what: TargetArg,
    },
    /// Dump the tree coefficients c_ab(k,m) and gamma(k,m).
    Coeff,
    /// Apply every prolonged generator to an expression read from FILE ("-" for stdin).
    Check { file: PathBuf },
    /// Time the build and verification phases and report the term-count high-water mark.
    Bench,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Text,
    Latex,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Latex => Format::Latex,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TargetArg {
    Phi,
    W,
    Wkm,
    Final,
    Generators,
}

impl From<TargetArg> for Target {
    fn from(t: TargetArg) -> Self {
        match t {
            TargetArg::Phi => Target::Phi,
            TargetArg::W => Target::W,
            TargetArg::Wkm => Target::Wkm,
            TargetArg::Final => Target::Final,
            TargetArg::Generators => Target::Generators,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global() {
        eprintln!("cga: cannot start the worker pool: {e}");
        return ExitCode::from(commands::EXIT_ERROR);
    }
    let cfg = commands::RunConfig {
        ell: cli.ell,
        format: cli.format.into(),
        parallel: cli.jobs != 1,
        jobs: cli.jobs,
    };
    let result = match &cli.command {
        Command::VerifyAlgebra => commands::verify_algebra(&cfg),
        Command::VerifyInvariants => commands::verify_invariants(&cfg),
        Command::Emit { what } => commands::emit(&cfg, (*what).into()),
        Command::Coeff => commands::coeff(&cfg),
        Command::Check { file } => commands::check(&cfg, file),
        Command::Bench => commands::bench(&cfg),
    };
    match result {
        Ok(out) => {
            if let Err(e) = commands::write_output(cli.output.as_deref(), &out.text) {
                eprintln!("cga: {e}");
                return ExitCode::from(commands::EXIT_ERROR);
            }
            ExitCode::from(if out.failed { commands::EXIT_FAIL } else { 0 })
        }
        Err(e) => {
            eprintln!("cga: {e}");
            ExitCode::from(commands::EXIT_ERROR)
        }
    }
}
