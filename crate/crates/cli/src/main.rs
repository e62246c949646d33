use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dp6a2::density::DEFAULT_QUAD_TOL;
use dp6a2_cli::{
    cmd_constant, cmd_count, cmd_fit, cmd_verify, parse_grid, rows_to_csv, CliError, Format,
    Method, Output, Suite,
};

#[derive(Parser)]
#[command(name = "dp6a2", version, about = "Rational points of bounded height on the A2 sextic del Pezzo surface")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Count points of U with height at most B.
    Count {
        #[arg(long, conflicts_with = "grid", required_unless_present = "grid")]
        max_height: Option<String>,
        /// `lo:hi:n` (log-spaced) or a comma-separated list.
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// Run an invariant suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = DEFAULT_QUAD_TOL)]
        quad_tol: f64,
    },
    /// Assemble the predicted leading constant.
    Constant {
        #[arg(long, default_value_t = 100_000)]
        primes_up_to: u64,
        #[arg(long, default_value_t = DEFAULT_QUAD_TOL)]
        quad_tol: f64,
    },
    /// Fit N(B) / B to a cubic in log B and compare the leading coefficient.
    Fit {
        #[arg(long, default_value = "1e4:1e7:10")]
        grid: String,
        #[arg(long, default_value_t = 100_000)]
        primes_up_to: u64,
        #[arg(long, default_value_t = DEFAULT_QUAD_TOL)]
        quad_tol: f64,
    },
}

fn run(cli: Cli) -> Result<i32, CliError> {
    if let Some(n) = cli.global.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("--threads: {e}")))?;
    }
    let out = Output {
        format: cli.global.format,
        path: cli.global.out,
    };
    let (report, csv) = match cli.command {
        Command::Count {
            max_height,
            grid,
            method,
        } => {
            let bounds = parse_grid(max_height.as_deref().or(grid.as_deref()).unwrap_or_default())?;
            let (report, rows) = cmd_count(&bounds, method)?;
            (report, Some(rows_to_csv(&rows)?))
        }
        Command::Verify { suite, quad_tol } => (cmd_verify(suite, quad_tol)?.0, None),
        Command::Constant {
            primes_up_to,
            quad_tol,
        } => (cmd_constant(primes_up_to, quad_tol)?.0, None),
        Command::Fit {
            grid,
            primes_up_to,
            quad_tol,
        } => (cmd_fit(&parse_grid(&grid)?, primes_up_to, quad_tol)?.0, None),
    };
    out.write(&report, csv)?;
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
