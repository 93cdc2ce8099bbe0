use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ellstat_cli::run::{self, RunConfig};
use ellstat_cli::CliError;

/// Group-structure statistics of elliptic curves over prime fields:
/// splitting sums, outside primes, elliptic twins, census of realizable
/// d1 invariants, and the closed-form constants they converge to.
#[derive(Parser)]
#[command(name = "ellstat", version, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct CommonArgs {
    /// Curve: builtin name (A, E, F) or "a1,a2,a3,a4,a6"
    #[arg(long, default_value = "E")]
    curve: String,
    /// Scan bound (inclusive)
    #[arg(long, default_value_t = 100_000)]
    xmax: u64,
    /// Global RNG seed; scans are deterministic given (config, seed)
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Worker threads
    #[arg(long, default_value_t = default_threads())]
    threads: usize,
    /// Numeric span of a scan block (checkpoint granularity)
    #[arg(long, default_value_t = 1 << 21)]
    block_size: u64,
    /// Conductor m of the quadratic character; declares the curve Serre
    #[arg(long)]
    serre_m: Option<u64>,
    /// Also fold in p = 2, 3 (classical tabulation convention)
    #[arg(long, default_value_t = false)]
    include_small: bool,
    /// Write primary CSV here (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Checkpoint file for interruptible scans
    #[arg(long)]
    checkpoint: Option<PathBuf>,
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

#[derive(Subcommand)]
enum Command {
    /// Per-prime local invariants (p, a, n, d1, d2) up to xmax
    Invariants {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Splitting sum S(X) = sum of d1(p) and per-d split counts
    Split {
        #[command(flatten)]
        common: CommonArgs,
        /// Report the split count for this d as a header line
        #[arg(long)]
        d: Option<u64>,
    },
    /// Outside and weak outside primes up to xmax
    Outside {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Elliptic-twin statistics over group orders n <= xmax
    Twins {
        #[command(flatten)]
        common: CommonArgs,
        /// Highest moment order to compute
        #[arg(long, default_value_t = 3)]
        k: u32,
    },
    /// Multiplicity of one group order n (scans only its Hasse window)
    #[command(name = "twin-n")]
    TwinN {
        #[command(flatten)]
        common: CommonArgs,
        /// The group order to look up
        #[arg(long)]
        n: u64,
    },
    /// Average census sums of realizable d1 values over p <= xmax
    Census {
        #[command(flatten)]
        common: CommonArgs,
        /// Also cross-validate against the brute-force census
        #[arg(long, default_value_t = false)]
        oracle: bool,
    },
    /// Closed-form constants with certified truncation bounds
    Constants {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Brute-force cross-validation suites; nonzero exit on any mismatch
    Oracle {
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn build_config(common: &CommonArgs) -> Result<RunConfig, CliError> {
    Ok(RunConfig {
        curve_spec: common.curve.clone(),
        curve: ellstat_cli::curves::parse_curve(&common.curve)?,
        xmax: common.xmax,
        seed: common.seed,
        threads: common.threads,
        block_size: common.block_size,
        serre_m: common.serre_m,
        d: None,
        n: None,
        k: 3,
        include_small: common.include_small,
        oracle: false,
        out: common.out.clone(),
        checkpoint: common.checkpoint.clone(),
    })
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Invariants { common } => run::run_invariants(&build_config(&common)?),
        Command::Split { common, d } => {
            let mut cfg = build_config(&common)?;
            cfg.d = d;
            run::run_split(&cfg)
        }
        Command::Outside { common } => run::run_outside(&build_config(&common)?),
        Command::Twins { common, k } => {
            let mut cfg = build_config(&common)?;
            cfg.k = k;
            run::run_twins(&cfg)
        }
        Command::TwinN { common, n } => {
            let mut cfg = build_config(&common)?;
            cfg.n = Some(n);
            run::run_twin_n(&cfg)
        }
        Command::Census { common, oracle } => {
            let mut cfg = build_config(&common)?;
            cfg.oracle = oracle;
            run::run_census(&cfg)
        }
        Command::Constants { common } => run::run_constants(&build_config(&common)?),
        Command::Oracle { common } => run::run_oracle(&build_config(&common)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are success; malformed usage exits 1
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ellstat: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
