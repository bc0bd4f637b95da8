use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use absreg_cli::{
    cmd_classify, cmd_sample, cmd_swap_scan, cmd_table2, cmd_table3, cmd_table4, cmd_thresholds, ClassifyArgs,
    CliError, CliResult, SampleArgs, SideChoice, DEFAULT_ALPHAS,
};

#[derive(Parser)]
#[command(name = "absreg", version, about = "Absolute-class classification of quantum states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Double,
    Single,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a state against every absolute class.
    Classify {
        /// State spec, e.g. `pure-schmidt:theta=0.7854` or `iso:d=3,beta=0.2`.
        #[arg(long)]
        state: String,
        /// Channel spec applied before classification, e.g. `global-depolarizing:p=0.5`.
        #[arg(long)]
        channel: Option<String>,
        /// Rényi orders (repeat or comma-separate).
        #[arg(long = "alpha", value_delimiter = ',', default_values_t = DEFAULT_ALPHAS)]
        alphas: Vec<f64>,
        /// For three-party states: the pair to keep (23, 13 or 12).
        #[arg(long)]
        marginal: Option<String>,
        /// Also write the verdicts as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Channel ranges for the two-parameter family.
    Table2 {
        #[arg(long, value_enum, default_value = "double")]
        side: Side,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact-entropy AC ranges of the depolarised isotropic state.
    Table3 {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Series-estimate AC ranges of the depolarised isotropic state.
    Table4 {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Single-parameter boundaries (depolarised and damped Bell pairs, GHZ/W mixture).
    Thresholds {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scan an input family through the swapping network.
    SwapScan {
        /// global-depolarizing or amplitude-damping.
        #[arg(long)]
        family: String,
        /// The fixed parameter (p2 or p4); defaults to the reference value.
        #[arg(long)]
        fixed: Option<f64>,
        /// Points per axis.
        #[arg(long, default_value_t = 50)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check absoluteness empirically with seeded Haar unitaries.
    Sample {
        #[arg(long)]
        state: String,
        #[arg(long)]
        channel: Option<String>,
        #[arg(long = "alpha", value_delimiter = ',', default_values_t = DEFAULT_ALPHAS)]
        alphas: Vec<f64>,
        #[arg(long, default_value_t = 500)]
        unitaries: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn run(cli: Cli) -> CliResult {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Classify { state, channel, alphas, marginal, csv } => cmd_classify(
            &ClassifyArgs {
                state: &state,
                channel: channel.as_deref(),
                alphas: &alphas,
                marginal: marginal.as_deref(),
                csv: csv.as_deref(),
            },
            &mut out,
        ),
        Command::Table2 { side, out: path } => {
            let side = match side {
                Side::Double => SideChoice::Double,
                Side::Single => SideChoice::Single,
                Side::Both => SideChoice::Both,
            };
            cmd_table2(side, path.as_deref(), &mut out)
        }
        Command::Table3 { out: path } => cmd_table3(path.as_deref(), &mut out),
        Command::Table4 { out: path } => cmd_table4(path.as_deref(), &mut out),
        Command::Thresholds { out: path } => cmd_thresholds(path.as_deref(), &mut out),
        Command::SwapScan { family, fixed, grid, out: path } => {
            cmd_swap_scan(&family, fixed, grid, path.as_deref(), &mut out, &mut io::stderr())
        }
        Command::Sample { state, channel, alphas, unitaries, seed } => cmd_sample(
            &SampleArgs {
                state: &state,
                channel: channel.as_deref(),
                alphas: &alphas,
                unitaries,
                seed,
            },
            &mut out,
        ),
    }?;
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        // reader went away, e.g. `absreg swap-scan ... | head`
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
