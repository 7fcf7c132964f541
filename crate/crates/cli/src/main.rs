use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sttlab_cli::commands::{self, Ctx};

/// Behavioral lab for supply-current side channels on word-parallel
/// STTRAM writes: device calibration, Monte Carlo variation, trace
/// synthesis, SPA/DPA campaigns, countermeasure state analysis and
/// parameter sweeps. All outputs are deterministic in (config, seed).
#[derive(Parser)]
#[command(name = "sttlab", version, about)]
struct Cli {
    /// TOML config; defaults used when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Worker threads; results are identical for any value.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print and save nominal device characteristics.
    Device,
    /// Monte Carlo latency distributions and worst-case tail extrapolation.
    Mc {
        /// Monte Carlo sample size.
        #[arg(long, default_value_t = 5000)]
        count: usize,
        /// Population size for the tail extrapolation (default: 8 MB x 8).
        #[arg(long, default_value_t = 67_108_864)]
        target_population: u64,
        /// Histogram bins.
        #[arg(long, default_value_t = 50)]
        bins: usize,
    },
    /// Synthesize one supply-current trace.
    Trace {
        /// Old word: binary, or hex with --width.
        #[arg(long)]
        old: String,
        /// New word (write op only).
        #[arg(long)]
        new: Option<String>,
        /// Word width in bits; required for hex words.
        #[arg(long)]
        width: Option<usize>,
        /// "write" or "read".
        #[arg(long, default_value = "write")]
        op: String,
        /// Measurement noise sigma in amperes; overrides the config.
        #[arg(long)]
        noise_sigma: Option<f64>,
    },
    /// Run an SPA/DPA inference campaign over random writes.
    Attack {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Traces averaged per trial (1 = plain SPA).
        #[arg(long, default_value_t = 1)]
        traces_per_trial: usize,
        /// Data word width in bits.
        #[arg(long, default_value_t = 8)]
        width: usize,
    },
    /// Tabulate observable state counts and attack effort per
    /// width/scheme/driver.
    States {
        /// "A..B" (inclusive) or a comma list.
        #[arg(long, default_value = "4..64")]
        widths: String,
        /// Restrict to one scheme ("none", "parity1", "random-N").
        #[arg(long)]
        scheme: Option<String>,
    },
    /// Sweep one variable and emit a metric column.
    Sweep {
        /// temperature | volume_factor | supply_voltage
        #[arg(long)]
        var: String,
        /// "A:B:STEP", inclusive.
        #[arg(long)]
        range: String,
        /// delta | write_latency | retention | write_current | level_gap
        #[arg(long)]
        metric: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = match Ctx::new(cli.config.as_deref(), cli.seed, &cli.out, cli.threads) {
        Ok(ctx) => ctx,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let result = match &cli.cmd {
        Cmd::Device => commands::device(&ctx),
        Cmd::Mc {
            count,
            target_population,
            bins,
        } => commands::mc(&ctx, *count, *target_population, *bins),
        Cmd::Trace {
            old,
            new,
            width,
            op,
            noise_sigma,
        } => commands::trace(&ctx, old, new.as_deref(), *width, op, *noise_sigma),
        Cmd::Attack {
            trials,
            traces_per_trial,
            width,
        } => commands::attack(&ctx, *trials, *traces_per_trial, *width),
        Cmd::States { widths, scheme } => commands::states(&ctx, widths, scheme.as_deref()),
        Cmd::Sweep { var, range, metric } => commands::sweep(&ctx, var, range, metric),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
