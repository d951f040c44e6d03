use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use quadcf::CfError;
use thiserror::Error;

mod cache;
mod commands;
mod output;

use commands::{GkArgs, Outcome, PeriodsReport};
use output::Format;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Cf(#[from] CfError),
    #[error("cache: {0}")]
    Cache(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Cf(e) => e.kind(),
            CliError::Cache(_) => "cache",
            CliError::Io(_) => "io",
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Cf(e) if e.is_internal() => 4,
            CliError::Cf(CfError::InvalidArgument(_)) => 2,
            CliError::Cf(_) => 3,
            CliError::Usage(_) | CliError::Cache(_) | CliError::Io(_) => 2,
        }
    }
}

/// Exact continued fractions of quadratic irrationals and their statistics.
#[derive(Debug, Parser)]
#[command(name = "quadcf", version, about)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the table here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Worker threads (defaults to one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Width of certified measure enclosures.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tolerance: f64,
    /// Suppress the notes printed to stderr.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Continued fraction of the larger root of r x² + p x = q.
    #[command(allow_negative_numbers = true)]
    Expand {
        #[arg(value_name = "r")]
        r: i64,
        #[arg(value_name = "p")]
        p: i64,
        #[arg(value_name = "q")]
        q: i64,
    },
    /// Step-by-step river walk of the form r v² + p v u − q u².
    #[command(allow_negative_numbers = true)]
    River {
        #[arg(value_name = "r")]
        r: i64,
        #[arg(value_name = "p")]
        p: i64,
        #[arg(value_name = "q")]
        q: i64,
        /// Steps to print; defaults to one period plus one step.
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Frequencies of a_s = A over q = 1..=R against the Gauss–Kuz'min limit.
    #[command(allow_negative_numbers = true)]
    Gk {
        #[arg(value_name = "r")]
        r: i64,
        #[arg(value_name = "p")]
        p: i64,
        #[arg(value_name = "R")]
        big_r: u64,
        /// Positions, as `a..b` (inclusive) or a comma-separated list.
        #[arg(long = "s", default_value = "1..5", value_parser = parse_positions)]
        positions: Positions,
        /// Largest partial quotient value A.
        #[arg(long, default_value_t = 8)]
        amax: i64,
        /// Append certified bounds on the Lebesgue measure of each cell.
        #[arg(long)]
        mu: bool,
        /// Append the mean share of A within whole periods.
        #[arg(long)]
        period_freq: bool,
        /// Draw this many q uniformly from 1..=R instead of enumerating.
        #[arg(long)]
        sample: Option<u64>,
        /// Seed for --sample.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Running averages of the period length of √Q, and T₀(Q) ≤ D(Q).
    Periods {
        #[arg(value_name = "Q_MAX")]
        q_max: u64,
        #[arg(long, value_enum, default_value_t = PeriodsReport::Stats)]
        report: PeriodsReport,
        /// T₀ cache file.
        #[arg(long, env = "QUADCF_T0_CACHE")]
        cache: Option<PathBuf>,
        /// Ignore the cache even if one is configured.
        #[arg(long)]
        no_cache: bool,
    },
    /// Census of odd periods against sums of two squares, and the prime product.
    Red {
        #[arg(value_name = "N")]
        n: u64,
        /// Primes up to this bound enter the product.
        #[arg(long, default_value_t = 1_000_000)]
        product_limit: u64,
        #[arg(long, env = "QUADCF_T0_CACHE")]
        cache: Option<PathBuf>,
        #[arg(long)]
        no_cache: bool,
    },
    /// Period sums against the divisor bound for every valid (r, p, q) in range.
    Bounds {
        #[arg(value_name = "r_max")]
        r_max: i64,
        #[arg(value_name = "p_max")]
        p_max: i64,
        #[arg(value_name = "q_max")]
        q_max: i64,
    },
    /// Mean partial quotient over one period, for every valid (r, p, q) in range.
    Means {
        #[arg(value_name = "r_max")]
        r_max: i64,
        #[arg(value_name = "p_max")]
        p_max: i64,
        #[arg(value_name = "q_max")]
        q_max: i64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Positions(Vec<usize>);

fn parse_positions(s: &str) -> Result<Positions, String> {
    let bad = || format!("expected `a..b` or a comma-separated list, got `{s}`");
    let out: Vec<usize> = if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
        (a..=b).collect()
    } else {
        s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
    };
    if out.is_empty() || out.contains(&0) {
        return Err("positions must be a nonempty set of integers ≥ 1".into());
    }
    Ok(Positions(out))
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    if !(cli.tolerance > 0.0) {
        return Err(CliError::Usage("--tolerance must be positive".into()));
    }
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("--threads: {e}")))?;
    }
    match &cli.command {
        &Command::Expand { r, p, q } => commands::expand_cmd(r, p, q),
        &Command::River { r, p, q, steps } => commands::river_cmd(r, p, q, steps),
        Command::Gk { r, p, big_r, positions, amax, mu, period_freq, sample, seed } => commands::gk_cmd(&GkArgs {
            r: *r,
            p: *p,
            big_r: *big_r,
            positions: positions.0.clone(),
            a_max: *amax,
            mu: *mu,
            period_freq: *period_freq,
            sample: *sample,
            seed: *seed,
            tolerance: cli.tolerance,
        }),
        Command::Periods { q_max, report, cache, no_cache } => {
            commands::periods_cmd(*q_max, *report, cache.as_deref().filter(|_| !no_cache))
        }
        Command::Red { n, product_limit, cache, no_cache } => {
            commands::red_cmd(*n, *product_limit, cache.as_deref().filter(|_| !no_cache))
        }
        &Command::Bounds { r_max, p_max, q_max } => commands::bounds_cmd(r_max, p_max, q_max),
        &Command::Means { r_max, p_max, q_max } => commands::means_cmd(r_max, p_max, q_max),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.kind());
            return ExitCode::from(e.exit_code());
        }
    };
    if let Err(e) = output::emit(&outcome.table.render(cli.format), cli.output.as_deref()) {
        eprintln!("error[io]: {e}");
        return ExitCode::from(2);
    }
    if !cli.quiet {
        for note in &outcome.notes {
            eprintln!("{note}");
        }
        eprintln!("elapsed: {:.3?}", start.elapsed());
    }
    if outcome.violations > 0 {
        eprintln!("error[counterexample]: {} violations of a proven bound", outcome.violations);
        return ExitCode::from(4);
    }
    ExitCode::SUCCESS
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions() {
        assert_eq!(parse_positions("1..5").unwrap().0, vec![1, 2, 3, 4, 5]);
        assert_eq!(parse_positions("3..=4").unwrap().0, vec![3, 4]);
        assert_eq!(parse_positions("2,7").unwrap().0, vec![2, 7]);
        assert!(parse_positions("0..2").is_err());
        assert!(parse_positions("5..1").is_err());
        assert!(parse_positions("x").is_err());
    }

    #[test]
    fn cli_definition() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
