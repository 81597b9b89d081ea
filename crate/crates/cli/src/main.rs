//! `cgsieve`: character tables, sieve simulation, exact scoring, oracle
//! verification and analysis scans for S_n wr Z_2.
//!
//! Exit codes: 0 success, 1 failed check, 2 usage or input error, 3 budget
//! refusal.

mod commands;
mod config;
mod output;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cgsieve::wreath::SubgroupSpec;

use commands::{CliError, CliResult, Context, ScanKind, Suite};
use config::{Format, RunConfig};

#[derive(Parser)]
#[command(name = "cgsieve", version, about = "Exact Clebsch-Gordan sieve toolkit for S_n wr Z_2")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

/// Shared options. Each overrides the `--config` file; every flag also
/// reads a `CGSIEVE_*` environment variable.
#[derive(Args, Default)]
struct Opts {
    /// Flat `key = value` config file
    #[arg(long, global = true, env = "CGSIEVE_CONFIG")]
    config: Option<PathBuf>,
    #[arg(long, global = true, env = "CGSIEVE_N")]
    n: Option<usize>,
    /// Number of leaves (coset states) per run
    #[arg(long, global = true, env = "CGSIEVE_LEAVES")]
    leaves: Option<usize>,
    /// random[:K], greedy[:K] or fixed:a-b,c-d
    #[arg(long, global = true, env = "CGSIEVE_POLICY")]
    policy: Option<String>,
    /// trivial or order2
    #[arg(long, global = true, env = "CGSIEVE_SUBGROUP")]
    subgroup: Option<String>,
    #[arg(long, global = true, env = "CGSIEVE_SEED")]
    seed: Option<u64>,
    #[arg(long, global = true, env = "CGSIEVE_RUNS")]
    runs: Option<usize>,
    #[arg(long, global = true, value_enum, env = "CGSIEVE_FORMAT")]
    format: Option<Format>,
    /// Directory for cached character tables
    #[arg(long, global = true, env = "CGSIEVE_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Worker threads for scans and simulations
    #[arg(long, global = true, env = "CGSIEVE_JOBS")]
    jobs: Option<usize>,
    /// Print probabilities as floats instead of exact fractions
    #[arg(long, global = true, env = "CGSIEVE_FLOAT")]
    float: bool,
    /// Output file; for `run`, where transcripts are written
    #[arg(long, global = true, env = "CGSIEVE_OUT")]
    out: Option<PathBuf>,
    #[arg(long, global = true, env = "CGSIEVE_BUDGET_TABLE_N")]
    budget_table_n: Option<usize>,
    /// Largest n for exact order-two work
    #[arg(long, global = true, env = "CGSIEVE_BUDGET_EXACT_N")]
    budget_exact_n: Option<usize>,
    #[arg(long, global = true, env = "CGSIEVE_BUDGET_CLASS_DP_N")]
    budget_class_dp_n: Option<usize>,
    #[arg(long, global = true, env = "CGSIEVE_BUDGET_ENUM_NODES")]
    budget_enum_nodes: Option<usize>,
    #[arg(long, global = true, env = "CGSIEVE_BUDGET_DENSE_SIDE")]
    budget_dense_side: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Character table of S_n with class sizes and dimensions
    Chartable,
    /// Simulate sieve runs and write transcripts
    #[command(alias = "sieve")]
    Run,
    /// Exact probability of transcripts under the hidden-subgroup hypotheses
    Score {
        /// Transcript file (JSON or JSON lines); `-` reads stdin
        file: PathBuf,
        /// Score under one hypothesis only
        #[arg(long = "under", value_parser = parse_subgroup)]
        under: Option<SubgroupSpec>,
    },
    /// Run a verification suite over a range of n
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long)]
        n_min: Option<usize>,
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Analysis scans over a range of n
    Scan {
        #[arg(value_enum)]
        kind: ScanKind,
        #[arg(long)]
        n_min: Option<usize>,
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Print the effective configuration in config-file syntax
    Config,
}

fn parse_subgroup(s: &str) -> Result<SubgroupSpec, String> {
    s.parse().map_err(|e: cgsieve::Error| e.to_string())
}

fn build_config(o: &Opts) -> CliResult<RunConfig> {
    let mut c = match &o.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            RunConfig::from_kv(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    let mut set = |key: &str, v: Option<String>| -> CliResult<()> {
        match v {
            Some(v) => c.set(key, &v).map_err(CliError::Usage),
            None => Ok(()),
        }
    };
    set("n", o.n.map(|v| v.to_string()))?;
    set("leaves", o.leaves.map(|v| v.to_string()))?;
    set("policy", o.policy.clone())?;
    set("subgroup", o.subgroup.clone())?;
    set("seed", o.seed.map(|v| v.to_string()))?;
    set("runs", o.runs.map(|v| v.to_string()))?;
    set("format", o.format.map(|f| f.name().to_string()))?;
    set("cache_dir", o.cache_dir.as_ref().map(|p| p.display().to_string()))?;
    set("jobs", o.jobs.map(|v| v.to_string()))?;
    set("budget_table_n", o.budget_table_n.map(|v| v.to_string()))?;
    set("budget_exact_n", o.budget_exact_n.map(|v| v.to_string()))?;
    set("budget_class_dp_n", o.budget_class_dp_n.map(|v| v.to_string()))?;
    set("budget_enum_nodes", o.budget_enum_nodes.map(|v| v.to_string()))?;
    set("budget_dense_side", o.budget_dense_side.map(|v| v.to_string()))?;
    if o.float {
        c.float = true;
    }
    Ok(c)
}

fn range(config: &RunConfig, default: std::ops::RangeInclusive<usize>, lo: Option<usize>, hi: Option<usize>) -> CliResult<std::ops::RangeInclusive<usize>> {
    let (a, b) = match (lo, hi, config.n) {
        (None, None, Some(n)) => (n, n),
        _ => (lo.unwrap_or(*default.start()), hi.unwrap_or(*default.end())),
    };
    if a == 0 || a > b {
        return Err(CliError::Usage(format!("empty or invalid n range {a}..={b}")));
    }
    Ok(a..=b)
}

fn write_out(path: &Option<PathBuf>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Usage(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| CliError::Core(e.into()))
        }
    }
}

fn execute(cli: Cli, config: RunConfig) -> CliResult<()> {
    let format = config.format;
    let out_path = cli.opts.out.clone();
    let ctx = Context::new(config);
    match cli.command {
        Command::Chartable => write_out(&out_path, &commands::chartable(&ctx)?.render(format)),
        Command::Run => {
            let (ts, summary) = commands::run(&ctx)?;
            let text = commands::transcripts_text(&ts);
            match &out_path {
                Some(p) => {
                    std::fs::write(p, text).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
                    write_out(&None, &summary.render(format))
                }
                None => {
                    eprint!("{}", summary.render(Format::Table));
                    write_out(&None, &text)
                }
            }
        }
        Command::Score { file, under } => {
            let text = if file.as_os_str() == "-" {
                std::io::read_to_string(std::io::stdin()).map_err(|e| CliError::Core(e.into()))?
            } else {
                std::fs::read_to_string(&file).map_err(|e| CliError::Usage(format!("{}: {e}", file.display())))?
            };
            write_out(&out_path, &commands::score(&ctx, &text, under)?.render(format))
        }
        Command::Verify { suite, n_min, n_max } => {
            let r = range(&ctx.config, suite.default_range(), n_min, n_max)?;
            let (passed, out) = commands::verify(&ctx, suite, r)?;
            write_out(&out_path, &out.render(format))?;
            if passed {
                Ok(())
            } else {
                Err(CliError::Assertion(format!("{suite:?} suite")))
            }
        }
        Command::Scan { kind, n_min, n_max } => {
            let r = range(&ctx.config, 2..=8, n_min, n_max)?;
            write_out(&out_path, &commands::scan(&ctx, kind, r)?.render(format))
        }
        Command::Config => write_out(&out_path, &ctx.config.to_kv()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match build_config(&cli.opts) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("cgsieve: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(config.jobs.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("cgsieve: cannot start worker pool: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| execute(cli, config)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cgsieve: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
