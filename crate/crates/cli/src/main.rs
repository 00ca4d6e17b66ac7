use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use log::{info, warn};

use huosp::datagen::{generate, GenParams};
use huosp::io::{parse_qdb, write_results, write_stats, StatsRow};
use huosp::oracle::{oracle_mine, random_database, OracleLimits, RandomDbParams};
use huosp::{
    mine, Error, LookupMode, MinerConfig, QSequenceDatabase, ResultSet, Thresholds, Variant,
};

#[derive(Parser)]
#[command(
    name = "huosp",
    version,
    about = "High utility-occupancy sequential pattern mining"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mine the patterns of a database and write them to a result file.
    Mine(MineArgs),
    /// Compare every variant against the brute-force oracle.
    Verify(VerifyArgs),
    /// Generate a synthetic database and utility table.
    Gen(GenArgs),
    /// Run variants over a threshold grid and record statistics as CSV.
    Bench(BenchArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Q-sequence database file.
    #[arg(long)]
    input: PathBuf,
    /// External utility table; without it quantities are utilities.
    #[arg(long)]
    utility_table: Option<PathBuf>,
    /// Tolerate unknown items and declared-utility mismatches.
    #[arg(long)]
    permissive: bool,
}

impl InputArgs {
    fn load(&self) -> huosp::Result<QSequenceDatabase> {
        let mode = if self.permissive {
            LookupMode::Permissive
        } else {
            LookupMode::Strict
        };
        let db = parse_qdb(&self.input, self.utility_table.as_deref(), mode)?;
        info!("loaded {} sequences, {} items", db.len(), db.item_count());
        Ok(db)
    }
}

#[derive(Args)]
#[command(group(ArgGroup::new("support").required(true).args(["minsup", "minsup_abs"])))]
struct MineArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Minimum support as a fraction of the database, converted with ceil.
    #[arg(long)]
    minsup: Option<f64>,
    /// Minimum support as a sequence count.
    #[arg(long)]
    minsup_abs: Option<usize>,
    /// Minimum utility occupancy in (0, 1].
    #[arg(long)]
    minuo: f64,
    #[arg(long, default_value = "pes")]
    variant: Variant,
    /// Maximum pattern length in items.
    #[arg(long)]
    max_len: Option<usize>,
    #[arg(long)]
    output: PathBuf,
    /// Statistics file; JSON if it ends in `.json`, CSV otherwise.
    #[arg(long)]
    stats: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["input", "random"])))]
struct VerifyArgs {
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, requires = "input")]
    utility_table: Option<PathBuf>,
    /// Verify N seeded random databases instead of a file.
    #[arg(long, value_name = "N")]
    random: Option<u64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Required with --input; with --random, defaults to the 1,2,3 grid.
    #[arg(long)]
    minsup_abs: Option<usize>,
    /// Required with --input; with --random, defaults to the 0.1,0.3,0.5,0.8 grid.
    #[arg(long)]
    minuo: Option<f64>,
    #[arg(long, default_value_t = OracleLimits::default().max_sequences)]
    max_sequences: usize,
    #[arg(long, default_value_t = OracleLimits::default().max_distinct_items)]
    max_items: usize,
    #[arg(long, default_value_t = OracleLimits::default().max_sequence_length)]
    max_itemsets: usize,
    #[arg(long, default_value_t = OracleLimits::default().max_pattern_length)]
    max_pattern_len: usize,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 1000)]
    sequences: usize,
    #[arg(long, default_value_t = 1000)]
    items: usize,
    #[arg(long, default_value_t = 9.0)]
    avg_itemsets: f64,
    #[arg(long, default_value_t = 3.0)]
    avg_items: f64,
    #[arg(long, default_value_t = 5)]
    quantity_max: u32,
    #[arg(long, default_value_t = 10)]
    utility_max: u32,
    #[arg(long, default_value_t = 1.0)]
    zipf: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Writes PREFIX.qdb and PREFIX.ut.
    #[arg(long)]
    out_prefix: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Support thresholds; values below 1 are fractions of the database.
    #[arg(long, value_delimiter = ',', required = true)]
    minsup_list: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    minuo_list: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "simple,peuo,tpuo,pes")]
    variants: Vec<Variant>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long)]
    out: PathBuf,
}

/// A failure with its exit code: 2 for invalid requests, 1 otherwise.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidThresholds(_) | Error::InvalidParams(_) | Error::LimitsExceeded(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn runtime(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("HUOSP_LOG", "warn")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Mine(args) => cmd_mine(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn threshold_for(minsup: f64, minuo: f64, db_len: usize) -> huosp::Result<Thresholds> {
    if minsup >= 1.0 {
        if minsup.fract() != 0.0 {
            return Err(Error::InvalidThresholds(format!(
                "support {minsup} is neither a fraction below 1 nor a whole count"
            )));
        }
        Thresholds::absolute(minsup as usize, minuo, db_len)
    } else {
        Thresholds::relative(minsup, minuo, db_len)
    }
}

fn cmd_mine(args: MineArgs) -> Result<(), Failure> {
    if args.threads == 0 {
        return Err(usage("--threads must be at least 1"));
    }
    // Validate thresholds before touching the input.
    Thresholds::absolute(1, args.minuo, 0)?;
    let db = args.input.load()?;
    let thresholds = match (args.minsup, args.minsup_abs) {
        (Some(rel), None) => Thresholds::relative(rel, args.minuo, db.len())?,
        (None, Some(abs)) => Thresholds::absolute(abs, args.minuo, db.len())?,
        _ => return Err(usage("give exactly one of --minsup and --minsup-abs")),
    };
    let config = MinerConfig::new(args.variant)
        .with_max_pattern_length(args.max_len.unwrap_or(0))
        .with_threads(args.threads);
    let (rs, stats) = mine(&db, &thresholds, &config)?;
    info!(
        "{}: {} patterns, {} candidates, {:.1} ms",
        args.variant, stats.huosps, stats.candidates, stats.wall_time_ms
    );
    write_results(&rs, &db, &args.output)?;
    if let Some(path) = &args.stats {
        let row = StatsRow::new(
            args.variant,
            thresholds.min_support(),
            thresholds.min_uo(),
            &stats,
        );
        let as_json = path.extension().is_some_and(|e| e == "json");
        write_stats(&[row], path, !as_json)?;
    }
    println!("{} patterns written to {}", rs.len(), args.output.display());
    Ok(())
}

/// Runs the oracle and all four variants; `Err` carries a readable diff.
fn agree(
    db: &QSequenceDatabase,
    thresholds: &Thresholds,
    limits: &OracleLimits,
) -> huosp::Result<Result<usize, String>> {
    let expected = oracle_mine(db, thresholds, limits)?;
    let mut agreeing = 1;
    let mut report = Vec::new();
    for v in Variant::ALL {
        let config = MinerConfig::new(v).with_max_pattern_length(limits.max_pattern_length);
        let (got, _) = mine(db, thresholds, &config)?;
        match got.difference(&expected, 1e-9, db) {
            None => agreeing += 1,
            Some(diff) => report.push(format!("{v} vs oracle:\n{diff}")),
        }
    }
    if report.is_empty() {
        Ok(Ok(expected.len()))
    } else {
        Ok(Err(format!("{agreeing}/5 agree\n{}", report.join("\n"))))
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let limits = OracleLimits {
        max_sequences: args.max_sequences,
        max_distinct_items: args.max_items,
        max_sequence_length: args.max_itemsets,
        max_pattern_length: args.max_pattern_len,
    };
    if let Some(path) = &args.input {
        let (Some(minsup), Some(minuo)) = (args.minsup_abs, args.minuo) else {
            return Err(usage("--minsup-abs and --minuo are required with --input"));
        };
        let db = parse_qdb(path, args.utility_table.as_deref(), LookupMode::Strict)?;
        let thresholds = Thresholds::absolute(minsup, minuo, db.len())?;
        return match agree(&db, &thresholds, &limits)? {
            Ok(n) => {
                println!("5/5 agree, {n} patterns");
                Ok(())
            }
            Err(diff) => Err(runtime(diff)),
        };
    }

    let trials = args.random.expect("clap requires --input or --random");
    let supports = args.minsup_abs.map_or(vec![1, 2, 3], |s| vec![s]);
    let occupancies = args.minuo.map_or(vec![0.1, 0.3, 0.5, 0.8], |u| vec![u]);
    let params = RandomDbParams {
        min_sequences: 3.min(limits.max_sequences),
        sequences: limits.max_sequences,
        items: limits.max_distinct_items.min(6),
        max_itemsets: limits.max_sequence_length.min(8),
        ..RandomDbParams::default()
    };
    let mut cells = 0;
    let mut patterns = 0;
    for trial in 0..trials {
        let seed = args.seed.wrapping_add(trial);
        let db = random_database(seed, &params)?;
        for &minsup in &supports {
            for &minuo in &occupancies {
                let thresholds = Thresholds::absolute(minsup.min(db.len()), minuo, db.len())?;
                match agree(&db, &thresholds, &limits)? {
                    Ok(n) => {
                        cells += 1;
                        patterns += n;
                    }
                    Err(diff) => {
                        return Err(runtime(format!(
                            "seed {seed}, minsup {minsup}, minuo {minuo}: {diff}"
                        )));
                    }
                }
            }
        }
    }
    println!("5/5 agree on {cells} runs over {trials} databases, {patterns} patterns");
    Ok(())
}

fn cmd_gen(args: GenArgs) -> Result<(), Failure> {
    let params = GenParams {
        n_sequences: args.sequences,
        n_items: args.items,
        avg_itemsets_per_sequence: args.avg_itemsets,
        avg_items_per_itemset: args.avg_items,
        quantity_max: args.quantity_max,
        utility_max: args.utility_max,
        zipf_exponent: args.zipf,
        seed: args.seed,
    };
    let generated = generate(&params)?;
    let qdb = with_suffix(&args.out_prefix, "qdb");
    let ut = with_suffix(&args.out_prefix, "ut");
    fs::write(&qdb, &generated.qdb).map_err(|e| runtime(format!("{}: {e}", qdb.display())))?;
    fs::write(&ut, &generated.utable).map_err(|e| runtime(format!("{}: {e}", ut.display())))?;
    println!("wrote {} and {}", qdb.display(), ut.display());
    Ok(())
}

fn with_suffix(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn cmd_bench(args: BenchArgs) -> Result<(), Failure> {
    if args.variants.is_empty() {
        return Err(usage("--variants must name at least one variant"));
    }
    for &u in &args.minuo_list {
        Thresholds::absolute(1, u, 0)?;
    }
    let db = args.input.load()?;
    let mut rows = Vec::new();
    let mut problems = Vec::new();
    for &minsup in &args.minsup_list {
        for &minuo in &args.minuo_list {
            let thresholds = threshold_for(minsup, minuo, db.len())?;
            let mut cell: BTreeMap<Variant, (u64, usize)> = BTreeMap::new();
            let mut reference: Option<ResultSet> = None;
            for &v in &args.variants {
                let config = MinerConfig::new(v).with_threads(args.threads);
                let (rs, stats) = mine(&db, &thresholds, &config)?;
                info!(
                    "{v} minsup={} minuo={minuo}: {} patterns, {} candidates, {:.1} ms",
                    thresholds.min_support(),
                    stats.huosps,
                    stats.candidates,
                    stats.wall_time_ms
                );
                match &reference {
                    None => reference = Some(rs),
                    Some(r) if r.len() != rs.len() => problems.push(format!(
                        "minsup {minsup}, minuo {minuo}: {v} found {} patterns, expected {}",
                        rs.len(),
                        r.len()
                    )),
                    Some(_) => {}
                }
                cell.insert(v, (stats.candidates, stats.huosps));
                rows.push(StatsRow::new(v, thresholds.min_support(), minuo, &stats));
            }
            let c = |v: Variant| cell.get(&v).map(|&(c, _)| c);
            for (lo, hi) in [
                (Variant::Pes, Variant::Peuo),
                (Variant::Peuo, Variant::Simple),
            ] {
                if let (Some(a), Some(b)) = (c(lo), c(hi)) {
                    if a > b {
                        problems.push(format!(
                            "minsup {minsup}, minuo {minuo}: {lo} generated {a} candidates, more than {hi} with {b}"
                        ));
                    }
                }
            }
        }
    }
    write_stats(&rows, &args.out, true)?;
    if problems.is_empty() {
        println!("{} rows written to {}", rows.len(), args.out.display());
        Ok(())
    } else {
        for p in &problems {
            warn!("{p}");
        }
        Err(runtime(problems.join("\n")))
    }
}
