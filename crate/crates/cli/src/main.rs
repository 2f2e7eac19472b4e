//! `wlpcheck`: batch front end for the verdict engine, linear-system tools,
//! the randomized oracle, and the reproduction suites.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 inconclusive verdict,
//! 3 reproduction or duality mismatch.

mod parse;

use std::fs;
use std::io::Write as _;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use wlpcheck::hilbert::{ci_table, froberg_table, HilbertTable};
use wlpcheck::linsys::{cremona_reduce, cremona_step, cremona_t, virtual_dim, LinearSystem};
use wlpcheck::oracle::{
    duality_check, fatpoint_dim_system, random_power_quotient_dim, OracleConfig, DEFAULT_BUDGET, DEFAULT_PRIME,
    DEFAULT_SEED, DEFAULT_TRIALS,
};
use wlpcheck::reproduce::{self, ReproduceOptions, Target};
use wlpcheck::wlp::{check_wlp_failure, Strategy, VerdictRecord, WlpVerdict};

const MIN_BUDGET: u128 = 1_000_000;

#[derive(Parser)]
#[command(name = "wlpcheck", version, about = "Weak Lefschetz failure checks for uniform powers of general linear forms")]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Oracle seed; the default is fixed so runs repeat across machines.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Oracle field characteristic (must be prime).
    #[arg(long, global = true, default_value_t = DEFAULT_PRIME)]
    prime: u64,
    #[arg(long, global = true, default_value_t = DEFAULT_TRIALS)]
    trials: u32,
    /// Largest matrix (rows x columns) the oracle will build.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    /// Worker threads for scans and oracle trials.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    #[arg(long, global = true)]
    csv: bool,
    /// Write data to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the failure criterion for one (n, d).
    Check {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        d: i64,
        /// Fall back to the randomized oracle when closed forms are not enough.
        #[arg(long)]
        oracle: bool,
    },
    /// Run the criterion over a grid; ranges are inclusive, e.g. 2..15.
    Scan {
        #[arg(long, value_parser = parse::range)]
        n: RangeInclusive<i64>,
        #[arg(long, value_parser = parse::range)]
        d: RangeInclusive<i64>,
        #[arg(long)]
        oracle: bool,
    },
    /// Virtual dimension, one Cremona step, or full reduction of e.g. "L_3(7; 4^6)".
    Linsys { system: String, action: LinsysAction },
    /// Print Hilbert function tables.
    #[command(subcommand)]
    Hilbert(HilbertCommand),
    /// Raw randomized rank instances.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Run a reproduction suite.
    Reproduce {
        target: TargetArg,
        #[arg(long, default_value_t = 30)]
        d_max: i64,
        #[arg(long, default_value_t = 400)]
        cn_max: i64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LinsysAction {
    Vdim,
    Cremona,
    Reduce,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Corollaries,
    Theorem41,
    CnScan,
    Hvectors,
    All,
}

impl From<TargetArg> for Target {
    fn from(t: TargetArg) -> Self {
        match t {
            TargetArg::Corollaries => Target::Corollaries,
            TargetArg::Theorem41 => Target::Theorem41,
            TargetArg::CnScan => Target::CnScan,
            TargetArg::Hvectors => Target::Hvectors,
            TargetArg::All => Target::All,
        }
    }
}

#[derive(Clone)]
struct Exponents(Vec<i64>);

fn exponents(s: &str) -> Result<Exponents, String> {
    parse::exponents(s).map(Exponents)
}

#[derive(Subcommand)]
enum HilbertCommand {
    /// Complete intersection of powers: --vars 10 --exponents 3^10.
    Ci {
        #[arg(long)]
        vars: usize,
        #[arg(long, value_parser = exponents)]
        exponents: Exponents,
    },
    /// Truncated generic series of `forms` forms of equal degree.
    Froberg {
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        forms: usize,
        #[arg(long)]
        degree: i64,
        #[arg(long)]
        max_degree: i64,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Dimension in degree `at` of the quotient by powers of random forms.
    Power {
        #[arg(long)]
        vars: usize,
        #[arg(long, value_parser = exponents)]
        exponents: Exponents,
        #[arg(long)]
        at: i64,
    },
    /// Dimension of a fat-point linear system at random points.
    Fatpoints { system: String },
    /// Compare both sides of the power-ideal / fat-point duality.
    Duality {
        #[arg(long)]
        vars: usize,
        #[arg(long, value_parser = exponents)]
        exponents: Exponents,
        #[arg(long)]
        at: i64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Human,
    Json,
    Csv,
}

/// Outcome of a command: data to emit plus the exit status.
struct Output {
    data: String,
    status: u8,
}

impl Output {
    fn ok(data: String) -> Self {
        Output { data, status: 0 }
    }
}

type CmdResult = Result<Output, String>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    let run = &cli.run;
    if let Some(w) = run.workers {
        if w == 0 {
            return Err("--workers must be at least 1".to_string());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    let format = if run.json {
        Format::Json
    } else if run.csv {
        Format::Csv
    } else {
        Format::Human
    };
    let config = oracle_config(run)?;
    let output = match cli.command {
        Command::Check { n, d, oracle } => cmd_check(n, d, strategy(oracle, config), format)?,
        Command::Scan { n, d, oracle } => cmd_scan(n, d, strategy(oracle, config), format)?,
        Command::Linsys { system, action } => cmd_linsys(&system, action, format)?,
        Command::Hilbert(h) => cmd_hilbert(h, format)?,
        Command::Oracle(o) => cmd_oracle(o, &config, format)?,
        Command::Reproduce { target, d_max, cn_max } => cmd_reproduce(target.into(), d_max, cn_max, format)?,
    };
    emit(&output.data, run.out.as_ref())?;
    Ok(output.status)
}

fn oracle_config(run: &RunArgs) -> Result<OracleConfig, String> {
    if run.trials < 1 {
        return Err("--trials must be at least 1".to_string());
    }
    if run.budget < MIN_BUDGET {
        return Err(format!("--budget must be at least {MIN_BUDGET}"));
    }
    OracleConfig::default()
        .with_seed(run.seed)
        .with_trials(run.trials)
        .with_budget(run.budget)
        .with_prime(run.prime)
        .map_err(|e| e.to_string())
}

fn strategy(oracle: bool, config: OracleConfig) -> Strategy {
    if oracle {
        Strategy::WithOracle(config)
    } else {
        Strategy::ClosedForm
    }
}

fn emit(data: &str, out: Option<&PathBuf>) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, data).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(data.as_bytes()).map_err(|e| e.to_string())
        }
    }
}

fn json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| e.to_string())
}

fn csv_records(records: &[VerdictRecord]) -> Result<String, String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(VerdictRecord::CSV_HEADER).map_err(|e| e.to_string())?;
    for r in records {
        w.write_record(r.csv_fields()).map_err(|e| e.to_string())?;
    }
    let bytes = w.into_inner().map_err(|e| e.to_string())?;
    String::from_utf8(bytes).map_err(|e| e.to_string())
}

fn no_csv(what: &str) -> String {
    format!("CSV output is not available for {what}")
}

fn verdict_status(v: &WlpVerdict) -> u8 {
    if v.fails() {
        0
    } else {
        2
    }
}

fn human_verdict(v: &WlpVerdict) -> String {
    let mut s = format!(
        "n = {}, d = {}, j = {}\nE = {}\nD >= {} ({})\nreduced system: {}\n",
        v.n, v.d, v.j, v.e, v.d_lower, v.certificate_tag, v.reduced_system
    );
    match v.verdict {
        wlpcheck::Verdict::FailsWlp { degree } => s += &format!("verdict: FailsWLP in degree {degree}\n"),
        wlpcheck::Verdict::InconclusiveByThisCriterion => s += "verdict: InconclusiveByThisCriterion\n",
    }
    for note in &v.notes {
        s += &format!("note: {note}\n");
    }
    s
}

fn cmd_check(n: i64, d: i64, strategy: Strategy, format: Format) -> CmdResult {
    let v = check_wlp_failure(n, d, strategy).map_err(|e| e.to_string())?;
    let data = match format {
        Format::Human => human_verdict(&v),
        Format::Json => json(&v.record())?,
        Format::Csv => csv_records(&[v.record()])?,
    };
    Ok(Output {
        data,
        status: verdict_status(&v),
    })
}

fn cmd_scan(ns: RangeInclusive<i64>, ds: RangeInclusive<i64>, strategy: Strategy, format: Format) -> CmdResult {
    let grid: Vec<(i64, i64)> = ns.flat_map(|n| ds.clone().map(move |d| (n, d))).collect();
    let rows = grid
        .par_iter()
        .map(|&(n, d)| check_wlp_failure(n, d, strategy))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let fails = rows.iter().filter(|r| r.fails()).count();
    eprintln!("scan: {} rows, {} FailsWLP, {} inconclusive", rows.len(), fails, rows.len() - fails);
    let records: Vec<VerdictRecord> = rows.iter().map(WlpVerdict::record).collect();
    let data = match format {
        Format::Human => {
            let mut s = String::new();
            for r in &records {
                s += &format!(
                    "n={:<4} d={:<4} j={:<6} E={:<12} D>={:<12} {:<14} {}\n",
                    r.n, r.d, r.j, r.e, r.d_lower, r.certificate_tag, r.verdict
                );
            }
            s
        }
        Format::Json => json(&records)?,
        Format::Csv => csv_records(&records)?,
    };
    Ok(Output {
        data,
        status: if fails == rows.len() { 0 } else { 2 },
    })
}

#[derive(Serialize)]
struct VdimOutput {
    system: String,
    virtual_dim: String,
}

#[derive(Serialize)]
struct StepOutput {
    system: String,
    t: i64,
    result: String,
}

fn cmd_linsys(expr: &str, action: LinsysAction, format: Format) -> CmdResult {
    if format == Format::Csv {
        return Err(no_csv("linsys"));
    }
    let system: LinearSystem = expr.parse().map_err(|e: wlpcheck::Error| e.to_string())?;
    let data = match action {
        LinsysAction::Vdim => {
            let v = virtual_dim(&system);
            match format {
                Format::Json => json(&VdimOutput {
                    system: system.to_string(),
                    virtual_dim: v.to_string(),
                })?,
                _ => format!("{v}\n"),
            }
        }
        LinsysAction::Cremona => {
            let next = cremona_step(&system).map_err(|e| e.to_string())?;
            let t = cremona_t(&system).map_err(|e| e.to_string())?;
            match format {
                Format::Json => json(&StepOutput {
                    system: system.to_string(),
                    t,
                    result: next.to_string(),
                })?,
                _ => format!("{system} -> {next} (t = {t})\n"),
            }
        }
        LinsysAction::Reduce => {
            let (_, trace) = cremona_reduce(&system);
            match format {
                Format::Json => json(&trace)?,
                _ => {
                    let mut s = String::new();
                    for (sys, t) in &trace.steps {
                        s += &format!("{sys} (t = {t})\n");
                    }
                    s += &format!("{}\n", trace.final_system);
                    s += &format!("stop: {:?}\n", trace.stop);
                    s
                }
            }
        }
    };
    Ok(Output::ok(data))
}

#[derive(Serialize)]
struct TableOutput {
    kind: String,
    variable_count: usize,
    exponents: Vec<i64>,
    values: Vec<String>,
}

fn cmd_hilbert(cmd: HilbertCommand, format: Format) -> CmdResult {
    let table: HilbertTable = match cmd {
        HilbertCommand::Ci { vars, exponents } => ci_table(vars, &exponents.0),
        HilbertCommand::Froberg {
            vars,
            forms,
            degree,
            max_degree,
        } => froberg_table(vars, forms, degree, max_degree),
    }
    .map_err(|e| e.to_string())?;
    let values: Vec<String> = table.values.iter().map(ToString::to_string).collect();
    let data = match format {
        Format::Human => values
            .iter()
            .enumerate()
            .map(|(i, v)| format!("{i} {v}\n"))
            .collect(),
        Format::Json => json(&TableOutput {
            kind: format!("{:?}", table.kind),
            variable_count: table.variable_count,
            exponents: table.exponents.clone(),
            values,
        })?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["degree", "value"]).map_err(|e| e.to_string())?;
            for (i, v) in values.iter().enumerate() {
                w.write_record([i.to_string(), v.clone()]).map_err(|e| e.to_string())?;
            }
            String::from_utf8(w.into_inner().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?
        }
    };
    Ok(Output::ok(data))
}

fn human_oracle(r: &wlpcheck::OracleResult) -> String {
    let trials: Vec<String> = r.per_trial_values.iter().map(ToString::to_string).collect();
    format!(
        "dimension = {} (trials: {}; p = {}, seed = {})\n",
        r.dimension,
        trials.join(", "),
        r.problem.prime,
        r.problem.seed
    )
}

fn cmd_oracle(cmd: OracleCommand, config: &OracleConfig, format: Format) -> CmdResult {
    if format == Format::Csv {
        return Err(no_csv("oracle"));
    }
    let err = |e: wlpcheck::Error| e.to_string();
    match cmd {
        OracleCommand::Power { vars, exponents, at } => {
            let r = random_power_quotient_dim(vars, &exponents.0, at, config).map_err(err)?;
            Ok(Output::ok(if format == Format::Json { json(&r)? } else { human_oracle(&r) }))
        }
        OracleCommand::Fatpoints { system } => {
            let system: LinearSystem = system.parse().map_err(err)?;
            let r = fatpoint_dim_system(&system, config).map_err(err)?;
            Ok(Output::ok(if format == Format::Json { json(&r)? } else { human_oracle(&r) }))
        }
        OracleCommand::Duality { vars, exponents, at } => {
            let c = duality_check(vars, &exponents.0, at, config).map_err(err)?;
            let data = if format == Format::Json {
                json(&c)?
            } else {
                format!(
                    "power side: {}\nfat-point side ({}): {}\n{}\n",
                    c.power_side.dimension,
                    c.system,
                    c.fatpoint_side.dimension,
                    if c.agree { "agree" } else { "MISMATCH" }
                )
            };
            Ok(Output {
                data,
                status: if c.agree { 0 } else { 3 },
            })
        }
    }
}

fn cmd_reproduce(target: Target, d_max: i64, cn_max: i64, format: Format) -> CmdResult {
    if format == Format::Csv {
        return Err(no_csv("reproduce"));
    }
    if d_max < 4 || cn_max < 2 {
        return Err("--d-max must be at least 4 and --cn-max at least 2".to_string());
    }
    eprintln!("reproduce: running {target:?}");
    let options = ReproduceOptions {
        theorem41_d_max: d_max,
        cn_max,
    };
    let report = reproduce::run(target, options).map_err(|e| e.to_string())?;
    let data = match format {
        Format::Json => json(&report)?,
        _ => format!("{report}\n"),
    };
    Ok(Output {
        data,
        status: if report.passed() { 0 } else { 3 },
    })
}
