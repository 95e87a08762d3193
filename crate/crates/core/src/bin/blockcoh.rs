//! Batch driver: block scans, verification suites and block summaries with
//! machine-readable JSON reports.
//!
//! Exit codes: 0 when every hard assertion passes, 2 when any fails, 1 on
//! usage errors.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use blockcoh::budget::Budget;
use blockcoh::report::{
    block_info_text, run_scan, run_verify, ScanConfig, Suite, DEFAULT_CATALOG, DEFAULT_PRIMES,
};

#[derive(Parser)]
#[command(
    name = "blockcoh",
    about = "Exact block decompositions, fusion systems and cohomology transfer checks for small finite group algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan (group, prime) pairs and emit one JSON record per block.
    Scan(ScanArgs),
    /// Run a named verification suite.
    Verify(VerifyArgs),
    /// Print blocks, defect groups, the source idempotent choice and the
    /// double-coset multiset for one group algebra.
    BlockInfo(BlockInfoArgs),
}

#[derive(Args)]
struct ScanArgs {
    /// Group spec: C n | D n | S n | A n | Q8 | prod(a,b) | perm: (cycles), ...
    /// Repeatable; the built-in catalog is used when omitted.
    #[arg(long = "group")]
    groups: Vec<String>,
    /// Prime(s) to scan. Required unless --default-catalog is given.
    #[arg(long = "prime")]
    primes: Vec<u32>,
    /// Scan the shipped catalog at p = 2 and 3.
    #[arg(long = "default-catalog", default_value_t = false)]
    default_catalog: bool,
    /// Largest cohomological degree scanned.
    #[arg(long = "max-degree", default_value_t = 4)]
    max_degree: usize,
    /// Largest Hochschild degree for the mackey / hh-square suites.
    #[arg(long = "hh-degree", default_value_t = 1)]
    hh_degree: usize,
    /// Suites to run: blocks|mackey|sasaki|transfer|hh-square (comma lists
    /// allowed, flag repeatable).
    #[arg(long = "suite", default_value = "sasaki")]
    suites: Vec<String>,
    /// Matrix-entry budget override: N or N,M (GF(2), other fields).
    #[arg(long = "budget")]
    budget: Option<String>,
    /// Report file; stdout when omitted.
    #[arg(long = "out")]
    out: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// mackey | delta-square | reciprocity | transitivity | hh-square
    suite: String,
    #[arg(long = "group")]
    group: String,
    #[arg(long = "prime")]
    prime: u32,
    #[arg(long = "max-degree", default_value_t = 2)]
    max_degree: usize,
    #[arg(long = "hh-degree", default_value_t = 1)]
    hh_degree: usize,
    /// Subgroup for the transfer-law suites, as a comma list of element
    /// names, e.g. "(12),(123)"; the normalizer pair is used when omitted.
    #[arg(long = "subgroup")]
    subgroup: Option<String>,
    #[arg(long = "budget")]
    budget: Option<String>,
    /// JSON detail file; summary always goes to stdout.
    #[arg(long = "out")]
    out: Option<String>,
}

#[derive(Args)]
struct BlockInfoArgs {
    #[arg(long = "group")]
    group: String,
    #[arg(long = "prime")]
    prime: u32,
}

fn parse_budget(arg: &Option<String>) -> Result<Budget, String> {
    let mut b = Budget::from_env();
    if let Some(s) = arg {
        if let Some((x, y)) = s.split_once(',') {
            let gx = x.trim().parse().map_err(|_| format!("bad budget `{s}`"))?;
            let gy = y.trim().parse().map_err(|_| format!("bad budget `{s}`"))?;
            b.gf2_entries = gx;
            b.other_entries = gy;
        } else {
            let v: u64 = s.trim().parse().map_err(|_| format!("bad budget `{s}`"))?;
            b.gf2_entries = v;
            b.other_entries = v;
        }
    }
    Ok(b)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help/version requests are not usage errors
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match cli.command {
        Command::Scan(args) => cmd_scan(args),
        Command::Verify(args) => cmd_verify(args),
        Command::BlockInfo(args) => cmd_block_info(args),
    }
}

fn cmd_scan(args: ScanArgs) -> ExitCode {
    let budget = match parse_budget(&args.budget) {
        Ok(b) => b,
        Err(msg) => {
            eprintln!("{msg}");
            return ExitCode::from(1);
        }
    };
    let mut suites = Vec::new();
    for chunk in &args.suites {
        for name in chunk.split(',') {
            match Suite::parse(name.trim()) {
                Ok(s) => suites.push(s),
                Err(e) => {
                    eprintln!("{e}");
                    return ExitCode::from(1);
                }
            }
        }
    }
    if args.primes.is_empty() && !args.default_catalog {
        eprintln!("missing --prime (or pass --default-catalog)");
        return ExitCode::from(1);
    }
    let config = ScanConfig {
        groups: if args.groups.is_empty() {
            DEFAULT_CATALOG.iter().map(|s| s.to_string()).collect()
        } else {
            args.groups
        },
        primes: if args.primes.is_empty() {
            DEFAULT_PRIMES.to_vec()
        } else {
            args.primes
        },
        max_degree: args.max_degree,
        hh_degree: args.hh_degree,
        suites,
        budget,
    };
    let report = match run_scan(&config) {
        Ok(r) => r,
        Err(blockcoh::Error::Usage(msg)) | Err(blockcoh::Error::BadGroup(msg)) => {
            eprintln!("{msg}");
            return ExitCode::from(1);
        }
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let json = report.to_json();
    if let Some(path) = &args.out {
        if let Err(e) = std::fs::write(path, &json) {
            eprintln!("cannot write {path}: {e}");
            return ExitCode::from(1);
        }
        println!(
            "{} record(s) written to {path}; {} hard failure(s)",
            report.records.len(),
            report.hard_failures.len()
        );
    } else {
        println!("{json}");
    }
    for failure in &report.hard_failures {
        eprintln!("hard assertion failed: {failure}");
    }
    if report.hard_failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

fn cmd_verify(args: VerifyArgs) -> ExitCode {
    let budget = match parse_budget(&args.budget) {
        Ok(b) => b,
        Err(msg) => {
            eprintln!("{msg}");
            return ExitCode::from(1);
        }
    };
    let report = match run_verify(
        &args.suite,
        &args.group,
        args.prime,
        args.max_degree,
        args.hh_degree,
        args.subgroup.as_deref(),
        budget,
    ) {
        Ok(r) => r,
        Err(blockcoh::Error::Usage(msg)) | Err(blockcoh::Error::BadGroup(msg)) => {
            eprintln!("{msg}");
            return ExitCode::from(1);
        }
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    for item in &report.items {
        println!("{} {}", if item.pass { "pass" } else { "FAIL" }, item.name);
    }
    println!(
        "{}: {} on {} at p={} ({} checks, {} ms)",
        if report.passed { "PASS" } else { "FAIL" },
        report.suite,
        report.group,
        report.prime,
        report.items.len(),
        report.elapsed_ms
    );
    if let Some(path) = &args.out {
        let json = serde_json::to_string_pretty(&report).expect("report serializes");
        if let Err(e) = std::fs::write(path, json) {
            eprintln!("cannot write {path}: {e}");
            return ExitCode::from(1);
        }
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

fn cmd_block_info(args: BlockInfoArgs) -> ExitCode {
    match block_info_text(&args.group, args.prime) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(blockcoh::Error::Usage(msg)) | Err(blockcoh::Error::BadGroup(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(blockcoh::Error::BudgetExceeded { needed, budget }) => {
            eprintln!("budget exceeded: computation needs {needed} entries, budget {budget}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
    }
}
