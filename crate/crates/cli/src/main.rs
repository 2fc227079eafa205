use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use opart::asymptotics::{bound_r2, deviation, rademacher_truncation, SeriesParams};
use opart::exact::{build_table, load_table, save_table, OverpartitionTable};
use opart::interval::{Dyadic, Round};
use opart::verify::{
    required_table_max, run_campaign, solve_lambda_a, suite, CheckId, CheckResult, CheckSpec, Verdict, SUITES,
};
use opart_cli::report::{records, write_records, Format};

const EXIT_FAILS: u8 = 3;
const EXIT_UNDECIDED: u8 = 4;

#[derive(Parser)]
#[command(name = "opart", version, about = "Overpartition values, certified asymptotics and inequality checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build p̄(0..=max) and write it to a checksummed table file.
    Table {
        #[arg(long)]
        max: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print p̄(n) exactly.
    Value {
        n: u64,
        #[arg(long, env = "OPART_TABLE")]
        table: Option<PathBuf>,
    },
    /// Truncated series for p̄(n) with its error bound.
    Approx {
        n: u64,
        /// Odd-term cutoff.
        #[arg(default_value_t = 3)]
        cutoff: u64,
        #[arg(long, default_value_t = 256)]
        bits: u32,
        #[arg(long, env = "OPART_TABLE")]
        table: Option<PathBuf>,
    },
    /// Run one check over a range and emit per-n verdicts.
    Verify {
        #[arg(long)]
        check: String,
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        #[command(flatten)]
        run: RunArgs,
        /// Starting precision for interval checks.
        #[arg(long)]
        bits: Option<u32>,
    },
    /// Certified λ_a for a = 2..=5.
    Lambda,
    /// Run a named suite of checks.
    Campaign {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
        suite: String,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Report destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, env = "OPART_TABLE")]
    table: Option<PathBuf>,
}

/// A table covering `0..=need`: loaded from `path` when large enough, built otherwise.
fn table_for(path: Option<&Path>, need: u64) -> Result<OverpartitionTable> {
    if let Some(path) = path {
        if path.exists() {
            let t = load_table(path).with_context(|| format!("loading {}", path.display()))?;
            if t.max_n() >= need {
                return Ok(t);
            }
            eprintln!("note: {} stops at {}, building to {need}", path.display(), t.max_n());
        }
    }
    Ok(build_table(need)?)
}

fn cmd_table(max: u64, out: &Path) -> Result<ExitCode> {
    let t = build_table(max)?;
    save_table(&t, out).with_context(|| format!("writing {}", out.display()))?;
    println!("records {} sha256 {}", t.len(), t.digest());
    Ok(ExitCode::SUCCESS)
}

fn cmd_value(n: u64, table: Option<&Path>) -> Result<ExitCode> {
    let t = table_for(table, n)?;
    println!("{}", t.get(n)?);
    Ok(ExitCode::SUCCESS)
}

fn cmd_approx(n: u64, cutoff: u64, bits: u32, table: Option<&Path>) -> Result<ExitCode> {
    let params = SeriesParams::new(n, cutoff, bits)?;
    let tr = match rademacher_truncation(params) {
        Ok(tr) => tr,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(ExitCode::from(EXIT_UNDECIDED));
        }
    };
    let bound = bound_r2(n, cutoff, false, bits)?;
    let t = table_for(table, n)?;
    let exact = t.get(n)?;
    let dev = deviation(exact, &tr);
    let nearest = tr.midpoint().round_to_integer();
    println!("truncation  {tr}");
    println!("bound       {}", bound.hi().to_sci(17, Round::Up));
    println!("exact       {exact}");
    println!("deviation   {}", dev.abs().hi().to_sci(17, Round::Up));
    println!("nearest     {nearest} ({})", if &nearest == exact { "matches" } else { "differs" });
    Ok(ExitCode::SUCCESS)
}

fn exit_for(results: &[CheckResult]) -> ExitCode {
    let fails: usize = results.iter().map(|r| r.count(Verdict::Fails)).sum();
    let undecided: usize = results.iter().map(|r| r.count(Verdict::Undecided)).sum();
    if fails > 0 {
        ExitCode::from(EXIT_FAILS)
    } else if undecided > 0 {
        ExitCode::from(EXIT_UNDECIDED)
    } else {
        ExitCode::SUCCESS
    }
}

fn execute(specs: &[CheckSpec], run: &RunArgs) -> Result<ExitCode> {
    for s in specs {
        s.validate()?;
    }
    let table = match required_table_max(specs) {
        Some(need) => Some(table_for(run.table.as_deref(), need)?),
        None => None,
    };
    let jobs = run
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let results = run_campaign(specs, table.as_ref(), jobs)?;
    let recs = records(&results);
    match &run.out {
        Some(path) => {
            let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_records(f, run.format, &recs)?;
        }
        None => write_records(io::stdout().lock(), run.format, &recs)?,
    }
    let mut err = io::stderr().lock();
    for r in &results {
        writeln!(
            err,
            "{} {}..={}: holds {} equality {} fails {} undecided {} ({:.2}s)",
            r.spec.check,
            r.spec.from_n,
            r.spec.to_n,
            r.count(Verdict::Holds),
            r.count(Verdict::Equality),
            r.count(Verdict::Fails),
            r.count(Verdict::Undecided),
            r.wall_time
        )?;
    }
    Ok(exit_for(&results))
}

fn cmd_verify(check: &str, from: u64, to: u64, bits: Option<u32>, run: &RunArgs) -> Result<ExitCode> {
    let id: CheckId = check.parse()?;
    let mut spec = CheckSpec::new(id, from, to);
    if let Some(bits) = bits {
        spec = spec.with_precision(bits);
    }
    if id == CheckId::RademacherBound {
        // The bound criterion is stated at one fixed precision.
        spec = spec.with_precision(bits.unwrap_or(256)).with_max_precision(bits.unwrap_or(256));
    }
    execute(&[spec], run)
}

fn cmd_lambda() -> Result<ExitCode> {
    let table = solve_lambda_a()?;
    println!("a  lambda_a  enclosure  width");
    for (a, iv) in &table.entries {
        let mid: Dyadic = iv.midpoint();
        println!("{a}  {:.6}  {}  {}", mid.to_f64(), iv, iv.width().to_sci(3, Round::Up));
    }
    Ok(ExitCode::SUCCESS)
}

fn run_cli(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Table { max, out } => cmd_table(max, &out),
        Command::Value { n, table } => cmd_value(n, table.as_deref()),
        Command::Approx {
            n,
            cutoff,
            bits,
            table,
        } => {
            if n < 1 {
                bail!("approx needs n >= 1");
            }
            cmd_approx(n, cutoff, bits, table.as_deref())
        }
        Command::Verify {
            check,
            from,
            to,
            run,
            bits,
        } => cmd_verify(&check, from, to, bits, &run),
        Command::Lambda => cmd_lambda(),
        Command::Campaign { suite: name, run } => {
            let specs = suite(&name).expect("validated by clap");
            execute(&specs, &run)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run_cli(cli) {
        Ok(code) => code,
        Err(e) => {
            if let Some(opart::verify::VerifyError::UnknownCheck(name)) = e.downcast_ref() {
                let names: Vec<&str> = opart::verify::ALL_CHECKS.iter().map(|c| c.name()).collect();
                eprintln!("error: unknown check `{name}`; expected one of {}", names.join(", "));
                return ExitCode::from(2);
            }
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
