//! `pnsieve`: analyze pairs, replay the tables, scan characteristic 5, run
//! the finite-field oracle and factor q^m - 1.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pnsieve::cache::FactorCache;
use pnsieve::charsum::{self, CheckRecord};
use pnsieve::ffield::{self, build_field, FieldCtx, RationalFunc};
use pnsieve::intfact::Budget;
use pnsieve::par::Exec;
use pnsieve::report::{write_csv, CsvRow, ScanCsvRow};
use pnsieve::search::{self, PairStatus, RowOutcome, Tag};
use pnsieve::Error;

const EXIT_FAIL: u8 = 1;
const EXIT_EXCEPTION: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "pnsieve", version, about = "Sieve criteria and finite-field oracles for primitive normal pairs with prescribed inverse trace")]
struct Cli {
    /// Keep factorizations in memory only, ignoring PNSIEVE_CACHE.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Pollard rho iteration budget per factorization.
    #[arg(long, global = true, default_value_t = 400_000_000)]
    budget: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Resolve one pair (q, m): exit 0 verified, 2 possible exception, 3 inconclusive.
    Analyze {
        q: u64,
        m: u64,
        #[arg(long, default_value_t = 4)]
        n: u64,
        #[arg(long)]
        json: bool,
    },
    /// Replay the published table rows; nonzero exit if a row does not hold.
    Tables {
        #[arg(long, value_enum, default_value_t = Which::Both)]
        which: Which,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Resolve every (p^k, m) with k <= kmax and mmin <= m <= mmax.
    Scan {
        #[arg(long = "char", default_value_t = 5)]
        characteristic: u64,
        #[arg(long, default_value_t = 7)]
        kmax: u32,
        #[arg(long, default_value_t = 5)]
        mmin: u64,
        #[arg(long, default_value_t = 48)]
        mmax: u64,
        #[arg(long, default_value_t = 4)]
        n: u64,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Brute-force checks on F_{p^{km}} over F_{p^k}; prints JSON records.
    Oracle {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        m: u32,
        /// Rational function `num / den` with integer coefficients.
        #[arg(long)]
        f: Option<String>,
        /// Prescribed trace of alpha^{-1}, in the base-field encoding.
        #[arg(long, default_value_t = 0)]
        a: u64,
        /// Random functions per field in the Weil suite.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(value_enum, required = true)]
        checks: Vec<Check>,
    },
    /// Print the factorization of q^m - 1.
    Factor {
        q: u64,
        m: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Check {
    Identities,
    Weil,
    Counts,
    Find,
}

fn exec_for(jobs: Option<usize>) -> Exec {
    jobs.map_or_else(Exec::auto, Exec::with_jobs)
}

fn is_usage(e: &Error) -> bool {
    matches!(e, Error::MTooSmall(_) | Error::NotPrimePower(_) | Error::InvalidArgument(_) | Error::Parse(_))
}

/// Writes one line to stdout; a closed pipe ends output quietly.
fn emit(text: &str) -> Result<(), Error> {
    match writeln!(io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(Error::Io(e.to_string())),
        _ => Ok(()),
    }
}

fn print_json(v: &impl serde::Serialize) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(v).map_err(|e| Error::Io(e.to_string()))?;
    emit(&text)
}

fn write_csv_file<T: serde::Serialize>(path: &PathBuf, rows: &[T]) -> Result<(), Error> {
    let file = File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    write_csv(io::BufWriter::new(file), rows)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { EXIT_USAGE } else { 0 });
        }
    };
    let budget = Budget { rho_iterations: cli.budget };
    let cache = if cli.no_cache { FactorCache::new(budget) } else { FactorCache::from_env(budget) };
    match run(cli.cmd, &cache) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if is_usage(&e) { EXIT_USAGE } else { EXIT_FAIL })
        }
    }
}

fn run(cmd: Cmd, cache: &FactorCache) -> Result<u8, Error> {
    match cmd {
        Cmd::Analyze { q, m, n, json } => analyze(q, m, n, json, cache),
        Cmd::Tables { which, csv, json, jobs } => tables(which, csv, json, exec_for(jobs), cache),
        Cmd::Scan { characteristic, kmax, mmin, mmax, n, jobs, csv, json } => {
            scan(characteristic, kmax, (mmin, mmax), n, exec_for(jobs), csv, json, cache)
        }
        Cmd::Oracle { p, k, m, f, a, samples, jobs, checks } => {
            oracle(p, k, m, f.as_deref(), a, samples, exec_for(jobs), &checks)
        }
        Cmd::Factor { q, m, json } => {
            let fact = cache.get(q, m)?;
            if json {
                print_json(&fact)?;
            } else {
                emit(&fact.product_string())?;
            }
            Ok(0)
        }
    }
}

fn tag_text(tag: Tag) -> String {
    serde_json::to_value(tag).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

fn print_status(st: &PairStatus) {
    let mut out = io::stdout().lock();
    let _ = writeln!(out, "({}, {}) n={} {}", st.q, st.m, st.n, tag_text(st.tag));
    if st.bounds_used {
        let _ = writeln!(out, "  bounds used: W(q^m-1) from an incomplete factorization");
    }
    if let Some(rep) = &st.certificate {
        let row = CsvRow::from_report(rep);
        let _ = writeln!(out, "  method  {}", serde_json::to_value(rep.method).unwrap_or(Value::Null).as_str().unwrap_or(""));
        if !row.d.is_empty() {
            let _ = writeln!(out, "  d = {}  r = {}  g degrees = [{}]  s = {}", row.d, row.r, row.g_degrees, row.s);
        }
        if !row.lambda.is_empty() {
            let _ = writeln!(out, "  lambda  {}\n  Lambda  {}", row.lambda, row.big_lambda);
        }
        let _ = writeln!(out, "  q^({}) = {} > {}", rep.lhs_exponent, row.lhs, row.rhs);
    }
}

fn analyze(q: u64, m: u64, n: u64, json: bool, cache: &FactorCache) -> Result<u8, Error> {
    let st = search::resolve_pair(q, m, n, cache)?;
    if json {
        print_json(&st)?;
    } else {
        print_status(&st);
    }
    Ok(match st.tag {
        t if t.is_verified() => 0,
        _ if st.inconclusive() => EXIT_INCONCLUSIVE,
        _ => EXIT_EXCEPTION,
    })
}

fn row_line(r: &RowOutcome) -> String {
    let c = CsvRow::from(r);
    let mut flags = Vec::new();
    for (ok, name, err) in [
        (r.lambda_ok, "lambda", None),
        (r.big_lambda_ok, "Lambda", None),
        (r.lhs_ok, "lhs", Some(r.lhs_rel_err)),
        (r.rhs_ok, "rhs", Some(r.rhs_rel_err)),
    ] {
        if !ok {
            flags.push(match err {
                Some(e) if e.is_finite() => format!("{name} off by {e:.2e}"),
                _ => format!("{name} off"),
            });
        }
    }
    if (r.r, r.s) != (r.printed_r, r.printed_s) {
        flags.push(format!("printed r/s {}/{}", r.printed_r, r.printed_s));
    }
    format!(
        "T{} #{:<2} ({}, {})  d={} r={} g={} s={}  lambda {} Lambda {}  {} > {}  {}{}",
        r.table,
        r.index,
        r.q,
        r.m,
        c.d,
        c.r,
        r.g,
        c.s,
        c.lambda,
        c.big_lambda,
        c.lhs,
        if c.big_lambda.is_empty() { "undefined" } else { c.rhs.as_str() },
        if r.report.holds { "holds" } else { "FAILS" },
        if flags.is_empty() { String::new() } else { format!("  [{}]", flags.join("; ")) },
    )
}

fn tables(which: Which, csv: Option<PathBuf>, json: bool, exec: Exec, cache: &FactorCache) -> Result<u8, Error> {
    let sel = match which {
        Which::One => Some(1),
        Which::Two => Some(2),
        Which::Both => None,
    };
    let rows = search::reproduce_tables(sel, exec, cache)?;
    if let Some(path) = &csv {
        let out: Vec<CsvRow> = rows.iter().map(CsvRow::from).collect();
        write_csv_file(path, &out)?;
    }
    if json {
        print_json(&rows)?;
    } else {
        for r in &rows {
            emit(&row_line(r))?;
        }
    }
    match search::check_rows(&rows) {
        Ok(()) => Ok(0),
        Err(e) => {
            eprintln!("error: {e}");
            Ok(EXIT_FAIL)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn scan(
    p: u64,
    kmax: u32,
    range: (u64, u64),
    n: u64,
    exec: Exec,
    csv: Option<PathBuf>,
    json: bool,
    cache: &FactorCache,
) -> Result<u8, Error> {
    let report = search::scan(p, kmax, range, n, exec, cache)?;
    if let Some(path) = &csv {
        let rows: Vec<ScanCsvRow> = report.statuses.iter().map(ScanCsvRow::from).collect();
        write_csv_file(path, &rows)?;
    }
    if json {
        print_json(&report)?;
        return Ok(0);
    }
    let mut counts = std::collections::BTreeMap::new();
    for st in &report.statuses {
        *counts.entry(tag_text(st.tag)).or_insert(0usize) += 1;
    }
    emit(&format!(
        "characteristic {} k <= {} {} <= m <= {} n = {}: {} pairs",
        p,
        kmax,
        report.m_min,
        report.m_max,
        n,
        report.statuses.len()
    ))?;
    for (tag, c) in &counts {
        emit(&format!("  {tag:<20} {c}"))?;
    }
    let list: Vec<String> = report.exceptions.iter().map(|(q, m)| format!("({q}, {m})")).collect();
    emit(&format!("possible exceptions ({}): {}", list.len(), list.join(" ")))?;
    let inconclusive = report.statuses.iter().filter(|s| s.inconclusive()).count();
    if inconclusive > 0 {
        emit(&format!("inconclusive (bounded W): {inconclusive}"))?;
    }
    Ok(0)
}

fn find_record(ctx: &FieldCtx, f: Option<&RationalFunc>, a: u64) -> CheckRecord {
    let (alpha, params, holds) = match f {
        Some(f) => {
            let alpha = ffield::find_alpha(ctx, f, a);
            let ok = alpha.is_none_or(|x| {
                let y = f.eval(ctx, x);
                y.is_some_and(|y| {
                    ffield::is_primitive(ctx, x)
                        && ffield::is_primitive(ctx, y)
                        && ffield::is_normal(ctx, x)
                        && ffield::is_normal(ctx, y)
                }) && ffield::inverse_trace_is(ctx, x, a)
            });
            (alpha, json!({ "f": f.show(ctx), "a": a }), ok)
        }
        None => {
            let alpha = ffield::find_primitive_inverse_trace(ctx, a);
            let ok = alpha.is_none_or(|x| ffield::is_primitive(ctx, x) && ffield::inverse_trace_is(ctx, x, a));
            (alpha, json!({ "a": a, "variant": "primitive only" }), ok)
        }
    };
    let mut rec = CheckRecord {
        check: "find".into(),
        field: ctx.describe(),
        parameters: params,
        max_deviation: None,
        lhs: None,
        bound: None,
        holds,
        witness: None,
    };
    rec.witness = Some(alpha.map_or(Value::Null, |x| Value::String(ctx.field().show(x))));
    rec
}

#[allow(clippy::too_many_arguments)]
fn oracle(
    p: u64,
    k: u32,
    m: u32,
    f: Option<&str>,
    a: u64,
    samples: usize,
    exec: Exec,
    checks: &[Check],
) -> Result<u8, Error> {
    let ctx = build_field(p, k, m)?;
    if a >= ctx.q {
        return Err(Error::InvalidArgument(format!("a = {a} is not an element of F_{}", ctx.q)));
    }
    let func = f.map(|s| RationalFunc::parse(&ctx, s)).transpose()?;
    let mut records = Vec::new();
    for check in checks {
        match check {
            Check::Identities => records.extend(charsum::identity_suite(&ctx, exec)?),
            Check::Weil => {
                let extra: Vec<RationalFunc> = func.iter().cloned().collect();
                records.extend(charsum::weil_suite(&ctx, &extra, samples, exec)?);
            }
            Check::Counts => {
                let fs: Vec<RationalFunc> = match &func {
                    Some(f) => vec![f.clone()],
                    None => charsum::counting_functions(&ctx),
                };
                records.extend(charsum::counting_suite(&ctx, &fs, exec)?);
            }
            Check::Find => records.push(find_record(&ctx, func.as_ref(), a)),
        }
    }
    print_json(&records)?;
    Ok(if records.iter().all(|r| r.holds) { 0 } else { EXIT_FAIL })
}
