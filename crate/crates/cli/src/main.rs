mod args;

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::Parser;
use num_rational::BigRational;
use padic_sums::bfile::{compare, BFile, Comparison};
use padic_sums::cache::TableCache;
use padic_sums::generators::sequence_slice;
use padic_sums::kernel::{format_rational, rat_from_int};
use padic_sums::padic::expand;
use padic_sums::summation::SeriesSpec;
use padic_sums::suites::{self, FiniteGrid, PadicGrid, TelescopeGrid};
use padic_sums::{Execution, GeneratedTables, SequenceId, Sign, SuiteReport};

use args::{AllArgs, CacheAction, Cli, Command, FiniteArgs, Format, OdeArgs, PadicArgs, Suite, TelescopeArgs};

/// Rendered output and whether every check passed.
struct Output {
    text: String,
    ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if let Err(e) = emit(&cli, &out.text) {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn mode(cli: &Cli) -> Execution {
    if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Tables { kmax, eps } => cmd_tables(cli, *kmax, *eps),
        Command::Verify { suite } => cmd_verify(cli, suite),
        Command::Seq { id, kmax } => cmd_seq(cli, id, *kmax),
        Command::SeqCompare {
            id,
            reference,
            kmax,
            offset,
        } => cmd_seq_compare(cli, id, reference, *kmax, *offset),
        Command::Cache { action } => cmd_cache(cli, *action),
    }
}

fn cache(cli: &Cli) -> Option<TableCache> {
    if cli.no_cache {
        return None;
    }
    let dir = cli.cache_dir.clone().or_else(|| {
        std::env::var_os("XDG_CACHE_HOME")
            .map(PathBuf::from)
            .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))
            .map(|d| d.join("padic-sums"))
    })?;
    Some(TableCache::new(dir))
}

fn signs(eps: Option<Sign>) -> Vec<Sign> {
    eps.map_or_else(|| Sign::BOTH.to_vec(), |e| vec![e])
}

fn cmd_tables(cli: &Cli, kmax: usize, eps: Option<Sign>) -> Result<Output> {
    let cache = cache(cli);
    let mut tables = Vec::new();
    for eps in signs(eps) {
        let t = match &cache {
            Some(c) => c.get_or_build(kmax, eps),
            None => GeneratedTables::build(kmax, eps),
        }
        .with_context(|| format!("generating tables for eps = {eps}"))?;
        tables.push(t);
    }
    let text = match cli.format.unwrap_or(Format::Text) {
        Format::Json => {
            let files: Vec<_> = tables.iter().map(GeneratedTables::to_file).collect();
            let value = if files.len() == 1 {
                serde_json::to_value(&files[0])?
            } else {
                serde_json::to_value(&files)?
            };
            serde_json::to_string_pretty(&value)? + "\n"
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["table", "eps", "k", "value"])?;
            for t in &tables {
                let e = t.eps().value().to_string();
                for (k, a) in t.a.entries().iter().enumerate() {
                    w.write_record(["A", &e, &k.to_string(), &a.to_string()])?;
                }
                let one = BigRational::from_integer(1.into());
                for k in 1..=t.max_k() {
                    let (u, v) = (t.uv.u(k), t.uv.v(k));
                    w.write_record(["U", &e, &k.to_string(), &u.render("x")])?;
                    w.write_record(["V", &e, &k.to_string(), &v.render("x")])?;
                    w.write_record(["u", &e, &k.to_string(), &format_rational(&u.eval(&one))])?;
                    w.write_record(["v", &e, &k.to_string(), &format_rational(&v.eval(&one))])?;
                }
            }
            String::from_utf8(w.into_inner()?)?
        }
        Format::Text => tables_text(&tables),
        Format::Bfile => bail!("the bfile format applies to `seq`; use json, csv or text for tables"),
    };
    Ok(Output { text, ok: true })
}

fn tables_text(tables: &[GeneratedTables]) -> String {
    let one = BigRational::from_integer(1.into());
    let mut out = String::new();
    for t in tables {
        let _ = writeln!(out, "eps = {}", t.eps());
        for (k, a) in t.a.entries().iter().enumerate() {
            let _ = writeln!(out, "A_{k} = {a}");
        }
        for k in 1..=t.max_k() {
            let _ = writeln!(out, "U_{k} = {}", t.uv.u(k).render("x"));
            let _ = writeln!(out, "V_{k} = {}", t.uv.v(k).render("x"));
        }
        for k in 1..=t.max_k() {
            let _ = writeln!(
                out,
                "u_{k} = {}  v_{k} = {}",
                format_rational(&t.uv.u(k).eval(&one)),
                format_rational(&t.uv.v(k).eval(&one))
            );
        }
        out.push('\n');
    }
    out.pop();
    out
}

fn cmd_verify(cli: &Cli, suite: &Suite) -> Result<Output> {
    let mode = mode(cli);
    let reports = match suite {
        Suite::Finite(a) => vec![finite(a, mode)?],
        Suite::Telescope(a) => vec![telescope(a, mode)?],
        Suite::Padic(a) => vec![padic(a, mode)?],
        Suite::Ode(a) => vec![ode(a, mode)?],
        Suite::All(AllArgs { seed }) => vec![
            suites::finite_suite(&FiniteGrid::default(), mode)?,
            suites::telescope_suite(
                &TelescopeGrid {
                    seed: *seed,
                    ..TelescopeGrid::default()
                },
                mode,
            )?,
            suites::padic_suite(&PadicGrid::default(), mode)?,
            suites::ode_suite(3..=50, mode)?,
            suites::routes_suite(15, mode)?,
            suites::bell_suite(25),
            suites::legendre_suite(500, &PadicGrid::default().primes, mode),
        ],
    };
    let ok = reports.iter().all(SuiteReport::passed);
    let text = match cli.format.unwrap_or(Format::Text) {
        Format::Json => {
            let value: Vec<_> = reports.iter().map(SuiteReport::to_json).collect();
            let value = if value.len() == 1 { value[0].clone() } else { value.into() };
            serde_json::to_string_pretty(&value)? + "\n"
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["suite", "check", "params", "residual", "boundary", "verdict", "detail"])?;
            for r in &reports {
                for c in &r.checks {
                    w.write_record([
                        r.suite.as_str(),
                        &c.check,
                        &c.params.to_string(),
                        &c.residual,
                        &c.boundary,
                        c.verdict.as_str(),
                        c.detail.as_deref().unwrap_or(""),
                    ])?;
                }
            }
            String::from_utf8(w.into_inner()?)?
        }
        Format::Text => reports.iter().map(SuiteReport::to_text).collect::<Vec<_>>().join("\n"),
        Format::Bfile => bail!("the bfile format applies to `seq`"),
    };
    Ok(Output { text, ok })
}

fn finite(a: &FiniteArgs, mode: Execution) -> Result<SuiteReport> {
    let mut grid = FiniteGrid {
        kmax: a.kmax,
        n_max: a.n_max,
        signs: signs(a.eps),
        ..FiniteGrid::default()
    };
    if !a.x.is_empty() {
        grid.xs = a.x.clone();
    }
    Ok(suites::finite_suite(&grid, mode)?)
}

fn telescope(a: &TelescopeArgs, mode: Execution) -> Result<SuiteReport> {
    let grid = TelescopeGrid {
        random_specs: a.count,
        seed: a.seed,
        n_max: a.n_max,
    };
    Ok(suites::telescope_suite(&grid, mode)?)
}

fn padic(a: &PadicArgs, mode: Execution) -> Result<SuiteReport> {
    if let Some(claim) = &a.claim {
        let eps = a.eps.unwrap_or(Sign::Plus);
        let x = match a.x.as_slice() {
            [] => rat_from_int(1),
            [x] => x.clone(),
            _ => bail!("--claim checks one series; pass a single --x"),
        };
        let spec = if a.coeffs.is_empty() {
            SeriesSpec::single(a.k, eps, x)?
        } else {
            SeriesSpec::with_coeffs(a.coeffs.clone(), eps, x)?
        };
        let mut report = suites::padic_claim(&spec, claim, &a.primes, a.n_max, mode)?;
        for (check, p) in report.checks.iter_mut().zip(&a.primes) {
            let expansion = expand(claim, *p, a.precision.max(1));
            let detail = check.detail.take().unwrap_or_default();
            check.detail = Some(format!("{detail}; claim {expansion}"));
        }
        return Ok(report);
    }
    let mut grid = PadicGrid {
        kmax: a.kmax,
        n_max: a.n_max,
        primes: a.primes.clone(),
        signs: signs(a.eps),
        ..PadicGrid::default()
    };
    if !a.x.is_empty() {
        grid.xs = a.x.clone();
    }
    Ok(suites::padic_suite(&grid, mode)?)
}

fn ode(a: &OdeArgs, mode: Execution) -> Result<SuiteReport> {
    if a.n_max < 3 {
        bail!("truncation orders start at 3; got N = {}", a.n_max);
    }
    Ok(suites::ode_suite(3..=a.n_max, mode)?)
}

fn sequence(id: &str, kmax: usize) -> Result<(SequenceId, BFile)> {
    let id: SequenceId = id.parse()?;
    let values = sequence_slice(id, kmax);
    Ok((id, BFile::from_slice(id.first_index() as i64, &values)))
}

fn cmd_seq(cli: &Cli, id: &str, kmax: usize) -> Result<Output> {
    let (id, b) = sequence(id, kmax)?;
    let text = match cli.format.unwrap_or(Format::Bfile) {
        Format::Bfile => format!("# {id}\n{}", b.render()),
        Format::Text => {
            let values: Vec<String> = b.entries.iter().map(|(_, v)| v.to_string()).collect();
            format!("{id}: {}\n", values.join(", "))
        }
        Format::Json => {
            let values: Vec<String> = b.entries.iter().map(|(_, v)| v.to_string()).collect();
            let value = serde_json::json!({
                "id": id.to_string(),
                "first_index": id.first_index(),
                "values": values,
            });
            serde_json::to_string_pretty(&value)? + "\n"
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["index", "value"])?;
            for (i, v) in &b.entries {
                w.write_record([i.to_string(), v.to_string()])?;
            }
            String::from_utf8(w.into_inner()?)?
        }
    };
    Ok(Output { text, ok: true })
}

fn cmd_seq_compare(cli: &Cli, id: &str, reference: &PathBuf, kmax: usize, offset: i64) -> Result<Output> {
    let (id, ours) = sequence(id, kmax)?;
    let text = fs::read_to_string(reference).with_context(|| format!("reading {}", reference.display()))?;
    let reference_file = BFile::parse(&text).with_context(|| format!("parsing {}", reference.display()))?;
    let c = compare(&ours, &reference_file, offset);
    let text = match cli.format.unwrap_or(Format::Text) {
        Format::Json => {
            let value = serde_json::json!({
                "id": id.to_string(),
                "matches": c.matches(),
                "exact": c.exact(),
                "compared": c.compared(),
                "comparison": c,
            });
            serde_json::to_string_pretty(&value)? + "\n"
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["index", "ours", "reference", "status"])?;
            for t in &c.terms {
                let status = serde_json::to_value(t.status)?;
                w.write_record([&t.index.to_string(), &t.ours, &t.reference, status.as_str().unwrap_or("")])?;
            }
            String::from_utf8(w.into_inner()?)?
        }
        Format::Text | Format::Bfile => comparison_text(id, &c),
    };
    Ok(Output { text, ok: c.matches() })
}

fn comparison_text(id: SequenceId, c: &Comparison) -> String {
    let mut out = String::new();
    for t in &c.terms {
        let status = serde_json::to_value(t.status).expect("status serializes");
        let _ = writeln!(out, "{:>4} {:>24} {:>24} {}", t.index, t.ours, t.reference, status.as_str().unwrap_or(""));
    }
    let verdict = match (c.matches(), c.first_divergence) {
        (true, _) if c.exact() => "match (exact)".to_string(),
        (true, _) => "match (up to sign)".to_string(),
        (false, Some(i)) => format!("mismatch at index {i}"),
        (false, None) => "no overlapping terms".to_string(),
    };
    let _ = writeln!(out, "{id} vs reference (offset {}): {} terms compared, {verdict}", c.offset, c.compared());
    out
}

fn cmd_cache(cli: &Cli, action: CacheAction) -> Result<Output> {
    let Some(cache) = cache(cli) else {
        bail!("no cache directory: pass --cache-dir or set PADIC_SUMS_CACHE_DIR");
    };
    let text = match action {
        CacheAction::Info => {
            let entries = cache.entries()?;
            let bytes: u64 = entries.iter().filter_map(|p| fs::metadata(p).ok()).map(|m| m.len()).sum();
            format!("{}: {} tables, {bytes} bytes\n", cache.dir().display(), entries.len())
        }
        CacheAction::Clear => format!("removed {} cached tables\n", cache.clear()?),
    };
    Ok(Output { text, ok: true })
}
