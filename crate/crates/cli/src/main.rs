//! `diagharm`: Hilbert series of the diagonal coinvariants, stable dimension
//! polynomials, verification suites and direct counts from the command line.

mod output;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use diagharm::combinat::DescentSet;
use diagharm::oracle::{count_bruteforce, hilbert_parking, interpolate_dimension_poly, Limits, VerificationReport};
use diagharm::schedules::{hilbert_schedules, HilbertCache, MAX_SCHEDULES_N};
use diagharm::stability::{count_poly, dimension_polynomial, CountingState};
use diagharm::verify;
use serde::Deserialize;

use output::{CountDoc, Document, Format, GridDoc, PolynomialDoc, ReportDoc, SeriesDoc};

#[derive(Parser, Debug)]
#[command(name = "diagharm", version, about = "Exact bigraded Hilbert series of the diagonal coinvariants")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for the enumerations (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// TOML file with `schedules_max_n`, `parking_max_n` and `threads`.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The full Hilbert series of DR_n.
    Hilbert {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "schedules")]
        method: SeriesMethod,
    },
    /// The stable polynomial P_{a,b}(n), valid for n >= a + b.
    Dimpoly {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long, value_enum, default_value = "recursion")]
        method: PolyMethod,
        /// Emit every P_{a',b'} with a' <= a, b' <= b instead.
        #[arg(long)]
        grid: bool,
    },
    /// Run a verification suite; exits nonzero if any check fails.
    Verify(VerifyArgs),
    /// Count permutations with descent set S and w-prefix tau (at least
    /// tau on U), as a polynomial in n or at a given n.
    Count {
        #[arg(long = "S")]
        s: String,
        #[arg(long)]
        tau: String,
        #[arg(long = "U", default_value = "none")]
        u: String,
        #[arg(long, value_enum, default_value = "poly")]
        mode: CountMode,
        #[arg(long)]
        n: Option<usize>,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Largest n for the oracle and stability suites.
    #[arg(long, default_value_t = 8)]
    max_n: usize,
    /// Restrict the sharpness suite to one pair (requires --b).
    #[arg(long, requires = "b")]
    a: Option<usize>,
    #[arg(long, requires = "a")]
    b: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SeriesMethod {
    Schedules,
    Parking,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PolyMethod {
    Recursion,
    Interpolate,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CountMode {
    Poly,
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Table1,
    Oracle,
    Stability,
    Sharpness,
    All,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Config {
    schedules_max_n: Option<usize>,
    parking_max_n: Option<usize>,
    threads: Option<usize>,
}

impl Config {
    fn load(path: Option<&PathBuf>) -> Result<Config> {
        let Some(path) = path else {
            return Ok(Config::default());
        };
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    fn limits(&self) -> Result<Limits> {
        let d = Limits::default();
        let limits = Limits {
            schedules_max_n: self.schedules_max_n.unwrap_or(d.schedules_max_n),
            parking_max_n: self.parking_max_n.unwrap_or(d.parking_max_n),
        };
        if limits.schedules_max_n > MAX_SCHEDULES_N {
            bail!("schedules_max_n = {} exceeds the hard limit {MAX_SCHEDULES_N}", limits.schedules_max_n);
        }
        Ok(limits)
    }
}

/// Parses `1,3,5`; `none` is the empty list.
fn parse_list(flag: &str, text: &str) -> Result<Vec<usize>> {
    let text = text.trim();
    if text.eq_ignore_ascii_case("none") || text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|x| x.trim().parse::<usize>().with_context(|| format!("--{flag}: {x:?} is not a nonnegative integer")))
        .collect()
}

fn check_bound(what: &str, requested: usize, bound: usize, hint: &str) -> Result<()> {
    if requested > bound {
        bail!("{what} = {requested} exceeds the configured bound {bound}{hint}");
    }
    Ok(())
}

struct Outcome {
    doc: Document,
    ok: bool,
}

fn run(cli: &Cli, limits: &Limits) -> Result<Outcome> {
    let ok = |doc| Ok(Outcome { doc, ok: true });
    match &cli.command {
        Command::Hilbert { n, method } => {
            let series = match method {
                SeriesMethod::Schedules => {
                    check_bound("schedules n", *n, limits.schedules_max_n, "")?;
                    hilbert_schedules(*n)
                }
                SeriesMethod::Parking => {
                    check_bound("parking n", *n, limits.parking_max_n, "")?;
                    hilbert_parking(*n)
                }
            };
            ok(Document::Series(SeriesDoc::new(*n, &series)))
        }
        Command::Dimpoly { a, b, method, grid } => {
            let cache = HilbertCache::new();
            let compute = |a: usize, b: usize| -> Result<_> {
                match method {
                    PolyMethod::Recursion => Ok(dimension_polynomial(a, b)),
                    PolyMethod::Interpolate => {
                        let top = 2 * (a + b);
                        check_bound("interpolation sample n", top, limits.schedules_max_n, "; use --method recursion")?;
                        Ok(interpolate_dimension_poly(a, b, limits, &cache)?)
                    }
                }
            };
            if *grid {
                let mut entries = Vec::new();
                for bb in 0..=*b {
                    for aa in 0..=*a {
                        entries.push((aa, bb, compute(aa, bb)?));
                    }
                }
                ok(Document::Grid(GridDoc::new(entries)))
            } else {
                let p = compute(*a, *b)?;
                ok(Document::Polynomial(PolynomialDoc::new(&p, (a + b) as i64)))
            }
        }
        Command::Verify(args) => {
            let report = run_verify(args, limits)?;
            Ok(Outcome { ok: report.passed(), doc: Document::Report(ReportDoc::new(&report)) })
        }
        Command::Count { s, tau, u, mode, n } => {
            let s = DescentSet::new(parse_list("S", s)?)?;
            let state = CountingState::new(s, parse_list("tau", tau)?, parse_list("U", u)?)?;
            match mode {
                CountMode::Poly => {
                    let p = count_poly(&state);
                    let start = state.first_nonzero().map_or(-1, |v| v as i64);
                    ok(Document::Polynomial(PolynomialDoc::new(&p, start)))
                }
                CountMode::Exact => {
                    let n = n.ok_or_else(|| anyhow!("--mode exact requires --n"))?;
                    check_bound("schedules n", n, limits.schedules_max_n, "")?;
                    ok(Document::Count(CountDoc::new(n, count_bruteforce(&state, n))))
                }
            }
        }
    }
}

fn run_verify(args: &VerifyArgs, limits: &Limits) -> Result<VerificationReport> {
    let cache = HilbertCache::new();
    let all_pairs: Vec<(usize, usize)> = (1..=3).flat_map(|a| (1..=3).map(move |b| (a, b))).collect();
    let pairs = match (args.a, args.b) {
        (Some(a), Some(b)) => vec![(a, b)],
        _ => all_pairs,
    };
    let mut report = match args.suite {
        Suite::Table1 => verify::table1(),
        Suite::Oracle => verify::oracle(args.max_n, limits)?,
        Suite::Stability => verify::stability(3, args.max_n, limits, &cache)?,
        Suite::Sharpness => verify::sharpness(&pairs, limits)?,
        Suite::All => {
            let mut r = VerificationReport::new("all");
            r.extend(verify::table1());
            r.extend(verify::oracle(args.max_n, limits)?);
            r.extend(verify::stability(3, args.max_n, limits, &cache)?);
            r.extend(verify::sharpness(&pairs, limits)?);
            r
        }
    };
    if args.suite == Suite::All {
        report.subject = "all".into();
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn main_inner(cli: &Cli) -> Result<bool> {
    let config = Config::load(cli.config.as_ref())?;
    let limits = config.limits()?;
    if let Some(threads) = cli.threads.or(config.threads) {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().context("configuring threads")?;
    }
    let outcome = run(cli, &limits)?;
    let text = outcome.doc.render(cli.format)?;
    match &cli.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    if let Document::Report(r) = &outcome.doc {
        eprintln!("{}: {}/{} checks passed", r.subject, r.total - r.failures, r.total);
    }
    Ok(outcome.ok)
}
