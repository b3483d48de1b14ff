//! `kneser`: count Kneser colorings, build hypergraphs, evaluate closed
//! forms and run the verification suites.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use kneser_core::closedform::{
    alpha, appendix_ratio, coverage_counts, generalized_star_count, t1_upper_bound, AlphaParameters,
};
use kneser_core::count::{kappa_backtrack_with, kappa_chromatic_with, Budget};
use kneser_core::families::{ak_family, complete_from_cover, extremal_hypergraph, star};
use kneser_core::lab::{self, ExperimentReport};
use kneser_core::splits::{cnd, optimal_splits};
use kneser_core::{AKParameters, CoverConfig, Hypergraph};

use output::{Format, Record};

#[derive(Parser)]
#[command(name = "kneser", version, about = "Exact Kneser coloring counts for uniform hypergraphs")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Emit JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV.
    #[arg(long, global = true)]
    csv: bool,
    /// Multiply every search budget by this factor.
    #[arg(long, global = true, env = "KNESER_BUDGET", default_value_t = 1.0)]
    budget: f64,
    /// Include wall-clock time in reports.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Count the Kneser colorings of a hypergraph file.
    Count {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        ell: usize,
        #[arg(long, value_enum, default_value_t = Method::Backtrack)]
        method: Method,
    },
    /// Write a hypergraph in the text format.
    Construct {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        k: Option<usize>,
        /// Parameter of the intersecting family.
        #[arg(long, default_value_t = 0)]
        s: usize,
        /// Cover sets as `1,2;3,4`.
        #[arg(long)]
        cover: Option<String>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Evaluate a closed form.
    Formula {
        #[arg(long, value_enum)]
        what: What,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long)]
        c: Option<usize>,
        #[arg(long)]
        y: Option<usize>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long)]
        c: Option<usize>,
        /// Color counts for the n = 2r case.
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        ks: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Largest H_{n,r,k,ell} (in edges) for the sandwich suite.
        #[arg(long, default_value_t = 40)]
        max_edges: usize,
    },
    /// Rank cover patterns with pairwise unions above r.
    Explore {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        ell: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Backtrack,
    Chromatic,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Star,
    Ak,
    CoverComplete,
    Extremal,
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Alpha,
    Cnd,
    Splits,
    Coverage,
    SOfY,
    T1Bound,
    Ratio,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    K2,
    K4,
    Identities,
    Sandwich,
    /// Random and boundary instances of the product inequality.
    #[value(name = "lemma37")]
    Product,
    Cross,
}

/// Assertion failures exit 1; everything else that goes wrong exits 2.
enum Outcome {
    Done,
    AssertionFailed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::AssertionFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn need(x: Option<usize>, name: &str) -> anyhow::Result<usize> {
    x.ok_or_else(|| anyhow!("--{name} is required here"))
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    let Common { json, csv, budget, timing } = cli.common;
    let format = if json {
        Format::Json
    } else if csv {
        Format::Csv
    } else {
        Format::Text
    };
    if !(budget.is_finite() && budget > 0.0) {
        bail!("budget factor must be positive, got {budget}");
    }
    let budget = Budget::default().scaled(budget);
    let mut out = std::io::stdout().lock();
    match cli.command {
        Command::Count { file, k, ell, method } => {
            let text = std::fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
            let h = Hypergraph::parse(&text).with_context(|| format!("parsing {}", file.display()))?;
            let value = match method {
                Method::Backtrack => kappa_backtrack_with(&h, k, ell, &budget)?,
                Method::Chromatic => kappa_chromatic_with(&h, k, ell, &budget)?,
            };
            let name = match method {
                Method::Backtrack => "backtrack",
                Method::Chromatic => "chromatic",
            };
            let rec = Record::new("count")
                .field("k", k)
                .field("ell", ell)
                .field("method", name)
                .field("edges", h.edge_count())
                .big("count", &value);
            output::record(&mut out, format, &rec, |_| value.to_string())?;
        }
        Command::Construct { family, n, r, ell, k, s, cover, output } => {
            let h = match family {
                Family::Star => star(n, r, ell)?,
                Family::Ak => ak_family(AKParameters { n, r, ell, s })?,
                Family::Extremal => extremal_hypergraph(n, r, need(k, "k")?, ell)?,
                Family::CoverComplete => {
                    let spec = cover.ok_or_else(|| anyhow!("--cover is required for cover-complete"))?;
                    complete_from_cover(n, r, &parse_cover(&spec, ell)?)?
                }
            };
            match output {
                Some(path) => std::fs::write(&path, h.to_text()).with_context(|| format!("writing {}", path.display()))?,
                None => output::write_str(&mut out, &h.to_text())?,
            }
        }
        Command::Formula { what, n, r, k, ell, c, y } => formula(&mut out, format, what, n, r, k, ell, c, y)?,
        Command::Verify { suite, n, r, ell, c, ks, seed, trials, max_edges } => {
            let start = Instant::now();
            let rep = match suite {
                Suite::K2 => lab::verify_k2(need(n, "n")?, need(r, "r")?, need(ell, "ell")?, &ks, &budget)?,
                Suite::K4 => lab::verify_k4(need(n, "n")?, need(r, "r")?, need(ell, "ell")?, &budget)?,
                Suite::Identities => lab::verify_identities(need(n, "n")?, need(r, "r")?, need(ell, "ell")?, need(c, "c")?)?,
                Suite::Sandwich => lab::verify_sandwich(&lab::sandwich_cases(max_edges), &budget)?,
                Suite::Product => lab::verify_product_inequality(seed, trials)?,
                Suite::Cross => lab::cross_validate(seed, trials, &budget)?,
            };
            return report(&mut out, format, rep, timing.then(|| start.elapsed()));
        }
        Command::Explore { n, r, k, ell } => {
            let start = Instant::now();
            let rep = lab::explore_conjecture(n, r, k, ell, &budget)?;
            return report(&mut out, format, rep, timing.then(|| start.elapsed()));
        }
    }
    Ok(Outcome::Done)
}

fn report(
    out: &mut impl std::io::Write,
    format: Format,
    mut rep: ExperimentReport,
    elapsed: Option<std::time::Duration>,
) -> anyhow::Result<Outcome> {
    rep.duration_ms = elapsed.map(|d| d.as_millis() as u64);
    output::report(out, format, &rep)?;
    for v in rep.failures() {
        eprintln!("assertion failed: {} ({})", v.claim, v.detail);
    }
    Ok(if rep.passed() { Outcome::Done } else { Outcome::AssertionFailed })
}

/// `1,2;3,4` into a cover of `ell`-sets.
fn parse_cover(spec: &str, ell: usize) -> anyhow::Result<CoverConfig> {
    let lists = spec
        .split(';')
        .map(|set| {
            set.split(',')
                .map(|v| v.trim().parse::<usize>().with_context(|| format!("bad vertex {v:?} in --cover")))
                .collect::<anyhow::Result<Vec<usize>>>()
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(CoverConfig::from_vertex_lists(ell, &lists)?)
}

#[allow(clippy::too_many_arguments)]
fn formula(
    out: &mut impl std::io::Write,
    format: Format,
    what: What,
    n: Option<usize>,
    r: Option<usize>,
    k: Option<usize>,
    ell: Option<usize>,
    c: Option<usize>,
    y: Option<usize>,
) -> anyhow::Result<()> {
    match what {
        What::Cnd => {
            let k = need(k, "k")?;
            let x = cnd(k)?;
            let rec = Record::new("cnd").field("k", k).field("c", x.c).big("N", &x.n).big("D", &x.d);
            output::record(out, format, &rec, |_| format!("c={} N={} D={}", x.c, x.n, x.d))?;
        }
        What::Splits => {
            let k = need(k, "k")?;
            let splits = optimal_splits(k)?;
            let shapes: Vec<String> =
                splits.iter().map(|s| s.parts().iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")).collect();
            let rec = Record::new("splits").field("k", k).big("value", &splits[0].value()).field("splits", shapes.join("; "));
            output::record(out, format, &rec, |_| shapes.join("\n"))?;
        }
        What::Alpha => {
            let p = AlphaParameters { n: need(n, "n")?, r: need(r, "r")?, k: need(k, "k")?, ell: need(ell, "ell")? };
            let v = alpha(p)?;
            big_value(out, format, "alpha", &v)?;
        }
        What::Coverage => {
            let cc = coverage_counts(need(n, "n")?, need(r, "r")?, need(ell, "ell")?, need(c, "c")?)?;
            let mut rec = Record::new("coverage").field("n", cc.n).field("r", cc.r).field("ell", cc.ell).field("c", cc.c);
            for (name, values) in [("A", &cc.a), ("B", &cc.b), ("C", &cc.cz), ("D", &cc.d), ("E", &cc.e)] {
                for (i, v) in values.iter().enumerate() {
                    rec = rec.big(&format!("{name}({i})"), v);
                }
            }
            output::record(out, format, &rec, |rec| rec.lines())?;
        }
        What::SOfY => {
            let v = generalized_star_count(need(n, "n")?, need(r, "r")?, need(ell, "ell")?, need(y, "y")?)?;
            big_value(out, format, "s-of-y", &v)?;
        }
        What::T1Bound => {
            let v = t1_upper_bound(need(n, "n")?, need(r, "r")?, need(k, "k")?, need(ell, "ell")?)?;
            big_value(out, format, "t1-bound", &v)?;
        }
        What::Ratio => {
            let x = appendix_ratio(need(n, "n")?, need(r, "r")?, need(ell, "ell")?, need(k, "k")?)?;
            let rec = Record::new("ratio")
                .field("numerator", x.numer().to_string())
                .field("denominator", x.denom().to_string())
                .field("log10", format!("{:.6}", kneser_core::closedform::log10_ratio(&x)));
            output::record(out, format, &rec, |_| x.to_string())?;
        }
    }
    Ok(())
}

fn big_value(out: &mut impl std::io::Write, format: Format, name: &str, v: &BigUint) -> anyhow::Result<()> {
    let rec = Record::new(name).big("value", v);
    output::record(out, format, &rec, |_| v.to_string())
}
