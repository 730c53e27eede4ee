mod config;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use shadiv_core::dataset::{embedded_curve, embedded_curves};
use shadiv_core::divisibility::{twist_scan, verdict_over_q};
use shadiv_core::elliptic::{parse_curve_file, parse_curve_line, CurveRecord};
use shadiv_core::fp::Prime;
use shadiv_core::gl2::EnumerationMode;
use shadiv_core::groupcrit::verify_group_criterion;
use shadiv_core::local_cubic::selmer_example_report;
use shadiv_core::tables::{bounds_table, nv3_table, p11_table};

use config::{CharacterChoice, OutputFormat, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "shadiv", version, about = "Divisibility criteria for Tate-Shafarevich groups of elliptic curves over Q")]
struct Cli {
    /// Worker threads (overrides SHA_DIV_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Divisibility verdicts for curves at the given primes.
    Analyze(AnalyzeArgs),
    /// Compare both sides of the group criterion over subgroups of GL2(F_p).
    GroupcritVerify(GroupcritArgs),
    /// Recompute a reference table and check it.
    Tables(TablesArgs),
    /// Local analysis of the cubic 3X^3 + 4Y^3 + 5Z^3.
    SelmerExample(FormatArg),
    /// Verdicts for the quadratic twists of a curve.
    TwistScan(TwistArgs),
    /// List the embedded curves.
    Curves,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct CurveSource {
    /// a-invariants `a1,a2,a3,a4,a6`, optionally prefixed by `label:`.
    #[arg(long, allow_hyphen_values = true)]
    curve: Option<String>,
    /// Label of an embedded curve.
    #[arg(long)]
    embedded: Option<String>,
    /// File with one curve per line.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerdictArgs {
    /// Largest prime used for Frobenius traces.
    #[arg(long, default_value_t = shadiv_core::divisibility::DEFAULT_TRACE_BOUND)]
    trace_bound: u64,
    #[arg(long, value_enum, default_value_t = CharacterChoice::Cyclotomic)]
    characters: CharacterChoice,
    /// Largest modulus for Dirichlet character scans.
    #[arg(long, default_value_t = 100_000)]
    modulus_cap: u64,
    /// Treat the supplied models as minimal.
    #[arg(long)]
    assume_minimal: bool,
    /// User-supplied analytic rank.
    #[arg(long)]
    analytic_rank: Option<u32>,
    /// User-supplied: the curve is semistable.
    #[arg(long)]
    semistable: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[command(flatten)]
    source: CurveSource,
    /// Comma-separated odd primes.
    #[arg(long, value_delimiter = ',', default_values_t = [3u64, 5, 7, 11, 13])]
    primes: Vec<u64>,
    #[command(flatten)]
    verdict: VerdictArgs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeChoice {
    Exhaustive,
    Sampled,
}

#[derive(Args, Debug)]
struct GroupcritArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, value_enum, default_value_t = ModeChoice::Exhaustive)]
    mode: ModeChoice,
    /// Number of subgroups to sample.
    #[arg(long, default_value_t = 5000)]
    count: usize,
    /// Seed, required in sampled mode.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableChoice {
    P11,
    Nv3,
    Bounds,
}

#[derive(Args, Debug)]
struct TablesArgs {
    #[arg(long, value_enum)]
    which: TableChoice,
    #[arg(long, default_value_t = shadiv_core::divisibility::DEFAULT_TRACE_BOUND)]
    trace_bound: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
}

#[derive(Args, Debug)]
struct FormatArg {
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

#[derive(Args, Debug)]
struct TwistArgs {
    #[command(flatten)]
    source: CurveSource,
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 500)]
    dmax: u64,
    #[command(flatten)]
    verdict: VerdictArgs,
}

fn load_curves(src: &CurveSource) -> Result<Vec<CurveRecord>> {
    if let Some(text) = &src.curve {
        return Ok(vec![parse_curve_line(text, 1).context("parsing --curve")?]);
    }
    if let Some(label) = &src.embedded {
        let rec = embedded_curves().into_iter().find(|r| r.label.as_deref() == Some(label.as_str()));
        return rec.map(|r| vec![r]).with_context(|| format!("no embedded curve labelled {label:?}"));
    }
    let path = src.file.as_ref().expect("clap enforces one source");
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_curve_file(&text).with_context(|| format!("parsing {}", path.display()))
}

fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Analyze(args) => {
            let cfg = RunConfig::from_verdict_args(&args.verdict);
            let records = load_curves(&args.source)?;
            let jobs: Vec<(&CurveRecord, u64)> =
                records.iter().flat_map(|r| args.primes.iter().map(move |&p| (r, p))).collect();
            let verdicts = jobs
                .par_iter()
                .map(|(r, p)| {
                    let e = r.curve().with_context(|| format!("curve {}", r.name()))?;
                    verdict_over_q(&e, r.label.as_deref(), *p, &cfg.verdict).map_err(anyhow::Error::from)
                })
                .collect::<Result<Vec<_>>>()?;
            render::verdicts(&verdicts, cfg.format)
        }
        Command::GroupcritVerify(args) => {
            let p = Prime::new(args.p).with_context(|| format!("{} is not prime", args.p))?;
            let mode = match args.mode {
                ModeChoice::Exhaustive => EnumerationMode::Exhaustive,
                ModeChoice::Sampled => {
                    let Some(seed) = args.seed else { bail!("--seed is required in sampled mode") };
                    EnumerationMode::Sampled { count: args.count, seed }
                }
            };
            let summary = verify_group_criterion(p, mode)?;
            render::serializable(&summary, args.format, |s| {
                format!(
                    "p = {}, {}: {} subgroups ({} distinct), {} mismatches, {} both true, {} both false\n",
                    s.p, s.mode, s.checked, s.distinct, s.mismatches, s.both_true, s.both_false
                )
            })
        }
        Command::Tables(args) => {
            let table = match args.which {
                TableChoice::P11 => p11_table(args.trace_bound),
                TableChoice::Nv3 => nv3_table(),
                TableChoice::Bounds => bounds_table(),
            };
            render::serializable(&table, args.format, |t| t.render())
        }
        Command::SelmerExample(args) => {
            let report = selmer_example_report()?;
            render::serializable(&report, args.format, |r| r.render_text())
        }
        Command::TwistScan(args) => {
            let cfg = RunConfig::from_verdict_args(&args.verdict);
            let records = load_curves(&args.source)?;
            let [record] = records.as_slice() else { bail!("twist-scan takes exactly one curve") };
            let e = record.curve()?;
            let report = twist_scan(&e, record.label.as_deref(), args.p, args.dmax, &cfg.verdict)?;
            match cfg.format {
                OutputFormat::Json => render::json(&report),
                _ => {
                    let verdicts: Vec<_> = report.rows.iter().map(|r| r.verdict.clone()).collect();
                    let mut out = render::verdicts(&verdicts, cfg.format)?;
                    let cap = report.cap.map_or("none".to_string(), |c| c.to_string());
                    out.push_str(&format!("# criterion failures: {} (cap {cap})\n", report.failures));
                    Ok(out)
                }
            }
        }
        Command::Curves => Ok(embedded_curves()
            .iter()
            .map(|r| {
                let e = embedded_curve(r.label.as_deref().unwrap_or_default()).expect("embedded");
                format!("{}: {}  j = {}\n", r.name(), r.ainvs.join(","), e.j)
            })
            .collect()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(err) = config::init_threads(cli.threads) {
        eprintln!("error: {err:#}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
