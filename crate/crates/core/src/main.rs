use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use dioph::algapprox::psi_star_table;
use dioph::bounds::{closed_form, consistency_check, constants_csv, constants_row, ExponentProfile, Verdict, CLOSED_FORM_NAMES, CONSTANTS_HEADER};
use dioph::lab::{self, Bracket, ExperimentConfig, ResultBundle, TableKind};
use dioph::polysearch::{self, Grid, Policy, Strategy};
use dioph::realnum::parse_target;
use dioph::resultants::{lemma_check, lemma_fuzz, XiRange};
use dioph::{Error, IntPolynomial, Result};

#[derive(Parser)]
#[command(name = "dioph", version, about = "Diophantine approximation exponents: search, estimates and bound checking")]
struct Cli {
    /// Seed for randomized commands (resultant fuzzing)
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Largest working precision in bits
    #[arg(long, global = true)]
    precision_cap: Option<u32>,
    /// Largest number of polynomials an exhaustive search may enumerate
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Output directory (estimate) or file (verify)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Exhaustive,
    Hybrid,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Exhaustive => Strategy::Exhaustive,
            StrategyArg::Hybrid => Strategy::Hybrid,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write its bundle, profile and bound report
    Estimate {
        /// Experiment file (TOML); flags below override its fields
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        target: Option<String>,
        /// Comma-separated degrees
        #[arg(long, value_delimiter = ',')]
        degrees: Option<Vec<usize>>,
        #[arg(long)]
        h_max: Option<u64>,
        #[arg(long, value_enum)]
        strategy: Option<StrategyArg>,
        #[arg(long)]
        grid_points: Option<usize>,
        /// Also search algebraic approximations (degree <= 4)
        #[arg(long)]
        star: bool,
        #[arg(long)]
        star_h_max: Option<u64>,
    },
    /// psi_n(H) with witnesses, as CSV
    Psi {
        #[arg(long)]
        target: String,
        #[arg(long)]
        n: usize,
        /// Comma-separated height bounds
        #[arg(long, value_delimiter = ',', required = true)]
        h: Vec<u64>,
        #[arg(long, value_enum, default_value = "exhaustive")]
        strategy: StrategyArg,
    },
    /// psi*_n(H) with algebraic witnesses, as CSV
    Star {
        #[arg(long)]
        target: String,
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        h: Vec<u64>,
    },
    /// Best-approximation records, as CSV
    Records {
        #[arg(long)]
        target: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        h_max: u64,
        #[arg(long, value_enum, default_value = "exhaustive")]
        strategy: StrategyArg,
    },
    /// Constants of the rule catalog per degree, or one named closed form
    Bounds {
        /// Degree range `a..b` (inclusive) or a single degree
        #[arg(long, default_value = "2..10")]
        n: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long, default_value_t = 10)]
        digits: u32,
        /// A single closed form, e.g. R4-tomcat1
        #[arg(long)]
        name: Option<String>,
    },
    /// Check a profile (JSON) against the rule catalog; exit status 2 on a violation
    Verify {
        #[arg(long)]
        profile: PathBuf,
    },
    /// Certify the resultant inequality for a pair, or fuzz it
    ResultantCheck {
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        q: Option<String>,
        #[arg(long)]
        target: Option<String>,
        #[arg(long, default_value_t = 256)]
        precision: u32,
        /// Number of random trials instead of a single pair
        #[arg(long)]
        fuzz: Option<usize>,
        #[arg(long, default_value_t = 3)]
        degree: usize,
        #[arg(long, default_value_t = 10)]
        height: u64,
        /// Sampling range for xi, as rationals
        #[arg(long, default_value = "-2", allow_hyphen_values = true)]
        lo: String,
        #[arg(long, default_value = "2", allow_hyphen_values = true)]
        hi: String,
    },
    /// Differences between two bundles; exit status 1 if witnesses differ under equal settings
    Compare { a: PathBuf, b: PathBuf },
    /// One table of a bundle as CSV: psi:N, records:N, star:N, star-records:N or bounds
    Export {
        bundle: PathBuf,
        #[arg(long)]
        table: String,
    },
}

fn policy(cli: &Cli) -> Policy {
    let mut p = Policy::default();
    if let Some(c) = cli.precision_cap {
        p.precision_cap = c;
        p.precision_start = p.precision_start.min(c);
    }
    if let Some(b) = cli.budget {
        p.budget = u128::from(b);
    }
    p
}

fn parse_range(s: &str) -> Result<Vec<u32>> {
    let num = |t: &str| t.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad degree range {s:?}")));
    match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            Ok((num(a)?..=num(b)?).collect())
        }
        None => Ok(vec![num(s)?]),
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    s.trim().parse::<BigRational>().map_err(|_| Error::Parse(format!("bad rational {s:?}")))
}

fn print_csv(header: &[&str], rows: Vec<Vec<String>>) {
    let mut w = csv::Writer::from_writer(std::io::stdout());
    w.write_record(header).expect("stdout");
    for r in rows {
        w.write_record(&r).expect("stdout");
    }
    w.flush().expect("stdout");
}

fn estimate_config(cli: &Cli, cmd: &Command) -> Result<ExperimentConfig> {
    let Command::Estimate { config, target, degrees, h_max, strategy, grid_points, star, star_h_max } = cmd else {
        unreachable!()
    };
    let mut c = match config {
        Some(path) => ExperimentConfig::load(path)?,
        None => {
            let target = target.clone().ok_or_else(|| Error::Parse("--target or --config is required".into()))?;
            ExperimentConfig::new(target, vec![1], 100)
        }
    };
    if let Some(t) = target {
        c.target = t.clone();
    }
    if let Some(d) = degrees {
        c.degrees = d.clone();
    }
    if let Some(h) = h_max {
        c.h_max = *h;
    }
    if let Some(s) = strategy {
        c.strategy = (*s).into();
    }
    if grid_points.is_some() {
        c.grid_points = *grid_points;
    }
    if *star {
        c.star = true;
    }
    if star_h_max.is_some() {
        c.star_h_max = *star_h_max;
    }
    if let Some(b) = cli.budget {
        c.enumeration_budget = b;
    }
    if let Some(p) = cli.precision_cap {
        c.precision_cap = p;
        c.precision_start = c.precision_start.min(p);
    }
    if cli.workers.is_some() {
        c.workers = cli.workers;
    }
    c.seed = cli.seed;
    c.validate()?;
    Ok(c)
}

fn print_bundle_summary(b: &ResultBundle, dir: &Path) {
    println!("target {}", b.target);
    for d in &b.degrees {
        let show = |e: &Option<lab::EstimateView>| e.as_ref().map_or("-".to_string(), |e| format!("{:.4} ({})", e.point, e.strategy));
        println!(
            "n={}  exhaustive to H={}  w ~ {}  w_hat ~ {}",
            d.n,
            d.exhaustive_threshold,
            show(&d.ordinary),
            show(&d.uniform)
        );
        if let Some(s) = &d.star {
            println!("      w* ~ {}  w_hat* ~ {}", show(&s.ordinary), show(&s.uniform));
        }
    }
    let v = b.report.violations().count();
    println!("bound report: {} ({v} violated)", if v == 0 { "consistent" } else { "violated" });
    for w in &b.warnings {
        eprintln!("warning: {w}");
    }
    println!("written to {}", dir.display());
}

fn execute(cli: &Cli) -> Result<ExitCode> {
    let pol = policy(cli);
    match &cli.command {
        cmd @ Command::Estimate { .. } => {
            let config = estimate_config(cli, cmd)?;
            let dir = cli.out.clone().or_else(|| config.out_dir.clone()).unwrap_or_else(|| PathBuf::from("results"));
            match lab::run(&config) {
                Ok(b) => {
                    lab::persist(&b, &dir)?;
                    print_bundle_summary(&b, &dir);
                    Ok(ExitCode::SUCCESS)
                }
                Err(Error::BudgetExceeded(b)) => {
                    lab::persist(&b, &dir)?;
                    print_bundle_summary(&b, &dir);
                    eprintln!("error: enumeration budget exceeded; partial bundle written");
                    Ok(ExitCode::from(3))
                }
                Err(e) => Err(e),
            }
        }
        Command::Psi { target, n, h, strategy } => {
            let t = parse_target(target)?;
            let table = polysearch::psi_table(&t, *n, &Grid::Explicit(h.clone()), (*strategy).into(), &pol)?;
            let rows = table
                .rows
                .iter()
                .map(|r| {
                    let b = Bracket::from(&r.psi);
                    vec![r.h.to_string(), b.lo, b.hi, r.witness.to_string(), r.source.to_string()]
                })
                .collect();
            print_csv(&["H", "psi_lo", "psi_hi", "witness", "strategy"], rows);
            Ok(ExitCode::SUCCESS)
        }
        Command::Star { target, n, h } => {
            let t = parse_target(target)?;
            let table = psi_star_table(&t, *n, h, &pol)?;
            let rows = table
                .rows
                .iter()
                .map(|r| {
                    let b = Bracket::from(&r.psi_star);
                    vec![r.h.to_string(), b.lo, b.hi, r.witness.to_string()]
                })
                .collect();
            print_csv(&["H", "psi_star_lo", "psi_star_hi", "witness"], rows);
            Ok(ExitCode::SUCCESS)
        }
        Command::Records { target, n, h_max, strategy } => {
            let t = parse_target(target)?;
            let rs = polysearch::records(&t, *n, *h_max, (*strategy).into(), &pol)?;
            let rows = rs
                .entries
                .iter()
                .map(|r| {
                    let b = Bracket::from(&r.value);
                    vec![r.height.to_string(), b.lo, b.hi, r.poly.to_string(), r.source.to_string()]
                })
                .collect();
            print_csv(&["H", "value_lo", "value_hi", "poly", "strategy"], rows);
            Ok(ExitCode::SUCCESS)
        }
        Command::Bounds { n, format, digits, name } => {
            let ns = parse_range(n)?;
            if let Some(name) = name {
                if ns.len() > 1 && !matches!(name.as_str(), "R3" | "R4-tomcat2" | "R16-star3" | "R16-w2" | "R16-what2") {
                    for k in ns {
                        println!("{name}({k}) = {}", closed_form(name, Some(k))?.to_decimal(*digits));
                    }
                } else {
                    println!("{name} = {}", closed_form(name, ns.first().copied())?.to_decimal(*digits));
                }
                return Ok(ExitCode::SUCCESS);
            }
            match format {
                Format::Csv => print!("{}", constants_csv(ns, *digits)),
                Format::Json => {
                    let rows: Vec<_> = ns.iter().map(|&k| constants_row(k, *digits)).collect();
                    println!("{}", serde_json::to_string_pretty(&rows)?);
                }
                Format::Table => {
                    println!("{}", CONSTANTS_HEADER.iter().map(|h| format!("{h:>16}")).collect::<String>());
                    for k in ns {
                        println!("{}", constants_row(k, *digits).cells().iter().map(|c| format!("{c:>16}")).collect::<String>());
                    }
                    println!("closed forms: {}", CLOSED_FORM_NAMES.join(", "));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { profile } => {
            let p = ExponentProfile::from_json(&std::fs::read_to_string(profile)?)?;
            let report = consistency_check(&p);
            let json = report.to_json();
            match &cli.out {
                Some(path) => std::fs::write(path, &json)?,
                None => println!("{json}"),
            }
            eprint!("{}", report.summary());
            Ok(if report.verdict == Verdict::Violated { ExitCode::from(2) } else { ExitCode::SUCCESS })
        }
        Command::ResultantCheck { p, q, target, precision, fuzz, degree, height, lo, hi } => {
            if let Some(trials) = fuzz {
                let range = XiRange::new(parse_rational(lo)?, parse_rational(hi)?);
                let r = lemma_fuzz(*trials, *degree, *height, &range, cli.seed);
                println!("trials {}  valid {}  certified {}  worst slack log2 {:.4}", r.trials, r.valid, r.certified, r.worst_slack_log2);
                return Ok(if r.valid == r.trials { ExitCode::SUCCESS } else { ExitCode::from(1) });
            }
            let need = |v: &Option<String>, what: &str| v.clone().ok_or_else(|| Error::Parse(format!("--{what} is required without --fuzz")));
            let p: IntPolynomial = need(p, "p")?.parse()?;
            let q: IntPolynomial = need(q, "q")?.parse()?;
            let t = parse_target(&need(target, "target")?)?;
            let c = lemma_check(&p, &q, &t, *precision)?;
            println!("Res(P, Q) = {}", c.resultant);
            println!("degrees s = {}, t = {}", c.s, c.t);
            println!("|P(xi)| in {}", c.value_p);
            println!("|Q(xi)| in {}", c.value_q);
            println!("K = {}", c.constant);
            println!("P-branch bound in {}", c.bound_p);
            println!("Q-branch bound in {}", c.bound_q);
            println!("verdict {:?}  certified {}  slack log2 {:.4}", c.verdict, c.certified, c.slack_log2());
            Ok(if c.is_valid() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Compare { a, b } => {
            let (x, y) = (ResultBundle::load(a)?, ResultBundle::load(b)?);
            let d = lab::compare(&x, &y)?;
            if d.is_empty() {
                println!("no differences");
            }
            for e in &d.entries {
                let at = e.h.map_or(String::new(), |h| format!(" H={h}"));
                let delta = e.delta.map_or(String::new(), |v| format!("  delta {v:e}"));
                println!("n={} {}{at}: {} -> {}{delta}", e.n, e.what, e.left, e.right);
            }
            Ok(if d.is_failure() { ExitCode::from(1) } else { ExitCode::SUCCESS })
        }
        Command::Export { bundle, table } => {
            let b = ResultBundle::load(bundle)?;
            let kind: TableKind = table.parse()?;
            print!("{}", lab::table_export(&b, kind)?);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if rayon::ThreadPoolBuilder::new().num_threads(w).build_global().is_err() {
            eprintln!("warning: could not size the worker pool");
        }
    }
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
