use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use kfib_narayana::algebraic::{
    dominant_root_alpha, height_methods, lambda_algebraic, log_height_of, narayana_constants,
    IntPoly,
};
use kfib_narayana::bounds::{large_k_absolute_bounds, pow2_absolute_bounds, small_k_absolute_bounds};
use kfib_narayana::pipeline::{
    emit_certificate, run_large_k_stage, run_pipeline, run_small_k_stage, verify_certificate_file,
    PipelineConfig,
};
use kfib_narayana::real::AdaptiveReal;
use kfib_narayana::reduction::{
    baker_davenport_with, source_from_spec, PrecisionPolicy, ReductionProblem,
    DEFAULT_TERM_BUDGET,
};
use kfib_narayana::search::{intersect_with, narayana_powers_of_two, search_strategies};
use kfib_narayana::sequences::{seq_iter, SequenceKind};

/// Certified computations for k-Fibonacci numbers that are Narayana numbers.
#[derive(Parser)]
#[command(name = "kfnar", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print sequence terms, one per line.
    #[command(subcommand)]
    Seq(SeqCmd),
    /// Enclose a dominant root.
    #[command(subcommand)]
    Root(RootCmd),
    /// Logarithmic height of the roots of a minimal polynomial.
    Height {
        /// Coefficients, leading first, e.g. "1,-1,0,-1".
        #[arg(long, allow_hyphen_values = true)]
        minpoly: String,
        #[arg(long, default_value_t = 128)]
        prec: u32,
        /// One of the registered height methods; picked by degree when omitted.
        #[arg(long)]
        method: Option<String>,
    },
    /// Absolute bound chains as JSON.
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// Run one Baker-Davenport reduction.
    Reduce(ReduceArgs),
    /// Exhaustive exact searches.
    #[command(subcommand)]
    Search(SearchCmd),
    /// The full certified case analysis.
    #[command(subcommand)]
    Pipeline(PipelineCmd),
}

#[derive(Subcommand)]
enum SeqCmd {
    /// F_j^(k) for j = from..=n.
    Kfib {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: i64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        from: i64,
    },
    /// N_j for j = from..=m.
    Narayana {
        #[arg(long)]
        m: i64,
        #[arg(long, default_value_t = 0)]
        from: i64,
    },
}

#[derive(Subcommand)]
enum RootCmd {
    /// alpha(k), the dominant root of x^k - x^(k-1) - ... - 1.
    Alpha {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 128)]
        prec: u32,
    },
    /// lambda, the real root of x^3 - x^2 - 1.
    Lambda {
        #[arg(long, default_value_t = 128)]
        prec: u32,
    },
}

#[derive(Subcommand)]
enum BoundsCmd {
    SmallK {
        #[arg(long)]
        k: u32,
    },
    LargeK,
    Pow2,
}

#[derive(Clone, Copy, ValueEnum)]
enum MuKind {
    SmallK,
    LargeK,
    Pow2,
}

#[derive(Args)]
struct ReduceArgs {
    /// `lambda-log2` or `alpha-lambda:K`.
    #[arg(long)]
    tau: String,
    #[arg(long, value_enum)]
    mu_kind: MuKind,
    /// Order k for the small-k shift; defaults to the K of `--tau`.
    #[arg(long)]
    k: Option<u32>,
    #[arg(long = "M")]
    m: String,
    #[arg(long = "A")]
    a: String,
    /// A decimal, or `lambda`.
    #[arg(long = "B")]
    b: String,
    #[arg(long, default_value_t = 256)]
    prec_start: u32,
    #[arg(long, default_value_t = 16384)]
    prec_max: u32,
    #[arg(long, default_value_t = DEFAULT_TERM_BUDGET)]
    terms: usize,
}

#[derive(Subcommand)]
enum SearchCmd {
    /// All (k, n, m) with F_n^(k) = N_m in the box.
    Intersect {
        #[arg(long)]
        k_lo: u32,
        #[arg(long)]
        k_hi: u32,
        #[arg(long)]
        n_max: u64,
        #[arg(long)]
        m_max: u64,
        #[arg(long, default_value = "merge")]
        strategy: String,
        /// Include the trivial solutions.
        #[arg(long)]
        all: bool,
    },
    /// All (m, l) with N_m = 2^l.
    Pow2 {
        #[arg(long)]
        m_max: u64,
        /// Also report the three N_m = 1 entries.
        #[arg(long)]
        include_ones: bool,
    },
}

#[derive(Subcommand)]
enum PipelineCmd {
    /// Run every stage and write the certificate.
    Run {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recheck a certificate.
    Verify { cert: PathBuf },
    SmallK {
        #[arg(long)]
        config: Option<PathBuf>,
    },
    LargeK {
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn load_config(path: Option<&PathBuf>) -> Result<PipelineConfig> {
    Ok(match path {
        Some(p) => PipelineConfig::from_file(p).with_context(|| format!("reading {}", p.display()))?,
        None => PipelineConfig::default(),
    })
}

fn print_json<T: serde::Serialize>(v: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(v)?;
    emit(format_args!("{text}"))
}

fn emit(args: std::fmt::Arguments) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{args}") {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => std::process::exit(0),
        other => Ok(other?),
    }
}

fn print_seq(kind: SequenceKind, from: i64, to: i64) -> Result<()> {
    if to < from {
        bail!("empty range {from}..={to}");
    }
    for (_, v) in seq_iter(kind, from)?.take((to - from + 1) as usize) {
        emit(format_args!("{v}"))?;
    }
    Ok(())
}

fn parse_real(s: &str, prec: u32) -> Result<AdaptiveReal> {
    if s == "lambda" {
        return Ok(narayana_constants(prec.max(64))?.lambda);
    }
    Ok(AdaptiveReal::parse_decimal(s, prec)?)
}

fn reduce(args: &ReduceArgs) -> Result<()> {
    let tau = source_from_spec(&args.tau)?;
    let tau_k = args.tau.split_once(':').and_then(|(_, k)| k.parse::<u32>().ok());
    let mu_spec = match args.mu_kind {
        MuKind::SmallK => {
            let k = args
                .k
                .or(tau_k)
                .context("--mu-kind small-k needs --k or --tau alpha-lambda:K")?;
            format!("small-k:{k}")
        }
        MuKind::LargeK => "large-k".into(),
        MuKind::Pow2 => "pow2".into(),
    };
    let prob = ReductionProblem {
        tau,
        mu: source_from_spec(&mu_spec)?,
        a: parse_real(&args.a, 256)?,
        b: parse_real(&args.b, 256)?,
        m: args.m.parse::<BigInt>().context("--M must be a decimal integer")?,
    };
    let policy = PrecisionPolicy {
        start: args.prec_start,
        max: args.prec_max,
    };
    let out = baker_davenport_with(&prob, policy, args.terms)?;
    print_json(&out.to_record(&prob))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Seq(SeqCmd::Kfib { k, n, from }) => print_seq(SequenceKind::k_fib(k)?, from, n)?,
        Cmd::Seq(SeqCmd::Narayana { m, from }) => print_seq(SequenceKind::Narayana, from, m)?,
        Cmd::Root(RootCmd::Alpha { k, prec }) => emit(format_args!("{}", dominant_root_alpha(k, prec)?))?,
        Cmd::Root(RootCmd::Lambda { prec }) => emit(format_args!("{}", lambda_algebraic().eval(prec)?))?,
        Cmd::Height { minpoly, prec, method } => {
            let p = IntPoly::parse(&minpoly)?;
            let h = match method {
                Some(m) => height_methods().get(&m)?.log_height(&p, prec)?,
                None => log_height_of(&p, prec)?,
            };
            emit(format_args!("{h}"))?;
        }
        Cmd::Bounds(BoundsCmd::SmallK { k }) => print_json(&small_k_absolute_bounds(k)?)?,
        Cmd::Bounds(BoundsCmd::LargeK) => print_json(&large_k_absolute_bounds()?)?,
        Cmd::Bounds(BoundsCmd::Pow2) => print_json(&pow2_absolute_bounds()?)?,
        Cmd::Reduce(args) => reduce(&args)?,
        Cmd::Search(SearchCmd::Intersect { k_lo, k_hi, n_max, m_max, strategy, all }) => {
            let s = search_strategies().get(&strategy)?;
            let mut sols = intersect_with(s.as_ref(), k_lo, k_hi, n_max, m_max)?;
            if !all {
                sols.retain(|s| !s.trivial);
            }
            print_json(&sols)?;
        }
        Cmd::Search(SearchCmd::Pow2 { m_max, include_ones }) => {
            print_json(&narayana_powers_of_two(m_max, include_ones))?
        }
        Cmd::Pipeline(PipelineCmd::Run { config, out }) => {
            let mut cfg = load_config(config.as_ref())?;
            if out.is_some() {
                cfg.out = out;
            }
            let cert = run_pipeline(&cfg)?;
            if let Some(path) = &cfg.out {
                emit_certificate(&cert, path)?;
                log::info!("certificate written to {}", path.display());
            }
            print_json(&cert.verdict)?;
            if !cert.search.extra.is_empty() || !cert.search.missing.is_empty() {
                eprintln!(
                    "solution set differs from the published statement: extra {:?}, missing {:?}",
                    cert.search.extra, cert.search.missing
                );
            }
            return Ok(exit_for(cert.verdict.pass));
        }
        Cmd::Pipeline(PipelineCmd::Verify { cert }) => {
            let v = verify_certificate_file(&cert)?;
            print_json(&v)?;
            return Ok(exit_for(v.pass));
        }
        Cmd::Pipeline(PipelineCmd::SmallK { config }) => {
            let stage = run_small_k_stage(&load_config(config.as_ref())?)?;
            print_json(&stage)?;
            return Ok(exit_for(stage.pass));
        }
        Cmd::Pipeline(PipelineCmd::LargeK { config }) => {
            let stage = run_large_k_stage(&load_config(config.as_ref())?)?;
            print_json(&stage)?;
            return Ok(exit_for(stage.pass));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn exit_for(pass: bool) -> ExitCode {
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
