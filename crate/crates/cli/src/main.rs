//! `cdf`: validate, normalize, summarize and generate CDF match data.

mod config;
mod input;
mod normalize;
mod summary;
mod validate;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use cdf_core::bundle::{BundleOptions, MatchBundle};
use cdf_core::codec::{MissingPolicy, WriteOptions};
use cdf_core::fixtures::{catalog, generate, FixtureSpec};
use cdf_core::report::Severity;

use crate::config::Config;
use crate::input::{classify, Kind, Target};
use crate::normalize::{Normalizer, Sides};
use crate::validate::{Formations, check_document, check_live, check_target, load_meta, Checked, Settings};

#[global_allocator]
static GLOBAL: mimalloc::MiMalloc = mimalloc::MiMalloc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

impl std::str::FromStr for Format {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            _ => bail!("unknown format `{s}`"),
        }
    }
}

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExitStatus {
    Clean = 0,
    Warnings = 1,
    Errors = 2,
    Failure = 3,
}

impl ExitStatus {
    /// Warnings only fail the run under `--strict-warnings`.
    pub fn from_severity(worst: Option<Severity>, strict_warnings: bool) -> Self {
        match worst {
            Some(Severity::Error) => ExitStatus::Errors,
            Some(Severity::Warning) if strict_warnings => ExitStatus::Warnings,
            _ => ExitStatus::Clean,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "cdf", version, args_override_self = true, about = "Validate, normalize and summarize CDF football match data")]
struct Cli {
    /// `key = value` defaults file (also CDF_CONFIG).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Log progress to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate documents, streams or whole bundles.
    Validate(ValidateArgs),
    /// Rewrite input in canonical form.
    Normalize(NormalizeArgs),
    /// Print headline facts of a bundle.
    Summarize(SummarizeArgs),
    /// Write a synthetic bundle.
    GenFixture(GenArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Which spellings of "missing" to accept when reading (also CDF_MISSING_POLICY).
    #[arg(long, value_name = "null|sentinel|accept_both")]
    policy: Option<MissingPolicy>,
    /// Findings kept per rule before the rest are only counted.
    #[arg(long)]
    cap: Option<usize>,
    /// Streams of a bundle validated in parallel.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    /// Files, bundle directories or manifest.json files.
    paths: Vec<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Read one document or stream from standard input.
    #[arg(long, requires = "kind")]
    stdin: bool,
    /// match_sheet, meta, video_meta, event, tracking_com, tracking_skeletal.
    #[arg(long)]
    kind: Option<Kind>,
    /// Meta document giving context to streams validated on their own.
    #[arg(long)]
    meta: Option<PathBuf>,
    /// Exit 1 when the worst finding is a warning.
    #[arg(long)]
    strict_warnings: bool,
    /// Check starters' position labels against a formation such as 4-4-2,
    /// or one per team as `4-4-2,3-5-2` (home first).
    #[arg(long, value_name = "FORMATION")]
    positions: Option<Formations>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SidesArg {
    Cdf,
    Actual,
}

#[derive(Args, Debug)]
struct NormalizeArgs {
    /// A document, a stream, or a bundle directory.
    input: PathBuf,
    /// Output file, or directory for bundles. Standard output otherwise.
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Input kind when the file name does not tell.
    #[arg(long)]
    kind: Option<Kind>,
    /// Decimal places for measurements.
    #[arg(long)]
    precision: Option<u32>,
    /// How missing values are written.
    #[arg(long, value_name = "null|sentinel", default_value = "null")]
    missing: MissingPolicy,
    /// `actual` flips coordinates into the sides each team really played.
    #[arg(long, value_enum, default_value = "cdf")]
    sides: SidesArg,
    /// Meta document with period sides, for streams given on their own.
    #[arg(long)]
    meta: Option<PathBuf>,
    /// Write output even when validation finds errors.
    #[arg(long)]
    force: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct SummarizeArgs {
    /// Bundle directory or manifest.json.
    bundle: PathBuf,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Length of each regular half.
    #[arg(long, default_value_t = 45.0)]
    minutes: f64,
    #[arg(long, default_value_t = 25)]
    fps: i64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    events: Option<usize>,
    /// Length of each extra-time half.
    #[arg(long)]
    extratime: Option<f64>,
    /// Adds a shootout of this many minutes (needs --extratime).
    #[arg(long)]
    shootout: Option<f64>,
    /// Frames of skeletal data written per period.
    #[arg(long)]
    skeletal: Option<u64>,
    /// Apply a catalogued defect; repeatable.
    #[arg(long = "mutation")]
    mutations: Vec<String>,
    /// Print the mutation catalog and exit.
    #[arg(long)]
    list_mutations: bool,
}

fn bundle_options(common: &Common, config: &Config) -> Result<BundleOptions> {
    let defaults = BundleOptions::default();
    Ok(BundleOptions {
        policy: config.policy(common.policy)?,
        cap: common.cap.or(config.cap).or(defaults.cap),
        jobs: common.jobs.or(config.jobs).unwrap_or(defaults.jobs).max(1),
    })
}

fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn validate(args: ValidateArgs, config: &Config) -> Result<ExitStatus> {
    let opts = bundle_options(&args.common, config)?;
    let format = args.format.or(config.format).unwrap_or_default();
    let strict = args.strict_warnings || config.strict_warnings.unwrap_or(false);
    let meta = args.meta.as_deref().map(|p| load_meta(p, opts.policy)).transpose()?;
    let settings = Settings { opts, formation: args.positions, meta };
    let mut checks = Vec::new();
    if args.stdin {
        let kind = args.kind.expect("clap requires --kind");
        log::info!("reading {} from standard input", kind.name());
        let stdin = std::io::stdin().lock();
        let (report, records) = match kind {
            Kind::Stream(k) => {
                let (r, n) = check_live(stdin, k, &settings)?;
                (r, Some(n))
            }
            Kind::Doc(k) => {
                let mut bytes = Vec::new();
                std::io::Read::read_to_end(&mut { stdin }, &mut bytes).context("reading standard input")?;
                (check_document(&bytes, k, &settings), None)
            }
        };
        checks.push(Checked { label: "<stdin>".into(), kind: kind.name(), records, report });
    } else if args.paths.is_empty() {
        bail!("nothing to validate; give paths or --stdin");
    }
    for path in &args.paths {
        let target = classify(path, args.kind)?;
        log::info!("validating {}", path.display());
        checks.push(check_target(&target, &settings)?);
    }
    emit(&validate::render(&checks, format))?;
    Ok(ExitStatus::from_severity(validate::max_severity(&checks), strict))
}

fn normalize(args: NormalizeArgs, config: &Config) -> Result<ExitStatus> {
    let opts = bundle_options(&args.common, config)?;
    if args.missing == MissingPolicy::AcceptBoth {
        bail!("--missing takes null or sentinel");
    }
    let precision = args.precision.or(config.precision).unwrap_or(cdf_core::CDF_DECIMALS);
    let write = WriteOptions::default().with_policy(args.missing).with_decimals(Some(precision));
    let meta = args.meta.as_deref().map(|p| load_meta(p, opts.policy)).transpose()?;
    let target = classify(&args.input, args.kind)?;
    let side_meta = match &target {
        Target::Bundle(_, m) if meta.is_none() => MatchBundle::load(m, opts.policy)?.meta,
        _ => meta.clone(),
    };
    let sides = match args.sides {
        SidesArg::Cdf => None,
        SidesArg::Actual => {
            let m = side_meta.as_ref().context("--sides actual needs a meta document (--meta)")?;
            Some(Sides::from_meta(m)?)
        }
    };
    let n = Normalizer {
        read: Settings { opts, formation: None, meta },
        write,
        sides,
        force: args.force,
    };
    let result = match &target {
        Target::Bundle(_, manifest) => {
            let out = args.out.as_deref().context("normalizing a bundle needs --out DIR")?;
            n.bundle(manifest, out)?
        }
        Target::File(path, kind) => {
            let mut sink: Box<dyn Write> = match &args.out {
                Some(p) => Box::new(std::io::BufWriter::new(
                    std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?,
                )),
                None => Box::new(std::io::BufWriter::new(std::io::stdout().lock())),
            };
            let r = match kind {
                Kind::Doc(k) => {
                    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
                    n.document(&bytes, *k, &mut sink)?
                }
                Kind::Stream(k) => n.stream(path, *k, &mut sink)?,
            };
            sink.flush()?;
            r
        }
    };
    if !result.written {
        eprint!("{}", result.report.to_text());
        eprintln!("cdf: output withheld because of errors; use --force to write anyway");
        return Ok(ExitStatus::Errors);
    }
    if result.report.has_errors() {
        log::warn!("{} error(s) in input, written because of --force", result.report.error_count());
    }
    Ok(ExitStatus::Clean)
}

fn summarize(args: SummarizeArgs, config: &Config) -> Result<ExitStatus> {
    let opts = bundle_options(&args.common, config)?;
    let format = args.format.or(config.format).unwrap_or_default();
    let target = classify(&args.bundle, None)?;
    let Target::Bundle(_, manifest) = target else {
        bail!("{}: summarize takes a bundle directory or manifest.json", args.bundle.display());
    };
    let bundle = MatchBundle::load(&manifest, opts.policy)?;
    let s = summary::summarize(&bundle, &opts)?;
    emit(&summary::render(&s, format))?;
    Ok(ExitStatus::Clean)
}

fn gen_fixture(args: GenArgs) -> Result<ExitStatus> {
    if args.list_mutations {
        let mut text = String::new();
        for m in catalog() {
            text.push_str(&format!("{:<22} {:<7} {}\n", m.id, m.rule, m.summary));
        }
        emit(&text)?;
        return Ok(ExitStatus::Clean);
    }
    let out = args.out.context("gen-fixture needs --out DIR")?;
    let mut spec = FixtureSpec { fps: args.fps, ..FixtureSpec::new(args.seed) }.with_minutes(args.minutes);
    if let Some(n) = args.events {
        spec.event_count = n;
    }
    if let Some(m) = args.extratime {
        spec = spec.with_extratime(m);
    }
    if let Some(m) = args.shootout {
        spec = spec.with_shootout(m);
    }
    if let Some(n) = args.skeletal {
        spec.skeletal_frames = n;
    }
    spec.mutations = args.mutations;
    let fixture = generate(&spec)?;
    std::fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
    fixture.write_dir(&out)?;
    log::info!("wrote {} tracking frames to {}", fixture.tracking_frames().count(), out.display());
    Ok(ExitStatus::Clean)
}

fn run(cli: Cli) -> Result<ExitStatus> {
    let config = Config::load(cli.config.as_deref())?;
    match cli.command {
        Command::Validate(a) => validate(a, &config),
        Command::Normalize(a) => normalize(a, &config),
        Command::Summarize(a) => summarize(a, &config),
        Command::GenFixture(a) => gen_fixture(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { ExitStatus::Failure as u8 } else { 0 });
        }
    };
    let level = if cli.verbose { "info" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .target(env_logger::Target::Stderr)
        .format_timestamp(None)
        .init();
    match run(cli) {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("cdf: {e:#}");
            ExitCode::from(ExitStatus::Failure as u8)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(ExitStatus::from_severity(None, true), ExitStatus::Clean);
        assert_eq!(ExitStatus::from_severity(Some(Severity::Info), true), ExitStatus::Clean);
        assert_eq!(ExitStatus::from_severity(Some(Severity::Warning), false), ExitStatus::Clean);
        assert_eq!(ExitStatus::from_severity(Some(Severity::Warning), true), ExitStatus::Warnings);
        assert_eq!(ExitStatus::from_severity(Some(Severity::Error), false), ExitStatus::Errors);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
