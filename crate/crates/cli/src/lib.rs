//! Command-line front end: set generation, spectrum maps, certificate reports.
//!
//! Exit codes: 0 on success, 1 for bad input, 2 when a check that must
//! always hold fails.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use spectra_core::chains::{image_chain_experiment, read_chain, verify_chain_d, verify_tree_b, write_chain};
use spectra_core::chains::{canonical_ip_chain, CertTree, ChainVerdict};
use spectra_core::largeness::{analyze, AnalyzeOptions, Family, FamilyCheck};
use spectra_core::preservation::run_preservation_suite;
use spectra_core::report::{emit_report, CertValue, ReportRow, Side};
use spectra_core::sets::{finite_sums, primes_up_to, random_density_set, read_set, write_set};
use spectra_core::spectra::{spectrum_image, spectrum_preimage};
use spectra_core::{Error, GeneratorSequence, IntegerSet, RealValue, SpectrumParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "spectra", version, about = "Spectra of sets under n -> floor(alpha*n + gamma)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a set or chain file.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Image or preimage of a set.
    Spectrum(SpectrumArgs),
    /// Largeness certificates for a set.
    Analyze(AnalyzeArgs),
    /// Certificates for a set and its image, with transfer checks.
    Preserve(PreserveArgs),
    /// Verify a chain of sets, optionally through a spectrum map.
    Certify(CertifyArgs),
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// Primes up to a limit.
    Primes {
        #[arg(long)]
        limit: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded Bernoulli subset of [1, bound].
    Random {
        #[arg(long)]
        density: String,
        #[arg(long)]
        bound: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Finite sums of a comma-separated generator list.
    Fs {
        #[arg(long, value_delimiter = ',', required = true)]
        terms: Vec<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Chain of finite sums of generator tails.
    Chain {
        #[arg(long, value_delimiter = ',', required = true)]
        terms: Vec<u64>,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: String,
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Compute `{n <= bound : floor(alpha*n + gamma) in set}` instead.
    #[arg(long, requires = "bound")]
    pub preimage: bool,
    #[arg(long)]
    pub bound: Option<u64>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Comma-separated family tags, or `all`.
    #[arg(long, default_value = "if,ap,ps,puad,pubd,hsd")]
    pub families: String,
    /// Window length for Banach density; capped at the universe bound.
    #[arg(long, default_value_t = 10)]
    pub window: u64,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PreserveArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: String,
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value = "if,ap,ps,puad,pubd,hsd")]
    pub families: String,
    #[arg(long, default_value_t = 10)]
    pub window: u64,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long)]
    pub chain: PathBuf,
    /// Level check such as `if:1`, `hsd:3/2` or `ps:4:100`.
    #[arg(long)]
    pub family: String,
    #[arg(long, default_value_t = 64)]
    pub shift_bound: u64,
    /// Map the chain through `floor(alpha*n + gamma)` and check the image too.
    #[arg(long, allow_hyphen_values = true, requires = "gamma")]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true, requires = "alpha")]
    pub gamma: Option<String>,
    /// Also build the induced tree to this depth and check it.
    #[arg(long)]
    pub tree_depth: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub subset_bound: usize,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

/// How a command finished when it did not fail on input.
#[derive(Debug, PartialEq, Eq)]
pub enum Outcome {
    Done,
    /// Checks that must always hold came out false.
    Violated(Vec<String>),
}

fn emit(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> spectra_core::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit_set(set: &IntegerSet, path: Option<&Path>, stdout: &mut dyn Write) -> spectra_core::Result<()> {
    match path {
        Some(p) => write_set(set, p),
        None => emit(None, &set.to_text(), stdout),
    }
}

fn params(alpha: &str, gamma: &str) -> spectra_core::Result<SpectrumParams> {
    let lookup = |s: &str| match spectra_core::constants::named(s) {
        Some(v) => Ok(v),
        None => RealValue::parse(s),
    };
    SpectrumParams::new(lookup(alpha)?, lookup(gamma)?)
}

fn families(text: &str) -> spectra_core::Result<Vec<Family>> {
    Family::parse_list(text)
}

fn analyze_options(window: u64, set: &IntegerSet) -> spectra_core::Result<AnalyzeOptions> {
    if window == 0 {
        return Err(Error::Domain("window must be >= 1".into()));
    }
    Ok(AnalyzeOptions::with_window(window.min(set.universe_bound())))
}

fn gen(cmd: GenCommand, stdout: &mut dyn Write) -> spectra_core::Result<Outcome> {
    match cmd {
        GenCommand::Primes { limit, out } => emit_set(&primes_up_to(limit)?, out.as_deref(), stdout)?,
        GenCommand::Random {
            density,
            bound,
            seed,
            out,
        } => {
            let d = RealValue::parse(&density)?;
            let d = d
                .as_rational()
                .ok_or_else(|| Error::Parse(format!("density {density:?} must be rational")))?;
            emit_set(&random_density_set(d, bound, seed)?, out.as_deref(), stdout)?
        }
        GenCommand::Fs { terms, out } => {
            emit_set(&finite_sums(&GeneratorSequence::new(terms)?)?, out.as_deref(), stdout)?
        }
        GenCommand::Chain { terms, depth, out } => {
            let chain = canonical_ip_chain(&GeneratorSequence::new(terms)?, depth)?;
            match out {
                Some(p) => write_chain(&chain, p)?,
                None => emit(None, &chain.to_text(), stdout)?,
            }
        }
    }
    Ok(Outcome::Done)
}

fn spectrum(args: SpectrumArgs, stdout: &mut dyn Write) -> spectra_core::Result<Outcome> {
    let p = params(&args.alpha, &args.gamma)?;
    let set = read_set(&args.input)?;
    let result = match args.bound {
        Some(bound) if args.preimage => spectrum_preimage(&p, &set, bound)?,
        _ => spectrum_image(&p, &set)?,
    };
    emit_set(&result, args.out.as_deref(), stdout)?;
    Ok(Outcome::Done)
}

fn analyze_cmd(args: AnalyzeArgs, stdout: &mut dyn Write) -> spectra_core::Result<Outcome> {
    let set = read_set(&args.input)?;
    let fams = families(&args.families)?;
    let opts = analyze_options(args.window, &set)?;
    let mut rows = Vec::new();
    for report in analyze(&set, &fams, &opts)? {
        for (field, value) in report.fields() {
            rows.push(ReportRow::new(report.family.tag(), Side::Input, field, value, report.params.clone()));
        }
    }
    emit(args.report.as_deref(), &emit_report(&rows), stdout)?;
    Ok(Outcome::Done)
}

fn preserve(args: PreserveArgs, stdout: &mut dyn Write) -> spectra_core::Result<Outcome> {
    let p = params(&args.alpha, &args.gamma)?;
    let set = read_set(&args.input)?;
    let fams = families(&args.families)?;
    let opts = analyze_options(args.window, &set)?;
    let suite = run_preservation_suite(&p, &set, &fams, &opts)?;
    emit(args.csv.as_deref(), &emit_report(&suite.rows), stdout)?;
    Ok(if suite.all_hold {
        Outcome::Done
    } else {
        Outcome::Violated(suite.failed)
    })
}

fn verdict_rows(rows: &mut Vec<ReportRow>, tag: &str, side: Side, v: &ChainVerdict, params: &str) {
    let mut push = |field: &str, value: CertValue| rows.push(ReportRow::new(tag, side, field, value, params));
    push("holds", CertValue::Bool(v.holds));
    push("witnesses", CertValue::int(v.witnesses.len() as u64));
    push("violation_count", CertValue::int(v.violations.len() as u64));
    let pairs: Vec<String> = v.violations.iter().map(|(n, x)| format!("{n}:{x}")).collect();
    push("violations", CertValue::Text(pairs.join(" ")));
    push(
        "family_failures",
        CertValue::List(v.family_failures.iter().map(|&i| i as u64).collect()),
    );
}

fn certify(args: CertifyArgs, stdout: &mut dyn Write) -> spectra_core::Result<Outcome> {
    let check: FamilyCheck = args.family.parse()?;
    let chain = read_chain(&args.chain)?;
    let tag = check.family().tag();
    let base = format!("check={check} depth={} shift_bound={}", chain.depth(), args.shift_bound);
    let mut rows = Vec::new();
    match (&args.alpha, &args.gamma) {
        (Some(a), Some(g)) => {
            let p = params(a, g)?;
            let report = image_chain_experiment(&p, &chain, &check, args.shift_bound)?;
            verdict_rows(&mut rows, tag, Side::Input, &report.input, &base);
            verdict_rows(&mut rows, tag, Side::Image, &report.image, &format!("{base} {p}"));
        }
        _ => verdict_rows(&mut rows, tag, Side::Input, &verify_chain_d(&chain, &check, args.shift_bound)?, &base),
    }
    if let Some(depth) = args.tree_depth {
        let tree = CertTree::from_chain(&chain, depth, args.shift_bound)?;
        let v = verify_tree_b(&tree, &check, args.subset_bound)?;
        let params = format!("{base} tree_depth={depth} subset_bound={}", args.subset_bound);
        let mut push = |field: &str, value: CertValue| rows.push(ReportRow::new(tag, Side::Check, field, value, &params));
        push("tree_nodes", CertValue::int(tree.internal_nodes().count() as u64));
        push("tree_holds", CertValue::Bool(v.holds));
        let shifts: Vec<String> = v
            .containment_violations
            .iter()
            .map(|(f, x)| format!("{f:?}+{x}").replace(' ', ""))
            .collect();
        push("tree_containment_violations", CertValue::Text(shifts.join(" ")));
        push("tree_range_violations", CertValue::int(v.range_violations.len() as u64));
        push("tree_family_failures", CertValue::int(v.family_failures.len() as u64));
    }
    emit(args.report.as_deref(), &emit_report(&rows), stdout)?;
    Ok(Outcome::Done)
}

/// Runs a parsed command.
pub fn dispatch(cli: Cli, stdout: &mut dyn Write) -> spectra_core::Result<Outcome> {
    match cli.command {
        Command::Gen(cmd) => gen(cmd, stdout),
        Command::Spectrum(args) => spectrum(args, stdout),
        Command::Analyze(args) => analyze_cmd(args, stdout),
        Command::Preserve(args) => preserve(args, stdout),
        Command::Certify(args) => certify(args, stdout),
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                EXIT_INPUT
            } else {
                let _ = write!(stdout, "{}", e.render());
                EXIT_OK
            };
        }
    };
    match dispatch(cli, stdout) {
        Ok(Outcome::Done) => EXIT_OK,
        Ok(Outcome::Violated(failed)) => {
            let _ = writeln!(stderr, "spectra: checks failed: {}", failed.join(", "));
            EXIT_VIOLATION
        }
        Err(e) if e.is_contract_violation() => {
            let _ = writeln!(stderr, "spectra: {e}");
            EXIT_VIOLATION
        }
        Err(e) => {
            let _ = writeln!(stderr, "spectra: {e}");
            EXIT_INPUT
        }
    }
}
