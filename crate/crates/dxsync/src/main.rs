use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dxsync::bench::{redundancy_bench, BenchConfig, Scheme};
use dxsync::census::{ball_census, density_census, BallCensusConfig, DensityCensusConfig, DensityRule};
use dxsync::labelings::{LabelingChoice, DEFAULT_RESEED_CAP};
use dxsync::output::{write_json, write_rows, Format};
use dxsync::sync::{parse_edit, run_sync, Corruption, SyncConfig, Trace, XSource};
use dxsync::verify::{self, off_by_one_search, Suite, VerifyOptions};
use dxsync::{exit, HarnessError};
use dxsync_core::balls::DEFAULT_MEMBER_BUDGET;
use dxsync_core::{BitString, SubstringEdit};

#[derive(Parser)]
#[command(name = "dxsync", version, about = "Document exchange under substring edits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode, ship over the wire format and decode one string.
    Sync(SyncArgs),
    /// Edit and confusion ball sizes for sampled strings, against the size bound.
    BallCensus(BallCensusArgs),
    /// Fraction of non-dense strings against the union bound.
    DensityCensus(DensityCensusArgs),
    /// Encoding length over random strings, with a slope against log2 n.
    Bench(BenchArgs),
    /// Run a property suite.
    Verify(VerifyArgs),
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Write records here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = Format::Csv)]
    format: Format,
}

impl OutputArgs {
    fn writer(&self) -> Result<Box<dyn Write>, HarnessError> {
        Ok(match &self.out {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

#[derive(Args, Clone)]
struct DensityArgs {
    /// Pattern every window must contain.
    #[arg(long, default_value = "01")]
    pattern: BitString,
    /// Window δ = ceil(alpha · log2 n).
    #[arg(long, default_value_t = 8)]
    delta_alpha: u64,
    /// Fixed window δ.
    #[arg(long, conflicts_with_all = ["full_window", "lemma6_preset"])]
    delta: Option<usize>,
    /// Window δ = n.
    #[arg(long, conflicts_with = "lemma6_preset")]
    full_window: bool,
    /// Pattern 0^k 1^k with δ = ceil(k · 2^(2k+3) · log2 n).
    #[arg(long)]
    lemma6_preset: bool,
}

impl DensityArgs {
    fn rule(&self, k: usize) -> DensityRule {
        if self.lemma6_preset {
            DensityRule::Preset { k }
        } else if self.full_window || self.delta.is_some() {
            DensityRule::Fixed {
                pattern: self.pattern.clone(),
                window: self.delta,
            }
        } else {
            DensityRule::Alpha {
                pattern: self.pattern.clone(),
                alpha: self.delta_alpha,
            }
        }
    }
}

#[derive(Args)]
struct SyncArgs {
    /// The sender's string.
    #[arg(long, conflicts_with_all = ["x_file", "n"])]
    x: Option<BitString>,
    /// Read the sender's string from a file of 0/1 characters.
    #[arg(long, conflicts_with = "n")]
    x_file: Option<PathBuf>,
    /// Length of a random sender string.
    #[arg(long, default_value_t = 64)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    t: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "worst")]
    scheme: Scheme,
    #[arg(long, default_value = "identity")]
    labeling: LabelingChoice,
    #[command(flatten)]
    density: DensityArgs,
    /// The receiver's string, instead of sampling edits.
    #[arg(long, conflicts_with = "edit")]
    y: Option<BitString>,
    /// A fixed edit POS:U:V (1-based position, U and V may be empty); repeatable.
    #[arg(long, value_parser = parse_edit)]
    edit: Vec<SubstringEdit>,
    /// Damage a header byte after serializing.
    #[arg(long)]
    corrupt: Option<Corruption>,
    /// Save the serialized encoding.
    #[arg(long)]
    wire_out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_MEMBER_BUDGET)]
    budget: usize,
    #[arg(long, default_value_t = DEFAULT_RESEED_CAP)]
    reseed_cap: u32,
}

#[derive(Args)]
struct BallCensusArgs {
    #[arg(long, value_delimiter = ',', default_value = "4,6,8")]
    n_grid: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    t: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 10)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Check each confusion ball against the brute-force oracle.
    #[arg(long)]
    oracle: bool,
    /// Census these strings instead of sampling; repeatable.
    #[arg(long)]
    x: Vec<BitString>,
    #[command(flatten)]
    density: DensityArgs,
    #[arg(long, default_value_t = DEFAULT_MEMBER_BUDGET)]
    budget: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct DensityCensusArgs {
    #[arg(long, value_delimiter = ',', default_value = "64,256,1024")]
    n_grid: Vec<usize>,
    #[command(flatten)]
    density: DensityArgs,
    /// k for the preset pattern.
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Count all 2^n strings instead of sampling.
    #[arg(long)]
    exhaustive: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "64,128,256")]
    n_grid: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    t: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value = "worst")]
    scheme: Scheme,
    #[arg(long, default_value = "identity")]
    labeling: LabelingChoice,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    density: DensityArgs,
    #[arg(long, default_value_t = DEFAULT_MEMBER_BUDGET)]
    budget: usize,
    #[arg(long, default_value_t = DEFAULT_RESEED_CAP)]
    reseed_cap: u32,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// edits, balls, labeling, docex or all.
    suite: Suite,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Swap in an off-by-one modulus search.
    #[arg(long, hide = true)]
    mutate_modulus: bool,
}

fn sync(a: SyncArgs) -> Result<(), HarnessError> {
    let x = match (&a.x, &a.x_file) {
        (Some(x), _) => XSource::Literal(x.clone()),
        (None, Some(p)) => {
            let text = std::fs::read_to_string(p)?;
            XSource::Literal(
                text.trim()
                    .parse()
                    .map_err(|e| HarnessError::Usage(format!("{}: {e}", p.display())))?,
            )
        }
        (None, None) => XSource::Random { n: a.n },
    };
    let trace = match (&a.y, a.edit.is_empty()) {
        (Some(y), _) => Trace::Received(y.clone()),
        (None, false) => Trace::Fixed(a.edit.clone()),
        (None, true) => Trace::Sampled,
    };
    let n = match &x {
        XSource::Literal(x) => x.len(),
        XSource::Random { n } => *n,
    };
    let density = match a.scheme {
        Scheme::Average => Some(a.density.rule(a.k).config(n)?),
        Scheme::Worst => None,
    };
    let cfg = SyncConfig {
        x,
        t: a.t,
        k: a.k,
        seed: a.seed,
        scheme: a.scheme,
        labeling: a.labeling,
        density,
        trace,
        corrupt: a.corrupt,
        budget: a.budget,
        reseed_cap: a.reseed_cap,
    };
    let report = run_sync(&cfg)?;
    if let Some(p) = &a.wire_out {
        std::fs::write(p, &report.wire)?;
    }
    println!("{report}");
    Ok(())
}

fn ball_census_cmd(a: BallCensusArgs) -> Result<(), HarnessError> {
    let cfg = BallCensusConfig {
        n_grid: a.n_grid,
        t: a.t,
        k: a.k,
        samples: a.samples,
        seed: a.seed,
        oracle: a.oracle,
        density: a.density.rule(a.k),
        budget: a.budget,
        strings: (!a.x.is_empty()).then_some(a.x),
    };
    let rows = ball_census(&cfg)?;
    write_rows(&rows, a.output.format, a.output.writer()?)
}

fn density_census_cmd(a: DensityCensusArgs) -> Result<(), HarnessError> {
    let cfg = DensityCensusConfig {
        n_grid: a.n_grid,
        rule: a.density.rule(a.k),
        samples: a.samples,
        seed: a.seed,
        exhaustive: a.exhaustive,
    };
    let rows = density_census(&cfg)?;
    write_rows(&rows, a.output.format, a.output.writer()?)?;
    if let Some(r) = rows.iter().find(|r| !r.within_bound) {
        return Err(HarnessError::Violation(format!(
            "n={}: non-dense fraction {} exceeds the union bound {} by more than 3 standard errors",
            r.n, r.non_dense_fraction, r.union_bound
        )));
    }
    Ok(())
}

fn bench_cmd(a: BenchArgs) -> Result<(), HarnessError> {
    let cfg = BenchConfig {
        n_grid: a.n_grid,
        t: a.t,
        k: a.k,
        scheme: a.scheme,
        labeling: a.labeling,
        trials: a.trials,
        seed: a.seed,
        density: a.density.rule(a.k),
        budget: a.budget,
        reseed_cap: a.reseed_cap,
    };
    let report = redundancy_bench(&cfg)?;
    match a.output.format {
        Format::Csv => write_rows(&report.records, Format::Csv, a.output.writer()?)?,
        Format::Json => write_json(&report, a.output.writer()?)?,
    }
    match (&report.slope, &report.warning) {
        (Some(s), _) => eprintln!("slope of mean bits against log2 n: {s}"),
        (None, Some(w)) => eprintln!("warning: {w}"),
        (None, None) => {}
    }
    Ok(())
}

fn verify_cmd(a: VerifyArgs) -> Result<(), HarnessError> {
    let mut opts = VerifyOptions::new(a.seed);
    if a.mutate_modulus {
        opts.modulus_search = off_by_one_search;
    }
    let reports = verify::run(a.suite, &opts);
    for r in &reports {
        println!("{r}");
    }
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.suite.name()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(HarnessError::Violation(format!("suites failed: {}", failed.join(", "))))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sync(a) => sync(a),
        Command::BallCensus(a) => ball_census_cmd(a),
        Command::DensityCensus(a) => density_census_cmd(a),
        Command::Bench(a) => bench_cmd(a),
        Command::Verify(a) => verify_cmd(a),
    };
    match result {
        Ok(()) => ExitCode::from(exit::OK as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
