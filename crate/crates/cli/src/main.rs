use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use onorbit_core::bruhat::build_ideal;
use onorbit_core::driver::{self, Options, Oracle, Theorem};
use onorbit_core::pattern::PatternList;
use onorbit_core::{Error, Involution, PrimeField};

const DEFAULT_PATTERNS: &str = concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/../../data/m19_bad_patterns.json"
);
const DEFAULT_EXTRAS: &str = concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/../../data/smoothness_extras.json"
);

/// Smoothness of orthogonal-group orbit closures in the flag variety of GL_n.
#[derive(Parser)]
#[command(name = "onorbit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// Bad-pattern list (JSON).
    #[arg(long, global = true, default_value = DEFAULT_PATTERNS)]
    patterns: PathBuf,
    /// Additional patterns obstructing smoothness (JSON).
    #[arg(long, global = true, default_value = DEFAULT_EXTRAS)]
    extras: PathBuf,
    /// Prime modulus for the Jacobian computations.
    #[arg(long, global = true, default_value_t = 2_147_483_647)]
    prime: u64,
    /// Random orbit points per codimension estimate.
    #[arg(long, global = true, default_value_t = 20)]
    trials: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Classify one involution with every criterion.
    Analyze {
        pi: String,
        /// Also export the ideal and its Bruhat graph as JSON.
        #[arg(long)]
        ideal_out: Option<PathBuf>,
    },
    /// Classify every involution of S_n.
    Survey {
        #[arg(long)]
        n: usize,
        /// Include the Jacobian classifier.
        #[arg(long)]
        jacobian: bool,
    },
    /// Exhaustively check one equivalence up to max-n.
    Verify {
        /// 1, 2 or even
        #[arg(long)]
        theorem: String,
        #[arg(long)]
        max_n: usize,
    },
    /// List minimal involutions failing an oracle.
    Discover {
        /// graph or jacobian
        #[arg(long)]
        oracle: String,
        #[arg(long)]
        max_n: usize,
    },
}

const EXIT_DISAGREEMENT: u8 = 2;
const EXIT_CONFIG: u8 = 3;

fn load_list(path: &Path, what: &str) -> Result<PatternList, Error> {
    if !path.exists() {
        return Err(Error::Config(format!(
            "{what} file not found; expected it at {}",
            path.display()
        )));
    }
    PatternList::load(path)
}

fn emit(common: &Common, text: &str) -> Result<(), Error> {
    match &common.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            let end = if text.ends_with('\n') { "" } else { "\n" };
            match write!(out, "{text}{end}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(Error::Config(format!("cannot write to stdout: {e}")))
                }
                _ => Ok(()),
            }
        }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes")
}

fn run(cli: Cli) -> Result<u8, Error> {
    let common = cli.common;
    let badlist = load_list(&common.patterns, "pattern list")?;
    let extras = load_list(&common.extras, "smoothness extras")?;
    let mut opts = Options::new(badlist, extras);
    opts.field = PrimeField::new(common.prime)?;
    opts.trials = common.trials;
    opts.seed = common.seed;
    opts.threads = common.threads;

    match cli.command {
        Command::Analyze { pi, ideal_out } => {
            let pi: Involution = pi.parse()?;
            opts.jacobian = true;
            let verdict = driver::analyze(&pi, &opts)?;
            if let Some(path) = ideal_out {
                let doc = build_ideal(&pi).to_document();
                fs::write(&path, to_json(&doc))
                    .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
            }
            emit(&common, &to_json(&verdict))?;
            Ok(if verdict.consistent() {
                0
            } else {
                EXIT_DISAGREEMENT
            })
        }
        Command::Survey { n, jacobian } => {
            opts.jacobian = jacobian;
            let report = driver::survey(n, &opts)?;
            let text = match common.format {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
            };
            emit(&common, &text)?;
            Ok(if report.all_consistent() {
                0
            } else {
                EXIT_DISAGREEMENT
            })
        }
        Command::Verify { theorem, max_n } => {
            let theorem: Theorem = theorem.parse()?;
            let report = driver::verify(theorem, max_n, &opts)?;
            emit(&common, &to_json(&report))?;
            eprintln!(
                "verify {theorem:?} up to n = {max_n}: {} ({} counterexamples)",
                if report.pass { "PASS" } else { "FAIL" },
                report.counterexamples.len()
            );
            Ok(if report.pass { 0 } else { EXIT_DISAGREEMENT })
        }
        Command::Discover { oracle, max_n } => {
            let oracle: Oracle = oracle.parse()?;
            let report = driver::discover(oracle, max_n, &opts)?;
            emit(&common, &to_json(&report))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::UnsupportedPrime { .. } => ExitCode::from(EXIT_CONFIG),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
