//! `sl213`: run verification suites, print expansions, manage the cache.

mod cache;
mod expand;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sl213::invariants::{InvariantContext, InvariantError};
use sl213::modverify::{parse_selection, Verifier, VerifyConfig, VerifyError};
use sl213::qseries::SeriesContext;

use cache::{pairs_within, Cache, CacheError, EntryState};
use expand::Target;

#[derive(Parser)]
#[command(name = "sl213", version, about = "Exact verification of SL(2,13) invariants and their modular realizations")]
struct Cli {
    #[command(flatten)]
    opts: Options,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Options {
    /// Truncation in integer q-orders.
    #[arg(long, global = true, env = "SL213_ORDER", default_value_t = 12)]
    order: u32,
    /// Largest degree of a symbolic invariant that may be expanded.
    #[arg(long, global = true, env = "SL213_DEGREE_BUDGET", default_value_t = 30)]
    degree_budget: u32,
    #[arg(long, global = true, env = "SL213_SEED", default_value_t = 20130013)]
    seed: u64,
    /// Seeded parameter tuples per singularity family.
    #[arg(long, global = true, env = "SL213_DRAWS", default_value_t = 5)]
    draws: usize,
    #[arg(long, global = true, env = "SL213_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true, env = "SL213_FORMAT", value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report or expansion here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Markdown,
}

#[derive(Subcommand)]
enum Command {
    /// Run check suites: group, forms, invariance, modular, singularities,
    /// icosahedral, prop32 (or theta), all.
    Verify {
        #[arg(default_value = "all")]
        suites: Vec<String>,
    },
    /// Print a form, series or invariant polynomial.
    Expand { target: String },
    /// Manage cached invariant polynomials.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand)]
enum CacheAction {
    /// List entries with keys and sizes.
    Status,
    /// Remove every cache entry.
    Clear,
    /// Build and store every invariant within the degree budget.
    Warm,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Resource(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Resource(_) => 3,
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::UnknownSuite(_) | VerifyError::InvalidConfig(_) => CliError::Usage(e.to_string()),
            other => CliError::Resource(other.to_string()),
        }
    }
}

impl From<CacheError> for CliError {
    fn from(e: CacheError) -> Self {
        match e {
            CacheError::Invariant(InvariantError::BudgetExceeded { .. }) => CliError::Usage(e.to_string()),
            other => CliError::Resource(other.to_string()),
        }
    }
}

impl Options {
    fn verify_config(&self) -> VerifyConfig {
        VerifyConfig { order: self.order, degree_budget: self.degree_budget, seed: self.seed, draws: self.draws }
    }

    fn cache(&self) -> Cache {
        let dir = self.cache_dir.clone().unwrap_or_else(|| match std::env::var_os("HOME") {
            Some(home) => PathBuf::from(home).join(".cache").join("sl213"),
            None => PathBuf::from(".sl213-cache"),
        });
        Cache::new(dir)
    }

    fn emit(&self, text: &str) -> Result<(), CliError> {
        match &self.out {
            Some(path) => fs::write(path, text)
                .map_err(|e| CliError::Resource(format!("cannot write {}: {e}", path.display()))),
            None => {
                let mut out = io::stdout().lock();
                out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| CliError::Resource(e.to_string()))
            }
        }
    }
}

fn verify(opts: &Options, suites: &[String]) -> Result<bool, CliError> {
    let selection = parse_selection(suites)?;
    let verifier = Verifier::new(opts.verify_config())?;
    let report = verifier.run(&selection);
    let text = match opts.format {
        Format::Json => report.to_json() + "\n",
        Format::Markdown => report.to_markdown(),
    };
    opts.emit(&text)?;
    let pass = report.checks.iter().filter(|c| c.passed()).count();
    eprintln!("{pass}/{} checks passed", report.checks.len());
    for c in report.failures() {
        eprintln!("FAIL {}: {}", c.name, c.witness);
    }
    Ok(report.passed())
}

fn expand(opts: &Options, target: &str) -> Result<(), CliError> {
    let target: Target = target.parse().map_err(|e: expand::UnknownTarget| CliError::Usage(e.to_string()))?;
    if opts.order == 0 {
        return Err(CliError::Usage("order must be at least 1".into()));
    }
    let text = match target {
        Target::Phi(m, n) => {
            let ctx = InvariantContext::new();
            let (p, _) = opts.cache().get_or_build(&ctx, m, n, opts.degree_budget, |w| eprintln!("warning: {w}"))?;
            format!("{p}\n")
        }
        Target::PhiX(m, n) => {
            let verifier = Verifier::new(VerifyConfig { draws: 1, ..opts.verify_config() })?;
            let prec = SeriesContext::order13(opts.order).prec();
            verifier.stated_on_x(m, n).truncate(prec).format_expansion()
        }
        other => expand::series(other, opts.order).map_err(|e| CliError::Resource(e.to_string()))?.format_expansion(),
    };
    opts.emit(&text)
}

fn cache_command(opts: &Options, action: &CacheAction) -> Result<(), CliError> {
    let cache = opts.cache();
    let mut out = String::new();
    match action {
        CacheAction::Status => {
            let entries = cache.entries()?;
            let mut corrupt = 0;
            for e in &entries {
                let state = match &e.state {
                    EntryState::Valid { terms } => format!("ok, {terms} terms"),
                    EntryState::Stale => "stale normalization version".to_string(),
                    EntryState::Corrupt(why) => {
                        corrupt += 1;
                        eprintln!("warning: corrupt cache entry {}: {why}", e.path.display());
                        format!("corrupt: {why}")
                    }
                };
                out.push_str(&format!("{}\t{} bytes\t{state}\n", e.key.file_name(), e.bytes));
            }
            out.push_str(&format!("{} entries ({corrupt} corrupt) in {}\n", entries.len(), cache.dir().display()));
        }
        CacheAction::Clear => {
            let n = cache.clear()?;
            out.push_str(&format!("removed {n} entries from {}\n", cache.dir().display()));
        }
        CacheAction::Warm => {
            let ctx = InvariantContext::new();
            let (mut built, mut reused) = (0, 0);
            for (m, n) in pairs_within(opts.degree_budget) {
                let (_, hit) = cache.get_or_build(&ctx, m, n, opts.degree_budget, |w| eprintln!("warning: {w}"))?;
                if hit {
                    reused += 1;
                } else {
                    built += 1;
                }
            }
            out.push_str(&format!("stored {built}, reused {reused} in {}\n", cache.dir().display()));
        }
    }
    opts.emit(&out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify { suites } => verify(&cli.opts, suites).map(|ok| if ok { 0 } else { 1 }),
        Command::Expand { target } => expand(&cli.opts, target).map(|_| 0),
        Command::Cache { action } => cache_command(&cli.opts, action).map(|_| 0),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
