//! `bifix`: command-line front-end for the bifix-free syntactic complexity
//! toolkit. Every command prints a JSON run report on stdout.

mod commands;
mod reproduce;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use bifix_core::cache::Cache;
use bifix_core::conflicts::ForcesMode;
use bifix_core::Error;

#[derive(Parser, Debug)]
#[command(name = "bifix", version, about = "Syntactic complexity of bifix-free languages")]
struct Cli {
    /// Worker threads (default: all cores). Does not affect results.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Directory for cached enumerations (overridden by BIFIX_CACHE_DIR).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Seed for random DFA sampling.
    #[arg(long, global = true, default_value_t = 2024)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SetName {
    Bbf,
    Wge6,
    Wle5,
    WitnessLetters,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    PropWitness,
    PropAlphabet,
    TheoremBound,
    TheoremUnique,
    SmallN,
    PhiSample,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Uniform,
    EachPair,
}

impl From<ModeArg> for ForcesMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Uniform => ForcesMode::Uniform,
            ModeArg::EachPair => ForcesMode::EachPair,
        }
    }
}

/// Inclusive range of state counts, written `7` or `6..8`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NRange {
    pub lo: usize,
    pub hi: usize,
}

impl NRange {
    pub fn iter(self) -> impl Iterator<Item = usize> {
        self.lo..=self.hi
    }

    pub fn single(self) -> Option<usize> {
        (self.lo == self.hi).then_some(self.lo)
    }
}

impl Serialize for NRange {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.single() {
            Some(n) => s.serialize_u64(n as u64),
            None => s.serialize_str(&format!("{}..{}", self.lo, self.hi)),
        }
    }
}

fn parse_range(s: &str) -> Result<NRange, String> {
    let num = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => {
            let v = num(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range {s}"));
    }
    Ok(NRange { lo, hi })
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate a named set and write it in the line format.
    Gen {
        set: SetName,
        #[arg(long, value_parser = parse_range)]
        n: NRange,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print a `set,n,count` table instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Close a set of generators, given as a line-format file or a DFA.
    Closure {
        #[arg(long, conflicts_with = "dfa", required_unless_present = "dfa")]
        set: Option<PathBuf>,
        #[arg(long)]
        dfa: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the witness DFA W(n).
    Witness {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also check that the letters generate W>=6(n).
        #[arg(long)]
        verify: bool,
    },
    /// Minimality, bifix-freeness and syntactic complexity of a DFA.
    Analyze {
        #[arg(long)]
        dfa: PathBuf,
    },
    /// Apply the injection phi to a DFA's transition semigroup or a set.
    Phi {
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "set", required_unless_present = "set")]
        dfa: Option<PathBuf>,
        #[arg(long)]
        set: Option<PathBuf>,
        #[arg(long)]
        audit: bool,
        /// Use p -> f2 in Case 2.3 instead of p -> f1.
        #[arg(long)]
        amended: bool,
    },
    /// Iterated pruning of B_bf(n) against the conflict relation.
    Uniqueness {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "uniform")]
        mode: ModeArg,
    },
    /// Run a reproduction target and report pass/fail per n.
    Reproduce {
        target: Target,
        #[arg(long, value_parser = parse_range)]
        n: Option<NRange>,
        /// Number of DFAs for phi-sample.
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long)]
        amended: bool,
    },
}

pub struct Ctx {
    pub cache: Option<Cache>,
    pub seed: u64,
}

/// Results of a command and whether its checks held.
pub struct Outcome {
    pub results: Value,
    pub ok: bool,
    pub seeded: bool,
    /// Written instead of the JSON report.
    pub raw: Option<String>,
}

impl Outcome {
    pub fn new(results: Value, ok: bool) -> Self {
        Self {
            results,
            ok,
            seeded: false,
            raw: None,
        }
    }
}

#[derive(Serialize)]
struct RunReport<'a> {
    command: &'a str,
    inputs: Value,
    results: &'a Value,
    timing: f64,
    seed: Option<u64>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ResourceGuard(_) => 3,
        _ => 2,
    }
}

fn run(cli: &Cli, ctx: &Ctx) -> Result<(String, Value, Outcome), Error> {
    use serde_json::json;
    let (name, inputs, out) = match &cli.command {
        Command::Gen { set, n, out, csv } => (
            "gen",
            json!({"set": set, "n": n, "out": out, "csv": csv}),
            commands::gen(ctx, *set, *n, out.as_deref(), *csv)?,
        ),
        Command::Closure { set, dfa, out } => (
            "closure",
            json!({"set": set, "dfa": dfa, "out": out}),
            commands::closure(set.as_deref(), dfa.as_deref(), out.as_deref())?,
        ),
        Command::Witness { n, out, verify } => (
            "witness",
            json!({"n": n, "out": out, "verify": verify}),
            commands::witness(*n, out.as_deref(), *verify)?,
        ),
        Command::Analyze { dfa } => ("analyze", json!({"dfa": dfa}), commands::analyze(dfa)?),
        Command::Phi {
            n,
            dfa,
            set,
            audit,
            amended,
        } => (
            "phi",
            json!({"n": n, "dfa": dfa, "set": set, "audit": audit, "amended": amended}),
            commands::phi(*n, dfa.as_deref(), set.as_deref(), *audit, *amended)?,
        ),
        Command::Uniqueness { n, trace, mode } => (
            "uniqueness",
            json!({"n": n, "trace": trace, "mode": ForcesMode::from(*mode)}),
            commands::uniqueness(*n, trace.as_deref(), (*mode).into())?,
        ),
        Command::Reproduce {
            target,
            n,
            count,
            amended,
        } => (
            "reproduce",
            json!({"target": target, "n": n, "count": count, "amended": amended}),
            reproduce::run(ctx, *target, *n, *count, *amended)?,
        ),
    };
    Ok((name.to_string(), inputs, out))
}

fn configure_threads(threads: Option<usize>) -> Result<(), Error> {
    let Some(t) = threads else { return Ok(()) };
    if t == 0 {
        return Err(Error::Domain("--threads must be positive".into()));
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(t)
        .build_global()
        .map_err(|e| Error::Domain(e.to_string()))?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let setup = configure_threads(cli.threads)
        .and_then(|_| Cache::resolve(cli.cache_dir.as_deref()))
        .map(|cache| Ctx { cache, seed: cli.seed });
    let result = setup.and_then(|ctx| run(&cli, &ctx));
    match result {
        Ok((command, inputs, out)) => {
            let mut stdout = std::io::stdout().lock();
            // A closed pipe is not an error of the command.
            let _ = if let Some(raw) = &out.raw {
                stdout.write_all(raw.as_bytes())
            } else {
                let report = RunReport {
                    command: &command,
                    inputs,
                    results: &out.results,
                    timing: start.elapsed().as_secs_f64(),
                    seed: out.seeded.then_some(cli.seed),
                };
                writeln!(stdout, "{}", serde_json::to_string_pretty(&report).unwrap())
            };
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("bifix: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
