//! Command-line front end: file format, report schema and command dispatch.
//!
//! [`run`] is the whole program minus process plumbing, so tests and
//! examples can drive it in memory.

pub mod format;
pub mod report;

use std::collections::BTreeMap;
use std::io::Read;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::family::{random_pattern, rng_from_seed, PatternParams};
use crate::hypergraph::{build_hypergraph, DirectedHypergraph};
use crate::numeric::strong_controllability_with_cap;
use crate::oracle::{default_depth_cap, lie_algebra_rank_at_origin};
use crate::structural::{accessible_set, detect_dilation, StructuralVerdict};
use crate::system::{Polysystem, SparsityPattern};
use crate::tensor::DEFAULT_CAP;

pub use format::{format_hypergraph, format_pattern, format_system, parse_system, ParsedInput};
pub use report::{AnalysisReport, ErrorReport, REPORT_VERSION};

/// Realizations sampled for a controllable pattern; one must reach full rank.
pub const CONTROLLABLE_TRIALS: usize = 3;
/// Realizations that must all stay rank-deficient for an uncontrollable one.
pub const UNCONTROLLABLE_TRIALS: usize = 5;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "polyctrl",
    version,
    about = "Structural controllability of odd polynomial systems"
)]
pub struct Cli {
    /// Emit the JSON report (errors also go to stderr as JSON).
    #[arg(long, global = true)]
    pub json: bool,
    /// Relative singular-value tolerance; 0 picks an automatic one.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Seed for sampled realizations and generated patterns.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest dense intermediate, in cells.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
    /// Add per-phase wall-clock times to the report.
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct InputArg {
    /// Input file; `-` or absent reads standard input.
    pub input: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Structural verdict with witnesses.
    Analyze {
        #[command(flatten)]
        input: InputArg,
        /// Also run the numeric rank test.
        #[arg(long)]
        numeric: bool,
    },
    /// Hyperedge dilation test.
    Dilation {
        #[command(flatten)]
        input: InputArg,
    },
    /// Accessibility test.
    Access {
        #[command(flatten)]
        input: InputArg,
    },
    /// Rank of the reduced controllability matrix.
    Rank {
        #[command(flatten)]
        input: InputArg,
    },
    /// Cross-check structural verdicts against numeric ranks on random patterns.
    Validate {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Largest state dimension.
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        k: usize,
        /// Largest number of inputs.
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// Largest tensor support.
        #[arg(long, default_value_t = 6)]
        support: usize,
    },
    /// Rank of the Lie algebra at the origin (small systems only).
    LieRank {
        #[command(flatten)]
        input: InputArg,
        /// Bracketing rounds; defaults to (k-1)n+2.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Print a seeded random pattern.
    Gen {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Tensor support size; defaults to 2n.
        #[arg(long)]
        support: Option<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> RunOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                RunOutcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                RunOutcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let json = cli.json;
    match execute(&cli, stdin) {
        Ok(Output::Report(r)) => RunOutcome {
            code: EXIT_OK,
            stdout: if json { r.to_json() } else { r.render_text() },
            stderr: String::new(),
        },
        Ok(Output::Text(t)) => RunOutcome {
            code: EXIT_OK,
            stdout: t,
            stderr: String::new(),
        },
        Err(e) => {
            let code = if e.is_capacity() {
                EXIT_CAPACITY
            } else {
                EXIT_INPUT
            };
            let stderr = if json {
                ErrorReport::from_error(&e).to_json()
            } else {
                format!("error: {e}\n")
            };
            RunOutcome {
                code,
                stdout: String::new(),
                stderr,
            }
        }
    }
}

enum Output {
    Report(Box<AnalysisReport>),
    Text(String),
}

struct Clock {
    enabled: bool,
    phases: BTreeMap<&'static str, f64>,
}

impl Clock {
    fn time<T>(&mut self, phase: &'static str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        if self.enabled {
            *self.phases.entry(phase).or_default() += start.elapsed().as_secs_f64() * 1e3;
        }
        out
    }

    fn finish(self) -> Option<BTreeMap<&'static str, f64>> {
        self.enabled.then_some(self.phases)
    }
}

fn read_input(arg: &InputArg, stdin: &mut dyn Read) -> Result<ParsedInput> {
    let text = match arg.input.as_deref() {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)
            .map_err(|e| Error::InvalidSystem(format!("cannot read {}: {e}", p.display())))?,
        _ => {
            let mut s = String::new();
            stdin
                .read_to_string(&mut s)
                .map_err(|e| Error::InvalidSystem(format!("cannot read standard input: {e}")))?;
            s
        }
    };
    parse_system(&text)
}

/// Tensor order implied by a hypergraph's system tails; 4 when it has none.
fn implied_order(h: &DirectedHypergraph) -> Result<usize> {
    let mut orders = h
        .edges()
        .iter()
        .filter(|e| !(e.tail().len() == 1 && h.is_control(e.tail()[0])))
        .map(|e| e.tail().len() + 1);
    let Some(first) = orders.next() else {
        return Ok(4);
    };
    if orders.any(|o| o != first) {
        return Err(Error::Hypergraph("system hypertails differ in size".into()));
    }
    Ok(first)
}

fn hypergraph_of(input: &ParsedInput) -> DirectedHypergraph {
    match input {
        ParsedInput::System(s) => build_hypergraph(&s.sparsity_pattern()),
        ParsedInput::Pattern(p) => build_hypergraph(p),
        ParsedInput::Hypergraph(h) => h.clone(),
    }
}

fn system_info(input: &ParsedInput, h: &DirectedHypergraph) -> report::SystemInfo {
    let pattern_sizes = |p: &SparsityPattern| {
        (
            Some(p.tensor_support().len()),
            Some(p.control_support().len()),
        )
    };
    let (k, (tensor_support, control_support)) = match input {
        ParsedInput::System(s) => (Some(s.k()), pattern_sizes(&s.sparsity_pattern())),
        ParsedInput::Pattern(p) => (Some(p.order()), pattern_sizes(p)),
        ParsedInput::Hypergraph(h) => (implied_order(h).ok(), (None, None)),
    };
    report::SystemInfo {
        input: input.kind(),
        n: h.n(),
        m: h.m(),
        k,
        tensor_support,
        control_support,
        hyperedges: h.edges().len(),
    }
}

/// A concrete system: the input itself, or a seeded realization of its pattern.
fn realize(input: &ParsedInput, seed: u64) -> Result<(Polysystem, Option<u64>)> {
    match input {
        ParsedInput::System(s) => Ok((s.clone(), None)),
        ParsedInput::Pattern(p) => Ok((p.sample_realization(seed), Some(seed))),
        ParsedInput::Hypergraph(h) => {
            let p = h.to_pattern(implied_order(h)?)?;
            Ok((p.sample_realization(seed), Some(seed)))
        }
    }
}

fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<Output> {
    let mut clock = Clock {
        enabled: cli.timings,
        phases: BTreeMap::new(),
    };
    let mut report = match &cli.command {
        Command::Analyze { input, numeric } => {
            let parsed = clock.time("parse", || read_input(input, stdin))?;
            let h = clock.time("hypergraph", || hypergraph_of(&parsed));
            let mut r = AnalysisReport::new("analyze");
            r.system = Some(system_info(&parsed, &h));
            let verdict = clock.time("structural", || StructuralVerdict::of_hypergraph(&h));
            r.structural = Some((&verdict).into());
            if *numeric {
                let (sys, seed) = realize(&parsed, cli.seed)?;
                let rank = clock.time("numeric", || {
                    strong_controllability_with_cap(&sys, cli.tol, cli.cap)
                })?;
                r.numeric = Some(report::NumericSection::new(&rank, seed));
            }
            r
        }
        Command::Dilation { input } => {
            let parsed = clock.time("parse", || read_input(input, stdin))?;
            let h = hypergraph_of(&parsed);
            let mut r = AnalysisReport::new("dilation");
            r.system = Some(system_info(&parsed, &h));
            r.dilation = Some((&clock.time("dilation", || detect_dilation(&h))).into());
            r
        }
        Command::Access { input } => {
            let parsed = clock.time("parse", || read_input(input, stdin))?;
            let h = hypergraph_of(&parsed);
            let mut r = AnalysisReport::new("access");
            r.system = Some(system_info(&parsed, &h));
            let acc: Vec<usize> = clock
                .time("access", || accessible_set(&h))
                .into_iter()
                .collect();
            r.access = Some(report::AccessSection::new(&h, &acc));
            r
        }
        Command::Rank { input } => {
            let parsed = clock.time("parse", || read_input(input, stdin))?;
            let h = hypergraph_of(&parsed);
            let mut r = AnalysisReport::new("rank");
            r.system = Some(system_info(&parsed, &h));
            let (sys, seed) = realize(&parsed, cli.seed)?;
            let rank = clock.time("numeric", || {
                strong_controllability_with_cap(&sys, cli.tol, cli.cap)
            })?;
            r.numeric = Some(report::NumericSection::new(&rank, seed));
            r
        }
        Command::LieRank { input, depth } => {
            let parsed = clock.time("parse", || read_input(input, stdin))?;
            let h = hypergraph_of(&parsed);
            let mut r = AnalysisReport::new("lie-rank");
            r.system = Some(system_info(&parsed, &h));
            let (sys, seed) = realize(&parsed, cli.seed)?;
            let cap = depth.unwrap_or_else(|| default_depth_cap(sys.n(), sys.k()));
            let lie = clock.time("lie", || lie_algebra_rank_at_origin(&sys, cap))?;
            r.lie = Some(report::LieSection::new(&lie, sys.n(), cap, seed));
            r
        }
        Command::Validate {
            trials,
            n,
            k,
            m,
            support,
        } => {
            if *n == 0 || *m == 0 {
                return Err(Error::InvalidSystem(
                    "validate needs --n and --m of at least 1".into(),
                ));
            }
            if *k < 2 || !k.is_multiple_of(2) {
                return Err(Error::InvalidSystem(format!(
                    "tensor order {k} must be even and at least 2"
                )));
            }
            let mut r = AnalysisReport::new("validate");
            let section = clock.time("validate", || {
                validate_patterns(*trials, cli.seed, cli.tol, cli.cap, *n, *k, *m, *support)
            })?;
            r.validation = Some(section);
            r
        }
        Command::Gen { n, k, m, support } => {
            if *n == 0 || *m == 0 || *k < 2 || !k.is_multiple_of(2) {
                return Err(Error::InvalidSystem(
                    "gen needs n, m >= 1 and an even order k >= 2".into(),
                ));
            }
            let params = PatternParams {
                n: *n,
                k: *k,
                m: *m,
                support: support.unwrap_or(2 * n),
            };
            return Ok(Output::Text(format_pattern(&random_pattern(
                &params, cli.seed,
            ))));
        }
    };
    report.timings_ms = clock.finish();
    Ok(Output::Report(Box::new(report)))
}

/// Cross-validation trial protocol.
///
/// Trial seeds come from one stream seeded by `seed`, so trial `i` is the
/// same whatever the thread count. A structurally controllable pattern
/// agrees when one of [`CONTROLLABLE_TRIALS`] realizations reaches rank `n`; an
/// uncontrollable one agrees when all [`UNCONTROLLABLE_TRIALS`] stay below.
#[allow(clippy::too_many_arguments)]
pub fn validate_patterns(
    trials: usize,
    seed: u64,
    tol: f64,
    cap: usize,
    max_n: usize,
    k: usize,
    max_m: usize,
    max_support: usize,
) -> Result<report::ValidationSection> {
    let mut stream = rng_from_seed(seed);
    let plan: Vec<(PatternParams, u64)> = (0..trials)
        .map(|_| {
            let params = PatternParams::random(&mut stream, max_n, k, max_m, max_support);
            (params, stream.gen())
        })
        .collect();
    let records = plan
        .par_iter()
        .enumerate()
        .map(|(trial, (params, trial_seed))| {
            let pat = random_pattern(params, *trial_seed);
            let verdict = crate::structural::structural_verdict(&pat);
            let count = if verdict.controllable {
                CONTROLLABLE_TRIALS
            } else {
                UNCONTROLLABLE_TRIALS
            };
            let ranks = (0..count as u64)
                .map(|j| {
                    let sys = pat.sample_realization(trial_seed.wrapping_add(1 + j));
                    strong_controllability_with_cap(&sys, tol, cap).map(|r| r.rank)
                })
                .collect::<Result<Vec<_>>>()?;
            let agree = if verdict.controllable {
                ranks.iter().any(|&r| r == pat.dim())
            } else {
                ranks.iter().all(|&r| r < pat.dim())
            };
            Ok(report::TrialRecord {
                trial,
                n: pat.dim(),
                m: pat.inputs(),
                tensor_support: pat.tensor_support().len(),
                structurally_controllable: verdict.controllable,
                ranks,
                agree,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let agreements = records.iter().filter(|r| r.agree).count();
    Ok(report::ValidationSection {
        trials,
        seed,
        tol,
        agreements,
        disagreements: trials - agreements,
        records,
    })
}
