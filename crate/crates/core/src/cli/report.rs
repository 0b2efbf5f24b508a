//! JSON report schema and its plain-text rendering.
//!
//! All vertex and hyperedge numbers in a report are 1-based. Control
//! vertices follow the system vertices, so with `n` states the first
//! control vertex is `n + 1`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::Error;
use crate::hypergraph::DirectedHypergraph;
use crate::numeric::RankReport;
use crate::oracle::LieRank;
use crate::structural::{Dilation, StructuralVerdict};

pub const REPORT_VERSION: &str = "polyctrl-report/1";

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|x| x + 1).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystemInfo {
    /// `values`, `pattern` or `hypergraph`.
    pub input: &'static str,
    pub n: usize,
    pub m: usize,
    /// Tensor order; absent for a hypergraph whose tails do not share one length.
    pub k: Option<usize>,
    pub tensor_support: Option<usize>,
    pub control_support: Option<usize>,
    pub hyperedges: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructuralSection {
    pub controllable: bool,
    pub dilation_witness: Option<Vec<usize>>,
    pub inaccessible: Vec<usize>,
}

impl From<&StructuralVerdict> for StructuralSection {
    fn from(v: &StructuralVerdict) -> Self {
        Self {
            controllable: v.controllable,
            dilation_witness: v.dilation_witness.as_deref().map(one_based),
            inaccessible: one_based(&v.inaccessible),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DilationSection {
    pub dilated: bool,
    pub witness: Option<Vec<usize>>,
    /// `[hyperedge, vertex]` pairs of a maximum matching.
    pub matching: Vec<[usize; 2]>,
}

impl From<&Dilation> for DilationSection {
    fn from(d: &Dilation) -> Self {
        Self {
            dilated: d.dilated,
            witness: d.witness.as_deref().map(one_based),
            matching: d.matching.iter().map(|&(e, v)| [e + 1, v + 1]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AccessSection {
    pub accessible: Vec<usize>,
    pub inaccessible: Vec<usize>,
}

impl AccessSection {
    pub fn new(h: &DirectedHypergraph, accessible: &[usize]) -> Self {
        let inaccessible: Vec<usize> = (0..h.n()).filter(|v| !accessible.contains(v)).collect();
        Self {
            accessible: one_based(accessible),
            inaccessible: one_based(&inaccessible),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericSection {
    pub rank: usize,
    pub n: usize,
    pub strongly_controllable: bool,
    pub tol: f64,
    pub iterations: usize,
    pub rank_history: Vec<usize>,
    /// Seed of the sampled realization; absent when the input carried values.
    pub seed: Option<u64>,
}

impl NumericSection {
    pub fn new(r: &RankReport, seed: Option<u64>) -> Self {
        Self {
            rank: r.rank,
            n: r.n,
            strongly_controllable: r.strongly_controllable,
            tol: r.tol,
            iterations: r.iterations,
            rank_history: r.rank_history.clone(),
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LieSection {
    pub rank: usize,
    pub n: usize,
    pub saturated: bool,
    pub depth: usize,
    pub depth_cap: usize,
    pub fields: usize,
    pub seed: Option<u64>,
}

impl LieSection {
    pub fn new(l: &LieRank, n: usize, depth_cap: usize, seed: Option<u64>) -> Self {
        Self {
            rank: l.rank,
            n,
            saturated: l.saturated,
            depth: l.depth,
            depth_cap,
            fields: l.fields,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub n: usize,
    pub m: usize,
    pub tensor_support: usize,
    pub structurally_controllable: bool,
    /// Numeric rank of each sampled realization.
    pub ranks: Vec<usize>,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationSection {
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub agreements: usize,
    pub disagreements: usize,
    pub records: Vec<TrialRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub version: &'static str,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemInfo>,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    pub structural: Option<StructuralSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dilation: Option<DilationSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub access: Option<AccessSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numeric: Option<NumericSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lie: Option<LieSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationSection>,
    /// Wall-clock milliseconds per phase, only with `--timings`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<&'static str, f64>>,
}

impl AnalysisReport {
    pub fn new(command: &'static str) -> Self {
        Self {
            version: REPORT_VERSION,
            command,
            system: None,
            structural: None,
            dilation: None,
            access: None,
            numeric: None,
            lie: None,
            validation: None,
            timings_ms: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let list = |v: &[usize]| {
            if v.is_empty() {
                "-".to_string()
            } else {
                v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
            }
        };
        writeln!(out, "{} ({})", self.command, self.version).unwrap();
        if let Some(s) = &self.system {
            let k = s.k.map_or("-".to_string(), |k| k.to_string());
            writeln!(
                out,
                "  system        n={} m={} k={} input={} hyperedges={}",
                s.n, s.m, k, s.input, s.hyperedges
            )
            .unwrap();
        }
        if let Some(s) = &self.structural {
            writeln!(out, "  controllable  {}", s.controllable).unwrap();
            let w = s.dilation_witness.as_deref().map_or("-".to_string(), list);
            writeln!(out, "  dilation      {w}").unwrap();
            writeln!(out, "  inaccessible  {}", list(&s.inaccessible)).unwrap();
        }
        if let Some(d) = &self.dilation {
            writeln!(out, "  dilated       {}", d.dilated).unwrap();
            let w = d.witness.as_deref().map_or("-".to_string(), list);
            writeln!(out, "  witness       {w}").unwrap();
            let pairs: Vec<String> = d
                .matching
                .iter()
                .map(|[e, v]| format!("e{e}:v{v}"))
                .collect();
            writeln!(out, "  matching      {}", pairs.join(" ")).unwrap();
        }
        if let Some(a) = &self.access {
            writeln!(out, "  accessible    {}", list(&a.accessible)).unwrap();
            writeln!(out, "  inaccessible  {}", list(&a.inaccessible)).unwrap();
        }
        if let Some(r) = &self.numeric {
            writeln!(
                out,
                "  rank          {}/{} (tol {:e}, {} iterations)",
                r.rank, r.n, r.tol, r.iterations
            )
            .unwrap();
            writeln!(out, "  strong        {}", r.strongly_controllable).unwrap();
            if let Some(seed) = r.seed {
                writeln!(out, "  sampled seed  {seed}").unwrap();
            }
        }
        if let Some(l) = &self.lie {
            writeln!(
                out,
                "  lie rank      {}/{} (depth {} of {}, saturated {})",
                l.rank, l.n, l.depth, l.depth_cap, l.saturated
            )
            .unwrap();
        }
        if let Some(v) = &self.validation {
            writeln!(
                out,
                "  trials        {} (seed {}), agree {}, disagree {}",
                v.trials, v.seed, v.agreements, v.disagreements
            )
            .unwrap();
            for r in v.records.iter().filter(|r| !r.agree) {
                writeln!(
                    out,
                    "  mismatch      trial {} structural={} ranks={:?}",
                    r.trial, r.structurally_controllable, r.ranks
                )
                .unwrap();
            }
        }
        if let Some(t) = &self.timings_ms {
            for (phase, ms) in t {
                writeln!(out, "  time          {phase} {ms:.3} ms").unwrap();
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    pub version: &'static str,
    pub error: ErrorBody,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorBody {
    pub kind: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
}

impl ErrorReport {
    pub fn from_error(e: &Error) -> Self {
        let (kind, line, column) = match e {
            Error::Parse {
                kind, line, column, ..
            } => {
                let tag = match kind {
                    crate::error::ParseErrorKind::Syntax => "syntax",
                    crate::error::ParseErrorKind::OutOfRange => "out_of_range",
                    crate::error::ParseErrorKind::Duplicate => "duplicate",
                    crate::error::ParseErrorKind::Parity => "parity",
                    crate::error::ParseErrorKind::Value => "value",
                };
                (tag.to_string(), Some(*line), Some(*column))
            }
            Error::Capacity { .. } => ("capacity".into(), None, None),
            Error::Guard(_) => ("guard".into(), None, None),
            Error::Dimension { .. } => ("dimension".into(), None, None),
            Error::IndexOutOfRange { .. } | Error::IndexArity { .. } => {
                ("out_of_range".into(), None, None)
            }
            Error::ZeroCoefficient { .. } => ("value".into(), None, None),
            Error::DuplicateEntry { .. } => ("duplicate".into(), None, None),
            Error::Hypergraph(_) => ("hypergraph".into(), None, None),
            Error::InvalidSystem(_) => ("invalid_system".into(), None, None),
        };
        Self::new(kind, e.to_string(), line, column)
    }

    pub fn new(kind: String, message: String, line: Option<usize>, column: Option<usize>) -> Self {
        Self {
            version: REPORT_VERSION,
            error: ErrorBody {
                kind,
                message,
                line,
                column,
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("error serializes") + "\n"
    }
}
