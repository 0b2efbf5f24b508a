//! Plain-text system files.
//!
//! ```text
//! # x2' = x1^3, x1' = u
//! tensor 4 2
//! 1 1 1 2 1.0
//! matrix 2 1
//! 1 1 1.0
//! ```
//!
//! Indices are 1-based. The value column is optional; a file without
//! values describes a sparsity pattern. A file may instead describe the
//! hypergraph directly:
//!
//! ```text
//! hypergraph 2 1
//! 3 -> 1
//! 1,1,1 -> 2
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, ParseErrorKind, Result};
use crate::hypergraph::{DirectedHypergraph, Hyperedge};
use crate::system::{Polysystem, SparsityPattern};
use crate::tensor::{DenseMatrix, SparseTensor};

#[derive(Debug, Clone, PartialEq)]
pub enum ParsedInput {
    System(Polysystem),
    Pattern(SparsityPattern),
    Hypergraph(DirectedHypergraph),
}

impl ParsedInput {
    pub fn kind(&self) -> &'static str {
        match self {
            ParsedInput::System(_) => "values",
            ParsedInput::Pattern(_) => "pattern",
            ParsedInput::Hypergraph(_) => "hypergraph",
        }
    }
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (pos, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(pos),
            (true, Some(s)) => {
                out.push(Token {
                    text: &line[s..pos],
                    column: s + 1,
                });
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &line[s..],
            column: s + 1,
        });
    }
    out
}

fn err(kind: ParseErrorKind, line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        kind,
        line,
        column,
        message: message.into(),
    }
}

fn parse_count(tok: &Token<'_>, line: usize, what: &str) -> Result<usize> {
    tok.text.parse::<usize>().map_err(|_| {
        err(
            ParseErrorKind::Syntax,
            line,
            tok.column,
            format!("expected {what}, found '{}'", tok.text),
        )
    })
}

/// Parses a 1-based index in `1..=bound` and returns it 0-based.
fn parse_index(text: &str, column: usize, line: usize, bound: usize) -> Result<usize> {
    let v = text.parse::<usize>().map_err(|_| {
        err(
            ParseErrorKind::Syntax,
            line,
            column,
            format!("expected an index, found '{text}'"),
        )
    })?;
    if v == 0 || v > bound {
        return Err(err(
            ParseErrorKind::OutOfRange,
            line,
            column,
            format!("index {v} outside 1..={bound}"),
        ));
    }
    Ok(v - 1)
}

fn parse_value(tok: &Token<'_>, line: usize) -> Result<f64> {
    let v = tok.text.parse::<f64>().map_err(|_| {
        err(
            ParseErrorKind::Syntax,
            line,
            tok.column,
            format!("expected a number, found '{}'", tok.text),
        )
    })?;
    if !v.is_finite() {
        return Err(err(
            ParseErrorKind::Value,
            line,
            tok.column,
            "value must be finite",
        ));
    }
    if v == 0.0 {
        return Err(err(
            ParseErrorKind::Value,
            line,
            tok.column,
            "exact-zero coefficient; omit the entry instead",
        ));
    }
    Ok(v)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Tensor,
    Matrix,
    Hypergraph,
}

/// Parses a system, pattern, or hypergraph file.
pub fn parse_system(text: &str) -> Result<ParsedInput> {
    let mut section = Section::None;
    let mut tensor_header: Option<(usize, usize)> = None;
    let mut matrix_header: Option<(usize, usize)> = None;
    let mut hyper_header: Option<(usize, usize)> = None;
    let mut tensor_entries: Vec<(Vec<usize>, Option<f64>)> = Vec::new();
    let mut matrix_entries: Vec<((usize, usize), Option<f64>)> = Vec::new();
    let mut seen_tensor = BTreeSet::new();
    let mut seen_matrix = BTreeSet::new();
    let mut edges: Vec<Hyperedge> = Vec::new();
    let mut seen_tails = BTreeSet::new();
    let mut valued: Option<bool> = None;
    let mut last_line = 0;

    for (number, raw) in text.lines().enumerate() {
        let line = number + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        let Some(first) = toks.first() else { continue };

        match first.text {
            "tensor" | "matrix" | "hypergraph" => {
                if toks.len() != 3 {
                    return Err(err(
                        ParseErrorKind::Syntax,
                        line,
                        first.column,
                        format!("header '{}' takes two integers", first.text),
                    ));
                }
                let a = parse_count(&toks[1], line, "an integer")?;
                let b = parse_count(&toks[2], line, "an integer")?;
                match first.text {
                    "tensor" => {
                        if tensor_header.is_some() || hyper_header.is_some() {
                            return Err(err(
                                ParseErrorKind::Syntax,
                                line,
                                1,
                                "unexpected tensor section",
                            ));
                        }
                        if a < 2 || b < 1 {
                            return Err(err(
                                ParseErrorKind::Syntax,
                                line,
                                toks[1].column,
                                "tensor needs order >= 2 and dimension >= 1",
                            ));
                        }
                        if !a.is_multiple_of(2) {
                            return Err(err(
                                ParseErrorKind::Parity,
                                line,
                                toks[1].column,
                                format!("tensor order {a} gives an even-degree polynomial; order must be even"),
                            ));
                        }
                        if let Some((n, _)) = matrix_header {
                            if n != b {
                                return Err(err(
                                    ParseErrorKind::Syntax,
                                    line,
                                    toks[2].column,
                                    format!("tensor dimension {b} differs from matrix rows {n}"),
                                ));
                            }
                        }
                        tensor_header = Some((a, b));
                        section = Section::Tensor;
                    }
                    "matrix" => {
                        if matrix_header.is_some() || hyper_header.is_some() {
                            return Err(err(
                                ParseErrorKind::Syntax,
                                line,
                                1,
                                "unexpected matrix section",
                            ));
                        }
                        if b < 1 {
                            return Err(err(
                                ParseErrorKind::Syntax,
                                line,
                                toks[2].column,
                                "need at least one input",
                            ));
                        }
                        if let Some((_, n)) = tensor_header {
                            if n != a {
                                return Err(err(
                                    ParseErrorKind::Syntax,
                                    line,
                                    toks[1].column,
                                    format!("matrix rows {a} differ from tensor dimension {n}"),
                                ));
                            }
                        }
                        matrix_header = Some((a, b));
                        section = Section::Matrix;
                    }
                    _ => {
                        if tensor_header.is_some()
                            || matrix_header.is_some()
                            || hyper_header.is_some()
                        {
                            return Err(err(
                                ParseErrorKind::Syntax,
                                line,
                                1,
                                "unexpected hypergraph section",
                            ));
                        }
                        hyper_header = Some((a, b));
                        section = Section::Hypergraph;
                    }
                }
            }
            _ => match section {
                Section::None => {
                    return Err(err(
                        ParseErrorKind::Syntax,
                        line,
                        first.column,
                        "entry before any 'tensor', 'matrix' or 'hypergraph' header",
                    ))
                }
                Section::Tensor => {
                    let (k, n) = tensor_header.expect("section implies header");
                    if toks.len() != k && toks.len() != k + 1 {
                        return Err(err(
                            ParseErrorKind::Syntax,
                            line,
                            first.column,
                            format!("tensor entry needs {k} indices and an optional value"),
                        ));
                    }
                    let index = toks[..k]
                        .iter()
                        .map(|t| parse_index(t.text, t.column, line, n))
                        .collect::<Result<Vec<_>>>()?;
                    let value = toks.get(k).map(|t| parse_value(t, line)).transpose()?;
                    check_valued(&mut valued, value.is_some(), line, first.column)?;
                    if !seen_tensor.insert(index.clone()) {
                        return Err(err(
                            ParseErrorKind::Duplicate,
                            line,
                            first.column,
                            "multi-index already listed",
                        ));
                    }
                    tensor_entries.push((index, value));
                }
                Section::Matrix => {
                    let (n, m) = matrix_header.expect("section implies header");
                    if toks.len() != 2 && toks.len() != 3 {
                        return Err(err(
                            ParseErrorKind::Syntax,
                            line,
                            first.column,
                            "matrix entry needs row, column and an optional value",
                        ));
                    }
                    let row = parse_index(toks[0].text, toks[0].column, line, n)?;
                    let col = parse_index(toks[1].text, toks[1].column, line, m)?;
                    let value = toks.get(2).map(|t| parse_value(t, line)).transpose()?;
                    check_valued(&mut valued, value.is_some(), line, first.column)?;
                    if !seen_matrix.insert((row, col)) {
                        return Err(err(
                            ParseErrorKind::Duplicate,
                            line,
                            first.column,
                            "matrix entry already listed",
                        ));
                    }
                    matrix_entries.push(((row, col), value));
                }
                Section::Hypergraph => {
                    let (n, m) = hyper_header.expect("section implies header");
                    let edge = parse_hyperedge(content, line, n, m)?;
                    if !seen_tails.insert(edge.tail().to_vec()) {
                        return Err(err(
                            ParseErrorKind::Duplicate,
                            line,
                            first.column,
                            "hypertail already used by another hyperedge",
                        ));
                    }
                    edges.push(edge);
                }
            },
        }
    }

    if let Some((n, m)) = hyper_header {
        return Ok(ParsedInput::Hypergraph(DirectedHypergraph::new(
            n, m, edges,
        )?));
    }
    let Some((k, n)) = tensor_header else {
        return Err(err(
            ParseErrorKind::Syntax,
            last_line + 1,
            1,
            "missing 'tensor k n' section",
        ));
    };
    let Some((_, m)) = matrix_header else {
        return Err(err(
            ParseErrorKind::Syntax,
            last_line + 1,
            1,
            "missing 'matrix n m' section",
        ));
    };

    if valued == Some(true) {
        let tensor = SparseTensor::from_entries(
            k,
            n,
            tensor_entries
                .into_iter()
                .map(|(i, v)| (i, v.expect("valued"))),
        )?;
        let mut control = DenseMatrix::zeros(n, m);
        for ((i, j), v) in matrix_entries {
            control[(i, j)] = v.expect("valued");
        }
        Ok(ParsedInput::System(Polysystem::checked(tensor, control)?))
    } else {
        Ok(ParsedInput::Pattern(SparsityPattern::new(
            k,
            n,
            m,
            tensor_entries.into_iter().map(|(i, _)| i),
            matrix_entries.into_iter().map(|(c, _)| c),
        )?))
    }
}

fn check_valued(valued: &mut Option<bool>, has: bool, line: usize, column: usize) -> Result<()> {
    match valued {
        Some(v) if *v != has => Err(err(
            ParseErrorKind::Syntax,
            line,
            column,
            "either every entry carries a value or none does",
        )),
        _ => {
            *valued = Some(has);
            Ok(())
        }
    }
}

fn parse_vertex_list(text: &str, column: usize, line: usize, bound: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in text.split(',') {
        let trimmed = part.trim();
        let lead = part.len() - part.trim_start().len();
        if trimmed.is_empty() {
            return Err(err(
                ParseErrorKind::Syntax,
                line,
                column + offset,
                "empty vertex in list",
            ));
        }
        out.push(parse_index(trimmed, column + offset + lead, line, bound)?);
        offset += part.len() + 1;
    }
    Ok(out)
}

fn parse_hyperedge(content: &str, line: usize, n: usize, m: usize) -> Result<Hyperedge> {
    let Some(arrow) = content.find("->") else {
        return Err(err(
            ParseErrorKind::Syntax,
            line,
            1,
            "expected 'tail -> head'",
        ));
    };
    let (tail_text, head_text) = (&content[..arrow], &content[arrow + 2..]);
    let tail = parse_vertex_list(tail_text.trim_end(), 1, line, n + m)?;
    let head_col = arrow + 3;
    let head = parse_vertex_list(head_text, head_col, line, n + m)?;
    if let Some(&v) = head.iter().find(|&&v| v >= n) {
        return Err(err(
            ParseErrorKind::OutOfRange,
            line,
            head_col,
            format!("head vertex {} is a control vertex", v + 1),
        ));
    }
    let distinct: BTreeSet<usize> = head.iter().copied().collect();
    if distinct.len() != head.len() {
        return Err(err(
            ParseErrorKind::Duplicate,
            line,
            head_col,
            "head lists a vertex twice",
        ));
    }
    Ok(Hyperedge::new(tail, head))
}

/// Writes a system with values; reparses to an identical system.
pub fn format_system(p: &Polysystem) -> String {
    let mut out = String::new();
    writeln!(out, "tensor {} {}", p.k(), p.n()).unwrap();
    for (index, value) in p.tensor().entries() {
        for i in index {
            write!(out, "{} ", i + 1).unwrap();
        }
        writeln!(out, "{value}").unwrap();
    }
    writeln!(out, "matrix {} {}", p.n(), p.m()).unwrap();
    for i in 0..p.n() {
        for j in 0..p.m() {
            let v = p.control()[(i, j)];
            if v != 0.0 {
                writeln!(out, "{} {} {v}", i + 1, j + 1).unwrap();
            }
        }
    }
    out
}

/// Writes a pattern without values.
pub fn format_pattern(p: &SparsityPattern) -> String {
    let mut out = String::new();
    writeln!(out, "tensor {} {}", p.order(), p.dim()).unwrap();
    for index in p.tensor_support() {
        let cols: Vec<String> = index.iter().map(|i| (i + 1).to_string()).collect();
        writeln!(out, "{}", cols.join(" ")).unwrap();
    }
    writeln!(out, "matrix {} {}", p.dim(), p.inputs()).unwrap();
    for &(i, j) in p.control_support() {
        writeln!(out, "{} {}", i + 1, j + 1).unwrap();
    }
    out
}

pub fn format_hypergraph(h: &DirectedHypergraph) -> String {
    format!("{h}\n")
}
