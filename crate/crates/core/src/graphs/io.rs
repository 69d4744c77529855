//! Text formats.
//!
//! Edge list: first line `n m`, then `m` lines `u v` (1-based).
//! Adjacency matrix: `n` lines of `n` space-separated `0`/`1`.
//! Blank lines and lines starting with `#` are ignored in both.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use super::{Graph, GraphError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GraphFormat {
    /// Square 0/1 content is read as a matrix, anything else as an edge list.
    #[default]
    Auto,
    EdgeList,
    AdjacencyMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("{0}")]
    Structure(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

fn at(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Line {
        line,
        message: message.into(),
    }
}

/// Non-blank, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> Vec<(usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(i, l)| (i, l.split_whitespace().collect()))
        .collect()
}

fn looks_like_matrix(lines: &[(usize, Vec<&str>)]) -> bool {
    !lines.is_empty()
        && lines.iter().all(|(_, toks)| toks.len() == lines.len())
        && lines
            .iter()
            .flat_map(|(_, t)| t)
            .all(|t| *t == "0" || *t == "1")
}

pub fn parse_graph(text: &str, format: GraphFormat) -> Result<Graph, ParseError> {
    let lines = content_lines(text);
    let format = match format {
        GraphFormat::Auto if looks_like_matrix(&lines) => GraphFormat::AdjacencyMatrix,
        GraphFormat::Auto => GraphFormat::EdgeList,
        f => f,
    };
    match format {
        GraphFormat::AdjacencyMatrix => parse_matrix(&lines),
        _ => parse_edge_list(&lines),
    }
}

pub fn read_graph(path: &Path, format: GraphFormat) -> Result<Graph, ParseError> {
    let text = std::fs::read_to_string(path).map_err(|e| ParseError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_graph(&text, format)
}

fn parse_number(line: usize, tok: &str, what: &str) -> Result<usize, ParseError> {
    tok.parse()
        .map_err(|_| at(line, format!("expected {what}, found {tok:?}")))
}

fn parse_edge_list(lines: &[(usize, Vec<&str>)]) -> Result<Graph, ParseError> {
    let Some((header_line, header)) = lines.first() else {
        return Err(ParseError::Structure(
            "empty input: expected header \"n m\"".into(),
        ));
    };
    if header.len() != 2 {
        return Err(at(*header_line, "header must be \"n m\""));
    }
    let n = parse_number(*header_line, header[0], "vertex count")?;
    let m = parse_number(*header_line, header[1], "edge count")?;
    if n == 0 {
        return Err(at(*header_line, "vertex count must be positive"));
    }
    let body = &lines[1..];
    if body.len() != m {
        return Err(ParseError::Structure(format!(
            "header declares {m} edges, found {} edge lines",
            body.len()
        )));
    }
    let mut g = Graph::empty(n);
    for (line, toks) in body {
        if toks.len() != 2 {
            return Err(at(*line, "edge line must be \"u v\""));
        }
        let u = parse_number(*line, toks[0], "vertex")?;
        let v = parse_number(*line, toks[1], "vertex")?;
        if g.has_edge(u, v) {
            return Err(at(*line, format!("duplicate edge {u}-{v}")));
        }
        g.add_edge(u, v).map_err(|e| at(*line, e.to_string()))?;
    }
    Ok(g)
}

fn parse_matrix(lines: &[(usize, Vec<&str>)]) -> Result<Graph, ParseError> {
    let n = lines.len();
    if n == 0 {
        return Err(ParseError::Structure("empty adjacency matrix".into()));
    }
    let mut rows = Vec::with_capacity(n);
    for (line, toks) in lines {
        if toks.len() != n {
            return Err(at(
                *line,
                format!("row has {} entries, expected {n}", toks.len()),
            ));
        }
        let row = toks
            .iter()
            .map(|t| match *t {
                "0" => Ok(false),
                "1" => Ok(true),
                other => Err(at(*line, format!("entry {other:?} is not 0 or 1"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Graph::from_adjacency(&rows).map_err(|e| match e {
        GraphError::SelfLoop(v) | GraphError::Asymmetric(v, _) => at(lines[v - 1].0, e.to_string()),
        other => ParseError::Structure(other.to_string()),
    })
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn write_adjacency_matrix(g: &Graph) -> String {
    let mut out = String::new();
    for row in g.adjacency_rows() {
        let cells: Vec<&str> = row.iter().map(|&b| if b { "1" } else { "0" }).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::from_edges(4, [(1, 2), (2, 3), (3, 4), (4, 1)]).unwrap();
        let text = write_edge_list(&g);
        assert_eq!(text, "4 4\n1 2\n1 4\n2 3\n3 4\n");
        assert_eq!(parse_graph(&text, GraphFormat::Auto).unwrap(), g);
    }

    #[test]
    fn matrix_autodetect() {
        let g = parse_graph("0 1 1\n1 0 0\n1 0 0\n", GraphFormat::Auto).unwrap();
        assert_eq!(g, Graph::from_edges(3, [(1, 2), (1, 3)]).unwrap());
        // Two-vertex matrix vs. a one-edge list: "2 1" is not a 0/1 row.
        let g = parse_graph("0 1\n1 0\n", GraphFormat::Auto).unwrap();
        assert!(g.has_edge(1, 2));
        let g = parse_graph("2 1\n1 2\n", GraphFormat::Auto).unwrap();
        assert!(g.has_edge(1, 2));
        assert_eq!(write_adjacency_matrix(&g), "0 1\n1 0\n");
    }

    #[test]
    fn diagnostics_carry_line_numbers() {
        let err = parse_graph("# c\n3 2\n1 2\n1 x\n", GraphFormat::EdgeList).unwrap_err();
        assert_eq!(err, at(4, "expected vertex, found \"x\""));
        let err = parse_graph("3 1\n2 2\n", GraphFormat::EdgeList).unwrap_err();
        assert!(matches!(err, ParseError::Line { line: 2, .. }));
        let err = parse_graph("3 1\n1 4\n", GraphFormat::EdgeList).unwrap_err();
        assert!(matches!(err, ParseError::Line { line: 2, .. }));
        let err = parse_graph("3 2\n1 2\n2 1\n", GraphFormat::EdgeList).unwrap_err();
        assert!(matches!(err, ParseError::Line { line: 3, .. }));
        let err = parse_graph("3 2\n1 2\n", GraphFormat::EdgeList).unwrap_err();
        assert!(matches!(err, ParseError::Structure(_)));
        let err = parse_graph("0 1\n0 0\n", GraphFormat::AdjacencyMatrix).unwrap_err();
        assert!(matches!(err, ParseError::Line { line: 1, .. }));
        let err = parse_graph("1 0\n0 0\n", GraphFormat::AdjacencyMatrix).unwrap_err();
        assert!(matches!(err, ParseError::Line { line: 1, .. }));
    }
}
