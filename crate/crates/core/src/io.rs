// SPDX-License-Identifier: MPL-2.0
//! Reading and writing graphs as adjacency-matrix CSV or edge lists.
//!
//! Adjacency matrix: `p` rows of `p` comma separated cells, `1` at `(i, j)`
//! for `i → j` and `2` at both `(i, j)` and `(j, i)` for `i — j`.
//!
//! Edge list: one edge per line, `i j d` for `i → j` or `i j u` for `i — j`.
//! Blank lines and `#` comments are skipped. An optional first line `p N`
//! fixes the node count; otherwise it is one more than the largest id.

use std::fmt::Write as _;

use crate::error::{Error, ParseError};
use crate::graph::{validate_cpdag, Graph, GraphKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    AdjMatrix,
    EdgeList,
}

/// Parses and validates a graph.
///
/// With `kind == None` the kind is inferred: any undirected edge makes it a
/// CPDAG. CPDAGs are checked structurally only; use
/// [`validate_cpdag`](crate::graph::validate_cpdag) with `strict` for the full
/// completeness check.
pub fn parse_graph(text: &[u8], format: Format, kind: Option<GraphKind>) -> Result<Graph, Error> {
    parse_graph_with_header(text, format, kind, false)
}

/// Like [`parse_graph`], optionally skipping a header row of an adjacency matrix.
pub fn parse_graph_with_header(
    text: &[u8],
    format: Format,
    kind: Option<GraphKind>,
    header: bool,
) -> Result<Graph, Error> {
    let g = match format {
        Format::AdjMatrix => parse_adjacency_matrix(text, kind, header)?,
        Format::EdgeList => parse_edge_list(text, kind)?,
    };
    if g.kind() == GraphKind::Cpdag {
        validate_cpdag(&g, false)?;
    }
    Ok(g)
}

fn parse_adjacency_matrix(text: &[u8], kind: Option<GraphKind>, header: bool) -> Result<Graph, Error> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(header)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text);
    let mut p = None;
    let mut cells: Vec<u8> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| ParseError::Malformed {
            line: e.position().map_or(0, |pos| pos.line() as usize),
            msg: e.to_string(),
        })?;
        let line = record.position().map_or(0, |pos| pos.line() as usize);
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        let width = *p.get_or_insert(record.len());
        if record.len() != width {
            return Err(ParseError::NotSquare {
                line,
                expected: width,
                found: record.len(),
            }
            .into());
        }
        for (column, field) in record.iter().enumerate() {
            let v = match field {
                "0" => 0,
                "1" => 1,
                "2" => 2,
                other => {
                    return Err(ParseError::IllegalCell {
                        line,
                        column: column + 1,
                        value: other.to_string(),
                    }
                    .into())
                }
            };
            cells.push(v);
        }
    }
    let p = p.ok_or(ParseError::Empty)?;
    let rows = cells.len() / p;
    if rows != p {
        return Err(ParseError::NotSquare {
            line: rows + usize::from(header),
            expected: p,
            found: rows,
        }
        .into());
    }
    Ok(Graph::from_adjacency_matrix(p, &cells, kind)?)
}

fn parse_edge_list(text: &[u8], kind: Option<GraphKind>) -> Result<Graph, Error> {
    let text = std::str::from_utf8(text).map_err(|e| ParseError::Malformed {
        line: 0,
        msg: e.to_string(),
    })?;
    let mut declared_p = None;
    let mut directed = Vec::new();
    let mut undirected = Vec::new();
    let mut max_id = None;
    let mut seen_edge = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let bad = |msg: &str| ParseError::Malformed {
            line,
            msg: msg.to_string(),
        };
        let id = |s: &str| s.parse::<usize>().map_err(|_| bad(&format!("invalid node id {s:?}")));
        match fields.as_slice() {
            ["p", n] => {
                if seen_edge || declared_p.is_some() {
                    return Err(bad("node count must be declared before any edge").into());
                }
                declared_p = Some(id(n)?);
            }
            [a, b, t] => {
                seen_edge = true;
                let (a, b) = (id(a)?, id(b)?);
                max_id = Some(max_id.unwrap_or(0).max(a).max(b));
                match *t {
                    "d" => directed.push((a, b)),
                    "u" => undirected.push((a, b)),
                    other => return Err(bad(&format!("edge type must be d or u, found {other:?}")).into()),
                }
            }
            _ => return Err(bad("expected `i j d`, `i j u` or `p N`").into()),
        }
    }
    let p = match (declared_p, max_id) {
        (Some(p), _) => p,
        (None, Some(m)) => m + 1,
        (None, None) => return Err(ParseError::Empty.into()),
    };
    let kind = kind.unwrap_or(if undirected.is_empty() {
        GraphKind::Dag
    } else {
        GraphKind::Cpdag
    });
    Ok(Graph::from_edges(p, kind, &directed, &undirected)?)
}

/// Serializes as adjacency-matrix CSV (no header).
pub fn to_adjacency_matrix(g: &Graph) -> String {
    let p = g.n_nodes();
    let cells = to_dense_matrix(g);
    let mut out = String::with_capacity(2 * p * p);
    for row in cells.chunks(p.max(1)).take(p) {
        let line: Vec<&str> = row
            .iter()
            .map(|c| match c {
                0 => "0",
                1 => "1",
                _ => "2",
            })
            .collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// Serializes as an edge list with a leading `p N` line.
pub fn to_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "p {}", g.n_nodes()).unwrap();
    for (a, b) in g.directed_edges() {
        writeln!(out, "{a} {b} d").unwrap();
    }
    for (a, b) in g.undirected_edges() {
        writeln!(out, "{a} {b} u").unwrap();
    }
    out
}

/// Row-major dense matrix in the adjacency coding, for callers that hold
/// graphs as integer buffers.
pub fn to_dense_matrix(g: &Graph) -> Vec<u8> {
    let p = g.n_nodes();
    let mut cells = vec![0u8; p * p];
    for (a, b) in g.directed_edges() {
        cells[a * p + b] = 1;
    }
    for (a, b) in g.undirected_edges() {
        cells[a * p + b] = 2;
        cells[b * p + a] = 2;
    }
    cells
}

/// Nonzero cells of the adjacency coding as `(row, col, value)` triplets.
pub fn to_triplets(g: &Graph) -> Vec<(usize, usize, u8)> {
    let mut out: Vec<(usize, usize, u8)> = g.directed_edges().map(|(a, b)| (a, b, 1)).collect();
    for (a, b) in g.undirected_edges() {
        out.push((a, b, 2));
        out.push((b, a, 2));
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::ValidationError;

    #[test]
    fn smallest_matrices() {
        let g = parse_graph(b"0,1\n0,0", Format::AdjMatrix, Some(GraphKind::Dag)).unwrap();
        assert_eq!(g.n_nodes(), 2);
        assert_eq!(g.directed_edges().collect::<Vec<_>>(), vec![(0, 1)]);

        let g = parse_graph(b"0,2\n2,0", Format::AdjMatrix, Some(GraphKind::Cpdag)).unwrap();
        assert_eq!(g.undirected_edges().collect::<Vec<_>>(), vec![(0, 1)]);

        let err = parse_graph(b"0,1\n1,0", Format::AdjMatrix, Some(GraphKind::Dag)).unwrap_err();
        assert!(matches!(err, Error::Validation(ValidationError::AsymmetricDirected(0, 1))));
    }

    #[test]
    fn matrix_errors_carry_positions() {
        let err = parse_graph(b"0,1,0\n0,0\n0,0,0", Format::AdjMatrix, None).unwrap_err();
        assert!(matches!(err, Error::Parse(ParseError::NotSquare { line: 2, expected: 3, found: 2 })));
        let err = parse_graph(b"0,3\n0,0", Format::AdjMatrix, None).unwrap_err();
        assert!(matches!(err, Error::Parse(ParseError::IllegalCell { line: 1, column: 2, .. })));
        let err = parse_graph(b"0,1\n0,0\n0,0", Format::AdjMatrix, None).unwrap_err();
        assert!(matches!(err, Error::Parse(ParseError::NotSquare { .. })));
        assert!(matches!(
            parse_graph(b"", Format::AdjMatrix, None).unwrap_err(),
            Error::Parse(ParseError::Empty)
        ));
    }

    #[test]
    fn matrix_header_is_skipped_when_flagged() {
        let g = parse_graph_with_header(b"a,b\n0,1\n0,0\n", Format::AdjMatrix, None, true).unwrap();
        assert_eq!(g.n_edges(), 1);
    }

    #[test]
    fn edge_list() {
        let text = b"# comment\np 4\n0 1 d\n2 3 u # trailing\n\n";
        let g = parse_graph(text, Format::EdgeList, None).unwrap();
        assert_eq!(g.n_nodes(), 4);
        assert_eq!(g.kind(), GraphKind::Cpdag);
        let g = parse_graph(b"0 2 d\n", Format::EdgeList, None).unwrap();
        assert_eq!(g.n_nodes(), 3);
        assert!(parse_graph(b"0 1 x\n", Format::EdgeList, None).is_err());
        assert!(parse_graph(b"0 1 d\np 3\n", Format::EdgeList, None).is_err());
        assert!(parse_graph(b"p 2\n0 0 d\n", Format::EdgeList, None).is_err());
    }

    #[test]
    fn round_trips() {
        let g = Graph::from_edges(5, GraphKind::Cpdag, &[(0, 2), (1, 2)], &[(3, 4)]).unwrap();
        let a = parse_graph(to_adjacency_matrix(&g).as_bytes(), Format::AdjMatrix, Some(GraphKind::Cpdag)).unwrap();
        assert_eq!(a, g);
        let e = parse_graph(to_edge_list(&g).as_bytes(), Format::EdgeList, Some(GraphKind::Cpdag)).unwrap();
        assert_eq!(e, g);
        let d = Graph::from_adjacency_matrix(5, &to_dense_matrix(&g), Some(GraphKind::Cpdag)).unwrap();
        assert_eq!(d, g);
        let t = Graph::from_triplets(5, to_triplets(&g), Some(GraphKind::Cpdag)).unwrap();
        assert_eq!(t, g);
    }
}
