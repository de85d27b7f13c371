//! Text formats: edge lists, rotation systems and vertex functions.
//!
//! Edge list: first non-comment line `n <N>`, then `i j [w]` per edge.
//! Rotation: one line `v: w1 w2 ... wd` per vertex, neighbours in cyclic order.
//! Function: one real per line. Lines starting with `#` and blank lines are
//! ignored everywhere.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::surface::Rotation;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn token<T: std::str::FromStr>(line: usize, tok: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("cannot parse `{tok}`")))
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "empty edge list"))?;
    let n: usize = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["n", count] => token(hline, count)?,
        _ => return Err(parse_err(hline, "expected header `n <N>`")),
    };
    let mut pairs = Vec::new();
    let mut weights = Vec::new();
    let mut line_of = Vec::new();
    for (ln, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        let (i, j, w) = match toks.as_slice() {
            [i, j] => (token(ln, i)?, token(ln, j)?, 1.0),
            [i, j, w] => (token(ln, i)?, token(ln, j)?, token(ln, w)?),
            _ => return Err(parse_err(ln, "expected `i j [w]`")),
        };
        pairs.push((i, j));
        weights.push(w);
        line_of.push(ln);
    }
    Graph::new(n, &pairs, Some(&weights)).map_err(|e| {
        let index = match &e {
            Error::SelfLoop { index, .. }
            | Error::DuplicateEdge { index, .. }
            | Error::VertexOutOfRange { index, .. }
            | Error::NonPositiveWeight { index, .. } => Some(*index),
            _ => None,
        };
        match index {
            Some(k) => parse_err(line_of[k], e.to_string()),
            None => e,
        }
    })
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.n_vertices());
    for e in g.edges() {
        out.push_str(&format!("{} {} {}\n", e.u, e.v, e.weight));
    }
    out
}

pub fn parse_rotation(text: &str, n: usize) -> Result<Rotation> {
    let mut rot: Vec<Option<Vec<usize>>> = vec![None; n];
    for (ln, l) in content_lines(text) {
        let (head, rest) = l
            .split_once(':')
            .ok_or_else(|| parse_err(ln, "expected `v: w1 w2 ...`"))?;
        let v: usize = token(ln, head.trim())?;
        if v >= n {
            return Err(parse_err(ln, format!("vertex {v} out of range 0..{n}")));
        }
        if rot[v].is_some() {
            return Err(parse_err(ln, format!("vertex {v} listed twice")));
        }
        rot[v] = Some(rest.split_whitespace().map(|t| token(ln, t)).collect::<Result<_>>()?);
    }
    rot.into_iter()
        .enumerate()
        .map(|(v, r)| {
            r.ok_or_else(|| Error::MalformedRotation {
                vertex: v,
                reason: "missing from rotation file".into(),
            })
        })
        .collect::<Result<_>>()
        .map(Rotation)
}

pub fn parse_function(text: &str) -> Result<Vec<f64>> {
    content_lines(text).map(|(ln, l)| token(ln, l)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_round_trip() {
        let g = parse_edge_list("# triangle\nn 3\n0 1\n1 2 2.5\n\n2 0\n").unwrap();
        assert_eq!(g.n_edges(), 3);
        assert_eq!(g.edges()[1].weight, 2.5);
        assert_eq!(parse_edge_list(&write_edge_list(&g)).unwrap(), g);
    }

    #[test]
    fn edge_list_errors_carry_lines() {
        let e = parse_edge_list("n 3\n0 1\n1 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }));
        let e = parse_edge_list("n 3\n0 x\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        assert!(parse_edge_list("3\n").is_err());
        assert!(parse_edge_list("").is_err());
    }

    #[test]
    fn rotation_file() {
        let r = parse_rotation("0: 1 2\n1: 2 0\n2: 0 1\n", 3).unwrap();
        assert_eq!(r.order(1), &[2, 0]);
        assert!(parse_rotation("0: 1 2\n", 3).is_err());
        assert!(parse_rotation("0 1 2\n", 3).is_err());
    }

    #[test]
    fn function_file() {
        assert_eq!(parse_function("1\n-0.5\n# c\n2e-3\n").unwrap(), vec![1.0, -0.5, 0.002]);
        assert!(matches!(parse_function("1\nx\n"), Err(Error::Parse { line: 2, .. })));
    }
}
