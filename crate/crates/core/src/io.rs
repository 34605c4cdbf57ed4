//! Plain-text formats.
//!
//! Chain files hold the state count on the first line followed by `n` rows of
//! `n` whitespace-separated probabilities. Lines whose first non-blank
//! character is `#` are ignored, as are blank lines. A distribution is a
//! single line of `n` numbers. Graph files are edge lists with one `i j` pair
//! per line, 1-indexed.

use std::fmt::Write as _;

use crate::chain::{Distribution, StochasticMatrix};
use crate::error::{Error, Result};
use crate::families::GraphAdjacency;

/// Non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            None
        } else {
            Some((i + 1, trimmed))
        }
    })
}

fn parse_numbers(line_no: usize, line: &str) -> Result<Vec<f64>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<f64>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("not a number: {tok:?}"),
            })
        })
        .collect()
}

/// Parses a chain file, validating rows with `tol`.
///
/// Validation failures are reported against the file line of the offending
/// row.
pub fn parse_chain(text: &str, tol: f64) -> Result<StochasticMatrix> {
    let mut lines = content_lines(text);
    let (first_no, first) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing state count".into(),
    })?;
    let n: usize = first.parse().map_err(|_| Error::Parse {
        line: first_no,
        message: format!("state count must be a positive integer, got {first:?}"),
    })?;
    if n == 0 {
        return Err(Error::Parse {
            line: first_no,
            message: "state count must be positive".into(),
        });
    }
    let mut rows = Vec::with_capacity(n);
    let mut line_numbers = Vec::with_capacity(n);
    for (line_no, line) in lines.by_ref() {
        if rows.len() == n {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected {n} rows, found extra data"),
            });
        }
        let row = parse_numbers(line_no, line)?;
        if row.len() != n {
            return Err(Error::Parse {
                line: line_no,
                message: format!("row {} has {} entries, expected {n}", rows.len() + 1, row.len()),
            });
        }
        rows.push(row);
        line_numbers.push(line_no);
    }
    if rows.len() != n {
        return Err(Error::Parse {
            line: text.lines().count(),
            message: format!("expected {n} rows, found {}", rows.len()),
        });
    }
    StochasticMatrix::validate(&rows, tol).map_err(|err| match err {
        Error::RowSum { row, sum, .. } => Error::Parse {
            line: line_numbers[row],
            message: format!("row {} sums to {sum}, not 1", row + 1),
        },
        Error::NegativeEntry { row, col, value } => Error::Parse {
            line: line_numbers[row],
            message: format!("row {} column {} is invalid: {value}", row + 1, col + 1),
        },
        other => other,
    })
}

/// Formats a chain in the format read by [`parse_chain`].
pub fn format_chain(p: &StochasticMatrix) -> String {
    let mut out = format!("{}\n", p.n());
    for row in p.rows() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

/// Parses a single-line distribution.
pub fn parse_distribution(text: &str, tol: f64) -> Result<Distribution> {
    let mut lines = content_lines(text);
    let (line_no, line) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing distribution line".into(),
    })?;
    if let Some((extra, _)) = lines.next() {
        return Err(Error::Parse {
            line: extra,
            message: "a distribution is a single line".into(),
        });
    }
    let probs = parse_numbers(line_no, line)?;
    Distribution::new(probs, tol)
}

pub fn format_distribution(d: &Distribution) -> String {
    let mut out = String::new();
    for (i, v) in d.probs().iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{v:?}");
    }
    out.push('\n');
    out
}

/// Parses a 1-indexed undirected edge list. The state count is the largest
/// label seen.
pub fn parse_edge_list(text: &str) -> Result<GraphAdjacency> {
    let mut edges = Vec::new();
    for (line_no, line) in content_lines(text) {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(Error::Parse {
                line: line_no,
                message: "expected an `i j` pair".into(),
            });
        }
        let parse = |tok: &str| -> Result<usize> {
            match tok.parse::<usize>() {
                Ok(v) if v >= 1 => Ok(v - 1),
                _ => Err(Error::Parse {
                    line: line_no,
                    message: format!("invalid 1-indexed state {tok:?}"),
                }),
            }
        };
        edges.push((parse(toks[0])?, parse(toks[1])?));
    }
    let n = edges.iter().map(|&(a, b)| a.max(b) + 1).max().ok_or(Error::Parse {
        line: 1,
        message: "edge list is empty".into(),
    })?;
    GraphAdjacency::from_edges(n, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_chain_with_comments() {
        let text = "# two states\n2\n0.5 0.5\n\n# second\n0.25 0.75\n";
        let p = parse_chain(text, 1e-9).unwrap();
        assert_eq!(p.to_rows(), vec![vec![0.5, 0.5], vec![0.25, 0.75]]);
    }

    #[test]
    fn invalid_row_names_its_line() {
        let text = "2\n0.5 0.5\n0.5 0.4\n";
        match parse_chain(text, 1e-9).unwrap_err() {
            Error::Parse { line, message } => {
                assert_eq!(line, 3);
                assert!(message.contains("row 2"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_wrong_row_count() {
        assert!(parse_chain("2\n1 0\n", 1e-9).is_err());
        assert!(parse_chain("1\n1\n1\n", 1e-9).is_err());
        assert!(parse_chain("2\n1 0 0\n0 1\n", 1e-9).is_err());
        assert!(parse_chain("x\n", 1e-9).is_err());
    }

    #[test]
    fn distribution_line() {
        let d = parse_distribution("0.25 0.75\n", 1e-9).unwrap();
        assert_eq!(d.probs(), &[0.25, 0.75]);
        assert!(parse_distribution("0.25 0.7\n", 1e-9).is_err());
        assert!(parse_distribution("0.5 0.5\n0.5 0.5\n", 1e-9).is_err());
    }

    #[test]
    fn edge_list_path() {
        let g = parse_edge_list("1 2\n2 3\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.neighbors(1), &[0, 2]);
        assert!(parse_edge_list("0 1\n").is_err());
        assert!(parse_edge_list("").is_err());
    }
}
