//! Plain-text matrix and vector formats.
//!
//! Matrix files:
//!
//! ```text
//! tropical 3
//! # arcs: row col weight, -inf entries are simply omitted
//! 0 1 2.5
//! 1 2 -1
//! 2 0 0
//! ```
//!
//! Vector files use the header `vec <n>` followed by `<i> <w>` lines;
//! indices not listed are the semiring zero -inf. Blank lines and `#`
//! comments are allowed anywhere. Weights are written back via the shortest
//! `f64` round-trip representation, so integer-weight data survives a
//! write/read cycle bit for bit.

use crate::error::Error;
use crate::matrix::TropMatrix;
use crate::scalar::Trop;
use std::fmt::Write as _;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(idx, raw)| {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            None
        } else {
            Some((idx + 1, line))
        }
    })
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Parses the `tropical <n>` matrix format.
pub fn parse_matrix(text: &str) -> Result<TropMatrix, Error> {
    let mut lines = content_lines(text);
    let (line_no, header) = lines
        .next()
        .ok_or_else(|| parse_err(0, "empty input: expected 'tropical <n>' header"))?;
    let n = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["tropical", dim] => dim
            .parse::<usize>()
            .map_err(|_| parse_err(line_no, format!("bad dimension '{dim}'")))?,
        _ => {
            return Err(parse_err(
                line_no,
                format!("expected 'tropical <n>' header, got '{header}'"),
            ))
        }
    };
    let mut triples: Vec<(usize, usize, Trop)> = Vec::new();
    for (line_no, line) in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(parse_err(
                line_no,
                format!("expected 'row col weight', got '{line}'"),
            ));
        }
        let i = fields[0]
            .parse::<usize>()
            .map_err(|_| parse_err(line_no, format!("bad row index '{}'", fields[0])))?;
        let j = fields[1]
            .parse::<usize>()
            .map_err(|_| parse_err(line_no, format!("bad col index '{}'", fields[1])))?;
        let w = fields[2]
            .parse::<Trop>()
            .map_err(|e| parse_err(line_no, e.to_string()))?;
        if i >= n || j >= n {
            return Err(parse_err(
                line_no,
                format!("arc ({i}, {j}) outside matrix of dimension {n}"),
            ));
        }
        triples.push((i, j, w));
    }
    TropMatrix::from_triples(n, triples)
}

/// Writes a matrix in the `tropical <n>` format.
pub fn write_matrix(a: &TropMatrix) -> String {
    let mut out = format!("tropical {}\n", a.n());
    for (i, j, w) in a.entries() {
        writeln!(out, "{i} {j} {w}").unwrap();
    }
    out
}

/// Parses the `vec <n>` vector format.
pub fn parse_vector(text: &str) -> Result<Vec<Trop>, Error> {
    let mut lines = content_lines(text);
    let (line_no, header) = lines
        .next()
        .ok_or_else(|| parse_err(0, "empty input: expected 'vec <n>' header"))?;
    let n = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["vec", dim] => dim
            .parse::<usize>()
            .map_err(|_| parse_err(line_no, format!("bad dimension '{dim}'")))?,
        _ => {
            return Err(parse_err(
                line_no,
                format!("expected 'vec <n>' header, got '{header}'"),
            ))
        }
    };
    let mut values = vec![Trop::ZERO; n];
    for (line_no, line) in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(parse_err(
                line_no,
                format!("expected 'index value', got '{line}'"),
            ));
        }
        let i = fields[0]
            .parse::<usize>()
            .map_err(|_| parse_err(line_no, format!("bad index '{}'", fields[0])))?;
        if i >= n {
            return Err(parse_err(
                line_no,
                format!("index {i} outside vector of dimension {n}"),
            ));
        }
        let w = fields[1]
            .parse::<Trop>()
            .map_err(|e| parse_err(line_no, e.to_string()))?;
        values[i] = values[i].oplus(w);
    }
    Ok(values)
}

/// Writes a vector in the `vec <n>` format; -inf entries are omitted.
pub fn write_vector(u: &[Trop]) -> String {
    let mut out = format!("vec {}\n", u.len());
    for (i, w) in u.iter().enumerate() {
        if !w.is_zero() {
            writeln!(out, "{i} {w}").unwrap();
        }
    }
    out
}
