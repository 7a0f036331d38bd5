//! The `tns v1` text format.
//!
//! ```text
//! tns v1
//! order 3 dim 2
//! # comment
//! 1 2 2 5.0
//! 2 1 1        <- value defaults to 1
//! ```
//!
//! Indices are 1-based. Tokens are whitespace separated, `#` starts a comment
//! and both LF and CRLF line endings are accepted. Duplicate index tuples are
//! summed.

use std::fmt::Write as _;

use thiserror::Error;

use crate::tensor::{Tensor, TensorError};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("missing `tns v1` header")]
    MissingMagic,
    #[error("expected `tns v1`, found `{0}`")]
    BadMagic(String),
    #[error("missing `order <m> dim <n>` line")]
    MissingShape,
    #[error("malformed shape line `{0}`, expected `order <m> dim <n>`")]
    BadShape(String),
    #[error("order must be at least 2, got {0}")]
    OrderTooSmall(usize),
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("expected {order} indices and an optional value, found {found} tokens")]
    TokenCount { order: usize, found: usize },
    #[error("malformed index `{0}`")]
    BadIndex(String),
    #[error("index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("malformed value `{0}`")]
    BadNumber(String),
    #[error("value {0} must be finite and strictly positive")]
    NonPositive(f64),
    #[error("{0}")]
    Tensor(TensorError),
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

/// Parses a TNS document.
pub fn parse_tensor(text: &str) -> Result<Tensor, ParseError> {
    let mut lines = text
        .split('\n')
        .enumerate()
        .map(|(i, raw)| {
            let raw = raw.strip_suffix('\r').unwrap_or(raw);
            let content = raw.split('#').next().unwrap_or("").trim();
            (i + 1, content)
        })
        .filter(|(_, content)| !content.is_empty());

    let (magic_line, magic) = lines
        .next()
        .ok_or_else(|| err(1, ParseErrorKind::MissingMagic))?;
    if magic.split_whitespace().collect::<Vec<_>>() != ["tns", "v1"] {
        return Err(err(magic_line, ParseErrorKind::BadMagic(magic.to_string())));
    }

    let (shape_line, shape) = lines
        .next()
        .ok_or_else(|| err(magic_line + 1, ParseErrorKind::MissingShape))?;
    let (order, dim) = parse_shape(shape)
        .ok_or_else(|| err(shape_line, ParseErrorKind::BadShape(shape.to_string())))?;
    if order < 2 {
        return Err(err(shape_line, ParseErrorKind::OrderTooSmall(order)));
    }
    if dim == 0 {
        return Err(err(shape_line, ParseErrorKind::ZeroDimension));
    }

    let mut entries = Vec::new();
    for (line, content) in lines {
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.len() != order && tokens.len() != order + 1 {
            return Err(err(
                line,
                ParseErrorKind::TokenCount {
                    order,
                    found: tokens.len(),
                },
            ));
        }
        let mut index = Vec::with_capacity(order);
        for tok in &tokens[..order] {
            let i: usize = tok
                .parse()
                .map_err(|_| err(line, ParseErrorKind::BadIndex(tok.to_string())))?;
            if i == 0 || i > dim {
                return Err(err(line, ParseErrorKind::IndexOutOfRange { index: i, dim }));
            }
            index.push(i - 1);
        }
        let value = match tokens.get(order) {
            Some(tok) => tok
                .parse::<f64>()
                .map_err(|_| err(line, ParseErrorKind::BadNumber(tok.to_string())))?,
            None => 1.0,
        };
        if !(value.is_finite() && value > 0.0) {
            return Err(err(line, ParseErrorKind::NonPositive(value)));
        }
        entries.push((index, value));
    }
    let last_line = text.split('\n').count();
    Tensor::from_entries(order, dim, entries).map_err(|e| err(last_line, ParseErrorKind::Tensor(e)))
}

fn parse_shape(line: &str) -> Option<(usize, usize)> {
    match line.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["order", m, "dim", n] => Some((m.parse().ok()?, n.parse().ok()?)),
        _ => None,
    }
}

/// Serializes a tensor; entries are written in lexicographic index order,
/// values in shortest round-trip form.
pub fn write_tensor(tensor: &Tensor) -> String {
    let mut out = String::new();
    out.push_str("tns v1\n");
    let _ = writeln!(out, "order {} dim {}", tensor.order(), tensor.dim());
    for (idx, value) in tensor.entries() {
        for i in idx {
            let _ = write!(out, "{} ", i + 1);
        }
        let _ = writeln!(out, "{value}");
    }
    out
}
