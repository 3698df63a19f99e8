//! Plain-text matrix format.
//!
//! ```text
//! <rows> <cols> real|complex
//! <entry> <entry> ...
//! ```
//! Entries are row-major and whitespace-separated; complex entries are written
//! `a+bi`. Output always uses 17 significant digits, one row per line.

use std::fmt::Write as _;

use num_complex::Complex64;

use super::{Matrix, Scalar};
use crate::error::{Error, Result};

/// A matrix read from text, keeping the declared scalar kind.
#[derive(Clone, Debug, PartialEq)]
pub enum TextMatrix {
    Real(Matrix<f64>),
    Complex(Matrix<Complex64>),
}

fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_matrix_text<T: Scalar>(m: &Matrix<T>) -> String {
    let kind = if T::IS_COMPLEX { "complex" } else { "real" };
    let mut out = format!("{} {} {kind}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = m
            .row(i)
            .iter()
            .map(|&x| {
                if T::IS_COMPLEX {
                    let im = x.im();
                    let sign = if im.is_sign_negative() { '-' } else { '+' };
                    format!("{}{sign}{}i", fmt_real(x.re()), fmt_real(im.abs()))
                } else {
                    fmt_real(x.re())
                }
            })
            .collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

fn parse_real(tok: &str) -> Result<f64> {
    tok.parse::<f64>().map_err(|_| Error::Parse(format!("bad real entry {tok:?}")))
}

fn parse_complex(tok: &str) -> Result<Complex64> {
    let body = match tok.strip_suffix('i') {
        Some(b) => b,
        None => return Ok(Complex64::new(parse_real(tok)?, 0.0)),
    };
    // Split at the last sign that is not part of an exponent or the leading sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => {
            let im_str = &body[k..];
            let im = if im_str == "+" || im_str == "-" { format!("{im_str}1") } else { im_str.to_string() };
            Ok(Complex64::new(parse_real(&body[..k])?, parse_real(&im)?))
        }
        None => {
            let im = if body.is_empty() || body == "+" || body == "-" { format!("{body}1") } else { body.to_string() };
            Ok(Complex64::new(0.0, parse_real(&im)?))
        }
    }
}

pub fn read_matrix_text(input: &str) -> Result<TextMatrix> {
    let mut tokens = input.split_whitespace();
    let mut header = || tokens.next().ok_or_else(|| Error::Parse("truncated header".into()));
    let rows: usize = header()?.parse().map_err(|_| Error::Parse("bad row count".into()))?;
    let cols: usize = header()?.parse().map_err(|_| Error::Parse("bad column count".into()))?;
    let kind = header()?;
    let entries: Vec<&str> = tokens.collect();
    if entries.len() != rows * cols {
        return Err(Error::Parse(format!("expected {} entries, found {}", rows * cols, entries.len())));
    }
    match kind {
        "real" => {
            let data = entries.iter().map(|t| parse_real(t)).collect::<Result<Vec<_>>>()?;
            Ok(TextMatrix::Real(Matrix::from_vec(rows, cols, data)?))
        }
        "complex" => {
            let data = entries.iter().map(|t| parse_complex(t)).collect::<Result<Vec<_>>>()?;
            Ok(TextMatrix::Complex(Matrix::from_vec(rows, cols, data)?))
        }
        other => Err(Error::Parse(format!("unknown scalar kind {other:?}"))),
    }
}
