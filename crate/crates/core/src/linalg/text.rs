//! Plain-text matrix format.
//!
//! ```text
//! # comment
//! 4
//! scale 1/12
//! 8 0 4+8i 0
//! ...
//! ```
//!
//! Line 1 (after comments) holds the dimension, an optional `scale p/q`
//! line multiplies every entry, then one line per row of whitespace
//! separated entries written `a`, `bi`, `a+bi` or `a-bi`.

use num_complex::Complex64;

use super::CMatrix;
use crate::error::{Error, Result};

pub fn parse_matrix(text: &str) -> Result<CMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line_no, first) = lines
        .next()
        .ok_or_else(|| Error::parse(0, "empty matrix file"))?;
    let n: usize = first
        .parse()
        .map_err(|_| Error::parse(line_no, format!("expected dimension, found `{first}`")))?;
    if n == 0 {
        return Err(Error::parse(line_no, "dimension must be positive"));
    }

    let mut scale = 1.0;
    let mut rows = Vec::with_capacity(n);
    for (line_no, line) in lines {
        if let Some(rest) = line.strip_prefix("scale") {
            if !rows.is_empty() {
                return Err(Error::parse(line_no, "`scale` must precede the rows"));
            }
            scale = parse_scale(rest.trim()).ok_or_else(|| {
                Error::parse(line_no, format!("bad scale `{}`", rest.trim()))
            })?;
            continue;
        }
        if rows.len() == n {
            return Err(Error::parse(line_no, format!("more than {n} rows")));
        }
        let row: Vec<Complex64> = line
            .split_whitespace()
            .map(|tok| {
                parse_complex(tok)
                    .ok_or_else(|| Error::parse(line_no, format!("bad complex entry `{tok}`")))
            })
            .collect::<Result<_>>()?;
        if row.len() != n {
            return Err(Error::parse(
                line_no,
                format!("expected {n} entries, found {}", row.len()),
            ));
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(Error::parse(
            text.lines().count(),
            format!("expected {n} rows, found {}", rows.len()),
        ));
    }
    Ok(CMatrix::from_fn(n, n, |r, c| rows[r][c] * scale))
}

fn parse_scale(s: &str) -> Option<f64> {
    let value = match s.split_once('/') {
        Some((p, q)) => p.trim().parse::<f64>().ok()? / q.trim().parse::<f64>().ok()?,
        None => s.parse::<f64>().ok()?,
    };
    value.is_finite().then_some(value)
}

/// Parses `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`; exponents allowed.
pub(crate) fn parse_complex(tok: &str) -> Option<Complex64> {
    let Some(body) = tok.strip_suffix('i') else {
        return tok.parse::<f64>().ok().map(Complex64::from);
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&p| matches!(bytes[p], b'+' | b'-') && !matches!(bytes[p - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(p) => (body[..p].parse::<f64>().ok()?, imag_part(&body[p..])?),
        None => (0.0, imag_part(body)?),
    };
    Some(Complex64::new(re, im))
}

fn imag_part(s: &str) -> Option<f64> {
    match s {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => s.parse().ok(),
    }
}

fn format_complex(z: Complex64) -> String {
    if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// Serializes in the format read by [`parse_matrix`]; entries round-trip
/// exactly.
pub fn format_matrix(m: &CMatrix) -> String {
    let mut out = format!("{}\n", m.nrows());
    for r in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|c| format_complex(m[(r, c)])).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Writes `m` with [`format_matrix`].
pub fn write_matrix<W: std::io::Write>(mut w: W, m: &CMatrix) -> std::io::Result<()> {
    w.write_all(format_matrix(m).as_bytes())
}
