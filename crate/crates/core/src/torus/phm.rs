//! The `.phm` text format.
//!
//! ```text
//! phm v1
//! # optional comment lines
//! 2 4
//! 1 1 1 1
//! 1 i -1 -i
//! ```
//!
//! Tokens: `p/q` for `e^(2πi·p/q)`, the shorthands `1 -1 i -i`, and `(a,b)` for
//! a decimal complex number `a + bi`.

use super::{TorusMatrix, TorusScalar, DEFAULT_TOL};
use crate::error::{Error, Result};

pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub(crate) fn parse_dims(line: Option<(usize, &str)>, what: &str) -> Result<(usize, usize)> {
    let (no, l) = line.ok_or_else(|| Error::parse(0, format!("missing {what} line")))?;
    let parts: Vec<&str> = l.split_whitespace().collect();
    match parts.as_slice() {
        [a, b] => match (a.parse(), b.parse()) {
            (Ok(a), Ok(b)) => Ok((a, b)),
            _ => Err(Error::parse(no, format!("expected two integers ({what})"))),
        },
        _ => Err(Error::parse(no, format!("expected two integers ({what})"))),
    }
}

pub(crate) fn expect_header(line: Option<(usize, &str)>, header: &str) -> Result<()> {
    match line {
        Some((_, l)) if l == header => Ok(()),
        Some((no, l)) => Err(Error::parse(no, format!("expected header `{header}`, found `{l}`"))),
        None => Err(Error::parse(0, format!("empty input, expected `{header}`"))),
    }
}

pub fn parse_phm(text: &str) -> Result<TorusMatrix> {
    let mut lines = content_lines(text);
    expect_header(lines.next(), "phm v1")?;
    let (m, n) = parse_dims(lines.next(), "M N")?;
    let mut entries = Vec::with_capacity(m * n);
    for i in 0..m {
        let (no, l) = lines
            .next()
            .ok_or_else(|| Error::parse(0, format!("expected {m} rows, found {i}")))?;
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != n {
            return Err(Error::parse(no, format!("expected {n} entries, found {}", toks.len())));
        }
        for (j, tok) in toks.iter().enumerate() {
            let s: TorusScalar = tok.parse().map_err(|e: String| Error::parse(no, e))?;
            if s.modulus_defect() > DEFAULT_TOL {
                return Err(Error::NotUnitModulus { row: i + 1, col: j + 1, modulus: s.to_complex().norm() });
            }
            entries.push(s);
        }
    }
    if let Some((no, _)) = lines.next() {
        return Err(Error::parse(no, "trailing content after the last row"));
    }
    TorusMatrix::new(m, n, entries)
}

pub fn to_phm(h: &TorusMatrix) -> String {
    let mut out = format!("phm v1\n{} {}\n", h.rows(), h.cols());
    for row in h.entries().chunks(h.cols()) {
        let toks: Vec<String> = row.iter().map(ToString::to_string).collect();
        out.push_str(&toks.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_text_round_trips_bit_exactly() {
        let text = "phm v1\n2 4\n1 1 1 1\n1 i -1 -i\n";
        assert_eq!(to_phm(&parse_phm(text).unwrap()), text);
        let text = "phm v1\n1 3\n1 1/3 (-0.4999999999999998,-0.8660254037844387)\n";
        assert_eq!(to_phm(&parse_phm(text).unwrap()), text);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# Fourier\nphm v1\n\n1 2\n# row\n1 -1\n";
        let h = parse_phm(text).unwrap();
        assert_eq!(h.rows(), 1);
        assert_eq!(h.cols(), 2);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_phm("pgrid v1\n1 1\n1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_phm("phm v1\n1 2\n1\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_phm("phm v1\n1 1\n(1,1)\n"), Err(Error::NotUnitModulus { row: 1, col: 1, .. })));
        assert!(matches!(parse_phm("phm v1\n2 1\n1\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_phm("phm v1\n1 1\nz\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_phm("phm v1\n1 1\n1\n1\n"), Err(Error::Parse { line: 4, .. })));
    }
}
