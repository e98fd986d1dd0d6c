//! The `.pgrid` text format.
//!
//! ```text
//! pgrid v1
//! 1 2
//! (1,0) (0,0)
//! (0,0) (0,0)
//! ```
//!
//! `M d`, then the `M²` blocks in row-major order, each as `d` lines of `d`
//! complex `(a,b)` tokens. Blocks are separated by blank lines on output;
//! blank lines and `#` comments are ignored on input.

use num_complex::Complex64;

use super::ProjGrid;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::torus::phm::{content_lines, expect_header, parse_dims};

fn parse_complex(tok: &str) -> Option<Complex64> {
    let (a, b) = tok.strip_prefix('(')?.strip_suffix(')')?.split_once(',')?;
    Some(Complex64::new(a.trim().parse().ok()?, b.trim().parse().ok()?))
}

pub fn parse_pgrid(text: &str) -> Result<ProjGrid> {
    let mut lines = content_lines(text);
    expect_header(lines.next(), "pgrid v1")?;
    let (m, d) = parse_dims(lines.next(), "M d")?;
    let mut blocks = Vec::with_capacity(m * m);
    for b in 0..m * m {
        let mut values = Vec::with_capacity(d * d);
        for r in 0..d {
            let (no, l) = lines
                .next()
                .ok_or_else(|| Error::parse(0, format!("block {} ends after {r} of {d} lines", b + 1)))?;
            let toks: Vec<&str> = l.split_whitespace().collect();
            if toks.len() != d {
                return Err(Error::parse(no, format!("expected {d} entries, found {}", toks.len())));
            }
            for tok in toks {
                values.push(parse_complex(tok).ok_or_else(|| Error::parse(no, format!("bad complex token `{tok}`")))?);
            }
        }
        blocks.push(CMatrix::from_row_slice(d, d, &values));
    }
    if let Some((no, _)) = lines.next() {
        return Err(Error::parse(no, "trailing content after the last block"));
    }
    ProjGrid::new(m, d, blocks)
}

pub fn to_pgrid(p: &ProjGrid) -> String {
    let mut out = format!("pgrid v1\n{} {}\n", p.size(), p.dim());
    for (k, b) in p.blocks().iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        for r in 0..p.dim() {
            let toks: Vec<String> = (0..p.dim()).map(|c| format!("({},{})", b[(r, c)].re, b[(r, c)].im)).collect();
            out.push_str(&toks.join(" "));
            out.push('\n');
        }
    }
    out
}
