//! Pre-Latin squares: `M × M` arrays over `{1, …, N}` whose entries are
//! distinct along every row and every column. Each label `x` induces the
//! partial permutation `σ_x(j) = i ⟺ L_ij = x`.

use std::fmt;

use crate::error::{Error, Result};
use crate::pperm::{PartialPermutation, Semigroup};
use crate::torus::phm::{content_lines, expect_header, parse_dims};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PreLatinSquare {
    size: usize,
    alphabet: usize,
    entries: Vec<usize>,
}

impl PreLatinSquare {
    /// Validates an array of rows against the alphabet `{1, …, n}`.
    ///
    /// Rows are checked first (alphabet and repeats), then squareness, then columns.
    pub fn validate(rows: &[Vec<usize>], n: usize) -> Result<PreLatinSquare> {
        for (i, row) in rows.iter().enumerate() {
            let mut seen = vec![false; n + 1];
            for (j, &x) in row.iter().enumerate() {
                if !(1..=n).contains(&x) {
                    return Err(Error::OutOfAlphabet(i + 1, j + 1));
                }
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::DuplicateInRow(i + 1));
                }
            }
        }
        let m = rows.len();
        if m == 0 || rows.iter().any(|r| r.len() != m) {
            return Err(Error::DimensionMismatch(format!("pre-Latin square must be square, got {m} rows")));
        }
        for j in 0..m {
            let mut seen = vec![false; n + 1];
            for row in rows {
                if std::mem::replace(&mut seen[row[j]], true) {
                    return Err(Error::DuplicateInColumn(j + 1));
                }
            }
        }
        Ok(PreLatinSquare { size: m, alphabet: n, entries: rows.concat() })
    }

    /// `L_ij = ((i − j) mod n) + 1`, the square of the Fourier matrix `F_n`.
    pub fn cyclic(n: usize) -> PreLatinSquare {
        let entries = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i + n - j) % n + 1))
            .collect();
        PreLatinSquare { size: n, alphabet: n, entries }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    /// `L_ij`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.entries[(i - 1) * self.size + (j - 1)]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.entries.chunks(self.size).map(<[usize]>::to_vec).collect()
    }

    /// `σ_x(j) = i ⟺ L_ij = x`; the empty map when `x` does not occur.
    pub fn sigma_of(&self, x: usize) -> Result<PartialPermutation> {
        if !(1..=self.alphabet).contains(&x) {
            return Err(Error::IndexOutOfRange { index: x, bound: self.alphabet });
        }
        let m = self.size;
        let mut image = vec![0; m];
        for i in 1..=m {
            for j in 1..=m {
                if self.get(i, j) == x {
                    image[j - 1] = i;
                }
            }
        }
        PartialPermutation::new(image)
    }

    /// The semigroup generated by `σ_1, …, σ_N`, unused labels included.
    pub fn semigroup(&self) -> Semigroup {
        let gens: Vec<PartialPermutation> = (1..=self.alphabet)
            .map(|x| self.sigma_of(x).expect("labels are in range"))
            .collect();
        Semigroup::generate(&gens).expect("generators share the square's size")
    }

    /// Applies a bijection of the alphabet: `relabel[x − 1]` is the new label of `x`.
    pub fn relabel(&self, relabel: &[usize]) -> Result<PreLatinSquare> {
        if relabel.len() != self.alphabet {
            return Err(Error::DimensionMismatch("relabeling must cover the whole alphabet".into()));
        }
        let rows: Vec<Vec<usize>> = self
            .rows()
            .into_iter()
            .map(|r| r.into_iter().map(|x| relabel[x - 1]).collect())
            .collect();
        let mut hit = vec![false; self.alphabet + 1];
        for &y in relabel {
            if !(1..=self.alphabet).contains(&y) || std::mem::replace(&mut hit[y], true) {
                return Err(Error::InvalidArgument("relabeling is not a bijection".into()));
            }
        }
        Self::validate(&rows, self.alphabet)
    }

    /// Parses the `.pls` format: `pls v1`, `M N`, then `M` rows of integers.
    pub fn parse_pls(text: &str) -> Result<PreLatinSquare> {
        let mut lines = content_lines(text);
        expect_header(lines.next(), "pls v1")?;
        let (m, n) = parse_dims(lines.next(), "M N")?;
        let mut rows = Vec::with_capacity(m);
        for k in 0..m {
            let (no, l) = lines
                .next()
                .ok_or_else(|| Error::parse(0, format!("expected {m} rows, found {k}")))?;
            let row = l
                .split_whitespace()
                .map(str::parse)
                .collect::<std::result::Result<Vec<usize>, _>>()
                .map_err(|_| Error::parse(no, "expected integers"))?;
            if row.len() != m {
                return Err(Error::parse(no, format!("expected {m} entries, found {}", row.len())));
            }
            rows.push(row);
        }
        if let Some((no, _)) = lines.next() {
            return Err(Error::parse(no, "trailing content after the last row"));
        }
        Self::validate(&rows, n)
    }

    pub fn to_pls(&self) -> String {
        format!("pls v1\n{} {}\n{self}", self.size, self.alphabet)
    }
}

impl fmt::Display for PreLatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.entries.chunks(self.size) {
            let toks: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "{}", toks.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(image: &[usize]) -> PartialPermutation {
        PartialPermutation::new(image.to_vec()).unwrap()
    }

    fn l2() -> PreLatinSquare {
        PreLatinSquare::validate(&[vec![1, 2], vec![3, 1]], 3).unwrap()
    }

    #[test]
    fn validation() {
        assert!(PreLatinSquare::validate(&[vec![1, 2], vec![3, 1]], 3).is_ok());
        assert!(matches!(PreLatinSquare::validate(&[vec![1, 1]], 2), Err(Error::DuplicateInRow(1))));
        assert!(PreLatinSquare::validate(&[vec![1, 2], vec![2, 1]], 2).is_ok());
        assert!(matches!(
            PreLatinSquare::validate(&[vec![1, 2], vec![1, 3]], 3),
            Err(Error::DuplicateInColumn(1))
        ));
        assert!(matches!(
            PreLatinSquare::validate(&[vec![1, 2], vec![4, 1]], 3),
            Err(Error::OutOfAlphabet(2, 1))
        ));
        assert!(PreLatinSquare::validate(&[vec![1, 2]], 2).is_err());
    }

    #[test]
    fn sigmas() {
        let l = l2();
        assert_eq!(l.sigma_of(2).unwrap(), pp(&[0, 1]));
        assert_eq!(l.sigma_of(1).unwrap(), PartialPermutation::identity(2));
        let l4 = PreLatinSquare::validate(&l.rows(), 4).unwrap();
        assert_eq!(l4.sigma_of(4).unwrap(), PartialPermutation::empty(2));
        assert!(l.sigma_of(4).is_err());
        let f3 = PreLatinSquare::cyclic(3);
        assert_eq!(f3.sigma_of(2).unwrap(), pp(&[2, 3, 1]));
    }

    #[test]
    fn semigroups() {
        let one = PreLatinSquare::validate(&[vec![1]], 1).unwrap();
        assert_eq!(one.semigroup().order(), 1);
        let s = l2().semigroup();
        assert_eq!(s.order(), 6);
        for e in [
            PartialPermutation::identity(2),
            pp(&[2, 0]),
            pp(&[0, 1]),
            pp(&[1, 0]),
            pp(&[0, 2]),
            PartialPermutation::empty(2),
        ] {
            assert!(s.contains(&e));
        }
        let c3 = PreLatinSquare::cyclic(3).semigroup();
        assert_eq!(c3.order(), 3);
        assert!(c3.is_group());
    }

    #[test]
    fn pls_round_trip() {
        let text = "pls v1\n2 3\n1 2\n3 1\n";
        let l = PreLatinSquare::parse_pls(text).unwrap();
        assert_eq!(l, l2());
        assert_eq!(l.to_pls(), text);
        assert!(PreLatinSquare::parse_pls("pls v1\n2 3\n1 2\n").is_err());
        assert!(PreLatinSquare::parse_pls("pls v1\n2 3\n1 2\n1 3\n").is_err());
    }

    #[test]
    fn relabel_is_checked() {
        assert!(l2().relabel(&[1, 1, 2]).is_err());
        let r = l2().relabel(&[3, 1, 2]).unwrap();
        assert_eq!(r.rows(), vec![vec![3, 1], vec![2, 3]]);
    }
}
