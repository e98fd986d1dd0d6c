use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{Error, Result};

/// The root of unity `e^(2πi·num/den)` with `0 ≤ num < den`, reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase {
    num: u64,
    den: u64,
}

impl Phase {
    pub const ONE: Phase = Phase { num: 0, den: 1 };

    /// `e^(2πi·p/q)` for any integer `p`; fails for `q = 0`.
    pub fn new(p: i64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidArgument("phase denominator must be positive".into()));
        }
        let num = (p as i128).rem_euclid(q as i128) as u64;
        Ok(Self::reduced(num, q))
    }

    fn reduced(num: u64, den: u64) -> Self {
        let g = num.gcd(&den);
        Phase { num: num / g, den: den / g }
    }

    pub fn numerator(self) -> u64 {
        self.num
    }

    pub fn denominator(self) -> u64 {
        self.den
    }

    /// `e^(2πi·p/q)` as a float, snapping quarter turns to exact values.
    pub fn to_complex(self) -> Complex64 {
        match (self.num, self.den) {
            (0, _) => Complex64::new(1.0, 0.0),
            (1, 4) => Complex64::new(0.0, 1.0),
            (1, 2) => Complex64::new(-1.0, 0.0),
            (3, 4) => Complex64::new(0.0, -1.0),
            (n, d) => {
                // angle in (-π, π] keeps the argument small
                let turns = if (n as u128) * 2 > d as u128 {
                    n as f64 / d as f64 - 1.0
                } else {
                    n as f64 / d as f64
                };
                let (s, c) = (TAU * turns).sin_cos();
                Complex64::new(c, s)
            }
        }
    }

    pub fn conj(self) -> Self {
        Phase { num: (self.den - self.num) % self.den, den: self.den }
    }

    /// Product of two phases, `None` on denominator overflow.
    pub fn checked_mul(self, other: Phase) -> Option<Phase> {
        let l = self.den.checked_div(self.den.gcd(&other.den))?.checked_mul(other.den)?;
        let a = (self.num as u128) * (l / self.den) as u128;
        let b = (other.num as u128) * (l / other.den) as u128;
        let num = ((a + b) % l as u128) as u64;
        Some(Self::reduced(num, l))
    }
}

/// A unit-modulus complex number, exact when it is a root of unity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TorusScalar {
    Root(Phase),
    Float(Complex64),
}

impl TorusScalar {
    pub const ONE: TorusScalar = TorusScalar::Root(Phase::ONE);

    pub fn root(p: i64, q: u64) -> Result<Self> {
        Phase::new(p, q).map(TorusScalar::Root)
    }

    /// A float scalar; fails unless `| |z| − 1 | ≤ tol`.
    pub fn from_complex(z: Complex64, tol: f64) -> Result<Self> {
        let m = z.norm();
        if (m - 1.0).abs() > tol || !m.is_finite() {
            return Err(Error::NotUnitModulus { row: 0, col: 0, modulus: m });
        }
        Ok(TorusScalar::Float(z))
    }

    /// `e^(iθ)` as a float scalar.
    pub fn from_angle(theta: f64) -> Self {
        TorusScalar::Float(Complex64::from_polar(1.0, theta))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, TorusScalar::Root(_))
    }

    pub fn phase(&self) -> Option<Phase> {
        match self {
            TorusScalar::Root(p) => Some(*p),
            TorusScalar::Float(_) => None,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            TorusScalar::Root(p) => p.to_complex(),
            TorusScalar::Float(z) => *z,
        }
    }

    pub fn modulus_defect(&self) -> f64 {
        match self {
            TorusScalar::Root(_) => 0.0,
            TorusScalar::Float(z) => (z.norm() - 1.0).abs(),
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            TorusScalar::Root(p) => TorusScalar::Root(p.conj()),
            TorusScalar::Float(z) => TorusScalar::Float(z.conj()),
        }
    }

    /// The product; exact when both factors are.
    pub fn mul(&self, other: &TorusScalar) -> TorusScalar {
        if let (TorusScalar::Root(a), TorusScalar::Root(b)) = (self, other) {
            if let Some(p) = a.checked_mul(*b) {
                return TorusScalar::Root(p);
            }
        }
        TorusScalar::Float(self.to_complex() * other.to_complex())
    }

    /// `self / other`, i.e. `self · conj(other)` on the unit circle.
    pub fn div(&self, other: &TorusScalar) -> TorusScalar {
        match other {
            TorusScalar::Root(_) => self.mul(&other.conj()),
            TorusScalar::Float(z) => TorusScalar::Float(self.to_complex() / z),
        }
    }

    /// Decidable equality for exact scalars, `|a − b| ≤ tol` otherwise.
    pub fn approx_eq(&self, other: &TorusScalar, tol: f64) -> bool {
        match (self, other) {
            (TorusScalar::Root(a), TorusScalar::Root(b)) => a == b,
            _ => (self.to_complex() - other.to_complex()).norm() <= tol,
        }
    }
}

impl fmt::Display for TorusScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TorusScalar::Root(p) => match (p.num, p.den) {
                (0, 1) => f.write_str("1"),
                (1, 2) => f.write_str("-1"),
                (1, 4) => f.write_str("i"),
                (3, 4) => f.write_str("-i"),
                (n, d) => write!(f, "{n}/{d}"),
            },
            // `{}` on f64 prints the shortest string that parses back to the same bits
            TorusScalar::Float(z) => write!(f, "({},{})", z.re, z.im),
        }
    }
}

impl FromStr for TorusScalar {
    type Err = String;

    /// Parses one `.phm` token. Float tokens are not modulus-checked here.
    fn from_str(tok: &str) -> std::result::Result<Self, Self::Err> {
        let exact = |p, q| TorusScalar::Root(Phase::reduced(p, q));
        match tok {
            "1" => return Ok(exact(0, 1)),
            "-1" => return Ok(exact(1, 2)),
            "i" => return Ok(exact(1, 4)),
            "-i" => return Ok(exact(3, 4)),
            _ => {}
        }
        if let Some(inner) = tok.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
            let (a, b) = inner
                .split_once(',')
                .ok_or_else(|| format!("complex token `{tok}` must look like (a,b)"))?;
            let re: f64 = a.trim().parse().map_err(|_| format!("bad real part in `{tok}`"))?;
            let im: f64 = b.trim().parse().map_err(|_| format!("bad imaginary part in `{tok}`"))?;
            return Ok(TorusScalar::Float(Complex64::new(re, im)));
        }
        if let Some((p, q)) = tok.split_once('/') {
            let p: i64 = p.parse().map_err(|_| format!("bad numerator in `{tok}`"))?;
            let q: u64 = q.parse().map_err(|_| format!("bad denominator in `{tok}`"))?;
            return TorusScalar::root(p, q).map_err(|e| e.to_string());
        }
        Err(format!("unrecognized token `{tok}`"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phases_reduce() {
        let p = Phase::new(-2, 8).unwrap();
        assert_eq!((p.numerator(), p.denominator()), (3, 4));
        assert!(Phase::new(1, 0).is_err());
    }

    #[test]
    fn exact_arithmetic() {
        let w = TorusScalar::root(1, 3).unwrap();
        let w2 = w.mul(&w);
        assert_eq!(w2, TorusScalar::root(2, 3).unwrap());
        assert_eq!(w2.mul(&w), TorusScalar::ONE);
        assert_eq!(w.div(&w2), w2);
        let i = TorusScalar::root(1, 4).unwrap();
        assert_eq!(i.mul(&w), TorusScalar::root(7, 12).unwrap());
    }

    #[test]
    fn quarter_turns_are_exact_floats() {
        assert_eq!(Phase::new(1, 4).unwrap().to_complex(), Complex64::new(0.0, 1.0));
        assert_eq!(Phase::new(2, 4).unwrap().to_complex(), Complex64::new(-1.0, 0.0));
        assert_eq!(Phase::new(3, 4).unwrap().to_complex(), Complex64::new(0.0, -1.0));
    }

    #[test]
    fn tokens() {
        for tok in ["1", "-1", "i", "-i", "1/3", "5/12", "(0.6,0.8)", "(-1,0)"] {
            let s: TorusScalar = tok.parse().unwrap();
            assert_eq!(s.to_string(), tok);
        }
        assert_eq!("2/4".parse::<TorusScalar>().unwrap().to_string(), "-1");
        assert!("x".parse::<TorusScalar>().is_err());
        assert!("(1;0)".parse::<TorusScalar>().is_err());
    }

    #[test]
    fn float_modulus_checked() {
        assert!(TorusScalar::from_complex(Complex64::new(0.6, 0.8), 1e-12).is_ok());
        assert!(TorusScalar::from_complex(Complex64::new(1.0, 0.1), 1e-9).is_err());
    }

    #[test]
    fn mixed_equality_is_tolerant() {
        let w = TorusScalar::root(1, 6).unwrap();
        let f = TorusScalar::from_angle(std::f64::consts::PI / 3.0);
        assert!(w.approx_eq(&f, 1e-12));
        assert!(!w.approx_eq(&TorusScalar::ONE, 1e-12));
    }
}
