//! Exact vanishing test for integer combinations of `Q`-th roots of unity.
//!
//! `Σ c_k ζ^k = 0` for a primitive `Q`-th root `ζ` iff the polynomial
//! `Σ c_k x^k` is divisible by the cyclotomic polynomial `Φ_Q`.

/// Largest `Q` for which the exact test is attempted.
pub const MAX_ORDER: u64 = 4096;

fn mobius(mut n: u64) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

fn mul_by_binomial(poly: &[i128], d: usize) -> Vec<i128> {
    // poly * (x^d - 1)
    let mut out = vec![0i128; poly.len() + d];
    for (k, &c) in poly.iter().enumerate() {
        out[k + d] += c;
        out[k] -= c;
    }
    out
}

fn div_by_binomial(poly: &[i128], d: usize) -> Vec<i128> {
    // exact division by (x^d - 1): poly = q (x^d - 1)
    let n = poly.len() - d;
    let mut q = vec![0i128; n];
    for k in (0..n).rev() {
        let carry = if k + d < n { q[k + d] } else { 0 };
        q[k] = poly[k + d] + carry;
    }
    q
}

/// Coefficients of `Φ_q`, lowest degree first.
pub fn cyclotomic_poly(q: u64) -> Vec<i128> {
    let divisors: Vec<u64> = (1..=q).filter(|d| q.is_multiple_of(*d)).collect();
    let mut poly = vec![1i128];
    for &d in &divisors {
        if mobius(q / d) == 1 {
            poly = mul_by_binomial(&poly, d as usize);
        }
    }
    for &d in &divisors {
        if mobius(q / d) == -1 {
            poly = div_by_binomial(&poly, d as usize);
        }
    }
    poly
}

/// Decides `Σ_k counts[k] · e^(2πi·k/Q) = 0` exactly, where `Q = counts.len()`.
/// Returns `None` when `Q` exceeds [`MAX_ORDER`].
pub fn vanishes(counts: &[i64]) -> Option<bool> {
    let q = counts.len() as u64;
    if q == 0 {
        return Some(true);
    }
    if q > MAX_ORDER {
        return None;
    }
    let phi = cyclotomic_poly(q);
    let deg = phi.len() - 1;
    let mut rem: Vec<i128> = counts.iter().map(|&c| c as i128).collect();
    // reduce modulo the monic Φ_q from the top down
    for top in (deg..rem.len()).rev() {
        let lead = rem[top];
        if lead != 0 {
            for (k, &c) in phi.iter().enumerate() {
                rem[top - deg + k] -= lead * c;
            }
        }
    }
    Some(rem.iter().take(deg).all(|&c| c == 0))
}
