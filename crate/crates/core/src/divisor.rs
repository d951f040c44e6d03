//! Divisor counts and the divisor-sum bounds built from them.

use crate::error::{CfError, Result};
use crate::surd::{is_square, isqrt};

/// Number of divisors of `n ≥ 1` by trial division up to `√n`.
pub fn tau(n: u64) -> u64 {
    assert!(n >= 1, "tau is defined for n ≥ 1");
    let root = isqrt(n);
    let pairs = (1..=root).filter(|d| n.is_multiple_of(*d)).count() as u64;
    if root * root == n {
        2 * pairs - 1
    } else {
        2 * pairs
    }
}

/// Anything that can answer `τ(n)`.
pub trait TauSource {
    fn tau(&self, n: u64) -> u64;
}

/// Answers every query by trial division.
#[derive(Debug, Clone, Copy, Default)]
pub struct TrialDivision;

impl TauSource for TrialDivision {
    fn tau(&self, n: u64) -> u64 {
        tau(n)
    }
}

/// Sieved `τ(n)` for `1 ≤ n ≤ limit`.
#[derive(Debug, Clone)]
pub struct DivisorTable {
    limit: usize,
    counts: Vec<u32>,
}

impl DivisorTable {
    pub fn new(limit: usize) -> Self {
        let mut counts = vec![0u32; limit + 1];
        for d in 1..=limit {
            for m in (d..=limit).step_by(d) {
                counts[m] += 1;
            }
        }
        Self { limit, counts }
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    pub fn get(&self, n: usize) -> u32 {
        assert!(n >= 1 && n <= self.limit, "{n} outside divisor table 1..={}", self.limit);
        self.counts[n]
    }
}

impl TauSource for DivisorTable {
    fn tau(&self, n: u64) -> u64 {
        if n as usize <= self.limit {
            self.get(n as usize) as u64
        } else {
            tau(n)
        }
    }
}

/// `D(Q) = Σ_{u=1}^{⌊√Q⌋} τ(Q − u²)`; a zero argument (square `Q`) is skipped.
pub fn big_d(q: u64, taus: &impl TauSource) -> u64 {
    (1..=isqrt(q)).map(|u| q - u * u).filter(|&n| n > 0).map(|n| taus.tau(n)).sum()
}

/// Upper bound on the sum of partial quotients over one period for a root
/// of discriminant `delta`.
///
/// For `4 | Δ` it is `2·D(Δ/4) + τ(Δ/4)`. For odd `Δ` (necessarily
/// `≡ 1 mod 4`) it is `2·Σ τ((Δ − i²)/4)` over odd `i` with `i² < Δ`.
/// Both count the triples `(a, b, h)` with `a > 0 > b` and `h² − 4ab = Δ`.
pub fn f_bound(delta: i64, taus: &impl TauSource) -> Result<u64> {
    if delta < 2 || is_square(delta) {
        return Err(CfError::InvalidArgument(format!(
            "f is defined for positive non-square discriminants, got {delta}"
        )));
    }
    let delta_u = delta as u64;
    match delta.rem_euclid(4) {
        0 => {
            let q = delta_u / 4;
            Ok(2 * big_d(q, taus) + taus.tau(q))
        }
        1 => {
            let mut sum = 0;
            let mut i = 1u64;
            while i * i < delta_u {
                let num = delta_u - i * i;
                if !num.is_multiple_of(4) {
                    return Err(CfError::Invariant(format!("(Δ − i²)/4 not integral for Δ = {delta}, i = {i}")));
                }
                sum += taus.tau(num / 4);
                i += 2;
            }
            Ok(2 * sum)
        }
        _ => Err(CfError::InvalidDiscriminant(delta)),
    }
}

/// All triples `(a, b, h)` with `a > 0 > b` and `h² − 4ab = Δ`, by brute force.
pub fn enumerate_river_triples(delta: i64) -> Vec<(i64, i64, i64)> {
    let mut out = Vec::new();
    let mut h = -(isqrt(delta as u64) as i64);
    while h * h <= delta {
        let rest = delta - h * h;
        if rest > 0 && rest % 4 == 0 {
            let prod = rest / 4;
            for a in 1..=prod {
                if prod % a == 0 {
                    out.push((a, -(prod / a), h));
                }
            }
        }
        h += 1;
    }
    out
}
