//! Red numbers (odd `T₀`), the negative Pell equation, and sums of two squares.

use num_bigint::BigInt;
use serde::Serialize;

use crate::divisor::{big_d, TauSource};
use crate::error::{CfError, Result};
use crate::expansion::{convergents, expand_sqrt};
use crate::par_map;
use crate::surd::exact_sqrt;

/// Smallest-prime-factor table for `0..=limit`.
#[derive(Debug, Clone)]
pub struct FactorSieve {
    spf: Vec<u32>,
}

impl FactorSieve {
    pub fn new(limit: usize) -> Self {
        let mut spf = vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                for m in (i..=limit).step_by(i) {
                    if spf[m] == 0 {
                        spf[m] = i as u32;
                    }
                }
            }
        }
        Self { spf }
    }

    pub fn limit(&self) -> usize {
        self.spf.len() - 1
    }

    pub fn is_prime(&self, n: usize) -> bool {
        n >= 2 && self.spf[n] as usize == n
    }

    /// `(prime, exponent)` pairs in increasing order.
    pub fn factor(&self, mut n: usize) -> Vec<(u64, u32)> {
        let mut out: Vec<(u64, u32)> = Vec::new();
        while n > 1 {
            let p = self.spf[n] as usize;
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p as u64, e));
        }
        out
    }

    pub fn primes(&self) -> impl Iterator<Item = usize> + '_ {
        (2..self.spf.len()).filter(|&n| self.is_prime(n))
    }
}

/// `(prime, exponent)` pairs by trial division.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn two_squares_criterion(factors: &[(u64, u32)]) -> bool {
    factors.iter().all(|&(p, e)| p % 4 != 3 || e % 2 == 0)
}

/// `n = u² + v²` for integers `u, v ≥ 0`: every prime `≡ 3 (mod 4)` divides
/// `n` to an even power. Squares qualify with `v = 0`.
pub fn is_sum_two_squares(n: u64) -> bool {
    assert!(n >= 1);
    two_squares_criterion(&factorize(n))
}

/// `n = u² + v²` with both `u, v ≥ 1`.
pub fn is_sum_two_positive_squares(n: u64) -> bool {
    if !is_sum_two_squares(n) {
        return false;
    }
    let mut u = 1;
    while 2 * u * u <= n {
        if exact_sqrt(n - u * u).is_some() {
            return true;
        }
        u += 1;
    }
    false
}

/// `(x, y)` with `x² − Q y² = −1`, or `None` when `T₀(Q)` is even.
///
/// The solution is the convergent closing the first period of `√Q`.
pub fn negative_pell(q: i64) -> Result<Option<(BigInt, BigInt)>> {
    let cf = expand_sqrt(q)?;
    if cf.t() % 2 == 0 {
        return Ok(None);
    }
    let c = convergents(&cf, cf.t() - 1).pop().expect("k + 1 convergents");
    let (x, y) = (c.p, c.q);
    if &x * &x - BigInt::from(q) * &y * &y != BigInt::from(-1) {
        return Err(CfError::Invariant(format!("convergent ({x}, {y}) fails x² − {q}y² = −1")));
    }
    Ok(Some((x, y)))
}

/// Membership of one `Q` in `K` (odd `T₀`) and `M` (sum of two squares).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RedClassification {
    pub q: i64,
    pub t0: usize,
    pub in_k: bool,
    pub in_m: bool,
    pub pell: Option<(BigInt, BigInt)>,
}

pub fn classify(q: i64) -> Result<RedClassification> {
    let t0 = expand_sqrt(q)?.t();
    let pell = negative_pell(q)?;
    let in_k = t0 % 2 == 1;
    let in_m = is_sum_two_squares(q as u64);
    if pell.is_some() != in_k {
        return Err(CfError::Invariant(format!("Pell solvability disagrees with T₀ parity at {q}")));
    }
    if in_k && (!in_m || !k_obstruction_free(q as u64)) {
        return Err(CfError::Invariant(format!("{q} has odd T₀ but an obstruction to x² ≡ −1")));
    }
    Ok(RedClassification { q, t0, in_k, in_m, pell })
}

/// Neither 4 nor any prime `≡ 3 (mod 4)` divides `q`.
pub fn k_obstruction_free(q: u64) -> bool {
    !q.is_multiple_of(4) && factorize(q).iter().all(|&(p, _)| p % 4 != 3)
}

/// `T₀(q)` for `1 ≤ q ≤ limit`, with `0` for perfect squares.
pub fn t0_table(limit: usize) -> Result<Vec<usize>> {
    let qs: Vec<usize> = (0..=limit).collect();
    par_map(qs, |q| if q == 0 || exact_sqrt(q as u64).is_some() { Ok(0) } else { Ok(expand_sqrt(q as i64)?.t()) })
        .into_iter()
        .collect()
}

/// Result of `T₀(Q) ≤ D(Q)` for one `Q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct T0BoundRecord {
    pub q: u64,
    pub t0: usize,
    pub d: u64,
    pub ok: bool,
}

pub fn t0_bound_check(q: u64, taus: &impl TauSource) -> Result<T0BoundRecord> {
    let t0 = expand_sqrt(q as i64)?.t();
    Ok(t0_bound_record(q, t0, taus))
}

pub fn t0_bound_record(q: u64, t0: usize, taus: &impl TauSource) -> T0BoundRecord {
    let d = big_d(q, taus);
    T0BoundRecord { q, t0, d, ok: t0 as u64 <= d }
}

/// Counts of `K_n` and `M_n` under both conventions for squares.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RedCensus {
    pub n: usize,
    pub k_count: usize,
    /// `|M_n|` counting `u² + 0²`, so every square is in `M`.
    pub m_count: usize,
    /// `|M_n|` requiring both squares positive.
    pub m_count_positive: usize,
    pub ratio: f64,
    pub ratio_positive: f64,
}

/// Census over `1..=n`; `t0[q]` must hold `T₀(q)` (0 for squares).
pub fn red_census_from(n: usize, t0: &[usize]) -> RedCensus {
    let sieve = FactorSieve::new(n);
    red_census_with(n, t0, &sieve)
}

fn red_census_with(n: usize, t0: &[usize], sieve: &FactorSieve) -> RedCensus {
    let mut k_count = 0;
    let mut m_count = 0;
    let mut m_count_positive = 0;
    for q in 1..=n {
        if t0[q] % 2 == 1 {
            k_count += 1;
        }
        if two_squares_criterion(&sieve.factor(q)) {
            m_count += 1;
            if is_sum_two_positive_squares(q as u64) {
                m_count_positive += 1;
            }
        }
    }
    RedCensus {
        n,
        k_count,
        m_count,
        m_count_positive,
        ratio: k_count as f64 / m_count as f64,
        ratio_positive: k_count as f64 / m_count_positive as f64,
    }
}

pub fn red_census(n: usize) -> Result<RedCensus> {
    if n < 2 {
        return Err(CfError::InvalidArgument("census needs n ≥ 2".into()));
    }
    Ok(red_census_from(n, &t0_table(n)?))
}

/// Partial product `Π (1 − 1/p²)` over primes `p ≤ limit` with `p mod 4 ≠ 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductReport {
    pub limit: usize,
    /// The partial product; an upper bound for the infinite product.
    pub value: f64,
    /// `value · (1 − 1/limit)`, a lower bound for the infinite product.
    pub lower_bound: f64,
}

/// The partial product, accumulated as a compensated sum of `ln(1 − 1/p²)`.
pub fn prime_product(limit: usize) -> Result<ProductReport> {
    if limit < 2 {
        return Err(CfError::InvalidArgument("prime limit must be ≥ 2".into()));
    }
    let sieve = FactorSieve::new(limit);
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for p in sieve.primes().filter(|p| p % 4 != 1) {
        let term = (-1.0 / (p as f64 * p as f64)).ln_1p() - comp;
        let t = sum + term;
        comp = (t - sum) - term;
        sum = t;
    }
    let value = sum.exp();
    // Σ_{n > L} 1/n² < 1/L
    let lower_bound = value * (1.0 - 1.0 / limit as f64);
    Ok(ProductReport { limit, value, lower_bound })
}

/// Smallest `n₀ ≤ n` with `|K_m| < c·|M_m|` for every `m` in `n₀..=n`
/// (squares counted in `M`), or `None` if it fails at `n`.
pub fn product_threshold(n: usize, t0: &[usize], c: f64) -> Option<usize> {
    let sieve = FactorSieve::new(n);
    let mut k = 0usize;
    let mut m = 0usize;
    let mut start = None;
    for q in 1..=n {
        if t0[q] % 2 == 1 {
            k += 1;
        }
        if two_squares_criterion(&sieve.factor(q)) {
            m += 1;
        }
        let holds = (k as f64) < c * m as f64;
        match (holds, start) {
            (true, None) => start = Some(q),
            (false, _) => start = None,
            _ => {}
        }
    }
    start
}

/// Primes `Q ≤ limit` violating `Q ∈ K ⇔ Q mod 4 ≠ 3 ⇔ Q ∈ M`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeClassesReport {
    pub limit: usize,
    pub primes_checked: usize,
    pub counterexamples: Vec<u64>,
}

pub fn prime_classes_check(limit: usize) -> Result<PrimeClassesReport> {
    let sieve = FactorSieve::new(limit);
    let primes: Vec<usize> = sieve.primes().collect();
    let primes_checked = primes.len();
    let verdicts = par_map(primes, |p| -> Result<Option<u64>> {
        let in_k = expand_sqrt(p as i64)?.t() % 2 == 1;
        let not3 = p % 4 != 3;
        let in_m = is_sum_two_squares(p as u64);
        Ok((!(in_k == not3 && not3 == in_m)).then_some(p as u64))
    });
    let mut counterexamples = Vec::new();
    for v in verdicts {
        if let Some(p) = v? {
            counterexamples.push(p);
        }
    }
    Ok(PrimeClassesReport { limit, primes_checked, counterexamples })
}

/// Smallest `y ≤ y_max` with `Q y² − 1` a perfect square, by search.
pub fn negative_pell_search(q: u64, y_max: u64) -> Option<(u64, u64)> {
    (1..=y_max).find_map(|y| {
        let v = (q as u128) * (y as u128) * (y as u128) - 1;
        let x = (v as f64).sqrt() as u128;
        (x.saturating_sub(1)..=x + 1).find(|&c| c * c == v).map(|x| (x as u64, y))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisor::TrialDivision;

    #[test]
    fn pell_examples() {
        assert_eq!(negative_pell(2).unwrap(), Some((1.into(), 1.into())));
        assert_eq!(negative_pell(13).unwrap(), Some((18.into(), 5.into())));
        assert_eq!(negative_pell(3).unwrap(), None);
        assert!(negative_pell(9).is_err());
    }

    #[test]
    fn pell_matches_brute_force() {
        for q in 2..=1000u64 {
            if exact_sqrt(q).is_some() {
                continue;
            }
            let cf = expand_sqrt(q as i64).unwrap();
            // the convergent closing the period solves x² − Qy² = (−1)^T
            let closing = convergents(&cf, cf.t() - 1).pop().unwrap();
            let y_close: u64 = match (&closing.q).try_into() {
                Ok(y) if y <= 100_000 => y,
                _ => continue,
            };
            match negative_pell(q as i64).unwrap() {
                Some((_, y)) => {
                    assert_eq!(negative_pell_search(q, y_close), Some((closing.p.try_into().unwrap(), y_close)));
                    assert_eq!(y, closing.q);
                }
                None => assert!(negative_pell_search(q, y_close).is_none(), "q = {q}"),
            }
        }
    }

    #[test]
    fn two_squares_examples() {
        assert!(is_sum_two_squares(2));
        assert!(!is_sum_two_squares(3));
        assert!(is_sum_two_squares(45));
        assert!(is_sum_two_squares(9));
        assert!(!is_sum_two_positive_squares(9));
        assert!(is_sum_two_positive_squares(2));
        assert!(is_sum_two_positive_squares(25));
    }

    #[test]
    fn two_squares_matches_brute_force() {
        let mut brute = vec![false; 10_001];
        let mut brute_pos = vec![false; 10_001];
        for u in 0..=100u64 {
            for v in u..=100u64 {
                let n = (u * u + v * v) as usize;
                if n <= 10_000 {
                    brute[n] = true;
                    if u > 0 {
                        brute_pos[n] = true;
                    }
                }
            }
        }
        for n in 1..=10_000u64 {
            assert_eq!(is_sum_two_squares(n), brute[n as usize], "n = {n}");
            assert_eq!(is_sum_two_positive_squares(n), brute_pos[n as usize], "n = {n}");
        }
    }

    #[test]
    fn t0_bound_examples() {
        let r = t0_bound_check(2, &TrialDivision).unwrap();
        assert_eq!((r.t0, r.d, r.ok), (1, 1, true));
        let r = t0_bound_check(13, &TrialDivision).unwrap();
        assert_eq!((r.t0, r.d, r.ok), (5, 12, true));
        let r = t0_bound_check(3, &TrialDivision).unwrap();
        assert_eq!((r.t0, r.d, r.ok), (2, 2, true));
    }

    #[test]
    fn census_small() {
        let c = red_census(10).unwrap();
        // K = {2, 5, 10}; M = {1, 2, 4, 5, 8, 9, 10}
        assert_eq!(c.k_count, 3);
        assert_eq!(c.m_count, 7);
        // without zero squares: {2, 5, 8, 10}
        assert_eq!(c.m_count_positive, 4);
        let c = red_census(2).unwrap();
        assert_eq!((c.k_count, c.m_count, c.m_count_positive), (1, 2, 1));
        assert!(red_census(1).is_err());
    }

    #[test]
    fn product_examples() {
        assert!((prime_product(3).unwrap().value - 2.0 / 3.0).abs() < 1e-15);
        assert!((prime_product(2).unwrap().value - 0.75).abs() < 1e-15);
        let a = prime_product(100).unwrap().value;
        let b = prime_product(1000).unwrap().value;
        assert!(b < a);
    }

    #[test]
    fn prime_classes_small() {
        let rep = prime_classes_check(2000).unwrap();
        assert!(rep.counterexamples.is_empty());
        assert_eq!(rep.primes_checked, 303);
        assert_eq!(expand_sqrt(5).unwrap().t(), 1);
        assert_eq!(expand_sqrt(7).unwrap().t(), 4);
    }

    #[test]
    fn classification_invariants() {
        for q in 2..3000 {
            if exact_sqrt(q as u64).is_some() {
                continue;
            }
            let c = classify(q).unwrap();
            if let Some((x, y)) = &c.pell {
                assert_eq!(x * x - BigInt::from(q) * y * y, BigInt::from(-1));
            }
            if c.in_k {
                assert!(c.in_m && k_obstruction_free(q as u64));
            }
        }
    }
}
