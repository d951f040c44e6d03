//! Periodic continued-fraction expansion by the classical `(P, Q)` recurrence.
//!
//! This is the reference route: every other module in the crate is checked
//! against the quotients produced here.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::divisor::{f_bound, TrialDivision};
use crate::error::{CfError, Result};
use crate::surd::{floor_state, isqrt, make_surd, QuadraticSurd};

/// `[a₀; a₁, …, a_m, (a_{m+1}, …, a_{m+T})]`.
///
/// The preperiod always holds `a₀`, so it is never empty; `m` is its length
/// minus one. The period is primitive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CfExpansion {
    preperiod: Vec<i64>,
    period: Vec<i64>,
}

impl CfExpansion {
    /// Builds an expansion and normalises it: the preperiod is shortened while
    /// its last term equals the last period term, and the period is reduced to
    /// its primitive root.
    pub fn new(preperiod: Vec<i64>, period: Vec<i64>) -> Result<Self> {
        if preperiod.is_empty() || period.is_empty() {
            return Err(CfError::InvalidArgument("preperiod and period must be nonempty".into()));
        }
        if preperiod[1..].iter().chain(&period).any(|&a| a < 1) {
            return Err(CfError::InvalidArgument("partial quotients after a0 must be positive".into()));
        }
        let mut cf = Self { preperiod, period };
        cf.normalise();
        Ok(cf)
    }

    fn normalise(&mut self) {
        self.period = primitive_period(&self.period).to_vec();
        while self.preperiod.len() > 1 && self.preperiod.last() == self.period.last() {
            self.preperiod.pop();
            self.period.rotate_right(1);
        }
    }

    pub fn preperiod(&self) -> &[i64] {
        &self.preperiod
    }

    pub fn period(&self) -> &[i64] {
        &self.period
    }

    /// Index of the last preperiod term.
    pub fn m(&self) -> usize {
        self.preperiod.len() - 1
    }

    /// Period length.
    pub fn t(&self) -> usize {
        self.period.len()
    }

    pub fn a0(&self) -> i64 {
        self.preperiod[0]
    }

    /// `a_i`, unrolling the period as needed.
    pub fn term(&self, i: usize) -> i64 {
        let pre = self.preperiod.len();
        if i < pre {
            self.preperiod[i]
        } else {
            self.period[(i - pre) % self.period.len()]
        }
    }

    /// `a_0, …, a_{n-1}`.
    pub fn terms(&self, n: usize) -> Vec<i64> {
        (0..n).map(|i| self.term(i)).collect()
    }

    /// Sum of the partial quotients over one period.
    pub fn period_sum(&self) -> i64 {
        self.period.iter().sum()
    }
}

impl std::fmt::Display for CfExpansion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let join = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "[{}", self.preperiod[0])?;
        if self.preperiod.len() > 1 {
            write!(f, "; {}", join(&self.preperiod[1..]))?;
            write!(f, ", ({})]", join(&self.period))
        } else {
            write!(f, "; ({})]", join(&self.period))
        }
    }
}

/// Shortest prefix `w` of `period` such that `period` is a power of `w`.
pub fn primitive_period(period: &[i64]) -> &[i64] {
    let n = period.len();
    for d in 1..n {
        if n.is_multiple_of(d) && (d..n).all(|i| period[i] == period[i - d]) {
            return &period[..d];
        }
    }
    period
}

/// Default step budget: the period bound for the primitive discriminant,
/// plus room for the preperiod.
pub fn default_max_steps(s: &QuadraticSurd) -> usize {
    let delta = s.discriminant();
    let bound = f_bound(delta, &TrialDivision).unwrap_or(delta as u64);
    // the preperiod shrinks like a Euclidean descent on the state size
    let bits = 64 - (s.p().unsigned_abs() | s.den().unsigned_abs() | s.d() as u64).leading_zeros();
    bound as usize + 3 + 2 * bits as usize + 8
}

/// Expands `s` with the default budget.
pub fn expand(s: &QuadraticSurd) -> Result<CfExpansion> {
    expand_with_budget(s, default_max_steps(s))
}

/// Runs `a = ⌊(P+√D)/Q⌋, P' = aQ − P, Q' = (D − P'²)/Q` until a state repeats.
///
/// Each step produces one partial quotient; at most `max_steps` quotients are
/// produced before giving up.
pub fn expand_with_budget(s: &QuadraticSurd, max_steps: usize) -> Result<CfExpansion> {
    let d = s.d();
    let root = isqrt(d as u64) as i64;
    let (mut p, mut q) = (s.p(), s.den());
    let mut seen: HashMap<(i64, i64), usize> = HashMap::new();
    let mut terms = Vec::new();
    loop {
        if let Some(&start) = seen.get(&(p, q)) {
            let mut preperiod = terms[..start].to_vec();
            let mut period = terms[start..].to_vec();
            if preperiod.is_empty() {
                preperiod.push(period[0]);
                period.rotate_left(1);
            }
            let cf = CfExpansion::new(preperiod, period)?;
            if cf.period.len() != terms.len() - start {
                return Err(CfError::Invariant(format!(
                    "state cycle of {} is not primitive for {s}",
                    terms.len() - start
                )));
            }
            return Ok(cf);
        }
        if terms.len() >= max_steps {
            return Err(CfError::StepBudget(max_steps));
        }
        seen.insert((p, q), terms.len());
        let (a, np, nq) = step(p, q, d, root)?;
        terms.push(a);
        p = np;
        q = nq;
    }
}

fn step(p: i64, q: i64, d: i64, root: i64) -> Result<(i64, i64, i64)> {
    let a = floor_state(p, d, q, root);
    let np = a.checked_mul(q).and_then(|aq| aq.checked_sub(p)).ok_or(CfError::Overflow("advancing P"))?;
    let num = np.checked_mul(np).and_then(|sq| d.checked_sub(sq)).ok_or(CfError::Overflow("advancing Q"))?;
    if num % q != 0 {
        return Err(CfError::Invariant(format!("Q = {q} does not divide D − P'² = {num}")));
    }
    Ok((a, np, num / q))
}

/// The first `n` partial quotients of `s`, without period detection.
pub fn prefix_quotients(s: &QuadraticSurd, n: usize) -> Result<Vec<i64>> {
    let d = s.d();
    let root = isqrt(d as u64) as i64;
    let (mut p, mut q) = (s.p(), s.den());
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let (a, np, nq) = step(p, q, d, root)?;
        out.push(a);
        p = np;
        q = nq;
    }
    Ok(out)
}

/// Expansion of `√q`; its period length is `T₀(q)`.
pub fn expand_sqrt(q: i64) -> Result<CfExpansion> {
    let s = make_surd(1, 0, q)?;
    // for √q the recurrence never leaves 0 < P ≤ √q, 0 < Q ≤ 2√q
    expand(&s)
}

/// A convergent `p_k / q_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConvergentPair {
    pub p: BigInt,
    pub q: BigInt,
}

/// Convergents `p_0/q_0, …, p_k/q_k` of a term sequence given by `term(i)`.
pub fn convergents_of(term: impl Fn(usize) -> i64, k: usize) -> Vec<ConvergentPair> {
    let (mut p_prev, mut q_prev) = (BigInt::one(), BigInt::zero());
    let (mut p_cur, mut q_cur) = (BigInt::from(term(0)), BigInt::one());
    let mut out = Vec::with_capacity(k + 1);
    out.push(ConvergentPair { p: p_cur.clone(), q: q_cur.clone() });
    for i in 1..=k {
        let a = BigInt::from(term(i));
        let p_next = &a * &p_cur + &p_prev;
        let q_next = &a * &q_cur + &q_prev;
        p_prev = std::mem::replace(&mut p_cur, p_next);
        q_prev = std::mem::replace(&mut q_cur, q_next);
        out.push(ConvergentPair { p: p_cur.clone(), q: q_cur.clone() });
    }
    out
}

/// Convergents `p_0/q_0, …, p_k/q_k` of an expansion.
pub fn convergents(cf: &CfExpansion, k: usize) -> Vec<ConvergentPair> {
    convergents_of(|i| cf.term(i), k)
}
