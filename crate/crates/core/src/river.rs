//! The gradual mediant walk along the river of `r v² + p v u − q u²`.
//!
//! A superbasis on the river is summarised by three integers: the form value
//! `a > 0` on the side above the line `v = x u`, the value `b < 0` below it,
//! and the common difference `h` of the arithmetic progression across the
//! edge between them. Every step inserts the mediant vector, whose value is
//! `c = a + b + h`, and keeps `h² − 4ab = Δ` fixed. Runs of steps on the same
//! side are the partial quotients; the walk is periodic because only finitely
//! many triples satisfy the discriminant identity.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::divisor::{f_bound, TauSource, TrialDivision};
use crate::error::{CfError, Result};
use crate::expansion::{expand, primitive_period, CfExpansion};
use crate::surd::{discriminant, is_square, isqrt, make_minus_root, make_surd};

/// Which side of the line `v = x₊ u` the freshly inserted mediant lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    /// The mediant is below the line (value `c < 0` on the river).
    Below,
    /// The mediant is above the line (value `c > 0` on the river).
    Above,
}

impl Side {
    pub fn symbol(self) -> char {
        match self {
            Side::Below => '-',
            Side::Above => '+',
        }
    }
}

/// Value triple of a superbasis plus the step counter.
///
/// `h² − 4ab = Δ` always holds. States reached once the walk is on the river
/// additionally satisfy `a > 0 > b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RiverState {
    pub a: i64,
    pub b: i64,
    pub h: i64,
    pub n: u64,
}

impl RiverState {
    pub fn triple(&self) -> (i64, i64, i64) {
        (self.a, self.b, self.h)
    }

    pub fn delta(&self) -> i64 {
        self.h * self.h - 4 * self.a * self.b
    }

    pub fn on_river(&self) -> bool {
        self.a > 0 && self.b < 0
    }

    /// Value of the form at the mediant of the two current vectors.
    pub fn mediant_value(&self) -> i64 {
        self.a + self.b + self.h
    }

    /// The state after the mediant is inserted on `side`.
    fn advance(&self, side: Side) -> RiverState {
        let c = self.mediant_value();
        let (a, b, h) = match side {
            Side::Above => (c, self.b, self.h + 2 * self.b),
            Side::Below => (self.a, c, self.h + 2 * self.a),
        };
        RiverState { a, b, h, n: self.n + 1 }
    }
}

/// One river step: the side is read off the sign of the mediant value.
pub fn river_step(s: &RiverState) -> Result<RiverState> {
    Ok(river_step_sided(s)?.0)
}

fn river_step_sided(s: &RiverState) -> Result<(RiverState, Side)> {
    if !s.on_river() {
        return Err(CfError::Invariant(format!("state {:?} is not on the river", s.triple())));
    }
    let c = s.mediant_value();
    let side = match c.signum() {
        1 => Side::Above,
        -1 => Side::Below,
        _ => return Err(CfError::Invariant(format!("zero form value at a mediant: Δ = {} is a square", s.delta()))),
    };
    let next = s.advance(side);
    if next.delta() != s.delta() {
        return Err(CfError::Invariant(format!("discriminant drifted from {} to {}", s.delta(), next.delta())));
    }
    Ok((next, side))
}

/// States and step sides of a walk, from its first superbasis onwards.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RiverTrace {
    /// State after each step, starting with step 0.
    pub states: Vec<RiverState>,
    /// Side of each step; `sides[i]` produced `states[i + 1]`.
    pub sides: Vec<Side>,
    /// Index of the partial quotient whose run contains step `n0`
    /// (0 when the walk starts on the river). Period detection may move it
    /// one run later when that run is cut short by the preperiod.
    pub l0: usize,
    /// First step whose state lies on the river.
    pub n0: usize,
    /// Index of the partial quotient generated by the first run of steps:
    /// 0 when the walked number exceeds 1, otherwise 1.
    pub first_index: usize,
    /// Integer subtracted from `x₊` before walking, so that the walked number
    /// is positive. Nonzero only when `x₊ < 0`; then it equals `a₀`.
    pub shift: i64,
}

impl RiverTrace {
    pub fn last(&self) -> &RiverState {
        self.states.last().expect("trace holds the initial state")
    }

    /// Appends one on-river step.
    pub fn push_step(&mut self) -> Result<()> {
        let (next, side) = river_step_sided(self.last())?;
        self.states.push(next);
        self.sides.push(side);
        Ok(())
    }

    /// Partial-quotient index of the run containing step `n ≥ 1`.
    pub fn segment_of(&self, n: usize) -> usize {
        let mut idx = self.first_index;
        for i in 1..n.min(self.sides.len()) {
            if self.sides[i] != self.sides[i - 1] {
                idx += 1;
            }
        }
        idx
    }
}

/// Exact test of whether `(u, v)` with `u > 0` lies above `v = x₊ u`, where
/// `x₊ = (−p + √Δ) / 2r`.
fn above_plus_line(u: &BigInt, v: &BigInt, r: i64, p: i64, delta: i64) -> bool {
    // v/u > x₊  ⇔  2rv + pu > u√Δ
    let lhs = BigInt::from(2 * r) * v + BigInt::from(p) * u;
    if !lhs.is_positive() {
        return false;
    }
    &lhs * &lhs > u * u * BigInt::from(delta)
}

/// Starts the walk for `r x² + p x = q` and runs it until it is on the river.
///
/// With `rq > 0` the first superbasis `{(0,1), (1,0), (1,1)}` is already on
/// the river and the triple is `(r, −q, p)`. Otherwise the walk tracks the
/// two lattice vectors explicitly, deciding each side by exact comparison
/// with `x₊`, until the lower vector passes the other root.
pub fn init_river(r: i64, p: i64, q: i64) -> Result<(RiverState, RiverTrace)> {
    if r <= 0 {
        return Err(CfError::NonPositiveLeading(r));
    }
    let delta = discriminant(r, p, q)?;
    if delta <= 0 {
        return Err(CfError::NonPositiveDiscriminant(delta));
    }
    if is_square(delta) {
        return Err(CfError::SquareDiscriminant(delta));
    }

    // x₊ < 0: substitute v → v + k u with k = ⌊x₊⌋
    let root = isqrt(delta as u64) as i64;
    let k = (root - p).div_euclid(2 * r);
    let (shift, p, q) = if k < 0 {
        let ovf = || CfError::Overflow("shifting the form");
        let p2 = k.checked_mul(2 * r).and_then(|x| x.checked_add(p)).ok_or_else(ovf)?;
        let q2 = k
            .checked_mul(k)
            .and_then(|kk| kk.checked_mul(r))
            .and_then(|x| x.checked_add(p * k))
            .and_then(|x| q.checked_sub(x))
            .ok_or_else(ovf)?;
        (k, p2, q2)
    } else {
        (0, p, q)
    };

    let start = RiverState { a: r, b: -q, h: p, n: 0 };
    let mut trace = RiverTrace { states: vec![start], sides: Vec::new(), l0: 0, n0: 0, first_index: 0, shift };
    if !start.on_river() {
        // upper (0,1) and lower (1,0)
        let (mut upper, mut lower) = ((BigInt::zero(), BigInt::from(1)), (BigInt::from(1), BigInt::zero()));
        let mut state = start;
        while !state.on_river() {
            let u = &upper.0 + &lower.0;
            let v = &upper.1 + &lower.1;
            let side = if above_plus_line(&u, &v, r, p, delta) {
                upper = (u, v);
                Side::Above
            } else {
                lower = (u, v);
                Side::Below
            };
            state = state.advance(side);
            if state.delta() != delta {
                return Err(CfError::Invariant("discriminant drifted before the river".into()));
            }
            trace.states.push(state);
            trace.sides.push(side);
        }
        trace.n0 = trace.sides.len();
    }
    trace.first_index = match trace.sides.first() {
        Some(Side::Above) => 1,
        Some(Side::Below) => 0,
        // a first river step would reveal it; x > 1 iff the mediant 1/1 is below
        None if start.mediant_value() < 0 => 0,
        None => 1,
    };
    if trace.n0 > 0 {
        trace.l0 = trace.segment_of(trace.n0);
    }
    Ok((*trace.last(), trace))
}

/// Run lengths of equal consecutive sides, in order.
pub fn quotients_from_trace(t: &RiverTrace) -> Vec<i64> {
    run_lengths(&t.sides)
}

fn run_lengths(sides: &[Side]) -> Vec<i64> {
    let mut out: Vec<i64> = Vec::new();
    for (i, s) in sides.iter().enumerate() {
        if i > 0 && sides[i - 1] == *s {
            *out.last_mut().unwrap() += 1;
        } else {
            out.push(1);
        }
    }
    out
}

/// Period of the river walk: the first recurrence of a triple after `n0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodReport {
    pub delta: i64,
    pub n0: usize,
    pub n1: usize,
    /// `n1 − n0`, which equals the sum of `quotients`.
    pub period_sum: i64,
    pub l0: usize,
    pub l1: usize,
    /// `a_{l0+1}, …, a_{l1}`.
    pub quotients: Vec<i64>,
    /// Primitive period of `quotients`.
    pub minimal_period: Vec<i64>,
    /// Whether `l1 − l0` is even.
    pub cycle_parity_even: bool,
    /// Every river state visited from `n0` through `n1`.
    pub cycle_states: Vec<RiverState>,
    /// Sides of steps `n0 + 1 ..= n1`.
    pub cycle_sides: Vec<Side>,
    pub trace: RiverTrace,
}

impl PeriodReport {
    /// Side of step `n ≥ 1`, extending the cycle periodically.
    pub fn side_at(&self, n: usize) -> Side {
        if n <= self.n0 {
            self.trace.sides[n - 1]
        } else {
            self.cycle_sides[(n - self.n0 - 1) % self.cycle_sides.len()]
        }
    }

    /// `count` partial quotients starting at index `from`, read from the walk.
    ///
    /// Indices below `trace.first_index` (and `a₀` of a shifted walk) are not
    /// produced by the walk; asking for them is an error.
    pub fn quotients_from(&self, from: usize, count: usize) -> Result<Vec<i64>> {
        if from < self.trace.first_index {
            return Err(CfError::InvalidArgument(format!("the walk starts at index {}", self.trace.first_index)));
        }
        let mut out = Vec::with_capacity(count);
        let mut idx = self.trace.first_index;
        let mut len = 1i64;
        let mut prev = self.side_at(1);
        let mut n = 2;
        while out.len() < count {
            let s = self.side_at(n);
            if s == prev {
                len += 1;
            } else {
                if idx >= from {
                    out.push(len);
                }
                idx += 1;
                len = 1;
                prev = s;
            }
            n += 1;
        }
        Ok(out)
    }
}

/// Walks from the first river state until a triple recurs.
///
/// The walk may take at most `f(Δ/4) + 1` river steps; exceeding that would
/// contradict the period bound, so it is reported as an internal error.
pub fn detect_period(r: i64, p: i64, q: i64) -> Result<PeriodReport> {
    let delta = discriminant(r, p, q)?;
    let bound = f_bound(delta, &TrialDivision);
    detect_period_with(r, p, q, bound)
}

/// As [`detect_period`], taking `τ` from a precomputed source.
pub fn detect_period_tau(r: i64, p: i64, q: i64, taus: &impl TauSource) -> Result<PeriodReport> {
    let delta = discriminant(r, p, q)?;
    detect_period_with(r, p, q, f_bound(delta, taus))
}

fn detect_period_with(r: i64, p: i64, q: i64, bound: Result<u64>) -> Result<PeriodReport> {
    let (start, mut trace) = init_river(r, p, q)?;
    let bound = bound?;
    let delta = start.delta();
    let n0 = trace.n0;

    let mut seen: HashMap<(i64, i64, i64), usize> = HashMap::new();
    seen.insert(start.triple(), n0);
    let n1 = loop {
        if trace.sides.len() - n0 > bound as usize + 1 {
            return Err(CfError::BoundExceeded { steps: trace.sides.len() - n0, bound });
        }
        trace.push_step()?;
        let st = *trace.last();
        let n = trace.sides.len();
        if let Some(&prev) = seen.get(&st.triple()) {
            if prev != n0 {
                return Err(CfError::Invariant(format!("river walk re-entered at step {prev}, not at {n0}")));
            }
            break n;
        }
        seen.insert(st.triple(), n);
    };

    let cycle_states = trace.states[n0..=n1].to_vec();
    let cycle_sides = trace.sides[n0..n1].to_vec();
    // If a run boundary falls at n0 in the walk but not in the periodic
    // extension, the run through n0 + 1 is a truncated preperiod run; the
    // cycle is read from the run after it.
    let next = cycle_sides[0];
    let boundary_at_n0 = n0 == 0 || trace.sides[n0 - 1] != next;
    if boundary_at_n0 && cycle_sides[cycle_sides.len() - 1] == next {
        trace.l0 = trace.segment_of(n0 + 1);
    }
    // keep the trace to the pre-river part plus the cycle
    let mut report = PeriodReport {
        delta,
        n0,
        n1,
        period_sum: (n1 - n0) as i64,
        l0: trace.l0,
        l1: 0,
        quotients: Vec::new(),
        minimal_period: Vec::new(),
        cycle_parity_even: false,
        cycle_states,
        cycle_sides,
        trace,
    };

    let runs_in_cycle = cyclic_run_count(&report.cycle_sides);
    if !runs_in_cycle.is_multiple_of(2) {
        return Err(CfError::Invariant(format!("odd number {runs_in_cycle} of runs in a river cycle")));
    }
    report.cycle_parity_even = true;
    report.l1 = report.l0 + runs_in_cycle;
    report.quotients = report.quotients_from(report.l0 + 1, runs_in_cycle)?;
    if report.quotients.iter().sum::<i64>() != report.period_sum {
        return Err(CfError::Invariant(format!(
            "quotient sum {} differs from step count {}",
            report.quotients.iter().sum::<i64>(),
            report.period_sum
        )));
    }
    report.minimal_period = primitive_period(&report.quotients).to_vec();
    let t = report.minimal_period.len();
    let expected = if t % 2 == 1 { 2 * t } else { t };
    if runs_in_cycle != expected {
        return Err(CfError::Invariant(format!("cycle of {runs_in_cycle} quotients for a primitive period of {t}")));
    }
    Ok(report)
}

fn cyclic_run_count(sides: &[Side]) -> usize {
    let n = sides.len();
    (0..n).filter(|&i| sides[i] != sides[(i + n - 1) % n]).count()
}

/// Outcome of checking the period-sum bound for one equation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodBoundRecord {
    pub r: i64,
    pub p: i64,
    pub q: i64,
    pub delta: i64,
    pub t: usize,
    pub period_sum: i64,
    /// `f(Δ/4)`.
    pub bound: u64,
    pub odd_period: bool,
    /// `f(Δ/4)`, halved for odd periods.
    pub effective_bound: f64,
    /// `period_sum / effective_bound`.
    pub ratio: f64,
    pub ok: bool,
}

/// Checks `Σ a_{m+i} ≤ f(Δ/4)` over one primitive period, with the bound
/// halved when the period is odd.
pub fn check_period_bound(r: i64, p: i64, q: i64) -> Result<PeriodBoundRecord> {
    check_period_bound_tau(r, p, q, &TrialDivision)
}

pub fn check_period_bound_tau(r: i64, p: i64, q: i64, taus: &impl TauSource) -> Result<PeriodBoundRecord> {
    let cf = expand(&make_surd(r, p, q)?)?;
    let delta = discriminant(r, p, q)?;
    Ok(period_bound_record(r, p, q, delta, &cf, f_bound(delta, taus)?))
}

pub(crate) fn period_bound_record(
    r: i64,
    p: i64,
    q: i64,
    delta: i64,
    cf: &CfExpansion,
    bound: u64,
) -> PeriodBoundRecord {
    let period_sum = cf.period_sum();
    let odd_period = cf.t() % 2 == 1;
    let (ok, effective_bound) = if odd_period {
        (2 * period_sum as u64 <= bound, bound as f64 / 2.0)
    } else {
        (period_sum as u64 <= bound, bound as f64)
    };
    PeriodBoundRecord {
        r,
        p,
        q,
        delta,
        t: cf.t(),
        period_sum,
        bound,
        odd_period,
        effective_bound,
        ratio: period_sum as f64 / effective_bound,
        ok,
    }
}

/// Symmetry properties of a period.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PalindromeReport {
    /// Smallest left rotation of the period that reads the same backwards.
    pub palindromic_rotation: Option<usize>,
    /// The reversed period is a rotation of the period.
    pub reversal_symmetric: bool,
    /// The period without its last term is a palindrome.
    pub palindrome_without_last: bool,
    /// Symmetry is guaranteed here (`p = 0` or `r = 1`).
    pub expected: bool,
    /// `!expected || reversal_symmetric`.
    pub ok: bool,
}

fn is_palindrome(s: &[i64]) -> bool {
    s.iter().eq(s.iter().rev())
}

fn is_rotation(a: &[i64], b: &[i64]) -> bool {
    a.len() == b.len() && (0..a.len().max(1)).any(|k| a[k..].iter().chain(&a[..k]).eq(b.iter()))
}

/// Reports the symmetry of `cf`'s period; symmetry is expected when `p = 0`
/// or `r = 1`.
pub fn palindrome_check(cf: &CfExpansion, r: i64, p: i64) -> PalindromeReport {
    let per = cf.period();
    let palindromic_rotation = (0..per.len()).find(|&k| {
        let rot: Vec<i64> = per[k..].iter().chain(&per[..k]).copied().collect();
        is_palindrome(&rot)
    });
    let reversed: Vec<i64> = per.iter().rev().copied().collect();
    let reversal_symmetric = is_rotation(per, &reversed);
    let expected = p == 0 || r == 1;
    PalindromeReport {
        palindromic_rotation,
        reversal_symmetric,
        palindrome_without_last: is_palindrome(&per[..per.len() - 1]),
        expected,
        ok: !expected || reversal_symmetric,
    }
}

/// Whether the period of `x₋` is a rotation of the reversed period of `x₊`.
/// Diagnostic only.
pub fn minus_root_relation(r: i64, p: i64, q: i64) -> Result<bool> {
    let plus = expand(&make_surd(r, p, q)?)?;
    let minus = expand(&make_minus_root(r, p, q)?)?;
    let reversed: Vec<i64> = plus.period().iter().rev().copied().collect();
    Ok(is_rotation(minus.period(), &reversed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::expand_sqrt;

    fn st(a: i64, b: i64, h: i64) -> RiverState {
        RiverState { a, b, h, n: 0 }
    }

    #[test]
    fn sqrt2_trace() {
        // must match the published table before anything else is trusted
        let (s, trace) = init_river(1, 0, 2).unwrap();
        assert_eq!(s.triple(), (1, -2, 0));
        assert_eq!(trace.l0, 0);
        assert_eq!(s.delta(), 8);
        let mut cur = s;
        let mut rows = Vec::new();
        for _ in 0..5 {
            cur = river_step(&cur).unwrap();
            rows.push(cur.triple());
        }
        assert_eq!(rows, vec![(1, -1, 2), (2, -1, 0), (1, -1, -2), (1, -2, 0), (1, -1, 2)]);
    }

    #[test]
    fn step_examples() {
        assert_eq!(river_step(&st(1, -2, 0)).unwrap().triple(), (1, -1, 2));
        assert_eq!(river_step(&st(1, -1, 2)).unwrap().triple(), (2, -1, 0));
        assert_eq!(river_step(&st(2, -1, 0)).unwrap().triple(), (1, -1, -2));
        assert_eq!(river_step(&st(1, -1, -2)).unwrap().triple(), (1, -2, 0));
        assert!(river_step(&st(-1, -2, 0)).is_err());
        // h² − 4ab = 4 is a square: the mediant value vanishes
        assert!(matches!(river_step(&st(1, -1, 0)), Err(CfError::Invariant(_))));
    }

    #[test]
    fn init_examples() {
        let (s, t) = init_river(1, 1, 1).unwrap();
        assert_eq!(s.triple(), (1, -1, 1));
        assert_eq!(s.delta(), 5);
        assert_eq!(t.l0, 0);
        assert!(init_river(1, 0, 4).is_err());
        assert!(init_river(1, 0, -1).is_err());
    }

    #[test]
    fn period_examples() {
        let rep = detect_period(1, 0, 2).unwrap();
        assert_eq!((rep.n0, rep.n1, rep.period_sum), (0, 4, 4));
        assert_eq!(rep.quotients, vec![2, 2]);
        assert_eq!(rep.minimal_period, vec![2]);

        let rep = detect_period(1, 0, 3).unwrap();
        assert_eq!(rep.minimal_period, vec![1, 2]);
        assert_eq!(rep.quotients, expand_sqrt(3).unwrap().period());

        let rep = detect_period(1, 1, 1).unwrap();
        assert_eq!(rep.minimal_period, vec![1]);
        assert!(rep.quotients.iter().all(|&a| a == 1));
    }

    #[test]
    fn trace_runs() {
        let rep = detect_period(1, 0, 2).unwrap();
        let mut t = rep.trace.clone();
        while t.sides.len() < 5 {
            t.push_step().unwrap();
        }
        t.sides.truncate(5);
        assert_eq!(t.sides.iter().map(|s| s.symbol()).collect::<String>(), "-++--");
        assert_eq!(quotients_from_trace(&t), vec![1, 2, 2]);
        assert_eq!(run_lengths(&[Side::Above; 4]), vec![4]);
        let alt: Vec<Side> = (0..6).map(|i| if i % 2 == 0 { Side::Above } else { Side::Below }).collect();
        assert_eq!(run_lengths(&alt), vec![1; 6]);
    }

    #[test]
    fn pre_river_phase() {
        // two positive roots (5 ± √13)/2
        let (s, t) = init_river(1, -5, -3).unwrap();
        assert!(s.on_river());
        assert!(t.n0 > 0);
        let cf = expand(&make_surd(1, -5, -3).unwrap()).unwrap();
        let rep = detect_period(1, -5, -3).unwrap();
        let from = rep.l0 + 1;
        assert_eq!(rep.quotients_from(from, 12).unwrap(), (from..from + 12).map(|i| cf.term(i)).collect::<Vec<_>>());
        // two negative roots
        let (_, t) = init_river(1, 7, -3).unwrap();
        assert!(t.shift < 0);
        let cf = expand(&make_surd(1, 7, -3).unwrap()).unwrap();
        assert_eq!(cf.a0(), t.shift);
        let rep = detect_period(1, 7, -3).unwrap();
        let from = rep.l0 + 1;
        assert_eq!(rep.quotients_from(from, 12).unwrap(), (from..from + 12).map(|i| cf.term(i)).collect::<Vec<_>>());
    }

    #[test]
    fn period_bound_examples() {
        let rec = check_period_bound(1, 0, 2).unwrap();
        assert_eq!((rec.period_sum, rec.bound, rec.odd_period), (2, 4, true));
        assert_eq!(rec.effective_bound, 2.0);
        assert!(rec.ok);
        let rec = check_period_bound(1, 0, 3).unwrap();
        assert_eq!((rec.period_sum, rec.bound, rec.odd_period), (3, 6, false));
        assert!(rec.ok);
        let rec = check_period_bound(1, 1, 1).unwrap();
        assert_eq!((rec.period_sum, rec.bound), (1, 2));
        assert!(rec.ok);
    }

    #[test]
    fn palindromes() {
        let rep = palindrome_check(&expand_sqrt(13).unwrap(), 1, 0);
        assert!(rep.palindrome_without_last && rep.reversal_symmetric && rep.ok);
        assert_eq!(rep.palindromic_rotation, Some(2));
        let two = CfExpansion::new(vec![1], vec![2]).unwrap();
        assert_eq!(palindrome_check(&two, 1, 0).palindromic_rotation, Some(0));
        let odd = CfExpansion::new(vec![0], vec![1, 2, 3]).unwrap();
        let rep = palindrome_check(&odd, 2, 1);
        assert!(!rep.expected && rep.ok && !rep.reversal_symmetric);
        // √3 = [1; (1,2)] has no palindromic rotation but is reversal-symmetric
        let rep = palindrome_check(&expand_sqrt(3).unwrap(), 1, 0);
        assert_eq!(rep.palindromic_rotation, None);
        assert!(rep.reversal_symmetric && rep.ok);
    }

    #[test]
    fn minus_root_periods() {
        for (r, p, q) in [(1, 0, 2), (1, 1, 1), (2, 1, 4), (3, -2, 7), (5, 4, 11)] {
            assert!(minus_root_relation(r, p, q).unwrap(), "({r},{p},{q})");
        }
    }
}
