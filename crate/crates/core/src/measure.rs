//! Lebesgue measure of cylinder sets `{x ∈ [0,1) : a_{s_i}(x) = A_i}`.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{CfError, Result};
use crate::par_map;
use crate::stats::CylinderConstraint;

/// Lebesgue measure of a cylinder set, as an enclosure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Measure {
    pub lower: f64,
    pub upper: f64,
    /// Exact value, available for prefix cylinders.
    #[serde(skip)]
    pub exact: Option<BigRational>,
    pub nodes: usize,
}

impl Measure {
    pub fn value(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Exact measure `1/(q_k (q_k + q_{k−1}))` of `{x ∈ [0,1): a₁..a_k = A₁..A_k}`.
pub fn prefix_measure(values: &[i64]) -> BigRational {
    let (mut q_prev, mut q_cur) = (BigInt::from(0), BigInt::one());
    for &a in values {
        let next = BigInt::from(a) * &q_cur + &q_prev;
        q_prev = std::mem::replace(&mut q_cur, next);
    }
    let denom = &q_cur * (&q_cur + &q_prev);
    BigRational::new(BigInt::one(), denom)
}

/// Default work budget (grid points times summed terms) for [`cylinder_measure`].
pub const DEFAULT_WORK_BUDGET: usize = 4_000_000_000;

/// Relative allowance for f64 rounding in one evaluation.
const ROUND: f64 = 1e-14;

/// Measure of the cylinder `c`, certified to an enclosure of width ≤ `tol`.
///
/// Prefix cylinders are exact. Otherwise, with `S` the conditions read from
/// position 1 and `S'` the same shifted by one, the weighted measure
/// `G_S(θ) = ∫_S dz / (1 + θz)²` obeys
///
/// `G_S(θ) = Σ_k (k + θ)⁻² G_{S'}(1 / (k + θ))`, `G_∅(θ) = 1 / (1 + θ)`,
///
/// with `k` ranging over the allowed values of the first partial quotient,
/// and `μ(S) = G_S(0)`. Each `G` is kept as an interval per point of a
/// uniform grid on `[0, 1]`. Between grid points `G` is bracketed both by
/// monotonicity (it decreases) and by linear interpolation, whose error is at
/// most `h²/4` since `0 ≤ G'' ≤ 2`. Terms beyond `k = K` are bounded as a
/// block through `Σ_{k>K} (k+θ)⁻² ∈ [1/(K+1+θ), 1/(K+θ)]`.
///
/// Fails with [`CfError::NodeBudget`] when the grid needed for `tol` exceeds
/// `work_budget`.
pub fn cylinder_measure(c: &CylinderConstraint, tol: f64, work_budget: usize) -> Result<Measure> {
    if !(tol > 0.0) {
        return Err(CfError::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    if c.is_prefix() {
        let values: Vec<i64> = c.pairs().iter().map(|&(_, a)| a).collect();
        let exact = prefix_measure(&values);
        let v = exact.to_f64().expect("finite");
        return Ok(Measure { lower: v, upper: v, exact: Some(exact), nodes: 0 });
    }
    let levels = c.max_position() as f64;
    let free = (1..=c.max_position()).filter(|&j| c.value_at(j).is_none()).count();
    // split tol evenly between interpolation and tail, over all levels
    let mut n = (levels / tol).sqrt().ceil() as usize + 1;
    let mut k = (12.0 * levels / tol).sqrt().ceil() as usize + 1;
    loop {
        let work = n.saturating_mul(k.saturating_mul(free) + c.max_position());
        if work > work_budget {
            return Err(CfError::NodeBudget(work_budget));
        }
        let m = transfer_enclosure(c, n, k);
        if m.width() <= tol {
            return Ok(m);
        }
        n *= 2;
        k *= 2;
    }
}

/// `G` on the grid `θ_i = i/n`, or exactly `1/(1+θ)` before any condition.
enum Weighted {
    Empty,
    Grid(Vec<(f64, f64)>),
}

impl Weighted {
    fn eval(&self, phi: f64) -> (f64, f64) {
        match self {
            Weighted::Empty => {
                let v = 1.0 / (1.0 + phi);
                (v * (1.0 - ROUND), v * (1.0 + ROUND))
            }
            Weighted::Grid(g) => {
                let n = g.len() - 1;
                let x = (phi * n as f64).clamp(0.0, n as f64);
                let i = (x.floor() as usize).min(n - 1);
                let t = x - i as f64;
                let h = 1.0 / n as f64;
                let err = h * h / 4.0;
                let (lo0, hi0) = g[i];
                let (lo1, hi1) = g[i + 1];
                let lin_lo = (1.0 - t) * lo0 + t * lo1 - err;
                let lin_hi = (1.0 - t) * hi0 + t * hi1 + err;
                let lo = lin_lo.max(lo1);
                let hi = lin_hi.min(hi0);
                (lo * (1.0 - ROUND) - 1e-300, hi * (1.0 + ROUND) + ROUND * h)
            }
        }
    }
}

fn transfer_enclosure(c: &CylinderConstraint, n: usize, k_max: usize) -> Measure {
    let mut g = Weighted::Empty;
    for j in (1..=c.max_position()).rev() {
        let next = &g;
        let fixed = c.value_at(j);
        let thetas: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        let grid = par_map(thetas, |theta| match fixed {
            Some(a) => {
                let w = a as f64 + theta;
                let (lo, hi) = next.eval(1.0 / w);
                (lo / (w * w), hi / (w * w))
            }
            None => {
                let (mut lo, mut hi) = (0.0, 0.0);
                for k in 1..=k_max {
                    let w = k as f64 + theta;
                    let (l, h) = next.eval(1.0 / w);
                    lo += l / (w * w);
                    hi += h / (w * w);
                }
                let kf = k_max as f64;
                let tail_lo = next.eval(1.0 / (kf + 1.0)).0 / (kf + 1.0 + theta);
                let tail_hi = next.eval(0.0).1 / (kf + theta);
                let slack = ROUND * (1.0 + k_max as f64 * f64::EPSILON);
                ((lo + tail_lo) * (1.0 - slack), (hi + tail_hi) * (1.0 + slack))
            }
        });
        g = Weighted::Grid(grid);
    }
    let Weighted::Grid(grid) = g else { unreachable!("at least one condition") };
    let (lower, upper) = grid[0];
    Measure { lower: lower.max(0.0), upper: upper.min(1.0), exact: None, nodes: n * (k_max + 1) * c.max_position() }
}

/// Conditions beyond position `j`, renumbered from 1.
fn shifted(c: &CylinderConstraint, j: usize) -> Option<CylinderConstraint> {
    let pairs: Vec<(usize, i64)> = c.pairs().iter().filter(|&&(s, _)| s > j).map(|&(s, a)| (s - j, a)).collect();
    (!pairs.is_empty()).then_some(CylinderConstraint { pairs })
}

#[derive(Debug, Clone, Copy)]
struct Node {
    lower: f64,
    upper: f64,
    depth: usize,
    q_prev: u128,
    q_cur: u128,
    lo: u128,
}

impl Node {
    fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        self.width().total_cmp(&other.width())
    }
}

/// Enclosure by best-first subdivision, reachable within `node_budget`
/// refinements and stopping early once its width is at most `tol`.
///
/// Practical only for cylinders whose last condition is at position 3 or
/// less; deeper ones need every prefix enumerated. Kept as an independent
/// check on [`cylinder_measure`].
///
/// A pending piece fixes `a₁..a_d` (denominators `q_{d−1}, q_d`), requires
/// `a_{d+1} ≥ lo` with position `d+1` free, and leaves the conditions beyond
/// `d+1` as a shifted cylinder `S`. Writing `x = [0; a₁..a_d, w]`, the piece
/// is `{w = k + z : k ≥ lo, z ∈ S}` with `|dx/dw| = (q_d w + q_{d−1})⁻²`, so
/// its measure lies between `μ(S) / (q_d (q_d (lo+1) + q_{d−1}))` and
/// `μ(S) · (1/(q_d (q_d lo + q_{d−1})) + 1/(q_d lo + q_{d−1})²)`. The enclosures
/// of the shifted cylinders come from recursive calls at half of `tol`.
pub fn cylinder_enclosure_subdivision(c: &CylinderConstraint, tol: f64, node_budget: usize) -> Measure {
    enclosure_memo(c, tol, node_budget, &mut HashMap::new())
}

fn enclosure_memo(
    c: &CylinderConstraint,
    tol: f64,
    node_budget: usize,
    memo: &mut HashMap<CylinderConstraint, Measure>,
) -> Measure {
    if let Some(m) = memo.get(c) {
        if m.width() <= tol {
            return m.clone();
        }
    }
    let m = enclosure_uncached(c, tol, node_budget, memo);
    memo.insert(c.clone(), m.clone());
    m
}

fn enclosure_uncached(
    c: &CylinderConstraint,
    tol: f64,
    node_budget: usize,
    memo: &mut HashMap<CylinderConstraint, Measure>,
) -> Measure {
    if c.is_prefix() {
        let values: Vec<i64> = c.pairs().iter().map(|&(_, a)| a).collect();
        let v = prefix_measure(&values).to_f64().expect("finite");
        return Measure { lower: v, upper: v, exact: None, nodes: 0 };
    }
    let max_s = c.max_position();
    let mut nodes = 0usize;
    // sub[j] encloses μ(S_j) for a free position j
    let mut sub = vec![(1.0, 1.0); max_s + 1];
    for j in 1..max_s {
        if c.value_at(j).is_none() {
            let s = shifted(c, j).expect("max position lies beyond j");
            let m = enclosure_memo(&s, tol / 2.0, node_budget, memo);
            nodes += m.nodes;
            sub[j] = (m.lower, m.upper);
        }
    }
    let bound = |depth: usize, q_prev: u128, q_cur: u128, lo: u128| -> Node {
        let (q, qp, l) = (q_cur as f64, q_prev as f64, lo as f64);
        let (mu_lo, mu_hi) = sub[depth + 1];
        let mass = 1.0 / (q * (q * l + qp));
        let lower = mu_lo / (q * (q * (l + 1.0) + qp));
        let upper = (mu_hi * (mass + 1.0 / ((q * l + qp) * (q * l + qp)))).min(mass);
        Node { lower, upper, depth, q_prev, q_cur, lo }
    };
    // follows constrained positions from a fixed prefix
    let settle = |mut depth: usize, mut q_prev: u128, mut q_cur: u128| -> std::result::Result<Node, f64> {
        while depth < max_s {
            match c.value_at(depth + 1) {
                Some(a) => {
                    let q = a as u128 * q_cur + q_prev;
                    q_prev = std::mem::replace(&mut q_cur, q);
                    depth += 1;
                }
                None => return Ok(bound(depth, q_prev, q_cur, 1)),
            }
        }
        Err(1.0 / (q_cur as f64 * (q_cur as f64 + q_prev as f64)))
    };

    let mut heap = BinaryHeap::new();
    let mut resolved = 0.0f64;
    match settle(0, 0, 1) {
        Ok(n) => heap.push(n),
        Err(m) => resolved += m,
    }
    let mut width: f64 = heap.iter().map(Node::width).sum();
    while width > tol && nodes < node_budget {
        let Some(n) = heap.pop() else { break };
        nodes += 1;
        width -= n.width();
        let child = settle(n.depth + 1, n.q_cur, n.lo * n.q_cur + n.q_prev);
        let tail = bound(n.depth, n.q_prev, n.q_cur, n.lo + 1);
        match child {
            Ok(ch) => {
                width += ch.width();
                heap.push(ch);
            }
            Err(m) => resolved += m,
        }
        width += tail.width();
        heap.push(tail);
        if nodes.is_multiple_of(4096) {
            width = heap.iter().map(Node::width).sum();
        }
    }
    let lower: f64 = resolved + heap.iter().map(|n| n.lower).sum::<f64>();
    let upper: f64 = resolved + heap.iter().map(|n| n.upper).sum::<f64>();
    // rounding allowance for the f64 accumulation
    let slack = (nodes as f64 + heap.len() as f64 + 16.0) * 4.0 * f64::EPSILON;
    Measure { lower: (lower - slack).max(0.0), upper: (upper + slack).min(1.0), exact: None, nodes }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyl(p: &[(usize, i64)]) -> CylinderConstraint {
        CylinderConstraint::new(p.to_vec()).unwrap()
    }

    #[test]
    fn prefix_measures() {
        let m = cylinder_measure(&cyl(&[(1, 1)]), 1e-9, 10).unwrap();
        assert_eq!(m.exact, Some(BigRational::new(1.into(), 2.into())));
        let m = cylinder_measure(&cyl(&[(1, 2)]), 1e-9, 10).unwrap();
        assert_eq!(m.exact, Some(BigRational::new(1.into(), 6.into())));
        // [0; 2, 3]: q = 7, q' = 2
        assert_eq!(prefix_measure(&[2, 3]), BigRational::new(1.into(), 63.into()));
    }

    #[test]
    fn second_position_closed_form() {
        // Σ_k 1/((k+1)(2k+1)) = 2 ln 2 − 1
        let oracle = 2.0 * std::f64::consts::LN_2 - 1.0;
        let m = cylinder_measure(&cyl(&[(2, 1)]), 1e-6, DEFAULT_WORK_BUDGET).unwrap();
        assert!(m.lower <= oracle && oracle <= m.upper, "{m:?}");
        assert!(m.width() <= 1e-6);
        let m = cylinder_enclosure_subdivision(&cyl(&[(2, 1)]), 1e-6, 1_000_000);
        assert!(m.lower <= oracle && oracle <= m.upper, "{m:?}");
        assert!(m.width() <= 1e-6);
    }

    #[test]
    fn methods_agree() {
        for c in [cyl(&[(3, 1)]), cyl(&[(2, 2), (3, 1)]), cyl(&[(1, 1), (3, 2)])] {
            let a = cylinder_measure(&c, 1e-5, DEFAULT_WORK_BUDGET).unwrap();
            let b = cylinder_enclosure_subdivision(&c, 1e-4, 2_000_000);
            assert!(a.lower <= b.upper && b.lower <= a.upper, "{c:?}: {a:?} vs {b:?}");
        }
    }

    #[test]
    fn single_positions_sum_to_one() {
        // Σ_A μ(a_s = A) = 1; Lebesgue measure is at most 2 ln 2 times Gauss
        // measure, so the tail beyond A = 30 is below 2/31
        for s in [2, 4] {
            let (mut lo, mut hi) = (0.0, 0.0);
            for a in 1..=30 {
                let m =
                    cylinder_measure(&CylinderConstraint::single(s, a).unwrap(), 1e-5, DEFAULT_WORK_BUDGET).unwrap();
                lo += m.lower;
                hi += m.upper;
            }
            assert!(lo <= 1.0 && 1.0 <= hi + 2.0 / 31.0, "s = {s}: [{lo}, {hi}]");
        }
    }

    #[test]
    fn work_budget_error() {
        assert_eq!(cylinder_measure(&cyl(&[(3, 1)]), 1e-12, 1000), Err(CfError::NodeBudget(1000)));
        assert!(cylinder_measure(&cyl(&[(3, 1)]), 0.0, 1000).is_err());
    }
}
