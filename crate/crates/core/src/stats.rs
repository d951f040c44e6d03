//! Partial-quotient statistics for roots of `r x² + p x = q` over ranges of `q`.
//!
//! Everything here enumerates: no sampling, no floating point on the way to a
//! count. Frequencies are exact ratios of integers; only the comparison with
//! the Gauss–Kuz'min limit is done in `f64`.

use num_bigint::BigInt;
use num_rational::BigRational;

use serde::Serialize;

use crate::error::{CfError, Result};
use crate::expansion::{expand, prefix_quotients, CfExpansion};
use crate::fmt::{sig12, CsvRecord};
pub use crate::measure::{
    cylinder_enclosure_subdivision, cylinder_measure, prefix_measure, Measure, DEFAULT_WORK_BUDGET,
};
use crate::par_map;
use crate::surd::{discriminant, is_square, make_surd};

/// Conditions `a_{s_i} = A_i` on partial quotients with `s_i ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CylinderConstraint {
    pub(crate) pairs: Vec<(usize, i64)>,
}

impl CylinderConstraint {
    pub fn new(mut pairs: Vec<(usize, i64)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(CfError::InvalidArgument("a cylinder needs at least one condition".into()));
        }
        if let Some(&(s, a)) = pairs.iter().find(|&&(s, a)| s < 1 || a < 1) {
            return Err(CfError::InvalidArgument(format!("position and value must be ≥ 1, got a_{s} = {a}")));
        }
        pairs.sort_unstable();
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(CfError::InvalidArgument("positions must be distinct".into()));
        }
        Ok(Self { pairs })
    }

    pub fn single(s: usize, a: i64) -> Result<Self> {
        Self::new(vec![(s, a)])
    }

    pub fn pairs(&self) -> &[(usize, i64)] {
        &self.pairs
    }

    pub fn max_position(&self) -> usize {
        self.pairs.last().expect("nonempty").0
    }

    /// Whether the constrained positions are exactly `1..=k`.
    pub fn is_prefix(&self) -> bool {
        self.pairs.iter().enumerate().all(|(i, &(s, _))| s == i + 1)
    }

    pub(crate) fn value_at(&self, s: usize) -> Option<i64> {
        self.pairs.iter().find(|&&(t, _)| t == s).map(|&(_, a)| a)
    }

    /// Checks the condition against `terms[0] = a₀, terms[1] = a₁, …`.
    pub fn holds_for(&self, terms: &[i64]) -> bool {
        self.pairs.iter().all(|&(s, a)| terms.get(s) == Some(&a))
    }
}

/// Whether the number with expansion `cf` lies in the cylinder.
pub fn indicator(cf: &CfExpansion, c: &CylinderConstraint) -> bool {
    c.pairs().iter().all(|&(s, a)| cf.term(s) == a)
}

/// `log₂(1 + 1/(A(A+2)))`, the limiting frequency of a partial quotient `A`.
pub fn gk_limit(a: i64) -> f64 {
    assert!(a >= 1);
    let a = a as f64;
    (1.0 / (a * (a + 2.0))).ln_1p() / std::f64::consts::LN_2
}

/// Count of `q ∈ 1..=R` whose root lies in a cylinder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EmpiricalCount {
    pub count: u64,
    /// Number of `q` with a valid (positive, non-square) discriminant.
    pub total: u64,
    /// Number of `q` skipped for a square or nonpositive discriminant.
    pub excluded: u64,
}

impl EmpiricalCount {
    pub fn frequency(&self) -> BigRational {
        if self.total == 0 {
            return BigRational::from_integer(0.into());
        }
        BigRational::new(self.count.into(), self.total.into())
    }

    pub fn frequency_f64(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.count as f64 / self.total as f64
        }
    }
}

/// `None` for `q` whose discriminant is nonpositive or a square.
fn root_prefix(r: i64, p: i64, q: i64, depth: usize) -> Result<Option<Vec<i64>>> {
    let delta = discriminant(r, p, q)?;
    if delta <= 0 || is_square(delta) {
        return Ok(None);
    }
    Ok(Some(prefix_quotients(&make_surd(r, p, q)?, depth + 1)?))
}

/// Frequency with which `x₊(q)`, `q = 1..=R`, satisfies `c`.
pub fn empirical_p(r: i64, p: i64, big_r: u64, c: &CylinderConstraint) -> Result<EmpiricalCount> {
    if r < 1 {
        return Err(CfError::NonPositiveLeading(r));
    }
    let depth = c.max_position();
    let mut out = EmpiricalCount { count: 0, total: 0, excluded: 0 };
    for q in 1..=big_r as i64 {
        match root_prefix(r, p, q, depth)? {
            None => out.excluded += 1,
            Some(terms) => {
                out.total += 1;
                if c.holds_for(&terms) {
                    out.count += 1;
                }
            }
        }
    }
    Ok(out)
}

/// One `(s, A)` cell of a Gauss–Kuz'min sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GkRow {
    pub s: usize,
    #[serde(rename = "A")]
    pub a: i64,
    pub count: u64,
    pub total: u64,
    pub empirical: f64,
    pub gk_limit: f64,
    pub abs_err: f64,
}

impl CsvRecord for GkRow {
    fn header() -> &'static [&'static str] {
        &["s", "A", "count", "total", "empirical", "gk_limit", "abs_err"]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.s.to_string(),
            self.a.to_string(),
            self.count.to_string(),
            self.total.to_string(),
            sig12(self.empirical),
            sig12(self.gk_limit),
            sig12(self.abs_err),
        ]
    }
}

/// Frequencies of `a_s = A` for every `s ∈ positions`, `A ∈ 1..=a_max`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GkReport {
    pub r: i64,
    pub p: i64,
    pub big_r: u64,
    /// Number of values of `q` looked at: `R` unless sampled.
    pub examined: u64,
    pub excluded_square_delta: u64,
    pub excluded_nonpositive_delta: u64,
    pub rows: Vec<GkRow>,
}

impl GkReport {
    pub fn cell(&self, s: usize, a: i64) -> Option<&GkRow> {
        self.rows.iter().find(|row| row.s == s && row.a == a)
    }
}

const SWEEP_CHUNK: u64 = 16_384;

/// Enumerates `q = 1..=R` once and fills every `(s, A)` cell.
pub fn gk_sweep(r: i64, p: i64, big_r: u64, positions: &[usize], a_max: i64) -> Result<GkReport> {
    if big_r == 0 {
        return Err(CfError::InvalidArgument("R must be ≥ 1".into()));
    }
    let chunks: Vec<std::ops::RangeInclusive<u64>> =
        (0..big_r.div_ceil(SWEEP_CHUNK)).map(|i| i * SWEEP_CHUNK + 1..=((i + 1) * SWEEP_CHUNK).min(big_r)).collect();
    sweep_chunks(r, p, big_r, big_r, chunks, positions, a_max)
}

/// Like [`gk_sweep`] over an explicit list of `q ∈ 1..=R`, repeats allowed.
pub fn gk_sweep_values(
    r: i64,
    p: i64,
    big_r: u64,
    values: &[u64],
    positions: &[usize],
    a_max: i64,
) -> Result<GkReport> {
    if values.is_empty() {
        return Err(CfError::InvalidArgument("no values of q to sweep".into()));
    }
    if let Some(&q) = values.iter().find(|&&q| q == 0 || q > big_r) {
        return Err(CfError::InvalidArgument(format!("q = {q} lies outside 1..={big_r}")));
    }
    let chunks: Vec<Vec<u64>> = values.chunks(SWEEP_CHUNK as usize).map(<[u64]>::to_vec).collect();
    sweep_chunks(r, p, big_r, values.len() as u64, chunks, positions, a_max)
}

fn sweep_chunks<C>(
    r: i64,
    p: i64,
    big_r: u64,
    examined: u64,
    chunks: Vec<C>,
    positions: &[usize],
    a_max: i64,
) -> Result<GkReport>
where
    C: IntoIterator<Item = u64> + Send,
{
    if r < 1 {
        return Err(CfError::NonPositiveLeading(r));
    }
    if positions.is_empty() || a_max < 1 || positions.contains(&0) {
        return Err(CfError::InvalidArgument("positions must be ≥ 1 and A_max ≥ 1".into()));
    }
    let depth = *positions.iter().max().expect("nonempty");
    let width = a_max as usize;
    let partials = par_map(chunks, |chunk| -> Result<(Vec<u64>, u64, u64, u64)> {
        let mut counts = vec![0u64; positions.len() * width];
        let (mut total, mut square, mut nonpos) = (0, 0, 0);
        for q in chunk {
            let delta = discriminant(r, p, q as i64)?;
            if delta <= 0 {
                nonpos += 1;
                continue;
            }
            if is_square(delta) {
                square += 1;
                continue;
            }
            total += 1;
            let terms = prefix_quotients(&make_surd(r, p, q as i64)?, depth + 1)?;
            for (i, &s) in positions.iter().enumerate() {
                let a = terms[s];
                if a <= a_max {
                    counts[i * width + (a - 1) as usize] += 1;
                }
            }
        }
        Ok((counts, total, square, nonpos))
    });
    let mut counts = vec![0u64; positions.len() * width];
    let (mut total, mut square, mut nonpos) = (0, 0, 0);
    for part in partials {
        let (c, t, s, n) = part?;
        counts.iter_mut().zip(c).for_each(|(acc, x)| *acc += x);
        total += t;
        square += s;
        nonpos += n;
    }
    if total + square + nonpos != examined {
        return Err(CfError::Invariant("sweep lost values of q".into()));
    }
    let mut rows = Vec::with_capacity(counts.len());
    for (i, &s) in positions.iter().enumerate() {
        for a in 1..=a_max {
            let count = counts[i * width + (a - 1) as usize];
            let empirical = if total == 0 { 0.0 } else { count as f64 / total as f64 };
            let limit = gk_limit(a);
            rows.push(GkRow { s, a, count, total, empirical, gk_limit: limit, abs_err: (empirical - limit).abs() });
        }
    }
    Ok(GkReport { r, p, big_r, examined, excluded_square_delta: square, excluded_nonpositive_delta: nonpos, rows })
}

/// Mean over valid `q ≤ R` of the share of period terms equal to `A`, for
/// `A = 1..=a_max`. Diagnostic; no limit is claimed for it.
pub fn period_frequencies(r: i64, p: i64, big_r: u64, a_max: i64) -> Result<Vec<f64>> {
    let qs: Vec<i64> = (1..=big_r as i64).collect();
    let shares = par_map(qs, |q| -> Result<Option<Vec<f64>>> {
        let delta = discriminant(r, p, q)?;
        if delta <= 0 || is_square(delta) {
            return Ok(None);
        }
        let cf = expand(&make_surd(r, p, q)?)?;
        let t = cf.t() as f64;
        Ok(Some((1..=a_max).map(|a| cf.period().iter().filter(|&&x| x == a).count() as f64 / t).collect()))
    });
    let mut acc = vec![0.0; a_max as usize];
    let mut n = 0usize;
    for s in shares {
        if let Some(v) = s? {
            n += 1;
            acc.iter_mut().zip(v).for_each(|(a, x)| *a += x);
        }
    }
    Ok(acc.into_iter().map(|x| if n == 0 { 0.0 } else { x / n as f64 }).collect())
}

/// Number of `q ∈ {n²+1, …, n²+2n}` with `√q` in the cylinder; the
/// frequency is this count over `2n`.
pub fn prefix_count(n: u64, c: &CylinderConstraint) -> Result<u64> {
    if n == 0 {
        return Err(CfError::InvalidArgument("n must be ≥ 1".into()));
    }
    let depth = c.max_position();
    let mut count = 0;
    for i in 1..=2 * n {
        let q = (n * n + i) as i64;
        let terms = prefix_quotients(&make_surd(1, 0, q)?, depth + 1)?;
        if c.holds_for(&terms) {
            count += 1;
        }
    }
    Ok(count)
}

/// `prefix_count(n, c) / 2n`.
pub fn prefix_frequency(n: u64, c: &CylinderConstraint) -> Result<BigRational> {
    Ok(BigRational::new(prefix_count(n, c)?.into(), (2 * n).into()))
}

/// Checks `(i−1)/2n < √(n²+i) − n < i/2n` for `i = 1..=2n` in integers.
pub fn riemann_partition_check(n: u64) -> Result<bool> {
    if n == 0 {
        return Err(CfError::InvalidArgument("n must be ≥ 1".into()));
    }
    let n = n as u128;
    Ok((1..=2 * n).all(|i| {
        // multiply through by 2n, then square the positive sides
        let lo = i - 1 + 2 * n * n;
        let hi = i + 2 * n * n;
        let mid_sq = 4 * n * n * (n * n + i);
        lo * lo < mid_sq && mid_sq < hi * hi
    }))
}

/// Both sides of the block decomposition of `P^{1,0}` over `q ≤ R² + 2R`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AggregationIdentity {
    /// Frequency over all `q ≤ R² + 2R`, squares counted as misses.
    pub all_q: BigRational,
    /// `Σ_n (2n / (R²+2R)) · P'_n`.
    pub weighted_blocks: BigRational,
    /// Frequency with squares excluded, i.e. over `R² + R` values.
    pub non_square: BigRational,
    /// `Σ_n (2n / (R²+R)) · P'_n`.
    pub weighted_blocks_non_square: BigRational,
}

impl AggregationIdentity {
    pub fn holds(&self) -> bool {
        self.all_q == self.weighted_blocks && self.non_square == self.weighted_blocks_non_square
    }
}

pub fn aggregation_identity(big_r: u64, c: &CylinderConstraint) -> Result<AggregationIdentity> {
    let n_all = big_r * big_r + 2 * big_r;
    let n_non_square = big_r * big_r + big_r;
    let emp = empirical_p(1, 0, n_all, c)?;
    if emp.excluded != big_r || emp.total != n_non_square {
        return Err(CfError::Invariant(format!("expected {big_r} squares among 1..={n_all}, found {}", emp.excluded)));
    }
    let mut weighted_blocks = BigRational::from_integer(0.into());
    let mut weighted_blocks_non_square = BigRational::from_integer(0.into());
    for n in 1..=big_r {
        let p_n = prefix_frequency(n, c)?;
        let two_n = BigInt::from(2 * n);
        weighted_blocks += BigRational::new(two_n.clone(), n_all.into()) * &p_n;
        weighted_blocks_non_square += BigRational::new(two_n, n_non_square.into()) * &p_n;
    }
    Ok(AggregationIdentity {
        all_q: BigRational::new(emp.count.into(), n_all.into()),
        weighted_blocks,
        non_square: emp.frequency(),
        weighted_blocks_non_square,
    })
}

/// Running average of `T₀` at a checkpoint.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodStatsRow {
    #[serde(rename = "Q")]
    pub q: u64,
    pub t0_sum: u64,
    /// `Σ_{q ≤ Q} T₀(q) / Q`, squares contributing 0.
    pub avg: f64,
    pub max_t0: u64,
    #[serde(skip)]
    pub argmax: u64,
    /// `avg / √Q`.
    pub fit_const: f64,
}

impl CsvRecord for PeriodStatsRow {
    fn header() -> &'static [&'static str] {
        &["Q", "t0_sum", "avg", "max_t0", "fit_const"]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.q.to_string(),
            self.t0_sum.to_string(),
            sig12(self.avg),
            self.max_t0.to_string(),
            sig12(self.fit_const),
        ]
    }
}

/// Checkpoints `1, 2, 5 × 10^k` up to `q_max`, plus `q_max` itself.
pub fn log_checkpoints(q_max: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut scale = 1u64;
    'outer: loop {
        for m in [1, 2, 5] {
            let v = m * scale;
            if v > q_max {
                break 'outer;
            }
            if v >= 2 {
                out.push(v);
            }
        }
        scale *= 10;
    }
    if out.last() != Some(&q_max) {
        out.push(q_max);
    }
    out
}

/// Period-length statistics at the given checkpoints; `t0[q]` holds `T₀(q)`
/// with 0 for squares.
pub fn period_stats_from(t0: &[usize], checkpoints: &[u64]) -> Vec<PeriodStatsRow> {
    let mut rows = Vec::new();
    let (mut sum, mut max, mut argmax) = (0u64, 0u64, 0u64);
    let mut next = checkpoints.iter().peekable();
    for (q, &t) in t0.iter().enumerate().skip(1) {
        sum += t as u64;
        if t as u64 > max {
            max = t as u64;
            argmax = q as u64;
        }
        while next.peek() == Some(&&(q as u64)) {
            let avg = sum as f64 / q as f64;
            rows.push(PeriodStatsRow {
                q: q as u64,
                t0_sum: sum,
                avg,
                max_t0: max,
                argmax,
                fit_const: avg / (q as f64).sqrt(),
            });
            next.next();
        }
    }
    rows
}

pub fn period_stats(q_max: u64) -> Result<Vec<PeriodStatsRow>> {
    if q_max < 2 {
        return Err(CfError::InvalidArgument("Q_max must be ≥ 2".into()));
    }
    let t0 = crate::red::t0_table(q_max as usize)?;
    Ok(period_stats_from(&t0, &log_checkpoints(q_max)))
}

/// Mean partial quotient over one period of one root.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodMeanRow {
    pub r: i64,
    pub p: i64,
    pub q: i64,
    pub delta: i64,
    pub t: usize,
    pub period_sum: i64,
    pub mean: f64,
    pub ln_delta: f64,
}

impl CsvRecord for PeriodMeanRow {
    fn header() -> &'static [&'static str] {
        &["r", "p", "q", "delta", "T", "period_sum", "mean", "ln_delta"]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.r.to_string(),
            self.p.to_string(),
            self.q.to_string(),
            self.delta.to_string(),
            self.t.to_string(),
            self.period_sum.to_string(),
            sig12(self.mean),
            sig12(self.ln_delta),
        ]
    }
}

pub fn period_mean(r: i64, p: i64, q: i64) -> Result<PeriodMeanRow> {
    let cf = expand(&make_surd(r, p, q)?)?;
    let delta = discriminant(r, p, q)?;
    Ok(PeriodMeanRow {
        r,
        p,
        q,
        delta,
        t: cf.t(),
        period_sum: cf.period_sum(),
        mean: cf.period_sum() as f64 / cf.t() as f64,
        ln_delta: (delta as f64).ln(),
    })
}

/// Least-squares line `y = slope·x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub n: usize,
}

pub fn least_squares(points: &[(f64, f64)]) -> Option<LineFit> {
    let n = points.len();
    if n < 2 {
        return None;
    }
    let nf = n as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Some(LineFit { slope, intercept: my - slope * mx, n })
}

/// Period means against `ln Δ`, and `ln mean` against `ln Δ` (the exponent of
/// a power law).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodMeanSummary {
    pub vs_ln_delta: Option<LineFit>,
    pub power_exponent: Option<LineFit>,
}

pub fn period_mean_summary(rows: &[PeriodMeanRow]) -> PeriodMeanSummary {
    let lin: Vec<(f64, f64)> = rows.iter().map(|r| (r.ln_delta, r.mean)).collect();
    let log: Vec<(f64, f64)> = rows.iter().map(|r| (r.ln_delta, r.mean.ln())).collect();
    PeriodMeanSummary { vs_ln_delta: least_squares(&lin), power_exponent: least_squares(&log) }
}
