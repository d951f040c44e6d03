use std::path::Path;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use quadcf::divisor::DivisorTable;
use quadcf::fmt::sig12;
use quadcf::red::{
    prime_classes_check, prime_product, product_threshold, red_census_from, t0_bound_record, FactorSieve,
};
use quadcf::stats::{
    cylinder_measure, gk_sweep, gk_sweep_values, log_checkpoints, period_frequencies, period_mean, period_mean_summary,
    period_stats_from, CylinderConstraint, PeriodMeanRow, DEFAULT_WORK_BUDGET,
};
use quadcf::surd::{discriminant, is_square};
use quadcf::{detect_period, expand, make_surd, par_map, river::check_period_bound_tau, PeriodBoundRecord};

use crate::cache::{t0_cached, CacheUse};
use crate::output::Table;
use crate::CliError;

/// What a subcommand produced: the table, human-readable notes for stderr,
/// and the number of bound violations found (nonzero makes the run fail).
pub struct Outcome {
    pub table: Table,
    pub notes: Vec<String>,
    pub violations: usize,
}

fn join(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")
}

pub fn expand_cmd(r: i64, p: i64, q: i64) -> Result<Outcome, CliError> {
    let cf = expand(&make_surd(r, p, q)?)?;
    let delta = discriminant(r, p, q)?;
    let mut t = Table::new(&["r", "p", "q", "delta", "a0", "m", "T", "preperiod", "period", "period_sum"])
        .with_text(&["preperiod", "period"]);
    t.push(vec![
        r.to_string(),
        p.to_string(),
        q.to_string(),
        delta.to_string(),
        cf.a0().to_string(),
        cf.m().to_string(),
        cf.t().to_string(),
        join(cf.preperiod()),
        join(cf.period()),
        cf.period_sum().to_string(),
    ]);
    Ok(Outcome { table: t, notes: vec![format!("x₊ = {cf}")], violations: 0 })
}

/// Rows `0..=steps` of the walk; by default one full period plus one step,
/// so the first river triple shows up again in the last row.
pub fn river_cmd(r: i64, p: i64, q: i64, steps: Option<usize>) -> Result<Outcome, CliError> {
    let rep = detect_period(r, p, q)?;
    let steps = steps.unwrap_or(rep.n1 + 1);
    let mut trace = rep.trace.clone();
    while trace.states.len() <= steps {
        trace.push_step()?;
    }
    let mut t = Table::new(&["step", "segment", "a", "b", "h", "side"]);
    for (n, s) in trace.states.iter().enumerate().take(steps + 1) {
        let (segment, side) = if n == 0 {
            (String::new(), String::new())
        } else {
            (trace.segment_of(n).to_string(), trace.sides[n - 1].symbol().to_string())
        };
        t.push(vec![n.to_string(), segment, s.a.to_string(), s.b.to_string(), s.h.to_string(), side]);
    }
    let notes = vec![format!(
        "on the river from step {}; period closes at step {} ({} steps); quotient cycle [{}]",
        rep.n0,
        rep.n1,
        rep.n1 - rep.n0,
        join(&rep.quotients)
    )];
    Ok(Outcome { table: t, notes, violations: 0 })
}

pub struct GkArgs {
    pub r: i64,
    pub p: i64,
    pub big_r: u64,
    pub positions: Vec<usize>,
    pub a_max: i64,
    pub mu: bool,
    pub period_freq: bool,
    pub sample: Option<u64>,
    pub seed: u64,
    pub tolerance: f64,
}

pub fn gk_cmd(a: &GkArgs) -> Result<Outcome, CliError> {
    if a.big_r == 0 {
        return Err(CliError::Usage("R must be at least 1".into()));
    }
    let report = match a.sample {
        None => gk_sweep(a.r, a.p, a.big_r, &a.positions, a.a_max)?,
        Some(n) => {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            let values: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=a.big_r)).collect();
            gk_sweep_values(a.r, a.p, a.big_r, &values, &a.positions, a.a_max)?
        }
    };
    let mut table = Table::from_records(&report.rows);
    let mut notes = vec![
        format!(
            "examined {} values of q: {} counted, {} excluded for a square discriminant, {} for a nonpositive one",
            report.examined,
            report.rows.first().map_or(0, |r| r.total),
            report.excluded_square_delta,
            report.excluded_nonpositive_delta
        ),
        "gaps to the limit are compared against empirical thresholds only; no convergence rate is known".into(),
    ];
    if a.mu {
        let cells: Vec<(usize, i64)> = report.rows.iter().map(|row| (row.s, row.a)).collect();
        let (mut lo, mut hi) = (Vec::new(), Vec::new());
        for (s, val) in cells {
            let m = cylinder_measure(&CylinderConstraint::single(s, val)?, a.tolerance, DEFAULT_WORK_BUDGET)?;
            lo.push(sig12(m.lower));
            hi.push(sig12(m.upper));
        }
        table.add_column("mu_lower", lo);
        table.add_column("mu_upper", hi);
    }
    if a.period_freq {
        let freq = period_frequencies(a.r, a.p, a.big_r, a.a_max)?;
        let col = report.rows.iter().map(|row| sig12(freq[(row.a - 1) as usize])).collect();
        table.add_column("period_freq", col);
    }
    if a.sample.is_some() {
        table.add_column("seed", vec![a.seed.to_string(); table.rows.len()]);
        notes.push(format!("sampled with seed {}", a.seed));
    }
    Ok(Outcome { table, notes, violations: 0 })
}

fn cache_note(u: CacheUse, path: Option<&Path>) -> Option<String> {
    let p = path?.display();
    Some(match u {
        CacheUse::Disabled => return None,
        CacheUse::Hit => format!("T₀ served from cache {p}"),
        CacheUse::Extended => format!("T₀ computed and written to cache {p}"),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum PeriodsReport {
    /// Running averages of T₀ at logarithmic checkpoints.
    Stats,
    /// T₀(Q) against D(Q) for every non-square Q.
    Bound,
}

pub fn periods_cmd(q_max: u64, report: PeriodsReport, cache: Option<&Path>) -> Result<Outcome, CliError> {
    if q_max < 2 {
        return Err(CliError::Usage("Q_max must be at least 2".into()));
    }
    let (t0, used) = t0_cached(q_max as usize, cache)?;
    let taus = DivisorTable::new(q_max as usize);
    let records: Vec<_> =
        (1..=q_max).filter(|&q| !is_square(q as i64)).map(|q| t0_bound_record(q, t0[q as usize], &taus)).collect();
    let violations = records.iter().filter(|h| !h.ok).count();
    let worst = records
        .iter()
        .max_by(|a, b| (a.t0 as f64 / a.d as f64).total_cmp(&(b.t0 as f64 / b.d as f64)))
        .expect("Q_max ≥ 2 leaves a non-square");
    let stats = period_stats_from(&t0, &log_checkpoints(q_max));
    let last = stats.last().expect("Q_max is a checkpoint");
    let mut notes: Vec<String> = cache_note(used, cache).into_iter().collect();
    notes.push(format!(
        "T₀ ≤ D: {} non-square Q checked, {violations} violations; largest T₀/D = {}/{} at Q = {}",
        records.len(),
        worst.t0,
        worst.d,
        worst.q
    ));
    notes.push(format!("longest period up to {q_max}: T₀ = {} at Q = {}", last.max_t0, last.argmax));
    let table = match report {
        PeriodsReport::Stats => Table::from_records(&stats),
        PeriodsReport::Bound => {
            let mut t = Table::new(&["q", "t0", "D", "ok"]);
            for h in &records {
                t.push(vec![h.q.to_string(), h.t0.to_string(), h.d.to_string(), h.ok.to_string()]);
            }
            t
        }
    };
    Ok(Outcome { table, notes, violations })
}

pub fn red_cmd(n: u64, product_limit: u64, cache: Option<&Path>) -> Result<Outcome, CliError> {
    if n < 2 {
        return Err(CliError::Usage("n must be at least 2".into()));
    }
    let n = n as usize;
    let (t0, used) = t0_cached(n, cache)?;
    let census = red_census_from(n, &t0);
    let product = prime_product(product_limit as usize)?;
    let threshold = product_threshold(n, &t0, product.value);
    let primes = prime_classes_check(n)?;
    let mut t = Table::new(&[
        "n",
        "k_count",
        "m_count",
        "m_count_positive",
        "ratio",
        "ratio_positive",
        "product_limit",
        "product",
        "product_lower",
        "k_below_m_product",
        "threshold_n0",
        "primes_checked",
        "prime_counterexamples",
    ]);
    t.push(vec![
        n.to_string(),
        census.k_count.to_string(),
        census.m_count.to_string(),
        census.m_count_positive.to_string(),
        sig12(census.ratio),
        sig12(census.ratio_positive),
        product_limit.to_string(),
        sig12(product.value),
        sig12(product.lower_bound),
        ((census.k_count as f64) < census.m_count as f64 * product.value).to_string(),
        threshold.map_or(String::new(), |v| v.to_string()),
        primes.primes_checked.to_string(),
        primes.counterexamples.len().to_string(),
    ]);
    let mut notes: Vec<String> = cache_note(used, cache).into_iter().collect();
    if !primes.counterexamples.is_empty() {
        notes.push(format!("primes breaking the mod-4 classification: {:?}", primes.counterexamples));
    }
    Ok(Outcome { table: t, notes, violations: primes.counterexamples.len() })
}

fn triples(r_max: i64, p_max: i64, q_max: i64) -> Result<Vec<(i64, i64, i64)>, CliError> {
    if r_max < 1 || p_max < 0 || q_max < 1 {
        return Err(CliError::Usage("empty parameter range: need r_max ≥ 1, p_max ≥ 0, q_max ≥ 1".into()));
    }
    let mut out = Vec::new();
    for r in 1..=r_max {
        for p in -p_max..=p_max {
            for q in 1..=q_max {
                let delta = discriminant(r, p, q)?;
                if !is_square(delta) {
                    out.push((r, p, q));
                }
            }
        }
    }
    Ok(out)
}

fn period_bound_row(rec: &PeriodBoundRecord) -> Vec<String> {
    vec![
        rec.r.to_string(),
        rec.p.to_string(),
        rec.q.to_string(),
        rec.delta.to_string(),
        rec.t.to_string(),
        rec.period_sum.to_string(),
        rec.bound.to_string(),
        sig12(rec.effective_bound),
        sig12(rec.ratio),
        rec.ok.to_string(),
    ]
}

pub fn bounds_cmd(r_max: i64, p_max: i64, q_max: i64) -> Result<Outcome, CliError> {
    let list = triples(r_max, p_max, q_max)?;
    let delta_max = p_max * p_max + 4 * r_max * q_max;
    let taus = DivisorTable::new((delta_max / 4 + 1) as usize);
    let records = par_map(list, |(r, p, q)| check_period_bound_tau(r, p, q, &taus));
    let records: Vec<PeriodBoundRecord> = records.into_iter().collect::<Result<_, _>>()?;
    let mut t = Table::new(&["r", "p", "q", "delta", "T", "period_sum", "f", "effective_bound", "ratio", "ok"]);
    for rec in &records {
        t.push(period_bound_row(rec));
    }
    let violations = records.iter().filter(|r| !r.ok).count();
    let mut hist = [0usize; 10];
    for rec in &records {
        hist[((rec.ratio * 10.0) as usize).min(9)] += 1;
    }
    let mut notes = vec![
        format!("{} equations checked, {violations} violations", records.len()),
        format!(
            "ratio histogram, bins of 0.1 from 0 to 1: {}",
            hist.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
        ),
    ];
    let sieve = FactorSieve::new(q_max as usize);
    let primes3: Vec<f64> = records
        .iter()
        .filter(|r| r.r == 1 && r.p == 0 && r.q % 4 == 3 && sieve.is_prime(r.q as usize))
        .map(|r| r.ratio)
        .collect();
    if !primes3.is_empty() {
        let mean = primes3.iter().sum::<f64>() / primes3.len() as f64;
        let max = primes3.iter().copied().fold(0.0, f64::max);
        notes.push(format!(
            "√q for primes q ≡ 3 mod 4: {} values, mean ratio {}, max ratio {}",
            primes3.len(),
            sig12(mean),
            sig12(max)
        ));
    }
    Ok(Outcome { table: t, notes, violations })
}

pub fn means_cmd(r_max: i64, p_max: i64, q_max: i64) -> Result<Outcome, CliError> {
    let list = triples(r_max, p_max, q_max)?;
    let rows = par_map(list, |(r, p, q)| period_mean(r, p, q));
    let rows: Vec<PeriodMeanRow> = rows.into_iter().collect::<Result<_, _>>()?;
    let summary = period_mean_summary(&rows);
    let mut notes = Vec::new();
    if let Some(f) = summary.vs_ln_delta {
        notes.push(format!("mean ≈ {} · ln Δ + {} over {} equations", sig12(f.slope), sig12(f.intercept), f.n));
    }
    if let Some(f) = summary.power_exponent {
        notes.push(format!("mean ≈ Δ^{} · {}", sig12(f.slope), sig12(f.intercept.exp())));
    }
    Ok(Outcome { table: Table::from_records(&rows), notes, violations: 0 })
}
