//! On-disk table of `T₀(q)`: CSV with header `q,t0`, one row per `q = 1, 2, …`
//! in ascending order, `t0 = 0` for perfect squares.

use std::fs;
use std::io::Write;
use std::path::Path;

use quadcf::expand_sqrt;
use quadcf::red::t0_table;

use crate::CliError;

/// Values of `q` re-expanded to check a loaded cache.
const SPOT_CHECKS: usize = 32;

/// Reads a cache; entry `q` of the result is `T₀(q)`, entry 0 is unused.
pub fn load(path: &Path) -> Result<Vec<usize>, CliError> {
    let text = fs::read_to_string(path)?;
    let bad = |line: usize, why: &str| CliError::Cache(format!("{}:{line}: {why}", path.display()));
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("q,t0") {
        return Err(bad(1, "expected header `q,t0`"));
    }
    let mut t0 = vec![0usize];
    for (i, line) in lines.enumerate() {
        let (q, t) = line.split_once(',').ok_or_else(|| bad(i + 2, "expected two fields"))?;
        let q: usize = q.trim().parse().map_err(|_| bad(i + 2, "q is not an integer"))?;
        let t: usize = t.trim().parse().map_err(|_| bad(i + 2, "t0 is not an integer"))?;
        if q != t0.len() {
            return Err(bad(i + 2, "rows must list q = 1, 2, … without gaps"));
        }
        t0.push(t);
    }
    spot_check(&t0).map_err(|q| bad(q + 1, "stored T₀ disagrees with a fresh expansion"))?;
    Ok(t0)
}

fn spot_check(t0: &[usize]) -> Result<(), usize> {
    let n = t0.len() - 1;
    if n == 0 {
        return Ok(());
    }
    let step = (n / SPOT_CHECKS).max(1);
    for q in (1..=n).step_by(step).chain([n]) {
        let expected = match expand_sqrt(q as i64) {
            Ok(cf) => cf.t(),
            Err(_) => 0,
        };
        if t0[q] != expected {
            return Err(q);
        }
    }
    Ok(())
}

/// Writes through a temporary file so readers never see a partial cache.
pub fn store(path: &Path, t0: &[usize]) -> Result<(), CliError> {
    let mut text = String::with_capacity(t0.len() * 8);
    text.push_str("q,t0\n");
    for (q, t) in t0.iter().enumerate().skip(1) {
        text.push_str(&format!("{q},{t}\n"));
    }
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(text.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// How the table was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheUse {
    Disabled,
    Hit,
    Extended,
}

/// `T₀(q)` for `q ≤ limit`, served from and written back to `path` if given.
pub fn t0_cached(limit: usize, path: Option<&Path>) -> Result<(Vec<usize>, CacheUse), CliError> {
    let Some(path) = path else {
        return Ok((t0_table(limit)?, CacheUse::Disabled));
    };
    if path.exists() {
        let t0 = load(path)?;
        if t0.len() > limit {
            return Ok((t0[..=limit].to_vec(), CacheUse::Hit));
        }
    }
    let t0 = t0_table(limit)?;
    store(path, &t0)?;
    Ok((t0, CacheUse::Extended))
}
