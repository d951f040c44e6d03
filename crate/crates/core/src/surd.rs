//! Exact quadratic surds `(P + √D) / Q` with integer coefficients.

use num_integer::Integer;
use serde::Serialize;

use crate::error::{CfError, Result};

/// Floor of the square root of `n`.
pub fn isqrt(n: u64) -> u64 {
    n.isqrt()
}

/// `Some(root)` when `n` is a perfect square.
pub fn exact_sqrt(n: u64) -> Option<u64> {
    let s = isqrt(n);
    (s * s == n).then_some(s)
}

pub fn is_square(n: i64) -> bool {
    n >= 0 && exact_sqrt(n as u64).is_some()
}

/// `p² + 4rq`, checked.
pub fn discriminant(r: i64, p: i64, q: i64) -> Result<i64> {
    p.checked_mul(p)
        .and_then(|pp| r.checked_mul(q)?.checked_mul(4)?.checked_add(pp))
        .ok_or(CfError::Overflow("computing the discriminant"))
}

/// A real quadratic irrational `(p + √d) / den`.
///
/// Always stored in canonical form: `d > 0` is not a square and `den`
/// divides `d - p²`. That divisibility is what keeps every state of the
/// continued-fraction recurrence integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct QuadraticSurd {
    p: i64,
    d: i64,
    den: i64,
}

impl QuadraticSurd {
    /// Builds the canonical surd equal to `(p + √d) / den`.
    ///
    /// When `den` does not divide `d - p²`, numerator and denominator are
    /// scaled by the least `t` that restores divisibility. Common square
    /// factors are then removed again where that keeps the form canonical.
    pub fn new(p: i64, d: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(CfError::ZeroDenominator);
        }
        if d <= 0 {
            return Err(CfError::NonPositiveDiscriminant(d));
        }
        if is_square(d) {
            return Err(CfError::SquareDiscriminant(d));
        }
        let pp = p.checked_mul(p).ok_or(CfError::Overflow("squaring P"))?;
        let rem = d - pp;
        let t = den.abs() / den.gcd(&rem);
        let (p, d, den) = if t == 1 {
            (p, d, den)
        } else {
            let ovf = || CfError::Overflow("canonicalising a surd");
            (
                p.checked_mul(t).ok_or_else(ovf)?,
                d.checked_mul(t * t).ok_or_else(ovf)?,
                den.checked_mul(t).ok_or_else(ovf)?,
            )
        };
        Ok(Self::reduce(p, d, den))
    }

    fn reduce(p: i64, d: i64, den: i64) -> Self {
        let g = p.gcd(&den);
        // largest admissible common factor first
        let mut divisors: Vec<i64> = (1..=g.isqrt()).filter(|k| g % k == 0).flat_map(|k| [k, g / k]).collect();
        divisors.sort_unstable_by(|a, b| b.cmp(a));
        for k in divisors {
            if k == 1 {
                break;
            }
            if d % (k * k) != 0 {
                continue;
            }
            let (p2, d2, den2) = (p / k, d / (k * k), den / k);
            if (d2 - p2 * p2) % den2 == 0 {
                return Self { p: p2, d: d2, den: den2 };
            }
        }
        Self { p, d, den }
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    /// Exact floor, via `isqrt` and the sign of the denominator.
    pub fn floor(&self) -> i64 {
        floor_state(self.p, self.d, self.den, isqrt(self.d as u64) as i64)
    }

    /// Discriminant of the primitive integer polynomial vanishing at this surd.
    pub fn discriminant(&self) -> i64 {
        // den·x² − 2p·x − (d − p²)/den = 0 has discriminant 4d
        let c = (self.d - self.p * self.p) / self.den;
        let g = self.den.gcd(&(2 * self.p)).gcd(&c);
        4 * self.d / (g * g)
    }

    /// The conjugate `(p - √d) / den`, rewritten as `(-p + √d) / (-den)`.
    pub fn conjugate(&self) -> Self {
        Self::new(-self.p, self.d, -self.den).expect("conjugate of a canonical surd is canonical")
    }

    /// Floating-point approximation, for display only.
    pub fn approx(&self) -> f64 {
        (self.p as f64 + (self.d as f64).sqrt()) / self.den as f64
    }
}

impl std::fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}+√{})/{}", self.p, self.d, self.den)
    }
}

/// `⌊(p + √d) / den⌋` given `s = ⌊√d⌋` and non-square `d`.
pub(crate) fn floor_state(p: i64, _d: i64, den: i64, s: i64) -> i64 {
    if den > 0 {
        (p + s).div_euclid(den)
    } else {
        -(p + s).div_euclid(-den) - 1
    }
}

/// The "+" root `(-p + √Δ) / 2r` of `r x² + p x = q`.
pub fn make_surd(r: i64, p: i64, q: i64) -> Result<QuadraticSurd> {
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
    let den = r.checked_mul(2).ok_or(CfError::Overflow("doubling r"))?;
    QuadraticSurd::new(-p, delta, den)
}

/// The "−" root `(-p - √Δ) / 2r` of `r x² + p x = q`.
pub fn make_minus_root(r: i64, p: i64, q: i64) -> Result<QuadraticSurd> {
    Ok(make_surd(r, p, q)?.conjugate())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isqrt_examples() {
        assert_eq!(isqrt(0), 0);
        assert_eq!(isqrt(2), 1);
        assert_eq!(isqrt(1_000_001), 1000);
        assert_eq!(isqrt(u64::MAX), 4_294_967_295);
    }

    #[test]
    fn isqrt_brackets_small_range() {
        for n in 0u64..20_000 {
            let r = isqrt(n);
            assert!(r * r <= n && n < (r + 1) * (r + 1), "n = {n}");
        }
    }

    #[test]
    fn make_surd_examples() {
        let s = make_surd(1, 0, 2).unwrap();
        assert_eq!((s.p(), s.d(), s.den()), (0, 2, 1));
        let s = make_surd(1, 1, 1).unwrap();
        assert_eq!((s.p(), s.d(), s.den()), (-1, 5, 2));
        assert_eq!(make_surd(1, 0, 4), Err(CfError::SquareDiscriminant(16)));
        assert_eq!(make_surd(1, 1, -1), Err(CfError::NonPositiveDiscriminant(-3)));
        assert_eq!(make_surd(1, 2, -1), Err(CfError::NonPositiveDiscriminant(0)));
        assert_eq!(make_surd(0, 1, 1), Err(CfError::NonPositiveLeading(0)));
    }

    #[test]
    fn canonical_rescaling() {
        // (1 + √3)/3: 3 does not divide 3 - 1, so scale by 3
        let s = QuadraticSurd::new(1, 3, 3).unwrap();
        assert_eq!((s.p(), s.d(), s.den()), (3, 27, 9));
        assert_eq!((s.d() - s.p() * s.p()) % s.den(), 0);
        assert!((s.approx() - (1.0 + 3f64.sqrt()) / 3.0).abs() < 1e-12);
    }

    #[test]
    fn floor_examples() {
        assert_eq!(make_surd(1, 0, 2).unwrap().floor(), 1);
        assert_eq!(make_surd(1, 1, 1).unwrap().floor(), 0);
        // 4 < 1 + √13 < 6
        assert_eq!(QuadraticSurd::new(1, 13, 3).unwrap().floor(), 1);
        // negative denominators and negative values
        assert_eq!(QuadraticSurd::new(0, 2, -1).unwrap().floor(), -2);
        assert_eq!(make_minus_root(1, 1, 1).unwrap().floor(), -2);
    }

    #[test]
    fn discriminant_of_primitive_form() {
        assert_eq!(make_surd(1, 0, 2).unwrap().discriminant(), 8);
        assert_eq!(make_surd(1, 1, 1).unwrap().discriminant(), 5);
        assert_eq!(make_surd(2, 0, 4).unwrap().discriminant(), 8);
        assert_eq!(make_surd(3, 2, 4).unwrap().discriminant(), 52);
        assert_eq!(make_surd(2, 1, 4).unwrap().discriminant(), 33);
    }
}
