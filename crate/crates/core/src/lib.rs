//! Exact continued fractions of quadratic irrationals.
//!
//! Two independent routes produce the partial quotients of a root of
//! `r x² + p x = q`:
//!
//! * [`expansion`] runs the classical `(P, Q)` surd recurrence;
//! * [`river`] walks the river of the indefinite form `r v² + p v u − q u²`,
//!   carrying only the value triple `(a, b, h)` of the current superbasis.
//!
//! On top of those sit divisor-sum bounds ([`divisor`]), the negative Pell /
//! sum-of-two-squares census ([`red`]), and the partial-quotient statistics
//! harness ([`stats`]).

pub mod divisor;
pub mod error;
pub mod expansion;
pub mod fmt;
pub mod measure;
pub mod red;
pub mod river;
pub mod stats;
pub mod surd;

pub use divisor::{big_d, f_bound, tau, DivisorTable, TauSource, TrialDivision};
pub use error::{CfError, Result};
pub use expansion::{
    convergents, expand, expand_sqrt, expand_with_budget, prefix_quotients, CfExpansion, ConvergentPair,
};
pub use river::{
    check_period_bound, detect_period, init_river, palindrome_check, quotients_from_trace, river_step,
    PeriodBoundRecord, PeriodReport, RiverState, RiverTrace, Side,
};
pub use surd::{isqrt, make_minus_root, make_surd, QuadraticSurd};

/// Maps `f` over `items`, in parallel when the `parallel` feature is on.
/// Output order always matches input order.
pub fn par_map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().map(f).collect()
    }
}
