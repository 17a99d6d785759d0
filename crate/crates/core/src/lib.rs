//! Stack-number statistics of k-noncrossing, tau-canonical RNA pseudoknot
//! structures.
//!
//! Exact counts `T_{k,tau}(n, t)` are available through two independent
//! routes: the core-collapse recurrences in [`exact`] and the generating
//! function pipeline in [`series`]. [`oracle`] enumerates diagrams by brute
//! force for small `n`, and [`asymptotics`] locates the dominant singularity
//! of the bivariate generating function to obtain the limiting mean and
//! variance of the stack number.

pub mod asymptotics;
pub mod bigcombinat;
pub mod cache;
pub mod error;
pub mod exact;
pub mod identities;
pub mod matchings;
pub mod oracle;
pub mod series;

pub use bigcombinat::{binomial, lambda_multinomial, BigCount, ExactRatio};
pub use error::{Error, Result};
pub use exact::{count_structures, distribution, moments, CountTable, StackDistribution};
pub use matchings::{count_partial, count_perfect, PerfectMatchings};
pub use series::{bivariate_t, univariate_t, BivariateSeries, PowerSeries};
