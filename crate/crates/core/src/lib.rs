//! Exact arithmetic for the log-max-q metric on coprime tuples.
//!
//! For a tuple `n` of positive integers with gcd 1, `q_n(m)` is the smallest
//! L1 norm of an integer vector `x` with `Σ n_i·x_i = m`. Lifting to tuples by
//! `q_n(m̄) = max_{m ∈ m̄} q_n(m)` and symmetrising gives the distance
//!
//! ```text
//! d_a(m̄, n̄) = log_a max(q_n(m̄), q_m(n̄))
//! ```
//!
//! The crate provides:
//!
//! - [`sequences`]: Fibonacci and k-Fibonacci numbers at any integer index,
//!   metallic ratios, and exact comparisons against their powers.
//! - [`diophantine`]: the minimal-L1 representation solver and a brute-force
//!   oracle.
//! - [`metric`]: coprime tuples, `q`, and distances in any base.
//! - [`qi`]: the Fibonacci-window embeddings `n ↦ {F_{k,n}, …}` and exact
//!   checks of their `(1,1)`-quasi-isometry bounds.
//! - [`audit`]: seeded randomized audits of the metric axioms.
//! - [`cli`]: the batch front end behind the `coprime-metric` binary.
//!
//! All integers are arbitrary precision. Floating point appears only in
//! display values (logarithms); every bound check is exact.

pub mod audit;
pub mod cli;
pub mod diophantine;
pub mod metric;
pub mod qi;
pub mod sequences;
pub(crate) mod serde_decimal;

pub use diophantine::{
    brute_force_min_l1, ext_gcd, min_l1_general, min_l1_two, DiophantineError, Generators, QValue,
    Representation,
};
pub use metric::{distance, make_tuple, q_point, q_tuple, rebase, Base, CoprimeTuple, Distance, MetricError};
pub use qi::{embedding_point, qi_check_pair, qi_scan, EmbeddingSpec, QIReport, QIRow, QiError};
pub use sequences::{compare_power, fib, kfib, metallic, MetallicRatio, SeqParam, SequenceError};
