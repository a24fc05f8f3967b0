//! Fibonacci-window embeddings `n ↦ {F_{k,n}, …, F_{k,n+ℓ-1}}` and exact
//! checks of the `(1,1)`-quasi-isometry sandwich
//!
//! ```text
//! |m - n| - 1  ≤  log_φk max_q(f_m, f_n)  ≤  |m - n| + 1
//! ```
//!
//! in exponentiated form: `φ_k^{|m-n|-1} ≤ max_q ≤ φ_k^{|m-n|+1}`, decided by
//! [`compare_power`]. Each row also checks the element-level bounds that the
//! sandwich is built from:
//!
//! - lower: `q_{f_n}(F_t) · max(f_n) ≥ F_t` for every element `F_t` of the
//!   window with the larger start;
//! - upper: `q_{f_s}(F_t)` never exceeds the cost of the explicit witness from
//!   the addition formula `F_{a+b} = F_a F_{b+1} + F_{a-1} F_b`, using the two
//!   window entries nearest to `t`, and equals 1 when `F_t` lies in the window.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::metric::{ln_biguint, make_tuple, q_point, Base, CoprimeTuple, MetricError};
use crate::sequences::{compare_power, kfib, SeqParam};
use crate::serde_decimal;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QiError {
    #[error("window width must be at least 2, got {0}")]
    InvalidWidth(usize),
    #[error("window width {ell} with k = {k} is outside the proven range (needs k = 1); use the experimental mode")]
    OutOfContract { k: SeqParam, ell: usize },
    #[error("indices start at 1")]
    ZeroIndex,
    #[error("embedding point at index {index} is not coprime: {source}")]
    NotCoprime { index: u64, source: MetricError },
    #[error("failed to build worker pool: {0}")]
    ThreadPool(String),
}

/// Which embedding to check: sequence parameter `k` and window width `ell`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EmbeddingSpec {
    pub k: SeqParam,
    #[serde(with = "serde_decimal")]
    pub ell: usize,
    /// Allows `ell > 2` with `k > 1`, a combination with no proven bound.
    pub experimental: bool,
}

impl EmbeddingSpec {
    pub fn new(k: SeqParam, ell: usize) -> Result<Self, QiError> {
        if ell < 2 {
            return Err(QiError::InvalidWidth(ell));
        }
        if ell > 2 && k != SeqParam::FIBONACCI {
            return Err(QiError::OutOfContract { k, ell });
        }
        Ok(EmbeddingSpec { k, ell, experimental: false })
    }

    pub fn experimental(k: SeqParam, ell: usize) -> Result<Self, QiError> {
        if ell < 2 {
            return Err(QiError::InvalidWidth(ell));
        }
        Ok(EmbeddingSpec { k, ell, experimental: true })
    }

    /// Fibonacci pairs `{F_n, F_{n+1}}`.
    pub fn fibonacci() -> Self {
        EmbeddingSpec { k: SeqParam::FIBONACCI, ell: 2, experimental: false }
    }

    /// The log base of the target metric: `φ_k`.
    pub fn base(&self) -> Base {
        if self.k == SeqParam::FIBONACCI {
            Base::Golden
        } else {
            Base::Metallic(self.k)
        }
    }

    fn term(&self, index: i64) -> BigInt {
        kfib(self.k, index)
    }
}

/// `{F_{k,n}, …, F_{k,n+ℓ-1}}`, collapsed as a set (so `f_1 = {1}` for the
/// Fibonacci pairs).
pub fn embedding_point(spec: &EmbeddingSpec, n: u64) -> Result<CoprimeTuple, QiError> {
    if n == 0 {
        return Err(QiError::ZeroIndex);
    }
    let values: Vec<BigInt> = (0..spec.ell as i64).map(|i| spec.term(n as i64 + i)).collect();
    make_tuple(&values).map_err(|source| QiError::NotCoprime { index: n, source })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QIRow {
    #[serde(with = "serde_decimal")]
    pub m: u64,
    #[serde(with = "serde_decimal")]
    pub n: u64,
    /// `q_{f_n}(f_m)`.
    #[serde(with = "serde_decimal")]
    pub q_nm: BigUint,
    /// `q_{f_m}(f_n)`.
    #[serde(with = "serde_decimal")]
    pub q_mn: BigUint,
    #[serde(with = "serde_decimal")]
    pub max_q: BigUint,
    #[serde(with = "serde_decimal")]
    pub index_gap: u64,
    /// `max_q ≥ φ_k^{gap-1}`
    pub lower_ok: bool,
    /// `max_q ≤ φ_k^{gap+1}`
    pub upper_ok: bool,
    pub lemma_lower_ok: bool,
    pub lemma_upper_ok: bool,
    #[serde(with = "serde_decimal::real12")]
    pub log_display: f64,
}

impl QIRow {
    pub fn passed(&self) -> bool {
        self.lower_ok && self.upper_ok && self.lemma_lower_ok && self.lemma_upper_ok
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QIReport {
    pub spec: EmbeddingSpec,
    pub base: Base,
    #[serde(with = "serde_decimal")]
    pub max_index: u64,
    pub rows: Vec<QIRow>,
    pub all_pass: bool,
}

impl QIReport {
    pub fn failures(&self) -> impl Iterator<Item = &QIRow> {
        self.rows.iter().filter(|r| !r.passed())
    }
}

/// Element-level `q` values of one window against another.
struct Directed {
    /// `q_{f_source}(F_{target_start + i})` for `i = 0..ell`.
    qs: Vec<BigUint>,
}

impl Directed {
    fn compute(spec: &EmbeddingSpec, source: &CoprimeTuple, target_start: u64) -> Directed {
        let qs = (0..spec.ell as i64)
            .map(|i| {
                let t = spec.term(target_start as i64 + i).magnitude().clone();
                q_point(source, &t).expect("window entries are positive").value
            })
            .collect();
        Directed { qs }
    }

    fn max(&self) -> BigUint {
        self.qs.iter().max().expect("ell ≥ 2").clone()
    }
}

/// Cost of the explicit witness for `F_t` over the window starting at `s`,
/// after checking the witness really represents `F_t`. `None` if it does not.
fn window_witness_cost(spec: &EmbeddingSpec, s: i64, t: i64) -> Option<BigUint> {
    let ell = spec.ell as i64;
    if (s..s + ell).contains(&t) {
        return Some(BigUint::one());
    }
    // Anchor on the two window entries nearest to t: F_t = F_{t-b-1}·F_b + F_{t-b}·F_{b+1}.
    let b = if t >= s + ell { s + ell - 2 } else { s };
    let (x, y) = (spec.term(t - b - 1), spec.term(t - b));
    let value = &x * spec.term(b) + &y * spec.term(b + 1);
    (value == spec.term(t)).then(|| x.magnitude() + y.magnitude())
}

fn check_upper(spec: &EmbeddingSpec, source_start: u64, target_start: u64, directed: &Directed) -> bool {
    directed.qs.iter().enumerate().all(|(i, q)| {
        window_witness_cost(spec, source_start as i64, target_start as i64 + i as i64)
            .is_some_and(|bound| q <= &bound)
    })
}

fn check_lower(spec: &EmbeddingSpec, source: &CoprimeTuple, target_start: u64, directed: &Directed) -> bool {
    let largest = source.largest();
    directed.qs.iter().enumerate().all(|(i, q)| {
        let t = spec.term(target_start as i64 + i as i64).magnitude().clone();
        q * largest >= t
    })
}

/// Checks one index pair.
pub fn qi_check_pair(spec: &EmbeddingSpec, m: u64, n: u64) -> Result<QIRow, QiError> {
    let f_m = embedding_point(spec, m)?;
    let f_n = embedding_point(spec, n)?;
    Ok(check_pair_with(spec, m, n, &f_m, &f_n))
}

fn check_pair_with(spec: &EmbeddingSpec, m: u64, n: u64, f_m: &CoprimeTuple, f_n: &CoprimeTuple) -> QIRow {
    let by_n = Directed::compute(spec, f_n, m);
    let by_m = Directed::compute(spec, f_m, n);
    let q_nm = by_n.max();
    let q_mn = by_m.max();
    let max_q = (&q_nm).max(&q_mn).clone();
    let gap = m.abs_diff(n);

    let k = spec.k;
    let gap_i = gap as i64;
    let lower_ok = compare_power(&max_q, k, gap_i - 1) != Ordering::Less;
    let upper_ok = compare_power(&max_q, k, gap_i + 1) != Ordering::Greater;

    let lemma_lower_ok = match m.cmp(&n) {
        Ordering::Greater => check_lower(spec, f_n, m, &by_n),
        Ordering::Less => check_lower(spec, f_m, n, &by_m),
        Ordering::Equal => true,
    };
    let lemma_upper_ok = check_upper(spec, n, m, &by_n) && check_upper(spec, m, n, &by_m);

    QIRow {
        m,
        n,
        log_display: ln_biguint(&max_q) / spec.base().ln(),
        q_nm,
        q_mn,
        max_q,
        index_gap: gap,
        lower_ok,
        upper_ok,
        lemma_lower_ok,
        lemma_upper_ok,
    }
}

/// Every unordered pair `{m, n}` with `1 ≤ n ≤ m ≤ max_index`, in
/// lexicographic `(n, m)` order.
pub fn qi_scan(spec: &EmbeddingSpec, max_index: u64) -> Result<QIReport, QiError> {
    scan_impl(spec, max_index, None)
}

/// As [`qi_scan`], computing rows on `threads` workers. Row order does not
/// depend on the thread count.
pub fn qi_scan_parallel(spec: &EmbeddingSpec, max_index: u64, threads: usize) -> Result<QIReport, QiError> {
    scan_impl(spec, max_index, Some(threads.max(1)))
}

fn scan_impl(spec: &EmbeddingSpec, max_index: u64, threads: Option<usize>) -> Result<QIReport, QiError> {
    if max_index == 0 {
        return Err(QiError::ZeroIndex);
    }
    let points = (1..=max_index)
        .map(|i| embedding_point(spec, i))
        .collect::<Result<Vec<_>, _>>()?;
    let pairs: Vec<(u64, u64)> = (1..=max_index)
        .flat_map(|n| (n..=max_index).map(move |m| (n, m)))
        .collect();
    let row = |&(n, m): &(u64, u64)| {
        check_pair_with(spec, m, n, &points[(m - 1) as usize], &points[(n - 1) as usize])
    };
    let rows: Vec<QIRow> = match threads {
        None | Some(1) => pairs.iter().map(row).collect(),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| QiError::ThreadPool(e.to_string()))?;
            pool.install(|| pairs.par_iter().map(row).collect())
        }
    };
    let all_pass = rows.iter().all(QIRow::passed);
    Ok(QIReport {
        spec: *spec,
        base: spec.base(),
        max_index,
        rows,
        all_pass,
    })
}
