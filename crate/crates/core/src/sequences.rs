//! Fibonacci and k-Fibonacci numbers over all integer indices, metallic
//! ratios, and exact comparisons against powers of a metallic ratio.
//!
//! Every power of the `k`-th metallic ratio lives in `Z[φ_k]`:
//!
//! ```text
//! φ_k^j = F_{k,j} · φ_k + F_{k,j-1}        for every integer j
//! ```
//!
//! so comparing an integer against `c · φ_k^j` reduces to deciding the sign
//! of `a + b·√(k² + 4)` with integer `a`, `b`. That is done by sign analysis
//! and a single squaring, never through floating point.

use std::cmp::Ordering;
use std::fmt;
use std::num::NonZeroU64;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

/// Indices with magnitude up to this are evaluated by the plain recurrence;
/// beyond it `kfib` switches to matrix fast exponentiation.
const ITERATIVE_LIMIT: u64 = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("sequence parameter k must be at least 1, got {0}")]
    InvalidParam(u64),
    #[error("malformed index range: from {from} is greater than to {to}")]
    InvalidRange { from: i64, to: i64 },
}

/// The k-Fibonacci parameter. Always at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SeqParam(NonZeroU64);

impl SeqParam {
    /// `k = 1`: the ordinary Fibonacci numbers.
    pub const FIBONACCI: SeqParam = SeqParam(NonZeroU64::MIN);

    pub fn new(k: u64) -> Result<Self, SequenceError> {
        NonZeroU64::new(k)
            .map(SeqParam)
            .ok_or(SequenceError::InvalidParam(k))
    }

    pub fn get(self) -> u64 {
        self.0.get()
    }

    fn as_bigint(self) -> BigInt {
        BigInt::from(self.get())
    }
}

impl Serialize for SeqParam {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl fmt::Display for SeqParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.get())
    }
}

/// `F_n` for any integer `n`.
pub fn fib(n: i64) -> BigInt {
    kfib(SeqParam::FIBONACCI, n)
}

/// `F_{k,n}` for any integer `n`, using `F_{k,-n} = (-1)^{n+1} F_{k,n}`.
pub fn kfib(k: SeqParam, n: i64) -> BigInt {
    if n.unsigned_abs() <= ITERATIVE_LIMIT {
        kfib_iterative(k, n)
    } else {
        kfib_matrix(k, n)
    }
}

/// Evaluates by stepping the recurrence `|n|` times.
pub fn kfib_iterative(k: SeqParam, n: i64) -> BigInt {
    let steps = n.unsigned_abs();
    let kk = k.as_bigint();
    let (mut prev, mut cur) = (BigInt::zero(), BigInt::one());
    if steps == 0 {
        return prev;
    }
    for _ in 1..steps {
        let next = &kk * &cur + &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    apply_negative_index_sign(cur, n)
}

/// Evaluates by fast exponentiation of `[[k, 1], [1, 0]]`, whose `n`-th power
/// is `[[F_{k,n+1}, F_{k,n}], [F_{k,n}, F_{k,n-1}]]`.
pub fn kfib_matrix(k: SeqParam, n: i64) -> BigInt {
    let mut exp = n.unsigned_abs();
    let mut result = Mat2::identity();
    let mut base = Mat2::companion(k);
    while exp > 0 {
        if exp & 1 == 1 {
            result = result.mul(&base);
        }
        exp >>= 1;
        if exp > 0 {
            base = base.mul(&base);
        }
    }
    apply_negative_index_sign(result.0[1].clone(), n)
}

fn apply_negative_index_sign(value: BigInt, n: i64) -> BigInt {
    // F_{-n} = (-1)^{n+1} F_n: negative only for even |n|.
    if n < 0 && n.unsigned_abs().is_multiple_of(2) {
        -value
    } else {
        value
    }
}

/// Symmetric 2x2 integer matrix stored as `[a, b, d]` for `[[a, b], [b, d]]`.
/// Powers of the companion matrix stay symmetric.
#[derive(Clone)]
struct Mat2([BigInt; 3]);

impl Mat2 {
    fn identity() -> Self {
        Mat2([BigInt::one(), BigInt::zero(), BigInt::one()])
    }

    fn companion(k: SeqParam) -> Self {
        Mat2([k.as_bigint(), BigInt::one(), BigInt::zero()])
    }

    fn mul(&self, rhs: &Mat2) -> Mat2 {
        let [a, b, d] = &self.0;
        let [e, f, h] = &rhs.0;
        Mat2([a * e + b * f, a * f + b * h, b * f + d * h])
    }
}

/// `F_{k,n}` for every `n` in `from..=to`, generated by one pass of the
/// recurrence.
pub fn kfib_table(k: SeqParam, from: i64, to: i64) -> Result<Vec<(i64, BigInt)>, SequenceError> {
    if from > to {
        return Err(SequenceError::InvalidRange { from, to });
    }
    let kk = k.as_bigint();
    let mut prev = kfib(k, from);
    let mut cur = kfib(k, from + 1);
    let mut rows = Vec::with_capacity((to - from + 1) as usize);
    for n in from..=to {
        let next = &kk * &cur + &prev;
        rows.push((n, std::mem::replace(&mut prev, std::mem::replace(&mut cur, next))));
    }
    Ok(rows)
}

/// The positive root of `x² = k·x + 1`, kept both as a binary64 value and in
/// the exact surd form `(k + √(k² + 4)) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetallicRatio {
    pub k: SeqParam,
    #[serde(with = "crate::serde_decimal::real12")]
    pub value: f64,
}

impl MetallicRatio {
    /// The radicand `k² + 4` of the exact form.
    pub fn radicand(&self) -> BigInt {
        let k = self.k.as_bigint();
        &k * &k + 4u32
    }

    pub fn ln(&self) -> f64 {
        self.value.ln()
    }
}

pub fn metallic(k: SeqParam) -> MetallicRatio {
    let kf = k.get() as f64;
    // hypot(k, 2) = √(k² + 4) without overflowing k².
    let value = (kf + kf.hypot(2.0)) / 2.0;
    MetallicRatio { k, value }
}

/// Sign of `rational + coeff · √radicand`, for a positive non-square
/// `radicand`.
pub fn surd_sign(rational: &BigInt, coeff: &BigInt, radicand: &BigInt) -> Ordering {
    let a = rational.sign_cmp();
    let b = coeff.sign_cmp();
    match (a, b) {
        (_, Ordering::Equal) => a,
        (Ordering::Equal, _) => b,
        (x, y) if x == y => x,
        // Opposite signs: the larger magnitude wins.
        _ => {
            let lhs = rational * rational;
            let rhs = coeff * coeff * radicand;
            match lhs.cmp(&rhs) {
                Ordering::Greater => a,
                Ordering::Less => b,
                Ordering::Equal => Ordering::Equal,
            }
        }
    }
}

trait SignCmp {
    fn sign_cmp(&self) -> Ordering;
}

impl SignCmp for BigInt {
    fn sign_cmp(&self) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
}

/// Exact comparison of `value` against `scale · φ_k^j`.
///
/// Returns how `value` orders relative to the power. `Equal` can only come
/// back when the power is rational, i.e. `j = 0` or `scale = 0`.
pub fn compare_scaled_power(value: &BigInt, scale: &BigInt, k: SeqParam, j: i64) -> Ordering {
    let fj = kfib(k, j);
    let fj_prev = kfib(k, j - 1);
    let kk = k.as_bigint();
    // 2·value - scale·(k·F_j + 2·F_{j-1}) - scale·F_j·√(k²+4)
    let rational = value * 2 - scale * (&kk * &fj + &fj_prev * 2);
    let coeff = -(scale * &fj);
    surd_sign(&rational, &coeff, &metallic(k).radicand())
}

/// Exact comparison of `q` against `φ_k^j`.
pub fn compare_power(q: &BigUint, k: SeqParam, j: i64) -> Ordering {
    compare_scaled_power(&BigInt::from(q.clone()), &BigInt::one(), k, j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;

    fn k(k: u64) -> SeqParam {
        SeqParam::new(k).unwrap()
    }

    #[test]
    fn fib_examples() {
        assert_eq!(fib(0), BigInt::from(0));
        assert_eq!(fib(10), BigInt::from(55));
        assert_eq!(fib(-4), BigInt::from(-3));
    }

    #[test]
    fn kfib_examples() {
        assert_eq!(kfib(k(2), 5), BigInt::from(29));
        assert_eq!(kfib(k(1), 7), BigInt::from(13));
        assert_eq!(kfib(k(3), -3), BigInt::from(10));
    }

    #[test]
    fn rejects_zero_param() {
        assert_eq!(SeqParam::new(0), Err(SequenceError::InvalidParam(0)));
    }

    #[test]
    fn big_index_exceeds_u64() {
        // F_94 is the first Fibonacci number above u64::MAX.
        assert!(fib(93) < BigInt::from(u64::MAX));
        assert!(fib(94) > BigInt::from(u64::MAX));
        assert_eq!(fib(94).to_string(), "19740274219868223167");
    }

    #[test]
    fn iterative_matches_matrix() {
        for kk in 1..=4 {
            for n in -200..=200 {
                assert_eq!(kfib_iterative(k(kk), n), kfib_matrix(k(kk), n), "k={kk} n={n}");
            }
        }
        assert_eq!(kfib_iterative(k(1), 1000), kfib_matrix(k(1), 1000));
    }

    #[test]
    fn negative_index_sign_rule() {
        for kk in 1..=5 {
            for n in 1..=50i64 {
                let expected = if (n + 1) % 2 == 0 { kfib(k(kk), n) } else { -kfib(k(kk), n) };
                assert_eq!(kfib(k(kk), -n), expected);
            }
        }
    }

    #[test]
    fn honsberger_identity() {
        for kk in 1..=3 {
            let kp = k(kk);
            for m in -20..=20 {
                for n in -20..=20 {
                    let lhs = kfib(kp, m + n);
                    let rhs = kfib(kp, m) * kfib(kp, n + 1) + kfib(kp, m - 1) * kfib(kp, n);
                    assert_eq!(lhs, rhs, "k={kk} m={m} n={n}");
                }
            }
        }
    }

    #[test]
    fn consecutive_terms_coprime() {
        for kk in 1..=5 {
            for n in 1..=60 {
                assert!(kfib(k(kk), n).gcd(&kfib(k(kk), n + 1)).is_one());
            }
        }
    }

    #[test]
    fn table_matches_pointwise() {
        let rows = kfib_table(k(2), -6, 6).unwrap();
        assert_eq!(rows.len(), 13);
        for (n, v) in rows {
            assert_eq!(v, kfib(k(2), n));
        }
        assert!(kfib_table(k(1), 3, 2).is_err());
    }

    #[test]
    fn metallic_values() {
        assert!((metallic(k(1)).value - 1.618_033_988_749_895).abs() < 1e-15);
        assert!((metallic(k(2)).value - 2.414_213_562_373_095).abs() < 1e-15);
        for kk in 1..=1000 {
            let r = metallic(k(kk));
            let x = r.value;
            let kf = kk as f64;
            let residual = (x * x - kf * x - 1.0).abs() / (x * x);
            assert!(residual < 1e-12, "k={kk} residual={residual}");
            assert!(x > 1.0);
        }
    }

    #[test]
    fn compare_power_examples() {
        let phi = metallic(k(1)).value;
        assert_eq!(compare_power(&BigUint::from(3u32), k(1), 2), Ordering::Greater);
        assert!(3.0 > phi.powi(2));
        assert_eq!(compare_power(&BigUint::from(1u32), k(1), 0), Ordering::Equal);
        assert_eq!(compare_power(&BigUint::from(5u32), k(1), 4), Ordering::Less);
        assert!(5.0 < phi.powi(4));
    }

    #[test]
    fn compare_power_agrees_with_floats_away_from_ties() {
        for kk in 1..=5 {
            let base = metallic(k(kk)).value;
            for j in -6..=12 {
                let p = base.powi(j as i32);
                for q in 1u32..=400 {
                    let qf = q as f64;
                    if (qf - p).abs() / p < 1e-9 {
                        continue;
                    }
                    let expected = qf.partial_cmp(&p).unwrap();
                    assert_eq!(compare_power(&BigUint::from(q), k(kk), j), expected, "q={q} k={kk} j={j}");
                }
            }
        }
    }

    #[test]
    fn golden_ratio_bounds() {
        // φ^{n-2} ≤ F_n ≤ φ^{n-1}
        for n in 1..=60 {
            let f = fib(n).to_biguint().unwrap();
            assert_ne!(compare_power(&f, k(1), n - 2), Ordering::Less, "n={n}");
            assert_ne!(compare_power(&f, k(1), n - 1), Ordering::Greater, "n={n}");
        }
    }

    #[test]
    fn metallic_ratio_bounds() {
        for kk in 1..=5 {
            let kp = k(kk);
            let scale = BigInt::from(kk);
            for n in 1..=60 {
                let f = kfib(kp, n);
                assert_ne!(compare_scaled_power(&f, &scale, kp, n - 2), Ordering::Less);
                assert_ne!(compare_scaled_power(&f, &scale, kp, n - 1), Ordering::Greater);
                let s = kfib(kp, n - 2) + kfib(kp, n - 1);
                assert_ne!(compare_scaled_power(&s, &BigInt::one(), kp, n - 2), Ordering::Less);
                assert_ne!(compare_scaled_power(&s, &BigInt::one(), kp, n - 1), Ordering::Greater);
            }
        }
    }

    #[test]
    fn surd_sign_cases() {
        let five = BigInt::from(5);
        let b = |v: i64| BigInt::from(v);
        assert_eq!(surd_sign(&b(3), &b(-1), &five), Ordering::Greater); // 3 - √5
        assert_eq!(surd_sign(&b(2), &b(-1), &five), Ordering::Less); // 2 - √5
        assert_eq!(surd_sign(&b(-3), &b(1), &five), Ordering::Less);
        assert_eq!(surd_sign(&b(0), &b(0), &five), Ordering::Equal);
        assert_eq!(surd_sign(&b(0), &b(-2), &five), Ordering::Less);
    }
}
