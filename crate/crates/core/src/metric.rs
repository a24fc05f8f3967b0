//! Coprime tuples and the distance `d_a(m̄, n̄) = log_a max(q_n(m̄), q_m(n̄))`.
//!
//! The exact part of a [`Distance`] is the integer `max_q`; the logarithm is
//! carried for display only. Comparisons that matter (triangle inequality,
//! identity) are made on `max_q` in multiplicative form.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::diophantine::{min_l1_general, DiophantineError, Generators, QValue};
use crate::sequences::{metallic, SeqParam};
use crate::serde_decimal;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("tuple is empty")]
    EmptyTuple,
    #[error("tuple entries must be positive, got {0}")]
    NonPositiveElement(BigInt),
    #[error("tuple is not coprime: gcd is {0}")]
    NotCoprime(BigUint),
    #[error("target must be positive")]
    NonPositiveTarget,
    #[error("base must be a finite real greater than 1, got {0}")]
    InvalidBase(f64),
    #[error("unrecognised base {0:?}: expected golden, metallic:<k> or real:<decimal>")]
    MalformedBase(String),
}

/// A finite set of positive integers with gcd 1, stored sorted and without
/// duplicates. `{1}` is the collapsed form of `{1, 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoprimeTuple(Generators);

impl CoprimeTuple {
    pub fn from_u64s(values: &[u64]) -> Result<Self, MetricError> {
        let values: Vec<BigInt> = values.iter().map(|&v| BigInt::from(v)).collect();
        make_tuple(&values)
    }

    pub fn elements(&self) -> &[BigUint] {
        self.0.values()
    }

    pub fn cardinality(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, m: &BigUint) -> bool {
        self.elements().binary_search(m).is_ok()
    }

    pub fn largest(&self) -> &BigUint {
        self.0.largest()
    }

    pub fn as_generators(&self) -> &Generators {
        &self.0
    }
}

impl fmt::Display for CoprimeTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.elements().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for CoprimeTuple {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serde_decimal::vec::serialize(self.elements(), serializer)
    }
}

/// Sorts, deduplicates and checks the gcd.
pub fn make_tuple(values: &[BigInt]) -> Result<CoprimeTuple, MetricError> {
    if values.is_empty() {
        return Err(MetricError::EmptyTuple);
    }
    if let Some(bad) = values.iter().find(|v| !v.is_positive()) {
        return Err(MetricError::NonPositiveElement(bad.clone()));
    }
    let mut elements: Vec<BigUint> = values.iter().map(|v| v.magnitude().clone()).collect();
    elements.sort();
    elements.dedup();
    let gens = Generators::new(elements).expect("sorted, deduplicated, positive");
    let gcd = gens.gcd();
    if !gcd.is_one() {
        return Err(MetricError::NotCoprime(gcd));
    }
    Ok(CoprimeTuple(gens))
}

/// `q_n(m)`: minimal L1 cost of writing `m` over the tuple, with witness.
pub fn q_point(tuple: &CoprimeTuple, m: &BigUint) -> Result<QValue, MetricError> {
    match min_l1_general(tuple.as_generators(), m) {
        Ok(q) => Ok(q),
        Err(DiophantineError::NonPositiveTarget) => Err(MetricError::NonPositiveTarget),
        Err(e) => unreachable!("coprime tuples represent every positive integer: {e}"),
    }
}

/// `q_n(m̄) = max_{m ∈ m̄} q_n(m)`.
pub fn q_tuple(tuple: &CoprimeTuple, targets: &CoprimeTuple) -> BigUint {
    targets
        .elements()
        .iter()
        .map(|m| q_point(tuple, m).expect("tuple entries are positive").value)
        .max()
        .expect("tuples are non-empty")
}

/// Logarithm base. Golden and metallic bases carry their exact parameter so
/// bound checks can stay exact; arbitrary reals are display-only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Base {
    Golden,
    Metallic(SeqParam),
    Real(f64),
}

impl Base {
    pub fn real(a: f64) -> Result<Self, MetricError> {
        if a.is_finite() && a > 1.0 {
            Ok(Base::Real(a))
        } else {
            Err(MetricError::InvalidBase(a))
        }
    }

    pub fn e() -> Self {
        Base::Real(std::f64::consts::E)
    }

    pub fn ln(&self) -> f64 {
        match *self {
            Base::Golden => metallic(SeqParam::FIBONACCI).ln(),
            Base::Metallic(k) => metallic(k).ln(),
            Base::Real(a) => a.ln(),
        }
    }

    /// The metallic parameter when the base is `φ_k`.
    pub fn exact_param(&self) -> Option<SeqParam> {
        match *self {
            Base::Golden => Some(SeqParam::FIBONACCI),
            Base::Metallic(k) => Some(k),
            Base::Real(_) => None,
        }
    }

    fn validate(self) -> Result<Self, MetricError> {
        match self {
            Base::Real(a) => Base::real(a),
            other => Ok(other),
        }
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Base::Golden => f.write_str("golden"),
            Base::Metallic(k) => write!(f, "metallic:{k}"),
            Base::Real(a) => write!(f, "real:{a}"),
        }
    }
}

impl FromStr for Base {
    type Err = MetricError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = || MetricError::MalformedBase(s.to_string());
        match s.split_once(':') {
            None if s == "golden" => Ok(Base::Golden),
            Some(("metallic", k)) => {
                let k: u64 = k.parse().map_err(|_| malformed())?;
                SeqParam::new(k).map(Base::Metallic).map_err(|_| malformed())
            }
            Some(("real", a)) => Base::real(a.parse().map_err(|_| malformed())?),
            _ => Err(malformed()),
        }
    }
}

impl Serialize for Base {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Distance {
    /// `q` over the second tuple of the first tuple's elements.
    #[serde(with = "serde_decimal")]
    pub q_by_second: BigUint,
    /// `q` over the first tuple of the second tuple's elements.
    #[serde(with = "serde_decimal")]
    pub q_by_first: BigUint,
    #[serde(with = "serde_decimal")]
    pub max_q: BigUint,
    pub base: Base,
    #[serde(with = "serde_decimal::real12")]
    pub log_value: f64,
    /// The tuples differ in cardinality.
    pub cross_cardinality: bool,
}

pub fn distance(first: &CoprimeTuple, second: &CoprimeTuple, base: Base) -> Result<Distance, MetricError> {
    let base = base.validate()?;
    let q_by_second = q_tuple(second, first);
    let q_by_first = q_tuple(first, second);
    let max_q = (&q_by_second).max(&q_by_first).clone();
    let log_value = ln_biguint(&max_q) / base.ln();
    Ok(Distance {
        q_by_second,
        q_by_first,
        max_q,
        base,
        log_value,
        cross_cardinality: first.cardinality() != second.cardinality(),
    })
}

/// Change of base: `d_a = (log_a b) · d_b`.
pub fn rebase(d: &Distance, new_base: Base) -> Result<Distance, MetricError> {
    let new_base = new_base.validate()?;
    let factor = d.base.ln() / new_base.ln();
    Ok(Distance {
        base: new_base,
        log_value: d.log_value * factor,
        ..d.clone()
    })
}

/// Natural log of an arbitrarily large positive integer.
pub fn ln_biguint(x: &BigUint) -> f64 {
    assert!(!x.is_zero(), "ln of zero");
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit prefix");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuple(v: &[u64]) -> CoprimeTuple {
        CoprimeTuple::from_u64s(v).unwrap()
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn make_tuple_examples() {
        assert_eq!(tuple(&[1, 1]).elements(), &[big(1)]);
        assert_eq!(tuple(&[8, 5]).elements(), &[big(5), big(8)]);
        assert_eq!(CoprimeTuple::from_u64s(&[4, 6]), Err(MetricError::NotCoprime(big(2))));
    }

    #[test]
    fn make_tuple_errors_are_distinct() {
        assert_eq!(make_tuple(&[]), Err(MetricError::EmptyTuple));
        assert_eq!(
            make_tuple(&[BigInt::from(3), BigInt::from(0)]),
            Err(MetricError::NonPositiveElement(BigInt::from(0)))
        );
        assert_eq!(
            make_tuple(&[BigInt::from(-2), BigInt::from(3)]),
            Err(MetricError::NonPositiveElement(BigInt::from(-2)))
        );
    }

    #[test]
    fn q_point_examples() {
        assert_eq!(q_point(&tuple(&[1]), &big(5)).unwrap().value, big(5));
        assert_eq!(q_point(&tuple(&[2, 3]), &big(5)).unwrap().value, big(2));
        assert_eq!(q_point(&tuple(&[5, 8, 13]), &big(1)).unwrap().value, big(5));
        assert_eq!(q_point(&tuple(&[2, 3]), &big(0)), Err(MetricError::NonPositiveTarget));
    }

    #[test]
    fn q_tuple_examples() {
        assert_eq!(q_tuple(&tuple(&[2, 3]), &tuple(&[5, 8])), big(3));
        assert_eq!(q_tuple(&tuple(&[5, 8]), &tuple(&[2, 3])), big(3));
        for t in [tuple(&[1]), tuple(&[2, 3]), tuple(&[5, 8, 13])] {
            assert_eq!(q_tuple(&t, &t), big(1));
        }
    }

    #[test]
    fn distance_examples() {
        let d = distance(&tuple(&[2, 3]), &tuple(&[5, 8]), Base::Golden).unwrap();
        assert_eq!(d.max_q, big(3));
        assert!((d.log_value - 2.283_011_828_6).abs() < 1e-9, "{}", d.log_value);

        let t = tuple(&[3, 7]);
        let d = distance(&t, &t, Base::Golden).unwrap();
        assert_eq!((d.max_q, d.log_value), (big(1), 0.0));

        let d = distance(&tuple(&[1]), &tuple(&[1, 2]), Base::Golden).unwrap();
        assert_eq!(d.max_q, big(2));
        assert_eq!((d.q_by_second.clone(), d.q_by_first.clone()), (big(1), big(2)));
        assert!((d.log_value - 1.440_420_090_4).abs() < 1e-9, "{}", d.log_value);
        assert!(d.cross_cardinality);
    }

    #[test]
    fn distance_rejects_bad_base() {
        let t = tuple(&[2, 3]);
        assert!(matches!(distance(&t, &t, Base::Real(1.0)), Err(MetricError::InvalidBase(_))));
        assert!(matches!(distance(&t, &t, Base::Real(0.5)), Err(MetricError::InvalidBase(_))));
        assert!(matches!(distance(&t, &t, Base::Real(f64::NAN)), Err(MetricError::InvalidBase(_))));
    }

    #[test]
    fn rebase_examples() {
        let d = distance(&tuple(&[2, 3]), &tuple(&[5, 8]), Base::Golden).unwrap();
        let e = rebase(&d, Base::e()).unwrap();
        assert!((e.log_value - 3f64.ln()).abs() < 1e-12);
        assert_eq!(e.max_q, d.max_q);
        let same = rebase(&d, Base::Golden).unwrap();
        assert_eq!(same.log_value, d.log_value);
        let t = tuple(&[2, 3]);
        let zero = distance(&t, &t, Base::Metallic(SeqParam::new(3).unwrap())).unwrap();
        assert_eq!(rebase(&zero, Base::Real(10.0)).unwrap().log_value, 0.0);
        assert!(rebase(&d, Base::Real(1.0)).is_err());
    }

    #[test]
    fn base_parsing() {
        assert_eq!("golden".parse::<Base>().unwrap(), Base::Golden);
        assert_eq!("metallic:2".parse::<Base>().unwrap(), Base::Metallic(SeqParam::new(2).unwrap()));
        assert_eq!("real:2.5".parse::<Base>().unwrap(), Base::Real(2.5));
        assert!("metallic:0".parse::<Base>().is_err());
        assert!("real:1".parse::<Base>().is_err());
        assert!("silver".parse::<Base>().is_err());
        assert_eq!(Base::Metallic(SeqParam::new(2).unwrap()).to_string(), "metallic:2");
    }

    #[test]
    fn ln_of_huge_integers() {
        let x = BigUint::one() << 5000u32;
        let expected = 5000.0 * std::f64::consts::LN_2;
        assert!((ln_biguint(&x) - expected).abs() / expected < 1e-14);
        assert_eq!(ln_biguint(&big(1)), 0.0);
    }
}
