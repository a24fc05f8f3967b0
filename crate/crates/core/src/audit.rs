//! Seeded randomized audit of the metric axioms on coprime tuples.
//!
//! Each sample draws three tuples and checks, exactly on integers:
//! submultiplicativity `q_n(k̄) ≤ q_m(k̄)·q_n(m̄)` and the multiplicative
//! triangle inequality on `max_q` for every ordering of the three, symmetry
//! of the distance, identity of indiscernibles, and `q_n(m) = 1 ⇔ m ∈ n̄`.

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::serde_decimal;
use crate::metric::{distance, make_tuple, q_point, q_tuple, Base, CoprimeTuple, MetricError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AuditConfig {
    #[serde(with = "serde_decimal")]
    pub samples: usize,
    #[serde(with = "serde_decimal")]
    pub max_value: u64,
    #[serde(with = "serde_decimal")]
    pub ell: usize,
    #[serde(with = "serde_decimal")]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    #[serde(with = "serde_decimal")]
    pub checked: u64,
    #[serde(with = "serde_decimal")]
    pub violations: u64,
}

impl Tally {
    fn record(&mut self, ok: bool) -> bool {
        self.checked += 1;
        if !ok {
            self.violations += 1;
        }
        ok
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AxiomTallies {
    pub submultiplicativity: Tally,
    pub triangle: Tally,
    pub symmetry: Tally,
    pub identity: Tally,
    pub membership: Tally,
}

impl AxiomTallies {
    pub fn total_violations(&self) -> u64 {
        [
            self.submultiplicativity,
            self.triangle,
            self.symmetry,
            self.identity,
            self.membership,
        ]
        .iter()
        .map(|t| t.violations)
        .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    #[serde(with = "serde_decimal")]
    pub sample: usize,
    pub property: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub config: AuditConfig,
    pub tallies: AxiomTallies,
    pub counterexamples: Vec<Counterexample>,
    pub passed: bool,
}

/// Uniform draw of `ell` values in `1..=max_value`, redrawn until coprime.
/// Duplicates collapse, so the cardinality can come out below `ell`.
pub fn random_tuple<R: Rng>(rng: &mut R, ell: usize, max_value: u64) -> CoprimeTuple {
    assert!(ell >= 1 && max_value >= 1, "need ell ≥ 1 and max_value ≥ 1");
    loop {
        let values: Vec<BigInt> = (0..ell).map(|_| BigInt::from(rng.gen_range(1..=max_value))).collect();
        match make_tuple(&values) {
            Ok(t) => return t,
            Err(MetricError::NotCoprime(_)) => continue,
            Err(e) => unreachable!("drawn values are positive: {e}"),
        }
    }
}

pub fn run_audit(config: AuditConfig) -> AuditReport {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut tallies = AxiomTallies::default();
    let mut counterexamples = Vec::new();

    for sample in 0..config.samples {
        let tuples: [CoprimeTuple; 3] = std::array::from_fn(|_| random_tuple(&mut rng, config.ell, config.max_value));
        let mut fail = |property: &'static str, detail: String| {
            counterexamples.push(Counterexample { sample, property, detail });
        };

        // q[i][j] = q_{t_i}(t_j)
        let q: Vec<Vec<BigUint>> = tuples
            .iter()
            .map(|src| tuples.iter().map(|dst| q_tuple(src, dst)).collect())
            .collect();
        let max_q = |i: usize, j: usize| (&q[i][j]).max(&q[j][i]).clone();

        for (a, b, c) in PERMUTATIONS {
            let (t_k, t_m, t_n) = (&tuples[a], &tuples[b], &tuples[c]);
            // q_n(k) ≤ q_m(k) · q_n(m)
            let (lhs, rhs) = (&q[c][a], &q[b][a] * &q[c][b]);
            if !tallies.submultiplicativity.record(lhs <= &rhs) {
                fail(
                    "submultiplicativity",
                    format!("k={t_k} m={t_m} n={t_n}: q_n(k)={lhs} > q_m(k)*q_n(m)={rhs}"),
                );
            }
            let (lhs, rhs) = (max_q(a, c), max_q(a, b) * max_q(b, c));
            if !tallies.triangle.record(lhs <= rhs) {
                fail(
                    "triangle",
                    format!("k={t_k} m={t_m} n={t_n}: max_q(k,n)={lhs} > max_q(k,m)*max_q(m,n)={rhs}"),
                );
            }
        }

        for (i, j) in [(0, 1), (0, 2), (1, 2), (0, 0), (1, 1), (2, 2)] {
            let (x, y) = (&tuples[i], &tuples[j]);
            let forward = distance(x, y, Base::Golden).expect("golden base is valid");
            let backward = distance(y, x, Base::Golden).expect("golden base is valid");
            let symmetric = forward.max_q == backward.max_q
                && forward.q_by_second == backward.q_by_first
                && forward.log_value == backward.log_value;
            if !tallies.symmetry.record(symmetric) {
                fail("symmetry", format!("{x} vs {y}: {} != {}", forward.max_q, backward.max_q));
            }
            let zero = forward.max_q.is_one();
            if !tallies.identity.record(zero == (x == y) && zero == (forward.log_value == 0.0)) {
                fail("identity", format!("{x} vs {y}: max_q={} equal={}", forward.max_q, x == y));
            }
        }

        for gen in &tuples {
            for target in tuples.iter().flat_map(CoprimeTuple::elements) {
                let q = q_point(gen, target).expect("positive target").value;
                if !tallies.membership.record(q.is_one() == gen.contains(target)) {
                    fail("membership", format!("q_{gen}({target})={q}, member={}", gen.contains(target)));
                }
            }
        }
    }

    let passed = tallies.total_violations() == 0;
    AuditReport {
        config,
        tallies,
        counterexamples,
        passed,
    }
}

const PERMUTATIONS: [(usize, usize, usize); 6] = [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)];
