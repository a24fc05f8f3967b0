//! Minimal-L1 integer representations.
//!
//! Given generators `n_1 < … < n_ℓ` and a target `m`, find integers `x_i`
//! with `Σ n_i·x_i = m` minimising `Σ |x_i|`. Two generators are solved in
//! closed form over the one-parameter solution family; more generators go
//! through a depth-first branch and bound whose leaves are two-generator
//! problems. [`brute_force_min_l1`] is an exhaustive oracle used to check
//! both.
//!
//! Among minimisers the lexicographically smallest coefficient vector (in
//! ascending generator order) is returned, so witnesses are deterministic.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::serde_decimal;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiophantineError {
    #[error("generator list is empty")]
    EmptyGenerators,
    #[error("generators must be positive")]
    NonPositiveGenerator,
    #[error("generators must be strictly increasing")]
    UnsortedGenerators,
    #[error("target must be positive")]
    NonPositiveTarget,
    #[error("{target} is not representable: generator gcd {gcd} does not divide it")]
    NotRepresentable { gcd: BigUint, target: BigUint },
    #[error("no representation with cost at most {budget}")]
    ExceedsBudget { budget: u64 },
    #[error("brute-force oracle only handles generators and targets below 2^63")]
    OracleOverflow,
}

/// Strictly increasing list of positive generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Generators(#[serde(with = "serde_decimal::vec")] Vec<BigUint>);

impl Generators {
    pub fn new(values: Vec<BigUint>) -> Result<Self, DiophantineError> {
        if values.is_empty() {
            return Err(DiophantineError::EmptyGenerators);
        }
        if values.iter().any(Zero::is_zero) {
            return Err(DiophantineError::NonPositiveGenerator);
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(DiophantineError::UnsortedGenerators);
        }
        Ok(Generators(values))
    }

    pub fn from_u64s(values: &[u64]) -> Result<Self, DiophantineError> {
        Generators::new(values.iter().map(|&v| BigUint::from(v)).collect())
    }

    pub fn values(&self) -> &[BigUint] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn gcd(&self) -> BigUint {
        self.0.iter().fold(BigUint::zero(), |acc, v| acc.gcd(v))
    }

    pub fn largest(&self) -> &BigUint {
        self.0.last().expect("generators are non-empty")
    }
}

/// Coefficient vector aligned with a [`Generators`] list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Representation {
    #[serde(with = "serde_decimal::vec")]
    pub coeffs: Vec<BigInt>,
    #[serde(with = "serde_decimal")]
    pub cost: BigUint,
}

impl Representation {
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let cost = l1(&coeffs);
        Representation { coeffs, cost }
    }

    /// `Σ n_i·x_i`.
    pub fn evaluate(&self, gens: &Generators) -> BigInt {
        gens.values()
            .iter()
            .zip(&self.coeffs)
            .map(|(g, x)| BigInt::from(g.clone()) * x)
            .sum()
    }

    pub fn represents(&self, gens: &Generators, target: &BigUint) -> bool {
        self.coeffs.len() == gens.len()
            && self.cost == l1(&self.coeffs)
            && self.evaluate(gens) == BigInt::from(target.clone())
    }
}

/// The minimum cost together with one optimal witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QValue {
    #[serde(with = "serde_decimal")]
    pub value: BigUint,
    pub witness: Representation,
}

impl QValue {
    fn from_witness(witness: Representation) -> Self {
        QValue {
            value: witness.cost.clone(),
            witness,
        }
    }
}

fn l1(coeffs: &[BigInt]) -> BigUint {
    coeffs.iter().map(BigInt::magnitude).sum()
}

/// Extended Euclid: returns `(g, x, y)` with `a·x + b·y = g = gcd(a, b)`.
///
/// `x` is normalised to the residue of least magnitude modulo `b / g`
/// (non-negative on ties); when `a` divides `b` the answer is `(a, 1, 0)`.
pub fn ext_gcd(a: &BigUint, b: &BigUint) -> (BigUint, BigInt, BigInt) {
    assert!(!a.is_zero() && !b.is_zero(), "ext_gcd needs positive inputs");
    let (a, b) = (BigInt::from(a.clone()), BigInt::from(b.clone()));
    if b.is_multiple_of(&a) {
        return (a.magnitude().clone(), BigInt::one(), BigInt::zero());
    }
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let next_r = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, next_s);
    }
    let g = old_r;
    let period = &b / &g;
    let mut x = old_s.mod_floor(&period);
    // Pick the representative of least magnitude; ties go to x ≥ 0.
    if &x * 2 > period {
        x -= &period;
    }
    let y = (&g - &a * &x) / &b;
    (g.magnitude().clone(), x, y)
}

/// Exact minimum of `|x| + |y|` subject to `n1·x + n2·y = m`.
pub fn min_l1_two(n1: &BigUint, n2: &BigUint, m: &BigUint) -> Result<QValue, DiophantineError> {
    let gens = Generators::new(vec![n1.clone(), n2.clone()])?;
    if m.is_zero() {
        return Err(DiophantineError::NonPositiveTarget);
    }
    let target = BigInt::from(m.clone());
    let pair = solve_pair(&gens.0[0], &gens.0[1], &target).ok_or_else(|| {
        DiophantineError::NotRepresentable {
            gcd: gens.gcd(),
            target: m.clone(),
        }
    })?;
    Ok(QValue::from_witness(Representation::from_coeffs(vec![pair.x, pair.y])))
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct PairSolution {
    x: BigInt,
    y: BigInt,
    cost: BigUint,
    /// Parameter of the chosen point on the family `x0 + t·b, y0 - t·a`.
    t: BigInt,
}

/// Solution family for `n1·x + n2·y = m` (any sign of `m`): the particular
/// solution `(x0, y0)` and the reduced steps `a = n1/g`, `b = n2/g`.
struct PairFamily {
    x0: BigInt,
    y0: BigInt,
    a: BigInt,
    b: BigInt,
}

impl PairFamily {
    fn new(n1: &BigUint, n2: &BigUint, m: &BigInt) -> Option<Self> {
        let (g, x, y) = ext_gcd(n1, n2);
        let g = BigInt::from(g);
        if !m.is_multiple_of(&g) {
            return None;
        }
        let scale = m / &g;
        Some(PairFamily {
            x0: x * &scale,
            y0: y * &scale,
            a: BigInt::from(n1.clone()) / &g,
            b: BigInt::from(n2.clone()) / &g,
        })
    }

    fn point(&self, t: &BigInt) -> (BigInt, BigInt) {
        (&self.x0 + t * &self.b, &self.y0 - t * &self.a)
    }

    fn cost(&self, t: &BigInt) -> BigUint {
        let (x, y) = self.point(t);
        x.magnitude() + y.magnitude()
    }

    /// Integer neighbours of the two breakpoints `-x0/b` and `y0/a`. The cost
    /// is convex in `t` with its real minimum at a breakpoint.
    fn candidates(&self) -> [BigInt; 4] {
        let nx = -&self.x0;
        [
            nx.div_floor(&self.b),
            nx.div_ceil(&self.b),
            self.y0.div_floor(&self.a),
            self.y0.div_ceil(&self.a),
        ]
    }
}

fn solve_pair(n1: &BigUint, n2: &BigUint, m: &BigInt) -> Option<PairSolution> {
    let family = PairFamily::new(n1, n2, m)?;
    let mut best: Option<PairSolution> = None;
    for t in family.candidates() {
        let cost = family.cost(&t);
        // x grows with t, so the smaller t is the lexicographically smaller pair.
        let better = match &best {
            None => true,
            Some(b) => (&cost, &t) < (&b.cost, &b.t),
        };
        if better {
            let (x, y) = family.point(&t);
            best = Some(PairSolution { x, y, cost, t });
        }
    }
    best
}

/// Exact minimal-L1 representation of `m` over any number of generators.
pub fn min_l1_general(gens: &Generators, m: &BigUint) -> Result<QValue, DiophantineError> {
    if m.is_zero() {
        return Err(DiophantineError::NonPositiveTarget);
    }
    let gcd = gens.gcd();
    if !m.is_multiple_of(&gcd) {
        return Err(DiophantineError::NotRepresentable {
            gcd,
            target: m.clone(),
        });
    }
    let target = BigInt::from(m.clone());
    let witness = match gens.values() {
        [single] => {
            let x = m / single;
            Representation::from_coeffs(vec![BigInt::from(x)])
        }
        [n1, n2] => {
            let pair = solve_pair(n1, n2, &target).expect("gcd divides target");
            Representation::from_coeffs(vec![pair.x, pair.y])
        }
        _ => BranchAndBound::new(gens).solve(&target),
    };
    debug_assert!(witness.represents(gens, m), "invalid witness {witness:?} for {m}");
    Ok(QValue::from_witness(witness))
}

struct BranchAndBound<'a> {
    gens: &'a [BigUint],
    signed: Vec<BigInt>,
    /// `prefix_gcd[i] = gcd(g_0, …, g_i)`.
    prefix_gcd: Vec<BigInt>,
    best_cost: BigUint,
    best: Vec<BigInt>,
    current: Vec<BigInt>,
}

impl<'a> BranchAndBound<'a> {
    fn new(gens: &'a Generators) -> Self {
        let signed: Vec<BigInt> = gens.values().iter().map(|g| BigInt::from(g.clone())).collect();
        let prefix_gcd = signed
            .iter()
            .scan(BigInt::zero(), |acc, g| {
                *acc = acc.gcd(g);
                Some(acc.clone())
            })
            .collect();
        let len = signed.len();
        BranchAndBound {
            gens: gens.values(),
            signed,
            prefix_gcd,
            best_cost: BigUint::zero(),
            best: Vec::new(),
            current: vec![BigInt::zero(); len],
        }
    }

    fn solve(mut self, target: &BigInt) -> Representation {
        self.best = self.seed(target);
        self.best_cost = l1(&self.best);
        let top = self.signed.len() - 1;
        self.descend(top, target.clone(), BigUint::zero());
        Representation::from_coeffs(self.best)
    }

    /// Greedy descent: take as many of each large generator as fit, then close
    /// the remainder exactly on the two smallest generators.
    fn seed(&self, target: &BigInt) -> Vec<BigInt> {
        let mut coeffs = vec![BigInt::zero(); self.signed.len()];
        let mut residual = target.clone();
        for i in (2..self.signed.len()).rev() {
            let (q, r) = residual.div_mod_floor(&self.signed[i]);
            coeffs[i] = q;
            residual = r;
        }
        if let Some(pair) = solve_pair(&self.gens[0], &self.gens[1], &residual) {
            coeffs[0] = pair.x;
            coeffs[1] = pair.y;
            return coeffs;
        }
        self.bezout_seed(target)
    }

    /// Fallback seed when the two smallest generators alone cannot close the
    /// greedy remainder: chain extended gcds across all generators.
    fn bezout_seed(&self, target: &BigInt) -> Vec<BigInt> {
        let mut coeffs = vec![BigInt::zero(); self.signed.len()];
        coeffs[0] = BigInt::one();
        let mut running = self.gens[0].clone();
        for i in 1..self.gens.len() {
            let (g, x, y) = ext_gcd(&running, &self.gens[i]);
            for c in coeffs.iter_mut().take(i) {
                *c *= &x;
            }
            coeffs[i] = y;
            running = g;
        }
        let scale = target / BigInt::from(running);
        coeffs.iter_mut().for_each(|c| *c *= &scale);
        coeffs
    }

    fn lower_bound(residual: &BigInt, largest: &BigInt) -> BigUint {
        residual.magnitude().div_ceil(largest.magnitude())
    }

    fn descend(&mut self, index: usize, residual: BigInt, spent: BigUint) {
        if index == 1 {
            let Some(pair) = solve_pair(&self.gens[0], &self.gens[1], &residual) else {
                return;
            };
            let total = &spent + &pair.cost;
            self.current[0] = pair.x;
            self.current[1] = pair.y;
            let better = match total.cmp(&self.best_cost) {
                Ordering::Less => true,
                Ordering::Equal => self.current < self.best,
                Ordering::Greater => false,
            };
            if better {
                self.best_cost = total;
                self.best.clone_from(&self.current);
            }
            return;
        }

        let g = self.signed[index].clone();
        if &spent + Self::lower_bound(&residual, &g) > self.best_cost {
            return;
        }
        // spent + |x| + ceil(|residual - x·g| / next) is minimised at x ≈ residual/g
        // and never decreases moving away from it (g > next), so walk outward in
        // both directions and stop each walk at the first x over budget.
        let center = residual.div_floor(&g);
        self.walk(index, &residual, &spent, center.clone(), 1);
        self.walk(index, &residual, &spent, center - 1, -1);
    }

    fn walk(&mut self, index: usize, residual: &BigInt, spent: &BigUint, start: BigInt, step: i32) {
        let g = self.signed[index].clone();
        let next = self.signed[index - 1].clone();
        let mut x = start;
        loop {
            let rest = residual - &x * &g;
            let spent_here = spent + x.magnitude();
            if &spent_here + Self::lower_bound(&rest, &next) > self.best_cost {
                return;
            }
            if rest.is_multiple_of(&self.prefix_gcd[index - 1]) {
                self.current[index] = x.clone();
                self.descend(index - 1, rest, spent_here);
                self.current[index] = BigInt::zero();
            }
            x += step;
        }
    }
}

/// Exhaustive oracle: tries every coefficient vector in order of increasing
/// total cost (lexicographically within one cost) and returns the first hit.
pub fn brute_force_min_l1(gens: &Generators, m: &BigUint, budget: u64) -> Result<QValue, DiophantineError> {
    if m.is_zero() {
        return Err(DiophantineError::NonPositiveTarget);
    }
    let small: Vec<i128> = gens
        .values()
        .iter()
        .map(|g| g.to_i64().map(i128::from))
        .collect::<Option<_>>()
        .ok_or(DiophantineError::OracleOverflow)?;
    let target = m.to_i64().map(i128::from).ok_or(DiophantineError::OracleOverflow)?;
    let mut coeffs = vec![0i64; small.len()];
    for cost in 0..=budget {
        if search_exact_cost(&small, target, cost as i64, 0, 0, &mut coeffs) {
            let witness = Representation::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect());
            return Ok(QValue::from_witness(witness));
        }
    }
    Err(DiophantineError::ExceedsBudget { budget })
}

/// Depth-first over positions in lexicographic order; the last coefficient is
/// forced to spend whatever cost remains.
fn search_exact_cost(gens: &[i128], target: i128, remaining: i64, pos: usize, acc: i128, coeffs: &mut [i64]) -> bool {
    if pos + 1 == gens.len() {
        for x in [-remaining, remaining] {
            if acc + gens[pos] * i128::from(x) == target {
                coeffs[pos] = x;
                return true;
            }
        }
        return false;
    }
    for x in -remaining..=remaining {
        coeffs[pos] = x;
        if search_exact_cost(gens, target, remaining - x.abs(), pos + 1, acc + gens[pos] * i128::from(x), coeffs) {
            return true;
        }
    }
    false
}
