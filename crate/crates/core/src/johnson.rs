//! Random 52_65 colorings of Johnson schemes.
//!
//! Points are the `n`-subsets of a `(3n-4)`-set, stored as bit masks and
//! indexed by colex rank. A seeded equitable 3-partition of the points gives
//! the `b` relation (same class); across classes a pair is `a` when the
//! subsets share at least two elements and `c` otherwise. The union bound on
//! the failure probability and a Monte Carlo harness that verifies sampled
//! colorings by brute force live here too.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::ra::{builtin_52_65, AtomId};
use crate::verify::{verify_bruteforce, EdgeColoring, Verdict, VerifyError, VerifyOptions};

/// Atom ids of 52_65 as laid out by [`builtin_52_65`].
pub const ATOM_A: AtomId = AtomId(1);
pub const ATOM_B: AtomId = AtomId(2);
pub const ATOM_C: AtomId = AtomId(3);

/// Point budget for the brute-force Monte Carlo harness.
pub const MC_POINT_LIMIT: u64 = 10_000;

/// Largest universe that may be materialized point by point.
const MATERIALIZE_LIMIT: u64 = 50_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JohnsonError {
    #[error("n = {0} is out of range (need 2 <= n <= 22)")]
    InvalidN(u32),
    #[error("{size} points are not divisible by 3")]
    NotDivisible { size: u64 },
    #[error("universe of {size} points exceeds the limit of {limit}")]
    TooLarge { size: u64, limit: u64 },
    #[error("the partition count needs a positive point count")]
    Degenerate,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// The `n`-subsets of `{0, ..., 3n-5}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JohnsonUniverse {
    n: u32,
    ground: u32,
    size: u64,
}

impl JohnsonUniverse {
    pub fn new(n: u32) -> Result<Self, JohnsonError> {
        if !(2..=22).contains(&n) {
            return Err(JohnsonError::InvalidN(n));
        }
        let ground = 3 * n - 4;
        Ok(JohnsonUniverse {
            n,
            ground,
            size: binomial(ground as u64, n as u64),
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn ground(&self) -> u32 {
        self.ground
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn is_point(&self, mask: u64) -> bool {
        mask.count_ones() == self.n && mask >> self.ground == 0
    }

    /// Colex rank: `sum C(c_i, i + 1)` over the sorted elements `c_i`.
    pub fn rank(&self, mask: u64) -> u64 {
        debug_assert!(self.is_point(mask));
        let mut r = 0;
        let mut m = mask;
        let mut i = 1;
        while m != 0 {
            let c = m.trailing_zeros() as u64;
            r += binomial(c, i);
            m &= m - 1;
            i += 1;
        }
        r
    }

    pub fn unrank(&self, mut rank: u64) -> u64 {
        debug_assert!(rank < self.size);
        let mut mask = 0u64;
        let mut c = self.ground as u64;
        for i in (1..=self.n as u64).rev() {
            // largest c with C(c, i) <= rank
            c -= 1;
            while binomial(c, i) > rank {
                c -= 1;
            }
            rank -= binomial(c, i);
            mask |= 1 << c;
        }
        mask
    }

    /// All points in rank order.
    pub fn points(&self) -> Result<Vec<u64>, JohnsonError> {
        if self.size > MATERIALIZE_LIMIT {
            return Err(JohnsonError::TooLarge {
                size: self.size,
                limit: MATERIALIZE_LIMIT,
            });
        }
        // colex order is the order of Gosper's hack on masks
        let mut out = Vec::with_capacity(self.size as usize);
        let mut m: u64 = (1u64 << self.n) - 1;
        for _ in 0..self.size {
            out.push(m);
            let c = m & m.wrapping_neg();
            let r = m + c;
            m = (((r ^ m) >> 2) / c) | r;
        }
        Ok(out)
    }
}

/// Class (0, 1 or 2) of every point, all classes the same size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquitablePartition {
    classes: Vec<u8>,
    class_size: usize,
}

impl EquitablePartition {
    /// Checks that every class has exactly a third of the points.
    pub fn new(classes: Vec<u8>) -> Result<Self, JohnsonError> {
        let size = classes.len() as u64;
        if !size.is_multiple_of(3) {
            return Err(JohnsonError::NotDivisible { size });
        }
        let mut counts = [0usize; 3];
        for &c in &classes {
            if c > 2 {
                return Err(JohnsonError::Precondition(format!(
                    "class {c} out of range"
                )));
            }
            counts[c as usize] += 1;
        }
        let class_size = classes.len() / 3;
        if counts.iter().any(|&c| c != class_size) {
            return Err(JohnsonError::Precondition(format!(
                "unequal classes {counts:?}"
            )));
        }
        Ok(EquitablePartition {
            classes,
            class_size,
        })
    }

    pub fn class_of(&self, point: usize) -> u8 {
        self.classes[point]
    }

    pub fn class_size(&self) -> usize {
        self.class_size
    }

    pub fn class_sizes(&self) -> [usize; 3] {
        let mut counts = [0usize; 3];
        for &c in &self.classes {
            counts[c as usize] += 1;
        }
        counts
    }
}

/// Uniform equitable partition: a Fisher-Yates shuffle of the point indices
/// (ChaCha8 seeded from `seed`), cut into thirds.
pub fn random_equitable_partition(
    u: &JohnsonUniverse,
    seed: u64,
) -> Result<EquitablePartition, JohnsonError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_equitable_partition_with(u, &mut rng)
}

pub fn random_equitable_partition_with(
    u: &JohnsonUniverse,
    rng: &mut ChaCha8Rng,
) -> Result<EquitablePartition, JohnsonError> {
    if !u.size.is_multiple_of(3) {
        return Err(JohnsonError::NotDivisible { size: u.size });
    }
    if u.size > MATERIALIZE_LIMIT {
        return Err(JohnsonError::TooLarge {
            size: u.size,
            limit: MATERIALIZE_LIMIT,
        });
    }
    let size = u.size as usize;
    let mut order: Vec<u32> = (0..size as u32).collect();
    order.shuffle(rng);
    let third = size / 3;
    let mut classes = vec![0u8; size];
    for (pos, &p) in order.iter().enumerate() {
        classes[p as usize] = (pos / third) as u8;
    }
    Ok(EquitablePartition {
        classes,
        class_size: third,
    })
}

/// Atom of the pair of subsets `x`, `y` given whether they share a class.
/// Same-class pairs are `b` regardless of intersection size.
pub fn classify_masks(x: u64, y: u64, same_class: bool) -> AtomId {
    if x == y {
        AtomId::IDENTITY
    } else if same_class {
        ATOM_B
    } else if (x & y).count_ones() >= 2 {
        ATOM_A
    } else {
        ATOM_C
    }
}

/// Atom of the pair of points with ranks `x`, `y`.
pub fn classify(u: &JohnsonUniverse, part: &EquitablePartition, x: u64, y: u64) -> AtomId {
    if x == y {
        return AtomId::IDENTITY;
    }
    let same = part.class_of(x as usize) == part.class_of(y as usize);
    classify_masks(u.unrank(x), u.unrank(y), same)
}

/// For subsets meeting in exactly two elements, the `(n-2)^2` subsets
/// `(ground \ (x ∪ y)) ∪ {u, v}` with `u ∈ x \ y`, `v ∈ y \ x`. Each meets
/// `x` and `y` in one element.
pub fn acc_witness_family(u: &JohnsonUniverse, x: u64, y: u64) -> Result<Vec<u64>, JohnsonError> {
    if !u.is_point(x) || !u.is_point(y) {
        return Err(JohnsonError::Precondition(
            "not an n-subset of the ground set".into(),
        ));
    }
    if (x & y).count_ones() != 2 {
        return Err(JohnsonError::Precondition(format!(
            "|x ∩ y| = {}, expected 2",
            (x & y).count_ones()
        )));
    }
    let ground = (1u64 << u.ground) - 1;
    let outside = ground & !(x | y);
    let only_x = x & !y;
    let only_y = y & !x;
    let singles = |mut m: u64| {
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let b = m & m.wrapping_neg();
                m &= m - 1;
                Some(b)
            }
        })
    };
    Ok(singles(only_x)
        .flat_map(|a| singles(only_y).map(move |b| outside | a | b))
        .collect())
}

fn serialize_big<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundResult {
    pub n: u32,
    /// Natural log of `C(3n-4, n)^2 * 4^3 * (2/3)^((n-2)^2)`.
    pub log_bound: f64,
    pub below_one: bool,
    #[serde(serialize_with = "serialize_big")]
    pub binomial: BigUint,
}

fn ln_binomial(n: u64, k: u64) -> f64 {
    libm::lgamma(n as f64 + 1.0) - libm::lgamma(k as f64 + 1.0) - libm::lgamma((n - k) as f64 + 1.0)
}

/// Union bound on the probability that the random coloring is not a
/// representation, evaluated in log space.
pub fn probability_bound(n: u32) -> Result<BoundResult, JohnsonError> {
    if n < 3 {
        return Err(JohnsonError::InvalidN(n));
    }
    let (v, k) = (3 * n as u64 - 4, n as u64);
    let s = ((n - 2) as f64).powi(2);
    let log_bound = 2.0 * ln_binomial(v, k) + 3.0 * 4f64.ln() + s * (2.0f64 / 3.0).ln();
    Ok(BoundResult {
        n,
        log_bound,
        below_one: log_bound < 0.0,
        binomial: binomial_big(v, k),
    })
}

/// Smallest `n >= 3` for which the bound drops below one.
pub fn minimal_sufficient_n() -> u32 {
    (3..)
        .find(|&n| probability_bound(n).map(|b| b.below_one).unwrap_or(false))
        .expect("the bound eventually decays")
}

/// `(1/2) C(U, U/3) C(2U/3, U/3)`.
pub fn partition_count(points: u64) -> Result<BigUint, JohnsonError> {
    if points == 0 {
        return Err(JohnsonError::Degenerate);
    }
    if !points.is_multiple_of(3) {
        return Err(JohnsonError::NotDivisible { size: points });
    }
    let t = points / 3;
    Ok(binomial_big(points, t) * binomial_big(2 * t, t) / 2u32)
}

#[derive(Clone, Copy, Debug, Default)]
pub struct McOptions {
    /// Lift the point budget.
    pub allow_large: bool,
    pub early_exit: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub index: u64,
    pub verdict: Verdict,
    pub violation_count: usize,
    pub violations_by_cycle: BTreeMap<String, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialReport {
    pub n: u32,
    pub points: u64,
    pub seed: u64,
    pub trials: Vec<TrialRecord>,
    pub accepted: usize,
}

/// Samples `trials` equitable partitions and checks each induced coloring
/// against 52_65 by brute force. Trial `t` draws from ChaCha8 stream `t` of
/// `seed`, so trials are independent of one another.
pub fn mc_trial(
    n: u32,
    trials: u64,
    seed: u64,
    opts: McOptions,
) -> Result<TrialReport, JohnsonError> {
    let u = JohnsonUniverse::new(n)?;
    if u.size % 3 != 0 {
        return Err(JohnsonError::NotDivisible { size: u.size });
    }
    if !opts.allow_large && u.size > MC_POINT_LIMIT {
        return Err(JohnsonError::TooLarge {
            size: u.size,
            limit: MC_POINT_LIMIT,
        });
    }
    let spec = builtin_52_65();
    let verify_opts = VerifyOptions {
        early_exit: opts.early_exit,
        max_violations: 0,
    };
    let masks = if trials > 0 { u.points()? } else { Vec::new() };
    let mut records = Vec::new();
    for index in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        let part = random_equitable_partition_with(&u, &mut rng)?;
        let col = EdgeColoring::from_fn(masks.len(), |x, y| {
            classify_masks(masks[x], masks[y], part.class_of(x) == part.class_of(y))
        })?;
        let report = verify_bruteforce(&spec, &col, verify_opts)?;
        records.push(TrialRecord {
            index,
            verdict: report.verdict,
            violation_count: report.violation_count,
            violations_by_cycle: report.violations_by_cycle,
        });
    }
    let accepted = records
        .iter()
        .filter(|r| r.verdict == Verdict::Accept)
        .count();
    Ok(TrialReport {
        n,
        points: u.size,
        seed,
        trials: records,
        accepted,
    })
}
