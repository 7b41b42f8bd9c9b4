//! Validity, cyclicity and non-domination checks with machine-checkable
//! counterexamples.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Roots;
use num_traits::{ToPrimitive, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::construction::ConstructionSpec;
use crate::error::{Error, Result};
use crate::model::{first_bad_step, leq_unchecked, VectorSequence};
use crate::par::{self, Exec};

/// Full pairwise scans refuse above this many coordinate comparisons.
pub const DEFAULT_MAX_COMPARISONS: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    BadStep,
    BrokenCycle,
    DominatingPair,
}

impl ViolationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationKind::BadStep => "bad-step",
            ViolationKind::BrokenCycle => "broken-cycle",
            ViolationKind::DominatingPair => "dominating-pair",
        }
    }
}

/// A counterexample.
///
/// * bad-step: `index_b = index_a + 1` and the step fails at `coordinate`;
/// * broken-cycle: `index_a` is the last index and `index_b = 0`;
/// * dominating-pair: `index_a < index_b` and `v[index_a] <= v[index_b]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Violation {
    pub kind: ViolationKind,
    pub index_a: BigUint,
    pub index_b: BigUint,
    pub coordinate: Option<usize>,
}

impl Violation {
    pub fn bad_step(a: impl Into<BigUint>, coordinate: usize) -> Self {
        let a = a.into();
        Violation {
            kind: ViolationKind::BadStep,
            index_b: &a + 1u32,
            index_a: a,
            coordinate: Some(coordinate),
        }
    }

    pub fn broken_cycle(last: impl Into<BigUint>, coordinate: usize) -> Self {
        Violation {
            kind: ViolationKind::BrokenCycle,
            index_a: last.into(),
            index_b: BigUint::ZERO,
            coordinate: Some(coordinate),
        }
    }

    pub fn dominating_pair(a: impl Into<BigUint>, b: impl Into<BigUint>) -> Self {
        Violation {
            kind: ViolationKind::DominatingPair,
            index_a: a.into(),
            index_b: b.into(),
            coordinate: None,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {}",
            self.kind.as_str(),
            self.index_a,
            self.index_b
        )?;
        if let Some(c) = self.coordinate {
            write!(f, " coordinate {c}")?;
        }
        Ok(())
    }
}

/// First bad step in index order.
pub fn check_valid(seq: &VectorSequence) -> Option<Violation> {
    seq.rows()
        .zip(seq.rows().skip(1))
        .enumerate()
        .find_map(|(i, (v, w))| {
            first_bad_step(v, w)
                .expect("rows share a dimension")
                .map(|c| Violation::bad_step(i as u64, c))
        })
}

/// Validity plus the wrap step from the last vector back to the first.
pub fn check_cyclic(seq: &VectorSequence) -> Option<Violation> {
    if let Some(v) = check_valid(seq) {
        return Some(v);
    }
    let n = seq.len();
    if n == 0 {
        return None;
    }
    first_bad_step(seq.row(n - 1), seq.row(0))
        .expect("rows share a dimension")
        .map(|c| Violation::broken_cycle((n - 1) as u64, c))
}

#[derive(Clone, Copy, Debug)]
pub struct FullCheck {
    pub max_comparisons: u64,
    pub exec: Exec,
}

impl Default for FullCheck {
    fn default() -> Self {
        FullCheck {
            max_comparisons: DEFAULT_MAX_COMPARISONS,
            exec: Exec::Parallel,
        }
    }
}

/// Pairwise non-domination scan. Reports the lexicographically first
/// dominated pair `(i, j)`; the answer does not depend on scheduling.
pub fn check_non_dominating_full(
    seq: &VectorSequence,
    opts: &FullCheck,
) -> Result<Option<Violation>> {
    let n = seq.len();
    let required = BigUint::from(n) * n.saturating_sub(1) / 2u32 * seq.dim();
    if required > BigUint::from(opts.max_comparisons) {
        return Err(Error::BudgetExceeded {
            what: "full pairwise check (use sampled mode)",
            required,
            budget: opts.max_comparisons,
        });
    }
    let hit = par::find_map_first(opts.exec, 0..n, |i| {
        let v = seq.row(i);
        (i + 1..n)
            .find(|&j| leq_unchecked(v, seq.row(j)))
            .map(|j| (i, j))
    });
    Ok(hit.map(|(i, j)| Violation::dominating_pair(i as u64, j as u64)))
}

/// Validity and cyclicity of the construction by walking it once.
pub fn check_cyclic_streaming(spec: &ConstructionSpec) -> Result<Option<Violation>> {
    let len = spec
        .length_u64()
        .ok_or_else(|| Error::Overflow(spec.length().clone()))?;
    let mut w = spec.walker::<u64>(&BigUint::ZERO)?;
    let mut prev = w.current().to_vec();
    for k in 0..len {
        w.advance();
        let cur = w.current();
        if let Some(c) = first_bad_step(&prev, cur)? {
            return Ok(Some(if k + 1 == len {
                Violation::broken_cycle(k, c)
            } else {
                Violation::bad_step(k, c)
            }));
        }
        prev.copy_from_slice(cur);
    }
    Ok(None)
}

/// Sequences that can be read at arbitrary indices.
pub trait RandomAccess: Sync {
    fn dim(&self) -> usize;
    fn length(&self) -> BigUint;
    fn vector(&self, k: &BigUint) -> Result<Vec<BigUint>>;

    /// Machine-word access, when the implementation has one.
    fn vector_u64(&self, _k: u64) -> Option<Vec<u64>> {
        None
    }

    /// A claimed coordinate where `v[a] > v[b]`, if the sequence can certify one.
    fn witness(&self, _a: &BigUint, _b: &BigUint) -> Option<Result<usize>> {
        None
    }

    fn witness_u64(&self, _a: u64, _b: u64) -> Option<Result<usize>> {
        None
    }
}

impl RandomAccess for ConstructionSpec {
    fn dim(&self) -> usize {
        self.target_dim()
    }
    fn length(&self) -> BigUint {
        ConstructionSpec::length(self).clone()
    }
    fn vector(&self, k: &BigUint) -> Result<Vec<BigUint>> {
        Ok(self.index_at(k)?.into_coords())
    }
    fn vector_u64(&self, k: u64) -> Option<Vec<u64>> {
        self.index_at_u64(k).ok().flatten()
    }
    fn witness(&self, a: &BigUint, b: &BigUint) -> Option<Result<usize>> {
        Some(self.domination_witness(a, b))
    }
    fn witness_u64(&self, a: u64, b: u64) -> Option<Result<usize>> {
        self.domination_witness_u64(a, b).transpose()
    }
}

impl RandomAccess for VectorSequence {
    fn dim(&self) -> usize {
        VectorSequence::dim(self)
    }
    fn length(&self) -> BigUint {
        BigUint::from(self.len())
    }
    fn vector(&self, k: &BigUint) -> Result<Vec<BigUint>> {
        k.to_usize()
            .and_then(|i| self.get(i))
            .map(|r| r.iter().map(|&c| BigUint::from(c)).collect())
            .ok_or_else(|| Error::IndexOutOfRange {
                index: k.clone(),
                length: BigUint::from(self.len()),
            })
    }
    fn vector_u64(&self, k: u64) -> Option<Vec<u64>> {
        self.get(usize::try_from(k).ok()?).map(<[u64]>::to_vec)
    }
}

/// Seeded uniform sampler over pairs `a < b < len`.
///
/// Fixed algorithm, so reports replay on any platform:
///
/// 1. the generator is ChaCha8 seeded with `seed_from_u64(seed)`;
/// 2. with `P = len (len - 1) / 2`, draw `w = ceil((bits(P) + 64) / 64)`
///    words from `next_u64`, assemble them little-endian into `R` and take
///    `r = R mod P` (bias below `2^-64`, no rejection loop);
/// 3. unrank `r` as `b = floor((1 + isqrt(8r + 1)) / 2)`, `a = r - b(b - 1)/2`.
pub struct PairSampler {
    rng: ChaCha8Rng,
    pairs: BigUint,
    words: usize,
    small: Option<u128>,
}

impl PairSampler {
    pub fn new(len: &BigUint, seed: u64) -> Self {
        let pairs = if len < &BigUint::from(2u32) {
            BigUint::ZERO
        } else {
            len * (len - 1u32) / 2u32
        };
        let words = (pairs.bits() as usize + 64).div_ceil(64);
        let small = if words <= 2 { pairs.to_u128() } else { None };
        PairSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            pairs,
            words,
            small,
        }
    }

    pub fn pair_count(&self) -> &BigUint {
        &self.pairs
    }

    /// Next pair as machine words; only when the pair count fits in `u64`.
    pub fn next_u64(&mut self) -> Option<(u64, u64)> {
        let p = self.small?;
        if p == 0 || p > u64::MAX as u128 {
            return None;
        }
        let lo = self.rng.next_u64() as u128;
        let hi = if self.words == 2 {
            self.rng.next_u64() as u128
        } else {
            0
        };
        let r = ((hi << 64) | lo) % p;
        let b = (8 * r + 1).sqrt().div_ceil(2);
        let a = r - b * (b - 1) / 2;
        Some((a as u64, b as u64))
    }

    pub fn next_big(&mut self) -> Option<(BigUint, BigUint)> {
        if self.pairs.is_zero() {
            return None;
        }
        let mut digits = Vec::with_capacity(self.words * 2);
        for _ in 0..self.words {
            let w = self.rng.next_u64();
            digits.push(w as u32);
            digits.push((w >> 32) as u32);
        }
        let r = BigUint::new(digits) % &self.pairs;
        let b: BigUint = (((&r << 3u32) + 1u32).sqrt() + 1u32) >> 1u32;
        let a = &r - &b * (&b - 1u32) / 2u32;
        Some((a, b))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleReport {
    pub seed: u64,
    pub pairs_checked: u64,
    /// True when every pair was checked instead of a sample.
    pub exhaustive: bool,
    pub violations: Vec<Violation>,
    /// Pairs where the sequence's own witness was missing or wrong.
    pub witness_failures: Vec<(BigUint, BigUint)>,
}

impl SampleReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.witness_failures.is_empty()
    }
}

enum Outcome {
    Ok,
    Dominated,
    BadWitness,
    DominatedBadWitness,
}

fn judge<T: crate::cell::Cell>(va: &[T], vb: &[T], witness: Option<Result<usize>>) -> Outcome {
    let dominated = leq_unchecked(va, vb);
    let bad_witness = match witness {
        None => false,
        Some(Ok(l)) => !(l < va.len() && va[l] > vb[l]),
        Some(Err(_)) => true,
    };
    match (dominated, bad_witness) {
        (false, false) => Outcome::Ok,
        (true, false) => Outcome::Dominated,
        (false, true) => Outcome::BadWitness,
        (true, true) => Outcome::DominatedBadWitness,
    }
}

const CHUNK: usize = 1 << 14;

/// Checks `samples` seeded random pairs (all pairs when that is no more than
/// `samples`), cross-checking the sequence's witness where it offers one.
pub fn check_non_dominating_sampled<S: RandomAccess + ?Sized>(
    seq: &S,
    samples: u64,
    seed: u64,
    exec: Exec,
) -> Result<SampleReport> {
    let len = seq.length();
    let mut sampler = PairSampler::new(&len, seed);
    let total = sampler.pair_count().clone();
    let exhaustive = total <= BigUint::from(samples);
    let count = if exhaustive {
        total.to_u64().expect("<= samples")
    } else {
        samples
    };
    let use_small = len
        .to_u64()
        .is_some_and(|l| seq.vector_u64(l.saturating_sub(1)).is_some())
        && (exhaustive || sampler.small.is_some_and(|p| p <= u64::MAX as u128));

    let mut report = SampleReport {
        seed,
        pairs_checked: count,
        exhaustive,
        violations: Vec::new(),
        witness_failures: Vec::new(),
    };
    let mut record = |a: BigUint, b: BigUint, o: Outcome| match o {
        Outcome::Ok => {}
        Outcome::Dominated => report.violations.push(Violation::dominating_pair(a, b)),
        Outcome::BadWitness => report.witness_failures.push((a, b)),
        Outcome::DominatedBadWitness => {
            report
                .violations
                .push(Violation::dominating_pair(a.clone(), b.clone()));
            report.witness_failures.push((a, b));
        }
    };

    let mut exhaustive_pairs = if exhaustive {
        let n = len.to_u64().expect("few pairs");
        Some((1..n).flat_map(move |b| (0..b).map(move |a| (a, b))))
    } else {
        None
    };

    let mut done = 0u64;
    while done < count {
        let take = (count - done).min(CHUNK as u64) as usize;
        done += take as u64;
        if use_small {
            let pairs: Vec<(u64, u64)> = (0..take)
                .map(|_| match exhaustive_pairs.as_mut() {
                    Some(it) => it.next().expect("count matches"),
                    None => sampler.next_u64().expect("small sampler"),
                })
                .collect();
            let outcomes = par::map_collect(exec, &pairs, |&(a, b)| {
                let va = seq.vector_u64(a).expect("in range");
                let vb = seq.vector_u64(b).expect("in range");
                judge(&va, &vb, seq.witness_u64(a, b))
            });
            for ((a, b), o) in pairs.into_iter().zip(outcomes) {
                record(a.into(), b.into(), o);
            }
        } else {
            let pairs: Vec<(BigUint, BigUint)> = (0..take)
                .map(|_| match exhaustive_pairs.as_mut() {
                    Some(it) => {
                        let (a, b) = it.next().expect("count matches");
                        (a.into(), b.into())
                    }
                    None => sampler.next_big().expect("nonempty"),
                })
                .collect();
            let outcomes = par::map_collect(exec, &pairs, |(a, b)| -> Result<Outcome> {
                let va = seq.vector(a)?;
                let vb = seq.vector(b)?;
                Ok(judge(&va, &vb, seq.witness(a, b)))
            });
            for ((a, b), o) in pairs.into_iter().zip(outcomes) {
                record(a, b, o?);
            }
        }
    }
    Ok(report)
}
