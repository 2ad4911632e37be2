//! Finite and eventually periodic measure sequences.
//!
//! The order on sequences is the one used for Gabriel-Roiter measures: a
//! proper initial segment is smaller, otherwise the sequence with the *larger*
//! entry at the first difference is the smaller one. [`e_value`] embeds finite
//! sequences into the rationals compatibly with that order.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeasureError {
    #[error("periodic part must be nonempty")]
    EmptyPeriod,
    #[error("measure entries must be positive")]
    ZeroEntry,
}

/// A finite sequence of positive integers, ordered by the GR order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Measure(Vec<u32>);

impl Measure {
    pub fn new(entries: Vec<u32>) -> Result<Self, MeasureError> {
        if entries.contains(&0) {
            return Err(MeasureError::ZeroEntry);
        }
        Ok(Measure(entries))
    }

    /// Builds a measure from literal entries; panics on a zero entry.
    pub fn from_slice(entries: &[u32]) -> Self {
        Measure::new(entries.to_vec()).expect("measure entries must be positive")
    }

    pub fn empty() -> Self {
        Measure(Vec::new())
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of the entries (the dimension of the module the measure belongs to).
    pub fn total(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn push(&mut self, entry: u32) {
        assert!(entry > 0, "measure entries must be positive");
        self.0.push(entry);
    }

    pub fn concat(&self, other: &Measure) -> Measure {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Measure(v)
    }

    pub fn into_inner(self) -> Vec<u32> {
        self.0
    }
}

impl From<Measure> for Vec<u32> {
    fn from(m: Measure) -> Self {
        m.0
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_entries(f, &self.0)
    }
}

fn write_entries(f: &mut fmt::Formatter<'_>, entries: &[u32]) -> fmt::Result {
    // Entries above 9 are separated so the rendering stays unambiguous.
    let wide = entries.iter().any(|&e| e > 9);
    for (i, e) in entries.iter().enumerate() {
        if wide && i > 0 {
            f.write_str(".")?;
        }
        write!(f, "{e}")?;
    }
    Ok(())
}

/// Compares two entry slices in the GR order.
pub fn cmp_entries(a: &[u32], b: &[u32]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if x != y {
            // larger entry at the first difference means smaller sequence
            return y.cmp(x);
        }
    }
    a.len().cmp(&b.len())
}

pub fn cmp_measure(a: &Measure, b: &Measure) -> Ordering {
    cmp_entries(&a.0, &b.0)
}

impl Ord for Measure {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_measure(self, other)
    }
}

impl PartialOrd for Measure {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `a` followed by `k` copies of `b`.
pub fn concat_power(a: &Measure, b: &Measure, k: usize) -> Measure {
    let mut v = Vec::with_capacity(a.len() + b.len() * k);
    v.extend_from_slice(&a.0);
    for _ in 0..k {
        v.extend_from_slice(&b.0);
    }
    Measure(v)
}

/// Length of the primitive root of `seq` (the smallest `p` with `seq` a power of `seq[..p]`).
pub fn primitive_root_len(seq: &[u32]) -> usize {
    let n = seq.len();
    if n == 0 {
        return 0;
    }
    // KMP failure function
    let mut fail = vec![0usize; n + 1];
    let mut k = 0usize;
    for i in 1..n {
        while k > 0 && seq[i] != seq[k] {
            k = fail[k];
        }
        if seq[i] == seq[k] {
            k += 1;
        }
        fail[i + 1] = k;
    }
    let p = n - fail[n];
    if n.is_multiple_of(p) {
        p
    } else {
        n
    }
}

/// Index of the GR-minimal rotation of `seq`, the smallest such shift.
///
/// Booth's least-rotation algorithm run with the GR comparison on entries.
pub fn least_rotation(seq: &[u32]) -> usize {
    let n = seq.len();
    if n == 0 {
        return 0;
    }
    // In the GR order (equal lengths) a larger entry is "less".
    let less = |x: u32, y: u32| x > y;
    let at = |i: usize| seq[i % n];
    let mut fail: Vec<isize> = vec![-1; 2 * n];
    let mut k = 0usize;
    for j in 1..2 * n {
        let sj = at(j);
        let mut i = fail[j - k - 1];
        while i != -1 && sj != at(k + i as usize + 1) {
            if less(sj, at(k + i as usize + 1)) {
                k = j - i as usize - 1;
            }
            i = fail[i as usize];
        }
        if sj != at(k + (i + 1) as usize) {
            if less(sj, at(k)) {
                k = j;
            }
            fail[j - k] = -1;
        } else {
            fail[j - k] = i + 1;
        }
    }
    k % primitive_root_len(seq)
}

/// An eventually periodic sequence `prefix · period^∞` in canonical form:
/// the period is primitive and GR-minimal among its rotations, and the prefix
/// is the shortest one compatible with that period.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PeriodicMeasure {
    prefix: Measure,
    period: Measure,
}

impl PeriodicMeasure {
    pub fn prefix(&self) -> &Measure {
        &self.prefix
    }

    pub fn period(&self) -> &Measure {
        &self.period
    }

    /// Entry at index `i` (0-based).
    pub fn entry(&self, i: usize) -> u32 {
        let p = self.prefix.len();
        if i < p {
            self.prefix.0[i]
        } else {
            self.period.0[(i - p) % self.period.len()]
        }
    }

    /// The first `n` entries.
    pub fn truncate(&self, n: usize) -> Measure {
        Measure((0..n).map(|i| self.entry(i)).collect())
    }
}

impl fmt::Display for PeriodicMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_entries(f, &self.prefix.0)?;
        f.write_str("(")?;
        write_entries(f, &self.period.0)?;
        f.write_str(")^")
    }
}

pub fn canonical_periodic(prefix: &Measure, period: &Measure) -> Result<PeriodicMeasure, MeasureError> {
    if period.is_empty() {
        return Err(MeasureError::EmptyPeriod);
    }
    let root = &period.0[..primitive_root_len(&period.0)];
    let shift = least_rotation(root);
    let mut pre = prefix.0.clone();
    pre.extend_from_slice(&root[..shift]);
    let mut per = root[shift..].to_vec();
    per.extend_from_slice(&root[..shift]);
    // a trailing full copy of the period belongs to the periodic tail
    while pre.len() >= per.len() && pre[pre.len() - per.len()..] == per[..] {
        pre.truncate(pre.len() - per.len());
    }
    Ok(PeriodicMeasure { prefix: Measure(pre), period: Measure(per) })
}

/// A finite or eventually periodic sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Sequence {
    Periodic(PeriodicMeasure),
    Finite(Measure),
}

impl Sequence {
    fn entry(&self, i: usize) -> Option<u32> {
        match self {
            Sequence::Finite(m) => m.0.get(i).copied(),
            Sequence::Periodic(p) => Some(p.entry(i)),
        }
    }

    fn unroll_hint(&self) -> (usize, usize) {
        match self {
            Sequence::Finite(m) => (m.len(), 1),
            Sequence::Periodic(p) => (p.prefix.len(), p.period.len()),
        }
    }
}

impl From<Measure> for Sequence {
    fn from(m: Measure) -> Self {
        Sequence::Finite(m)
    }
}

impl From<PeriodicMeasure> for Sequence {
    fn from(p: PeriodicMeasure) -> Self {
        Sequence::Periodic(p)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Compares finite or canonical periodic sequences in the GR order.
pub fn cmp_periodic(a: &Sequence, b: &Sequence) -> Ordering {
    let (pa, la) = a.unroll_hint();
    let (pb, lb) = b.unroll_hint();
    let lcm = la / gcd(la, lb) * lb;
    let bound = pa + pb + 2 * lcm + 1;
    for i in 0..bound {
        match (a.entry(i), b.entry(i)) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) if x != y => return y.cmp(&x),
            _ => {}
        }
    }
    // Both are infinite and agree far enough: canonical forms coincide.
    Ordering::Equal
}

impl Ord for PeriodicMeasure {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_periodic(&Sequence::Periodic(self.clone()), &Sequence::Periodic(other.clone()))
    }
}

impl PartialOrd for PeriodicMeasure {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn pow2_inv(exp: u64) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << exp)
}

fn e_finite(entries: &[u32]) -> (BigRational, u64) {
    let mut acc = BigRational::zero();
    let mut sigma = 0u64;
    for &e in entries {
        sigma += u64::from(e);
        acc += pow2_inv(sigma);
    }
    (acc, sigma)
}

/// `Σ 2^{-σ_ℓ}` over the partial sums `σ_ℓ`, exactly.
pub fn e_value(seq: &Sequence) -> BigRational {
    match seq {
        Sequence::Finite(m) => e_finite(&m.0).0,
        Sequence::Periodic(p) => {
            let (head, sigma) = e_finite(&p.prefix.0);
            let (block, period_sum) = e_finite(&p.period.0);
            // geometric series over the repeated period
            let ratio = pow2_inv(period_sum);
            let tail = pow2_inv(sigma) * block / (BigRational::one() - ratio);
            head + tail
        }
    }
}
