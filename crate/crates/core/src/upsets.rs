//! Ultimately periodic subsets of ℕ.
//!
//! A set is stored as a threshold `t`, a period `q`, the members below `t`
//! and the residues (mod `q`) of the members at or above `t`. These are
//! exactly the length sets of unary regular languages, so every witness
//! built from lengths goes through this type.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::UpsetError;

/// The progression `{step·n + offset : n ≥ start}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArithmeticProgression {
    pub step: u64,
    pub offset: u64,
    pub start: u64,
}

impl ArithmeticProgression {
    pub fn new(step: u64, offset: u64, start: u64) -> Result<Self, UpsetError> {
        if step == 0 {
            return Err(UpsetError::ZeroStep);
        }
        Ok(Self {
            step,
            offset,
            start,
        })
    }

    /// Smallest member of the progression.
    pub fn first(&self) -> u64 {
        self.step * self.start + self.offset
    }

    pub fn contains(&self, n: u64) -> bool {
        n >= self.first() && (n - self.offset) % self.step == 0
    }

    pub fn to_upset(&self) -> UltimatelyPeriodicSet {
        let t = self.first() as usize;
        let q = self.step as usize;
        UltimatelyPeriodicSet::from_parts(t, q, BTreeSet::new(), [(t % q)].into_iter().collect())
            .expect("progression parts are consistent")
    }
}

/// An ultimately periodic subset of ℕ in canonical form.
///
/// Membership: `n < t` → `n ∈ finite_part`; `n ≥ t` → `n mod q ∈ residues`.
/// Construction always normalizes to the minimal period and then the
/// minimal threshold, so derived `PartialEq` is set equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawUpset", into = "RawUpset")]
pub struct UltimatelyPeriodicSet {
    threshold: usize,
    period: usize,
    finite_part: BTreeSet<usize>,
    residues: BTreeSet<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawUpset {
    t: usize,
    q: usize,
    finite_part: BTreeSet<usize>,
    residues: BTreeSet<usize>,
}

impl TryFrom<RawUpset> for UltimatelyPeriodicSet {
    type Error = UpsetError;

    fn try_from(raw: RawUpset) -> Result<Self, Self::Error> {
        Self::from_parts(raw.t, raw.q, raw.finite_part, raw.residues)
    }
}

impl From<UltimatelyPeriodicSet> for RawUpset {
    fn from(s: UltimatelyPeriodicSet) -> Self {
        RawUpset {
            t: s.threshold,
            q: s.period,
            finite_part: s.finite_part,
            residues: s.residues,
        }
    }
}

impl UltimatelyPeriodicSet {
    /// Validates the raw parts and returns the canonical form.
    pub fn from_parts(
        threshold: usize,
        period: usize,
        finite_part: BTreeSet<usize>,
        residues: BTreeSet<usize>,
    ) -> Result<Self, UpsetError> {
        if period == 0 {
            return Err(UpsetError::ZeroPeriod);
        }
        if let Some(&n) = finite_part.iter().find(|&&n| n >= threshold) {
            return Err(UpsetError::FinitePartAboveThreshold { value: n, threshold });
        }
        if let Some(&r) = residues.iter().find(|&&r| r >= period) {
            return Err(UpsetError::ResidueOutOfRange { residue: r, period });
        }
        let mut s = Self {
            threshold,
            period,
            finite_part,
            residues,
        };
        s.normalize();
        Ok(s)
    }

    pub fn empty() -> Self {
        Self {
            threshold: 0,
            period: 1,
            finite_part: BTreeSet::new(),
            residues: BTreeSet::new(),
        }
    }

    pub fn naturals() -> Self {
        Self {
            threshold: 0,
            period: 1,
            finite_part: BTreeSet::new(),
            residues: [0].into_iter().collect(),
        }
    }

    pub fn finite<I: IntoIterator<Item = usize>>(values: I) -> Self {
        let finite_part: BTreeSet<usize> = values.into_iter().collect();
        let threshold = finite_part.iter().next_back().map_or(0, |&m| m + 1);
        Self::from_parts(threshold, 1, finite_part, BTreeSet::new()).expect("finite set parts")
    }

    /// Union of the given progressions.
    pub fn from_progressions(ps: &[ArithmeticProgression]) -> Self {
        ps.iter()
            .map(ArithmeticProgression::to_upset)
            .fold(Self::empty(), |acc, p| acc.union(&p))
    }

    /// Builds the set from a membership predicate that is known to be
    /// `period`-periodic from `threshold` on.
    pub fn from_predicate(threshold: usize, period: usize, member: impl Fn(usize) -> bool) -> Self {
        assert!(period > 0, "period must be positive");
        let finite_part = (0..threshold).filter(|&n| member(n)).collect();
        let residues = (threshold..threshold + period)
            .filter(|&n| member(n))
            .map(|n| n % period)
            .collect();
        let mut s = Self {
            threshold,
            period,
            finite_part,
            residues,
        };
        s.normalize();
        s
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn finite_part(&self) -> &BTreeSet<usize> {
        &self.finite_part
    }

    pub fn residues(&self) -> &BTreeSet<usize> {
        &self.residues
    }

    pub fn contains(&self, n: usize) -> bool {
        if n < self.threshold {
            self.finite_part.contains(&n)
        } else {
            self.residues.contains(&(n % self.period))
        }
    }

    pub fn is_empty(&self) -> bool {
        self.finite_part.is_empty() && self.residues.is_empty()
    }

    pub fn is_infinite(&self) -> bool {
        !self.residues.is_empty()
    }

    /// Membership bitmap over `0..=max`.
    pub fn to_bitmap(&self, max: usize) -> Vec<bool> {
        (0..=max).map(|n| self.contains(n)).collect()
    }

    /// Re-minimizes the period, then the threshold. Idempotent.
    fn normalize(&mut self) {
        let q = self.period;
        let minimal = divisors(q)
            .into_iter()
            .find(|&d| {
                (0..q).all(|r| self.residues.contains(&r) == self.residues.contains(&((r + d) % q)))
            })
            .unwrap_or(q);
        if minimal != q {
            self.residues = self.residues.iter().map(|r| r % minimal).collect();
            self.period = minimal;
        }
        while self.threshold > 0 {
            let n = self.threshold - 1;
            let tail = self.residues.contains(&(n % self.period));
            if self.finite_part.contains(&n) != tail {
                break;
            }
            self.finite_part.remove(&n);
            self.threshold = n;
        }
        if self.residues.is_empty() && self.finite_part.is_empty() {
            self.period = 1;
        }
    }

    fn combine(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Self {
        let q = self.period.lcm(&other.period);
        let t = self.threshold.max(other.threshold);
        Self::from_predicate(t, q, |n| op(self.contains(n), other.contains(n)))
    }

    pub fn union(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && !b)
    }

    /// Complement relative to ℕ.
    pub fn complement(&self) -> Self {
        Self::from_predicate(self.threshold, self.period, |n| !self.contains(n))
    }

    /// `{m + n : m ∈ self, n ∈ other}`.
    ///
    /// With `L = lcm(q₁, q₂)` the sum is `L`-periodic from `t₁ + t₂ + L`, so
    /// a convolution over `0..t₁+t₂+2L` determines it.
    pub fn minkowski_sum(&self, other: &Self) -> Self {
        if self.is_empty() || other.is_empty() {
            return Self::empty();
        }
        let period = self.period.lcm(&other.period);
        let threshold = self.threshold + other.threshold + period;
        let bound = threshold + period;
        let sum = truncated_minkowski(&self.to_bitmap(bound), &other.to_bitmap(bound), bound);
        Self::from_predicate(threshold, period, |n| sum[n])
    }

    /// Residues `r < m` whose class `{n ∈ self : n ≡ r mod m}` is infinite.
    pub fn infinite_residues(&self, m: usize) -> Result<BTreeSet<usize>, UpsetError> {
        if m == 0 {
            return Err(UpsetError::ZeroPeriod);
        }
        Ok((0..m)
            .filter(|&r| {
                let class = ArithmeticProgression::new(m as u64, r as u64, 0)
                    .expect("m ≥ 1")
                    .to_upset();
                self.intersect(&class).is_infinite()
            })
            .collect())
    }
}

impl fmt::Display for UltimatelyPeriodicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{t={}, q={}, finite={:?}, residues={:?}}}", self.threshold, self.period, self.finite_part, self.residues)
    }
}

/// Minkowski sum of two membership bitmaps, cut at `max`.
pub fn truncated_minkowski(a: &[bool], b: &[bool], max: usize) -> Vec<bool> {
    let mut out = vec![false; max + 1];
    let bs: Vec<usize> = (0..b.len().min(max + 1)).filter(|&j| b[j]).collect();
    for i in (0..a.len().min(max + 1)).filter(|&i| a[i]) {
        for &j in &bs {
            if i + j > max {
                break;
            }
            out[i + j] = true;
        }
    }
    out
}

fn divisors(q: usize) -> Vec<usize> {
    (1..=q).filter(|d| q % d == 0).collect()
}
