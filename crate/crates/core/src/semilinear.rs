//! Linear and semi-linear subsets of ℕ^k.
//!
//! A linear set is given by a critical matrix `T` with `m+1` rows of width
//! `k`: row 0 is the offset, rows `1..=m` are periods, and `v` is a member
//! iff `(1, z₁, …, z_m)·T = v` for some `z ∈ ℕ^m`.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::SemilinearError;
use crate::upsets::UltimatelyPeriodicSet;

/// Symbol-occurrence counts in a declared symbol order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ParikhVector(pub Vec<u64>);

impl ParikhVector {
    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    pub fn l1_norm(&self) -> u64 {
        self.0.iter().sum()
    }
}

/// Parikh image of `x` with respect to `order`.
pub fn parikh_of(x: &str, order: &[char]) -> Result<ParikhVector, SemilinearError> {
    let mut counts = vec![0u64; order.len()];
    for c in x.chars() {
        let i = order
            .iter()
            .position(|&s| s == c)
            .ok_or(SemilinearError::UnknownSymbol(c))?;
        counts[i] += 1;
    }
    Ok(ParikhVector(counts))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawLinear", into = "RawLinear")]
pub struct LinearSet {
    offset: Vec<u64>,
    periods: Vec<Vec<u64>>,
    /// All-zero period rows dropped at construction.
    #[serde(skip)]
    dropped_zero_rows: usize,
}

#[derive(Serialize, Deserialize)]
struct RawLinear {
    offset: Vec<u64>,
    #[serde(default)]
    periods: Vec<Vec<u64>>,
}

impl TryFrom<RawLinear> for LinearSet {
    type Error = SemilinearError;

    fn try_from(raw: RawLinear) -> Result<Self, Self::Error> {
        LinearSet::new(raw.offset, raw.periods)
    }
}

impl From<LinearSet> for RawLinear {
    fn from(l: LinearSet) -> Self {
        RawLinear {
            offset: l.offset,
            periods: l.periods,
        }
    }
}

impl LinearSet {
    pub fn new(offset: Vec<u64>, periods: Vec<Vec<u64>>) -> Result<Self, SemilinearError> {
        let k = offset.len();
        if let Some(bad) = periods.iter().find(|p| p.len() != k) {
            return Err(SemilinearError::DimensionMismatch {
                expected: k,
                found: bad.len(),
            });
        }
        let before = periods.len();
        let periods: Vec<Vec<u64>> = periods
            .into_iter()
            .filter(|p| p.iter().any(|&x| x != 0))
            .collect();
        Ok(Self {
            dropped_zero_rows: before - periods.len(),
            offset,
            periods,
        })
    }

    /// Builds from a critical matrix given row by row (row 0 is the offset).
    pub fn from_matrix(rows: Vec<Vec<u64>>) -> Result<Self, SemilinearError> {
        let mut rows = rows.into_iter();
        let offset = rows.next().ok_or(SemilinearError::DimensionMismatch {
            expected: 1,
            found: 0,
        })?;
        Self::new(offset, rows.collect())
    }

    pub fn dimension(&self) -> usize {
        self.offset.len()
    }

    pub fn offset(&self) -> &[u64] {
        &self.offset
    }

    pub fn periods(&self) -> &[Vec<u64>] {
        &self.periods
    }

    pub fn dropped_zero_rows(&self) -> usize {
        self.dropped_zero_rows
    }

    pub fn matrix(&self) -> Vec<Vec<u64>> {
        std::iter::once(self.offset.clone())
            .chain(self.periods.iter().cloned())
            .collect()
    }

    pub fn is_infinite(&self) -> bool {
        !self.periods.is_empty()
    }

    pub fn member(&self, v: &ParikhVector) -> Result<bool, SemilinearError> {
        if v.dimension() != self.dimension() {
            return Err(SemilinearError::DimensionMismatch {
                expected: self.dimension(),
                found: v.dimension(),
            });
        }
        let mut remaining = Vec::with_capacity(v.dimension());
        for (&target, &base) in v.0.iter().zip(&self.offset) {
            match target.checked_sub(base) {
                Some(r) => remaining.push(r),
                None => return Ok(false),
            }
        }
        // suffix_gcd[i][j]: gcd of column j over period rows i..
        let k = self.dimension();
        let mut suffix_gcd = vec![vec![0u64; k]; self.periods.len() + 1];
        for i in (0..self.periods.len()).rev() {
            for j in 0..k {
                suffix_gcd[i][j] = suffix_gcd[i + 1][j].gcd(&self.periods[i][j]);
            }
        }
        Ok(solve(&self.periods, &suffix_gcd, 0, &mut remaining))
    }

    pub fn weighted(&self, u: &[u64]) -> LinearSet {
        let dot = |row: &[u64]| row.iter().zip(u).map(|(a, b)| a * b).sum::<u64>();
        LinearSet::new(
            vec![dot(&self.offset)],
            self.periods.iter().map(|p| vec![dot(p)]).collect(),
        )
        .expect("1-D rows")
    }

    /// Exact conversion of a 1-D linear set.
    fn to_upset(&self) -> UltimatelyPeriodicSet {
        let base = self.offset[0] as usize;
        let gens: Vec<usize> = self.periods.iter().map(|p| p[0] as usize).collect();
        if gens.is_empty() {
            return UltimatelyPeriodicSet::finite([base]);
        }
        let g = gens.iter().fold(0usize, |acc, &p| acc.gcd(&p));
        let reduced: Vec<usize> = gens.iter().map(|&p| p / g).collect();
        let pmax = *reduced.iter().max().expect("nonempty");
        // every multiple of g at or above g·pmax² lies in the generated semigroup
        let bound = g * pmax * pmax;
        let mut reach = vec![false; bound + 1];
        reach[0] = true;
        for n in 1..=bound {
            reach[n] = gens.iter().any(|&p| p <= n && reach[n - p]);
        }
        UltimatelyPeriodicSet::from_predicate(base + bound, g, |n| {
            n >= base && (n - base <= bound && reach[n - base] || n - base > bound && (n - base) % g == 0)
        })
    }
}

fn solve(periods: &[Vec<u64>], suffix_gcd: &[Vec<u64>], i: usize, remaining: &mut [u64]) -> bool {
    for (j, &r) in remaining.iter().enumerate() {
        let g = suffix_gcd[i][j];
        if (g == 0 && r != 0) || (g != 0 && r % g != 0) {
            return false;
        }
    }
    if i == periods.len() {
        return remaining.iter().all(|&r| r == 0);
    }
    let row = &periods[i];
    let max_z = row
        .iter()
        .zip(remaining.iter())
        .filter(|(&p, _)| p > 0)
        .map(|(&p, &r)| r / p)
        .min()
        .expect("period rows are nonzero");
    for z in 0..=max_z {
        if solve(periods, suffix_gcd, i + 1, remaining) {
            return true;
        }
        if z < max_z {
            for (r, &p) in remaining.iter_mut().zip(row) {
                *r -= p;
            }
        }
    }
    // restore
    for (r, &p) in remaining.iter_mut().zip(row) {
        *r += p * max_z;
    }
    false
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSemiLinear", into = "RawSemiLinear")]
pub struct SemiLinearSet {
    dimension: usize,
    components: Vec<LinearSet>,
}

#[derive(Serialize, Deserialize)]
struct RawSemiLinear {
    dimension: usize,
    components: Vec<LinearSet>,
}

impl TryFrom<RawSemiLinear> for SemiLinearSet {
    type Error = SemilinearError;

    fn try_from(raw: RawSemiLinear) -> Result<Self, Self::Error> {
        SemiLinearSet::new(raw.dimension, raw.components)
    }
}

impl From<SemiLinearSet> for RawSemiLinear {
    fn from(s: SemiLinearSet) -> Self {
        RawSemiLinear {
            dimension: s.dimension,
            components: s.components,
        }
    }
}

impl SemiLinearSet {
    pub fn new(dimension: usize, components: Vec<LinearSet>) -> Result<Self, SemilinearError> {
        if let Some(c) = components.iter().find(|c| c.dimension() != dimension) {
            return Err(SemilinearError::DimensionMismatch {
                expected: dimension,
                found: c.dimension(),
            });
        }
        Ok(Self {
            dimension,
            components,
        })
    }

    pub fn linear(set: LinearSet) -> Self {
        Self {
            dimension: set.dimension(),
            components: vec![set],
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn components(&self) -> &[LinearSet] {
        &self.components
    }

    pub fn member(&self, v: &ParikhVector) -> Result<bool, SemilinearError> {
        if v.dimension() != self.dimension {
            return Err(SemilinearError::DimensionMismatch {
                expected: self.dimension,
                found: v.dimension(),
            });
        }
        for c in &self.components {
            if c.member(v)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn is_infinite(&self) -> bool {
        self.components.iter().any(LinearSet::is_infinite)
    }

    /// `{v·u : v ∈ self}` as a 1-D semi-linear set.
    pub fn image_under_weights(&self, u: &[u64]) -> Result<SemiLinearSet, SemilinearError> {
        if u.len() != self.dimension {
            return Err(SemilinearError::DimensionMismatch {
                expected: self.dimension,
                found: u.len(),
            });
        }
        if u.contains(&0) {
            return Err(SemilinearError::ZeroWeight);
        }
        Ok(SemiLinearSet {
            dimension: 1,
            components: self.components.iter().map(|c| c.weighted(u)).collect(),
        })
    }

    /// Length projection: the image under all-ones weights.
    pub fn l1_image(&self) -> SemiLinearSet {
        self.image_under_weights(&vec![1; self.dimension])
            .expect("unit weights")
    }

    pub fn to_upset(&self) -> Result<UltimatelyPeriodicSet, SemilinearError> {
        if self.dimension != 1 {
            return Err(SemilinearError::DimensionMismatch {
                expected: 1,
                found: self.dimension,
            });
        }
        Ok(self
            .components
            .iter()
            .map(LinearSet::to_upset)
            .fold(UltimatelyPeriodicSet::empty(), |acc, u| acc.union(&u)))
    }
}

/// Every exponent tuple `(i₁,…,i_m)` with `w = w₁^{i₁}⋯w_m^{i_m}`.
pub fn tilde_psi_decompositions(
    w: &str,
    words: &[&str],
) -> Result<BTreeSet<Vec<usize>>, SemilinearError> {
    if words.is_empty() {
        return Err(SemilinearError::NoWords);
    }
    if let Some(i) = words.iter().position(|x| x.is_empty()) {
        return Err(SemilinearError::EmptyWord(i));
    }
    let w = w.as_bytes();
    let words: Vec<&[u8]> = words.iter().map(|x| x.as_bytes()).collect();
    let m = words.len();
    let n = w.len();
    // done[j][p]: the suffix w[p..] is in w_j^* ⋯ w_m^*
    let mut done = vec![vec![false; n + 1]; m + 1];
    done[m][n] = true;
    for j in (0..m).rev() {
        let len = words[j].len();
        for p in (0..=n).rev() {
            done[j][p] = done[j + 1][p] || (p + len <= n && &w[p..p + len] == words[j] && done[j][p + len]);
        }
    }
    let mut out = BTreeSet::new();
    let mut tuple = vec![0; m];
    collect_decompositions(w, &words, &done, 0, 0, &mut tuple, &mut out);
    Ok(out)
}

fn collect_decompositions(
    w: &[u8],
    words: &[&[u8]],
    done: &[Vec<bool>],
    j: usize,
    p: usize,
    tuple: &mut Vec<usize>,
    out: &mut BTreeSet<Vec<usize>>,
) {
    if !done[j][p] {
        return;
    }
    if j == words.len() {
        out.insert(tuple.clone());
        return;
    }
    let len = words[j].len();
    let mut pos = p;
    let mut count = 0;
    loop {
        tuple[j] = count;
        collect_decompositions(w, words, done, j + 1, pos, tuple, out);
        if pos + len <= w.len() && &w[pos..pos + len] == words[j] {
            pos += len;
            count += 1;
        } else {
            break;
        }
    }
    tuple[j] = 0;
}
