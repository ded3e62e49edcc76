//! Weights, flag types and the canonical weights of flag manifolds.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer weight `(a_1, ..., a_r)`. Not required to be dominant.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidInput("weight must have at least one entry".into()));
        }
        Ok(Weight(entries))
    }

    pub fn zero(r: usize) -> Self {
        Weight(vec![0; r])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    /// Weakly decreasing entries.
    pub fn is_dominant(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }

    pub fn add(&self, other: &Weight) -> Weight {
        assert_eq!(self.rank(), other.rank(), "weight ranks differ");
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        assert_eq!(self.rank(), other.rank(), "weight ranks differ");
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl From<Vec<i64>> for Weight {
    fn from(v: Vec<i64>) -> Self {
        Weight(v)
    }
}

/// Cuts `0 = s_0 < s_1 < ... < s_m = r`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct FlagType {
    cuts: Vec<usize>,
}

impl FlagType {
    pub fn new(cuts: Vec<usize>) -> Result<Self> {
        let ok = cuts.len() >= 2 && cuts[0] == 0 && cuts.windows(2).all(|w| w[0] < w[1]);
        if !ok {
            return Err(Error::InvalidFlag(cuts));
        }
        Ok(FlagType { cuts })
    }

    /// Complete flag `(0, 1, ..., r)`.
    pub fn complete(r: usize) -> Result<Self> {
        if r < 1 {
            return Err(Error::InvalidRank(r as i64));
        }
        Ok(FlagType { cuts: (0..=r).collect() })
    }

    /// `(0, 1, r)`, the projective space of hyperplanes.
    pub fn projective(r: usize) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidRank(r as i64));
        }
        FlagType::new(vec![0, 1, r])
    }

    /// `(0, d, n)`.
    pub fn grassmannian(n: usize, d: usize) -> Result<Self> {
        FlagType::new(vec![0, d, n])
    }

    pub fn cuts(&self) -> &[usize] {
        &self.cuts
    }

    pub fn rank(&self) -> usize {
        *self.cuts.last().unwrap()
    }

    /// Number of blocks `m`.
    pub fn blocks(&self) -> usize {
        self.cuts.len() - 1
    }

    pub fn block_size(&self, j: usize) -> usize {
        self.cuts[j + 1] - self.cuts[j]
    }

    /// 0-based block containing the 0-based index `i`.
    pub fn block_of(&self, i: usize) -> usize {
        debug_assert!(i < self.rank());
        self.cuts.partition_point(|&c| c <= i) - 1
    }

    /// Every flag type of rank `r`, one per subset of the interior cuts.
    pub fn all_of_rank(r: usize) -> Vec<FlagType> {
        if r == 0 {
            return Vec::new();
        }
        let interior = r - 1;
        (0u32..(1u32 << interior))
            .map(|mask| {
                let mut cuts = vec![0];
                cuts.extend((1..r).filter(|c| mask & (1 << (c - 1)) != 0));
                cuts.push(r);
                FlagType { cuts }
            })
            .collect()
    }
}

impl<'de> Deserialize<'de> for FlagType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let cuts = Vec::<usize>::deserialize(d)?;
        FlagType::new(cuts).map_err(serde::de::Error::custom)
    }
}

/// One entry per block of a flag type.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct BlockWeight {
    entries: Vec<i64>,
    flag: FlagType,
}

impl BlockWeight {
    pub fn new(entries: Vec<i64>, flag: FlagType) -> Result<Self> {
        if entries.len() != flag.blocks() {
            return Err(Error::DimensionMismatch(format!(
                "block weight has {} entries but flag {:?} has {} blocks",
                entries.len(),
                flag.cuts(),
                flag.blocks()
            )));
        }
        Ok(BlockWeight { entries, flag })
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn flag(&self) -> &FlagType {
        &self.flag
    }
}

/// `2a - c_w`, the shift `a - c_w/2` scaled by two so it stays integral.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftedSequence {
    pub doubled_entries: Vec<i64>,
}

impl ShiftedSequence {
    pub fn of(a: &Weight) -> Self {
        let r = a.rank() as i64;
        let doubled_entries = a
            .0
            .iter()
            .enumerate()
            .map(|(i, &ai)| 2 * ai - (2 * (i as i64 + 1) - r - 1))
            .collect();
        ShiftedSequence { doubled_entries }
    }
}

/// `c_w = (1 - r, 3 - r, ..., r - 1)`.
pub fn canonical_weight_complete(r: i64) -> Result<Weight> {
    if r < 1 {
        return Err(Error::InvalidRank(r));
    }
    Ok(Weight((1..=r).map(|i| 2 * i - r - 1).collect()))
}

/// `c_s` with block `j` equal to `s_{j-1} + s_j - r`.
pub fn canonical_weight_flag(s: &FlagType) -> BlockWeight {
    let r = s.rank() as i64;
    let entries = s
        .cuts()
        .windows(2)
        .map(|w| w[0] as i64 + w[1] as i64 - r)
        .collect();
    BlockWeight { entries, flag: s.clone() }
}

pub fn expand_block_weight(a_s: &BlockWeight) -> Weight {
    let s = a_s.flag();
    let mut out = Vec::with_capacity(s.rank());
    for (j, &v) in a_s.entries().iter().enumerate() {
        out.extend(std::iter::repeat_n(v, s.block_size(j)));
    }
    Weight(out)
}

/// `N_s = sum_{j<k} (s_j - s_{j-1})(s_k - s_{k-1})`.
pub fn flag_dimension(s: &FlagType) -> usize {
    let sizes: Vec<usize> = (0..s.blocks()).map(|j| s.block_size(j)).collect();
    let mut total = 0;
    for j in 0..sizes.len() {
        for k in j + 1..sizes.len() {
            total += sizes[j] * sizes[k];
        }
    }
    total
}

/// Sorts into weakly decreasing order and counts pairs `i < j` with `x_i < x_j`.
pub fn sort_desc_count_inversions(x: &[i64]) -> (Vec<i64>, usize, bool) {
    let mut n_inv = 0;
    let mut has_ties = false;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            if x[i] < x[j] {
                n_inv += 1;
            } else if x[i] == x[j] {
                has_ties = true;
            }
        }
    }
    let mut sorted = x.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    (sorted, n_inv, has_ties)
}
