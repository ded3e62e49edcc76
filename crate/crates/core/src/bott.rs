//! Bott's algorithm for homogeneous line bundles on type-A flag manifolds.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::weights::{
    canonical_weight_complete, canonical_weight_flag, expand_block_weight,
    sort_desc_count_inversions, BlockWeight, ShiftedSequence, Weight,
};

/// Cohomology of `P^a`: either everything vanishes or a single irreducible
/// representation `Γ^â V` sits in one degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CohomologyResult {
    Zero,
    Single {
        degree: usize,
        highest_weight: Weight,
        dimension: BigUint,
    },
}

impl CohomologyResult {
    pub fn is_zero(&self) -> bool {
        matches!(self, CohomologyResult::Zero)
    }

    pub fn degree(&self) -> Option<usize> {
        match self {
            CohomologyResult::Zero => None,
            CohomologyResult::Single { degree, .. } => Some(*degree),
        }
    }

    /// Dimension of `H^q`.
    pub fn dim_in_degree(&self, q: usize) -> BigUint {
        match self {
            CohomologyResult::Single { degree, dimension, .. } if *degree == q => dimension.clone(),
            _ => BigUint::zero(),
        }
    }
}

/// Writes a big integer as a JSON number when it fits in `u64`, otherwise as a
/// decimal string.
pub(crate) fn serialize_biguint<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_u64() {
        Some(x) => s.serialize_u64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

impl Serialize for CohomologyResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Big<'a>(&'a BigUint);
        impl Serialize for Big<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                serialize_biguint(self.0, s)
            }
        }
        match self {
            CohomologyResult::Zero => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("kind", "zero")?;
                m.end()
            }
            CohomologyResult::Single { degree, highest_weight, dimension } => {
                let mut m = s.serialize_map(Some(4))?;
                m.serialize_entry("kind", "single")?;
                m.serialize_entry("degree", degree)?;
                m.serialize_entry("weight", highest_weight)?;
                m.serialize_entry("dimension", &Big(dimension))?;
                m.end()
            }
        }
    }
}

pub fn bott_cohomology(a: &Weight, r: usize) -> Result<CohomologyResult> {
    if a.rank() != r {
        return Err(Error::InvalidInput(format!(
            "weight has length {} but rank is {r}",
            a.rank()
        )));
    }
    let shifted = ShiftedSequence::of(a);
    let (sorted, n_inv, has_ties) = sort_desc_count_inversions(&shifted.doubled_entries);
    if has_ties {
        return Ok(CohomologyResult::Zero);
    }
    let c_w = canonical_weight_complete(r as i64)?;
    let hw: Vec<i64> = sorted
        .iter()
        .zip(&c_w.0)
        .map(|(x, c)| {
            debug_assert!((x + c) % 2 == 0);
            (x + c) / 2
        })
        .collect();
    let highest_weight = Weight(hw);
    let dimension = schur_dimension(&highest_weight, r)?;
    Ok(CohomologyResult::Single { degree: n_inv, highest_weight, dimension })
}

pub fn bott_flag(a_s: &BlockWeight) -> Result<CohomologyResult> {
    let a = expand_block_weight(a_s);
    bott_cohomology(&a, a_s.flag().rank())
}

/// Weyl dimension `prod_{i<j} (λ_i - λ_j + j - i) / (j - i)`.
pub fn schur_dimension(lambda: &Weight, r: usize) -> Result<BigUint> {
    if lambda.rank() != r {
        return Err(Error::InvalidInput(format!(
            "weight has length {} but rank is {r}",
            lambda.rank()
        )));
    }
    if !lambda.is_dominant() {
        return Err(Error::InvalidInput(format!(
            "weight {:?} is not weakly decreasing",
            lambda.0
        )));
    }
    let l = &lambda.0;
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..r {
        for j in i + 1..r {
            let gap = (l[i] - l[j]) as u64 + (j - i) as u64;
            num *= gap;
            den *= (j - i) as u64;
        }
    }
    debug_assert!((&num % &den).is_zero());
    Ok(num / den)
}

/// `sum_q (-1)^q dim H^q`.
pub fn euler_characteristic(a: &Weight, r: usize) -> Result<BigInt> {
    Ok(match bott_cohomology(a, r)? {
        CohomologyResult::Zero => BigInt::zero(),
        CohomologyResult::Single { degree, dimension, .. } => {
            let d = BigInt::from(dimension);
            if degree % 2 == 0 {
                d
            } else {
                -d
            }
        }
    })
}

/// `c_s - a_s`, the weight paired with `a_s` by Serre duality.
pub fn serre_dual_block_weight(a_s: &BlockWeight) -> BlockWeight {
    let c = canonical_weight_flag(a_s.flag());
    let entries = c.entries().iter().zip(a_s.entries()).map(|(c, a)| c - a).collect();
    BlockWeight::new(entries, a_s.flag().clone()).expect("same flag")
}
