//! Weights of the exterior powers of the cotangent space of a flag manifold,
//! and Hodge numbers computed from them with Bott's algorithm.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::Zero;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::bott::{bott_cohomology, CohomologyResult};
use crate::error::{Error, Result};
use crate::weights::{flag_dimension, FlagType, Weight};

/// Cotangent root for the pair `lo < hi` (1-based) lying in different blocks.
/// Its weight is `e_hi - e_lo`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParabolicRoot {
    pub lo: usize,
    pub hi: usize,
    pub weight: Weight,
}

/// Distinct weights with positive multiplicities, ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightedDecomposition {
    pub terms: BTreeMap<Weight, u64>,
}

impl WeightedDecomposition {
    pub fn total_multiplicity(&self) -> u64 {
        self.terms.values().sum()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Weight, u64)> {
        self.terms.iter().map(|(w, &m)| (w, m))
    }
}

impl Serialize for WeightedDecomposition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            weight: &'a Weight,
            multiplicity: u64,
        }
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (weight, &multiplicity) in &self.terms {
            seq.serialize_element(&Term { weight, multiplicity })?;
        }
        seq.end()
    }
}

pub fn parabolic_roots(s: &FlagType) -> Vec<ParabolicRoot> {
    let r = s.rank();
    let mut roots = Vec::new();
    for lam in 0..r {
        for mu in lam + 1..r {
            if s.block_of(lam) < s.block_of(mu) {
                let mut w = vec![0; r];
                w[lam] = -1;
                w[mu] = 1;
                roots.push(ParabolicRoot { lo: lam + 1, hi: mu + 1, weight: Weight(w) });
            }
        }
    }
    roots
}

/// Weights of `∧^p` of the cotangent space, aggregated by multiplicity.
pub fn exterior_weights(s: &FlagType, p: usize) -> Result<WeightedDecomposition> {
    let roots = parabolic_roots(s);
    if p > roots.len() {
        return Err(Error::InvalidInput(format!(
            "degree {p} exceeds flag dimension {}",
            roots.len()
        )));
    }
    let r = s.rank();
    let mut terms = BTreeMap::new();
    for subset in roots.iter().combinations(p) {
        let mut w = vec![0i64; r];
        for root in subset {
            w[root.lo - 1] -= 1;
            w[root.hi - 1] += 1;
        }
        *terms.entry(Weight(w)).or_insert(0) += 1;
    }
    Ok(WeightedDecomposition { terms })
}

/// Weight of the top exterior power, i.e. of the canonical bundle.
pub fn top_weight(s: &FlagType) -> Weight {
    let mut w = vec![0i64; s.rank()];
    for root in parabolic_roots(s) {
        w[root.lo - 1] -= 1;
        w[root.hi - 1] += 1;
    }
    Weight(w)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapViolation {
    pub weight: Weight,
    pub lambda: usize,
    pub mu: usize,
    pub gap: i64,
    pub bound: i64,
}

/// Checks `u_μ - u_λ <= min{p+1, r+1-(μ-λ), N_s-p+(s_{j+1}-s_{j-1})}` for
/// every weight of `∧^p` and every `s_{j-1} < λ <= s_j < μ <= s_{j+1}`.
/// The bound is read with roots weighted `e_λ - e_μ`, the negative of the
/// convention used by [`exterior_weights`], so `u_μ - u_λ` here is
/// `w_λ - w_μ` for an enumerated weight `w`.
pub fn verify_exterior_gap_bound(s: &FlagType, p: usize) -> Result<(bool, Vec<GapViolation>)> {
    let dec = exterior_weights(s, p)?;
    let cuts = s.cuts();
    let r = s.rank() as i64;
    let n_s = flag_dimension(s) as i64;
    let p = p as i64;
    let mut violations = Vec::new();
    for (u, _) in dec.iter() {
        for j in 1..s.blocks() {
            for lam in cuts[j - 1] + 1..=cuts[j] {
                for mu in cuts[j] + 1..=cuts[j + 1] {
                    let gap = u.0[lam - 1] - u.0[mu - 1];
                    let bound = (p + 1)
                        .min(r + 1 - (mu - lam) as i64)
                        .min(n_s - p + (cuts[j + 1] - cuts[j - 1]) as i64);
                    if gap > bound {
                        violations.push(GapViolation { weight: u.clone(), lambda: lam, mu, gap, bound });
                    }
                }
            }
        }
    }
    Ok((violations.is_empty(), violations))
}

/// `h[p][q]` for `0 <= p, q <= N_s`.
pub fn hodge_numbers(s: &FlagType) -> Vec<Vec<BigUint>> {
    let n_s = flag_dimension(s);
    let r = s.rank();
    let mut h = vec![vec![BigUint::zero(); n_s + 1]; n_s + 1];
    for (p, row) in h.iter_mut().enumerate() {
        let dec = exterior_weights(s, p).expect("p within range");
        for (u, mult) in dec.iter() {
            if let CohomologyResult::Single { degree, dimension, .. } =
                bott_cohomology(u, r).expect("rank matches")
            {
                row[degree] += dimension * mult;
            }
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{canonical_weight_flag, expand_block_weight};
    use proptest::prelude::*;

    fn table(rows: &[&[u32]]) -> Vec<Vec<BigUint>> {
        rows.iter().map(|r| r.iter().map(|&x| BigUint::from(x)).collect()).collect()
    }

    #[test]
    fn root_counts() {
        let r = parabolic_roots(&FlagType::complete(2).unwrap());
        assert_eq!(r, vec![ParabolicRoot { lo: 1, hi: 2, weight: Weight(vec![-1, 1]) }]);
        let r = parabolic_roots(&FlagType::new(vec![0, 1, 3]).unwrap());
        assert_eq!(r.iter().map(|x| (x.lo, x.hi)).collect::<Vec<_>>(), vec![(1, 2), (1, 3)]);
        assert_eq!(parabolic_roots(&FlagType::new(vec![0, 2, 4]).unwrap()).len(), 4);
    }

    #[test]
    fn exterior_examples() {
        let s = FlagType::complete(2).unwrap();
        let e0 = exterior_weights(&s, 0).unwrap();
        assert_eq!(e0.terms.into_iter().collect::<Vec<_>>(), vec![(Weight(vec![0, 0]), 1)]);
        let e1 = exterior_weights(&s, 1).unwrap();
        assert_eq!(e1.terms.into_iter().collect::<Vec<_>>(), vec![(Weight(vec![-1, 1]), 1)]);
        assert!(exterior_weights(&s, 2).is_err());
        let g = FlagType::grassmannian(4, 2).unwrap();
        let top = exterior_weights(&g, 4).unwrap();
        assert_eq!(top.terms.into_iter().collect::<Vec<_>>(), vec![(top_weight(&g), 1)]);
    }

    #[test]
    fn top_weight_examples() {
        assert_eq!(top_weight(&FlagType::complete(2).unwrap()).0, vec![-1, 1]);
        assert_eq!(top_weight(&FlagType::new(vec![0, 1, 3]).unwrap()).0, vec![-2, 1, 1]);
        assert_eq!(top_weight(&FlagType::complete(4).unwrap()).0, vec![-3, -1, 1, 3]);
    }

    #[test]
    fn exterior_gap_small_cases() {
        for s in FlagType::all_of_rank(3) {
            assert!(verify_exterior_gap_bound(&s, 0).unwrap().0);
        }
        assert!(verify_exterior_gap_bound(&FlagType::complete(2).unwrap(), 1).unwrap().0);
    }

    #[test]
    fn hodge_examples() {
        assert_eq!(hodge_numbers(&FlagType::complete(2).unwrap()), table(&[&[1, 0], &[0, 1]]));
        let full3 = hodge_numbers(&FlagType::complete(3).unwrap());
        let diag: Vec<u32> = (0..4).map(|i| u32::try_from(&full3[i][i]).unwrap()).collect();
        assert_eq!(diag, vec![1, 2, 2, 1]);
        for r in 2..6 {
            let h = hodge_numbers(&FlagType::projective(r).unwrap());
            for (p, row) in h.iter().enumerate() {
                for (q, x) in row.iter().enumerate() {
                    assert_eq!(*x, BigUint::from((p == q) as u32));
                }
            }
        }
    }

    fn arb_flag(max_r: usize) -> impl Strategy<Value = FlagType> {
        (1usize..=max_r, any::<u32>()).prop_map(|(r, pick)| {
            let flags = FlagType::all_of_rank(r);
            flags[pick as usize % flags.len()].clone()
        })
    }

    fn binom(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn multiplicities_are_binomial(s in arb_flag(5)) {
            let n_s = flag_dimension(&s) as u64;
            let mut total = 0;
            for p in 0..=n_s {
                let m = exterior_weights(&s, p as usize).unwrap().total_multiplicity();
                prop_assert_eq!(m, binom(n_s, p));
                total += m;
            }
            prop_assert_eq!(total, 1u64 << n_s);
        }

        #[test]
        fn complementary_degree_symmetry(s in arb_flag(5)) {
            let n_s = flag_dimension(&s);
            let top = top_weight(&s);
            for p in 0..=n_s {
                let a = exterior_weights(&s, p).unwrap();
                let b = exterior_weights(&s, n_s - p).unwrap();
                let mirrored: BTreeMap<Weight, u64> =
                    b.iter().map(|(u, m)| (top.sub(u), m)).collect();
                prop_assert_eq!(&a.terms, &mirrored);
            }
        }

        #[test]
        fn hodge_symmetric_and_diagonal(s in arb_flag(4)) {
            let h = hodge_numbers(&s);
            let n = h.len() - 1;
            for p in 0..=n {
                for q in 0..=n {
                    prop_assert_eq!(&h[p][q], &h[q][p]);
                    prop_assert_eq!(&h[p][q], &h[n - p][n - q]);
                    if p != q {
                        prop_assert!(h[p][q].is_zero());
                    }
                }
            }
        }

        #[test]
        fn top_weight_is_canonical(s in arb_flag(6)) {
            prop_assert_eq!(top_weight(&s), expand_block_weight(&canonical_weight_flag(&s)));
        }
    }
}
