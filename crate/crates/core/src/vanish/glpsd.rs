//! Direct images of line bundles on flag bundles, and Künneth tables on
//! products of projective spaces.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::bott::{bott_cohomology, CohomologyResult};
use crate::curvature::HypothesisStatus;
use crate::error::{Error, Result};
use crate::omega::exterior_weights;
use crate::weights::{expand_block_weight, flag_dimension, BlockWeight, FlagType, Weight};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockGap {
    /// 1-based index `j` of the pair of adjacent blocks `(j, j + 1)`.
    pub pair: usize,
    pub difference: i64,
    pub bound: i64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapCheck {
    pub ok: bool,
    pub pairs: Vec<BlockGap>,
}

/// Checks `a_{s_j} - a_{s_{j+1}} >= 1` when `p = N_s`, and otherwise
/// `>= min{p, N_s - p + (s_{j+1} - s_j) - 1, r + 1 - (s_{j+1} - s_{j-1})}`,
/// for every pair of adjacent blocks.
pub fn check_gap_condition(a_s: &BlockWeight, p: usize) -> Result<GapCheck> {
    let s = a_s.flag();
    let n_s = flag_dimension(s);
    if p > n_s {
        return Err(Error::InvalidInput(format!("degree {p} exceeds flag dimension {n_s}")));
    }
    let cuts = s.cuts();
    let r = s.rank() as i64;
    let a = a_s.entries();
    let mut pairs = Vec::new();
    for j in 1..s.blocks() {
        let difference = a[j - 1] - a[j];
        let bound = if p == n_s {
            1
        } else {
            let next = (cuts[j + 1] - cuts[j]) as i64;
            let both = (cuts[j + 1] - cuts[j - 1]) as i64;
            (p as i64).min(n_s as i64 - p as i64 + next - 1).min(r + 1 - both)
        };
        pairs.push(BlockGap { pair: j, difference, bound, holds: difference >= bound });
    }
    Ok(GapCheck { ok: pairs.iter().all(|g| g.holds), pairs })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RewriteTerm {
    pub weight: Weight,
    pub multiplicity: u64,
    pub dominant: bool,
    /// Bott's answer for the weight on the complete flag of the fiber; a
    /// dominant weight gives degree 0 and the Schur module itself.
    pub straightened: CohomologyResult,
    pub base_degree: usize,
    pub fiber_degree: usize,
    pub descriptor: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GlpsdRewrite {
    pub flag: FlagType,
    pub block_weight: Vec<i64>,
    pub condition: GapCheck,
    pub hypothesis: HypothesisStatus,
    pub terms: Vec<RewriteTerm>,
    pub warnings: Vec<String>,
}

impl GlpsdRewrite {
    pub fn dominant_terms(&self) -> impl Iterator<Item = &RewriteTerm> {
        self.terms.iter().filter(|t| t.dominant)
    }
}

fn weight_text(w: &Weight) -> String {
    let parts: Vec<String> = w.entries().iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Rewrites flag-bundle cohomology with coefficients in
/// `π^*Ω^p_X ⊗ Ω^t_{F/X} ⊗ P_s^{a_s} ⊗ π^*B` as a sum over the weights `u`
/// of `∧^t` of the relative cotangent space of `ν(u, t)` copies of
/// `H^q(X, Ω^p(Γ^{a+u} E ⊗ B))`. Nothing is dropped: weights `a + u` that are
/// not dominant are kept with a warning, and a failed gap condition is
/// reported as an unmet hypothesis.
pub fn glpsd_rewrite(a_s: &BlockWeight, p: usize, t: usize) -> Result<GlpsdRewrite> {
    let s = a_s.flag();
    let condition = check_gap_condition(a_s, t)?;
    let a = expand_block_weight(a_s);
    let r = s.rank();
    let mut terms = Vec::new();
    let mut warnings = Vec::new();
    for (u, mult) in exterior_weights(s, t)?.iter() {
        let w = a.add(u);
        let dominant = w.is_dominant();
        if !dominant {
            warnings.push(format!("weight {} is not dominant; kept as written", weight_text(&w)));
        }
        terms.push(RewriteTerm {
            straightened: bott_cohomology(&w, r)?,
            descriptor: format!("H^q(X, Ω^{p}(Γ^{} E ⊗ B))", weight_text(&w)),
            weight: w,
            multiplicity: mult,
            dominant,
            base_degree: p,
            fiber_degree: t,
        });
    }
    if !condition.ok {
        warnings.push("gap condition fails; the isomorphism is not guaranteed".into());
    }
    Ok(GlpsdRewrite {
        flag: s.clone(),
        block_weight: a_s.entries().to_vec(),
        hypothesis: if condition.ok { HypothesisStatus::Met } else { HypothesisStatus::HypothesisUnmet },
        condition,
        terms,
        warnings,
    })
}

/// The graded pieces of `Ω^p` of the flag bundle twisted by `P_s^{a_s}`:
/// one rewrite per fiber degree `t`, with base degree `p - t`.
pub fn glpsd_dolbeault(a_s: &BlockWeight, p: usize) -> Result<Vec<GlpsdRewrite>> {
    let n_s = flag_dimension(a_s.flag());
    (0..=p.min(n_s)).map(|t| glpsd_rewrite(a_s, p - t, t)).collect()
}

/// `h^{p,q}(P^m, O(a))` for `0 <= p, q <= m`.
pub fn projective_hodge_table(m: usize, a: i64) -> Result<Vec<Vec<BigUint>>> {
    if m == 0 {
        return Ok(vec![vec![BigUint::one()]]);
    }
    let s = FlagType::projective(m + 1)?;
    let mut line = vec![0i64; m + 1];
    line[0] = a;
    let line = Weight(line);
    let mut h = vec![vec![BigUint::zero(); m + 1]; m + 1];
    for (p, row) in h.iter_mut().enumerate() {
        for (u, mult) in exterior_weights(&s, p)?.iter() {
            if let CohomologyResult::Single { degree, dimension, .. } = bott_cohomology(&line.add(u), m + 1)? {
                row[degree] += dimension * mult;
            }
        }
    }
    Ok(h)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductCohomology {
    pub dims: (usize, usize),
    pub twists: (i64, i64),
    /// `table[p][q] = h^{p,q}(P^{d_1} × P^{d_2}, O(a) ⊠ O(b))`.
    #[serde(serialize_with = "serialize_table")]
    pub table: Vec<Vec<BigUint>>,
}

fn serialize_table<S: serde::Serializer>(t: &[Vec<BigUint>], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    struct Big<'a>(&'a BigUint);
    impl Serialize for Big<'_> {
        fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
            crate::bott::serialize_biguint(self.0, s)
        }
    }
    struct Row<'a>(&'a [BigUint]);
    impl Serialize for Row<'_> {
        fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(self.0.len()))?;
            for x in self.0 {
                seq.serialize_element(&Big(x))?;
            }
            seq.end()
        }
    }
    let mut seq = s.serialize_seq(Some(t.len()))?;
    for row in t {
        seq.serialize_element(&Row(row))?;
    }
    seq.end()
}

impl ProductCohomology {
    pub fn get(&self, p: usize, q: usize) -> BigUint {
        self.table.get(p).and_then(|row| row.get(q)).cloned().unwrap_or_default()
    }

    pub fn dimension(&self) -> usize {
        self.dims.0 + self.dims.1
    }
}

/// Künneth pairing of the factor tables.
pub fn product_projective_cohomology(dims: (usize, usize), twists: (i64, i64)) -> Result<ProductCohomology> {
    let h1 = projective_hodge_table(dims.0, twists.0)?;
    let h2 = projective_hodge_table(dims.1, twists.1)?;
    let n = dims.0 + dims.1;
    let mut table = vec![vec![BigUint::zero(); n + 1]; n + 1];
    for (p1, row1) in h1.iter().enumerate() {
        for (q1, x) in row1.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (p2, row2) in h2.iter().enumerate() {
                for (q2, y) in row2.iter().enumerate() {
                    table[p1 + p2][q1 + q2] += x * y;
                }
            }
        }
    }
    Ok(ProductCohomology { dims, twists, table })
}
