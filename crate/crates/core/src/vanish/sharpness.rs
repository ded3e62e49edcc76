//! Cross-check of the k-positive line bundle region against Künneth on
//! `P^k × P^{n-k}`.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use super::expr::{Atom, BundleExpr};
use super::facts::FactKind;
use super::glpsd::product_projective_cohomology;
use super::theorems::{query_vanishing, QueryOptions, GIGANTE_GIRBAU};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub p: usize,
    pub q: usize,
    pub claimed_vanishing: bool,
    #[serde(serialize_with = "crate::bott::serialize_biguint")]
    pub dimension: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SharpnessReport {
    pub n: usize,
    pub k: usize,
    pub twist: i64,
    pub cells: Vec<Cell>,
    /// No cell is claimed to vanish while carrying a nonzero group.
    pub consistent: bool,
    /// The claimed region is exactly `p + q > n + k`.
    pub region_exact: bool,
    /// Some group with `p + q = n + k` is nonzero.
    pub boundary_nonzero: bool,
}

impl SharpnessReport {
    pub fn ok(&self) -> bool {
        self.consistent && self.region_exact && self.boundary_nonzero
    }
}

/// `O(0) ⊠ O(twist)` on `P^k × P^{n-k}` is k-positive for `twist >= 1`; this
/// compares the cells the engine claims to vanish with the actual groups.
pub fn sharpness_check(n: usize, k: usize, twist: i64) -> Result<SharpnessReport> {
    if k >= n || twist < 1 {
        return Err(Error::InvalidInput(format!("need k < n and twist >= 1, got k = {k}, n = {n}, twist = {twist}")));
    }
    let table = product_projective_cohomology((k, n - k), (0, twist))?;
    let line = BundleExpr::atom(Atom::line("B", vec![FactKind::KPositiveLine { k }]));
    let opts = QueryOptions::default();
    let mut cells = Vec::new();
    for p in 0..=n {
        for q in 0..=n {
            let claimed_vanishing = query_vanishing(&line, n, p, q, &opts)?
                .iter()
                .any(|r| r.theorem_id == GIGANTE_GIRBAU && r.vanishes());
            cells.push(Cell { p, q, claimed_vanishing, dimension: table.get(p, q) });
        }
    }
    let consistent = cells.iter().all(|c| !c.claimed_vanishing || c.dimension.is_zero());
    let region_exact = cells.iter().all(|c| c.claimed_vanishing == (c.p + c.q > n + k));
    let boundary_nonzero = cells.iter().any(|c| c.p + c.q == n + k && !c.dimension.is_zero());
    Ok(SharpnessReport { n, k, twist, cells, consistent, region_exact, boundary_nonzero })
}
