//! Bundle expressions, positivity inference and vanishing-theorem queries.

mod expr;
mod facts;
mod glpsd;
mod parse;
mod sharpness;
mod theorems;

pub use expr::{Atom, BundleExpr, Origin};
pub use facts::{infer_positivity, Derivation, FactKind, FactSet};
pub use glpsd::{
    check_gap_condition, glpsd_dolbeault, glpsd_rewrite, product_projective_cohomology,
    projective_hodge_table, BlockGap, GapCheck, GlpsdRewrite, ProductCohomology, RewriteTerm,
};
pub use parse::{parse_expr, Parsed};
pub use sharpness::{sharpness_check, Cell, SharpnessReport};
pub use theorems::{query_vanishing, Conclusion, Premise, QueryOptions, TheoremReport};

pub mod ids {
    pub use super::theorems::{
        DET_TWIST, DUAL_DET_TWIST, FLAG_WEIGHT_TOTAL_DEGREE, GIGANTE_GIRBAU, GRIFFITHS_TOTAL_DEGREE,
        KS_TOP_DEGREE, KS_TOTAL_DEGREE_CONJECTURAL, K_AMPLE_TOTAL_DEGREE, NAKANO, SCHUR_DET_TWIST,
        TENSOR_POWER_DET_TWIST,
    };
}
