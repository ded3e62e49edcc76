//! Cohomology of homogeneous line bundles on flag manifolds, pointwise
//! curvature positivity checks, and a vanishing-theorem query engine.

pub mod bkn;
pub mod bott;
pub mod curvature;
pub mod error;
pub mod linalg;
pub mod omega;
pub mod rng;
pub mod vanish;
pub mod weights;

pub use bott::{bott_cohomology, bott_flag, CohomologyResult};
pub use error::{Error, Result};
pub use weights::{BlockWeight, FlagType, Weight};
pub use curvature::{CurvatureTensor, PositivityReport, Verdict};
