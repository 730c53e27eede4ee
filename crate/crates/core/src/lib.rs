//! Exact computations for deciding when a Tate-Shafarevich group has order
//! divisible by a prime p: subgroups of GL2(F_p), their cohomology, elliptic
//! curves over Q, cyclotomic tests, and local solubility of diagonal cubics.

pub mod arith;
pub mod cohomology;
pub mod dataset;
pub mod divisibility;
pub mod elliptic;
pub mod fp;
pub mod galois;
pub mod gl2;
pub mod groupcrit;
pub mod local_cubic;
pub mod tables;

pub use fp::{FpMatrix, FpScalar, FpSubspace, LinalgError, Prime};
pub use gl2::{ClassificationTag, EnumerationMode, GroupElement, GroupError, Mat2, Subgroup};
pub use cohomology::{CharacterFp, CohomologyClassSpace, GModule};
pub use elliptic::{EllipticCurveQ, FrobeniusData, ReductionType};
pub use galois::{HypothesisVerdict, PairShape, SemisimpHypothesis, SqrtThreshold};
pub use divisibility::{DivisibilityVerdict, Outcome, TwistScanReport, VerdictConfig};
pub use local_cubic::{CubeClass, DiagonalCubic, PAdicApprox};
