//! Brute-force verification on small classical domains.

pub mod conical;
pub mod group;
pub mod isotypic;
pub mod polynomial;

pub use conical::{conical_composed, conical_polynomial};
pub use group::{sample_group_element, GroupElement};
pub use isotypic::{build_isotypic, weighted_onb, Decomposition, GradeDecomposition, IsotypicBasis, OracleConfig, MAX_DIM, MAX_GRADE};
pub use polynomial::{fock_inner, ComplexPoly, MonomialIndex, Polynomial};
pub mod operators;
pub use operators::{BlockMeasurement, GradedOperator, OperatorModel};
pub mod exact;
pub use exact::{ExactDecomposition, ExactMeasurement};
pub mod report;
pub use report::{compare, run_verification, OracleReport, SignatureReport};
