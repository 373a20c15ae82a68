//! Spectral formulas, decision criteria and a brute-force verification oracle
//! for K-homogeneous tuples of multiplication operators on the classical
//! Cartan domains.

pub mod cli;
pub mod config;
pub mod criteria;
pub mod domains;
pub mod error;
pub mod number;
pub mod oracle;
pub mod signatures;
pub mod spectral;
pub mod table;
pub mod weights;

pub use domains::{DomainKind, DomainSpec};
pub use error::{Error, Result};
pub use number::{Rational, Value};
pub use signatures::{enumerate_signatures, BoundaryProfile, Signature};
pub use weights::WeightSequence;
