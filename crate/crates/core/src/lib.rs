//! Euclidean Jordan algebras, cone orbits and CR invariants of tube manifolds.

pub mod domains;
pub mod error;
pub mod fields;
pub mod jordan;
pub mod json;
pub mod linalg;
pub mod report;
pub mod sample;
pub mod spectral;
pub mod tube;

pub use error::{Error, Result};
pub use jordan::{
    make_algebra, Algebra, AlgebraDescriptor, ComplexElement, ComplexOperator, Element, Family, LinearOperator,
};
