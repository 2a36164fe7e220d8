//! Finite-height estimates of Diophantine approximation exponents, and executable
//! versions of the classical inequalities between them.

pub mod algapprox;
pub mod bounds;
pub mod error;
pub mod intpoly;
pub mod lab;
pub mod polysearch;
pub mod realnum;
pub mod resultants;

pub use error::{Error, Result};
pub use intpoly::IntPolynomial;
pub use polysearch::Policy;
pub use realnum::{Enclosure, RealTarget};
