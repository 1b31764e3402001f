//! Exact computation and verification of complexity measures for Boolean
//! functions on set-system domains: the Boolean cube, general products,
//! the symmetric group, perfect (hyper)matching schemes, and multislices.
//!
//! Every point of a domain is a fixed-size subset of a finite universe, and
//! queries are universe subsets meeting each point exactly once. On top of
//! that representation the crate computes degree, approximate degree,
//! certificate complexity, decision tree depth, sensitivity, block
//! sensitivity and its fractional relaxation, all with exact rational
//! arithmetic, plus the spectral, polytope, intersecting-family and RSK
//! machinery used to cross-validate them.

pub mod bitset;
pub mod catalog;
pub mod domain;
pub mod error;
pub mod families;
pub mod lowdegree;
pub mod measures;
pub mod numerics;
pub mod rsk;
pub mod spectral;
pub mod suites;
pub mod tables;

pub use catalog::DomainSpec;
pub use domain::{Domain, DomainParams, Point, Query, Universe};
pub use error::Error;
pub use measures::{BooleanFunction, DecisionTree, MeasureReport};
pub use numerics::rat::Rat;
