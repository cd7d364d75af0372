//! Exact graded local cohomology, Koszul cohomology and coregularity tests
//! for small homogeneous ideals in polynomial rings.

pub mod budget;
pub mod coregular;
pub mod error;
pub mod field;
pub mod grading;
pub mod koszul;
pub mod linalg;
pub mod localcoh;
pub mod module;
pub mod poly;
pub mod quasicyclic;
pub mod rat;
pub mod ring;
pub mod store;

pub use error::{Error, Result};
pub use field::{Field, PrimeField, Rationals};
pub use poly::{Exponent, Polynomial};
pub use rat::Rat;
