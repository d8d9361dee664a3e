//! Exact computations with finite Coxeter groups, their Hecke algebras,
//! Kazhdan-Lusztig cells, the asymptotic ring `J` and truncated convolution
//! multiplicities.

pub mod cache;
pub mod cells;
pub mod coxeter;
pub mod error;
pub mod group;
pub mod hecke;
pub mod jring;
pub mod laurent;
pub mod truncated;
pub mod validate;

pub use coxeter::{CoxeterSystem, CoxeterType, ElementId, Generator, GroupElement};
pub use error::{Error, Result};
pub use laurent::LaurentPoly;
