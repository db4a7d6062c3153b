#![no_std]
//! Exact Newton–Okounkov bodies on smooth projective toric varieties.

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod additivity;
pub mod exactgeom;
pub mod inequalities;
pub mod linalg;
pub mod okounkov;
pub mod rat;
pub mod toric;

pub use exactgeom::{FormalBody, GeomError, HRep, Polytope};
pub use rat::{Rat, RatVec};
