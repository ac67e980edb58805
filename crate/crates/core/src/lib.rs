//! Exact combinatorics of the stratification of the wonderful
//! compactification of a Cartan subalgebra.

pub mod betti;
pub mod cohomology;
pub mod error;
pub mod flats;
pub mod goodsub;
pub mod linalg;
pub mod rootsys;
pub mod series;
pub mod strata;
pub mod verify;
pub mod weyl;

pub use error::{Error, Result};
pub use flats::{Flat, FlatId, IntersectionLattice, LatticeOptions};
pub use rootsys::{CartanType, Family, RootSet, RootSystem};
