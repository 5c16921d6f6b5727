//! Exact arithmetic toolkit for zonotope-perturbed heights on thin twin apartments,
//! horizontal links, move systems, descending links and hemisphere complexes.

pub mod coxcomplex;
pub mod error;
pub mod exactgeom;
pub mod homology;
pub mod horolinks;
pub mod morse;
pub mod polycomplex;
pub mod sphbuild;
pub mod suites;
pub mod twin;
pub mod zonotope;

pub use error::{Error, Result};
