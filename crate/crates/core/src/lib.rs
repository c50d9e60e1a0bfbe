//! Pseudohermitian invariants of strictly pseudoconvex domains in C², the
//! Fefferman expansion of the approximately Einstein metric, renormalized
//! volumes, conformal anomalies and the renormalized Chern–Gauss–Bonnet check.

pub mod error;
pub mod jets;

pub use error::{CrError, Result};
pub use jets::{Jet, Multidegree, C64};
pub mod cgb;
pub mod crgeom;
pub mod dsl;
pub mod expand;
pub mod quad;
pub mod renorm;
pub mod report;
pub mod cli;
