//! Alcove topologies, structure algebras and wall-crossing functors on
//! finite alcove windows, with exact arithmetic over prime fields.

pub mod alcovegeom;
pub mod basechange;
pub mod basering;
pub mod error;
pub mod ordertopo;
pub mod polyalg;
pub mod presheaf;
pub mod report;
pub mod rootsys;
pub mod structalg;
pub mod wallcross;
pub mod zmod;

pub use error::{Error, Result};
