//! Graded polynomial arithmetic over F_p in the simple-coroot variables,
//! coroot localizations, and per-degree linear algebra.

mod field;
mod graded;
mod linalg;
mod loc;
mod poly;

pub use field::Fp;
pub use graded::{graded_solve, saturate, saturate_from, FreeLayout, GradedBasis, Relation};
pub use linalg::{axpy, combine, kernel_mod, mask_vec, solve, Subspace};
pub use loc::{LocElem, LocRing};
pub use poly::{monomial_count, monomial_index, monomials, SPoly};
