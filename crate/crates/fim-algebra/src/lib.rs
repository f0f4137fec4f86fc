//! Exact-arithmetic workbench for the monogenic free inverse monoid and its
//! surrounding structures: rational matrix computations, finitely presented
//! commutative monoid word problems, the semigroup algebra with its central
//! projections, truncated matrix representations with a weighted rank,
//! rational series under the Hadamard product, a skew shift-pair construction,
//! and the lamplighter group algebra as an independent trace oracle.

pub mod algebra;
pub mod closure;
pub mod error;
pub mod lamplighter;
pub mod matrix;
pub mod monoid;
pub mod munn;
pub mod par;
pub mod repr;
pub mod scalar;
pub mod series;
pub mod skew;

pub use error::{Error, Result};
pub use matrix::ExactMatrix;
pub use munn::MunnTriple;
pub use scalar::Q;
