//! Exact linear algebra and polynomial computations for EPW sextics: degeneracy
//! loci of Lagrangian subspaces of the third exterior power of a 6-dimensional
//! space, over the rationals and prime fields.

#![allow(clippy::needless_range_loop)]

pub mod chern;
pub mod det;
pub mod enumerate;
pub mod epw;
pub mod error;
pub mod exterior;
pub mod lagrangian;
pub mod matrix;
pub mod modp;
pub mod mukai;
pub mod poly;
pub mod rng;
pub mod scalar;
pub mod symplectic;

pub use error::{Error, Result};
pub use exterior::{Space, WedgeVector};
pub use lagrangian::{LagrangianSubspace, ChartTrivialization};
pub use matrix::ExactMatrix;
pub use poly::{Monomial, MultiPoly};
pub use scalar::{Field, FieldScalar};
