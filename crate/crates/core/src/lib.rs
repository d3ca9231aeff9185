//! Exact Hochschild cohomology in low degrees for finite-dimensional quiver
//! algebras `KQ/I`, computed from the start of a minimal projective bimodule
//! resolution, together with builders for two families of self-injective
//! algebras and a bar-complex cross-check.

pub mod algebra;
pub mod bar;
pub mod cache;
pub mod dsl;
pub mod error;
pub mod families;
pub mod field;
pub mod groebner;
pub mod hochschild;
pub mod linalg;
pub mod pipeline;
pub mod quiver;
pub mod resolution;
pub mod simples;

pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use quiver::{FreeElement, Path, Presentation, Quiver, UniformElement};
