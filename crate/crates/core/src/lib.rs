//! Commutative algebras on three-dimensional space and the homogeneous
//! quadratic differential systems `ẋ = x·x` they define.
//!
//! The crate computes derivation algebras, locates a semisimple derivation
//! with a one-dimensional kernel, and uses it to reduce an algebra to one of
//! thirty-five canonical families. Exact arithmetic over the rationals is the
//! default; an `f64` path covers irrational spectra.

pub mod algebra;
pub mod catalog;
pub mod classify;
pub mod derivation;
pub mod dynamics;
pub mod linalg;
pub mod poly;
pub mod scalar;
pub mod tensor;
