//! Exact computational engine for smoothness questions about
//! finite-dimensional commutative Hopf algebras over prime fields and ℚ.
//!
//! The crate decides the equivalent smoothness conditions (reducedness,
//! injectivity of Frobenius, injectivity of the induced multiplication on
//! the symmetric square of the augmentation ideal, vanishing of symmetric
//! second Hochschild cohomology), computes symmetric and full second
//! Hochschild cohomology with trivial coefficients, realizes the
//! correspondence between symmetric 2-cocycles and cleft extensions over
//! the dual numbers k[τ], and constructively decomposes local Hopf algebras
//! into truncated polynomial algebras.

pub mod algebra;
pub mod cleft;
pub mod cohomology;
pub mod corpus;
pub mod decompose;
pub mod error;
pub mod exactla;
pub mod hopf;
pub mod io;

pub use error::{Error, Result};
