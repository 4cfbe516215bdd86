//! Exact computation with quantale-enriched categories.
//!
//! The layers, bottom to top: quantales and their residuals
//! ([`quantale`]), matrices over a quantale ([`qmatrix`]), categories and
//! functors enriched in a quantale ([`qcategory`]), presheaves and the
//! Isbell adjunction ([`isbell`]), the MacNeille completion
//! ([`macneille`]), and the decision procedures for completeness,
//! injectivity, Kan extensions and ball systems ([`analysis`]). The
//! [`laws`] module packages the algebraic law suite, [`json`] and [`dot`]
//! the serialization formats.
//!
//! Everything is exact: finite carriers use small-integer codes,
//! distances use arbitrary-precision rationals. No floating point.

// Errors carry full diagnostic context (names, offending elements) and
// only exist on cold paths; boxing them would buy nothing.
#![allow(clippy::result_large_err)]

pub mod analysis;
pub mod dot;
pub mod error;
pub mod isbell;
pub mod json;
pub mod laws;
pub mod macneille;
pub mod qcategory;
pub mod qmatrix;
pub mod quantale;
pub mod rational;

pub use error::{Error, Result};
pub use qcategory::{QCategory, QFunctor};
pub use qmatrix::{ObjSet, QMatrix};
pub use quantale::{QElem, Quantale, QuantaleKind};
pub use rational::ExtRat;
