//! Exact-arithmetic model of Gozinta Boxes: boxes with one expandable side
//! that can be nested inside each other in more than one order.
//!
//! * [`model`]: side lengths, domination and presentations of a single box.
//! * [`nesting`]: verifying concrete arrangements, diagrams, pair types.
//! * [`feasibility`]: strict linear inequality systems over the rationals.
//! * [`achievability`]: case enumeration deciding which orders a box set can
//!   realize, plus a bounded brute-force cross-check.
//! * [`constructions`]: operations that build new box sets from old ones.
//! * [`catalog`]: the classic worked examples as data.
//! * [`format`]: the line-oriented text format for box sets.

// Errors carry exact values for the message; they are never on a hot path.
#![allow(clippy::result_large_err)]

pub mod achievability;
pub mod catalog;
pub mod constructions;
pub mod feasibility;
pub mod format;
pub mod model;
pub mod nesting;
pub mod perm;
pub mod scalar;

pub use model::{BoxDesign, Dims, Presentation};
pub use nesting::{Arrangement, TrickInstance};
pub use perm::Permutation;
pub use scalar::Scalar;
