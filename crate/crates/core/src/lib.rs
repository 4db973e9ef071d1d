// Negated float comparisons are deliberate: NaN must fail argument checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod detector;
pub mod error;
pub mod eval;
pub mod kde;
pub mod moments;
pub mod multiindex;
pub mod relaxation;
pub mod sdp;

pub use error::{Error, Result};
