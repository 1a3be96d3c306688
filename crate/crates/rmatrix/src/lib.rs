//! Graded trigonometric and quantum R matrices of `U_q[gl(m|1)]` for `m = 1..4`.
//!
//! The component tables live as text (`data/*.rmt`) and are parsed at load
//! time; everything numeric is generic over [`scalar::Real`] so the same
//! code runs in binary64 or at ~57 significant digits.
//!
//! Layering, bottom up:
//!
//! - [`scalar`]: q-powers, q-brackets, coefficient expressions, helper polynomials
//! - [`grading`]: basis order, parities, grading strip, `R = PŘ`
//! - [`rmt`]: the table format (parse / emit / validate)
//! - [`data`]: the shipped tables and variant resolution
//! - [`builder`]: tables → numeric tensors, eigenvalue families
//! - [`sparse`], [`spectral`], [`ybe`]: operator algebra, projectors, Yang–Baxter residuals
//! - [`sample`], [`check`]: seeded parameter sampling and the verification runner

// `!(x > y)` guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod builder;
pub mod check;
pub mod data;
pub mod error;
pub mod grading;
pub mod rmt;
pub mod sample;
pub mod scalar;
pub mod sparse;
pub mod spectral;
pub mod ybe;

pub use builder::{instantiate, SparseTensor4};
pub use data::TableStore;
pub use error::{Error, EvalError};
pub use rmt::{Kind, RTable, Variant};
pub use scalar::{Backend, Hp, ParamPoint, Real};
