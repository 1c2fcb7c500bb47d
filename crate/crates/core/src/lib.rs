// `!(x > 0.0)` is used deliberately so NaN falls into the rejection branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Dissipative dynamics of a laser-driven three-level double quantum dot.
//!
//! The crate builds the Lindblad generator of the model ([`model`]), propagates it
//! numerically and extracts its steady state ([`propagator`]), and evaluates the closed-form
//! undriven solution and stationary values ([`analytic`]). The numerical path and the closed
//! forms are cross-checked by [`validation`], which also backs the `dqd validate` command.

pub mod analytic;
pub mod cli;
pub mod error;
pub mod model;
pub mod propagator;
pub mod quantum;
pub mod validation;

pub use error::{Error, Result};
