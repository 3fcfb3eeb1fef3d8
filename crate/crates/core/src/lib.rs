//! Evenly convex analysis on finite grids.
//!
//! The crate computes c-conjugates, perturbational duality pairs,
//! epsilon-c-subdifferentials and c-Lagrangians for the coupling
//! `c(x, (x*, u*, alpha)) = <x, x*>` when `<x, u*> < alpha` and `+inf`
//! otherwise. Every routine is generic over a [`Scalar`] backend: exact
//! rationals for identities that must hold bit-for-bit, `f64` for fast
//! approximate work.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod audit;
pub mod catalog;
pub mod conjugation;
pub mod duality;
pub mod error;
pub mod esets;
pub mod extreal;
pub mod funcrep;
pub mod lagrangian;
pub mod scalar;
pub mod subdifferential;

pub use error::Error;
pub use extreal::ExtReal;
pub use scalar::{Rational, Scalar};
