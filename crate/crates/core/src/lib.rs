//! Exact-arithmetic toolkit for canonical volumes of 3-folds of general type.
//!
//! - [`basket`] and [`reid`]: baskets of terminal quotient singularities and
//!   Reid's plurigenus formula.
//! - [`classify`]: enumeration of baskets matching prescribed plurigenera.
//! - [`wps`]: invariants of weighted complete intersections.
//! - [`xi`]: the lower-bound calculus for `xi = (pi^*K . C)` and the
//!   resulting volume bounds.
//! - [`slope`]: slope propagation for `E_m = a_* omega^m` over an elliptic curve.
//! - [`orchestrator`]: assembly of all branch bounds into the global bound.

pub mod basket;
pub mod classify;
pub mod error;
pub mod orchestrator;
pub mod rational;
pub mod reid;
pub mod slope;
pub mod wps;
pub mod xi;

pub use basket::{correction_sum, correction_term, make_basket, Basket, BasketSet};
pub use error::{Error, Result};
pub use rational::Rational;
pub use reid::{invert_p2_p3, pluri_table, plurigenus, LinearInvariants, ReidModel};
