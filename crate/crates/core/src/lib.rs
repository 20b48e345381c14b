//! Exact intersection theory, cone computations and positivity checks for
//! rational surfaces obtained by blowing up the plane at the base points of a
//! pencil at infinity together with free chains on members of the pencil.
//!
//! The crate is organised bottom-up:
//!
//! * [`configuration`]: proximity and multiplicity matrices, germ pairings,
//!   dual graph and maximal contact data of a configuration of infinitely near
//!   points.
//! * [`lattice`]: divisor classes in the Néron–Severi lattice and the
//!   intersection form.
//! * [`pencil`]: validation of pencil-at-infinity configurations and the
//!   `(block, index)` coordinates of their points.
//! * [`cones`]: closed-form generators of the cone of curves and the nef cone.
//! * [`polyhedral`]: an independent exact cone engine (double description,
//!   Fourier–Motzkin, exact LP membership).
//! * [`positivity`]: the `G` matrix, P-sufficiency verdicts and Cox ring
//!   finite generation.
//! * [`zariski`]: Zariski decomposition of pseudoeffective classes.
//! * [`random`]: seeded generator of valid pencil configurations.
//! * [`catalog`]: a few named configurations (the cusp, the line, the conic).

pub mod catalog;
pub mod cones;
pub mod configuration;
mod error;
pub mod lattice;
pub mod pencil;
pub mod polyhedral;
pub mod positivity;
pub mod random;
pub mod zariski;

pub use error::{Error, Result};
pub use lattice::{DivisorClass, Rational};
