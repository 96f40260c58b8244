//! Exact generator and verifier for sharp point-line incidence constructions
//! over the quadratic ring ℤ[√k].
//!
//! The crate builds the coordinate set `A = {x₁ + x₂√k}`, the point set
//! `P = A × A`, a norm-filtered slope set `S ⊂ ℚ(√k)` and the line set `L`
//! of lines with slopes in `S` through a centred anchor grid. It then counts
//! incidences and per-line richness exactly and evaluates projection sizes
//! and additive energies. Every predicate is decided with integers.
//!
//! The crate is `no_std` and needs only `alloc`. File formats, the command
//! line and parallel drivers live in the `st-forge-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod applications;
pub mod arith;
pub mod construction;
pub mod error;
pub mod incidence;
pub mod oracle;

pub use arith::{QkNum, Ring, ZkInt};
pub use construction::{
    gen_coords, gen_lines, gen_points, gen_slopes, Construction, GridParams, Line, LineFamily,
    LineSet, PointSet, Slope, SlopeParams,
};
pub use error::{Error, Result};

/// Exact rational numbers used in reports.
pub type Rational = num_rational::Ratio<i128>;
