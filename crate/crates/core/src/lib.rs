//! Exact-arithmetic construction, verification and certification of rational
//! Diophantine sextuples, plus the reduction-type analysis of the curves that
//! parametrize them.
//!
//! Modules, bottom-up:
//!
//! - [`exactnum`]: big rationals, square detection, p-adic valuations.
//! - [`weierstrass`]: curves `y² = x³ + a₂x² + a₄x + a₆` and their group law.
//! - [`family`]: the curves `E(t)`, `E*(t)`, `E''(t, x)` and triple extraction
//!   from multiples `[m]R` through the 3-isogeny `E* → E`.
//! - [`engine`]: induced curves, the order-3 point `S'`, extension of a triple
//!   to a sextuple, and the pairwise square certificate.
//! - [`paramfam`]: closed-form sextuple family in `t`, sign regions, fixtures.
//! - [`reduction`]: minimal models, reduction types and valuation tables.
//! - [`sweep`]: ordered data-parallel maps (rayon with the `parallel` feature).

pub mod engine;
pub mod error;
pub mod exactnum;
pub mod family;
pub mod paramfam;
mod poly;
pub mod reduction;
pub mod sweep;
pub mod weierstrass;

pub use error::{Error, Result};
pub use exactnum::Rat;
pub use weierstrass::{Curve, Point};
