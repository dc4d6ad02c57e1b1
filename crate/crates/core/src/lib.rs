//! Exact arithmetic for the one-leg orbifold topological vertex of `Z_n`-gerbes.
//!
//! Everything is computed over the cyclotomic field `Q(ξ_M)` with `M = lcm(4, 2n)`
//! and truncated Puiseux series on top of it. The modules build on each other:
//!
//! - [`cyclo`]: the coefficient field.
//! - [`series`] and [`rational`]: truncated series, and rational functions that are
//!   products of geometric factors (expanded natively or after an exponential change
//!   of variables).
//! - [`partitions`], [`fock`]: decorated partitions, Maya diagrams, n-quotients, strips.
//! - [`wreath_char`]: characters of `Z_n ≀ S_d`.
//! - [`loop_schur`], [`vertex`], [`hurwitz`], [`gerbe`]: the generating functions and the
//!   identities relating them.
//! - [`report`]: pass/fail records shared by the verification routines.

pub mod cyclo;
pub mod error;
pub mod fock;
pub mod gerbe;
pub mod hurwitz;
pub mod loop_schur;
pub mod partitions;
pub mod rational;
pub mod report;
pub mod series;
pub mod vertex;
pub mod wreath_char;

pub use cyclo::{field, field_for_modulus, CycNum, CyclotomicField};
pub use error::{Error, Result};
pub use partitions::{MultiPartition, Partition};
pub use series::{Series, VarSet};
