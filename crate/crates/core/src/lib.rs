//! Permutation groups, iterated wreath products and the counting, scanning
//! and certification routines built on them.
//!
//! Permutations compose right to left: `p.compose(&q)` applies `q` first.
//! Exact results are `BigRational`; sampled ones carry their seed.

pub mod catalog;
pub mod dynamics;
pub mod error;
pub mod perm;
pub mod ramification;
pub mod rational;
pub mod splitting;
pub mod stats;
pub mod wreath;

pub use error::{Error, Result};
pub use perm::{BlockSystem, CycleType, Perm, PermGroup};
