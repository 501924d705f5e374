//! Exact construction, verification and classification of metric Lie
//! algebras obtained as twofold extensions of abelian Lie algebras.
//!
//! All arithmetic is over the rationals; every identity is checked exactly.

pub mod classify;
pub mod cochain;
pub mod decomp;
pub mod error;
pub mod fixtures;
pub mod json;
pub mod liecore;
pub mod linalg;
pub mod twofold;

pub use error::{Error, Result};
pub use linalg::{Matrix, Signature, Q};
