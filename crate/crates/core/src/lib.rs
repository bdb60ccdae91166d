//! Exact r-shifted central triangles of Riordan arrays.
//!
//! The crate is layered bottom-up:
//!
//! - [`fps`]: truncated power series over exact rationals (product,
//!   division, composition, reversion, square root).
//! - [`riordan`]: the Riordan group, triangles, A/Z-sequences and production
//!   matrices.
//! - [`central`]: shifted central triangles, their factorization through the
//!   original array, inverses, and transition identities.
//! - [`catalog`]: named arrays with embedded reference sequences.
//! - [`suite`]: the identity-verification suite and the randomized fuzzer.
//! - [`cli`]: the command-line front end.

pub mod catalog;
pub mod central;
pub mod cli;
pub mod error;
pub mod fps;
pub mod riordan;
pub mod suite;

pub use central::{CentralDecomposition, Phi, Shift};
pub use error::{Error, Result};
pub use fps::{Rational, Series};
pub use riordan::{ProductionMatrix, RiordanArray, Triangle};
