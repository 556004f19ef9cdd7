//! Finite quantum logics of two-party no-signaling box worlds.
//!
//! The crate builds the concrete logics of single boxes and of the composite
//! two-box system, represents states as exact no-signaling behaviors, and
//! checks by exhaustive computation that the composite logic is a free
//! orthodistributive product and a strong tensor product of the single-box
//! logics.

pub mod bits;
pub mod box_world;
pub mod cli;
pub mod error;
pub mod logic;
pub mod products;
pub mod report;
pub mod states;

pub use bits::Bits;
pub use error::{Error, Result};
