//! Finite difference–restriction algebras, their dual étale spaces, the
//! finitary compatible completion, and compatibility-preserving operators.

pub mod bitset;
pub mod dra;
pub mod duality;
pub mod error;
pub mod filters;
pub mod fixtures;
pub mod limits;
pub mod operators;
pub mod pfun;
pub mod space;

pub use error::{Error, Result};
