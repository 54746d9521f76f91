//! Big Witt vectors in several variables over finite fields and nilpotent
//! test rings.

pub mod algebra;
pub mod cft;
pub mod duality;
pub mod error;
pub mod json;
pub mod lambda;
pub mod ptypical;
pub mod series;

pub use error::{Error, Result};
