//! Coefficient rings: finite fields, their nilpotent thickenings
//! `F_q[ε]/(ε^nil)`, and univariate polynomials with resultants.

pub mod field;
pub mod ring;
pub mod upoly;

pub use field::{Embedding, Field, FieldDesc};
pub use ring::{Ring, RingDesc, RingElement};
pub use upoly::{resultant, roots_with_multiplicity, Root, UnivariatePolynomial};
