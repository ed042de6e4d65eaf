//! Constants of the Weitzenböck derivation `d(x_i) = x_{i-1}` on
//! `Q[x_0, ..., x_n]`, computed from Casimir elements and `tau` maps, with a
//! brute-force nullspace oracle for cross-validation.

pub mod casimir;
pub mod certify;
pub mod derivation;
pub mod error;
pub mod io;
pub mod oracle;
pub mod poly;
pub mod solver;
pub mod subalgebra;

pub use error::{Error, Result};
pub use poly::{format_poly, parse_poly, Monomial, Poly, Rational};
