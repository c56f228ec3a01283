//! Desk-scale evaluation of the odd multiplicative character on higher Loday
//! symbols over commutative coefficient algebras.
//!
//! The crate provides two independent evaluation paths for the character:
//! a chain-level route (relative Chern character fed into the index cocycle)
//! and the closed-form commutator-trace sum indexed by signed permutations
//! with increasing even/odd pairs, together with a verification suite for
//! the chain-level identities relating them.

pub mod algebra;
pub mod chains;
pub mod character;
pub mod cli;
pub mod error;
pub mod fredholm;
pub mod perm;
pub mod simplicial;
pub mod verify;

pub use error::Error;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix used for represented operators.
pub type OpMatrix = nalgebra::DMatrix<C64>;
