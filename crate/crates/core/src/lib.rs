//! Exact modular data of rational conformal field theories.
//!
//! The crate builds the pair `(S, T)` over cyclotomic fields, computes the
//! Galois action on it, and decides membership in the kernel of the modular
//! representation of `SL(2, Z)`, which is a congruence subgroup whose level is
//! the order of `T`.

pub mod arith;
pub mod cyclotomic;
pub mod error;
pub mod format;
pub mod galois;
pub mod group;
pub mod kernel;
pub mod lambda;
pub mod matrix;
pub mod modular_data;
pub mod report;
pub mod sl2;

pub use cyclotomic::{CycNumber, Rational};
pub use error::{Axiom, Error, Result};
pub use galois::MonomialMatrix;
pub use matrix::{CycMatrix, PhaseDiagonal};
pub use modular_data::{FusionTable, ModularData, PrimaryLabel, TwistSpectrum};
pub use sl2::{GeneratorWord, SL2NMatrix, SL2ZMatrix};
