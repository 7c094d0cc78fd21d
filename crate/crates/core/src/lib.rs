//! Exact evaluation of integrals over `R^r` of rational-exponential forms with affine
//! polar hyperplanes, by sums of iterated residues along flags.

pub mod arrangement;
pub mod cli;
pub mod exact_linalg;
pub mod oracle;
pub mod residue_engine;
pub mod scalar;
pub mod symfun;

pub use rug::Rational;
pub use scalar::ComplexScalar;
