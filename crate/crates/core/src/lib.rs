//! Combinatorial Fock space engine for quantum symmetric pairs of affine
//! type A and their comparison with type A, B and C representation theory
//! at roots of unity.

pub mod error;
pub mod fockseq;
pub mod grothendieck;
pub mod laurent;
pub mod linkage;
pub mod operators;
pub mod relcheck;
pub mod weights;

pub use error::{Error, Result};
pub use fockseq::{FockVector, MoveKind, Position, Sequence, StatKind, Support};
pub use laurent::{quantum_binomial, quantum_factorial, quantum_int, Coeff, LaurentPoly};
pub use weights::{Family, LieType, ResidueClass, Weight};

use num_bigint::BigInt;

/// Laurent polynomial with arbitrary precision coefficients.
pub type Laurent = LaurentPoly<BigInt>;
/// Fock space vector with arbitrary precision coefficients.
pub type Fock = FockVector<BigInt>;
/// Laurent polynomial with machine integer coefficients.
pub type LaurentI64 = LaurentPoly<i64>;
