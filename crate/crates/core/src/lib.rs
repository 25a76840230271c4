//! Orbits of GL2 acting by simultaneous conjugation on tuples of nilpotent
//! 2x2 matrices, and separating invariants for them.

pub mod canonical;
pub mod counting;
pub mod error;
pub mod exec;
pub mod gf;
pub mod indicator;
pub mod invariants;
pub mod matrices;

pub use canonical::{canonicalize, are_similar, orbit_representatives, standardize_nilpotent, CanonicalForm, Witness};
pub use error::{Error, Result};
pub use exec::Strategy;
pub use gf::{field_make, AnyField, Fe, Field, FieldSpec, GaloisField, Gf, Rationals};
pub use matrices::{Mat2, MatN, NilTuple};
