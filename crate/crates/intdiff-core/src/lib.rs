//! Exact kernel for the algebra of polynomial integro-differential
//! operators on n variables.
//!
//! The crate provides:
//!
//! - [`algebra`]: sparse normal-form arithmetic over exact rationals, the
//!   involution, the grading, ideal membership, and finite-unit inversion;
//! - [`poly`]: the faithful action on polynomials in the divided-power
//!   basis, truncated matrices, and window-agreement oracles;
//! - [`quotient`]: the skew Laurent quotient by the maximal ideal, the
//!   Fredholm index, and the automorphism group of the quotient;
//! - [`aut`]: automorphisms in canonical permutation-torus-inner form,
//!   with recognition from generator images and explicit conjugating-unit
//!   formulas;
//! - [`ideal`]: the full ideal lattice as minimal-prime antichains, with
//!   enumeration, stabilizers, and the invariant ideals;
//! - [`selftest`]: the executable acceptance checks.
//!
//! The `parallel` feature (on by default) runs the bulk scans and batch
//! verifications on a rayon pool; `*_sequential` variants are always
//! available and produce identical output.

pub mod algebra;
pub mod aut;
pub mod ideal;
pub mod poly;
pub mod quotient;
pub mod scalar;
pub mod selftest;

pub use algebra::{AlgebraError, Factor, Gen, Monomial, Operator, UnitError};
pub use aut::{
    is_inner, perm_action, recognize, torus_action, validate_relations, AutError,
    CanonicalAutomorphism, GeneratorImages, InnerUnit, Permutation, TorusVector,
};
pub use ideal::{
    enumerate_ideals, invariant_ideals, stabilizer, IdealDescriptor, IdealError, StabilizerReport,
};
pub use poly::{agree_on_window, apply, truncated_matrix, DividedPoly, TruncatedMatrix};
pub use quotient::{
    fredholm_index, induced_quotient_aut, BAutomorphism, BElement, Laurent, QuotientError,
};
pub use scalar::Scalar;
