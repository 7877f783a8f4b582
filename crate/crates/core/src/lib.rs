//! Exact-arithmetic lattice criterion for the self-duality of a degree-8 K3
//! moduli space.
//!
//! Given the Picard lattice `N(X)` of a K3 surface and a primitive nef
//! polarization `H` with `H^2 = 8`, the moduli space `Y = M_X(2, H, 2)` of
//! sheaves with that isotropic Mukai vector is again a K3 surface. This crate
//! decides the lattice-level sufficient criterion for `Y` to be isomorphic to
//! `X`, produces an explicit witness pair `(h1, D)` with `h1 = H + 2D` and
//! `h1^2 = ±4`, and emits either the symbolic isomorphism chain
//! `M_X(2,H,2) ≅ M_X(2,h1,1) ≅ M_X(1,h1,2) ≅ X` (the `h1^2 = 4` case) or an
//! extension-construction certificate (the `h1^2 = -4` case).
//!
//! Everything is computed over exact integers. The modules are generic over
//! the integer scalar (anything implementing [`Scalar`], e.g. `i64` for small
//! searches or [`Int`] for arbitrary precision); the concrete aliases below
//! fix the arbitrary-precision instantiation used by the CLI.
//!
//! Module map:
//! - [`lattice`]: integer lattices, pairings, invariants, saturation,
//!   box enumeration, reflections,
//! - [`mukai`]: Mukai vectors, twists, rank swaps, isomorphism chains,
//! - [`chambers`]: (-2)-classes, nef certification, pseudo-effectivity,
//! - [`criterion`]: input validation, witness searches, the verdict,
//! - [`oracle`]: an independent brute-force re-check of the searches,
//! - [`corpus`]: seeded random lattice corpora for tests and sweeps.

pub mod chambers;
pub mod corpus;
pub mod criterion;
pub mod error;
pub mod lattice;
mod matrix;
pub mod mukai;
pub mod oracle;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Default exact scalar: arbitrary-precision signed integer.
pub type Int = num_bigint::BigInt;
/// A lattice over the default exact scalar.
pub type Lattice = lattice::IntegerLattice<Int>;
/// A lattice vector over the default exact scalar.
pub type Vector = lattice::LatVec<Int>;
/// A Mukai vector over the default exact scalar.
pub type MukaiVector = mukai::MukaiVec<Int>;
