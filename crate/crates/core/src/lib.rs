//! Exact lattice arithmetic for rank-2 K3 Picard lattices.
//!
//! The crate embeds even hyperbolic rank-2 lattices primitively into two
//! families of reference lattices, moves the image of a polarisation into
//! the nef cone by reflections in `(-2)`-classes, and produces data that can
//! be rechecked from scratch: Gram identities, Smith normal form invariant
//! factors, reflection traces and sums-of-squares witnesses.
//!
//! The linear-algebra layer ([`lattice`], [`squares`]) is generic over an
//! integer [`Scalar`]. The geometric layers ([`cones`], [`embeddings`]) work
//! with the arbitrary-precision aliases defined here.

pub mod cones;
pub mod embeddings;
pub mod error;
pub mod lattice;
pub mod scalar;
pub mod squares;

pub use error::{Error, ErrorKind, Result};
pub use scalar::Scalar;

/// Arbitrary-precision integer used by every geometric computation.
pub type Int = num_bigint::BigInt;
/// Exact rational over [`Int`], always kept in lowest terms.
pub type Rat = num_rational::BigRational;

pub type Matrix = lattice::Matrix<Int>;
pub type GramMatrix = lattice::GramMatrix<Int>;
pub type DivisorClass = lattice::DivisorClass<Int>;
pub type RationalClass = lattice::RationalClass<Int>;
pub type Embedding = lattice::Embedding<Int>;
pub type SquaresWitness = squares::SquaresWitness<Int>;

/// Shorthand for building an [`Int`] from a machine integer.
pub fn int(v: i64) -> Int {
    Int::from(v)
}

/// Converts a slice of machine integers into a coordinate vector.
pub fn ints(vs: &[i64]) -> Vec<Int> {
    vs.iter().copied().map(Int::from).collect()
}
