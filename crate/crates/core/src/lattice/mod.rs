//! Exact integer linear algebra for symmetric bilinear forms.

mod embedding;
mod gram;
mod matrix;
mod rank2;
mod signature;
mod snf;

pub use embedding::{is_primitive_embedding, primitivity, Embedding, Primitivity};
pub use gram::{inner_product, BasisId, DivisorClass, GramMatrix, RationalClass};
pub use matrix::Matrix;
pub use rank2::{reduce_rank2_basis, validate_rank2, Rank2Lattice, Rank2Reduction};
pub use signature::{signature, Signature};
pub use snf::{smith_normal_form, SmithForm};
