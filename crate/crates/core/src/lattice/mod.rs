//! Integer lattices: expressions, Gram matrices, invariants, discriminant
//! forms, short vectors and reflections.

mod discriminant;
mod expr;
mod gram;
mod matrix;
mod roots;
mod snf;

pub use discriminant::{
    discriminant_form, discriminant_group, DiscriminantForm, DiscriminantGroup,
};
pub use expr::{Atom, LatticeExpr, Term};
pub use gram::{
    ambient_lattice, atom_gram, gram, polarization, primitive_lattice, GramMatrix, Signature,
};
pub use matrix::IntMatrix;
pub use roots::{enumerate_norm_vectors, is_six_root, picard_lefschetz};
pub use snf::{big_determinant, big_mul, smith_normal_form, to_big, BigMatrix, SmithForm};

/// Coordinates relative to a Gram basis.
pub type Vector = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("invalid lattice expression: {0}")]
    Invalid(String),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("degenerate form (determinant 0)")]
    Degenerate,
    #[error("form is not positive definite; short-vector enumeration needs a definite lattice")]
    NotPositiveDefinite,
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("reflection vector has square {0}, expected 2 or -2")]
    NotARoot(i64),
    #[error("norm must be positive, got {0}")]
    NonPositiveNorm(i64),
}
