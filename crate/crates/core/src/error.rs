// SPDX-License-Identifier: Apache-2.0

use alloc::string::String;

use crate::Int;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("gram matrix is not symmetric at ({row}, {col})")]
    Asymmetric { row: usize, col: usize },
    #[error("degenerate form (determinant zero)")]
    Degenerate,
    #[error("empty lattices are not constructible")]
    EmptyLattice,
    #[error("scale factor must be nonzero")]
    ZeroScale,
    #[error("labels must be {rank} distinct strings")]
    BadLabels { rank: usize },
    #[error("sublattice basis rows are linearly dependent")]
    DependentBasis,
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not invertible over the integers (det = {0})")]
    NotUnimodular(Int),
    #[error("vector does not lie in the sublattice")]
    NotInSublattice,
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("symbol basis must contain `1`")]
    MissingUnit,
    #[error("product {0} * {1} is not declared")]
    UndeclaredProduct(String, String),
    #[error("conflicting declaration for product {0} * {1}")]
    ConflictingProduct(String, String),
    #[error("period vector is zero")]
    ZeroPeriod,
    #[error("period does not square to zero")]
    NonIsotropicPeriod,
    #[error("period does not lie in the given sublattice")]
    PeriodOutsideSublattice,
    #[error("basis vector pairs non-integrally with the B-field")]
    NonIntegralTwist,
    #[error("lattices do not share an ambient")]
    AmbientMismatch,
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("zero input")]
    ZeroInput,
}

pub type Result<T> = core::result::Result<T, Error>;
