//! Finite-dimensional associative algebras over prime fields, presented by
//! multiplication tables or by quiver and relations, together with the
//! bimodule and operator constructions built on top of them:
//!
//! * [`table`] — basis-level algebras with sparse structure constants,
//!   corners, ideal quotients, trivial extensions;
//! * [`quiver`] — quivers with relations, graded basis construction by
//!   degreewise row reduction, Cartan data, projectives;
//! * [`gl2`] — the specific quiver family Q_n / A_n / c_p and its
//!   filtration and truncation structure;
//! * [`bimodule`] — bimodules, tensor products over an algebra, duals,
//!   intertwiner spaces and isomorphism certificates;
//! * [`ops`] — the trivial-extension operator C_p and the twisted tensor
//!   operator (c,x) ↦ c(A,T), with their iteration;
//! * [`iso`] — certified algebra isomorphism search;
//! * [`schur`] — Schur algebras S(2,r) as symmetric-group commutants,
//!   block splitting, radicals and basic algebras;
//! * [`oracle`] — an independent character-theoretic oracle for SL_2
//!   decomposition numbers, used by the test suites as a cross-check;
//! * [`json`] — the v1 on-disk formats.

pub mod bimodule;
pub mod gl2;
pub mod iso;
pub mod json;
pub mod ops;
pub mod oracle;
pub mod quiver;
pub mod schur;
pub mod table;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AlgError {
    #[error(transparent)]
    Fp(#[from] fp::FpError),
    #[error("cap too small: nonzero component at boundary degree {0:?}")]
    CapTooSmall(Vec<i64>),
    #[error("inhomogeneous relation: {0}")]
    InhomogeneousRelation(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("no radical available: algebra is not tightly graded and no radical basis was supplied")]
    NoRadical,
    #[error("not multiplicative: witness basis pair ({0}, {1})")]
    NotMultiplicative(usize, usize),
    #[error("middle algebra mismatch")]
    MiddleMismatch,
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("padding-sensitive truncation: {0}")]
    PaddingSensitive(String),
    #[error("splitting failed after retry bound")]
    SplittingFailed,
    #[error("not split over F_p: endomorphism ring of a simple has dimension {0}")]
    NotSplit(usize),
    #[error("foreign layer: composition factor with last coordinate {0} under top coordinate {1}")]
    ForeignLayer(i64, i64),
    #[error("index out of range: {0}")]
    IndexRange(String),
    #[error("structural check failed: {0}")]
    Structure(String),
    #[error("io: {0}")]
    Io(String),
    #[error("bad artifact: {0}")]
    BadArtifact(String),
}

pub type Result<T> = std::result::Result<T, AlgError>;
