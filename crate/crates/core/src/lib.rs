//! Symbolic computation for higher-rank semigraph *-algebras.
//!
//! The crate is organised bottom-up: [`semigraph`] holds the combinatorics of
//! k-semigraph instances, [`projections`] the vertex-set projection lattice
//! and its skip action, [`algebra`] the graded *-algebra over exact Gaussian
//! rationals, [`approximant`] the finite-dimensional core approximants and
//! [`conditions`] the aperiodicity, cancelling and fullness checkers.

pub mod algebra;
pub mod approximant;
pub mod conditions;
pub mod degree;
pub mod error;
pub mod format;
pub mod linalg;
pub mod projections;
pub mod scalar;
pub mod semigraph;

pub use algebra::{Algebra, AlgebraElement, BasisWord, FormalWord, HalfStandard, Letter, Literal};
pub use degree::{DegreeDiff, MultiDegree};
pub use error::{AlgebraError, ConditionError, InstanceError, SemigraphError};
pub use projections::ProjectionSet;
pub use scalar::Scalar;
pub use semigraph::{
    AxiomReport, AxiomViolation, EdgeId, Element, Flags, Instance, InstanceBuilder, VertexId, VertexSet,
};
