use alloc::boxed::Box;
use alloc::string::String;

use crate::constraints::Worst;
use crate::search::SearchReport;

/// Every failure the library can report.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite entry in triple {index}")]
    NonFiniteEntry { index: usize },
    #[error("triples {first} and {second} share x but differ in f")]
    InconsistentDuplicate { first: usize, second: usize },
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("unknown constraint family `{0}`")]
    UnknownKind(String),
    #[error("unknown parameter `{name}` for {kind}")]
    UnknownParameter { kind: &'static str, name: String },
    #[error("missing parameter `{name}` for {kind}")]
    MissingParameter {
        kind: &'static str,
        name: &'static str,
    },
    #[error("parameter out of domain: {0}")]
    ParameterOutOfDomain(String),
    #[error("the Lipschitz-Hessian family needs a Hessian entry on every triple")]
    MissingHessian,
    #[error("dimension {dim} is not supported here: {reason}")]
    UnsupportedDimension { dim: usize, reason: &'static str },
    #[error("input dataset violates the constraint (worst residual {} at pair ({}, {}))", .0.value, .0.i, .0.j)]
    InputNotFeasible(Worst),
    #[error("search window exhausted without a bounded witness")]
    UnboundedWitness,
    #[error("solver failure: {0}")]
    SolverFailure(String),
    #[error("a conic backend is required for this instance")]
    BackendRequired,
    #[error("dataset violates the constraint (worst residual {} at pair ({}, {}))", .0.value, .0.i, .0.j)]
    DatasetInfeasible(Worst),
    #[error("point is extensible (tau* = {tau:e})")]
    Extensible { tau: f64 },
    #[error("search budget exhausted (best tau* = {:e})", .0.best_tau)]
    BudgetExhausted(Box<SearchReport>),
    #[error("row {row} failed: {reason}")]
    RowFailed { row: String, reason: Box<Error> },
    #[error("solution flagged inaccurate: {0}")]
    InaccurateSolution(String),
}
