//! Grover search under three semantics.
//!
//! * [`sim`]: an exact state-vector simulator of the oracle / diffusion circuit.
//! * [`diagram`], [`eval`], [`rewrite`]: a sliced string-diagram IR over
//!   finite-dimensional spaces, its dense-matrix semantics, and a rewrite
//!   engine for the Frobenius-algebra, classical-point and group
//!   representation identities.
//! * [`analysis`]: a closed-form expression for the unmarked amplitude after
//!   `√|S|` iterations, its claimed bounds, and a three-way comparison against
//!   the simulator and diagram evaluation.

pub mod analysis;
pub mod builders;
pub mod cli;
pub mod dense;
pub mod diagram;
pub mod eval;
pub mod generator;
pub mod group;
mod logspace;
pub mod rewrite;
pub mod serial;
pub mod sim;
pub mod space;
pub mod tolerance;

use thiserror::Error;

pub use dense::DenseTensor;
pub use diagram::{make_generator, Diagram, Slice, TypingReport};
pub use eval::{eval, eval_generator, eval_with, scalar_of, EvalOptions};
pub use generator::{CustomBox, FunctionBox, Generator};
pub use group::GroupSpec;
pub use space::{SpaceKind, SpaceLabel};

/// Tool version embedded in every emitted document.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Version of the JSON documents emitted by the CLI and the diagram format.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagramError {
    #[error("invalid space '{name}': {reason}")]
    InvalidSpace { name: String, reason: String },
    #[error("invalid group '{name}': {reason}")]
    InvalidGroup { name: String, reason: String },
    #[error("invalid {variant}: {reason}")]
    InvalidVariant { variant: &'static str, reason: String },
    #[error("type mismatch at wire {position}: expected {expected}, found {found}")]
    TypeMismatch { position: usize, expected: String, found: String },
    #[error("dimension cap exceeded: {entries} entries > {cap}")]
    DimensionCapExceeded { entries: u128, cap: usize },
    #[error("invalid oracle function: {0}")]
    InvalidFunction(String),
    #[error("iteration count must be at least 1, got {0}")]
    InvalidIterations(usize),
    #[error("ill-typed diagram: {0}")]
    IllTyped(TypingReport),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("evaluation cap exceeded: {entries} entries > {cap}")]
    CapExceeded { entries: u128, cap: usize },
    #[error("diagram is not closed ({inputs} inputs, {outputs} outputs)")]
    NotClosed { inputs: usize, outputs: usize },
    #[error("ill-typed diagram: {0}")]
    IllTyped(TypingReport),
    #[error(transparent)]
    InvalidGenerator(DiagramError),
}

impl DiagramError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            DiagramError::InvalidSpace { .. } => "invalid-space",
            DiagramError::InvalidGroup { .. } => "invalid-group",
            DiagramError::InvalidVariant { .. } => "invalid-variant",
            DiagramError::TypeMismatch { .. } => "type-mismatch",
            DiagramError::DimensionCapExceeded { .. } => "cap-exceeded",
            DiagramError::InvalidFunction(_) => "invalid-f",
            DiagramError::InvalidIterations(_) => "invalid-iterations",
            DiagramError::IllTyped(_) => "type-error",
        }
    }
}

impl EvalError {
    pub fn code(&self) -> &'static str {
        match self {
            EvalError::Shape(_) => "shape-error",
            EvalError::CapExceeded { .. } => "cap-exceeded",
            EvalError::NotClosed { .. } => "not-closed",
            EvalError::IllTyped(_) => "type-error",
            EvalError::InvalidGenerator(e) => e.code(),
        }
    }
}
