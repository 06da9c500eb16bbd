//! Wire labels for string diagrams.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::DiagramError;

/// What a wire carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpaceKind {
    /// The free vector space on a finite set.
    Set,
    /// The group algebra of a finite group.
    Group,
    /// `(C^2)^{⊗n}`, dimension `2^n`.
    QubitRegister,
    /// The one-dimensional space. Never appears as a wire.
    Trivial,
}

impl SpaceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SpaceKind::Set => "set",
            SpaceKind::Group => "group",
            SpaceKind::QubitRegister => "qubit-register",
            SpaceKind::Trivial => "trivial",
        }
    }
}

/// A typed wire. Two wires connect only when their labels are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpaceLabel {
    kind: SpaceKind,
    name: String,
    dimension: usize,
}

impl SpaceLabel {
    pub fn new(kind: SpaceKind, name: impl Into<String>, dimension: usize) -> Result<Self, DiagramError> {
        let name = name.into();
        let invalid = |reason: String| DiagramError::InvalidSpace { name: name.clone(), reason };
        if dimension == 0 {
            return Err(invalid("dimension must be at least 1".into()));
        }
        match kind {
            SpaceKind::Trivial if dimension != 1 => {
                return Err(invalid(format!("trivial space has dimension 1, got {dimension}")))
            }
            SpaceKind::QubitRegister if !dimension.is_power_of_two() => {
                return Err(invalid(format!("qubit register dimension {dimension} is not a power of two")))
            }
            _ => {}
        }
        Ok(Self { kind, name, dimension })
    }

    pub fn set(name: impl Into<String>, size: usize) -> Result<Self, DiagramError> {
        Self::new(SpaceKind::Set, name, size)
    }

    /// The register of `qubits` qubits, dimension `2^qubits`.
    pub fn qubit_register(name: impl Into<String>, qubits: u32) -> Result<Self, DiagramError> {
        let name = name.into();
        let dim = 1usize.checked_shl(qubits).filter(|_| qubits < usize::BITS).ok_or_else(|| {
            DiagramError::InvalidSpace { name: name.clone(), reason: format!("{qubits} qubits overflow") }
        })?;
        Self::new(SpaceKind::QubitRegister, name, dim)
    }

    pub fn trivial() -> Self {
        Self { kind: SpaceKind::Trivial, name: "I".into(), dimension: 1 }
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn is_trivial(&self) -> bool {
        self.kind == SpaceKind::Trivial
    }

    pub(crate) fn group_space(name: &str, order: usize) -> Self {
        Self { kind: SpaceKind::Group, name: name.to_string(), dimension: order }
    }
}

impl fmt::Display for SpaceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}[{}]", self.name, self.kind.as_str(), self.dimension)
    }
}

/// Drops trivial labels; the one-dimensional space is the empty wire list.
pub(crate) fn wires(labels: impl IntoIterator<Item = SpaceLabel>) -> Vec<SpaceLabel> {
    labels.into_iter().filter(|l| !l.is_trivial()).collect()
}

/// Product of dimensions, or `None` on overflow.
pub fn total_dimension(labels: &[SpaceLabel]) -> Option<usize> {
    labels.iter().try_fold(1usize, |acc, l| acc.checked_mul(l.dimension))
}
