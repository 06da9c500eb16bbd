//! Exact state-vector simulation of the Grover circuit.

use std::collections::BTreeSet;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

/// Largest register simulated unless overridden.
pub const DEFAULT_MAX_QUBITS: u32 = 24;

/// Environment variable overriding [`DEFAULT_MAX_QUBITS`].
pub const MAX_QUBITS_ENV: &str = "GROVER_LAB_MAX_QUBITS";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("{n} qubits exceed the simulator cap of {cap}")]
    CapExceeded { n: u32, cap: u32 },
    #[error("qubit count must be at least 1")]
    InvalidQubits,
    #[error("invalid oracle: {0}")]
    InvalidOracle(String),
    #[error("dimension mismatch: expected {expected} amplitudes, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

impl SimError {
    pub fn code(&self) -> &'static str {
        match self {
            SimError::CapExceeded { .. } => "cap-exceeded",
            SimError::InvalidQubits => "invalid-n",
            SimError::InvalidOracle(_) => "invalid-f",
            SimError::DimensionMismatch { .. } => "dimension-mismatch",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SimLimits {
    pub max_qubits: u32,
}

impl Default for SimLimits {
    fn default() -> Self {
        Self { max_qubits: DEFAULT_MAX_QUBITS }
    }
}

impl SimLimits {
    fn check(&self, n: u32) -> Result<(), SimError> {
        if n == 0 {
            Err(SimError::InvalidQubits)
        } else if n > self.max_qubits {
            Err(SimError::CapExceeded { n, cap: self.max_qubits })
        } else {
            Ok(())
        }
    }
}

/// Indicator of a non-empty set of marked elements of `[0, 2^n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleFunction {
    n: u32,
    marked: BTreeSet<usize>,
}

impl OracleFunction {
    pub fn new(n: u32, marked: impl IntoIterator<Item = usize>) -> Result<Self, SimError> {
        if n == 0 || n >= usize::BITS {
            return Err(SimError::InvalidQubits);
        }
        let marked: BTreeSet<usize> = marked.into_iter().collect();
        let size = 1usize << n;
        if marked.is_empty() {
            return Err(SimError::InvalidOracle("no element is marked".into()));
        }
        if let Some(&x) = marked.iter().find(|&&x| x >= size) {
            return Err(SimError::InvalidOracle(format!("marked element {x} is not below 2^{n} = {size}")));
        }
        Ok(Self { n, marked })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn marked(&self) -> &BTreeSet<usize> {
        &self.marked
    }

    pub fn is_marked(&self, x: usize) -> bool {
        self.marked.contains(&x)
    }

    pub fn size(&self) -> usize {
        1 << self.n
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleMode {
    /// `|x⟩ ↦ (−1)^{f(x)}|x⟩`.
    Phase,
    /// `|x⟩|y⟩ ↦ |x⟩|y ⊕ f(x)⟩` on an ancilla prepared in `|−⟩`.
    Ancilla,
}

impl OracleMode {
    pub fn as_str(self) -> &'static str {
        match self {
            OracleMode::Phase => "phase",
            OracleMode::Ancilla => "ancilla",
        }
    }
}

impl fmt::Display for OracleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OracleMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "phase" => Ok(OracleMode::Phase),
            "ancilla" => Ok(OracleMode::Ancilla),
            _ => Err(format!("unknown oracle mode '{s}' (expected phase or ancilla)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: u32,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(n: u32, amplitudes: Vec<Complex64>) -> Result<Self, SimError> {
        if n == 0 || n >= usize::BITS {
            return Err(SimError::InvalidQubits);
        }
        let expected = 1usize << n;
        if amplitudes.len() != expected {
            return Err(SimError::DimensionMismatch { expected, found: amplitudes.len() });
        }
        Ok(Self { n, amplitudes })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(Complex64::norm_sqr).collect()
    }
}

/// `H^{⊗n}|0⟩`.
pub fn uniform_state(n: u32, limits: &SimLimits) -> Result<StateVector, SimError> {
    limits.check(n)?;
    let size = 1usize << n;
    let a = Complex64::new(1.0 / (size as f64).sqrt(), 0.0);
    StateVector::new(n, vec![a; size])
}

pub fn apply_oracle(s: &StateVector, f: &OracleFunction, mode: OracleMode) -> Result<StateVector, SimError> {
    if s.n != f.n {
        return Err(SimError::DimensionMismatch { expected: f.size(), found: s.amplitudes.len() });
    }
    let amplitudes = match mode {
        OracleMode::Phase => s
            .amplitudes
            .iter()
            .enumerate()
            .map(|(x, &a)| if f.is_marked(x) { -a } else { a })
            .collect(),
        OracleMode::Ancilla => {
            // Register ⊗ ancilla, ancilla as the fast index.
            let mut joint: Vec<Complex64> =
                s.amplitudes.iter().flat_map(|&a| [a * FRAC_1_SQRT_2, -a * FRAC_1_SQRT_2]).collect();
            for x in f.marked.iter() {
                joint.swap(2 * x, 2 * x + 1);
            }
            joint.chunks_exact(2).map(|c| (c[0] - c[1]) * FRAC_1_SQRT_2).collect()
        }
    };
    Ok(StateVector { n: s.n, amplitudes })
}

/// Inversion about the mean, `a_x ↦ 2·mean − a_x`.
pub fn apply_diffusion(s: &StateVector) -> StateVector {
    let mean: Complex64 = s.amplitudes.iter().sum::<Complex64>() / s.amplitudes.len() as f64;
    StateVector { n: s.n, amplitudes: s.amplitudes.iter().map(|&a| 2.0 * mean - a).collect() }
}

/// The register after `k` oracle-then-diffusion rounds from the uniform state.
pub fn grover_state(f: &OracleFunction, k: usize, mode: OracleMode, limits: &SimLimits) -> Result<StateVector, SimError> {
    let mut s = uniform_state(f.n, limits)?;
    for _ in 0..k {
        s = apply_diffusion(&apply_oracle(&s, f, mode)?);
    }
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbabilityTable {
    pub n: u32,
    pub probabilities: Vec<f64>,
    pub marked_probability: f64,
    pub max_unmarked_probability: f64,
}

impl ProbabilityTable {
    pub fn from_probabilities(f: &OracleFunction, probabilities: Vec<f64>) -> Self {
        let marked_probability = f.marked.iter().map(|&x| probabilities[x]).sum();
        let max_unmarked_probability = probabilities
            .iter()
            .enumerate()
            .filter(|(x, _)| !f.is_marked(*x))
            .map(|(_, &p)| p)
            .fold(0.0, f64::max);
        Self { n: f.n, probabilities, marked_probability, max_unmarked_probability }
    }
}

pub fn grover_run(n: u32, f: &OracleFunction, k: usize, limits: &SimLimits) -> Result<ProbabilityTable, SimError> {
    grover_run_with(n, f, k, OracleMode::Phase, limits)
}

pub fn grover_run_with(
    n: u32,
    f: &OracleFunction,
    k: usize,
    mode: OracleMode,
    limits: &SimLimits,
) -> Result<ProbabilityTable, SimError> {
    if n != f.n {
        return Err(SimError::DimensionMismatch { expected: 1 << n, found: f.size() });
    }
    let s = grover_state(f, k, mode, limits)?;
    Ok(ProbabilityTable::from_probabilities(f, s.probabilities()))
}

/// `sin²((2k+1)θ)` with `sin θ = 2^{−n/2}`, for one marked element.
pub fn closed_form_marked_prob(n: u32, k: usize) -> f64 {
    let theta = (0.5f64).powf(n as f64 / 2.0).asin();
    ((2 * k + 1) as f64 * theta).sin().powi(2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Iterations {
    /// `round(√(2^n))`.
    pub paper_mode: usize,
    /// `floor((π/4)·√(2^n))`.
    pub optimal_mode: usize,
}

pub fn optimal_iterations(n: u32) -> Iterations {
    let root = (2f64).powf(n as f64 / 2.0);
    Iterations {
        paper_mode: (root.round() as usize).max(1),
        optimal_mode: ((std::f64::consts::FRAC_PI_4 * root).floor() as usize).max(1),
    }
}
