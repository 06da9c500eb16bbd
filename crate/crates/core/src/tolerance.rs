//! Comparison tolerances used across the crate and its test suites.

/// Rewrite-rule soundness: max entrywise |eval(lhs) − eval(rhs)|.
pub const RULE_SOUNDNESS: f64 = 1e-12;

/// Default tolerance for comparing evaluated tensors.
pub const EVAL_DEFAULT: f64 = 1e-10;

/// Unitarity of simulator steps and phase/ancilla oracle agreement.
pub const UNITARITY: f64 = 1e-12;

/// Simulator against the `sin²((2k+1)θ)` closed form.
pub const CLOSED_FORM: f64 = 1e-10;

/// Simulator against explicit dense matrix iteration.
pub const BRUTE_FORCE: f64 = 1e-12;

/// Diagram evaluation against the simulator.
pub const DIAGRAM_VS_SIMULATOR: f64 = 1e-10;

/// Relative gap between the two algebraic forms of the unmarked amplitude.
pub const AMPLITUDE_FORMS_RELATIVE: f64 = 1e-12;

/// Orthogonality of supplied character tables.
pub const CHARACTER_ORTHOGONALITY: f64 = 1e-9;

/// Functoriality and interchange laws on evaluated diagrams.
pub const FUNCTORIALITY: f64 = 1e-12;
