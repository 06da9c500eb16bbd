//! The closed-form unmarked amplitude, its claimed bounds, and its comparison
//! with exact simulation.
//!
//! For a register of size `N` after `k` rounds the closed form is
//!
//! ```text
//! A = (1/N)^k · [(1−2/N)^{k−1}(N−2)^{k−1} − (2/N)(1−2/N)^{k−1}(N−2)^k]
//!   = (1/N)^k · (1−2/N)^{k−1} · (N−2)^{k−1} · (−1 + 4/N)
//! ```
//!
//! with real `k`, by default `√N`. `A²` is compared with, never assumed equal
//! to, the probability of measuring one unmarked element.

use num_complex::Complex64;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::builders::{build_grover_diagram, indicator, register, sigma_sum_diagram};
use crate::eval::{eval, scalar_of};
use crate::logspace::{self, Precise};
use crate::sim::{closed_form_marked_prob, grover_run, optimal_iterations, OracleFunction, SimError, SimLimits};
use crate::space::SpaceLabel;
use crate::{DiagramError, EvalError};

/// Largest register the comparison also evaluates as a diagram.
pub const DIAGRAM_MAX_QUBITS: u32 = 5;

/// Largest register the claims sweep simulates; above it the marked
/// probability comes from the closed form.
pub const CLAIMS_SIMULATION_MAX_QUBITS: u32 = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("marked count {marked} must satisfy 1 ≤ m < N = {size}")]
    InvalidCounts { size: usize, marked: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl AnalysisError {
    pub fn code(&self) -> &'static str {
        match self {
            AnalysisError::InvalidCounts { .. } => "invalid-counts",
            AnalysisError::Domain(_) => "domain-error",
            AnalysisError::InvalidRange(_) => "invalid-range",
            AnalysisError::Sim(e) => e.code(),
            AnalysisError::Diagram(e) => e.code(),
            AnalysisError::Eval(e) => e.code(),
        }
    }
}

/// `Σ_x (−1)^{f(x)} = N − 2m` for `m` marked elements.
pub fn sigma_sum(size: usize, marked_count: usize) -> Result<i64, AnalysisError> {
    if marked_count == 0 || marked_count >= size {
        return Err(AnalysisError::InvalidCounts { size, marked: marked_count });
    }
    Ok(size as i64 - 2 * marked_count as i64)
}

/// The same sum read off the closed diagram `u† ∘ σ ∘ u`, marking the first
/// `marked_count` elements.
pub fn sigma_sum_by_diagram(size: usize, marked_count: usize) -> Result<Complex64, AnalysisError> {
    if marked_count == 0 || marked_count >= size {
        return Err(AnalysisError::InvalidCounts { size, marked: marked_count });
    }
    let space = SpaceLabel::set("S", size)?;
    let marked: Vec<usize> = (0..marked_count).collect();
    let f = indicator(&space, &marked)?;
    Ok(scalar_of(&sigma_sum_diagram(&f)?)?)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PaperAmplitude {
    #[serde(rename = "N")]
    pub set_size: f64,
    pub k: f64,
    pub two_summand_value: f64,
    pub simplified_value: f64,
    /// `|two-summand − simplified| / |simplified|`, in extended precision.
    pub relative_gap: f64,
    /// `ln |A|`; absent when `A = 0`.
    pub ln_abs_value: Option<f64>,
}

/// Evaluates both forms of `A` in log space at extended precision.
pub fn paper_amplitude(set_size: f64, k: f64) -> Result<PaperAmplitude, AnalysisError> {
    if !set_size.is_finite() || set_size <= 2.0 {
        return Err(AnalysisError::Domain(format!("N must be a finite number above 2, got {set_size}")));
    }
    if !k.is_finite() {
        return Err(AnalysisError::Domain(format!("k must be finite, got {k}")));
    }
    let mut p = Precise::new();
    let n = p.num(set_size);
    let kk = p.num(k);
    let km1 = logspace::sub(&kk, &p.num(1.0));
    let two = p.num(2.0);
    let four = p.num(4.0);
    let one = p.num(1.0);
    let two_over_n = logspace::div(&two, &n);
    let ln_n = p.ln(&n);
    let ln_shrink = p.ln(&logspace::sub(&one, &two_over_n));
    let ln_nm2 = p.ln(&logspace::sub(&n, &two));
    // ln[(1/N)^k (1−2/N)^{k−1} (N−2)^{k−1}]
    let ln_common = logspace::sub(
        &logspace::mul(&km1, &logspace::add(&ln_shrink, &ln_nm2)),
        &logspace::mul(&kk, &ln_n),
    );

    let first = p.exp(&ln_common);
    let ln_second = logspace::add(&ln_common, &logspace::add(&p.ln(&two_over_n), &ln_nm2));
    let second = p.exp(&ln_second);
    let two_summand = logspace::cancel(&first, &second);

    let factor = logspace::sub(&logspace::div(&four, &n), &one);
    let (simplified, ln_abs) = if factor.is_zero() {
        (p.num(0.0), None)
    } else {
        let ln_abs = logspace::add(&ln_common, &p.ln(&logspace::abs(&factor)));
        let mut v = p.exp(&ln_abs);
        if factor.is_negative() {
            v.inv_sign();
        }
        (v, Some(ln_abs))
    };

    let gap = logspace::abs(&logspace::sub(&two_summand, &simplified));
    let relative_gap = if gap.is_zero() {
        0.0
    } else if simplified.is_zero() {
        f64::INFINITY
    } else {
        let r = logspace::div(&gap, &logspace::abs(&simplified));
        p.f64_of(&r)
    };
    Ok(PaperAmplitude {
        set_size,
        k,
        two_summand_value: p.f64_of(&two_summand),
        simplified_value: p.f64_of(&simplified),
        relative_gap,
        ln_abs_value: ln_abs.map(|l| p.f64_of(&l)),
    })
}

/// [`paper_amplitude`] at the default exponent `k = √N`.
pub fn paper_amplitude_at_sqrt(set_size: f64) -> Result<PaperAmplitude, AnalysisError> {
    paper_amplitude(set_size, set_size.sqrt())
}

/// `simulator / formula`, with `inf` when only the formula vanishes and
/// `nan` when both do.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Ratio {
    Finite(f64),
    Infinite,
    Undefined,
}

impl Ratio {
    pub fn of(numerator: f64, denominator: f64) -> Self {
        match (numerator == 0.0, denominator == 0.0) {
            (true, true) => Ratio::Undefined,
            (false, true) => Ratio::Infinite,
            _ => Ratio::Finite(numerator / denominator),
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Ratio::Finite(x) => x,
            Ratio::Infinite => f64::INFINITY,
            Ratio::Undefined => f64::NAN,
        }
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Ratio::Finite(x) => s.serialize_f64(*x),
            Ratio::Infinite => s.serialize_str("inf"),
            Ratio::Undefined => s.serialize_str("nan"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MarkedSource {
    Simulator,
    ClosedForm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClaimRecord {
    pub n: u32,
    pub k: f64,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "A_squared")]
    pub a_squared: f64,
    /// `(2^n − 1)·A²`.
    pub total_unmarked: f64,
    pub paper_iterations: usize,
    pub simulator_marked: f64,
    pub simulator_unmarked_each: f64,
    pub marked_source: MarkedSource,
    pub discrepancy_ratio: Ratio,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClaimVerdicts {
    /// `A² < 1/2` at every `n`.
    pub a_squared_below_half: Verdict,
    /// `(2^n − 1)·A² < 1/2` at every `n`.
    pub total_unmarked_below_half: Verdict,
    /// `(2^n − 1)·A²` at `n_max` is below its value at `max(n_min, 6)`.
    pub total_unmarked_trend: Verdict,
    /// `(2^n − 1)·A²` drops from `n` to `n + 2` for every `n ≥ 6` in range.
    pub total_unmarked_decreasing: Verdict,
    /// Marked probability at `round(√(2^n))` rounds is at least 1/2.
    pub marked_at_least_half: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClaimsReport {
    pub n_min: u32,
    pub n_max: u32,
    pub records: Vec<ClaimRecord>,
    pub verdicts: ClaimVerdicts,
}

/// Sweeps `n` over `[n_min, n_max]`, simulating registers up to
/// `simulate_up_to` qubits.
pub fn paper_claims_check(
    n_min: u32,
    n_max: u32,
    simulate_up_to: u32,
    limits: &SimLimits,
) -> Result<ClaimsReport, AnalysisError> {
    if !(2 <= n_min && n_min <= n_max && n_max <= 64) {
        return Err(AnalysisError::InvalidRange(format!("need 2 ≤ n_min ≤ n_max ≤ 64, got [{n_min}, {n_max}]")));
    }
    let sim_cap = simulate_up_to.min(limits.max_qubits);
    let mut records = Vec::new();
    for n in n_min..=n_max {
        let size = 2f64.powi(n as i32);
        let amp = paper_amplitude_at_sqrt(size)?;
        let a = amp.simplified_value;
        let a_squared = a * a;
        let total_unmarked = (size - 1.0) * a_squared;
        let k = optimal_iterations(n).paper_mode;
        let (marked, source) = if n <= sim_cap {
            let f = OracleFunction::new(n, [0])?;
            (grover_run(n, &f, k, limits)?.marked_probability, MarkedSource::Simulator)
        } else {
            (closed_form_marked_prob(n, k), MarkedSource::ClosedForm)
        };
        let unmarked_each = (1.0 - marked) / (size - 1.0);
        records.push(ClaimRecord {
            n,
            k: amp.k,
            a,
            a_squared,
            total_unmarked,
            paper_iterations: k,
            simulator_marked: marked,
            simulator_unmarked_each: unmarked_each,
            marked_source: source,
            discrepancy_ratio: Ratio::of(unmarked_each, a_squared),
        });
    }
    let total_at = |n: u32| records.iter().find(|r| r.n == n).map(|r| r.total_unmarked);
    let trend_start = n_min.max(6);
    let total_unmarked_trend = match (total_at(trend_start), total_at(n_max)) {
        (Some(start), Some(end)) if n_max > trend_start => Verdict::from_bool(end < start),
        _ => Verdict::NotApplicable,
    };
    let steps: Vec<bool> = (trend_start..=n_max.saturating_sub(2))
        .filter_map(|n| Some(total_at(n + 2)? < total_at(n)?))
        .collect();
    let total_unmarked_decreasing =
        if steps.is_empty() { Verdict::NotApplicable } else { Verdict::from_bool(steps.iter().all(|&b| b)) };
    let verdicts = ClaimVerdicts {
        a_squared_below_half: Verdict::from_bool(records.iter().all(|r| r.a_squared < 0.5)),
        total_unmarked_below_half: Verdict::from_bool(records.iter().all(|r| r.total_unmarked < 0.5)),
        total_unmarked_trend,
        total_unmarked_decreasing,
        marked_at_least_half: Verdict::from_bool(records.iter().all(|r| r.simulator_marked >= 0.5)),
    };
    Ok(ClaimsReport { n_min, n_max, records, verdicts })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KMode {
    Paper,
    Optimal,
}

impl KMode {
    pub fn iterations(self, n: u32) -> usize {
        let it = optimal_iterations(n);
        match self {
            KMode::Paper => it.paper_mode,
            KMode::Optimal => it.optimal_mode,
        }
    }
}

impl std::str::FromStr for KMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(KMode::Paper),
            "optimal" => Ok(KMode::Optimal),
            _ => Err(format!("unknown k mode '{s}' (expected paper or optimal)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagramSide {
    pub marked_probability: f64,
    pub unmarked_each: f64,
    /// Largest probability difference from the simulator over all elements.
    pub max_deviation_from_simulator: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub n: u32,
    pub k_mode: KMode,
    pub k: usize,
    pub marked: usize,
    pub simulator_marked: f64,
    pub simulator_unmarked_each: f64,
    /// Absent above [`DIAGRAM_MAX_QUBITS`].
    pub diagram: Option<DiagramSide>,
    pub diagram_skipped: bool,
    pub formula: PaperAmplitude,
    #[serde(rename = "formula_A_squared")]
    pub formula_a_squared: f64,
    pub discrepancy_ratio: Ratio,
}

/// Simulator, diagram evaluation and the closed form side by side for one
/// marked element.
pub fn compare(n: u32, k_mode: KMode, marked: usize, limits: &SimLimits) -> Result<ComparisonReport, AnalysisError> {
    let f = OracleFunction::new(n, [marked])?;
    let k = k_mode.iterations(n);
    let table = grover_run(n, &f, k, limits)?;
    let diagram = if n <= DIAGRAM_MAX_QUBITS {
        let space = register(n)?;
        let d = build_grover_diagram(n, &indicator(&space, &[marked])?, k)?;
        let probs: Vec<f64> = eval(&d)?.entries().iter().map(Complex64::norm_sqr).collect();
        let max_deviation_from_simulator =
            probs.iter().zip(&table.probabilities).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let unmarked_each = probs.iter().enumerate().filter(|&(x, _)| x != marked).map(|(_, &p)| p).fold(0.0, f64::max);
        Some(DiagramSide { marked_probability: probs[marked], unmarked_each, max_deviation_from_simulator })
    } else {
        None
    };
    let formula = paper_amplitude_at_sqrt(f.size() as f64)?;
    let formula_a_squared = formula.simplified_value * formula.simplified_value;
    Ok(ComparisonReport {
        n,
        k_mode,
        k,
        marked,
        simulator_marked: table.marked_probability,
        simulator_unmarked_each: table.max_unmarked_probability,
        diagram_skipped: diagram.is_none(),
        diagram,
        discrepancy_ratio: Ratio::of(table.max_unmarked_probability, formula_a_squared),
        formula,
        formula_a_squared,
    })
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    #[test]
    fn sigma_sum_examples() {
        assert_eq!(sigma_sum(8, 1).unwrap(), 6);
        assert_eq!(sigma_sum(4, 2).unwrap(), 0);
        assert_eq!(sigma_sum(16, 1).unwrap(), 14);
        assert_eq!(sigma_sum_by_diagram(16, 1).unwrap(), Complex64::new(14.0, 0.0));
        assert!(matches!(sigma_sum(4, 0), Err(AnalysisError::InvalidCounts { .. })));
        assert!(matches!(sigma_sum(4, 4), Err(AnalysisError::InvalidCounts { .. })));
    }

    #[test]
    fn amplitude_vanishes_at_four() {
        let a = paper_amplitude(4.0, 2.0).unwrap();
        assert_eq!(a.simplified_value, 0.0);
        assert_eq!(a.two_summand_value, 0.0);
        assert_eq!(a.relative_gap, 0.0);
        assert_eq!(a.ln_abs_value, None);
    }

    #[test]
    fn amplitude_at_sixteen() {
        // 80-digit reference evaluation.
        let a = paper_amplitude(16.0, 4.0).unwrap();
        assert!((a.simplified_value + 0.021037280559539794921875).abs() < 1e-17);
        assert!(a.relative_gap < 1e-12);
    }

    #[test]
    fn small_sizes_are_outside_the_domain() {
        assert!(matches!(paper_amplitude(2.0, 1.0), Err(AnalysisError::Domain(_))));
        assert!(matches!(paper_amplitude(f64::NAN, 1.0), Err(AnalysisError::Domain(_))));
    }

    #[test]
    fn ratio_conventions() {
        assert_eq!(Ratio::of(0.25, 0.0), Ratio::Infinite);
        assert_eq!(Ratio::of(0.0, 0.0), Ratio::Undefined);
        assert_eq!(Ratio::of(1.0, 4.0), Ratio::Finite(0.25));
        assert_eq!(serde_json::to_string(&Ratio::Infinite).unwrap(), "\"inf\"");
    }

    #[test]
    fn comparison_at_two_qubits() {
        let r = compare(2, KMode::Paper, 0, &SimLimits::default()).unwrap();
        assert_eq!(r.k, 2);
        assert!((r.simulator_unmarked_each - 0.25).abs() < 1e-15);
        assert_eq!(r.formula_a_squared, 0.0);
        assert_eq!(r.discrepancy_ratio, Ratio::Infinite);
        assert!(r.diagram.unwrap().max_deviation_from_simulator < 1e-10);
    }

    #[test]
    fn bad_range_is_rejected() {
        let l = SimLimits::default();
        assert!(matches!(paper_claims_check(1, 4, 16, &l), Err(AnalysisError::InvalidRange(_))));
        assert!(matches!(paper_claims_check(5, 4, 16, &l), Err(AnalysisError::InvalidRange(_))));
        assert!(matches!(paper_claims_check(2, 65, 16, &l), Err(AnalysisError::InvalidRange(_))));
    }
}
