//! Local rewriting of sliced diagrams.
//!
//! A match is addressed by `(slice, wire)`: the interface between slices
//! `slice` and `slice + 1`, and the wire offset on that interface where the
//! left-hand side begins. Replacing a match never changes the diagram's
//! boundary, and every normalizing rule strictly lowers [`diagram_weight`].

mod rules;
pub mod soundness;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{identities, slice_outputs, Diagram, Slice};
use crate::generator::Generator;

pub use rules::{regular_character, rule_by_name, rules_catalog, RewriteRule, SideCondition};
pub use soundness::{check_rule_soundness, groups_of_order, rule_instances, SoundnessReport};

use rules::{find, Found, Miss};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum RewriteError {
    #[error("rule {rule} does not match at slice {slice}, wire {wire}")]
    NoMatch { rule: String, slice: usize, wire: usize },
    #[error("rule {rule} matches at slice {slice}, wire {wire} but its side condition fails: {reason}")]
    SideConditionFailed { rule: String, slice: usize, wire: usize, reason: String },
    #[error("unknown rule {0}")]
    UnknownRule(String),
    #[error("step budget of {budget} exhausted")]
    StepBudgetExhausted { budget: usize, partial: Box<RewriteTrace> },
}

impl RewriteError {
    pub fn code(&self) -> &'static str {
        match self {
            RewriteError::NoMatch { .. } => "no-match",
            RewriteError::SideConditionFailed { .. } => "side-condition-failed",
            RewriteError::UnknownRule(_) => "unknown-rule",
            RewriteError::StepBudgetExhausted { .. } => "step-budget-exhausted",
        }
    }
}

/// One applied rewrite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceStep {
    pub rule: String,
    pub slice: usize,
    pub wire: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RewriteTrace {
    pub initial: Diagram,
    pub steps: Vec<TraceStep>,
    pub result: Diagram,
}

impl RewriteTrace {
    /// Re-applies every step to `initial`; the outcome equals `result`.
    pub fn replay(&self) -> Result<Diagram, RewriteError> {
        self.steps.iter().try_fold(self.initial.clone(), |d, step| {
            let rule = rule_by_name(&step.rule).ok_or_else(|| RewriteError::UnknownRule(step.rule.clone()))?;
            apply_rule(&rule, &d, step.slice, step.wire)
        })
    }
}

/// Termination weight of one generator. Identities weigh nothing; the
/// structure maps that rules only move around weigh 1.
pub fn generator_weight(g: &Generator) -> u64 {
    match g {
        Generator::Identity(_) => 0,
        Generator::GroupMult(_) | Generator::Swap(..) => 1,
        Generator::Comult(_) => 3,
        _ => 2,
    }
}

pub fn diagram_weight(d: &Diagram) -> u64 {
    d.slices().iter().flatten().map(generator_weight).sum()
}

fn located(rule: &RewriteRule, d: &Diagram, slice: usize, wire: usize) -> Result<Found, RewriteError> {
    let no_match = || RewriteError::NoMatch { rule: rule.name().to_string(), slice, wire };
    let (Some(upper), Some(lower)) = (d.slices().get(slice), d.slices().get(slice + 1)) else {
        return Err(no_match());
    };
    find(rule, upper, lower, wire).map_err(|miss| match miss {
        Miss::NoMatch => no_match(),
        Miss::SideCondition(reason) => {
            RewriteError::SideConditionFailed { rule: rule.name().to_string(), slice, wire, reason }
        }
    })
}

/// Whether `rule` fires at `(slice, wire)`.
pub fn matches_at(rule: &RewriteRule, d: &Diagram, slice: usize, wire: usize) -> Result<(), RewriteError> {
    located(rule, d, slice, wire).map(|_| ())
}

fn replace(slice: &[Generator], range: std::ops::Range<usize>, with: Slice) -> Slice {
    let mut out = slice[..range.start].to_vec();
    out.extend(with);
    out.extend_from_slice(&slice[range.end..]);
    out
}

fn is_trivial_slice(slice: &[Generator]) -> bool {
    slice.iter().all(Generator::is_identity)
}

/// Replaces the left-hand side of `rule` at `(slice, wire)` by its
/// right-hand side. Slices touched by the rewrite that end up holding only
/// identities are dropped.
pub fn apply_rule(rule: &RewriteRule, d: &Diagram, slice: usize, wire: usize) -> Result<Diagram, RewriteError> {
    let Found { upper, lower, rhs } = located(rule, d, slice, wire)?;
    let old = d.slices();
    let (top, bottom) = (&old[slice], &old[slice + 1]);
    let r = rhs.slices();
    let mut middle: Vec<Slice> = Vec::new();
    let (new_top, new_bottom) = match r.len() {
        0 => (replace(top, upper, identities(rhs.inputs())), replace(bottom, lower, identities(rhs.outputs()))),
        1 => (replace(top, upper, r[0].clone()), replace(bottom, lower, identities(rhs.outputs()))),
        n => {
            let left = slice_outputs(&top[..upper.start]);
            let right = slice_outputs(&top[upper.end..]);
            for inner in &r[1..n - 1] {
                let mut padded = identities(&left);
                padded.extend(inner.iter().cloned());
                padded.extend(identities(&right));
                middle.push(padded);
            }
            (replace(top, upper, r[0].clone()), replace(bottom, lower, r[n - 1].clone()))
        }
    };
    let touched = std::iter::once(new_top).chain(middle).chain(std::iter::once(new_bottom));
    let slices: Vec<Slice> = old[..slice]
        .iter()
        .cloned()
        .chain(touched.filter(|s| !is_trivial_slice(s)))
        .chain(old[slice + 2..].iter().cloned())
        .collect();
    Ok(Diagram::from_slices(d.inputs().to_vec(), d.outputs().to_vec(), slices))
}

/// The first position where some normalizing rule fires, trying rules in
/// catalog order and positions top to bottom, left to right.
pub fn first_redex(d: &Diagram) -> Option<(RewriteRule, usize, usize)> {
    let catalog: Vec<RewriteRule> = rules_catalog().into_iter().filter(RewriteRule::is_normalizing).collect();
    let interfaces: Vec<(usize, usize)> = d
        .slices()
        .windows(2)
        .enumerate()
        .map(|(k, pair)| (k, slice_outputs(&pair[0]).len()))
        .collect();
    for rule in catalog {
        for &(k, width) in &interfaces {
            for w in 0..width {
                if matches_at(&rule, d, k, w).is_ok() {
                    return Some((rule, k, w));
                }
            }
        }
    }
    None
}

/// Rewrites with normalizing rules until none applies. Fails with the
/// partial trace if `max_steps` rewrites were not enough.
pub fn normalize(d: &Diagram, max_steps: usize) -> Result<RewriteTrace, RewriteError> {
    let mut trace = RewriteTrace { initial: d.clone(), steps: Vec::new(), result: d.clone() };
    while let Some((rule, slice, wire)) = first_redex(&trace.result) {
        if trace.steps.len() == max_steps {
            return Err(RewriteError::StepBudgetExhausted { budget: max_steps, partial: Box::new(trace) });
        }
        trace.result = apply_rule(&rule, &trace.result, slice, wire)?;
        trace.steps.push(TraceStep { rule: rule.name().to_string(), slice, wire });
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::ONE;
    use crate::diagram::make_generator;
    use crate::eval::{eval, scalar_of};
    use crate::generator::FunctionBox;
    use crate::group::GroupSpec;
    use crate::space::SpaceLabel;
    use num_complex::Complex64;
    use std::sync::Arc;

    fn s(n: usize) -> SpaceLabel {
        SpaceLabel::set("S", n).unwrap()
    }

    fn rule(name: &str) -> RewriteRule {
        rule_by_name(name).unwrap()
    }

    fn point(space: &SpaceLabel, element: usize) -> Generator {
        Generator::Point { space: space.clone(), element }
    }

    #[test]
    fn copy_then_delete_normalizes_to_nothing() {
        let d = Diagram::from_layers(vec![
            vec![point(&s(2), 1)],
            vec![Generator::Comult(s(2))],
            vec![Generator::Counit(s(2)), Generator::Identity(s(2))],
        ])
        .unwrap();
        let trace = normalize(&d, 100).unwrap();
        let rules: Vec<_> = trace.steps.iter().map(|t| t.rule.as_str()).collect();
        assert_eq!(rules, vec!["copy", "delete"]);
        assert_eq!(trace.result.outputs(), &[s(2)]);
        assert_eq!(trace.result.slices(), &[vec![point(&s(2), 1)]]);
        assert_eq!(trace.replay().unwrap(), trace.result);
    }

    #[test]
    fn delete_of_a_point_leaves_the_empty_diagram() {
        let d = make_generator(point(&s(3), 0)).unwrap().compose(&make_generator(Generator::Counit(s(3))).unwrap()).unwrap();
        let out = apply_rule(&rule("delete"), &d, 0, 0).unwrap();
        assert_eq!(out, Diagram::empty());
    }

    #[test]
    fn counit_of_a_box_output_is_not_a_point() {
        let f = FunctionBox::new(s(2), s(2), vec![1, 0]).unwrap();
        let d = Diagram::from_layers(vec![vec![Generator::FunctionBox(f)], vec![Generator::Counit(s(2))]]).unwrap();
        assert!(matches!(apply_rule(&rule("delete"), &d, 0, 0), Err(RewriteError::SideConditionFailed { .. })));
        assert!(apply_rule(&rule("comonoid-delete"), &d, 0, 0).is_ok());
    }

    #[test]
    fn absent_pattern_is_no_match() {
        let d = Diagram::identity(&[s(2)]);
        assert!(matches!(apply_rule(&rule("copy"), &d, 0, 0), Err(RewriteError::NoMatch { .. })));
    }

    #[test]
    fn distinct_points_pair_to_zero() {
        let d = Diagram::from_layers(vec![vec![point(&s(3), 1)], vec![Generator::PointEffect { space: s(3), element: 2 }]])
            .unwrap();
        let out = apply_rule(&rule("point-inner-product"), &d, 0, 0).unwrap();
        assert_eq!(scalar_of(&out).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn merging_two_dimensional_characters_is_refused() {
        let s3 = Arc::new(GroupSpec::symmetric3());
        let rep = Generator::RepBox { group: s3.clone(), irrep: 2, dimension: 2 };
        let d = Diagram::from_layers(vec![vec![Generator::Identity(s3.space()), rep.clone()], vec![rep]]).unwrap();
        assert!(matches!(apply_rule(&rule("rep-merge"), &d, 0, 0), Err(RewriteError::SideConditionFailed { .. })));
    }

    #[test]
    fn special_law_drops_the_loop() {
        let d = Diagram::from_layers(vec![vec![Generator::Comult(s(3))], vec![Generator::Mult(s(3))]]).unwrap();
        let trace = normalize(&d, 10).unwrap();
        assert_eq!(trace.result.slices().len(), 0);
        assert_eq!(eval(&trace.result).unwrap(), eval(&d).unwrap());
    }

    #[test]
    fn budget_exhaustion_keeps_the_partial_trace() {
        let d = Diagram::from_layers(vec![
            vec![point(&s(2), 1)],
            vec![Generator::Comult(s(2))],
            vec![Generator::Counit(s(2)), Generator::Identity(s(2))],
        ])
        .unwrap();
        match normalize(&d, 1) {
            Err(RewriteError::StepBudgetExhausted { budget: 1, partial }) => assert_eq!(partial.steps.len(), 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn weight_drops_on_every_normalizing_step() {
        let z2 = Arc::new(GroupSpec::cyclic(2).unwrap());
        let f = FunctionBox::new(s(2), z2.space(), vec![0, 1]).unwrap();
        let sign = Generator::RepBox { group: z2.clone(), irrep: 1, dimension: 1 };
        let d = Diagram::from_layers(vec![
            vec![point(&s(2), 1)],
            vec![Generator::Comult(s(2))],
            vec![Generator::Identity(s(2)), Generator::FunctionBox(f)],
            vec![Generator::Identity(s(2)), sign],
        ])
        .unwrap();
        let trace = normalize(&d, 100).unwrap();
        let mut current = trace.initial.clone();
        for step in &trace.steps {
            let next = apply_rule(&rule(&step.rule), &current, step.slice, step.wire).unwrap();
            assert!(diagram_weight(&next) < diagram_weight(&current), "{}", step.rule);
            current = next;
        }
        assert!(eval(&trace.result).unwrap().approx_eq(&eval(&d).unwrap(), 1e-12));
        assert_eq!(eval(&trace.result).unwrap().get(1, 0), -ONE);
    }
}
