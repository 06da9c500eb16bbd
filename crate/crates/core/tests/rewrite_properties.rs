mod common;

use std::sync::Arc;

use common::{random_diagram, random_wires, rng, Palette};
use grover_lab::dense::ONE;
use grover_lab::rewrite::{
    apply_rule, check_rule_soundness, diagram_weight, matches_at, normalize, regular_character, rule_by_name,
    rule_instances, rules_catalog, RewriteError,
};
use grover_lab::tolerance::EVAL_DEFAULT;
use grover_lab::{eval, scalar_of, Diagram, FunctionBox, Generator, GroupSpec, SpaceLabel};
use num_complex::Complex64;
use proptest::prelude::*;

const BUDGET: usize = 10_000;

fn set(n: usize) -> SpaceLabel {
    SpaceLabel::set("S", n).unwrap()
}

fn rule(name: &str) -> grover_lab::rewrite::RewriteRule {
    rule_by_name(name).unwrap()
}

fn sample(seed: u64) -> Diagram {
    let p = Palette::new();
    let mut r = rng(seed);
    let inputs = random_wires(&mut r, &p, 2);
    random_diagram(&mut r, &p, &inputs, 5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn normalization_preserves_the_value(seed in any::<u64>()) {
        let d = sample(seed);
        let trace = normalize(&d, BUDGET).unwrap();
        prop_assert!(trace.result.validate().is_ok());
        prop_assert_eq!(trace.result.inputs(), d.inputs());
        prop_assert_eq!(trace.result.outputs(), d.outputs());
        let diff = eval(&trace.result).unwrap().max_abs_diff(&eval(&d).unwrap());
        prop_assert!(diff <= EVAL_DEFAULT, "{diff}");
    }

    #[test]
    fn normalization_is_deterministic_and_replayable(seed in any::<u64>()) {
        let d = sample(seed);
        let a = normalize(&d, BUDGET).unwrap();
        let b = normalize(&d, BUDGET).unwrap();
        prop_assert_eq!(&a.steps, &b.steps);
        prop_assert_eq!(&a.result, &b.result);
        prop_assert_eq!(a.replay().unwrap(), a.result);
    }

    #[test]
    fn every_step_lowers_the_weight(seed in any::<u64>()) {
        let d = sample(seed);
        let trace = normalize(&d, BUDGET).unwrap();
        let mut current = d;
        for step in &trace.steps {
            let next = apply_rule(&rule(&step.rule), &current, step.slice, step.wire).unwrap();
            prop_assert!(diagram_weight(&next) < diagram_weight(&current), "{}", step.rule);
            current = next;
        }
        prop_assert!(trace.steps.len() as u64 <= diagram_weight(&trace.initial));
    }

    #[test]
    fn normal_forms_are_fixed_points(seed in any::<u64>()) {
        let result = normalize(&sample(seed), BUDGET).unwrap().result;
        let again = normalize(&result, BUDGET).unwrap();
        prop_assert!(again.steps.is_empty());
    }
}

#[test]
fn every_rule_shrinks_its_fragment() {
    for r in rules_catalog().into_iter().filter(|r| r.is_normalizing()) {
        for n in 1..=4 {
            for lhs in rule_instances(&r, n) {
                let rhs = apply_rule(&r, &lhs, 0, 0).unwrap();
                let before = (lhs.slices().len(), lhs.generator_count());
                let after = (rhs.slices().len(), rhs.generator_count());
                assert!(after < before, "{}: {before:?} -> {after:?}", r.name());
            }
        }
    }
}

#[test]
fn catalog_is_sound() {
    for r in rules_catalog() {
        let report = check_rule_soundness(&r, &[1, 2, 3, 4, 8]);
        assert!(report.pass, "{report:?}");
        assert!(report.max_deviation <= 1e-12);
    }
}

#[test]
fn misaligned_copy_is_no_match() {
    let s = set(2);
    let d = Diagram::from_layers(vec![
        vec![Generator::Point { space: s.clone(), element: 0 }, Generator::Identity(s.clone())],
        vec![Generator::Identity(s.clone()), Generator::Comult(s.clone())],
    ])
    .unwrap();
    match apply_rule(&rule("copy"), &d, 0, 0) {
        Err(e @ RewriteError::NoMatch { .. }) => assert_eq!(e.code(), "no-match"),
        other => panic!("{other:?}"),
    }
    assert!(matches_at(&rule("copy"), &d, 0, 1).is_err());
}

#[test]
fn copy_requires_a_point() {
    let s = set(2);
    let d = Diagram::from_layers(vec![vec![Generator::Unit(s.clone())], vec![Generator::Comult(s)]]).unwrap();
    match apply_rule(&rule("copy"), &d, 0, 0) {
        Err(e @ RewriteError::SideConditionFailed { .. }) => assert_eq!(e.code(), "side-condition-failed"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn regular_character_at_the_identity_of_z2() {
    let g = Arc::new(GroupSpec::cyclic(2).unwrap());
    let d = Diagram::from_layers(vec![
        vec![Generator::Point { space: g.space(), element: g.identity_index() }],
        vec![regular_character(&g)],
    ])
    .unwrap();
    assert_eq!(scalar_of(&d).unwrap(), Complex64::new(2.0, 0.0));
    let out = apply_rule(&rule("regular-character"), &d, 0, 0).unwrap();
    assert_eq!(scalar_of(&out).unwrap(), Complex64::new(2.0, 0.0));
    let other = Diagram::from_layers(vec![
        vec![Generator::Point { space: g.space(), element: 1 }],
        vec![regular_character(&g)],
    ])
    .unwrap();
    assert_eq!(scalar_of(&apply_rule(&rule("regular-character"), &other, 0, 0).unwrap()).unwrap(), Complex64::new(0.0, 0.0));
}

#[test]
fn comonoid_copy_with_identity_function_is_exact() {
    let s = set(3);
    let f = FunctionBox::identity(s.clone());
    let d = Diagram::from_layers(vec![
        vec![Generator::Comult(s)],
        vec![Generator::FunctionBox(f.clone()), Generator::FunctionBox(f)],
    ])
    .unwrap();
    let out = apply_rule(&rule("comonoid-copy"), &d, 0, 0).unwrap();
    assert_eq!(eval(&out).unwrap().max_abs_diff(&eval(&d).unwrap()), 0.0);
}

#[test]
fn inner_products_of_points_are_exact() {
    let s = set(4);
    for x in 0..4 {
        for y in 0..4 {
            let d = Diagram::from_layers(vec![
                vec![Generator::Point { space: s.clone(), element: y }],
                vec![Generator::PointEffect { space: s.clone(), element: x }],
            ])
            .unwrap();
            let out = apply_rule(&rule("point-inner-product"), &d, 0, 0).unwrap();
            let expected = if x == y { ONE } else { Complex64::new(0.0, 0.0) };
            assert_eq!(scalar_of(&out).unwrap(), expected);
        }
    }
}

#[test]
fn copy_then_delete_vanishes() {
    let s = set(2);
    let d = Diagram::from_layers(vec![
        vec![Generator::Point { space: s.clone(), element: 1 }],
        vec![Generator::Comult(s.clone())],
        vec![Generator::Counit(s.clone()), Generator::Counit(s)],
    ])
    .unwrap();
    let trace = normalize(&d, BUDGET).unwrap();
    let names: Vec<&str> = trace.steps.iter().map(|s| s.rule.as_str()).collect();
    assert_eq!(names, ["copy", "delete", "delete"]);
    assert_eq!(trace.result, Diagram::empty());
}

#[test]
fn exhausted_budget_reports_partial_trace() {
    let s = set(2);
    let d = Diagram::from_layers(vec![
        vec![Generator::Point { space: s.clone(), element: 1 }],
        vec![Generator::Comult(s.clone())],
        vec![Generator::Counit(s.clone()), Generator::Counit(s)],
    ])
    .unwrap();
    match normalize(&d, 1) {
        Err(RewriteError::StepBudgetExhausted { budget: 1, partial }) => {
            assert_eq!(partial.steps.len(), 1);
            assert_eq!(partial.replay().unwrap(), partial.result);
        }
        other => panic!("{other:?}"),
    }
}
