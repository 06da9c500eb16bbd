mod common;

use common::{random_diagram, random_wires, rng, Palette};
use grover_lab::builders::{build_grover_diagram, indicator, register};
use grover_lab::dense::{DenseTensor, ONE};
use grover_lab::sim::{grover_run, OracleFunction, SimLimits};
use grover_lab::tolerance::FUNCTORIALITY;
use grover_lab::{eval, make_generator, Diagram, DiagramError, Generator, SpaceLabel};
use num_complex::Complex64;
use proptest::prelude::*;

fn set(n: usize) -> SpaceLabel {
    SpaceLabel::set("S", n).unwrap()
}

fn gen(g: Generator) -> Diagram {
    make_generator(g).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn random_diagrams_validate(seed in any::<u64>()) {
        let p = Palette::new();
        let mut r = rng(seed);
        let inputs = random_wires(&mut r, &p, 3);
        let d = random_diagram(&mut r, &p, &inputs, 4);
        prop_assert!(d.validate().is_ok());
    }

    #[test]
    fn composition_is_matrix_product(seed in any::<u64>()) {
        let p = Palette::new();
        let mut r = rng(seed);
        let inputs = random_wires(&mut r, &p, 3);
        let a = random_diagram(&mut r, &p, &inputs, 3);
        let b = random_diagram(&mut r, &p, a.outputs(), 3);
        let lhs = eval(&a.compose(&b).unwrap()).unwrap();
        let rhs = eval(&b).unwrap().matmul(&eval(&a).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) <= FUNCTORIALITY, "{}", lhs.max_abs_diff(&rhs));
    }

    #[test]
    fn tensor_is_kronecker_product(seed in any::<u64>()) {
        let p = Palette::new();
        let mut r = rng(seed);
        let ia = random_wires(&mut r, &p, 1);
        let ib = random_wires(&mut r, &p, 1);
        let a = random_diagram(&mut r, &p, &ia, 2);
        let b = random_diagram(&mut r, &p, &ib, 3);
        let t = a.tensor(&b).unwrap();
        prop_assert!(t.validate().is_ok());
        let lhs = eval(&t).unwrap();
        let rhs = eval(&a).unwrap().kron(&eval(&b).unwrap());
        prop_assert!(lhs.max_abs_diff(&rhs) <= FUNCTORIALITY);
    }

    #[test]
    fn interchange_law(seed in any::<u64>()) {
        let p = Palette::new();
        let mut r = rng(seed);
        let ia = random_wires(&mut r, &p, 1);
        let ib = random_wires(&mut r, &p, 1);
        let a = random_diagram(&mut r, &p, &ia, 2);
        let b = random_diagram(&mut r, &p, &ib, 2);
        let c = random_diagram(&mut r, &p, a.outputs(), 2);
        let d = random_diagram(&mut r, &p, b.outputs(), 2);
        let left = a.tensor(&b).unwrap().compose(&c.tensor(&d).unwrap());
        let right = a.compose(&c).unwrap().tensor(&b.compose(&d).unwrap()).unwrap();
        // Tiny bundles can exceed the bound once juxtaposed; only typed pairs count.
        if let Ok(left) = left {
            let diff = eval(&left).unwrap().max_abs_diff(&eval(&right).unwrap());
            prop_assert!(diff <= FUNCTORIALITY, "{diff}");
        }
    }

    #[test]
    fn dagger_is_conjugate_transpose(seed in any::<u64>()) {
        let p = Palette::new();
        let mut r = rng(seed);
        let inputs = random_wires(&mut r, &p, 3);
        let d = random_diagram(&mut r, &p, &inputs, 4);
        let dd = d.dagger();
        prop_assert!(dd.validate().is_ok());
        let diff = eval(&dd).unwrap().max_abs_diff(&eval(&d).unwrap().adjoint());
        prop_assert!(diff <= FUNCTORIALITY, "{diff}");
        let twice = eval(&dd.dagger()).unwrap().max_abs_diff(&eval(&d).unwrap());
        prop_assert!(twice <= FUNCTORIALITY);
    }

    #[test]
    fn composing_with_identity_changes_nothing(seed in any::<u64>()) {
        let p = Palette::new();
        let mut r = rng(seed);
        let inputs = random_wires(&mut r, &p, 2);
        let d = random_diagram(&mut r, &p, &inputs, 3);
        let id = Diagram::identity(d.outputs());
        prop_assert_eq!(eval(&d.compose(&id).unwrap()).unwrap(), eval(&d).unwrap());
        prop_assert_eq!(eval(&d.tensor(&Diagram::empty()).unwrap()).unwrap(), eval(&d).unwrap());
    }
}

#[test]
fn special_algebra_up_to_sixteen() {
    for n in 1..=16 {
        let s = set(n);
        let d = gen(Generator::Comult(s.clone())).compose(&gen(Generator::Mult(s))).unwrap();
        assert_eq!(eval(&d).unwrap(), DenseTensor::identity(n), "|S| = {n}");
    }
}

#[test]
fn frobenius_condition_up_to_eight() {
    for n in 1..=8 {
        let s = set(n);
        let id = || gen(Generator::Identity(s.clone()));
        let lhs = id()
            .tensor(&gen(Generator::Comult(s.clone())))
            .unwrap()
            .compose(&gen(Generator::Mult(s.clone())).tensor(&id()).unwrap())
            .unwrap();
        let rhs = gen(Generator::Mult(s.clone())).compose(&gen(Generator::Comult(s.clone()))).unwrap();
        assert_eq!(eval(&lhs).unwrap(), eval(&rhs).unwrap(), "|S| = {n}");
    }
}

#[test]
fn generator_arities() {
    let d = gen(Generator::Mult(set(2)));
    assert_eq!(d.inputs(), &[set(2), set(2)]);
    assert_eq!(d.outputs(), &[set(2)]);
    assert_eq!(gen(Generator::Identity(SpaceLabel::trivial())), Diagram::empty());
    assert!(matches!(
        make_generator(Generator::Point { space: set(2), element: 3 }),
        Err(DiagramError::InvalidVariant { .. })
    ));
}

#[test]
fn composition_examples() {
    let closed = gen(Generator::Point { space: set(3), element: 0 }).compose(&gen(Generator::Counit(set(3)))).unwrap();
    assert_eq!(eval(&closed).unwrap(), DenseTensor::scalar(ONE));
    match gen(Generator::Unit(set(2))).compose(&gen(Generator::Mult(set(2)))) {
        Err(DiagramError::TypeMismatch { position: 1, .. }) => {}
        other => panic!("{other:?}"),
    }
}

#[test]
fn tensor_examples() {
    let c = |x: f64| Complex64::new(x, 0.0);
    let pair = gen(Generator::Point { space: set(2), element: 0 })
        .tensor(&gen(Generator::Point { space: set(2), element: 1 }))
        .unwrap();
    assert_eq!(eval(&pair).unwrap(), DenseTensor::column(vec![c(0.0), c(1.0), c(0.0), c(0.0)]));
    let units = gen(Generator::Unit(set(2))).tensor(&gen(Generator::Unit(set(2)))).unwrap();
    assert_eq!(eval(&units).unwrap(), DenseTensor::column(vec![c(1.0); 4]));
}

#[test]
fn dagger_examples() {
    assert_eq!(gen(Generator::Unit(set(2))).dagger(), gen(Generator::Counit(set(2))));
    assert_eq!(
        gen(Generator::Point { space: set(4), element: 2 }).dagger(),
        gen(Generator::PointEffect { space: set(4), element: 2 })
    );
}

#[test]
fn mismatched_label_is_one_record() {
    let t = SpaceLabel::set("T", 2).unwrap();
    let d = Diagram::from_slices(
        vec![],
        vec![t.clone()],
        vec![vec![Generator::Unit(set(2))], vec![Generator::Identity(t)]],
    );
    let report = d.validate();
    assert_eq!(report.mismatches.len(), 1);
    assert_eq!(report.mismatches[0].slice, 1);
    assert!(Diagram::empty().validate().is_ok());
}

#[test]
fn grover_diagram_at_three_qubits_matches_simulator() {
    let f = indicator(&register(3).unwrap(), &[0]).unwrap();
    let d = build_grover_diagram(3, &f, 2).unwrap();
    assert!(d.validate().is_ok());
    let probs: Vec<f64> = eval(&d).unwrap().entries().iter().map(|z| z.norm_sqr()).collect();
    let table = grover_run(3, &OracleFunction::new(3, [0]).unwrap(), 2, &SimLimits::default()).unwrap();
    for (a, b) in probs.iter().zip(&table.probabilities) {
        assert!((a - b).abs() <= 1e-10);
    }
}
