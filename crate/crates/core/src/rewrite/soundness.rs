//! Semantic checks of rules: every rewrite must preserve the dense value.
//!
//! Instances are built for each requested size and pushed through
//! [`apply_rule`], so the matcher and the splice are exercised along with the
//! right-hand side itself.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::rules::RuleKind;
use super::{apply_rule, RewriteRule};
use crate::diagram::Diagram;
use crate::eval::eval;
use crate::generator::{FunctionBox, Generator};
use crate::group::GroupSpec;
use crate::space::SpaceLabel;
use crate::tolerance;

/// Sizes up to this bound enumerate every function; larger ones sample.
const EXHAUSTIVE_FUNCTION_SIZE: usize = 3;
const RANDOM_FUNCTIONS: usize = 100;
const SEED: u64 = 0x5eed_0ff1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SoundnessReport {
    pub rule: String,
    pub instantiations: usize,
    pub max_deviation: f64,
    pub pass: bool,
    /// Instances whose rewrite could not be applied or evaluated.
    pub errors: Vec<String>,
}

struct Instance {
    label: String,
    lhs: Diagram,
}

fn layers(slices: Vec<Vec<Generator>>) -> Diagram {
    Diagram::from_layers(slices).expect("instances are well-typed")
}

fn set(n: usize) -> SpaceLabel {
    SpaceLabel::set("S", n).expect("positive size")
}

fn codomain(n: usize) -> SpaceLabel {
    SpaceLabel::set("T", n).expect("positive size")
}

/// Groups of order `n` used for instantiation.
pub fn groups_of_order(n: usize) -> Vec<Arc<GroupSpec>> {
    let mut out = vec![Arc::new(GroupSpec::cyclic(n).expect("cyclic groups exist"))];
    let z = |k| GroupSpec::cyclic(k).expect("cyclic groups exist");
    match n {
        4 => out.push(Arc::new(GroupSpec::direct_product(&z(2), &z(2)).expect("product of groups"))),
        6 => out.push(Arc::new(GroupSpec::symmetric3())),
        8 => out.push(Arc::new(GroupSpec::direct_product(&z(2), &z(4)).expect("product of groups"))),
        _ => {}
    }
    out
}

/// Functions `S → T` with `|S| = |T| = n`: all of them when `n` is small,
/// otherwise a fixed pseudo-random sample.
fn functions(n: usize) -> Vec<FunctionBox> {
    let make = |table: Vec<usize>| FunctionBox::new(set(n), codomain(n), table).expect("tables are in range");
    if n <= EXHAUSTIVE_FUNCTION_SIZE {
        let count = n.pow(n as u32);
        (0..count)
            .map(|mut code| {
                make((0..n)
                    .map(|_| {
                        let v = code % n;
                        code /= n;
                        v
                    })
                    .collect())
            })
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ n as u64);
        (0..RANDOM_FUNCTIONS).map(|_| make((0..n).map(|_| rng.gen_range(0..n)).collect())).collect()
    }
}

fn instances(kind: RuleKind, n: usize) -> Vec<Instance> {
    let s = set(n);
    let point = |e: usize| Generator::Point { space: s.clone(), element: e };
    let id = Generator::Identity(s.clone());
    let one = |lhs: Diagram| vec![Instance { label: format!("|S|={n}"), lhs }];
    match kind {
        RuleKind::Copy | RuleKind::Delete => (0..n)
            .map(|x| {
                let consumer = if kind == RuleKind::Copy { Generator::Comult(s.clone()) } else { Generator::Counit(s.clone()) };
                Instance { label: format!("x={x} in {n}"), lhs: layers(vec![vec![point(x)], vec![consumer]]) }
            })
            .collect(),
        RuleKind::PointInnerProduct => (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .map(|(x, y)| Instance {
                label: format!("x={x}, y={y} in {n}"),
                lhs: layers(vec![vec![point(y)], vec![Generator::PointEffect { space: s.clone(), element: x }]]),
            })
            .collect(),
        RuleKind::FunctionPoint => {
            let fs = functions(n);
            let sampled = n > EXHAUSTIVE_FUNCTION_SIZE;
            let mut rng = ChaCha8Rng::seed_from_u64(SEED.rotate_left(7) ^ n as u64);
            fs.into_iter()
                .flat_map(|f| {
                    let xs: Vec<usize> = if sampled { vec![rng.gen_range(0..n)] } else { (0..n).collect() };
                    xs.into_iter().map(move |x| (f.clone(), x))
                })
                .map(|(f, x)| Instance {
                    label: format!("f={:?}, x={x}", f.table),
                    lhs: layers(vec![vec![point(x)], vec![Generator::FunctionBox(f)]]),
                })
                .collect()
        }
        RuleKind::ComonoidCopy | RuleKind::ComonoidDelete => functions(n)
            .into_iter()
            .map(|f| {
                let lhs = if kind == RuleKind::ComonoidCopy {
                    layers(vec![
                        vec![Generator::Comult(s.clone())],
                        vec![Generator::FunctionBox(f.clone()), Generator::FunctionBox(f.clone())],
                    ])
                } else {
                    layers(vec![vec![Generator::FunctionBox(f.clone())], vec![Generator::Counit(f.codomain.clone())]])
                };
                Instance { label: format!("f={:?}", f.table), lhs }
            })
            .collect(),
        RuleKind::CharacterEval
        | RuleKind::RepUnit
        | RuleKind::RepMerge
        | RuleKind::IrrepSum
        | RuleKind::RegularCharacter => groups_of_order(n).into_iter().flat_map(|g| group_instances(kind, &g)).collect(),
        RuleKind::UnitLeft => one(layers(vec![vec![Generator::Unit(s.clone()), id], vec![Generator::Mult(s.clone())]])),
        RuleKind::UnitRight => one(layers(vec![vec![id, Generator::Unit(s.clone())], vec![Generator::Mult(s.clone())]])),
        RuleKind::CounitLeft => {
            one(layers(vec![vec![Generator::Comult(s.clone())], vec![Generator::Counit(s.clone()), id]]))
        }
        RuleKind::CounitRight => {
            one(layers(vec![vec![Generator::Comult(s.clone())], vec![id, Generator::Counit(s.clone())]]))
        }
        RuleKind::Special => one(layers(vec![vec![Generator::Comult(s.clone())], vec![Generator::Mult(s.clone())]])),
        RuleKind::Associativity => one(layers(vec![
            vec![Generator::Mult(s.clone()), id],
            vec![Generator::Mult(s.clone())],
        ])),
    }
}

fn group_instances(kind: RuleKind, g: &Arc<GroupSpec>) -> Vec<Instance> {
    let space = g.space();
    let rep = |irrep: usize| Generator::RepBox {
        group: g.clone(),
        irrep,
        dimension: g.irrep_dimension(irrep).expect("irrep in range"),
    };
    let irreps = 0..g.irrep_count();
    let elements = 0..g.order();
    let label = |what: String| format!("{}: {what}", g.name());
    match kind {
        RuleKind::CharacterEval => irreps
            .flat_map(|i| elements.clone().map(move |e| (i, e)))
            .map(|(i, e)| Instance {
                label: label(format!("irrep {i}, g={e}")),
                lhs: layers(vec![vec![Generator::Point { space: space.clone(), element: e }], vec![rep(i)]]),
            })
            .collect(),
        RuleKind::RepUnit => irreps
            .map(|i| Instance {
                label: label(format!("irrep {i}")),
                lhs: layers(vec![vec![Generator::GroupUnit(g.clone())], vec![rep(i)]]),
            })
            .collect(),
        RuleKind::IrrepSum => irreps
            .map(|i| Instance {
                label: label(format!("irrep {i}")),
                lhs: layers(vec![vec![Generator::Unit(space.clone())], vec![rep(i)]]),
            })
            .collect(),
        RuleKind::RepMerge => irreps
            .filter(|&i| g.irrep_dimension(i) == Some(1))
            .flat_map(|i| {
                let id = Generator::Identity(space.clone());
                [
                    Instance {
                        label: label(format!("irrep {i}, right")),
                        lhs: layers(vec![vec![id.clone(), rep(i)], vec![rep(i)]]),
                    },
                    Instance {
                        label: label(format!("irrep {i}, left")),
                        lhs: layers(vec![vec![rep(i), id], vec![rep(i)]]),
                    },
                ]
            })
            .collect(),
        RuleKind::RegularCharacter => elements
            .map(|e| Instance {
                label: label(format!("g={e}")),
                lhs: layers(vec![
                    vec![Generator::Point { space: space.clone(), element: e }],
                    vec![super::regular_character(g)],
                ]),
            })
            .collect(),
        _ => Vec::new(),
    }
}

/// The left-hand sides instantiated at size `n`, each matching at `(0, 0)`.
pub fn rule_instances(rule: &RewriteRule, n: usize) -> Vec<Diagram> {
    if n == 0 {
        return Vec::new();
    }
    instances(rule.kind, n).into_iter().map(|i| i.lhs).collect()
}

/// Applies `rule` to every instance at each size and compares dense values.
pub fn check_rule_soundness(rule: &RewriteRule, sizes: &[usize]) -> SoundnessReport {
    let mut report = SoundnessReport {
        rule: rule.name().to_string(),
        instantiations: 0,
        max_deviation: 0.0,
        pass: true,
        errors: Vec::new(),
    };
    for &n in sizes.iter().filter(|&&n| n > 0) {
        for inst in instances(rule.kind, n) {
            report.instantiations += 1;
            let outcome = apply_rule(rule, &inst.lhs, 0, 0)
                .map_err(|e| e.to_string())
                .and_then(|rhs| {
                    if rhs.inputs() != inst.lhs.inputs() || rhs.outputs() != inst.lhs.outputs() {
                        return Err("rewrite changed the boundary".to_string());
                    }
                    let (a, b) = (eval(&inst.lhs), eval(&rhs));
                    match (a, b) {
                        (Ok(a), Ok(b)) => Ok(a.max_abs_diff(&b)),
                        (Err(e), _) | (_, Err(e)) => Err(e.to_string()),
                    }
                });
            match outcome {
                Ok(dev) => report.max_deviation = report.max_deviation.max(dev),
                Err(e) => report.errors.push(format!("{}: {e}", inst.label)),
            }
        }
    }
    report.pass = report.errors.is_empty()
        && report.instantiations > 0
        && report.max_deviation <= tolerance::RULE_SOUNDNESS;
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::rules_catalog;

    #[test]
    fn exhaustive_functions_on_three_elements() {
        assert_eq!(functions(3).len(), 27);
        assert_eq!(functions(5).len(), RANDOM_FUNCTIONS);
    }

    #[test]
    fn every_rule_is_sound_on_small_sizes() {
        for rule in rules_catalog() {
            let report = check_rule_soundness(&rule, &[1, 2, 3, 4]);
            assert!(report.pass, "{report:?}");
        }
    }
}
