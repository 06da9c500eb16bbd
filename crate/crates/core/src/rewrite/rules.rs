//! The rule catalog and the matcher for each rule.
//!
//! Every rule matches a fragment spanning two adjacent slices `k` and `k+1`
//! that meet at a wire offset `w`: a contiguous run of generators in slice
//! `k` whose outputs are exactly the wires consumed by a contiguous run of
//! generators in slice `k+1`.

use std::ops::Range;
use std::sync::Arc;

use num_complex::Complex64;

use crate::dense::ONE;
use crate::diagram::{Diagram, Slice};
use crate::generator::Generator;
use crate::group::GroupSpec;
use crate::space::SpaceLabel;

/// Syntactic condition checked on the matched generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SideCondition {
    None,
    IsFunctionBox,
    IsClassicalPoint,
    IsRepresentation,
    GroupsMatch,
}

impl SideCondition {
    pub fn as_str(self) -> &'static str {
        match self {
            SideCondition::None => "none",
            SideCondition::IsFunctionBox => "is-function-box",
            SideCondition::IsClassicalPoint => "is-classical-point",
            SideCondition::IsRepresentation => "is-representation",
            SideCondition::GroupsMatch => "groups-match",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum RuleKind {
    Copy,
    Delete,
    PointInnerProduct,
    FunctionPoint,
    CharacterEval,
    ComonoidDelete,
    ComonoidCopy,
    RepUnit,
    RepMerge,
    IrrepSum,
    RegularCharacter,
    UnitLeft,
    UnitRight,
    CounitLeft,
    CounitRight,
    Special,
    Associativity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    pub(crate) kind: RuleKind,
    name: &'static str,
    label: &'static str,
    side_condition: SideCondition,
    normalizing: bool,
    description: &'static str,
}

impl RewriteRule {
    /// Unique rule name, as recorded in traces.
    pub fn name(&self) -> &'static str {
        self.name
    }

    /// Catalog family (`R1` … `R7`, `X` for extras).
    pub fn label(&self) -> &'static str {
        self.label
    }

    pub fn side_condition(&self) -> SideCondition {
        self.side_condition
    }

    /// Whether `normalize` uses this rule. Every normalizing rule strictly
    /// lowers the diagram weight; associativity cannot and is left out.
    pub fn is_normalizing(&self) -> bool {
        self.normalizing
    }

    pub fn description(&self) -> &'static str {
        self.description
    }
}

const fn rule(
    kind: RuleKind,
    name: &'static str,
    label: &'static str,
    side_condition: SideCondition,
    description: &'static str,
) -> RewriteRule {
    RewriteRule { kind, name, label, side_condition, normalizing: true, description }
}

/// All shipped rules in priority order.
pub fn rules_catalog() -> Vec<RewriteRule> {
    use RuleKind::*;
    use SideCondition as C;
    let mut catalog = vec![
        rule(Copy, "copy", "R1", C::IsClassicalPoint, "m† ∘ x → x ⊗ x"),
        rule(Delete, "delete", "R2", C::IsClassicalPoint, "u† ∘ x → 1"),
        rule(PointInnerProduct, "point-inner-product", "R3", C::IsClassicalPoint, "x† ∘ y → δ_xy"),
        rule(FunctionPoint, "function-point", "X", C::IsClassicalPoint, "f ∘ x → f(x)"),
        rule(CharacterEval, "character-eval", "X", C::IsClassicalPoint, "χ ∘ g → χ(g)"),
        rule(ComonoidDelete, "comonoid-delete", "R4b", C::IsFunctionBox, "u† ∘ f → u†"),
        rule(ComonoidCopy, "comonoid-copy", "R4a", C::IsFunctionBox, "(f ⊗ f) ∘ m† → m† ∘ f"),
        rule(RepUnit, "rep-unit", "R6", C::GroupsMatch, "χ ∘ e → dim χ"),
        rule(RepMerge, "rep-merge", "R6", C::IsRepresentation, "χ ∘ (id ⊗ χ) → χ ∘ m_G"),
        rule(IrrepSum, "irrep-sum", "R7", C::GroupsMatch, "χ ∘ u → |G|·[χ trivial]"),
        rule(RegularCharacter, "regular-character", "R7", C::IsClassicalPoint, "(Σ_σ d_σ χ_σ) ∘ g → |G|·δ_ge"),
        rule(UnitLeft, "unit-left", "R5", C::None, "m ∘ (u ⊗ id) → id"),
        rule(UnitRight, "unit-right", "R5", C::None, "m ∘ (id ⊗ u) → id"),
        rule(CounitLeft, "counit-left", "R5", C::None, "(u† ⊗ id) ∘ m† → id"),
        rule(CounitRight, "counit-right", "R5", C::None, "(id ⊗ u†) ∘ m† → id"),
        rule(Special, "special", "R5", C::None, "m ∘ m† → id"),
        rule(Associativity, "associativity", "R5", C::None, "m ∘ (m ⊗ id) → m ∘ (id ⊗ m)"),
    ];
    catalog.last_mut().expect("non-empty").normalizing = false;
    catalog
}

pub fn rule_by_name(name: &str) -> Option<RewriteRule> {
    rules_catalog().into_iter().find(|r| r.name == name)
}

/// The effect `Σ_σ d_σ χ_σ: G → 1`.
pub fn regular_character(group: &Arc<GroupSpec>) -> Generator {
    let terms = (0..group.irrep_count())
        .map(|irrep| {
            let dimension = group.irrep_dimension(irrep).expect("irrep in range");
            Diagram::from_slices(
                vec![group.space()],
                vec![],
                vec![vec![
                    Generator::RepBox { group: group.clone(), irrep, dimension },
                    Generator::scalar(Complex64::new(dimension as f64, 0.0)),
                ]],
            )
        })
        .collect();
    Generator::Sum(terms)
}

/// Why a rule did not fire.
#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Miss {
    NoMatch,
    SideCondition(String),
}

/// A located instance of a rule's left-hand side and the replacement.
#[derive(Clone, Debug)]
pub(crate) struct Found {
    pub upper: Range<usize>,
    pub lower: Range<usize>,
    pub rhs: Diagram,
}

/// Wire ranges `(start, len)` for each generator of a slice.
fn ranges(slice: &[Generator], outputs: bool) -> Vec<(usize, usize)> {
    let mut at = 0;
    slice
        .iter()
        .map(|g| {
            let len = if outputs { g.outputs().len() } else { g.inputs().len() };
            let r = (at, len);
            at += len;
            r
        })
        .collect()
}

struct Site<'a> {
    upper: &'a [Generator],
    lower: &'a [Generator],
    up: Vec<(usize, usize)>,
    down: Vec<(usize, usize)>,
    wire: usize,
}

impl<'a> Site<'a> {
    fn new(upper: &'a [Generator], lower: &'a [Generator], wire: usize) -> Self {
        Self { up: ranges(upper, true), down: ranges(lower, false), upper, lower, wire }
    }

    /// The generator in the upper slice whose outputs start at `wire`.
    fn producer(&self, wire: usize) -> Option<(usize, &'a Generator)> {
        self.up.iter().position(|&(s, l)| s == wire && l > 0).map(|i| (i, &self.upper[i]))
    }

    /// The generator in the lower slice whose inputs start at `wire`.
    fn consumer(&self, wire: usize) -> Option<(usize, &'a Generator)> {
        self.down.iter().position(|&(s, l)| s == wire && l > 0).map(|i| (i, &self.lower[i]))
    }

    fn out_len(&self, i: usize) -> usize {
        self.up[i].1
    }

    fn in_len(&self, j: usize) -> usize {
        self.down[j].1
    }
}

fn layers(slices: Vec<Slice>) -> Diagram {
    Diagram::from_layers(slices).expect("rule right-hand sides are well-typed")
}

fn scalar_rhs(value: Complex64) -> Diagram {
    if value == ONE {
        Diagram::empty()
    } else {
        layers(vec![vec![Generator::scalar(value)]])
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn not_point(g: &Generator) -> Miss {
    Miss::SideCondition(format!("producer is {}, not a classical point", g.variant_name()))
}

/// A point `(space, element)`, treating the group unit as the point `e`.
fn as_point(g: &Generator) -> Option<(SpaceLabel, usize)> {
    match g {
        Generator::Point { space, element } => Some((space.clone(), *element)),
        Generator::GroupUnit(group) => Some((group.space(), group.identity_index())),
        _ => None,
    }
}

/// Tries `rule` at slices `(k, k+1)` and wire offset `wire`.
pub(crate) fn find(rule: &RewriteRule, upper: &[Generator], lower: &[Generator], wire: usize) -> Result<Found, Miss> {
    let site = Site::new(upper, lower, wire);
    let w = site.wire;
    let one = |i: usize| i..i + 1;
    match rule.kind {
        RuleKind::Copy | RuleKind::Delete => {
            let (j, cons) = site.consumer(w).ok_or(Miss::NoMatch)?;
            let space = match (rule.kind, cons) {
                (RuleKind::Copy, Generator::Comult(s)) | (RuleKind::Delete, Generator::Counit(s)) => s,
                _ => return Err(Miss::NoMatch),
            };
            let (i, prod) = site.producer(w).ok_or(Miss::NoMatch)?;
            match prod {
                Generator::Point { space: ps, .. } if ps == space => {}
                _ => return Err(not_point(prod)),
            }
            let rhs = if rule.kind == RuleKind::Copy {
                layers(vec![vec![prod.clone(), prod.clone()]])
            } else {
                Diagram::empty()
            };
            Ok(Found { upper: one(i), lower: one(j), rhs })
        }
        RuleKind::PointInnerProduct => {
            let (j, cons) = site.consumer(w).ok_or(Miss::NoMatch)?;
            let Generator::PointEffect { space, element: x } = cons else { return Err(Miss::NoMatch) };
            let (i, prod) = site.producer(w).ok_or(Miss::NoMatch)?;
            let Generator::Point { space: ps, element: y } = prod else { return Err(not_point(prod)) };
            if ps != space {
                return Err(Miss::NoMatch);
            }
            let rhs = scalar_rhs(if x == y { ONE } else { real(0.0) });
            Ok(Found { upper: one(i), lower: one(j), rhs })
        }
        RuleKind::FunctionPoint => {
            let (j, cons) = site.consumer(w).ok_or(Miss::NoMatch)?;
            let Generator::FunctionBox(f) = cons else { return Err(Miss::NoMatch) };
            let (i, prod) = site.producer(w).ok_or(Miss::NoMatch)?;
            let Generator::Point { element, .. } = prod else { return Err(not_point(prod)) };
            let rhs = layers(vec![vec![Generator::Point { space: f.codomain.clone(), element: f.apply(*element) }]]);
            Ok(Found { upper: one(i), lower: one(j), rhs })
        }
        RuleKind::CharacterEval => {
            let (j, cons) = site.consumer(w).ok_or(Miss::NoMatch)?;
            let Generator::RepBox { group, irrep, .. } = cons else { return Err(Miss::NoMatch) };
            let (i, prod) = site.producer(w).ok_or(Miss::NoMatch)?;
            let Generator::Point { element, .. } = prod else { return Err(not_point(prod)) };
            let chi = group.character(*irrep).expect("checked generator")[*element];
            Ok(Found { upper: one(i), lower: one(j), rhs: scalar_rhs(chi) })
        }
        RuleKind::ComonoidDelete => {
            let (j, cons) = site.consumer(w).ok_or(Miss::NoMatch)?;
            let Generator::Counit(_) = cons else { return Err(Miss::NoMatch) };
            let (i, prod) = site.producer(w).ok_or(Miss::NoMatch)?;
            if site.out_len(i) != 1 {
                return Err(Miss::NoMatch);
            }
            let Generator::FunctionBox(f) = prod else {
                return Err(Miss::SideCondition(format!("producer is {}, not a function box", prod.variant_name())));
            };
            let rhs = layers(vec![vec![Generator::Counit(f.domain.clone())]]);
            Ok(Found { upper: one(i), lower: one(j), rhs })
        }
        RuleKind::ComonoidCopy => {
            let (i, prod) = site.producer(w).ok_or(Miss::NoMatch)?;
            let Generator::Comult(_) = prod else { return Err(Miss::NoMatch) };
            let (j, left) = site.consumer(w).ok_or(Miss::NoMatch)?;
            let (j2, right) = site.consumer(w + 1).ok_or(Miss::NoMatch)?;
            if j2 != j + 1 || site.in_len(j) != 1 || site.in_len(j2) != 1 {
                return Err(Miss::NoMatch);
            }
            match (left, right) {
                (Generator::FunctionBox(f), Generator::FunctionBox(g)) if f == g => {
                    let rhs = layers(vec![
                        vec![Generator::FunctionBox(f.clone())],
                        vec![Generator::Comult(f.codomain.clone())],
                    ]);
                    Ok(Found { upper: one(i), lower: j..j + 2, rhs })
                }
                (Generator::FunctionBox(_), Generator::FunctionBox(_)) => {
                    Err(Miss::SideCondition("the two copies carry different functions".into()))
                }
                _ => Err(Miss::SideCondition(format!(
                    "copies feed {} and {}, not one function box twice",
                    left.variant_name(),
                    right.variant_name()
                ))),
            }
        }
        RuleKind::RepUnit => {
            let (j, cons) = site.consumer(w).ok_or(Miss::NoMatch)?;
            let Generator::RepBox { group, dimension, .. } = cons else { return Err(Miss::NoMatch) };
            let (i, prod) = site.producer(w).ok_or(Miss::NoMatch)?;
            let Generator::GroupUnit(g) = prod else { return Err(Miss::NoMatch) };
            if g != group {
                return Err(Miss::SideCondition(format!("unit of {} feeds a character of {}", g.name(), group.name())));
            }
            Ok(Found { upper: one(i), lower: one(j), rhs: scalar_rhs(real(*dimension as f64)) })
        }
        RuleKind::RepMerge => {
            let (j, cons) = site.consumer(w).ok_or(Miss::NoMatch)?;
            let Generator::RepBox { group, irrep, .. } = cons else { return Err(Miss::NoMatch) };
            let (i, prod) = site.producer(w).ok_or(Miss::NoMatch)?;
            if *prod != Generator::Identity(group.space()) {
                return Err(Miss::NoMatch);
            }
            let same = |g: &Generator| matches!(g, Generator::RepBox { group: g2, irrep: r2, .. } if g2 == group && r2 == irrep);
            let upper_range = if i + 1 < upper.len() && same(&upper[i + 1]) {
                i..i + 2
            } else if i > 0 && same(&upper[i - 1]) {
                i - 1..i + 1
            } else {
                return Err(Miss::NoMatch);
            };
            if group.irrep_dimension(*irrep) != Some(1) {
                return Err(Miss::SideCondition(format!(
                    "irrep {irrep} of {} is not one-dimensional, so its character is not multiplicative",
                    group.name()
                )));
            }
            let rhs = layers(vec![vec![Generator::GroupMult(group.clone())], vec![cons.clone()]]);
            Ok(Found { upper: upper_range, lower: one(j), rhs })
        }
        RuleKind::IrrepSum => {
            let (j, cons) = site.consumer(w).ok_or(Miss::NoMatch)?;
            let Generator::RepBox { group, irrep, .. } = cons else { return Err(Miss::NoMatch) };
            let (i, prod) = site.producer(w).ok_or(Miss::NoMatch)?;
            let Generator::Unit(space) = prod else { return Err(Miss::NoMatch) };
            if *space != group.space() {
                return Err(Miss::SideCondition(format!("unit on {space} is not the algebra of {}", group.name())));
            }
            let value = if group.is_trivial_irrep(*irrep) { group.order() as f64 } else { 0.0 };
            Ok(Found { upper: one(i), lower: one(j), rhs: scalar_rhs(real(value)) })
        }
        RuleKind::RegularCharacter => {
            let (j, cons) = site.consumer(w).ok_or(Miss::NoMatch)?;
            let Generator::Sum(terms) = cons else { return Err(Miss::NoMatch) };
            let group = match terms.first().and_then(|t| t.slices().first()).and_then(|s| s.first()) {
                Some(Generator::RepBox { group, .. }) => group.clone(),
                _ => return Err(Miss::NoMatch),
            };
            if *cons != regular_character(&group) {
                return Err(Miss::NoMatch);
            }
            let (i, prod) = site.producer(w).ok_or(Miss::NoMatch)?;
            let (_, element) = as_point(prod).ok_or_else(|| not_point(prod))?;
            let value = if element == group.identity_index() { group.order() as f64 } else { 0.0 };
            Ok(Found { upper: one(i), lower: one(j), rhs: scalar_rhs(real(value)) })
        }
        RuleKind::UnitLeft | RuleKind::UnitRight | RuleKind::Associativity => {
            let (j, cons) = site.consumer(w).ok_or(Miss::NoMatch)?;
            let Generator::Mult(space) = cons else { return Err(Miss::NoMatch) };
            let (i, first) = site.producer(w).ok_or(Miss::NoMatch)?;
            let (i2, second) = site.producer(w + 1).ok_or(Miss::NoMatch)?;
            if i2 != i + 1 || site.out_len(i) != 1 || site.out_len(i2) != 1 {
                return Err(Miss::NoMatch);
            }
            let id = Generator::Identity(space.clone());
            let (want_first, want_second) = match rule.kind {
                RuleKind::UnitLeft => (Generator::Unit(space.clone()), id.clone()),
                RuleKind::UnitRight => (id.clone(), Generator::Unit(space.clone())),
                _ => (cons.clone(), id.clone()),
            };
            if *first != want_first || *second != want_second {
                return Err(Miss::NoMatch);
            }
            let rhs = if rule.kind == RuleKind::Associativity {
                layers(vec![vec![id, cons.clone()], vec![cons.clone()]])
            } else {
                Diagram::identity(std::slice::from_ref(space))
            };
            Ok(Found { upper: i..i + 2, lower: one(j), rhs })
        }
        RuleKind::CounitLeft | RuleKind::CounitRight | RuleKind::Special => {
            let (i, prod) = site.producer(w).ok_or(Miss::NoMatch)?;
            let Generator::Comult(space) = prod else { return Err(Miss::NoMatch) };
            let id = Generator::Identity(space.clone());
            let lower_range = if rule.kind == RuleKind::Special {
                let (j, cons) = site.consumer(w).ok_or(Miss::NoMatch)?;
                if *cons != Generator::Mult(space.clone()) {
                    return Err(Miss::NoMatch);
                }
                j..j + 1
            } else {
                let (j, first) = site.consumer(w).ok_or(Miss::NoMatch)?;
                let (j2, second) = site.consumer(w + 1).ok_or(Miss::NoMatch)?;
                if j2 != j + 1 || site.in_len(j) != 1 || site.in_len(j2) != 1 {
                    return Err(Miss::NoMatch);
                }
                let counit = Generator::Counit(space.clone());
                let (want_first, want_second) =
                    if rule.kind == RuleKind::CounitLeft { (counit, id) } else { (id, counit) };
                if *first != want_first || *second != want_second {
                    return Err(Miss::NoMatch);
                }
                j..j + 2
            };
            Ok(Found { upper: one(i), lower: lower_range, rhs: Diagram::identity(std::slice::from_ref(space)) })
        }
    }
}
