//! Sliced string diagrams.
//!
//! A diagram is a list of slices read from inputs to outputs. Each slice is a
//! row of generators placed side by side; the concatenated outputs of one
//! slice must equal the concatenated inputs of the next. Wires that pass
//! through a slice untouched are covered by explicit `Identity` generators.

use std::fmt;

use crate::eval::DEFAULT_MAX_ENTRIES;
use crate::generator::Generator;
use crate::space::{total_dimension, SpaceLabel};
use crate::DiagramError;

pub type Slice = Vec<Generator>;

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Diagram {
    inputs: Vec<SpaceLabel>,
    outputs: Vec<SpaceLabel>,
    slices: Vec<Slice>,
}

/// One disagreement between the wires a slice offers and the wires the next
/// slice (or the diagram boundary) expects.
#[derive(Clone, Debug, PartialEq)]
pub struct WireMismatch {
    /// Index of the slice whose inputs disagree with what lies above it.
    /// `slices.len()` denotes the diagram's declared outputs.
    pub slice: usize,
    pub wire: usize,
    pub expected: Option<SpaceLabel>,
    pub found: Option<SpaceLabel>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorIssue {
    pub slice: usize,
    pub index: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct TypingReport {
    pub mismatches: Vec<WireMismatch>,
    pub invalid_generators: Vec<GeneratorIssue>,
}

impl TypingReport {
    pub fn is_ok(&self) -> bool {
        self.mismatches.is_empty() && self.invalid_generators.is_empty()
    }
}

fn show(label: &Option<SpaceLabel>) -> String {
    label.as_ref().map_or_else(|| "<none>".to_string(), ToString::to_string)
}

impl fmt::Display for TypingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        let mut parts = Vec::new();
        for m in &self.mismatches {
            parts.push(format!(
                "slice {} wire {}: expected {}, found {}",
                m.slice,
                m.wire,
                show(&m.expected),
                show(&m.found)
            ));
        }
        for g in &self.invalid_generators {
            parts.push(format!("slice {} generator {}: {}", g.slice, g.index, g.reason));
        }
        write!(f, "{}", parts.join("; "))
    }
}

pub(crate) fn slice_inputs(slice: &[Generator]) -> Vec<SpaceLabel> {
    slice.iter().flat_map(Generator::inputs).collect()
}

pub(crate) fn slice_outputs(slice: &[Generator]) -> Vec<SpaceLabel> {
    slice.iter().flat_map(Generator::outputs).collect()
}

pub(crate) fn identities(spaces: &[SpaceLabel]) -> Slice {
    spaces.iter().cloned().map(Generator::Identity).collect()
}

fn first_mismatch(expected: &[SpaceLabel], found: &[SpaceLabel]) -> Option<(usize, Option<SpaceLabel>, Option<SpaceLabel>)> {
    (0..expected.len().max(found.len()))
        .find(|&i| expected.get(i) != found.get(i))
        .map(|i| (i, expected.get(i).cloned(), found.get(i).cloned()))
}

/// A single generator as a one-slice diagram. Identities on the trivial
/// space give the empty diagram.
pub fn make_generator(g: Generator) -> Result<Diagram, DiagramError> {
    g.check()?;
    let (inputs, outputs) = (g.inputs(), g.outputs());
    if g.is_identity() && inputs.is_empty() {
        return Ok(Diagram::empty());
    }
    Ok(Diagram { inputs, outputs, slices: vec![vec![g]] })
}

impl Diagram {
    /// The empty diagram: no wires, no slices, the scalar 1.
    pub fn empty() -> Self {
        Self::default()
    }

    /// The identity on `spaces`, as a single slice of identity generators.
    pub fn identity(spaces: &[SpaceLabel]) -> Self {
        let spaces: Vec<SpaceLabel> = spaces.iter().filter(|s| !s.is_trivial()).cloned().collect();
        if spaces.is_empty() {
            return Self::empty();
        }
        Self { inputs: spaces.clone(), outputs: spaces.clone(), slices: vec![identities(&spaces)] }
    }

    /// Assembles a diagram without checking it; see [`Diagram::validate`].
    pub fn from_slices(inputs: Vec<SpaceLabel>, outputs: Vec<SpaceLabel>, slices: Vec<Slice>) -> Self {
        Self { inputs, outputs, slices }
    }

    /// Builds a diagram whose boundary is read off its first and last slice.
    pub fn from_layers(slices: Vec<Slice>) -> Result<Self, DiagramError> {
        let inputs = slices.first().map(|s| slice_inputs(s)).unwrap_or_default();
        let outputs = slices.last().map(|s| slice_outputs(s)).unwrap_or_default();
        let d = Self { inputs, outputs, slices };
        let report = d.validate();
        if report.is_ok() {
            Ok(d)
        } else {
            Err(DiagramError::IllTyped(report))
        }
    }

    pub fn inputs(&self) -> &[SpaceLabel] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[SpaceLabel] {
        &self.outputs
    }

    pub fn slices(&self) -> &[Slice] {
        &self.slices
    }

    pub fn is_closed(&self) -> bool {
        self.inputs.is_empty() && self.outputs.is_empty()
    }

    pub fn generator_count(&self) -> usize {
        self.slices.iter().map(Vec::len).sum()
    }

    /// Entries of the full evaluated matrix, `None` on overflow.
    pub fn evaluated_entries(&self) -> Option<usize> {
        total_dimension(&self.inputs)?.checked_mul(total_dimension(&self.outputs)?)
    }

    /// Largest matrix any single slice evaluates to.
    pub fn max_slice_entries(&self) -> Option<usize> {
        self.slices.iter().try_fold(0usize, |acc, s| {
            let e = total_dimension(&slice_inputs(s))?.checked_mul(total_dimension(&slice_outputs(s))?)?;
            Some(acc.max(e))
        })
    }

    pub fn validate(&self) -> TypingReport {
        let mut report = TypingReport::default();
        let mut upstream = self.inputs.clone();
        for (k, slice) in self.slices.iter().enumerate() {
            for (index, g) in slice.iter().enumerate() {
                if let Err(e) = g.check() {
                    report.invalid_generators.push(GeneratorIssue { slice: k, index, reason: e.to_string() });
                }
            }
            let found = slice_inputs(slice);
            push_mismatches(&mut report, k, &upstream, &found);
            upstream = slice_outputs(slice);
        }
        push_mismatches(&mut report, self.slices.len(), &upstream, &self.outputs);
        report
    }

    /// Sequential composition: `self` first, then `then`.
    pub fn compose(&self, then: &Diagram) -> Result<Diagram, DiagramError> {
        if let Some((position, expected, found)) = first_mismatch(&self.outputs, &then.inputs) {
            return Err(DiagramError::TypeMismatch { position, expected: show(&expected), found: show(&found) });
        }
        let mut slices = self.slices.clone();
        slices.extend(then.slices.iter().cloned());
        Ok(Diagram { inputs: self.inputs.clone(), outputs: then.outputs.clone(), slices })
    }

    /// Side-by-side placement, `self` on the left.
    pub fn tensor(&self, right: &Diagram) -> Result<Diagram, DiagramError> {
        self.tensor_with_cap(right, DEFAULT_MAX_ENTRIES)
    }

    pub fn tensor_with_cap(&self, right: &Diagram, max_entries: usize) -> Result<Diagram, DiagramError> {
        let inputs: Vec<SpaceLabel> = self.inputs.iter().chain(&right.inputs).cloned().collect();
        let outputs: Vec<SpaceLabel> = self.outputs.iter().chain(&right.outputs).cloned().collect();
        let entries = total_dimension(&inputs).and_then(|i| total_dimension(&outputs).and_then(|o| i.checked_mul(o)));
        match entries {
            Some(e) if e <= max_entries => {}
            _ => {
                return Err(DiagramError::DimensionCapExceeded {
                    entries: entries.map_or(u128::MAX, |e| e as u128),
                    cap: max_entries,
                })
            }
        }
        let depth = self.slices.len().max(right.slices.len());
        let slices = (0..depth)
            .map(|k| {
                let mut slice = self.slices.get(k).cloned().unwrap_or_else(|| identities(&self.outputs));
                slice.extend(right.slices.get(k).cloned().unwrap_or_else(|| identities(&right.outputs)));
                slice
            })
            .collect();
        Ok(Diagram { inputs, outputs, slices })
    }

    /// The adjoint: slices reversed, each generator replaced by its adjoint.
    pub fn dagger(&self) -> Diagram {
        let slices = self.slices.iter().rev().map(|s| s.iter().map(Generator::adjoint).collect()).collect();
        Diagram { inputs: self.outputs.clone(), outputs: self.inputs.clone(), slices }
    }

    /// Composes a list of diagrams in order.
    pub fn sequence<'a>(parts: impl IntoIterator<Item = &'a Diagram>) -> Result<Diagram, DiagramError> {
        let mut iter = parts.into_iter();
        let first = iter.next().cloned().unwrap_or_default();
        iter.try_fold(first, |acc, d| acc.compose(d))
    }
}

fn push_mismatches(report: &mut TypingReport, slice: usize, expected: &[SpaceLabel], found: &[SpaceLabel]) {
    for wire in 0..expected.len().max(found.len()) {
        let (e, f) = (expected.get(wire), found.get(wire));
        if e != f {
            report.mismatches.push(WireMismatch { slice, wire, expected: e.cloned(), found: f.cloned() });
        }
    }
}
