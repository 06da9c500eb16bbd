//! The JSON diagram document.
//!
//! Wires refer to spaces by name. Every group used by a generator is listed
//! once under `groups`; its algebra is the space of the same name with kind
//! `group`. A document is accepted only if it parses and validates.

use std::collections::BTreeMap;
use std::io;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dense::DenseTensor;
use crate::diagram::{Diagram, TypingReport};
use crate::generator::{CustomBox, FunctionBox, Generator};
use crate::group::GroupSpec;
use crate::space::{SpaceKind, SpaceLabel};
use crate::SCHEMA_VERSION;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SerialError {
    #[error("cannot read {path}: no such file")]
    NotFound { path: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error at line {line}, column {column}: {message}")]
    Syntax { message: String, line: usize, column: usize },
    #[error("parse error at {at}: {message}")]
    Content { at: String, message: String },
    #[error("ill-typed diagram: {0}")]
    Type(TypingReport),
}

impl SerialError {
    pub fn code(&self) -> &'static str {
        match self {
            SerialError::NotFound { .. } => "io-not-found",
            SerialError::Io { .. } => "io-error",
            SerialError::Syntax { .. } | SerialError::Content { .. } => "parse-error",
            SerialError::Type(_) => "type-error",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDoc {
    pub name: String,
    pub kind: SpaceKind,
    pub dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    pub name: String,
    pub multiplication_table: Vec<Vec<usize>>,
    pub identity_index: usize,
    /// Rows are irreps; entries are `[re, im]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub character_table: Option<Vec<Vec<[f64; 2]>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", deny_unknown_fields)]
pub enum GeneratorDoc {
    Identity { space: String },
    Mult { space: String },
    Unit { space: String },
    Comult { space: String },
    Counit { space: String },
    FunctionBox { domain: String, codomain: String, table: Vec<usize> },
    Point { space: String, element: usize },
    PointEffect { space: String, element: usize },
    GroupMult { group: String },
    GroupUnit { group: String },
    RepBox { group: String, irrep: usize, dimension: usize },
    CustomBox { name: String, inputs: Vec<String>, outputs: Vec<String>, matrix: DenseTensor },
    Swap { left: String, right: String },
    Sum { terms: Vec<TermDoc> },
}

/// A summand of a `Sum` generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub slices: Vec<Vec<GeneratorDoc>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramDoc {
    pub version: u32,
    pub spaces: Vec<SpaceDoc>,
    #[serde(default)]
    pub groups: Vec<GroupDoc>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub slices: Vec<Vec<GeneratorDoc>>,
}

#[derive(Default)]
struct Collected {
    spaces: Vec<SpaceLabel>,
    groups: Vec<Arc<GroupSpec>>,
}

impl Collected {
    fn space(&mut self, s: &SpaceLabel) -> String {
        if !self.spaces.contains(s) {
            self.spaces.push(s.clone());
        }
        s.name().to_string()
    }

    fn spaces(&mut self, list: &[SpaceLabel]) -> Vec<String> {
        list.iter().map(|s| self.space(s)).collect()
    }

    fn group(&mut self, g: &Arc<GroupSpec>) -> String {
        if !self.groups.iter().any(|h| h == g) {
            self.groups.push(g.clone());
        }
        self.space(&g.space())
    }

    fn slices(&mut self, slices: &[Vec<Generator>]) -> Vec<Vec<GeneratorDoc>> {
        slices.iter().map(|s| s.iter().map(|g| self.generator(g)).collect()).collect()
    }

    fn generator(&mut self, g: &Generator) -> GeneratorDoc {
        match g {
            Generator::Identity(s) => GeneratorDoc::Identity { space: self.space(s) },
            Generator::Mult(s) => GeneratorDoc::Mult { space: self.space(s) },
            Generator::Unit(s) => GeneratorDoc::Unit { space: self.space(s) },
            Generator::Comult(s) => GeneratorDoc::Comult { space: self.space(s) },
            Generator::Counit(s) => GeneratorDoc::Counit { space: self.space(s) },
            Generator::FunctionBox(f) => GeneratorDoc::FunctionBox {
                domain: self.space(&f.domain),
                codomain: self.space(&f.codomain),
                table: f.table.clone(),
            },
            Generator::Point { space, element } => GeneratorDoc::Point { space: self.space(space), element: *element },
            Generator::PointEffect { space, element } => {
                GeneratorDoc::PointEffect { space: self.space(space), element: *element }
            }
            Generator::GroupMult(group) => GeneratorDoc::GroupMult { group: self.group(group) },
            Generator::GroupUnit(group) => GeneratorDoc::GroupUnit { group: self.group(group) },
            Generator::RepBox { group, irrep, dimension } => {
                GeneratorDoc::RepBox { group: self.group(group), irrep: *irrep, dimension: *dimension }
            }
            Generator::CustomBox(b) => GeneratorDoc::CustomBox {
                name: b.name.clone(),
                inputs: self.spaces(&b.inputs),
                outputs: self.spaces(&b.outputs),
                matrix: b.matrix.clone(),
            },
            Generator::Swap(a, b) => GeneratorDoc::Swap { left: self.space(a), right: self.space(b) },
            Generator::Sum(terms) => GeneratorDoc::Sum {
                terms: terms
                    .iter()
                    .map(|t| TermDoc {
                        inputs: self.spaces(t.inputs()),
                        outputs: self.spaces(t.outputs()),
                        slices: self.slices(t.slices()),
                    })
                    .collect(),
            },
        }
    }
}

pub fn to_document(d: &Diagram) -> DiagramDoc {
    let mut c = Collected::default();
    let inputs = c.spaces(d.inputs());
    let outputs = c.spaces(d.outputs());
    let slices = c.slices(d.slices());
    DiagramDoc {
        version: SCHEMA_VERSION,
        spaces: c
            .spaces
            .iter()
            .map(|s| SpaceDoc { name: s.name().to_string(), kind: s.kind(), dimension: s.dimension() })
            .collect(),
        groups: c
            .groups
            .iter()
            .map(|g| GroupDoc {
                name: g.name().to_string(),
                multiplication_table: g.multiplication_table().to_vec(),
                identity_index: g.identity_index(),
                character_table: g
                    .character_table()
                    .map(|t| t.iter().map(|row| row.iter().map(|z| [z.re, z.im]).collect()).collect()),
            })
            .collect(),
        inputs,
        outputs,
        slices,
    }
}

pub fn to_value(d: &Diagram) -> serde_json::Value {
    serde_json::to_value(to_document(d)).expect("documents serialize")
}

/// Pretty-printed JSON with sorted keys.
pub fn print(d: &Diagram) -> String {
    serde_json::to_string_pretty(&to_value(d)).expect("documents serialize")
}

struct Resolver {
    spaces: BTreeMap<String, SpaceLabel>,
    groups: BTreeMap<String, Arc<GroupSpec>>,
}

fn content(at: impl Into<String>, message: impl ToString) -> SerialError {
    SerialError::Content { at: at.into(), message: message.to_string() }
}

impl Resolver {
    fn new(doc: &DiagramDoc) -> Result<Self, SerialError> {
        let mut spaces = BTreeMap::new();
        for (i, s) in doc.spaces.iter().enumerate() {
            let at = format!("spaces[{i}]");
            let label = SpaceLabel::new(s.kind, s.name.clone(), s.dimension).map_err(|e| content(&at, e))?;
            if spaces.insert(s.name.clone(), label).is_some() {
                return Err(content(at, format!("space '{}' is declared twice", s.name)));
            }
        }
        let mut groups = BTreeMap::new();
        for (i, g) in doc.groups.iter().enumerate() {
            let at = format!("groups[{i}]");
            let characters = g
                .character_table
                .as_ref()
                .map(|t| t.iter().map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect()).collect());
            let spec = GroupSpec::new(g.name.clone(), g.multiplication_table.clone(), g.identity_index, characters)
                .map_err(|e| content(&at, e))?;
            match spaces.get(&g.name) {
                Some(s) if *s != spec.space() => {
                    return Err(content(at, format!("space '{}' does not match group '{}'", s, g.name)))
                }
                Some(_) => {}
                None => {
                    spaces.insert(g.name.clone(), spec.space());
                }
            }
            if groups.insert(g.name.clone(), Arc::new(spec)).is_some() {
                return Err(content(at, format!("group '{}' is declared twice", g.name)));
            }
        }
        Ok(Self { spaces, groups })
    }

    fn space(&self, at: &str, name: &str) -> Result<SpaceLabel, SerialError> {
        self.spaces.get(name).cloned().ok_or_else(|| content(at, format!("unknown space '{name}'")))
    }

    fn space_list(&self, at: &str, names: &[String]) -> Result<Vec<SpaceLabel>, SerialError> {
        let labels = names.iter().map(|n| self.space(at, n)).collect::<Result<Vec<_>, _>>()?;
        Ok(labels.into_iter().filter(|s| !s.is_trivial()).collect())
    }

    fn group(&self, at: &str, name: &str) -> Result<Arc<GroupSpec>, SerialError> {
        self.groups.get(name).cloned().ok_or_else(|| content(at, format!("unknown group '{name}'")))
    }

    fn slices(&self, at: &str, slices: &[Vec<GeneratorDoc>]) -> Result<Vec<Vec<Generator>>, SerialError> {
        slices
            .iter()
            .enumerate()
            .map(|(k, slice)| {
                slice.iter().enumerate().map(|(i, g)| self.generator(&format!("{at}slices[{k}][{i}]"), g)).collect()
            })
            .collect()
    }

    fn generator(&self, at: &str, g: &GeneratorDoc) -> Result<Generator, SerialError> {
        let sp = |name: &str| self.space(at, name);
        let gen = match g {
            GeneratorDoc::Identity { space } => Generator::Identity(sp(space)?),
            GeneratorDoc::Mult { space } => Generator::Mult(sp(space)?),
            GeneratorDoc::Unit { space } => Generator::Unit(sp(space)?),
            GeneratorDoc::Comult { space } => Generator::Comult(sp(space)?),
            GeneratorDoc::Counit { space } => Generator::Counit(sp(space)?),
            GeneratorDoc::FunctionBox { domain, codomain, table } => Generator::FunctionBox(
                FunctionBox::new(sp(domain)?, sp(codomain)?, table.clone()).map_err(|e| content(at, e))?,
            ),
            GeneratorDoc::Point { space, element } => Generator::Point { space: sp(space)?, element: *element },
            GeneratorDoc::PointEffect { space, element } => {
                Generator::PointEffect { space: sp(space)?, element: *element }
            }
            GeneratorDoc::GroupMult { group } => Generator::GroupMult(self.group(at, group)?),
            GeneratorDoc::GroupUnit { group } => Generator::GroupUnit(self.group(at, group)?),
            GeneratorDoc::RepBox { group, irrep, dimension } => {
                Generator::RepBox { group: self.group(at, group)?, irrep: *irrep, dimension: *dimension }
            }
            GeneratorDoc::CustomBox { name, inputs, outputs, matrix } => Generator::CustomBox(
                CustomBox::new(name.clone(), self.space_list(at, inputs)?, self.space_list(at, outputs)?, matrix.clone())
                    .map_err(|e| content(at, e))?,
            ),
            GeneratorDoc::Swap { left, right } => Generator::Swap(sp(left)?, sp(right)?),
            GeneratorDoc::Sum { terms } => Generator::Sum(
                terms
                    .iter()
                    .enumerate()
                    .map(|(t, term)| {
                        let at = format!("{at}.terms[{t}].");
                        let d = Diagram::from_slices(
                            self.space_list(&at, &term.inputs)?,
                            self.space_list(&at, &term.outputs)?,
                            self.slices(&at, &term.slices)?,
                        );
                        Ok(d)
                    })
                    .collect::<Result<_, SerialError>>()?,
            ),
        };
        gen.check().map_err(|e| content(at, e))?;
        Ok(gen)
    }
}

/// Builds the diagram described by `doc` and validates it.
pub fn from_document(doc: &DiagramDoc) -> Result<Diagram, SerialError> {
    if doc.version != SCHEMA_VERSION {
        return Err(content("version", format!("unsupported version {} (expected {SCHEMA_VERSION})", doc.version)));
    }
    let r = Resolver::new(doc)?;
    let d = Diagram::from_slices(
        r.space_list("inputs", &doc.inputs)?,
        r.space_list("outputs", &doc.outputs)?,
        r.slices("", &doc.slices)?,
    );
    let report = d.validate();
    if report.is_ok() {
        Ok(d)
    } else {
        Err(SerialError::Type(report))
    }
}

pub fn parse(text: &str) -> Result<Diagram, SerialError> {
    let doc: DiagramDoc = serde_json::from_str(text).map_err(|e| SerialError::Syntax {
        message: e.to_string(),
        line: e.line(),
        column: e.column(),
    })?;
    from_document(&doc)
}

pub fn read_file(path: &Path) -> Result<Diagram, SerialError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        let path = path.display().to_string();
        if e.kind() == io::ErrorKind::NotFound {
            SerialError::NotFound { path }
        } else {
            SerialError::Io { path, message: e.to_string() }
        }
    })?;
    parse(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{build_grover_diagram, indicator, register};

    fn grover() -> Diagram {
        let f = indicator(&register(2).unwrap(), &[3]).unwrap();
        build_grover_diagram(2, &f, 1).unwrap()
    }

    #[test]
    fn grover_diagram_round_trips() {
        let d = grover();
        let text = print(&d);
        let back = parse(&text).unwrap();
        assert_eq!(back, d);
        assert_eq!(print(&back), text);
    }

    #[test]
    fn syntax_errors_carry_a_position() {
        match parse("{\n  \"version\": 1,\n  oops\n}") {
            Err(SerialError::Syntax { line: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let mut v = to_value(&grover());
        v["extra"] = serde_json::json!(1);
        assert_eq!(parse(&v.to_string()).unwrap_err().code(), "parse-error");
    }

    #[test]
    fn mismatched_wire_is_a_type_error() {
        let text = r#"{
            "version": 1,
            "spaces": [{"name": "S", "kind": "set", "dimension": 2}, {"name": "T", "kind": "set", "dimension": 2}],
            "inputs": [],
            "outputs": [],
            "slices": [[{"variant": "Unit", "space": "S"}], [{"variant": "Counit", "space": "T"}]]
        }"#;
        match parse(text) {
            Err(SerialError::Type(report)) => assert_eq!(report.mismatches[0].slice, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_space_is_reported_with_its_location() {
        let text = r#"{"version": 1, "spaces": [], "inputs": [], "outputs": [],
                       "slices": [[{"variant": "Unit", "space": "S"}]]}"#;
        match parse(text) {
            Err(SerialError::Content { at, .. }) => assert_eq!(at, "slices[0][0]"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_file() {
        let err = read_file(Path::new("/nonexistent/diagram.json")).unwrap_err();
        assert_eq!(err.code(), "io-not-found");
    }
}
