//! The boxes a diagram is built from.

use std::sync::Arc;

use num_complex::Complex64;

use crate::dense::{DenseTensor, ONE};
use crate::diagram::Diagram;
use crate::eval::{eval_with, EvalOptions};
use crate::group::GroupSpec;
use crate::space::{total_dimension, wires, SpaceLabel};
use crate::{DiagramError, EvalError};

/// A function between finite sets, stored as its value table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FunctionBox {
    pub domain: SpaceLabel,
    pub codomain: SpaceLabel,
    /// `table[s]` is the image of basis element `s`.
    pub table: Vec<usize>,
}

impl FunctionBox {
    pub fn new(domain: SpaceLabel, codomain: SpaceLabel, table: Vec<usize>) -> Result<Self, DiagramError> {
        let f = Self { domain, codomain, table };
        f.check()?;
        Ok(f)
    }

    pub fn identity(space: SpaceLabel) -> Self {
        let table = (0..space.dimension()).collect();
        Self { domain: space.clone(), codomain: space, table }
    }

    pub fn apply(&self, s: usize) -> usize {
        self.table[s]
    }

    fn check(&self) -> Result<(), DiagramError> {
        let invalid = |reason: String| DiagramError::InvalidVariant { variant: "FunctionBox", reason };
        if self.table.len() != self.domain.dimension() {
            return Err(invalid(format!(
                "table has {} entries but domain {} has dimension {}",
                self.table.len(),
                self.domain,
                self.domain.dimension()
            )));
        }
        if let Some((s, &t)) = self.table.iter().enumerate().find(|(_, &t)| t >= self.codomain.dimension()) {
            return Err(invalid(format!("f({s}) = {t} is outside codomain {}", self.codomain)));
        }
        Ok(())
    }

    /// The 0/1 matrix with a one at `(f(s), s)`.
    pub fn matrix(&self) -> DenseTensor {
        let mut m = DenseTensor::zeros(self.codomain.dimension(), self.domain.dimension());
        for (s, &t) in self.table.iter().enumerate() {
            m.set(t, s, ONE);
        }
        m
    }
}

/// A named box with an explicit matrix, e.g. a linear map `p: H → J` or a scalar.
#[derive(Clone, Debug, PartialEq)]
pub struct CustomBox {
    pub name: String,
    pub inputs: Vec<SpaceLabel>,
    pub outputs: Vec<SpaceLabel>,
    pub matrix: DenseTensor,
}

impl CustomBox {
    pub fn new(
        name: impl Into<String>,
        inputs: Vec<SpaceLabel>,
        outputs: Vec<SpaceLabel>,
        matrix: DenseTensor,
    ) -> Result<Self, DiagramError> {
        let b = Self { name: name.into(), inputs: wires(inputs), outputs: wires(outputs), matrix };
        b.check()?;
        Ok(b)
    }

    fn check(&self) -> Result<(), DiagramError> {
        let rows = total_dimension(&self.outputs);
        let cols = total_dimension(&self.inputs);
        if rows != Some(self.matrix.rows()) || cols != Some(self.matrix.cols()) {
            return Err(DiagramError::InvalidVariant {
                variant: "CustomBox",
                reason: format!(
                    "box '{}' has a {}x{} matrix but its wires need {}x{}",
                    self.name,
                    self.matrix.rows(),
                    self.matrix.cols(),
                    rows.map_or("overflow".into(), |r| r.to_string()),
                    cols.map_or("overflow".into(), |c| c.to_string()),
                ),
            });
        }
        Ok(())
    }
}

/// Name used for scalar boxes produced by builders and rewrites.
pub const SCALAR_BOX: &str = "scalar";

#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    Identity(SpaceLabel),
    /// `m: S⊗S → S`, `|i⟩⊗|j⟩ ↦ δ_ij |i⟩`.
    Mult(SpaceLabel),
    /// `u: 1 → S`, `Σ_i |i⟩`.
    Unit(SpaceLabel),
    /// `m†: S → S⊗S`, copying basis elements.
    Comult(SpaceLabel),
    /// `u†: S → 1`, deletion.
    Counit(SpaceLabel),
    FunctionBox(FunctionBox),
    /// A classical point `|x⟩: 1 → S`.
    Point { space: SpaceLabel, element: usize },
    /// `⟨x|: S → 1`.
    PointEffect { space: SpaceLabel, element: usize },
    /// Linearized group multiplication `G⊗G → G`.
    GroupMult(Arc<GroupSpec>),
    /// The group unit `|e⟩: 1 → G`.
    GroupUnit(Arc<GroupSpec>),
    /// The character of an irrep as an effect `G → 1`, `|g⟩ ↦ χ(g)`. For
    /// one-dimensional irreps this is the representation itself.
    RepBox { group: Arc<GroupSpec>, irrep: usize, dimension: usize },
    CustomBox(CustomBox),
    /// Crosses two wires: `A⊗B → B⊗A`.
    Swap(SpaceLabel, SpaceLabel),
    /// Formal sum of diagrams sharing one interface.
    Sum(Vec<Diagram>),
}

impl Generator {
    pub fn scalar(value: Complex64) -> Generator {
        Generator::CustomBox(CustomBox {
            name: SCALAR_BOX.into(),
            inputs: vec![],
            outputs: vec![],
            matrix: DenseTensor::scalar(value),
        })
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            Generator::Identity(_) => "Identity",
            Generator::Mult(_) => "Mult",
            Generator::Unit(_) => "Unit",
            Generator::Comult(_) => "Comult",
            Generator::Counit(_) => "Counit",
            Generator::FunctionBox(_) => "FunctionBox",
            Generator::Point { .. } => "Point",
            Generator::PointEffect { .. } => "PointEffect",
            Generator::GroupMult(_) => "GroupMult",
            Generator::GroupUnit(_) => "GroupUnit",
            Generator::RepBox { .. } => "RepBox",
            Generator::CustomBox(_) => "CustomBox",
            Generator::Swap(..) => "Swap",
            Generator::Sum(_) => "Sum",
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, Generator::Identity(_))
    }

    /// The scalar value of a scalar box, if this is one.
    pub fn scalar_value(&self) -> Option<Complex64> {
        match self {
            Generator::CustomBox(b) if b.inputs.is_empty() && b.outputs.is_empty() => Some(b.matrix.get(0, 0)),
            _ => None,
        }
    }

    pub fn check(&self) -> Result<(), DiagramError> {
        let invalid = |reason: String| DiagramError::InvalidVariant { variant: self.variant_name(), reason };
        match self {
            Generator::FunctionBox(f) => f.check(),
            Generator::Point { space, element } | Generator::PointEffect { space, element } => {
                if *element >= space.dimension() {
                    Err(invalid(format!("element {element} out of range for {space}")))
                } else {
                    Ok(())
                }
            }
            Generator::RepBox { group, irrep, dimension } => match group.irrep_dimension(*irrep) {
                None => Err(invalid(format!("irrep {irrep} not in the character table of {}", group.name()))),
                Some(d) if d != *dimension => {
                    Err(invalid(format!("irrep {irrep} of {} has dimension {d}, not {dimension}", group.name())))
                }
                Some(_) => Ok(()),
            },
            Generator::CustomBox(b) => b.check(),
            Generator::Sum(terms) => {
                let first = terms.first().ok_or_else(|| invalid("a sum needs at least one term".into()))?;
                for (i, term) in terms.iter().enumerate() {
                    if term.inputs() != first.inputs() || term.outputs() != first.outputs() {
                        return Err(invalid(format!("term {i} has a different interface from term 0")));
                    }
                    let report = term.validate();
                    if !report.is_ok() {
                        return Err(invalid(format!("term {i} is ill-typed: {report}")));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn inputs(&self) -> Vec<SpaceLabel> {
        match self {
            Generator::Identity(s) | Generator::Comult(s) | Generator::Counit(s) => wires([s.clone()]),
            Generator::Mult(s) => wires([s.clone(), s.clone()]),
            Generator::Unit(_) | Generator::Point { .. } | Generator::GroupUnit(_) => vec![],
            Generator::FunctionBox(f) => wires([f.domain.clone()]),
            Generator::PointEffect { space, .. } => wires([space.clone()]),
            Generator::GroupMult(g) => vec![g.space(), g.space()],
            Generator::RepBox { group, .. } => vec![group.space()],
            Generator::CustomBox(b) => b.inputs.clone(),
            Generator::Swap(a, b) => wires([a.clone(), b.clone()]),
            Generator::Sum(terms) => terms.first().map(|t| t.inputs().to_vec()).unwrap_or_default(),
        }
    }

    pub fn outputs(&self) -> Vec<SpaceLabel> {
        match self {
            Generator::Identity(s) | Generator::Mult(s) | Generator::Unit(s) => wires([s.clone()]),
            Generator::Comult(s) => wires([s.clone(), s.clone()]),
            Generator::Counit(_) | Generator::PointEffect { .. } | Generator::RepBox { .. } => vec![],
            Generator::FunctionBox(f) => wires([f.codomain.clone()]),
            Generator::Point { space, .. } => wires([space.clone()]),
            Generator::GroupMult(g) | Generator::GroupUnit(g) => vec![g.space()],
            Generator::CustomBox(b) => b.outputs.clone(),
            Generator::Swap(a, b) => wires([b.clone(), a.clone()]),
            Generator::Sum(terms) => terms.first().map(|t| t.outputs().to_vec()).unwrap_or_default(),
        }
    }

    pub fn adjoint(&self) -> Generator {
        let boxed = |name: &str, g: &Generator| -> Generator {
            let matrix = g.matrix(&EvalOptions::default()).expect("valid generator").adjoint();
            Generator::CustomBox(CustomBox { name: name.into(), inputs: g.outputs(), outputs: g.inputs(), matrix })
        };
        match self {
            Generator::Identity(s) => Generator::Identity(s.clone()),
            Generator::Mult(s) => Generator::Comult(s.clone()),
            Generator::Comult(s) => Generator::Mult(s.clone()),
            Generator::Unit(s) => Generator::Counit(s.clone()),
            Generator::Counit(s) => Generator::Unit(s.clone()),
            Generator::Point { space, element } => Generator::PointEffect { space: space.clone(), element: *element },
            Generator::PointEffect { space, element } => Generator::Point { space: space.clone(), element: *element },
            Generator::FunctionBox(_) => boxed("FunctionBox†", self),
            Generator::GroupMult(_) => boxed("GroupMult†", self),
            Generator::GroupUnit(g) => Generator::PointEffect { space: g.space(), element: g.identity_index() },
            Generator::RepBox { .. } => boxed("RepBox†", self),
            Generator::CustomBox(b) => Generator::CustomBox(CustomBox {
                name: toggle_dagger(&b.name),
                inputs: b.outputs.clone(),
                outputs: b.inputs.clone(),
                matrix: b.matrix.adjoint(),
            }),
            Generator::Swap(a, b) => Generator::Swap(b.clone(), a.clone()),
            Generator::Sum(terms) => Generator::Sum(terms.iter().map(Diagram::dagger).collect()),
        }
    }

    /// The generator's matrix (rows: outputs, columns: inputs).
    pub fn matrix(&self, opts: &EvalOptions) -> Result<DenseTensor, EvalError> {
        self.check().map_err(EvalError::InvalidGenerator)?;
        let dim = |s: &SpaceLabel| s.dimension();
        Ok(match self {
            Generator::Identity(s) => DenseTensor::identity(dim(s)),
            Generator::Mult(s) => {
                let n = dim(s);
                let mut m = DenseTensor::zeros(n, n * n);
                for i in 0..n {
                    m.set(i, i * n + i, ONE);
                }
                m
            }
            Generator::Comult(s) => Generator::Mult(s.clone()).matrix(opts)?.transpose(),
            Generator::Unit(s) => DenseTensor::column(vec![ONE; dim(s)]),
            Generator::Counit(s) => Generator::Unit(s.clone()).matrix(opts)?.transpose(),
            Generator::FunctionBox(f) => f.matrix(),
            Generator::Point { space, element } => basis_column(dim(space), *element),
            Generator::PointEffect { space, element } => basis_column(dim(space), *element).transpose(),
            Generator::GroupMult(g) => {
                let n = g.order();
                let mut m = DenseTensor::zeros(n, n * n);
                for a in 0..n {
                    for b in 0..n {
                        m.set(g.multiply(a, b), a * n + b, ONE);
                    }
                }
                m
            }
            Generator::GroupUnit(g) => basis_column(g.order(), g.identity_index()),
            Generator::RepBox { group, irrep, .. } => {
                let chi = group.character(*irrep).expect("checked above");
                DenseTensor::from_entries(1, chi.len(), chi.to_vec())?
            }
            Generator::CustomBox(b) => b.matrix.clone(),
            Generator::Swap(a, b) => {
                let (da, db) = (dim(a), dim(b));
                let mut m = DenseTensor::zeros(da * db, da * db);
                for i in 0..da {
                    for j in 0..db {
                        m.set(j * da + i, i * db + j, ONE);
                    }
                }
                m
            }
            Generator::Sum(terms) => {
                let mut acc = eval_with(&terms[0], opts)?;
                for t in &terms[1..] {
                    acc = acc.add(&eval_with(t, opts)?)?;
                }
                acc
            }
        })
    }
}

fn basis_column(dim: usize, element: usize) -> DenseTensor {
    let mut v = DenseTensor::zeros(dim, 1);
    v.set(element, 0, ONE);
    v
}

fn toggle_dagger(name: &str) -> String {
    match name.strip_suffix('†') {
        Some(base) => base.to_string(),
        None => format!("{name}†"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: usize) -> SpaceLabel {
        SpaceLabel::set("S", n).unwrap()
    }

    #[test]
    fn function_table_must_be_total_and_in_range() {
        assert!(FunctionBox::new(s(3), s(2), vec![0, 1]).is_err());
        assert!(FunctionBox::new(s(2), s(2), vec![0, 2]).is_err());
        assert!(FunctionBox::new(s(2), s(2), vec![1, 1]).is_ok());
    }

    #[test]
    fn custom_box_shape_is_checked() {
        assert!(CustomBox::new("p", vec![s(2)], vec![s(3)], DenseTensor::zeros(2, 3)).is_err());
        assert!(CustomBox::new("p", vec![s(2)], vec![s(3)], DenseTensor::zeros(3, 2)).is_ok());
    }

    #[test]
    fn swap_matrix_permutes_basis() {
        let g = Generator::Swap(s(2), SpaceLabel::set("T", 3).unwrap());
        let m = g.matrix(&EvalOptions::default()).unwrap();
        // |1⟩⊗|2⟩ (index 1·3+2 = 5) goes to |2⟩⊗|1⟩ (index 2·2+1 = 5 in T⊗S).
        assert_eq!(m.get(5, 5), ONE);
        // |0⟩⊗|1⟩ (index 1) goes to |1⟩⊗|0⟩ (index 2).
        assert_eq!(m.get(2, 1), ONE);
    }

    #[test]
    fn dagger_name_toggles() {
        assert_eq!(toggle_dagger("p"), "p†");
        assert_eq!(toggle_dagger("p†"), "p");
    }
}
