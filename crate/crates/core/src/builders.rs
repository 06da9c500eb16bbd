//! Diagrams for the Grover algorithm.
//!
//! The register is a wire `S` of dimension `2^n`. The oracle is the composite
//! `σ = (id ⊗ χ_sign) ∘ (id ⊗ f) ∘ m†`: copy the basis element, compute
//! `f(x) ∈ Z_2`, and feed it to the sign character, leaving the phase
//! `(−1)^{f(x)}` on the register. Inversion about the mean is the sum
//! `−id + (2/|S|)·u∘u†`. Unit(S) is unnormalized, so the preparation carries
//! an explicit `1/√|S|` scalar box.

use std::sync::Arc;

use num_complex::Complex64;

use crate::diagram::{make_generator, Diagram};
use crate::eval::DEFAULT_MAX_ENTRIES;
use crate::generator::{FunctionBox, Generator};
use crate::group::GroupSpec;
use crate::space::SpaceLabel;
use crate::DiagramError;

/// Index of the sign irrep in the character table of [`z2`].
pub const SIGN_IRREP: usize = 1;

pub fn z2() -> Arc<GroupSpec> {
    Arc::new(GroupSpec::cyclic(2).expect("Z2 is a group"))
}

/// The register wire for `n` qubits.
pub fn register(n: u32) -> Result<SpaceLabel, DiagramError> {
    SpaceLabel::qubit_register("S", n)
}

/// The indicator `f: S → Z_2` of `marked`.
pub fn indicator(space: &SpaceLabel, marked: &[usize]) -> Result<FunctionBox, DiagramError> {
    let mut table = vec![0; space.dimension()];
    for &x in marked {
        *table.get_mut(x).ok_or_else(|| {
            DiagramError::InvalidFunction(format!("marked element {x} is outside {space}"))
        })? = 1;
    }
    FunctionBox::new(space.clone(), z2().space(), table)
}

fn check_oracle_function(f: &FunctionBox) -> Result<Arc<GroupSpec>, DiagramError> {
    let group = z2();
    if f.codomain != group.space() {
        return Err(DiagramError::InvalidFunction(format!("codomain {} is not {}", f.codomain, group.space())));
    }
    Generator::FunctionBox(f.clone()).check().map_err(|e| DiagramError::InvalidFunction(e.to_string()))?;
    Ok(group)
}

/// The phase oracle `|x⟩ ↦ (−1)^{f(x)}|x⟩` built from copy, `f`, and the sign character.
pub fn sign_oracle_block(f: &FunctionBox) -> Result<Diagram, DiagramError> {
    let group = check_oracle_function(f)?;
    let s = f.domain.clone();
    Diagram::from_layers(vec![
        vec![Generator::Comult(s.clone())],
        vec![Generator::Identity(s.clone()), Generator::FunctionBox(f.clone())],
        vec![Generator::Identity(s), Generator::RepBox { group, irrep: SIGN_IRREP, dimension: 1 }],
    ])
}

/// `−id + (2/|S|)·u∘u†`.
pub fn mean_inversion_block(space: &SpaceLabel) -> Diagram {
    let n = space.dimension() as f64;
    let reflect = Diagram::from_slices(
        vec![space.clone()],
        vec![space.clone()],
        vec![vec![Generator::Identity(space.clone()), Generator::scalar(Complex64::new(-1.0, 0.0))]],
    );
    let mean = Diagram::from_slices(
        vec![space.clone()],
        vec![space.clone()],
        vec![
            vec![Generator::Counit(space.clone()), Generator::scalar(Complex64::new(2.0 / n, 0.0))],
            vec![Generator::Unit(space.clone())],
        ],
    );
    Diagram::from_slices(
        vec![space.clone()],
        vec![space.clone()],
        vec![vec![Generator::Sum(vec![reflect, mean])]],
    )
}

/// `(1/√|S|)·Σ_i |i⟩`.
pub fn uniform_preparation(space: &SpaceLabel) -> Diagram {
    let norm = 1.0 / (space.dimension() as f64).sqrt();
    Diagram::from_slices(
        vec![],
        vec![space.clone()],
        vec![vec![Generator::Unit(space.clone()), Generator::scalar(Complex64::new(norm, 0.0))]],
    )
}

/// Preparation followed by `k` rounds of oracle then inversion about the mean.
pub fn build_grover_diagram(n: u32, f: &FunctionBox, k: usize) -> Result<Diagram, DiagramError> {
    build_grover_diagram_capped(n, f, k, DEFAULT_MAX_ENTRIES)
}

pub fn build_grover_diagram_capped(
    n: u32,
    f: &FunctionBox,
    k: usize,
    max_entries: usize,
) -> Result<Diagram, DiagramError> {
    if k == 0 {
        return Err(DiagramError::InvalidIterations(k));
    }
    let s = register(n)?;
    if f.domain != s {
        return Err(DiagramError::InvalidFunction(format!("domain {} is not the register {s}", f.domain)));
    }
    let oracle = sign_oracle_block(f)?;
    let inversion = mean_inversion_block(&s);
    let round = oracle.compose(&inversion)?;
    // The largest slice is id ⊗ f: S⊗S → S⊗Z_2.
    let widest = (s.dimension() as u128).pow(3) * 2;
    if widest > max_entries as u128 {
        return Err(DiagramError::DimensionCapExceeded { entries: widest, cap: max_entries });
    }
    let mut d = uniform_preparation(&s);
    for _ in 0..k {
        d = d.compose(&round)?;
    }
    Ok(d)
}

/// `u† ∘ σ ∘ u`, whose value is `Σ_x (−1)^{f(x)}`.
pub fn sigma_sum_diagram(f: &FunctionBox) -> Result<Diagram, DiagramError> {
    let oracle = sign_oracle_block(f)?;
    let unit = make_generator(Generator::Unit(f.domain.clone()))?;
    let counit = make_generator(Generator::Counit(f.domain.clone()))?;
    Diagram::sequence([&unit, &oracle, &counit])
}
