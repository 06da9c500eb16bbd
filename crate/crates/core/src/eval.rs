//! Functorial evaluation: composition goes to matrix product, juxtaposition
//! to the Kronecker product.

use num_complex::Complex64;

use crate::dense::{DenseTensor, ONE};
use crate::diagram::Diagram;
use crate::generator::Generator;
use crate::space::total_dimension;
use crate::EvalError;

/// Default cap on the number of entries of any evaluated matrix.
pub const DEFAULT_MAX_ENTRIES: usize = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalOptions {
    pub max_entries: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self { max_entries: DEFAULT_MAX_ENTRIES }
    }
}

pub fn eval_generator(g: &Generator) -> Result<DenseTensor, EvalError> {
    g.matrix(&EvalOptions::default())
}

pub fn eval(d: &Diagram) -> Result<DenseTensor, EvalError> {
    eval_with(d, &EvalOptions::default())
}

fn check_cap(rows: Option<usize>, cols: Option<usize>, cap: usize) -> Result<(), EvalError> {
    let entries = rows.zip(cols).and_then(|(r, c)| r.checked_mul(c));
    match entries {
        Some(e) if e <= cap => Ok(()),
        _ => Err(EvalError::CapExceeded { entries: entries.map_or(u128::MAX, |e| e as u128), cap }),
    }
}

/// Evaluates slice by slice, starting from the inputs.
pub fn eval_with(d: &Diagram, opts: &EvalOptions) -> Result<DenseTensor, EvalError> {
    let report = d.validate();
    if !report.is_ok() {
        return Err(EvalError::IllTyped(report));
    }
    let in_dim = total_dimension(d.inputs());
    check_cap(total_dimension(d.outputs()), in_dim, opts.max_entries)?;
    let in_dim = in_dim.expect("checked");
    let mut acc: Option<DenseTensor> = None;
    for slice in d.slices() {
        if slice.iter().all(Generator::is_identity) {
            continue;
        }
        let rows = slice.iter().try_fold(1usize, |a, g| a.checked_mul(total_dimension(&g.outputs())?));
        let cols = slice.iter().try_fold(1usize, |a, g| a.checked_mul(total_dimension(&g.inputs())?));
        check_cap(rows, cols, opts.max_entries)?;
        let mut m = DenseTensor::scalar(ONE);
        for g in slice {
            m = m.kron(&g.matrix(opts)?);
        }
        acc = Some(match acc {
            None => m,
            Some(prev) => {
                check_cap(Some(m.rows()), Some(prev.cols()), opts.max_entries)?;
                m.matmul(&prev)?
            }
        });
    }
    Ok(acc.unwrap_or_else(|| DenseTensor::identity(in_dim)))
}

/// The value of a closed diagram.
pub fn scalar_of(d: &Diagram) -> Result<Complex64, EvalError> {
    if !d.is_closed() {
        return Err(EvalError::NotClosed { inputs: d.inputs().len(), outputs: d.outputs().len() });
    }
    Ok(eval(d)?.get(0, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::make_generator;
    use crate::group::GroupSpec;
    use crate::space::SpaceLabel;
    use std::sync::Arc;

    fn s(n: usize) -> SpaceLabel {
        SpaceLabel::set("S", n).unwrap()
    }

    fn real(rows: usize, cols: usize, xs: &[f64]) -> DenseTensor {
        DenseTensor::from_entries(rows, cols, xs.iter().map(|&x| Complex64::new(x, 0.0)).collect()).unwrap()
    }

    #[test]
    fn mult_on_two_elements() {
        let m = eval_generator(&Generator::Mult(s(2))).unwrap();
        assert_eq!(m, real(2, 4, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]));
    }

    #[test]
    fn unit_is_all_ones() {
        assert_eq!(eval_generator(&Generator::Unit(s(3))).unwrap(), real(3, 1, &[1.0, 1.0, 1.0]));
    }

    #[test]
    fn sign_character_at_the_generator() {
        let z2 = Arc::new(GroupSpec::cyclic(2).unwrap());
        let rep = Generator::RepBox { group: z2.clone(), irrep: 1, dimension: 1 };
        let d = make_generator(Generator::Point { space: z2.space(), element: 1 })
            .unwrap()
            .compose(&make_generator(rep).unwrap())
            .unwrap();
        assert_eq!(scalar_of(&d).unwrap(), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn point_then_its_effect_is_one() {
        let d = make_generator(Generator::Point { space: s(3), element: 0 })
            .unwrap()
            .compose(&make_generator(Generator::PointEffect { space: s(3), element: 0 }).unwrap())
            .unwrap();
        assert_eq!(scalar_of(&d).unwrap(), ONE);
    }

    #[test]
    fn empty_diagram_is_one() {
        assert_eq!(eval(&Diagram::empty()).unwrap(), DenseTensor::scalar(ONE));
    }

    #[test]
    fn unit_then_counit_counts_elements() {
        let d = make_generator(Generator::Unit(s(4)))
            .unwrap()
            .compose(&make_generator(Generator::Counit(s(4))).unwrap())
            .unwrap();
        assert_eq!(scalar_of(&d).unwrap(), Complex64::new(4.0, 0.0));
    }

    #[test]
    fn open_diagram_has_no_scalar() {
        let d = make_generator(Generator::Unit(s(2))).unwrap();
        assert!(matches!(scalar_of(&d), Err(EvalError::NotClosed { inputs: 0, outputs: 1 })));
    }

    #[test]
    fn cap_is_enforced() {
        let d = make_generator(Generator::Comult(s(64))).unwrap();
        let err = eval_with(&d, &EvalOptions { max_entries: 1000 }).unwrap_err();
        assert!(matches!(err, EvalError::CapExceeded { .. }));
    }

    #[test]
    fn ill_typed_diagrams_are_refused() {
        let d = Diagram::from_slices(vec![], vec![s(2)], vec![vec![Generator::Counit(s(2))]]);
        assert!(matches!(eval(&d), Err(EvalError::IllTyped(_))));
    }
}
