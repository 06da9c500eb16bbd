//! Dense complex matrices: the semantics of diagrams.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::EvalError;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A `rows × cols` matrix stored row-major. Rows index the output basis,
/// columns the input basis.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseTensor {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl DenseTensor {
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self, EvalError> {
        if rows == 0 || cols == 0 || rows.checked_mul(cols) != Some(entries.len()) {
            return Err(EvalError::Shape(format!(
                "{} entries cannot form a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![ZERO; rows * cols] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.entries[i * dim + i] = ONE;
        }
        m
    }

    pub fn scalar(value: Complex64) -> Self {
        Self { rows: 1, cols: 1, entries: vec![value] }
    }

    /// A column vector (a state).
    pub fn column(values: Vec<Complex64>) -> Self {
        Self { rows: values.len(), cols: 1, entries: values }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row * self.cols + col] = value;
    }

    pub fn is_scalar(&self) -> bool {
        self.rows == 1 && self.cols == 1
    }

    /// `self · rhs`.
    pub fn matmul(&self, rhs: &DenseTensor) -> Result<DenseTensor, EvalError> {
        if self.cols != rhs.rows {
            return Err(EvalError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = DenseTensor::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let row = &self.entries[i * self.cols..(i + 1) * self.cols];
            let dst = &mut out.entries[i * rhs.cols..(i + 1) * rhs.cols];
            for (k, &a) in row.iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                let src = &rhs.entries[k * rhs.cols..(k + 1) * rhs.cols];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product; `self` owns the slow (left-wire) index.
    pub fn kron(&self, rhs: &DenseTensor) -> DenseTensor {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut entries = vec![ZERO; rows * cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == ZERO {
                    continue;
                }
                for k in 0..rhs.rows {
                    let base = (i * rhs.rows + k) * cols + j * rhs.cols;
                    for l in 0..rhs.cols {
                        entries[base + l] = a * rhs.entries[k * rhs.cols + l];
                    }
                }
            }
        }
        DenseTensor { rows, cols, entries }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> DenseTensor {
        let mut out = DenseTensor::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[j * self.rows + i] = self.get(i, j).conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> DenseTensor {
        let mut out = DenseTensor::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[j * self.rows + i] = self.get(i, j);
            }
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> DenseTensor {
        DenseTensor { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|x| x * factor).collect() }
    }

    pub fn add(&self, rhs: &DenseTensor) -> Result<DenseTensor, EvalError> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(EvalError::Shape(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect();
        Ok(DenseTensor { rows: self.rows, cols: self.cols, entries })
    }

    /// Max entrywise modulus of the difference; `∞` when shapes differ.
    pub fn max_abs_diff(&self, other: &DenseTensor) -> f64 {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return f64::INFINITY;
        }
        self.entries.iter().zip(&other.entries).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &DenseTensor, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TensorDoc {
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 2]>,
}

impl Serialize for DenseTensor {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        TensorDoc {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DenseTensor {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let doc = TensorDoc::deserialize(deserializer)?;
        let entries = doc.entries.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
        DenseTensor::from_entries(doc.rows, doc.cols, entries).map_err(serde::de::Error::custom)
    }
}
