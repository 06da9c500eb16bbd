//! Finite groups given by multiplication table, with optional character tables.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::space::SpaceLabel;
use crate::tolerance;
use crate::DiagramError;

#[derive(Clone, Debug, PartialEq)]
pub struct GroupSpec {
    name: String,
    multiplication_table: Vec<Vec<usize>>,
    identity_index: usize,
    /// Rows are irreps, columns are group elements.
    character_table: Option<Vec<Vec<Complex64>>>,
}

impl GroupSpec {
    /// Builds and checks a group. The table must be a Latin square with a
    /// two-sided unit, and the characters (if any) must be orthogonal.
    pub fn new(
        name: impl Into<String>,
        multiplication_table: Vec<Vec<usize>>,
        identity_index: usize,
        character_table: Option<Vec<Vec<Complex64>>>,
    ) -> Result<Self, DiagramError> {
        let group = Self { name: name.into(), multiplication_table, identity_index, character_table };
        group.check()?;
        Ok(group)
    }

    fn invalid(&self, reason: impl Into<String>) -> DiagramError {
        DiagramError::InvalidGroup { name: self.name.clone(), reason: reason.into() }
    }

    fn check(&self) -> Result<(), DiagramError> {
        let n = self.multiplication_table.len();
        if n == 0 {
            return Err(self.invalid("empty group"));
        }
        if self.name.is_empty() {
            return Err(self.invalid("group name is empty"));
        }
        for row in &self.multiplication_table {
            if row.len() != n {
                return Err(self.invalid("multiplication table is not square"));
            }
            if !is_permutation(row.iter().copied(), n) {
                return Err(self.invalid("multiplication table rows are not permutations"));
            }
        }
        for col in 0..n {
            if !is_permutation(self.multiplication_table.iter().map(|r| r[col]), n) {
                return Err(self.invalid("multiplication table columns are not permutations"));
            }
        }
        let e = self.identity_index;
        if e >= n {
            return Err(self.invalid(format!("identity index {e} out of range")));
        }
        for g in 0..n {
            if self.multiply(e, g) != g || self.multiply(g, e) != g {
                return Err(self.invalid(format!("element {e} is not a two-sided unit")));
            }
        }
        if let Some(table) = &self.character_table {
            for (i, row) in table.iter().enumerate() {
                if row.len() != n {
                    return Err(self.invalid(format!("character row {i} has length {}", row.len())));
                }
            }
            for (i, ci) in table.iter().enumerate() {
                for (j, cj) in table.iter().enumerate() {
                    let inner: Complex64 = ci.iter().zip(cj).map(|(a, b)| a * b.conj()).sum();
                    let expected = if i == j { n as f64 } else { 0.0 };
                    if (inner - expected).norm() > tolerance::CHARACTER_ORTHOGONALITY {
                        return Err(self.invalid(format!(
                            "characters {i} and {j} violate orthogonality: inner product {inner}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `Z_n` with characters `χ_j(g) = exp(2πi·jg/n)`.
    pub fn cyclic(order: usize) -> Result<Self, DiagramError> {
        if order == 0 {
            return Err(DiagramError::InvalidGroup { name: "Z0".into(), reason: "order must be positive".into() });
        }
        let table = (0..order).map(|g| (0..order).map(|h| (g + h) % order).collect()).collect();
        let chars = (0..order)
            .map(|j| {
                (0..order)
                    .map(|g| snap(Complex64::from_polar(1.0, 2.0 * PI * ((j * g) % order) as f64 / order as f64)))
                    .collect()
            })
            .collect();
        Self::new(format!("Z{order}"), table, 0, Some(chars))
    }

    /// The symmetric group on three letters, elements in lexicographic
    /// order of their one-line notation.
    pub fn symmetric3() -> Self {
        let perms: Vec<[usize; 3]> =
            vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).expect("closed under composition");
        // (g·h)(x) = g(h(x))
        let table = perms
            .iter()
            .map(|g| perms.iter().map(|h| index([g[h[0]], g[h[1]], g[h[2]]])).collect())
            .collect();
        let sign = |p: &[usize; 3]| {
            let inversions = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            if inversions % 2 == 0 { 1.0 } else { -1.0 }
        };
        let fixed = |p: &[usize; 3]| (0..3).filter(|&i| p[i] == i).count() as f64;
        let chars = vec![
            perms.iter().map(|_| Complex64::new(1.0, 0.0)).collect(),
            perms.iter().map(|p| Complex64::new(sign(p), 0.0)).collect(),
            perms.iter().map(|p| Complex64::new(fixed(p) - 1.0, 0.0)).collect(),
        ];
        Self::new("S3", table, 0, Some(chars)).expect("S3 is a group")
    }

    /// `A × B` with element `(a, b)` at index `a·|B| + b`.
    pub fn direct_product(a: &GroupSpec, b: &GroupSpec) -> Result<Self, DiagramError> {
        let (na, nb) = (a.order(), b.order());
        let table = (0..na * nb)
            .map(|x| {
                (0..na * nb)
                    .map(|y| a.multiply(x / nb, y / nb) * nb + b.multiply(x % nb, y % nb))
                    .collect()
            })
            .collect();
        let chars = match (&a.character_table, &b.character_table) {
            (Some(ca), Some(cb)) => Some(
                ca.iter()
                    .flat_map(|ra| cb.iter().map(move |rb| (ra, rb)))
                    .map(|(ra, rb)| (0..na * nb).map(|x| ra[x / nb] * rb[x % nb]).collect())
                    .collect(),
            ),
            _ => None,
        };
        Self::new(format!("{}x{}", a.name, b.name), table, a.identity_index * nb + b.identity_index, chars)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.multiplication_table.len()
    }

    pub fn identity_index(&self) -> usize {
        self.identity_index
    }

    pub fn multiplication_table(&self) -> &[Vec<usize>] {
        &self.multiplication_table
    }

    pub fn character_table(&self) -> Option<&[Vec<Complex64>]> {
        self.character_table.as_deref()
    }

    pub fn multiply(&self, g: usize, h: usize) -> usize {
        self.multiplication_table[g][h]
    }

    /// The wire carrying this group's algebra.
    pub fn space(&self) -> SpaceLabel {
        SpaceLabel::group_space(&self.name, self.order())
    }

    pub fn irrep_count(&self) -> usize {
        self.character_table.as_ref().map_or(0, Vec::len)
    }

    pub fn character(&self, irrep: usize) -> Option<&[Complex64]> {
        self.character_table.as_ref()?.get(irrep).map(Vec::as_slice)
    }

    /// `χ(e)`, rounded to the nearest integer.
    pub fn irrep_dimension(&self, irrep: usize) -> Option<usize> {
        self.character(irrep).map(|c| c[self.identity_index].re.round() as usize)
    }

    pub fn is_trivial_irrep(&self, irrep: usize) -> bool {
        self.character(irrep)
            .is_some_and(|c| c.iter().all(|x| (x - 1.0).norm() <= tolerance::CHARACTER_ORTHOGONALITY))
    }
}

fn is_permutation(values: impl Iterator<Item = usize>, n: usize) -> bool {
    let mut seen = vec![false; n];
    for v in values {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return false;
        }
    }
    seen.into_iter().all(|s| s)
}

/// Rounds components lying within 1e-15 of an integer; keeps roots of unity
/// like `exp(iπ)` exact.
fn snap(z: Complex64) -> Complex64 {
    let fix = |x: f64| if (x - x.round()).abs() < 1e-15 { x.round() + 0.0 } else { x };
    Complex64::new(fix(z.re), fix(z.im))
}
