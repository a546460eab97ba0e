//! Dense complex matrices with basis labels on rows and columns.

use std::collections::HashSet;
use std::fmt::Debug;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spin::BasisIndex;

/// Row/column label: anything cheap to copy and compare.
pub trait Label: Copy + Eq + Hash + Debug {}
impl<T: Copy + Eq + Hash + Debug> Label for T {}

/// Complex matrix whose rows and columns carry basis labels.
///
/// Arithmetic operators panic when labels disagree; that is a programming
/// error, not a data error.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<L: Label = BasisIndex> {
    rows: Vec<L>,
    cols: Vec<L>,
    data: DMatrix<Complex64>,
}

fn check_injective<L: Label>(labels: &[L]) -> Result<()> {
    let mut seen = HashSet::with_capacity(labels.len());
    for l in labels {
        if !seen.insert(*l) {
            return Err(Error::Dimension(format!("duplicate label {l:?}")));
        }
    }
    Ok(())
}

impl<L: Label> CMatrix<L> {
    pub fn zeros(rows: Vec<L>, cols: Vec<L>) -> Self {
        let data = DMatrix::zeros(rows.len(), cols.len());
        CMatrix { rows, cols, data }
    }

    pub fn square_zeros(labels: Vec<L>) -> Self {
        Self::zeros(labels.clone(), labels)
    }

    pub fn identity(labels: Vec<L>) -> Self {
        let n = labels.len();
        CMatrix { rows: labels.clone(), cols: labels, data: DMatrix::identity(n, n) }
    }

    pub fn from_fn(rows: Vec<L>, cols: Vec<L>, mut f: impl FnMut(&L, &L) -> Complex64) -> Self {
        let data = DMatrix::from_fn(rows.len(), cols.len(), |i, j| f(&rows[i], &cols[j]));
        CMatrix { rows, cols, data }
    }

    pub fn from_parts(rows: Vec<L>, cols: Vec<L>, data: DMatrix<Complex64>) -> Result<Self> {
        if data.nrows() != rows.len() || data.ncols() != cols.len() {
            return Err(Error::Dimension(format!(
                "{}x{} data for {} row and {} column labels",
                data.nrows(),
                data.ncols(),
                rows.len(),
                cols.len()
            )));
        }
        check_injective(&rows)?;
        check_injective(&cols)?;
        Ok(CMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> &[L] {
        &self.rows
    }

    pub fn cols(&self) -> &[L] {
        &self.cols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn data(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut DMatrix<Complex64> {
        &mut self.data
    }

    pub fn into_data(self) -> DMatrix<Complex64> {
        self.data
    }

    pub fn row_index(&self, label: &L) -> Option<usize> {
        self.rows.iter().position(|r| r == label)
    }

    pub fn col_index(&self, label: &L) -> Option<usize> {
        self.cols.iter().position(|c| c == label)
    }

    /// Entry by labels; zero when either label is absent.
    pub fn get(&self, row: &L, col: &L) -> Complex64 {
        match (self.row_index(row), self.col_index(col)) {
            (Some(i), Some(j)) => self.data[(i, j)],
            _ => Complex64::new(0.0, 0.0),
        }
    }

    pub fn set(&mut self, row: &L, col: &L, value: Complex64) -> Result<()> {
        let i = self.row_index(row).ok_or_else(|| Error::Dimension(format!("no row {row:?}")))?;
        let j = self.col_index(col).ok_or_else(|| Error::Dimension(format!("no column {col:?}")))?;
        self.data[(i, j)] = value;
        Ok(())
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols
    }

    /// Matrix product, checking that inner labels agree.
    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension("inner labels differ in product".into()));
        }
        Ok(CMatrix { rows: self.rows.clone(), cols: rhs.cols.clone(), data: &self.data * &rhs.data })
    }

    pub fn scale(&self, s: Complex64) -> Self {
        CMatrix { rows: self.rows.clone(), cols: self.cols.clone(), data: &self.data * s }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn adjoint(&self) -> Self {
        CMatrix { rows: self.cols.clone(), cols: self.rows.clone(), data: self.data.adjoint() }
    }

    pub fn transpose(&self) -> Self {
        CMatrix { rows: self.cols.clone(), cols: self.rows.clone(), data: self.data.transpose() }
    }

    pub fn conj(&self) -> Self {
        CMatrix { rows: self.rows.clone(), cols: self.cols.clone(), data: self.data.map(|z| z.conj()) }
    }

    pub fn trace(&self) -> Complex64 {
        self.data.trace()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Largest entrywise difference; labels must agree.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert!(self.same_shape(other), "label mismatch in comparison");
        self.data.iter().zip(other.data.iter()).fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    /// Same entries under new labels (length must match).
    pub fn relabel<M: Label>(&self, rows: Vec<M>, cols: Vec<M>) -> Result<CMatrix<M>> {
        CMatrix::from_parts(rows, cols, self.data.clone())
    }

    /// Reorder rows and columns to the given label orders (a permutation).
    pub fn permuted(&self, rows: &[L], cols: &[L]) -> Result<Self> {
        let ri: Option<Vec<usize>> = rows.iter().map(|r| self.row_index(r)).collect();
        let ci: Option<Vec<usize>> = cols.iter().map(|c| self.col_index(c)).collect();
        let (ri, ci) = match (ri, ci) {
            (Some(r), Some(c)) if r.len() == self.nrows() && c.len() == self.ncols() => (r, c),
            _ => return Err(Error::Dimension("permutation does not cover all labels".into())),
        };
        let data = DMatrix::from_fn(ri.len(), ci.len(), |i, j| self.data[(ri[i], ci[j])]);
        Ok(CMatrix { rows: rows.to_vec(), cols: cols.to_vec(), data })
    }

    /// Sub-matrix on the given row and column labels.
    pub fn submatrix(&self, rows: &[L], cols: &[L]) -> Result<Self> {
        let ri: Option<Vec<usize>> = rows.iter().map(|r| self.row_index(r)).collect();
        let ci: Option<Vec<usize>> = cols.iter().map(|c| self.col_index(c)).collect();
        let (ri, ci) = ri.zip(ci).ok_or_else(|| Error::Dimension("unknown label".into()))?;
        let data = DMatrix::from_fn(ri.len(), ci.len(), |i, j| self.data[(ri[i], ci[j])]);
        Ok(CMatrix { rows: rows.to_vec(), cols: cols.to_vec(), data })
    }
}

/// [a, b] = ab − ba.
pub fn commutator<L: Label>(a: &CMatrix<L>, b: &CMatrix<L>) -> CMatrix<L> {
    &(a * b) - &(b * a)
}

/// {a, b} = ab + ba.
pub fn anticommutator<L: Label>(a: &CMatrix<L>, b: &CMatrix<L>) -> CMatrix<L> {
    &(a * b) + &(b * a)
}

impl<L: Label> Add for &CMatrix<L> {
    type Output = CMatrix<L>;
    fn add(self, rhs: &CMatrix<L>) -> CMatrix<L> {
        assert!(self.same_shape(rhs), "label mismatch in sum");
        CMatrix { rows: self.rows.clone(), cols: self.cols.clone(), data: &self.data + &rhs.data }
    }
}

impl<L: Label> Sub for &CMatrix<L> {
    type Output = CMatrix<L>;
    fn sub(self, rhs: &CMatrix<L>) -> CMatrix<L> {
        assert!(self.same_shape(rhs), "label mismatch in difference");
        CMatrix { rows: self.rows.clone(), cols: self.cols.clone(), data: &self.data - &rhs.data }
    }
}

impl<L: Label> Mul for &CMatrix<L> {
    type Output = CMatrix<L>;
    fn mul(self, rhs: &CMatrix<L>) -> CMatrix<L> {
        self.try_mul(rhs).expect("label mismatch in product")
    }
}

impl<L: Label> Neg for &CMatrix<L> {
    type Output = CMatrix<L>;
    fn neg(self) -> CMatrix<L> {
        CMatrix { rows: self.rows.clone(), cols: self.cols.clone(), data: -&self.data }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    fn labels(n: usize) -> Vec<usize> {
        (0..n).collect()
    }

    #[test]
    fn shape_checks() {
        let d = DMatrix::from_element(2, 3, c64(1.0, 0.0));
        assert!(CMatrix::from_parts(labels(2), labels(3), d.clone()).is_ok());
        assert!(CMatrix::from_parts(labels(3), labels(2), d.clone()).is_err());
        assert!(CMatrix::from_parts(vec![0, 0], labels(3), d).is_err());
    }

    #[test]
    fn commutator_of_paulis() {
        let l = labels(2);
        let sx = CMatrix::from_fn(l.clone(), l.clone(), |i, j| if i != j { c64(1.0, 0.0) } else { c64(0.0, 0.0) });
        let sy = CMatrix::from_fn(l.clone(), l.clone(), |i, j| match (i, j) {
            (0, 1) => c64(0.0, -1.0),
            (1, 0) => c64(0.0, 1.0),
            _ => c64(0.0, 0.0),
        });
        let sz = CMatrix::from_fn(l.clone(), l, |i, j| match (i, j) {
            (0, 0) => c64(1.0, 0.0),
            (1, 1) => c64(-1.0, 0.0),
            _ => c64(0.0, 0.0),
        });
        let c = commutator(&sx, &sy);
        assert!(c.max_abs_diff(&sz.scale(c64(0.0, 2.0))) < 1e-15);
        assert!(anticommutator(&sx, &sy).max_abs() < 1e-15);
    }

    #[test]
    fn permute_and_lookup() {
        let m = CMatrix::from_fn(labels(3), labels(3), |&i, &j| c64((3 * i + j) as f64, 0.0));
        let p = m.permuted(&[2, 0, 1], &[1, 2, 0]).unwrap();
        assert_eq!(p.get(&2, &0), c64(6.0, 0.0));
        assert_eq!(p.data()[(0, 0)], c64(7.0, 0.0));
        assert!(m.permuted(&[0, 1], &[0, 1, 2]).is_err());
    }
}
