//! Dense complex vectors and matrices.
//!
//! Storage is row-major. Every value that enters a [`ComplexMatrix`] or
//! [`ComplexVector`] through a public constructor is checked to be finite, and
//! no public operation mutates its inputs.
//!
//! The inner product is linear in the first argument and conjugate-linear in
//! the second: `<u, v> = sum_i u[i] * conj(v[i])`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{HspanError, Result};

/// Complex scalar with `f64` components.
pub type ComplexScalar = Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn check_finite(entries: &[Complex64]) -> Result<()> {
    match entries.iter().position(|z| !z.is_finite()) {
        Some(index) => Err(HspanError::NonFinite { index }),
        None => Ok(()),
    }
}

/// A column vector in `C^n`.
#[derive(Clone, PartialEq)]
pub struct ComplexVector {
    entries: Vec<Complex64>,
}

impl ComplexVector {
    /// Builds a vector from its entries. Rejects empty or non-finite input.
    pub fn from_vec(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(HspanError::InvalidInput(
                "vector dimension must be >= 1".into(),
            ));
        }
        check_finite(&entries)?;
        Ok(Self { entries })
    }

    /// Builds a vector of real entries.
    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::from_vec(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            entries: vec![ZERO; dim],
        }
    }

    /// The standard basis vector `e_i` of `C^n`, with `i` counted from 1.
    pub fn basis_vector(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(HspanError::IndexOutOfRange { index: i, len: n });
        }
        let mut entries = vec![ZERO; n];
        entries[i - 1] = ONE;
        Ok(Self { entries })
    }

    pub(crate) fn from_vec_unchecked(entries: Vec<Complex64>) -> Self {
        debug_assert!(entries.iter().all(|z| z.is_finite()));
        Self { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.entries
    }

    pub fn get(&self, i: usize) -> Complex64 {
        self.entries[i]
    }

    /// `<self, other> = sum_i self[i] * conj(other[i])`.
    pub fn inner(&self, other: &ComplexVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(HspanError::dim(
                "inner",
                format!("{} vs {}", self.dim(), other.dim()),
            ));
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a * b.conj())
            .sum())
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Kronecker product. Entry `p * other.dim() + q` is `self[p] * other[q]`.
    pub fn tensor(&self, other: &ComplexVector) -> ComplexVector {
        let mut entries = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.entries {
            entries.extend(other.entries.iter().map(|b| a * b));
        }
        ComplexVector { entries }
    }

    /// Left-associated Kronecker product `v_1 ⊗ v_2 ⊗ ... ⊗ v_m`.
    pub fn tensor_all(factors: &[ComplexVector]) -> Result<ComplexVector> {
        let (first, rest) = factors
            .split_first()
            .ok_or_else(|| HspanError::InvalidInput("empty tensor product".into()))?;
        Ok(rest.iter().fold(first.clone(), |acc, v| acc.tensor(v)))
    }

    pub fn hadamard(&self, other: &ComplexVector) -> Result<ComplexVector> {
        if self.dim() != other.dim() {
            return Err(HspanError::dim(
                "hadamard",
                format!("{} vs {}", self.dim(), other.dim()),
            ));
        }
        Ok(ComplexVector {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    pub fn conj(&self) -> ComplexVector {
        ComplexVector {
            entries: self.entries.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> ComplexVector {
        ComplexVector {
            entries: self.entries.iter().map(|z| z * c).collect(),
        }
    }

    pub fn sub(&self, other: &ComplexVector) -> Result<ComplexVector> {
        if self.dim() != other.dim() {
            return Err(HspanError::dim(
                "sub",
                format!("{} vs {}", self.dim(), other.dim()),
            ));
        }
        Ok(ComplexVector {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }
}

impl fmt::Debug for ComplexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.entries).finish()
    }
}

/// A dense `rows x cols` complex matrix in row-major order.
///
/// Zero-column matrices are allowed so that the basis of the trivial subspace
/// can be represented; the public constructors taking user data require at
/// least one row and one column.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = ONE;
        }
        m
    }

    /// All-ones `rows x cols` matrix, the identity element of the Hadamard product.
    pub fn ones(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![ONE; rows * cols],
        }
    }

    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(HspanError::InvalidInput(format!(
                "matrix shape must be positive, got {rows}x{cols}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(HspanError::dim(
                "from_row_major",
                format!("{} entries for a {rows}x{cols} matrix", entries.len()),
            ));
        }
        check_finite(&entries)?;
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from nested rows; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(HspanError::dim("from_rows", "ragged rows"));
        }
        Self::from_row_major(rows.len(), cols, rows.concat())
    }

    /// Builds a real matrix from nested rows.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Result<Self> {
        check_finite(diag)?;
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in diag.iter().enumerate() {
            m.entries[i * n + i] = *d;
        }
        Ok(m)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[ComplexVector]) -> Result<Self> {
        let Some(first) = columns.first() else {
            return Err(HspanError::InvalidInput("no columns".into()));
        };
        let rows = first.dim();
        if columns.iter().any(|c| c.dim() != rows) {
            return Err(HspanError::dim("from_columns", "columns of unequal length"));
        }
        Ok(Self::from_fn(rows, columns.len(), |i, j| columns[j].get(i)))
    }

    pub(crate) fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        debug_assert!(entries.iter().all(|z| z.is_finite()));
        Self {
            rows,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.entries[i * self.cols + j] = z;
    }

    pub fn row_vec(&self, i: usize) -> Vec<Complex64> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        ComplexVector::from_vec_unchecked((0..self.rows).map(|i| self.get(i, j)).collect())
    }

    pub fn columns(&self) -> Vec<ComplexVector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    /// Entrywise product `(A ∘ B)_ij = A_ij B_ij`.
    pub fn hadamard(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.shape() != other.shape() {
            return Err(HspanError::dim(
                "hadamard",
                format!("{:?} vs {:?}", self.shape(), other.shape()),
            ));
        }
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    pub fn conj_transpose(&self) -> ComplexMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> ComplexMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn conj_entrywise(&self) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return Err(HspanError::dim(
                "matmul",
                format!("{:?} times {:?}", self.shape(), other.shape()),
            ));
        }
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.entries[i * other.cols..(i + 1) * other.cols];
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == ZERO {
                    continue;
                }
                let b_row = &other.entries[l * other.cols..(l + 1) * other.cols];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `A * A^*`.
    pub fn gram(&self) -> ComplexMatrix {
        let n = self.rows;
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            let ri = &self.entries[i * self.cols..(i + 1) * self.cols];
            for j in i..n {
                let rj = &self.entries[j * self.cols..(j + 1) * self.cols];
                let s: Complex64 = ri.iter().zip(rj).map(|(a, b)| a * b.conj()).sum();
                out.entries[i * n + j] = s;
                out.entries[j * n + i] = s.conj();
            }
            out.entries[i * n + i] = Complex64::new(out.entries[i * n + i].re, 0.0);
        }
        out
    }

    pub fn mul_vec(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if self.cols != v.dim() {
            return Err(HspanError::dim(
                "mul_vec",
                format!("{:?} times vector of dim {}", self.shape(), v.dim()),
            ));
        }
        Ok(ComplexVector::from_vec_unchecked(
            (0..self.rows)
                .map(|i| {
                    self.entries[i * self.cols..(i + 1) * self.cols]
                        .iter()
                        .zip(v.as_slice())
                        .map(|(a, b)| a * b)
                        .sum()
                })
                .collect(),
        ))
    }

    pub fn trace(&self) -> Result<Complex64> {
        if !self.is_square() {
            return Err(HspanError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok((0..self.rows).map(|i| self.get(i, i)).sum())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: Complex64) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * c).collect(),
        }
    }

    pub fn add(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.zip_with("add", other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.zip_with("sub", other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        op: &'static str,
        other: &ComplexMatrix,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<ComplexMatrix> {
        if self.shape() != other.shape() {
            return Err(HspanError::dim(
                op,
                format!("{:?} vs {:?}", self.shape(), other.shape()),
            ));
        }
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        })
    }

    /// `||A - A^*||_F`; errors for non-square input.
    pub fn hermitian_defect(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(HspanError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self.get(i, j) - self.get(j, i).conj()).norm_sqr();
            }
        }
        Ok(acc.sqrt())
    }

    /// `(A + A^*) / 2`.
    pub fn hermitian_part(&self) -> Result<ComplexMatrix> {
        if !self.is_square() {
            return Err(HspanError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            (self.get(i, j) + self.get(j, i).conj()) * 0.5
        }))
    }

    /// Keeps the listed columns, in order.
    pub fn select_columns(&self, cols: &[usize]) -> ComplexMatrix {
        Self::from_fn(self.rows, cols.len(), |i, j| self.get(i, cols[j]))
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(
                f,
                "  {:?}",
                &self.entries[i * self.cols..(i + 1) * self.cols]
            )?;
        }
        write!(f, "]")
    }
}

/// Hadamard product of a non-empty list of equally shaped matrices.
pub fn hadamard_all(mats: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let (first, rest) = mats
        .split_first()
        .ok_or_else(|| HspanError::InvalidInput("empty Hadamard product".into()))?;
    rest.iter()
        .try_fold(first.clone(), |acc, m| acc.hadamard(m))
}
