//! Orthonormal range bases, orthogonal projectors and subspace comparison.
//!
//! Numerical rank follows a spectral-relative policy: singular value
//! `sigma_i` counts when `sigma_i > rank_rel_tol * max(rows, cols) * sigma_1`.
//! Singular values come from a one-sided Jacobi SVD; matrices with more
//! columns than rows are first compressed to a square triangular factor with
//! Householder QR of `A^*`, which leaves both the range and the singular
//! values unchanged.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eigen::jacobi_params;
use crate::error::{HspanError, Result};
use crate::matrix::{ComplexMatrix, ComplexVector};

const MAX_SWEEPS: usize = 100;
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Numerical policy shared by every span computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Relative singular value cutoff for numerical rank.
    pub rank_rel_tol: f64,
    /// Absolute tolerance for identities checked against `||A||_F`.
    pub identity_abs_tol: f64,
    /// Projector distance under which two subspaces are considered equal.
    pub subspace_tol: f64,
    pub seed: u64,
    /// Largest `n^k` accepted by the basis-product oracle.
    pub oracle_budget: u64,
    /// Largest `n^(k+1)` accepted when materializing the tensor witness.
    pub tensor_budget: u64,
    /// Consecutive rank-stable draws that end the single-vector sampler.
    pub stability_window: usize,
    /// Sampler cap; `None` means `10 * n`.
    pub max_samples: Option<usize>,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            rank_rel_tol: 1e-10,
            identity_abs_tol: 1e-10,
            subspace_tol: 1e-8,
            seed: 0,
            oracle_budget: 65_536,
            tensor_budget: 1_000_000,
            stability_window: 5,
            max_samples: None,
        }
    }
}

impl ToleranceConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rank_rel_tol", self.rank_rel_tol),
            ("identity_abs_tol", self.identity_abs_tol),
            ("subspace_tol", self.subspace_tol),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(HspanError::InvalidInput(format!(
                    "{name} must be a positive finite number, got {v}"
                )));
            }
        }
        if self.stability_window == 0 {
            return Err(HspanError::InvalidInput(
                "stability_window must be >= 1".into(),
            ));
        }
        if self.max_samples == Some(0) {
            return Err(HspanError::InvalidInput("max_samples must be >= 1".into()));
        }
        Ok(())
    }
}

/// A subspace of `C^n` carried by an orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: ComplexMatrix,
    tol_used: f64,
}

impl Subspace {
    /// The trivial subspace `{0}` of `C^n`.
    pub fn zero(n: usize) -> Self {
        Self {
            ambient_dim: n,
            basis: ComplexMatrix::zeros(n, 0),
            tol_used: 0.0,
        }
    }

    /// All of `C^n`.
    pub fn full(n: usize) -> Self {
        Self {
            ambient_dim: n,
            basis: ComplexMatrix::identity(n),
            tol_used: 0.0,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    /// `n x rank` matrix with orthonormal columns.
    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    /// Absolute singular value cutoff applied when the subspace was extracted.
    pub fn tol_used(&self) -> f64 {
        self.tol_used
    }

    /// `||Q^* Q - I_r||_F`.
    pub fn orthonormality_defect(&self) -> f64 {
        let q = &self.basis;
        let r = q.cols();
        let mut acc = 0.0;
        for i in 0..r {
            for j in 0..r {
                let mut s = ZERO;
                for row in 0..q.rows() {
                    s += q.get(row, i).conj() * q.get(row, j);
                }
                if i == j {
                    s -= 1.0;
                }
                acc += s.norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Orthogonal projector `P = Q Q^*`.
    pub fn projector(&self) -> ComplexMatrix {
        let n = self.ambient_dim;
        let q = &self.basis;
        let mut p = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut s = ZERO;
                for l in 0..q.cols() {
                    s += q.get(i, l) * q.get(j, l).conj();
                }
                p.set(i, j, s);
                p.set(j, i, s.conj());
            }
            let d = p.get(i, i).re;
            p.set(i, i, Complex64::new(d, 0.0));
        }
        p
    }

    /// Projector `E = I - P` onto the orthogonal complement.
    pub fn complement_projector(&self) -> ComplexMatrix {
        let n = self.ambient_dim;
        let p = self.projector();
        ComplexMatrix::from_fn(n, n, |i, j| {
            let id = if i == j { 1.0 } else { 0.0 };
            Complex64::new(id, 0.0) - p.get(i, j)
        })
    }

    fn check_ambient(&self, op: &'static str, n: usize) -> Result<()> {
        if self.ambient_dim != n {
            return Err(HspanError::dim(
                op,
                format!("ambient dimension {} vs {n}", self.ambient_dim),
            ));
        }
        Ok(())
    }

    /// `||P_1 - P_2||_F`.
    pub fn distance(&self, other: &Subspace) -> Result<f64> {
        other.check_ambient("subspace_distance", self.ambient_dim)?;
        Ok(self.projector().sub(&other.projector())?.frobenius_norm())
    }

    /// `||v - P v||`.
    pub fn residual(&self, v: &ComplexVector) -> Result<f64> {
        self.check_ambient("contains", v.dim())?;
        let q = &self.basis;
        let coeffs: Vec<Complex64> = (0..q.cols())
            .map(|l| (0..q.rows()).map(|i| q.get(i, l).conj() * v.get(i)).sum())
            .collect();
        let mut acc = 0.0;
        for i in 0..q.rows() {
            let proj: Complex64 = coeffs
                .iter()
                .enumerate()
                .map(|(l, c)| q.get(i, l) * c)
                .sum();
            acc += (v.get(i) - proj).norm_sqr();
        }
        Ok(acc.sqrt())
    }

    /// `||v - P v|| <= tol * max(1, ||v||)`.
    pub fn contains(&self, v: &ComplexVector, tol: f64) -> Result<bool> {
        Ok(self.residual(v)? <= tol * v.norm().max(1.0))
    }

    pub fn equals(&self, other: &Subspace, tol: f64) -> Result<bool> {
        Ok(self.distance(other)? <= tol)
    }
}

/// Free-function form of [`Subspace::distance`].
pub fn subspace_distance(a: &Subspace, b: &Subspace) -> Result<f64> {
    a.distance(b)
}

/// Singular values and left singular vectors of `a`, descending.
struct LeftSvd {
    values: Vec<f64>,
    /// Unit columns paired with `values`; entries for zero values are zero.
    vectors: Vec<Vec<Complex64>>,
}

fn left_svd(a: &ComplexMatrix) -> LeftSvd {
    let (rows, cols) = a.shape();
    let mut columns: Vec<Vec<Complex64>> = if cols > rows {
        let r = triangular_factor_of_adjoint(a);
        // columns of R^*: column j of R^* is conj of row j of R
        (0..rows)
            .map(|j| (0..rows).map(|i| r[j][i].conj()).collect())
            .collect()
    } else {
        (0..cols).map(|j| a.column(j).into_vec()).collect()
    };
    one_sided_jacobi(&mut columns);

    let mut pairs: Vec<(f64, Vec<Complex64>)> = columns
        .into_iter()
        .map(|col| {
            let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let unit = if norm > 0.0 {
                col.iter().map(|z| z / norm).collect()
            } else {
                vec![ZERO; col.len()]
            };
            (norm, unit)
        })
        .collect();
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
    let (values, vectors) = pairs.into_iter().unzip();
    LeftSvd { values, vectors }
}

/// Upper-triangular `R` (as rows) from a Householder QR of `A^*`, so that
/// `A A^* = R^* R` and `range(A) = range(R^*)`.
fn triangular_factor_of_adjoint(a: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    let (m, len) = a.shape();
    // column t of A^* is row t of A, conjugated
    let mut x: Vec<Vec<Complex64>> = (0..m)
        .map(|t| a.row_vec(t).into_iter().map(|z| z.conj()).collect())
        .collect();
    for j in 0..m.min(len) {
        let norm = x[j][j..].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = x[j][j];
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let alpha = -phase * norm;
        let mut v: Vec<Complex64> = x[j][j..].to_vec();
        v[0] -= alpha;
        let v_norm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if v_norm_sqr == 0.0 {
            continue;
        }
        for col in x.iter_mut().skip(j) {
            let proj: Complex64 = v.iter().zip(&col[j..]).map(|(vi, ci)| vi.conj() * ci).sum();
            let factor = proj * (2.0 / v_norm_sqr);
            for (ci, vi) in col[j..].iter_mut().zip(&v) {
                *ci -= vi * factor;
            }
        }
        x[j][j] = alpha;
        for z in x[j][j + 1..].iter_mut() {
            *z = ZERO;
        }
    }
    (0..m)
        .map(|i| {
            (0..m)
                .map(|t| if i <= t { x[t][i] } else { ZERO })
                .collect()
        })
        .collect()
}

/// Orthogonalizes the columns in place by pairwise plane rotations.
fn one_sided_jacobi(columns: &mut [Vec<Complex64>]) {
    let n = columns.len();
    if n < 2 {
        return;
    }
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let (left, right) = columns.split_at_mut(q);
                let (wp, wq) = (&mut left[p], &mut right[0]);
                let alpha: f64 = wp.iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = wq.iter().map(|z| z.norm_sqr()).sum();
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma: Complex64 = wp.iter().zip(wq.iter()).map(|(a, b)| a.conj() * b).sum();
                let abs_g = gamma.norm();
                if abs_g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let e = gamma / abs_g;
                let (c, s) = jacobi_params(alpha, beta, abs_g);
                let se = e * s;
                let se_conj = se.conj();
                for (a, b) in wp.iter_mut().zip(wq.iter_mut()) {
                    let (ap, aq) = (*a, *b);
                    *a = ap * c - aq * se_conj;
                    *b = ap * se + aq * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
}

/// Singular values of `a` in descending order (`min(rows, cols)` of them).
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    let (rows, cols) = a.shape();
    if rows == 0 || cols == 0 {
        return Vec::new();
    }
    left_svd(a).values
}

/// Absolute cutoff used for `a` under `cfg`, given its largest singular value.
pub fn rank_cutoff(rows: usize, cols: usize, sigma_max: f64, cfg: &ToleranceConfig) -> f64 {
    cfg.rank_rel_tol * rows.max(cols) as f64 * sigma_max
}

/// Orthonormal basis of the column space of `a` at numerical rank.
pub fn range_basis(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Subspace {
    let (rows, cols) = a.shape();
    if cols == 0 || rows == 0 {
        return Subspace::zero(rows);
    }
    let svd = left_svd(a);
    let sigma_max = svd.values.first().copied().unwrap_or(0.0);
    let cutoff = rank_cutoff(rows, cols, sigma_max, cfg);
    if sigma_max == 0.0 {
        return Subspace {
            tol_used: cutoff,
            ..Subspace::zero(rows)
        };
    }
    let kept: Vec<&Vec<Complex64>> = svd
        .values
        .iter()
        .zip(&svd.vectors)
        .filter(|(s, _)| **s > cutoff)
        .map(|(_, v)| v)
        .collect();
    let basis = ComplexMatrix::from_fn(rows, kept.len(), |i, j| kept[j][i]);
    Subspace {
        ambient_dim: rows,
        basis,
        tol_used: cutoff,
    }
}

/// Numerical rank of `a` under `cfg`.
pub fn numerical_rank(a: &ComplexMatrix, cfg: &ToleranceConfig) -> usize {
    range_basis(a, cfg).rank()
}
