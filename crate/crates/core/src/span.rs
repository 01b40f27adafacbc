//! Spans of Hadamard products of vector families.
//!
//! For `B_1, ..., B_k` in `C^{n x n}` the span of all vectors
//! `(B_1 x_1) ∘ ... ∘ (B_k x_k)` equals the range of the Gram-Hadamard matrix
//! `G = (B_1 B_1^*) ∘ ... ∘ (B_k B_k^*)`. [`theorem_span`] computes the right
//! side; [`basis_product_oracle`] and [`random_sample_span`] compute the left
//! side without ever forming `G`.

use crate::eigen::hermitian_eig;
use crate::error::{HspanError, Result};
use crate::family::{check_psd, MatrixFamily, PsdFamily};
use crate::matrix::{hadamard_all, ComplexMatrix, ComplexVector};
use crate::rng::{gaussian_vector, gaussian_vectors, sample_stream};
use crate::subspace::{range_basis, Subspace, ToleranceConfig};

/// `G = (B_1 B_1^*) ∘ ... ∘ (B_k B_k^*)`.
pub fn gram_hadamard(family: &MatrixFamily) -> ComplexMatrix {
    let grams: Vec<ComplexMatrix> = family.matrices().iter().map(ComplexMatrix::gram).collect();
    hadamard_all(&grams).expect("family members share a shape")
}

/// `(B_1 x_1) ∘ ... ∘ (B_k x_k)`.
pub fn hadamard_image(family: &MatrixFamily, xs: &[ComplexVector]) -> Result<ComplexVector> {
    if xs.len() != family.k() {
        return Err(HspanError::dim(
            "hadamard_image",
            format!("{} vectors for a family of {}", xs.len(), family.k()),
        ));
    }
    let mut acc: Option<ComplexVector> = None;
    for (b, x) in family.matrices().iter().zip(xs) {
        let bx = b.mul_vec(x)?;
        acc = Some(match acc {
            None => bx,
            Some(v) => v.hadamard(&bx)?,
        });
    }
    Ok(acc.expect("k >= 1"))
}

/// Span of the Hadamard-product family, computed as `range(G)`.
pub fn theorem_span(family: &MatrixFamily, cfg: &ToleranceConfig) -> Subspace {
    range_basis(&gram_hadamard(family), cfg)
}

fn oracle_columns(family: &MatrixFamily, cfg: &ToleranceConfig) -> Result<u64> {
    let n = family.n() as u128;
    let required = n.checked_pow(family.k() as u32).unwrap_or(u128::MAX);
    if required > cfg.oracle_budget as u128 {
        return Err(HspanError::InstanceTooLarge {
            what: "basis-product oracle columns n^k",
            required,
            budget: cfg.oracle_budget as u128,
        });
    }
    Ok(required as u64)
}

/// The `n x n^k` matrix whose columns are `(B_1 e_{i_1}) ∘ ... ∘ (B_k e_{i_k})`
/// over all index tuples, first index most significant.
pub fn basis_product_matrix(family: &MatrixFamily, cfg: &ToleranceConfig) -> Result<ComplexMatrix> {
    let total = oracle_columns(family, cfg)? as usize;
    let n = family.n();
    let k = family.k();
    let mut out = ComplexMatrix::zeros(n, total);
    let mut idx = vec![0usize; k];
    for col in 0..total {
        for row in 0..n {
            let mut z = family.matrices()[0].get(row, idx[0]);
            for (b, &i) in family.matrices().iter().zip(&idx).skip(1) {
                z *= b.get(row, i);
            }
            out.set(row, col, z);
        }
        // odometer, last index fastest
        for slot in (0..k).rev() {
            idx[slot] += 1;
            if idx[slot] < n {
                break;
            }
            idx[slot] = 0;
        }
    }
    Ok(out)
}

/// Span of the Hadamard-product family from all `n^k` basis-vector
/// combinations. The map `(x_1, ..., x_k) -> (B_1 x_1) ∘ ... ∘ (B_k x_k)` is
/// multilinear, so these vectors span the same space as all inputs.
pub fn basis_product_oracle(family: &MatrixFamily, cfg: &ToleranceConfig) -> Result<Subspace> {
    Ok(range_basis(&basis_product_matrix(family, cfg)?, cfg))
}

/// The vectors `(B_1 x_1) ∘ ... ∘ (B_k x_k)` for sample indices `0..samples`,
/// as the columns of an `n x samples` matrix.
pub fn sample_matrix(family: &MatrixFamily, samples: usize, seed: u64) -> Result<ComplexMatrix> {
    if samples == 0 {
        return Err(HspanError::InvalidInput("samples must be >= 1".into()));
    }
    let columns = (0..samples)
        .map(|s| {
            let mut rng = sample_stream(seed, s as u64);
            let xs = gaussian_vectors(&mut rng, family.n(), family.k());
            hadamard_image(family, &xs)
        })
        .collect::<Result<Vec<_>>>()?;
    ComplexMatrix::from_columns(&columns)
}

/// Monte Carlo span from `samples` Gaussian draws of `(x_1, ..., x_k)`.
pub fn random_sample_span(
    family: &MatrixFamily,
    samples: usize,
    cfg: &ToleranceConfig,
) -> Result<Subspace> {
    Ok(range_basis(&sample_matrix(family, samples, cfg.seed)?, cfg))
}

/// Eigenvalues below `16 n eps ||A||_F` are treated as exact zeros.
fn null_cutoff(a: &ComplexMatrix) -> f64 {
    16.0 * a.rows() as f64 * f64::EPSILON * a.frobenius_norm()
}

/// Positive semidefinite square root through the Hermitian eigendecomposition.
///
/// Negative eigenvalues and eigenvalues within roundoff of zero are clamped to
/// zero, so the square root of a singular matrix stays exactly singular.
pub fn psd_sqrt(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_psd(a)?;
    let eig = hermitian_eig(a)?;
    let cutoff = null_cutoff(a);
    Ok(eig.reconstruct_with(|l| if l > cutoff { l.sqrt() } else { 0.0 }))
}

/// `{A_1^{1/2}, ..., A_k^{1/2}}`.
pub fn sqrt_family(family: &PsdFamily) -> Result<MatrixFamily> {
    let roots = family
        .matrices()
        .iter()
        .map(psd_sqrt)
        .collect::<Result<Vec<_>>>()?;
    MatrixFamily::new(roots)
}

/// `range(A_1 ∘ ... ∘ A_k)` for a positive semidefinite family.
pub fn corollary5_span(family: &PsdFamily, cfg: &ToleranceConfig) -> Subspace {
    let product = hadamard_all(family.matrices()).expect("family members share a shape");
    range_basis(&product, cfg)
}

/// Result of the single-vector sampler.
#[derive(Debug, Clone)]
pub struct SamplerRun {
    pub subspace: Subspace,
    pub samples_drawn: usize,
    /// Numerical rank after each draw.
    pub rank_history: Vec<usize>,
    /// Whether the stability window was reached before the cap.
    pub stabilized: bool,
}

/// Span of `(A_1 x) ∘ ... ∘ (A_k x)` over single Gaussian draws of `x`.
///
/// Draws continue until the numerical rank has not changed for
/// `cfg.stability_window` consecutive draws, or until `cfg.max_samples`
/// (default `10 n`) draws.
pub fn corollary4_sample_run(family: &PsdFamily, cfg: &ToleranceConfig) -> SamplerRun {
    let n = family.n();
    let cap = cfg.max_samples.unwrap_or(10 * n).max(1);
    let window = cfg.stability_window.max(1);
    let mut columns: Vec<ComplexVector> = Vec::new();
    let mut rank_history = Vec::new();
    let mut prev_rank = 0usize;
    let mut stable = 0usize;
    let mut subspace = Subspace::zero(n);
    let mut stabilized = false;

    for s in 0..cap {
        let x = gaussian_vector(&mut sample_stream(cfg.seed, s as u64), n);
        let mut v: Option<ComplexVector> = None;
        for a in family.matrices() {
            let ax = a.mul_vec(&x).expect("dimensions match");
            v = Some(match v {
                None => ax,
                Some(acc) => acc.hadamard(&ax).expect("dimensions match"),
            });
        }
        columns.push(v.expect("k >= 1"));
        let m = ComplexMatrix::from_columns(&columns).expect("non-empty columns");
        subspace = range_basis(&m, cfg);
        let rank = subspace.rank();
        rank_history.push(rank);
        if rank == prev_rank {
            stable += 1;
        } else {
            stable = 0;
            prev_rank = rank;
        }
        if stable >= window {
            stabilized = true;
            break;
        }
    }
    SamplerRun {
        subspace,
        samples_drawn: rank_history.len(),
        rank_history,
        stabilized,
    }
}

/// Subspace part of [`corollary4_sample_run`].
pub fn corollary4_sample_span(family: &PsdFamily, cfg: &ToleranceConfig) -> Subspace {
    corollary4_sample_run(family, cfg).subspace
}
