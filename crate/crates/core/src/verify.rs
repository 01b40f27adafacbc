//! Numerical certificates for the identities behind the span theorem.
//!
//! With `G` the Gram-Hadamard matrix and `E` the orthogonal projector onto
//! `range(G)^⊥`, the checks are:
//!
//! * column identity: `G e_i = (B_1 B_1^* e_i) ∘ ... ∘ (B_k B_k^* e_i)`;
//! * pairing identity: `<h, E y> = <x_1 ⊗ ... ⊗ x_k ⊗ conj(y), T>` where
//!   `h = (B_1 x_1) ∘ ... ∘ (B_k x_k)` and
//!   `T = sum_i (B_1^* e_i) ⊗ ... ⊗ (B_k^* e_i) ⊗ conj(E) e_i`;
//! * norm-trace identity: `||T||^2 = trace(E G)`, and both vanish;
//! * orthogonality: `<h, E y> = 0` for random `x_j`, `y`.
//!
//! The two sides of each identity go through disjoint code paths: `||T||^2`
//! is summed from the materialized tensor, `trace(E G)` comes from a matrix
//! product. Residuals are normalized by `scale = prod_i ||B_i||_F` and, where
//! vectors enter, by their norms.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{HspanError, Result};
use crate::family::{AnyFamily, MatrixFamily};
use crate::matrix::{ComplexMatrix, ComplexVector};
use crate::rng::{gaussian_vector, gaussian_vectors, sample_stream, sub_seed};
use crate::span::{corollary5_span, gram_hadamard, hadamard_image, sqrt_family, theorem_span};
use crate::subspace::ToleranceConfig;

/// Pass thresholds for each certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyTolerances {
    pub column_identity: f64,
    pub pairing: f64,
    /// Relative to `scale^2`.
    pub norm_trace: f64,
    /// Imaginary part of `trace(E G)`, relative to `scale^2`.
    pub trace_imag: f64,
    /// `||T||` relative to `scale`.
    pub witness: f64,
    pub orthogonality: f64,
    pub corollary: f64,
}

impl Default for VerifyTolerances {
    fn default() -> Self {
        Self {
            column_identity: 1e-13,
            pairing: 1e-12,
            norm_trace: 1e-8,
            trace_imag: 1e-10,
            witness: 1e-7,
            orthogonality: 1e-7,
            corollary: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Random `(x_1..x_k, y)` draws for the orthogonality check.
    pub trials: usize,
    /// Random draws for the pairing identity.
    pub pairing_trials: usize,
    pub tolerances: VerifyTolerances,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            trials: 50,
            pairing_trials: 10,
            tolerances: VerifyTolerances::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Passed,
    Failed,
    Skipped,
}

impl CheckStatus {
    fn from_bool(ok: bool) -> Self {
        if ok {
            CheckStatus::Passed
        } else {
            CheckStatus::Failed
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckFlags {
    pub column_identity: CheckStatus,
    pub tensor_witness: CheckStatus,
    pub norm_trace: CheckStatus,
    pub pairing: CheckStatus,
    pub orthogonality: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corollary5: Option<CheckStatus>,
}

impl CheckFlags {
    fn all(&self) -> impl Iterator<Item = CheckStatus> + '_ {
        [
            self.column_identity,
            self.tensor_witness,
            self.norm_trace,
            self.pairing,
            self.orthogonality,
        ]
        .into_iter()
        .chain(self.corollary5)
    }
}

/// Residuals of every certificate plus per-check status.
///
/// Tensor-based fields are `None` when `n^(k+1)` exceeds the tensor budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub n: usize,
    pub k: usize,
    pub theorem_rank: usize,
    pub scale: f64,
    pub column_identity_residual: f64,
    pub tensor_witness_norm: Option<f64>,
    pub trace_eg: Complex64,
    pub tensor_norm_sq: Option<f64>,
    pub norm_trace_gap: Option<f64>,
    pub pairing_residuals: Vec<f64>,
    pub orthogonality_residuals: Vec<f64>,
    pub corollary5_distance: Option<f64>,
    pub checks: CheckFlags,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub skipped_reasons: Vec<String>,
    /// True iff no check failed. Skipped checks do not count against it.
    pub passed: bool,
}

/// `max_i ||G e_i - (B_1 B_1^* e_i) ∘ ... ∘ (B_k B_k^* e_i)|| / max(1, ||G||_F)`.
pub fn column_identity_residual(family: &MatrixFamily) -> f64 {
    let n = family.n();
    let g = gram_hadamard(family);
    let adjoints: Vec<ComplexMatrix> = family
        .matrices()
        .iter()
        .map(ComplexMatrix::conj_transpose)
        .collect();
    let mut worst: f64 = 0.0;
    for i in 1..=n {
        let e = ComplexVector::basis_vector(n, i).expect("1 <= i <= n");
        let lhs = g.mul_vec(&e).expect("square");
        let mut rhs: Option<ComplexVector> = None;
        for (b, b_adj) in family.matrices().iter().zip(&adjoints) {
            let col = b
                .mul_vec(&b_adj.mul_vec(&e).expect("square"))
                .expect("square");
            rhs = Some(match rhs {
                None => col,
                Some(acc) => acc.hadamard(&col).expect("same dim"),
            });
        }
        let diff = lhs.sub(&rhs.expect("k >= 1")).expect("same dim").norm();
        worst = worst.max(diff);
    }
    worst / g.frobenius_norm().max(1.0)
}

/// `E`, the projector onto the orthogonal complement of `range(G)`.
pub fn complement_of_gram_range(family: &MatrixFamily, cfg: &ToleranceConfig) -> ComplexMatrix {
    theorem_span(family, cfg).complement_projector()
}

fn check_tensor_budget(family: &MatrixFamily, cfg: &ToleranceConfig) -> Result<()> {
    let required = (family.n() as u128)
        .checked_pow(family.k() as u32 + 1)
        .unwrap_or(u128::MAX);
    if required > cfg.tensor_budget as u128 {
        return Err(HspanError::InstanceTooLarge {
            what: "tensor witness entries n^(k+1)",
            required,
            budget: cfg.tensor_budget as u128,
        });
    }
    Ok(())
}

fn witness_with(
    family: &MatrixFamily,
    e: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<ComplexVector> {
    check_tensor_budget(family, cfg)?;
    let n = family.n();
    let adjoints: Vec<ComplexMatrix> = family
        .matrices()
        .iter()
        .map(ComplexMatrix::conj_transpose)
        .collect();
    let e_bar = e.conj_entrywise();
    let dim = n.pow(family.k() as u32 + 1);
    let mut acc = vec![Complex64::new(0.0, 0.0); dim];
    for i in 0..n {
        let mut factors: Vec<ComplexVector> = adjoints.iter().map(|a| a.column(i)).collect();
        factors.push(e_bar.column(i));
        let term = ComplexVector::tensor_all(&factors)?;
        for (a, t) in acc.iter_mut().zip(term.as_slice()) {
            *a += t;
        }
    }
    ComplexVector::from_vec(acc)
}

/// `T = sum_i (B_1^* e_i) ⊗ ... ⊗ (B_k^* e_i) ⊗ conj(E) e_i`, of dimension `n^(k+1)`.
pub fn tensor_witness(family: &MatrixFamily, cfg: &ToleranceConfig) -> Result<ComplexVector> {
    check_tensor_budget(family, cfg)?;
    witness_with(family, &complement_of_gram_range(family, cfg), cfg)
}

/// `(||T||^2, trace(E G))`, each side computed on its own.
pub fn norm_trace_identity(
    family: &MatrixFamily,
    cfg: &ToleranceConfig,
) -> Result<(f64, Complex64)> {
    check_tensor_budget(family, cfg)?;
    let e = complement_of_gram_range(family, cfg);
    let t = witness_with(family, &e, cfg)?;
    let tensor_norm_sq = t.as_slice().iter().map(|z| z.norm_sqr()).sum();
    let trace = e.matmul(&gram_hadamard(family))?.trace()?;
    Ok((tensor_norm_sq, trace))
}

fn pairing_with(
    family: &MatrixFamily,
    e: &ComplexMatrix,
    t: &ComplexVector,
    xs: &[ComplexVector],
    y: &ComplexVector,
) -> Result<f64> {
    let n = family.n();
    if xs.len() != family.k() || xs.iter().chain(std::iter::once(y)).any(|v| v.dim() != n) {
        return Err(HspanError::dim(
            "pairing_identity_residual",
            format!("expected {} vectors of dimension {n} plus y", family.k()),
        ));
    }
    let h = hadamard_image(family, xs)?;
    let lhs = h.inner(&e.mul_vec(y)?)?;
    let mut factors: Vec<ComplexVector> = xs.to_vec();
    factors.push(y.conj());
    let rhs = ComplexVector::tensor_all(&factors)?.inner(t)?;
    let norms: f64 = xs.iter().map(ComplexVector::norm).product::<f64>() * y.norm();
    Ok((lhs - rhs).norm() / (family.scale() * norms).max(1.0))
}

/// `|<h, E y> - <x_1 ⊗ ... ⊗ x_k ⊗ conj(y), T>| / max(1, scale prod ||x_j|| ||y||)`.
pub fn pairing_identity_residual(
    family: &MatrixFamily,
    xs: &[ComplexVector],
    y: &ComplexVector,
    cfg: &ToleranceConfig,
) -> Result<f64> {
    check_tensor_budget(family, cfg)?;
    let e = complement_of_gram_range(family, cfg);
    let t = witness_with(family, &e, cfg)?;
    pairing_with(family, &e, &t, xs, y)
}

fn orthogonality_with(
    family: &MatrixFamily,
    e: &ComplexMatrix,
    trials: usize,
    seed: u64,
) -> Vec<f64> {
    let n = family.n();
    let scale = family.scale();
    (0..trials)
        .map(|t| {
            let mut rng = sample_stream(seed, t as u64);
            let xs = gaussian_vectors(&mut rng, n, family.k());
            let y = gaussian_vector(&mut rng, n);
            let h = hadamard_image(family, &xs).expect("dimensions match");
            let value = h
                .inner(&e.mul_vec(&y).expect("square"))
                .expect("same dim")
                .norm();
            let denom = scale * xs.iter().map(ComplexVector::norm).product::<f64>() * y.norm();
            if denom > 0.0 {
                value / denom
            } else {
                value
            }
        })
        .collect()
}

/// Normalized `|<h, E y>|` for `trials` Gaussian draws of `(x_1..x_k, y)`.
/// Trial `t` draws from sample stream `t` of `cfg.seed`: the `x_j` first, then `y`.
pub fn orthogonality_check(
    family: &MatrixFamily,
    trials: usize,
    cfg: &ToleranceConfig,
) -> Result<Vec<f64>> {
    if trials == 0 {
        return Err(HspanError::InvalidInput("trials must be >= 1".into()));
    }
    let e = complement_of_gram_range(family, cfg);
    Ok(orthogonality_with(family, &e, trials, cfg.seed))
}

/// Seed of the pairing-identity draws, kept apart from the orthogonality draws.
fn pairing_seed(seed: u64) -> u64 {
    sub_seed(seed, u64::MAX)
}

/// Runs every certificate. A positive semidefinite family is certified through
/// its square-root family, and additionally gets the distance between
/// `range(A_1 ∘ ... ∘ A_k)` and the theorem span of the square roots.
pub fn verify_all(
    input: &AnyFamily,
    opts: &VerifyOptions,
    cfg: &ToleranceConfig,
) -> Result<VerificationReport> {
    cfg.validate()?;
    let tol = &opts.tolerances;
    let (family, corollary5_distance) = match input {
        AnyFamily::General(f) => (f.clone(), None),
        AnyFamily::Psd(p) => {
            let roots = sqrt_family(p)?;
            let distance = corollary5_span(p, cfg).distance(&theorem_span(&roots, cfg))?;
            (roots, Some(distance))
        }
    };

    let scale = family.scale();
    let scale_sq = scale * scale;
    let span = theorem_span(&family, cfg);
    let e = span.complement_projector();
    let g = gram_hadamard(&family);
    let trace_eg = e.matmul(&g)?.trace()?;

    let column_identity_residual = column_identity_residual(&family);
    let orthogonality_residuals = orthogonality_with(&family, &e, opts.trials.max(1), cfg.seed);
    let orth_max = orthogonality_residuals.iter().copied().fold(0.0, f64::max);

    let mut skipped_reasons = Vec::new();
    let (tensor_witness_norm, tensor_norm_sq, norm_trace_gap, pairing_residuals) =
        match witness_with(&family, &e, cfg) {
            Ok(t) => {
                let norm_sq: f64 = t.as_slice().iter().map(|z| z.norm_sqr()).sum();
                let seed = pairing_seed(cfg.seed);
                let pairing = (0..opts.pairing_trials.max(1))
                    .map(|s| {
                        let mut rng = sample_stream(seed, s as u64);
                        let xs = gaussian_vectors(&mut rng, family.n(), family.k());
                        let y = gaussian_vector(&mut rng, family.n());
                        pairing_with(&family, &e, &t, &xs, &y)
                    })
                    .collect::<Result<Vec<_>>>()?;
                (
                    Some(norm_sq.sqrt()),
                    Some(norm_sq),
                    Some((norm_sq - trace_eg.re).abs()),
                    pairing,
                )
            }
            Err(err @ HspanError::InstanceTooLarge { .. }) => {
                skipped_reasons.push(err.to_string());
                (None, None, None, Vec::new())
            }
            Err(err) => return Err(err),
        };

    let status = |value: Option<bool>| value.map_or(CheckStatus::Skipped, CheckStatus::from_bool);
    let checks = CheckFlags {
        column_identity: CheckStatus::from_bool(column_identity_residual <= tol.column_identity),
        tensor_witness: status(tensor_witness_norm.map(|t| t <= tol.witness * scale)),
        norm_trace: status(tensor_norm_sq.zip(norm_trace_gap).map(|(nsq, gap)| {
            let bound = tol.norm_trace * scale_sq;
            gap <= bound
                && nsq <= bound
                && trace_eg.norm() <= bound
                && trace_eg.im.abs() <= tol.trace_imag * scale_sq
        })),
        pairing: status(
            tensor_norm_sq.map(|_| pairing_residuals.iter().all(|r| *r <= tol.pairing)),
        ),
        orthogonality: CheckStatus::from_bool(orth_max <= tol.orthogonality),
        corollary5: corollary5_distance.map(|d| CheckStatus::from_bool(d <= tol.corollary)),
    };
    let passed = checks.all().all(|s| s != CheckStatus::Failed);

    Ok(VerificationReport {
        n: family.n(),
        k: family.k(),
        theorem_rank: span.rank(),
        scale,
        column_identity_residual,
        tensor_witness_norm,
        trace_eg,
        tensor_norm_sq,
        norm_trace_gap,
        pairing_residuals,
        orthogonality_residuals,
        corollary5_distance,
        checks,
        skipped_reasons,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn diag(d: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_diagonal(
            &d.iter()
                .map(|&x| Complex64::new(x, 0.0))
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn column_identity_exact_cases() {
        let f = MatrixFamily::new(vec![diag(&[1.0, -2.0, 3.0]), diag(&[0.5, 0.0, 4.0])]).unwrap();
        assert_eq!(column_identity_residual(&f), 0.0);
        let f = MatrixFamily::new(vec![ComplexMatrix::identity(4); 3]).unwrap();
        assert_eq!(column_identity_residual(&f), 0.0);
    }

    #[test]
    fn witness_vanishes_in_trivial_cases() {
        let f = MatrixFamily::new(vec![ComplexMatrix::identity(3)]).unwrap();
        assert_eq!(
            complement_of_gram_range(&f, &cfg()),
            ComplexMatrix::zeros(3, 3)
        );
        assert_eq!(tensor_witness(&f, &cfg()).unwrap(), ComplexVector::zeros(9));
        let z = MatrixFamily::new(vec![ComplexMatrix::zeros(3, 3); 2]).unwrap();
        assert_eq!(
            complement_of_gram_range(&z, &cfg()),
            ComplexMatrix::identity(3)
        );
        assert_eq!(
            tensor_witness(&z, &cfg()).unwrap(),
            ComplexVector::zeros(27)
        );
    }

    #[test]
    fn norm_trace_trivial_cases() {
        let f = MatrixFamily::new(vec![ComplexMatrix::identity(3); 2]).unwrap();
        let (nsq, tr) = norm_trace_identity(&f, &cfg()).unwrap();
        assert_eq!((nsq, tr), (0.0, Complex64::new(0.0, 0.0)));
        let z = MatrixFamily::new(vec![ComplexMatrix::zeros(2, 2)]).unwrap();
        let (nsq, tr) = norm_trace_identity(&z, &cfg()).unwrap();
        assert_eq!((nsq, tr), (0.0, Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn pairing_zero_inputs() {
        let b = ComplexMatrix::from_real_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        let f = MatrixFamily::new(vec![b.clone(), b]).unwrap();
        let x = ComplexVector::from_real(&[0.3, -1.0]).unwrap();
        let y0 = ComplexVector::zeros(2);
        assert_eq!(
            pairing_identity_residual(&f, &[x.clone(), x.clone()], &y0, &cfg()).unwrap(),
            0.0
        );
        let y = ComplexVector::from_real(&[1.0, 1.0]).unwrap();
        let r = pairing_identity_residual(&f, &[ComplexVector::zeros(2), x.clone()], &y, &cfg())
            .unwrap();
        assert_eq!(r, 0.0);
        assert!(pairing_identity_residual(&f, std::slice::from_ref(&x), &y, &cfg()).is_err());
        assert!(
            pairing_identity_residual(&f, &[x.clone(), x], &ComplexVector::zeros(3), &cfg())
                .is_err()
        );
    }

    #[test]
    fn orthogonality_trivial_cases() {
        let f = MatrixFamily::new(vec![ComplexMatrix::identity(3); 2]).unwrap();
        assert!(orthogonality_check(&f, 5, &cfg())
            .unwrap()
            .iter()
            .all(|r| *r == 0.0));
        let f = MatrixFamily::new(vec![diag(&[1.0, 0.0])]).unwrap();
        assert!(orthogonality_check(&f, 5, &cfg())
            .unwrap()
            .iter()
            .all(|r| *r == 0.0));
        assert!(orthogonality_check(&f, 0, &cfg()).is_err());
    }

    #[test]
    fn verify_all_identity_and_zero() {
        for fam in [
            MatrixFamily::new(vec![ComplexMatrix::identity(3); 2]).unwrap(),
            MatrixFamily::new(vec![ComplexMatrix::zeros(3, 3); 2]).unwrap(),
        ] {
            let report =
                verify_all(&AnyFamily::General(fam), &VerifyOptions::default(), &cfg()).unwrap();
            assert!(report.passed, "{report:?}");
            assert_eq!(report.column_identity_residual, 0.0);
            assert_eq!(report.tensor_norm_sq, Some(0.0));
            assert!(report.orthogonality_residuals.iter().all(|r| *r == 0.0));
            assert!(report.pairing_residuals.iter().all(|r| *r == 0.0));
        }
    }

    #[test]
    fn verify_all_skips_oversized_tensor() {
        let fam = MatrixFamily::new(vec![ComplexMatrix::identity(4); 3]).unwrap();
        let small = ToleranceConfig {
            tensor_budget: 100,
            ..cfg()
        };
        let report =
            verify_all(&AnyFamily::General(fam), &VerifyOptions::default(), &small).unwrap();
        assert_eq!(report.checks.tensor_witness, CheckStatus::Skipped);
        assert_eq!(report.checks.norm_trace, CheckStatus::Skipped);
        assert_eq!(report.checks.pairing, CheckStatus::Skipped);
        assert_eq!(report.checks.orthogonality, CheckStatus::Passed);
        assert_eq!(report.skipped_reasons.len(), 1);
        assert!(report.passed);
    }
}
