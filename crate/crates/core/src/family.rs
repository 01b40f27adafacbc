use crate::eigen::{hermitian_eig, HERMITIAN_REL_TOL};
use crate::error::{HspanError, Result};
use crate::matrix::ComplexMatrix;

/// Relative floor on the smallest eigenvalue accepted as positive semidefinite.
pub const PSD_REL_TOL: f64 = 1e-10;

/// Ordered list `B_1, ..., B_k` of `n x n` complex matrices, `k >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixFamily {
    n: usize,
    matrices: Vec<ComplexMatrix>,
}

impl MatrixFamily {
    pub fn new(matrices: Vec<ComplexMatrix>) -> Result<Self> {
        let first = matrices
            .first()
            .ok_or_else(|| HspanError::InvalidInput("a family needs at least one matrix".into()))?;
        let n = first.rows();
        for (idx, m) in matrices.iter().enumerate() {
            if !m.is_square() {
                return Err(HspanError::NotSquare {
                    rows: m.rows(),
                    cols: m.cols(),
                });
            }
            if m.rows() != n {
                return Err(HspanError::dim(
                    "MatrixFamily",
                    format!(
                        "member {} is {}x{}, expected {n}x{n}",
                        idx + 1,
                        m.rows(),
                        m.cols()
                    ),
                ));
            }
        }
        if n == 0 {
            return Err(HspanError::InvalidInput("matrix order must be >= 1".into()));
        }
        Ok(Self { n, matrices })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrices(&self) -> &[ComplexMatrix] {
        &self.matrices
    }

    /// `prod_i ||B_i||_F`, the normalization used by residual checks.
    pub fn scale(&self) -> f64 {
        self.matrices
            .iter()
            .map(ComplexMatrix::frobenius_norm)
            .product()
    }

    /// Applies `f` to every member.
    pub fn map(&self, f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> Result<Self> {
        Self::new(self.matrices.iter().map(f).collect())
    }
}

/// Family `A_1, ..., A_k` of Hermitian positive semidefinite matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdFamily {
    inner: MatrixFamily,
}

impl PsdFamily {
    /// Validates every member: Hermitian within `1e-10 ||A||_F` and smallest
    /// eigenvalue at least `-1e-10 ||A||_F`.
    pub fn new(matrices: Vec<ComplexMatrix>) -> Result<Self> {
        let inner = MatrixFamily::new(matrices)?;
        for m in inner.matrices() {
            check_psd(m)?;
        }
        Ok(Self { inner })
    }

    pub fn n(&self) -> usize {
        self.inner.n()
    }

    pub fn k(&self) -> usize {
        self.inner.k()
    }

    pub fn matrices(&self) -> &[ComplexMatrix] {
        self.inner.matrices()
    }

    pub fn as_family(&self) -> &MatrixFamily {
        &self.inner
    }
}

/// Either kind of family, as loaded from an instance file.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyFamily {
    General(MatrixFamily),
    Psd(PsdFamily),
}

impl AnyFamily {
    pub fn n(&self) -> usize {
        match self {
            AnyFamily::General(f) => f.n(),
            AnyFamily::Psd(f) => f.n(),
        }
    }

    pub fn k(&self) -> usize {
        match self {
            AnyFamily::General(f) => f.k(),
            AnyFamily::Psd(f) => f.k(),
        }
    }
}

/// Checks the positive semidefinite acceptance policy for one matrix.
pub fn check_psd(a: &ComplexMatrix) -> Result<()> {
    let scale = a.frobenius_norm();
    let defect = a.hermitian_defect()?;
    if defect > HERMITIAN_REL_TOL * scale {
        return Err(HspanError::NotHermitian {
            residual: defect,
            bound: HERMITIAN_REL_TOL * scale,
        });
    }
    let eig = hermitian_eig(a)?;
    let min = eig.values.last().copied().unwrap_or(0.0);
    let bound = -PSD_REL_TOL * scale;
    if min < bound {
        return Err(HspanError::NotPsd {
            min_eigenvalue: min,
            bound,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_shape_checks() {
        assert!(MatrixFamily::new(vec![]).is_err());
        assert!(MatrixFamily::new(vec![ComplexMatrix::zeros(2, 3)]).is_err());
        assert!(
            MatrixFamily::new(vec![ComplexMatrix::identity(2), ComplexMatrix::identity(3)])
                .is_err()
        );
        let f = MatrixFamily::new(vec![ComplexMatrix::identity(3); 2]).unwrap();
        assert_eq!((f.n(), f.k()), (3, 2));
        assert!((f.scale() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn psd_checks() {
        let ones = ComplexMatrix::ones(3, 3);
        assert!(PsdFamily::new(vec![ones, ComplexMatrix::identity(3)]).is_ok());
        let indefinite = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(matches!(
            PsdFamily::new(vec![indefinite]),
            Err(HspanError::NotPsd { .. })
        ));
        let skew = ComplexMatrix::from_real_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(
            PsdFamily::new(vec![skew]),
            Err(HspanError::NotHermitian { .. })
        ));
    }
}
