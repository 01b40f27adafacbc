//! Hermitian eigendecomposition by the cyclic Jacobi method.

use num_complex::Complex64;

use crate::error::{HspanError, Result};
use crate::matrix::ComplexMatrix;

/// Relative Hermitian defect accepted before symmetrizing.
pub const HERMITIAN_REL_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in descending order and the matching unitary eigenvector matrix
/// (eigenvector `j` is column `j`).
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V diag(f(lambda)) V^*`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let weights: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut s = Complex64::new(0.0, 0.0);
                for (l, w) in weights.iter().enumerate() {
                    if *w != 0.0 {
                        s += v.get(i, l) * v.get(j, l).conj() * *w;
                    }
                }
                out.set(i, j, s);
                out.set(j, i, s.conj());
            }
            let d = out.get(i, i).re;
            out.set(i, i, Complex64::new(d, 0.0));
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|l| l)
    }
}

/// Computes `A = V diag(values) V^*` for a Hermitian `A`.
///
/// The input must be Hermitian to within `1e-10 * ||A||_F`; its Hermitian
/// part is what gets diagonalized.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<HermitianEigen> {
    let defect = a.hermitian_defect()?;
    let scale = a.frobenius_norm();
    let bound = HERMITIAN_REL_TOL * scale;
    if defect > bound {
        return Err(HspanError::NotHermitian {
            residual: defect,
            bound,
        });
    }
    let mut work = a.hermitian_part()?;
    let n = work.rows();
    let mut vectors = ComplexMatrix::identity(n);

    if n > 1 && scale > 0.0 {
        let threshold = f64::EPSILON * scale / (n as f64);
        for _ in 0..MAX_SWEEPS {
            let mut rotated = false;
            for p in 0..n - 1 {
                for q in p + 1..n {
                    let b = work.get(p, q);
                    let abs_b = b.norm();
                    if abs_b <= threshold {
                        continue;
                    }
                    rotated = true;
                    rotate(&mut work, &mut vectors, p, q, b, abs_b);
                }
            }
            if !rotated {
                break;
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| work.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = vectors.select_columns(&order);
    Ok(HermitianEigen { values, vectors })
}

/// Parameters `(c, s)` of the real Jacobi rotation annihilating `|b|` in
/// `[[a, |b|], [|b|, d]]`.
pub(crate) fn jacobi_params(a: f64, d: f64, abs_b: f64) -> (f64, f64) {
    let theta = (d - a) / (2.0 * abs_b);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
        sign / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, t * c)
}

/// Applies `A <- W^* A W`, `V <- V W` with
/// `W = [[c, s e], [-s conj(e), c]]` on the `(p, q)` plane and `e = b / |b|`.
fn rotate(
    a: &mut ComplexMatrix,
    v: &mut ComplexMatrix,
    p: usize,
    q: usize,
    b: Complex64,
    abs_b: f64,
) {
    let n = a.rows();
    let e = b / abs_b;
    let (c, s) = jacobi_params(a.get(p, p).re, a.get(q, q).re, abs_b);
    let se = e * s;
    let se_conj = se.conj();

    for r in 0..n {
        let ap = a.get(r, p);
        let aq = a.get(r, q);
        a.set(r, p, ap * c - aq * se_conj);
        a.set(r, q, ap * se + aq * c);
    }
    for r in 0..n {
        let ap = a.get(p, r);
        let aq = a.get(q, r);
        a.set(p, r, ap * c - aq * se);
        a.set(q, r, ap * se_conj + aq * c);
    }
    let zero = Complex64::new(0.0, 0.0);
    a.set(p, q, zero);
    a.set(q, p, zero);
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;
    a.set(p, p, Complex64::new(app, 0.0));
    a.set(q, q, Complex64::new(aqq, 0.0));

    for r in 0..n {
        let vp = v.get(r, p);
        let vq = v.get(r, q);
        v.set(r, p, vp * c - vq * se_conj);
        v.set(r, q, vp * se + vq * c);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_input() {
        let a = ComplexMatrix::from_diagonal(&[c(1.0, 0.0), c(3.0, 0.0)]).unwrap();
        let eig = hermitian_eig(&a).unwrap();
        assert_eq!(eig.values, vec![3.0, 1.0]);
        // columns are e2, e1 up to phase
        assert!((eig.vectors.get(1, 0).norm() - 1.0).abs() < 1e-15);
        assert!((eig.vectors.get(0, 1).norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn swap_matrix() {
        let a = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let eig = hermitian_eig(&a).unwrap();
        assert!((eig.values[0] - 1.0).abs() < 1e-15);
        assert!((eig.values[1] + 1.0).abs() < 1e-15);
        assert!(eig.reconstruct().sub(&a).unwrap().frobenius_norm() < 1e-14);
    }

    #[test]
    fn complex_two_by_two() {
        // eigenvalues of [[2, i], [-i, 2]] are 3 and 1
        let a = ComplexMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(0.0, 1.0)],
            vec![c(0.0, -1.0), c(2.0, 0.0)],
        ])
        .unwrap();
        let eig = hermitian_eig(&a).unwrap();
        assert!((eig.values[0] - 3.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
        assert!(eig.reconstruct().sub(&a).unwrap().frobenius_norm() < 1e-14);
    }

    #[test]
    fn zero_and_scalar() {
        let eig = hermitian_eig(&ComplexMatrix::zeros(3, 3)).unwrap();
        assert_eq!(eig.values, vec![0.0; 3]);
        assert_eq!(eig.vectors, ComplexMatrix::identity(3));
        let eig = hermitian_eig(&ComplexMatrix::from_real_rows(&[vec![-2.5]]).unwrap()).unwrap();
        assert_eq!(eig.values, vec![-2.5]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            hermitian_eig(&ComplexMatrix::zeros(2, 3)),
            Err(HspanError::NotSquare { .. })
        ));
        let a = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(
            hermitian_eig(&a),
            Err(HspanError::NotHermitian { .. })
        ));
    }
}
