mod common;

use common::{family_zoo, psd_zoo, rel_diff};
use hspan::rng::{gaussian_matrix, random_unitary, stream};
use hspan::span::{basis_product_matrix, corollary4_sample_run, sqrt_family};
use hspan::{
    basis_product_oracle, corollary4_sample_span, corollary5_span, gram_hadamard,
    random_sample_span, theorem_span, ComplexMatrix, ComplexScalar, ComplexVector, HspanError,
    MatrixFamily, ToleranceConfig,
};

fn right_multiplied(family: &MatrixFamily, right: &[ComplexMatrix]) -> MatrixFamily {
    let mats = family
        .matrices()
        .iter()
        .zip(right)
        .map(|(b, c)| b.matmul(c).unwrap())
        .collect();
    MatrixFamily::new(mats).unwrap()
}

#[test]
fn theorem_matches_oracle_on_zoo() {
    let cfg = ToleranceConfig::default();
    for case in family_zoo(120, 1) {
        let thm = theorem_span(&case.family, &cfg);
        let oracle = basis_product_oracle(&case.family, &cfg).unwrap();
        let d = thm.distance(&oracle).unwrap();
        assert!(d <= 1e-8, "{} distance {d:e}", case.label);
        assert_eq!(thm.rank(), oracle.rank(), "{}", case.label);
    }
}

#[test]
fn gram_columns_lie_in_oracle_span() {
    let cfg = ToleranceConfig::default();
    for case in family_zoo(80, 2) {
        let oracle = basis_product_oracle(&case.family, &cfg).unwrap();
        for col in gram_hadamard(&case.family).columns() {
            let r = oracle.residual(&col).unwrap() / col.norm().max(1.0);
            assert!(r <= 1e-8, "{} residual {r:e}", case.label);
        }
    }
}

#[test]
fn gram_equals_oracle_outer_product() {
    for case in family_zoo(40, 3) {
        let m = basis_product_matrix(&case.family, &ToleranceConfig::default()).unwrap();
        let g = gram_hadamard(&case.family);
        assert!(rel_diff(&g, &m.gram()) <= 1e-13, "{}", case.label);
    }
}

#[test]
fn random_sampling_is_monotone_and_reaches_theorem() {
    let cfg = ToleranceConfig::with_seed(17);
    for case in family_zoo(40, 4) {
        let n = case.family.n();
        let bound = theorem_span(&case.family, &cfg).rank();
        let mut last = 0;
        for s in 1..=n + 5 {
            let r = random_sample_span(&case.family, s, &cfg).unwrap().rank();
            assert!(r >= last && r <= bound, "{}", case.label);
            last = r;
        }
        let full = random_sample_span(&case.family, n + 5, &cfg).unwrap();
        assert!(
            full.distance(&theorem_span(&case.family, &cfg)).unwrap() <= 1e-8,
            "{}",
            case.label
        );
    }
}

#[test]
fn sampler_rank_for_identity_families() {
    let cfg = ToleranceConfig::with_seed(0);
    for n in 1..=6 {
        for k in 1..=3 {
            let fam = MatrixFamily::new(vec![ComplexMatrix::identity(n); k]).unwrap();
            assert_eq!(random_sample_span(&fam, n + 5, &cfg).unwrap().rank(), n);
            assert_eq!(theorem_span(&fam, &cfg).rank(), n);
        }
    }
}

#[test]
fn psd_routes_agree() {
    let cfg = ToleranceConfig::with_seed(5);
    for case in psd_zoo(60, 6) {
        let c5 = corollary5_span(&case.family, &cfg);
        let roots = sqrt_family(&case.family).unwrap();
        assert!(
            c5.distance(&theorem_span(&roots, &cfg)).unwrap() <= 1e-8,
            "{}",
            case.label
        );
        assert!(
            c5.distance(&theorem_span(&case.factors, &cfg)).unwrap() <= 1e-8,
            "{}",
            case.label
        );
        assert!(
            c5.distance(&basis_product_oracle(&roots, &cfg).unwrap())
                .unwrap()
                <= 1e-8,
            "{}",
            case.label
        );
        let c4 = corollary4_sample_span(&case.family, &cfg);
        assert!(c4.distance(&c5).unwrap() <= 1e-8, "{}", case.label);
    }
}

#[test]
fn sampler_stops_within_window() {
    let cfg = ToleranceConfig::with_seed(8);
    for case in psd_zoo(30, 7) {
        let run = corollary4_sample_run(&case.family, &cfg);
        assert!(run.stabilized, "{}", case.label);
        assert!(run.samples_drawn >= cfg.stability_window);
        assert!(
            run.samples_drawn <= run.subspace.rank() + cfg.stability_window,
            "{}",
            case.label
        );
    }
}

#[test]
fn gram_is_invariant_under_column_unitaries() {
    for case in family_zoo(60, 9) {
        let mut rng = stream(99);
        let n = case.family.n();
        let unitaries: Vec<ComplexMatrix> = (0..case.family.k())
            .map(|_| random_unitary(&mut rng, n))
            .collect();
        let rotated = right_multiplied(&case.family, &unitaries);
        let g = gram_hadamard(&case.family);
        let h = gram_hadamard(&rotated);
        let err = g.sub(&h).unwrap().frobenius_norm();
        assert!(
            err <= 1e-12 * g.frobenius_norm().max(1e-300) || err == 0.0,
            "{} err {err:e}",
            case.label
        );
    }
}

#[test]
fn span_is_invariant_under_scaling_and_right_multiplication() {
    let cfg = ToleranceConfig::default();
    for case in family_zoo(60, 10) {
        let n = case.family.n();
        let mut rng = stream(7);
        let c = ComplexScalar::new(-1.7, 0.4);
        let scaled = case.family.map(|b| b.scale(c)).unwrap();
        let g = gram_hadamard(&case.family);
        let factor = c.norm_sqr().powi(case.family.k() as i32);
        let g_scaled = gram_hadamard(&scaled);
        assert!(
            rel_diff(&g_scaled, &g.scale(ComplexScalar::new(factor, 0.0))) <= 1e-13,
            "{}",
            case.label
        );

        let mixers: Vec<ComplexMatrix> = (0..case.family.k())
            .map(|_| gaussian_matrix(&mut rng, n, n))
            .collect();
        let mixed = right_multiplied(&case.family, &mixers);
        let base = theorem_span(&case.family, &cfg);
        assert!(
            base.distance(&theorem_span(&scaled, &cfg)).unwrap() <= 1e-8,
            "{}",
            case.label
        );
        assert!(
            base.distance(&theorem_span(&mixed, &cfg)).unwrap() <= 1e-8,
            "{}",
            case.label
        );
    }
}

#[test]
fn known_small_spans() {
    let cfg = ToleranceConfig::default();
    let e11 = ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
    let e22 = ComplexMatrix::from_real_rows(&[vec![0.0, 0.0], vec![0.0, 1.0]]).unwrap();
    assert_eq!(
        theorem_span(&MatrixFamily::new(vec![e11.clone(), e22]).unwrap(), &cfg).rank(),
        0
    );
    let s = theorem_span(&MatrixFamily::new(vec![e11.clone(), e11]).unwrap(), &cfg);
    assert_eq!(s.rank(), 1);
    assert!(s
        .contains(&ComplexVector::basis_vector(2, 1).unwrap(), 1e-12)
        .unwrap());

    let ones = ComplexMatrix::ones(3, 3);
    assert_eq!(
        theorem_span(&MatrixFamily::new(vec![ones.clone(), ones]).unwrap(), &cfg).rank(),
        1
    );
}

#[test]
fn oracle_respects_budget() {
    let fam = MatrixFamily::new(vec![ComplexMatrix::identity(8); 6]).unwrap();
    let err = basis_product_oracle(&fam, &ToleranceConfig::default()).unwrap_err();
    assert!(matches!(err, HspanError::InstanceTooLarge { .. }));
}
