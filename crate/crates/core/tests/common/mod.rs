#![allow(dead_code)]

use hspan::rng::{complex_gaussian, gaussian_matrix, stream};
use hspan::{ComplexMatrix, ComplexScalar, MatrixFamily, PsdFamily};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Kinds of family member used to build adversarial families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Member {
    Dense,
    /// Dense with `d` zeroed columns.
    RankDeficient(usize),
    Zero,
    Identity,
    /// Diagonal with some zero entries.
    Diagonal,
    /// Strictly upper triangular.
    Nilpotent,
    /// Dense columns drawn from a small pool, so columns repeat.
    RepeatedColumns,
    RankOne,
}

pub const MEMBER_KINDS: [Member; 8] = [
    Member::Dense,
    Member::RankDeficient(1),
    Member::Zero,
    Member::Identity,
    Member::Diagonal,
    Member::Nilpotent,
    Member::RepeatedColumns,
    Member::RankOne,
];

pub fn member(rng: &mut ChaCha8Rng, n: usize, kind: Member) -> ComplexMatrix {
    let zero = ComplexScalar::new(0.0, 0.0);
    match kind {
        Member::Dense => gaussian_matrix(rng, n, n),
        Member::RankDeficient(d) => {
            let d = if n > 1 { d.clamp(1, n - 1) } else { 0 };
            let g = gaussian_matrix(rng, n, n);
            let zeroed: Vec<usize> = rand::seq::index::sample(rng, n, d).into_vec();
            mat_from_fn(n, n, |i, j| {
                if zeroed.contains(&j) {
                    zero
                } else {
                    g.get(i, j)
                }
            })
        }
        Member::Zero => ComplexMatrix::zeros(n, n),
        Member::Identity => ComplexMatrix::identity(n),
        Member::Diagonal => {
            let d: Vec<ComplexScalar> = (0..n)
                .map(|_| {
                    if rng.random_bool(0.3) {
                        zero
                    } else {
                        complex_gaussian(rng)
                    }
                })
                .collect();
            ComplexMatrix::from_diagonal(&d).unwrap()
        }
        Member::Nilpotent => {
            let g = gaussian_matrix(rng, n, n);
            mat_from_fn(n, n, |i, j| if j > i { g.get(i, j) } else { zero })
        }
        Member::RepeatedColumns => {
            let pool_size = (n / 2).max(1);
            let pool = gaussian_matrix(rng, n, pool_size);
            let picks: Vec<usize> = (0..n).map(|_| rng.random_range(0..pool_size)).collect();
            mat_from_fn(n, n, |i, j| pool.get(i, picks[j]))
        }
        Member::RankOne => {
            let u = gaussian_matrix(rng, n, 1);
            let v = gaussian_matrix(rng, 1, n);
            u.matmul(&v).unwrap()
        }
    }
}

pub fn mat_from_fn(
    rows: usize,
    cols: usize,
    f: impl Fn(usize, usize) -> ComplexScalar,
) -> ComplexMatrix {
    let entries = (0..rows)
        .flat_map(|i| (0..cols).map(move |j| (i, j)))
        .map(|(i, j)| f(i, j))
        .collect();
    ComplexMatrix::from_row_major(rows, cols, entries).unwrap()
}

#[derive(Debug, Clone)]
pub struct Case {
    pub label: String,
    pub family: MatrixFamily,
}

/// Deterministic mix of families over `n in 1..=8`, `k in 1..=4`.
///
/// Each case picks a member kind per slot; every fourth case is homogeneous
/// so pure zero, identity and nilpotent families also occur.
pub fn family_zoo(count: usize, seed: u64) -> Vec<Case> {
    let mut rng = stream(seed);
    (0..count)
        .map(|idx| {
            let n = 1 + idx % 8;
            let k = 1 + (idx / 8) % 4;
            let homogeneous = idx % 4 == 3;
            let base = MEMBER_KINDS[rng.random_range(0..MEMBER_KINDS.len())];
            let kinds: Vec<Member> = (0..k)
                .map(|_| {
                    let kind = if homogeneous {
                        base
                    } else {
                        MEMBER_KINDS[rng.random_range(0..MEMBER_KINDS.len())]
                    };
                    match kind {
                        Member::RankDeficient(_) if n > 1 => {
                            Member::RankDeficient(rng.random_range(1..n))
                        }
                        other => other,
                    }
                })
                .collect();
            let mats = kinds.iter().map(|&m| member(&mut rng, n, m)).collect();
            Case {
                label: format!("#{idx} n={n} k={k} {kinds:?}"),
                family: MatrixFamily::new(mats).unwrap(),
            }
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct PsdCase {
    pub label: String,
    pub family: PsdFamily,
    /// The factors `M_i` with `A_i = M_i M_i^*`.
    pub factors: MatrixFamily,
}

/// PSD families `A_i = M_i M_i^*` with `M_i` of controlled rank.
pub fn psd_zoo(count: usize, seed: u64) -> Vec<PsdCase> {
    let mut rng = stream(seed);
    (0..count)
        .map(|idx| {
            let n = 1 + idx % 8;
            let k = 1 + (idx / 8) % 4;
            let mut ranks = Vec::with_capacity(k);
            let factors: Vec<ComplexMatrix> = (0..k)
                .map(|_| {
                    let r = rng.random_range(0..=n);
                    ranks.push(r);
                    if r == 0 {
                        return ComplexMatrix::zeros(n, n);
                    }
                    // n x r factor padded with zero columns to stay square
                    let g = gaussian_matrix(&mut rng, n, r);
                    mat_from_fn(n, n, |i, j| {
                        if j < r {
                            g.get(i, j)
                        } else {
                            ComplexScalar::new(0.0, 0.0)
                        }
                    })
                })
                .collect();
            let psd = PsdFamily::new(factors.iter().map(ComplexMatrix::gram).collect()).unwrap();
            PsdCase {
                label: format!("#{idx} n={n} k={k} ranks={ranks:?}"),
                family: psd,
                factors: MatrixFamily::new(factors).unwrap(),
            }
        })
        .collect()
}

pub fn rel_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let diff = a.sub(b).unwrap().frobenius_norm();
    diff / a
        .frobenius_norm()
        .max(b.frobenius_norm())
        .max(f64::MIN_POSITIVE)
}
