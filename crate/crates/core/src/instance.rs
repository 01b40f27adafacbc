//! JSON instance files and seeded instance generation.
//!
//! ```json
//! {
//!   "schema_version": "1.0",
//!   "n": 2,
//!   "k": 1,
//!   "kind": "general",
//!   "matrices": [[[[1.0, 0.0], [0.0, -1.0]], [[0.5, 0.5], [2.0, 0.0]]]]
//! }
//! ```
//!
//! Each matrix is a list of rows, each entry a `[re, im]` pair.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use crate::error::{HspanError, Result};
use crate::family::{AnyFamily, MatrixFamily, PsdFamily};
use crate::matrix::ComplexMatrix;
use crate::rng::{gaussian_matrix, stream};

pub const INSTANCE_SCHEMA_VERSION: &str = "1.0";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    General,
    Psd,
}

impl std::fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FamilyKind::General => "general",
            FamilyKind::Psd => "psd",
        })
    }
}

/// On-disk form of a matrix family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub schema_version: String,
    pub n: usize,
    pub k: usize,
    pub kind: FamilyKind,
    pub matrices: Vec<Vec<Vec<[f64; 2]>>>,
}

fn encode(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.rows())
        .map(|i| m.row_vec(i).into_iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

impl InstanceFile {
    pub fn from_family(family: &AnyFamily) -> Self {
        let (kind, mats) = match family {
            AnyFamily::General(f) => (FamilyKind::General, f.matrices()),
            AnyFamily::Psd(f) => (FamilyKind::Psd, f.matrices()),
        };
        Self {
            schema_version: INSTANCE_SCHEMA_VERSION.to_string(),
            n: family.n(),
            k: family.k(),
            kind,
            matrices: mats.iter().map(encode).collect(),
        }
    }

    /// Checks the declared shape and builds the family; `psd` files are
    /// validated as positive semidefinite.
    pub fn to_family(&self) -> Result<AnyFamily> {
        if self.schema_version.split('.').next() != INSTANCE_SCHEMA_VERSION.split('.').next() {
            return Err(HspanError::InvalidInput(format!(
                "unsupported schema_version {:?}",
                self.schema_version
            )));
        }
        if self.n == 0 || self.k == 0 {
            return Err(HspanError::InvalidInput("n and k must be >= 1".into()));
        }
        if self.matrices.len() != self.k {
            return Err(HspanError::InvalidInput(format!(
                "k = {} but {} matrices present",
                self.k,
                self.matrices.len()
            )));
        }
        let mats = self
            .matrices
            .iter()
            .enumerate()
            .map(|(idx, rows)| {
                if rows.len() != self.n || rows.iter().any(|r| r.len() != self.n) {
                    return Err(HspanError::InvalidInput(format!(
                        "matrix {} is not {}x{}",
                        idx + 1,
                        self.n,
                        self.n
                    )));
                }
                let entries = rows
                    .iter()
                    .flatten()
                    .map(|[re, im]| Complex64::new(*re, *im))
                    .collect();
                ComplexMatrix::from_row_major(self.n, self.n, entries)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(match self.kind {
            FamilyKind::General => AnyFamily::General(MatrixFamily::new(mats)?),
            FamilyKind::Psd => AnyFamily::Psd(PsdFamily::new(mats)?),
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| HspanError::InvalidInput(format!("malformed instance: {e}")))
    }

    /// Pretty JSON with a trailing newline. Floats use the shortest
    /// representation that parses back to the same bits.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance serializes");
        s.push('\n');
        s
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|e| HspanError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json())
            .map_err(|e| HspanError::Io(format!("{}: {e}", path.display())))
    }
}

/// Parameters of a random instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenSpec {
    pub n: usize,
    pub k: usize,
    pub kind: FamilyKind,
    pub rank_deficit: usize,
    pub seed: u64,
}

/// Draws a random family from one ChaCha8 stream keyed by `spec.seed`.
///
/// `general`: each `B_i` is an `n x n` complex Gaussian matrix with
/// `rank_deficit` columns (chosen at random per member) set to zero.
/// `psd`: each `A_i = M_i M_i^*` with `M_i` complex Gaussian of size
/// `n x (n - rank_deficit)`.
pub fn generate(spec: &GenSpec) -> Result<AnyFamily> {
    let GenSpec {
        n,
        k,
        kind,
        rank_deficit,
        seed,
    } = *spec;
    if n == 0 || k == 0 {
        return Err(HspanError::InvalidInput("n and k must be >= 1".into()));
    }
    if rank_deficit >= n {
        return Err(HspanError::InvalidInput(format!(
            "rank deficit {rank_deficit} must be < n = {n}"
        )));
    }
    let mut rng = stream(seed);
    let mut mats = Vec::with_capacity(k);
    for _ in 0..k {
        match kind {
            FamilyKind::General => {
                let b = gaussian_matrix(&mut rng, n, n);
                let zeroed: Vec<usize> = sample(&mut rng, n, rank_deficit).into_vec();
                let b = ComplexMatrix::from_fn(n, n, |i, j| {
                    if zeroed.contains(&j) {
                        Complex64::new(0.0, 0.0)
                    } else {
                        b.get(i, j)
                    }
                });
                mats.push(b);
            }
            FamilyKind::Psd => {
                let m = gaussian_matrix(&mut rng, n, n - rank_deficit);
                mats.push(m.gram());
            }
        }
    }
    Ok(match kind {
        FamilyKind::General => AnyFamily::General(MatrixFamily::new(mats)?),
        FamilyKind::Psd => AnyFamily::Psd(PsdFamily::new(mats)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        let spec = GenSpec {
            n: 3,
            k: 2,
            kind: FamilyKind::General,
            rank_deficit: 0,
            seed: 7,
        };
        let a = InstanceFile::from_family(&generate(&spec).unwrap()).to_json();
        let b = InstanceFile::from_family(&generate(&spec).unwrap()).to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn rank_deficit_zeroes_columns() {
        let spec = GenSpec {
            n: 5,
            k: 3,
            kind: FamilyKind::General,
            rank_deficit: 2,
            seed: 1,
        };
        let AnyFamily::General(f) = generate(&spec).unwrap() else {
            panic!("general family expected");
        };
        for b in f.matrices() {
            let zero_cols = (0..5).filter(|&j| b.column(j).norm() == 0.0).count();
            assert_eq!(zero_cols, 2);
        }
    }

    #[test]
    fn psd_generation_validates() {
        let spec = GenSpec {
            n: 4,
            k: 2,
            kind: FamilyKind::Psd,
            rank_deficit: 1,
            seed: 11,
        };
        let fam = generate(&spec).unwrap();
        let file = InstanceFile::from_family(&fam);
        let reloaded = InstanceFile::from_json(&file.to_json())
            .unwrap()
            .to_family()
            .unwrap();
        assert_eq!(reloaded, fam);
    }

    #[test]
    fn rejects_bad_specs() {
        let spec = GenSpec {
            n: 3,
            k: 1,
            kind: FamilyKind::General,
            rank_deficit: 3,
            seed: 0,
        };
        assert!(generate(&spec).is_err());
        assert!(generate(&GenSpec { n: 0, ..spec }).is_err());
        assert!(generate(&GenSpec {
            k: 0,
            rank_deficit: 0,
            ..spec
        })
        .is_err());
    }

    #[test]
    fn rejects_malformed_files() {
        assert!(InstanceFile::from_json("{").is_err());
        let bad_count =
            r#"{"schema_version":"1.0","n":1,"k":2,"kind":"general","matrices":[[[[1.0,0.0]]]]}"#;
        assert!(InstanceFile::from_json(bad_count)
            .unwrap()
            .to_family()
            .is_err());
        let bad_shape =
            r#"{"schema_version":"1.0","n":2,"k":1,"kind":"general","matrices":[[[[1.0,0.0]]]]}"#;
        assert!(InstanceFile::from_json(bad_shape)
            .unwrap()
            .to_family()
            .is_err());
        let bad_version =
            r#"{"schema_version":"2.0","n":1,"k":1,"kind":"general","matrices":[[[[1.0,0.0]]]]}"#;
        assert!(InstanceFile::from_json(bad_version)
            .unwrap()
            .to_family()
            .is_err());
        let not_psd =
            r#"{"schema_version":"1.0","n":1,"k":1,"kind":"psd","matrices":[[[[-1.0,0.0]]]]}"#;
        assert!(matches!(
            InstanceFile::from_json(not_psd).unwrap().to_family(),
            Err(HspanError::NotPsd { .. })
        ));
    }
}
