//! JSON file schemas. Matrices are row-major nested arrays of `[re, im]`
//! pairs; every index (basis element, root) is zero-based.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::{Algebra, AlgebraBasis};
use crate::error::{Error, Result};
use crate::linalg::{CMat, C64};
use crate::state::GroupOp;

pub type JsonMatrix = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(m: &CMat) -> JsonMatrix {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

pub fn matrix_from_json(rows: &JsonMatrix, dim: usize) -> Result<CMat> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::Parse(format!("matrix is not {dim}x{dim}")));
    }
    let mut m = CMat::zeros(dim, dim);
    for (i, row) in rows.iter().enumerate() {
        for (j, &[re, im]) in row.iter().enumerate() {
            if !(re.is_finite() && im.is_finite()) {
                return Err(Error::Parse(format!("non-finite entry at ({i}, {j})")));
            }
            m[(i, j)] = C64::new(re, im);
        }
    }
    Ok(m)
}

/// Algebra definition file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub rep_dim: usize,
    pub normalization: Option<f64>,
    pub csa: Vec<usize>,
    pub root_pairs: Vec<[usize; 2]>,
    pub basis: Vec<JsonMatrix>,
}

impl AlgebraFile {
    pub fn from_algebra(alg: &Algebra) -> Self {
        let cw = alg.cartan();
        AlgebraFile {
            name: Some(alg.label().to_string()),
            rep_dim: alg.rep_dim(),
            normalization: Some(alg.basis().normalization()),
            csa: cw.csa_indices().to_vec(),
            root_pairs: cw.pair_map().iter().map(|&(a, b)| [a, b]).collect(),
            basis: alg.basis().elements().iter().map(matrix_to_json).collect(),
        }
    }

    pub fn matrices(&self) -> Result<Vec<CMat>> {
        if self.rep_dim == 0 {
            return Err(Error::Parse("rep_dim must be positive".into()));
        }
        self.basis
            .iter()
            .map(|m| matrix_from_json(m, self.rep_dim))
            .collect()
    }

    /// Short content hash identifying a basis.
    pub fn fingerprint(basis: &AlgebraBasis) -> String {
        let mut hasher = Sha256::new();
        for m in basis.elements() {
            for z in m.iter() {
                hasher.update(z.re.to_le_bytes());
                hasher.update(z.im.to_le_bytes());
            }
        }
        let digest = hasher.finalize();
        format!("sha256:{}", &hex::encode(digest)[..16])
    }
}

/// Moment-vector file.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MomentFile {
    pub algebra: String,
    pub moments: Vec<f64>,
    pub shots_per_observable: Option<u64>,
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum OpKind {
    Jacobi,
    Weyl,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct OpRecord {
    pub l: usize,
    pub alpha: [f64; 2],
}

impl From<&GroupOp> for OpRecord {
    fn from(op: &GroupOp) -> Self {
        OpRecord {
            l: op.root,
            alpha: [op.alpha.re, op.alpha.im],
        }
    }
}

impl From<&OpRecord> for GroupOp {
    fn from(r: &OpRecord) -> Self {
        GroupOp::new(r.l, C64::new(r.alpha[0], r.alpha[1]))
    }
}

/// Parameters that regenerate a simulated black-box state.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct HiddenSpec {
    pub seed: u64,
    pub num_ops: usize,
}

/// Circuit file. `ops` are listed in application order: `ops[0]` acts on
/// the highest-weight state first.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CircuitFile {
    pub algebra: String,
    pub ops: Vec<OpRecord>,
    pub kind_tags: Vec<OpKind>,
    pub trace: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hidden: Option<HiddenSpec>,
}

impl CircuitFile {
    pub fn group_ops(&self) -> Vec<GroupOp> {
        self.ops.iter().map(GroupOp::from).collect()
    }

    pub fn check(&self) -> Result<()> {
        if self.ops.len() != self.kind_tags.len() {
            return Err(Error::Parse(format!(
                "{} ops but {} kind tags",
                self.ops.len(),
                self.kind_tags.len()
            )));
        }
        if self
            .ops
            .iter()
            .any(|o| !(o.alpha[0].is_finite() && o.alpha[1].is_finite()))
        {
            return Err(Error::Parse("non-finite alpha".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum LqcInitial {
    Named(String),
    Moments(Vec<f64>),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum GateRecord {
    GroupOp { l: usize, alpha: [f64; 2] },
    Unitary { matrix: JsonMatrix },
}

/// Lie-algebraic circuit file.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct LqcFile {
    pub algebra: String,
    pub initial: LqcInitial,
    pub gates: Vec<GateRecord>,
}

pub fn read_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    let text = std::fs::read_to_string(path.as_ref())?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.as_ref().display())))
}

pub fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}
