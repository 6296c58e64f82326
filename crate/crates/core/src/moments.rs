//! Moment vectors and the Cartan-Weyl coefficients of the Hamiltonian
//! `F = Σ_m ⟨O_m⟩ O_m` built from them.

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::io::MomentFile;
use crate::linalg::{CMat, C64};
use crate::state::MeasurementRecord;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MomentSource {
    Exact,
    Sampled { shots: u64, seed: u64 },
}

/// Expectation values of every basis element, exact or estimated. Values
/// are stored as given; clipping happens only in [`build_target`].
#[derive(Clone, Debug, PartialEq)]
pub struct MomentVector {
    values: Vec<f64>,
    purity: f64,
    source: MomentSource,
}

impl MomentVector {
    pub fn exact(values: Vec<f64>) -> Self {
        Self::with_source(values, MomentSource::Exact)
    }

    pub fn sampled(values: Vec<f64>, shots: u64, seed: u64) -> Self {
        Self::with_source(values, MomentSource::Sampled { shots, seed })
    }

    pub fn from_records(records: &[MeasurementRecord]) -> Self {
        let shots = records.first().map_or(0, |r| r.num_shots);
        let seed = records.first().map_or(0, |r| r.shot_seed);
        Self::sampled(records.iter().map(|r| r.estimate).collect(), shots, seed)
    }

    fn with_source(values: Vec<f64>, source: MomentSource) -> Self {
        MomentVector {
            purity: purity(&values),
            values,
            source,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn purity(&self) -> f64 {
        self.purity
    }

    pub fn source(&self) -> MomentSource {
        self.source
    }

    pub fn to_file(&self, algebra: &str) -> MomentFile {
        let (shots, seed) = match self.source {
            MomentSource::Exact => (None, None),
            MomentSource::Sampled { shots, seed } => (Some(shots), Some(seed)),
        };
        MomentFile {
            algebra: algebra.to_string(),
            moments: self.values.clone(),
            shots_per_observable: shots,
            seed,
        }
    }

    pub fn from_file(file: &MomentFile) -> Result<Self> {
        if file.moments.iter().any(|x| !x.is_finite()) {
            return Err(Error::Parse("non-finite moment".into()));
        }
        Ok(match (file.shots_per_observable, file.seed) {
            (Some(shots), seed) => Self::sampled(file.moments.clone(), shots, seed.unwrap_or(0)),
            (None, _) => Self::exact(file.moments.clone()),
        })
    }
}

/// `Σ_m values[m]²`.
pub fn purity(values: &[f64]) -> f64 {
    values.iter().map(|x| x * x).sum()
}

/// `F = Σ_r γ_r H_r + Σ_l (ι_l E+_l + ι_l* E-_l)` after `step` Jacobi steps.
#[derive(Clone, Debug, PartialEq)]
pub struct CwDecomposition {
    pub gamma: Vec<f64>,
    pub iota: Vec<C64>,
    pub step: usize,
}

impl CwDecomposition {
    pub fn from_coefficients(alg: &Algebra, coeffs: &[f64], step: usize) -> Self {
        let (gamma, iota) = alg.split_coefficients(coeffs);
        CwDecomposition { gamma, iota, step }
    }

    pub fn coefficients(&self, alg: &Algebra) -> Vec<f64> {
        alg.join_coefficients(&self.gamma, &self.iota)
    }

    /// The represented operator in the defining representation.
    pub fn operator(&self, alg: &Algebra) -> CMat {
        let cw = alg.cartan();
        let d = alg.rep_dim();
        let mut out = CMat::zeros(d, d);
        for (&r, &g) in cw.csa_indices().iter().zip(&self.gamma) {
            out += alg.basis().element(r).scale(g);
        }
        for ((ep, em), &z) in cw.raising().iter().zip(cw.lowering()).zip(&self.iota) {
            out += ep.map(|x| x * z) + em.map(|x| x * z.conj());
        }
        out
    }

    /// `d = Σ_l |ι_l|²`, the squared distance to the Cartan subalgebra.
    pub fn offdiag_distance(&self) -> f64 {
        self.iota.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Squared norm of the basis coefficients, `Σ γ_r² + Σ |ι_l|²`.
    pub fn coefficient_norm_sq(&self) -> f64 {
        self.gamma.iter().map(|g| g * g).sum::<f64>() + self.offdiag_distance()
    }

    pub fn project_csa(&self) -> CwDecomposition {
        CwDecomposition {
            gamma: self.gamma.clone(),
            iota: vec![C64::new(0.0, 0.0); self.iota.len()],
            step: self.step,
        }
    }
}

/// Coefficients of `F̃_ψ`, with each moment clipped to `[−‖O_m‖, ‖O_m‖]`.
pub fn build_target(alg: &Algebra, moments: &MomentVector) -> Result<CwDecomposition> {
    if moments.len() != alg.dim() {
        return Err(Error::LengthMismatch {
            expected: alg.dim(),
            found: moments.len(),
        });
    }
    let clipped: Vec<f64> = moments
        .values()
        .iter()
        .zip(alg.operator_norms())
        .map(|(&x, &n)| x.clamp(-n, n))
        .collect();
    Ok(CwDecomposition::from_coefficients(alg, &clipped, 0))
}
