//! Classical simulation of circuits whose gates map the algebra to itself:
//! moments are pushed through each gate's adjoint action.

use crate::algebra::Algebra;
use crate::diagonalizer::DiagonalizerOptions;
use crate::error::{Error, Result};
use crate::io::{matrix_from_json, GateRecord, LqcFile, LqcInitial};
use crate::linalg::{expm_i_hermitian, fro, max_abs, CMat, RMat};
use crate::moments::{purity, MomentVector};
use crate::pipeline::{synthesize, Source, SynthesisReport, ToleranceBudget};
use crate::state::{highest_weight_moments, GroupOp};

pub const SPAN_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub enum Gate {
    Group(GroupOp),
    /// Explicit unitary in the defining representation.
    Unitary(CMat),
}

impl Gate {
    pub fn unitary(&self, alg: &Algebra) -> CMat {
        match self {
            Gate::Group(op) => op.unitary(alg),
            Gate::Unitary(u) => u.clone(),
        }
    }
}

/// `T†O_mT = Σ_m′ matrix[(m, m′)] O_m′`.
#[derive(Clone, Debug)]
pub struct AdjointAction {
    pub matrix: RMat,
    pub gate: Gate,
}

pub fn adjoint_action_of(alg: &Algebra, gate: Gate) -> Result<AdjointAction> {
    let matrix = match &gate {
        Gate::Group(op) => {
            op.check(alg)?;
            // exp(−i ad_G) carries coordinates of X to those of T†XT
            let ad = alg.adjoint().commutator_image(&op.generator_coeffs(alg));
            expm_i_hermitian(&(-ad)).transpose().map(|z| z.re)
        }
        Gate::Unitary(u) => {
            let d = alg.rep_dim();
            if u.shape() != (d, d) {
                return Err(Error::LengthMismatch {
                    expected: d,
                    found: u.nrows(),
                });
            }
            let unitarity = max_abs(&(u.adjoint() * u - CMat::identity(d, d)));
            if unitarity > SPAN_TOL {
                return Err(Error::InvalidParameter(format!(
                    "gate is not unitary (residual {unitarity:.3e})"
                )));
            }
            let m = alg.dim();
            let mut out = RMat::zeros(m, m);
            for (row, o) in alg.basis().elements().iter().enumerate() {
                let conj = u.adjoint() * o * u;
                let (coeffs, residual) = alg.basis().expand(&conj);
                let relative = residual / fro(o);
                if relative > SPAN_TOL {
                    return Err(Error::LeavesAlgebraSpan { residual: relative });
                }
                for (col, z) in coeffs.iter().enumerate() {
                    out[(row, col)] = z.re;
                }
            }
            out
        }
    };
    Ok(AdjointAction { matrix, gate })
}

#[derive(Clone, Debug)]
pub struct LqcCircuit {
    pub initial: Vec<f64>,
    /// Applied in order: `gates[0]` acts on the initial state first.
    pub gates: Vec<AdjointAction>,
}

impl LqcCircuit {
    pub fn from_file(alg: &Algebra, file: &LqcFile) -> Result<Self> {
        let initial = match &file.initial {
            LqcInitial::Named(name) if name == "hw" => highest_weight_moments(alg)?,
            LqcInitial::Named(name) => {
                return Err(Error::Parse(format!("unknown initial state `{name}`")))
            }
            LqcInitial::Moments(v) if v.len() == alg.dim() => v.clone(),
            LqcInitial::Moments(v) => {
                return Err(Error::LengthMismatch {
                    expected: alg.dim(),
                    found: v.len(),
                })
            }
        };
        let gates = file
            .gates
            .iter()
            .map(|g| {
                let gate = match g {
                    GateRecord::GroupOp { l, alpha } => Gate::Group(GroupOp::new(
                        *l,
                        crate::linalg::C64::new(alpha[0], alpha[1]),
                    )),
                    GateRecord::Unitary { matrix } => {
                        Gate::Unitary(matrix_from_json(matrix, alg.rep_dim())?)
                    }
                };
                adjoint_action_of(alg, gate)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LqcCircuit { initial, gates })
    }
}

/// Moments after every gate, `moments_l = d^{(l)} moments_{l−1}`.
pub fn propagate(circuit: &LqcCircuit) -> MomentVector {
    let mut v = nalgebra::DVector::from_column_slice(&circuit.initial);
    for action in &circuit.gates {
        v = &action.matrix * v;
    }
    MomentVector::exact(v.iter().copied().collect())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Certificate {
    pub is_gcs: bool,
    /// `P_h − Σ_m ⟨O_m⟩²`.
    pub deficit: f64,
}

/// Purity test: pure states reach `P_h` exactly when they are coherent.
pub fn gcs_certificate(alg: &Algebra, moments: &[f64]) -> Result<Certificate> {
    let p_h = purity(&highest_weight_moments(alg)?);
    let deficit = p_h - purity(moments);
    Ok(Certificate {
        is_gcs: deficit.abs() <= 1e-8 * p_h,
        deficit,
    })
}

/// Recovers a preparation circuit for the state described by `moments`.
pub fn final_state_query(
    alg: &Algebra,
    moments: &MomentVector,
    budget: &ToleranceBudget,
    options: &DiagonalizerOptions,
) -> Result<SynthesisReport> {
    let cert = gcs_certificate(alg, moments.values())?;
    if !cert.is_gcs {
        return Err(Error::NotAGcs {
            deficit: cert.deficit,
        });
    }
    synthesize(alg, Source::Moments(moments), budget, options)
}
