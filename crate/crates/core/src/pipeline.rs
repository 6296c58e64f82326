//! End-to-end synthesis: tolerance budget, moment estimation,
//! diagonalization, Weyl mapping and circuit assembly.

use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::diagonalizer::{self, step_bound, DiagonalizerOptions};
use crate::error::{Error, Result};
use crate::io::{CircuitFile, HiddenSpec, OpKind, OpRecord};
use crate::linalg::eigh;
use crate::moments::{build_target, purity, MomentVector};
use crate::state::{
    apply_group_ops, highest_weight_moments, highest_weight_state, GroupOp, HiddenGcs, StateVector,
};
use crate::weyl::{reflect_to_highest_weight, top_weight_state};

/// Proportionality constants of the tolerance choices.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BudgetConstants {
    pub c_d: f64,
    pub c_m: f64,
}

impl Default for BudgetConstants {
    fn default() -> Self {
        BudgetConstants {
            c_d: 1.0 / 16.0,
            c_m: 1.0 / 8.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceBudget {
    pub epsilon: f64,
    pub delta: f64,
    pub eps_d: f64,
    pub eps_m: f64,
    pub gap: f64,
    pub o_norm: f64,
    /// Shots per observable.
    pub shots: u64,
    pub num_observables: usize,
    pub num_roots: usize,
    /// Step bound evaluated at `d⁰ = P_h`, the largest possible value.
    pub k_prime_bound: usize,
    pub constants: BudgetConstants,
}

impl ToleranceBudget {
    pub fn total_shots(&self) -> u64 {
        self.shots * self.num_observables as u64
    }

    pub fn with_shots(mut self, shots: u64) -> Self {
        self.shots = shots;
        self
    }
}

/// `Q = ⌈2‖O‖² ln(2M/δ) / ε_M²⌉`, enough for every one of `M` estimates to
/// fall within `ε_M` with joint probability at least `1 − δ`.
pub fn hoeffding_shots(o_norm: f64, eps_m: f64, delta: f64, num_observables: usize) -> u64 {
    let q = 2.0 * o_norm * o_norm * (2.0 * num_observables as f64 / delta).ln() / (eps_m * eps_m);
    q.ceil() as u64
}

/// `F_hw = Σ_r w_r H_r` in the defining representation.
pub fn highest_weight_operator(alg: &Algebra) -> Result<crate::linalg::CMat> {
    let (_, w) = highest_weight_state(alg)?;
    let d = alg.rep_dim();
    let mut f = crate::linalg::CMat::zeros(d, d);
    for (&r, &wr) in alg.cartan().csa_indices().iter().zip(&w) {
        f += alg.basis().element(r).scale(wr);
    }
    Ok(f)
}

/// Gap between the two largest eigenvalues of `F_hw`.
pub fn spectral_gap(alg: &Algebra) -> Result<f64> {
    let (values, _) = eigh(&highest_weight_operator(alg)?);
    let n = values.len();
    if n < 2 {
        return Err(Error::ZeroGap);
    }
    let gap = values[n - 1] - values[n - 2];
    let scale = values[n - 1].abs().max(values[0].abs());
    if gap <= 1e-12 * scale.max(1.0) {
        return Err(Error::ZeroGap);
    }
    Ok(gap)
}

pub fn make_budget(
    alg: &Algebra,
    epsilon: f64,
    delta: f64,
    constants: BudgetConstants,
) -> Result<ToleranceBudget> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    let gap = spectral_gap(alg)?;
    let o_norm = alg.max_operator_norm();
    let m = alg.dim();
    let l = alg.num_roots();
    let eps_d = constants.c_d * epsilon * epsilon * gap * gap / (l as f64 * o_norm * o_norm);
    let eps_m = constants.c_m * epsilon * gap / (m as f64 * o_norm);
    let p_h = purity(&highest_weight_moments(alg)?);
    Ok(ToleranceBudget {
        epsilon,
        delta,
        eps_d,
        eps_m,
        gap,
        o_norm,
        shots: hoeffding_shots(o_norm, eps_m, delta, m),
        num_observables: m,
        num_roots: l,
        k_prime_bound: step_bound(p_h, eps_d, l),
        constants,
    })
}

/// Where the moments come from.
#[derive(Clone, Copy, Debug)]
pub enum Source<'a> {
    Moments(&'a MomentVector),
    /// Sampled with the budget's shot count; `seed` drives the shot noise.
    BlackBox {
        handle: &'a HiddenGcs,
        seed: u64,
    },
}

#[derive(Clone, Debug)]
pub struct SynthesisReport {
    pub algebra: String,
    /// Application order: `circuit[0]` acts on `|hw⟩` first.
    pub circuit: Vec<GroupOp>,
    pub kind_tags: Vec<OpKind>,
    pub budget: ToleranceBudget,
    pub moments: MomentVector,
    pub trace: Vec<f64>,
    pub achieved_d: f64,
    pub jacobi_steps: usize,
    pub weyl_steps: usize,
    pub total_shots: Option<u64>,
}

impl SynthesisReport {
    pub fn circuit_file(&self, hidden: Option<HiddenSpec>) -> CircuitFile {
        CircuitFile {
            algebra: self.algebra.clone(),
            ops: self.circuit.iter().map(OpRecord::from).collect(),
            kind_tags: self.kind_tags.clone(),
            trace: self.trace.clone(),
            hidden,
        }
    }

    pub fn prepared_state(&self, alg: &Algebra) -> Result<StateVector> {
        prepare(alg, &self.circuit)
    }
}

/// Runs the full reconstruction and returns a circuit whose action on
/// `|hw⟩` approximates the source state.
pub fn synthesize(
    alg: &Algebra,
    source: Source<'_>,
    budget: &ToleranceBudget,
    options: &DiagonalizerOptions,
) -> Result<SynthesisReport> {
    let (moments, total_shots) = match source {
        Source::Moments(m) => (m.clone(), None),
        Source::BlackBox { handle, seed } => {
            if budget.eps_m >= budget.o_norm {
                return Err(Error::GapBudgetInfeasible {
                    eps_m: budget.eps_m,
                    o_norm: budget.o_norm,
                });
            }
            let records = handle.sample_all(alg, budget.shots, seed)?;
            (
                MomentVector::from_records(&records),
                Some(budget.total_shots()),
            )
        }
    };
    let target = build_target(alg, &moments)?;
    let diag = diagonalizer::run(alg, &target, budget.eps_d, options)?;
    log::info!(
        "diagonalized in {} steps, d-trace {:?}",
        diag.steps_taken,
        diag.trace
    );
    let info = top_weight_state(alg, &diag.final_decomp.project_csa())?;
    let reflections = reflect_to_highest_weight(alg, &info)?;
    let weyl_steps = reflections.len();
    let mut circuit: Vec<GroupOp> = reflections.iter().rev().map(GroupOp::inverse).collect();
    circuit.extend(diag.ops.iter().rev().copied());
    let mut kind_tags = vec![OpKind::Weyl; weyl_steps];
    kind_tags.extend(std::iter::repeat_n(OpKind::Jacobi, diag.steps_taken));
    Ok(SynthesisReport {
        algebra: alg.label().to_string(),
        circuit,
        kind_tags,
        budget: budget.clone(),
        moments,
        achieved_d: *diag.trace.last().expect("trace holds d0"),
        trace: diag.trace,
        jacobi_steps: diag.steps_taken,
        weyl_steps,
        total_shots,
    })
}

/// `U_K⋯U_1|hw⟩` for a circuit in application order.
pub fn prepare(alg: &Algebra, circuit: &[GroupOp]) -> Result<StateVector> {
    for op in circuit {
        op.check(alg)?;
    }
    let (hw, _) = highest_weight_state(alg)?;
    Ok(apply_group_ops(&hw, circuit, alg))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    /// `min_φ ‖|ψ⟩ − e^{iφ} U|hw⟩‖`.
    pub distance: f64,
    /// `|⟨ψ|U|hw⟩|`.
    pub overlap: f64,
}

pub fn verify(alg: &Algebra, circuit: &[GroupOp], reference: &StateVector) -> Result<Verification> {
    let prepared = prepare(alg, circuit)?;
    if prepared.dim() != reference.dim() {
        return Err(Error::LengthMismatch {
            expected: prepared.dim(),
            found: reference.dim(),
        });
    }
    Ok(Verification {
        distance: reference.phase_distance(&prepared),
        overlap: reference.overlap(&prepared),
    })
}
