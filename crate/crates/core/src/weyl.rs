//! Maps a weight state to the highest-weight state with `π` rotations in
//! root `su(2)` subalgebras (Weyl reflections).

use std::f64::consts::PI;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::linalg::{eigh, CMat, C64, I};
use crate::moments::CwDecomposition;
use crate::state::{apply_group_op, highest_weight_state, GroupOp, StateVector};

const WEIGHT_RESIDUAL_TOL: f64 = 1e-8;
const RAISING_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct WeightStateInfo {
    pub state: StateVector,
    pub weights: Vec<f64>,
    pub eigenvalue: f64,
    /// Distance from the top eigenvalue to the next one.
    pub gap: f64,
}

fn cartan_operator(alg: &Algebra, coeffs: &[f64]) -> CMat {
    let d = alg.rep_dim();
    let mut out = CMat::zeros(d, d);
    for (&r, &g) in alg.cartan().csa_indices().iter().zip(coeffs) {
        out += alg.basis().element(r).scale(g);
    }
    out
}

fn expect(state: &StateVector, op: &CMat) -> f64 {
    state.amplitudes().dotc(&(op * state.amplitudes())).re
}

/// Largest residual `‖H_r|s⟩ − w_r|s⟩‖` over the Cartan generators.
fn weight_residual(alg: &Algebra, state: &StateVector) -> (Vec<f64>, f64) {
    let mut weights = Vec::with_capacity(alg.rank());
    let mut worst = 0.0_f64;
    for &r in alg.cartan().csa_indices() {
        let h = alg.basis().element(r);
        let hv = h * state.amplitudes();
        let w = state.amplitudes().dotc(&hv).re;
        worst = worst.max((hv - state.amplitudes().scale(w)).norm());
        weights.push(w);
    }
    (weights, worst)
}

/// Top eigenvector of `Σ γ_r H_r` for a decomposition with no root part.
pub fn top_weight_state(alg: &Algebra, csa: &CwDecomposition) -> Result<WeightStateInfo> {
    if csa.offdiag_distance() > 0.0 {
        return Err(Error::InvalidParameter(
            "top_weight_state needs a Cartan-only decomposition".into(),
        ));
    }
    let f = cartan_operator(alg, &csa.gamma);
    let (values, vectors) = eigh(&f);
    let n = values.len();
    let norm = values[0].abs().max(values[n - 1].abs());
    let gap = if n > 1 {
        values[n - 1] - values[n - 2]
    } else {
        f64::INFINITY
    };
    if norm == 0.0 || gap < 1e-8 * norm {
        return Err(Error::DegenerateTop { gap });
    }
    let state = StateVector::new(vectors.column(n - 1).into_owned())?;
    let (weights, residual) = weight_residual(alg, &state);
    if residual > WEIGHT_RESIDUAL_TOL {
        return Err(Error::NotAWeightState { residual });
    }
    Ok(WeightStateInfo {
        state,
        weights,
        eigenvalue: values[n - 1],
        gap,
    })
}

/// `π` rotation about an in-plane axis of root `l`'s `su(2)`.
pub fn reflection(alg: &Algebra, l: usize, phase: C64) -> GroupOp {
    let eta = alg.cartan().triple(l).eta;
    GroupOp::new(l, phase * (PI / (2.0 * eta).sqrt()))
}

/// Reflections `R_1..R_p` with `R_p⋯R_1|w⟩ ∝ |hw⟩`, listed in the order
/// they act. Each step picks, among roots whose raising operator acts
/// nontrivially, the reflection that increases `⟨F_hw⟩` the most.
pub fn reflect_to_highest_weight(alg: &Algebra, info: &WeightStateInfo) -> Result<Vec<GroupOp>> {
    let (hw, w_hw) = highest_weight_state(alg)?;
    let f_hw = cartan_operator(alg, &w_hw);
    let f_norm = w_hw.iter().map(|w| w * w).sum::<f64>();
    // ρ, the sum of positive roots, breaks ties between equal gains
    let mut rho = vec![0.0; alg.rank()];
    for root in alg.cartan().roots() {
        for (a, b) in rho.iter_mut().zip(root) {
            *a += b;
        }
    }
    let f_rho = cartan_operator(alg, &rho);
    let phases = [C64::new(1.0, 0.0), I, C64::new(-1.0, 0.0), -I];
    let max_iter = 8 * alg.num_roots() + 8;

    let (_, residual) = weight_residual(alg, &info.state);
    if residual > WEIGHT_RESIDUAL_TOL {
        return Err(Error::NotAWeightState { residual });
    }
    let mut state = info.state.clone();
    let mut ops = Vec::new();
    loop {
        if hw.overlap(&state) > 1.0 - 1e-9 {
            return Ok(ops);
        }
        if ops.len() >= max_iter {
            return Err(Error::NoProgress);
        }
        let current = expect(&state, &f_hw);
        let mut best: Option<(f64, f64, GroupOp, StateVector)> = None;
        for l in 0..alg.num_roots() {
            let raised = &alg.cartan().raising()[l] * state.amplitudes();
            if raised.norm_squared() <= RAISING_TOL {
                continue;
            }
            for &phase in &phases {
                let op = reflection(alg, l, phase);
                let next = apply_group_op(&state, &op, alg);
                let gain = expect(&next, &f_hw) - current;
                let tie = expect(&next, &f_rho);
                let better = match &best {
                    None => true,
                    Some((g, t, _, _)) => gain > g + 1e-12 || (gain > g - 1e-12 && tie > t + 1e-12),
                };
                if better {
                    best = Some((gain, tie, op, next));
                }
            }
        }
        match best {
            Some((gain, _, op, next)) if gain > 1e-10 * f_norm.max(1.0) => {
                let (_, residual) = weight_residual(alg, &next);
                if residual > 1e-7 {
                    return Err(Error::NotAWeightState { residual });
                }
                ops.push(op);
                state = next;
            }
            _ => return Err(Error::NoProgress),
        }
    }
}
