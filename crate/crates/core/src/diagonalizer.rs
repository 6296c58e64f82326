//! Generalized Jacobi diagonalization: each step conjugates `F` by a group
//! element that removes its largest root component. Updates run in the
//! adjoint representation.

use crate::algebra::{Algebra, RootTriple};
use crate::error::{Error, Result};
use crate::linalg::{expm_i_hermitian, C64};
use crate::moments::CwDecomposition;
use crate::state::GroupOp;

/// How the rotation axis `(π_x, π_y)` is scaled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RotationScaling {
    /// Unit axis times `θ`, so the rotation angle is `θ`.
    #[default]
    Normalized,
    /// `θ·(ξ_y, −ξ_x)` without dividing by the transverse magnitude. Kept
    /// for diagnostics only; it does not diagonalize in general.
    Unnormalized,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepPlan {
    pub pivot: usize,
    pub xi_x: f64,
    pub xi_y: f64,
    pub xi_z: f64,
    pub theta: f64,
    pub pi_x: f64,
    pub pi_y: f64,
    pub alpha: C64,
}

impl StepPlan {
    pub fn op(&self) -> GroupOp {
        GroupOp::new(self.pivot, self.alpha)
    }

    fn flipped(&self, eta: f64) -> StepPlan {
        let (pi_x, pi_y) = (-self.pi_x, -self.pi_y);
        StepPlan {
            theta: -self.theta,
            pi_x,
            pi_y,
            alpha: C64::new(pi_x, -pi_y) / (2.0 * eta).sqrt(),
            ..*self
        }
    }
}

#[derive(Clone, Debug)]
pub struct DiagonalizationResult {
    /// `V_1..V_K′`; the final operator is `(V_1⋯V_K′)† F (V_1⋯V_K′)`.
    pub ops: Vec<GroupOp>,
    pub final_decomp: CwDecomposition,
    /// `d` before the first step and after every step.
    pub trace: Vec<f64>,
    pub steps_taken: usize,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct DiagonalizerOptions {
    /// Defaults to four times [`step_bound`].
    pub max_steps: Option<usize>,
    pub scaling: RotationScaling,
}

/// Index of a largest `|ι_l|`, the first one on ties.
pub fn select_pivot(decomp: &CwDecomposition) -> Result<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (l, z) in decomp.iota.iter().enumerate() {
        let a = z.norm_sqr();
        if best.is_none_or(|(_, b)| a > b) {
            best = Some((l, a));
        }
    }
    match best {
        Some((l, a)) if a > 0.0 => Ok(l),
        _ => Err(Error::AlreadyDiagonal),
    }
}

/// Rotation in the `su(2)` of `triple` that takes the pivot component of
/// `F` onto the Cartan direction.
pub fn plan_step(
    decomp: &CwDecomposition,
    triple: &RootTriple,
    scaling: RotationScaling,
) -> Result<StepPlan> {
    let l = triple.root_index;
    let iota = decomp.iota[l];
    if iota.norm_sqr() == 0.0 {
        return Err(Error::ZeroPivot);
    }
    let eta = triple.eta;
    let xi_x = (2.0 * eta).sqrt() * iota.re;
    let xi_y = -(2.0 * eta).sqrt() * iota.im;
    let mu_sq: f64 = triple.mu.iter().map(|m| m * m).sum();
    let gamma_mu: f64 = decomp
        .gamma
        .iter()
        .zip(&triple.mu)
        .map(|(g, m)| g * m)
        .sum();
    let xi_z = eta * gamma_mu / mu_sq;
    let perp = xi_x.hypot(xi_y);
    let theta = perp.atan2(xi_z);
    let (pi_x, pi_y) = match scaling {
        RotationScaling::Normalized => (theta * xi_y / perp, -theta * xi_x / perp),
        RotationScaling::Unnormalized => (theta * xi_y, -theta * xi_x),
    };
    Ok(StepPlan {
        pivot: l,
        xi_x,
        xi_y,
        xi_z,
        theta,
        pi_x,
        pi_y,
        alpha: C64::new(pi_x, -pi_y) / (2.0 * eta).sqrt(),
    })
}

/// `F ↦ V†FV` with `V = exp{i(αE+ + α*E-)}`, computed as
/// `F̄ ↦ V̄†F̄V̄` on adjoint images and re-expanded in the basis.
pub fn conjugate(alg: &Algebra, decomp: &CwDecomposition, op: &GroupOp) -> CwDecomposition {
    let adj = alg.adjoint();
    let f_bar = adj.commutator_image(&decomp.coefficients(alg));
    let v_bar = expm_i_hermitian(&adj.commutator_image(&op.generator_coeffs(alg)));
    let conjugated = v_bar.adjoint() * f_bar * &v_bar;
    CwDecomposition::from_coefficients(alg, &adj.extract(&conjugated), decomp.step + 1)
}

fn pivot_threshold(decomp: &CwDecomposition) -> f64 {
    (1e-10 * decomp.offdiag_distance().sqrt())
        .max(64.0 * f64::EPSILON * decomp.coefficient_norm_sq().sqrt())
}

/// Applies `plan`, retrying with the opposite rotation sense if the pivot
/// is not annihilated. Returns the new decomposition and the plan used.
pub fn apply_step(
    alg: &Algebra,
    decomp: &CwDecomposition,
    plan: &StepPlan,
) -> Result<(CwDecomposition, StepPlan)> {
    let threshold = pivot_threshold(decomp);
    let next = conjugate(alg, decomp, &plan.op());
    let first = next.iota[plan.pivot].norm();
    if first <= threshold {
        return Ok((next, *plan));
    }
    let flipped = plan.flipped(alg.cartan().triple(plan.pivot).eta);
    let retry = conjugate(alg, decomp, &flipped.op());
    let second = retry.iota[plan.pivot].norm();
    if second <= threshold {
        log::warn!("step on root {} needed the flipped orientation", plan.pivot);
        return Ok((retry, flipped));
    }
    Err(Error::StepDidNotReducePivot {
        root: plan.pivot,
        residual: first.min(second),
    })
}

/// `⌈ln(d⁰/ε_D) / ln((L+1)/L)⌉`, or zero when `d⁰ ≤ ε_D`.
pub fn step_bound(d0: f64, eps_d: f64, num_roots: usize) -> usize {
    if d0 <= eps_d || num_roots == 0 {
        return 0;
    }
    let l = num_roots as f64;
    ((d0 / eps_d).ln() / ((l + 1.0) / l).ln()).ceil() as usize
}

/// Iterates pivot selection, planning and conjugation until `d ≤ eps_d`.
pub fn run(
    alg: &Algebra,
    decomp: &CwDecomposition,
    eps_d: f64,
    options: &DiagonalizerOptions,
) -> Result<DiagonalizationResult> {
    if eps_d.is_nan() || eps_d <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "eps_D must be positive, got {eps_d}"
        )));
    }
    let d0 = decomp.offdiag_distance();
    let max_steps = options
        .max_steps
        .unwrap_or_else(|| 4 * step_bound(d0, eps_d, alg.num_roots()).max(1));
    let mut current = decomp.clone();
    let mut trace = vec![d0];
    let mut ops = Vec::new();
    log::debug!("d^0 = {d0:.6e}");
    while current.offdiag_distance() > eps_d {
        if ops.len() >= max_steps {
            return Err(Error::MaxStepsExceeded {
                eps_d,
                max_steps,
                last: current.offdiag_distance(),
                trace,
            });
        }
        let pivot = select_pivot(&current)?;
        let plan = plan_step(&current, alg.cartan().triple(pivot), options.scaling)?;
        let (next, used) = apply_step(alg, &current, &plan)?;
        ops.push(used.op());
        current = next;
        trace.push(current.offdiag_distance());
        log::debug!(
            "d^{} = {:.6e} (pivot {pivot})",
            ops.len(),
            current.offdiag_distance()
        );
    }
    Ok(DiagonalizationResult {
        steps_taken: ops.len(),
        ops,
        final_decomp: current,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{make_so2n, make_su2};
    use crate::linalg::{max_abs, pauli_x, pauli_z};
    use crate::moments::{build_target, MomentVector};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn su2_decomp(gamma: f64, iota: C64) -> CwDecomposition {
        CwDecomposition {
            gamma: vec![gamma],
            iota: vec![iota],
            step: 0,
        }
    }

    #[test]
    fn pivot_selection() {
        let d = CwDecomposition {
            gamma: vec![],
            iota: vec![C64::new(0.1, 0.0), C64::new(0.0, 0.9)],
            step: 0,
        };
        assert_eq!(select_pivot(&d).unwrap(), 1);
        let d = CwDecomposition {
            iota: vec![C64::new(0.5, 0.0), C64::new(0.5, 0.0)],
            ..d
        };
        assert_eq!(select_pivot(&d).unwrap(), 0);
        assert!(matches!(
            select_pivot(&d.project_csa()),
            Err(Error::AlreadyDiagonal)
        ));
    }

    #[test]
    fn sigma_x_plan() {
        let alg = make_su2(1).unwrap();
        let plan = plan_step(
            &su2_decomp(0.0, C64::new(1.0, 0.0)),
            alg.cartan().triple(0),
            RotationScaling::Normalized,
        )
        .unwrap();
        assert!((plan.xi_x - 2.0).abs() < 1e-15 && plan.xi_y == 0.0 && plan.xi_z == 0.0);
        assert!((plan.theta - FRAC_PI_2).abs() < 1e-15);
        assert!(plan.pi_x.abs() < 1e-15 && (plan.pi_y + FRAC_PI_2).abs() < 1e-15);
        assert!((plan.alpha - C64::new(0.0, FRAC_PI_4)).norm() < 1e-15);
        // V†σ_xV in the defining representation
        let v = plan.op().unitary(&alg);
        let out = v.adjoint() * pauli_x() * &v;
        assert!(max_abs(&(out - pauli_z())) < 1e-14);
        let (next, _) = apply_step(&alg, &su2_decomp(0.0, C64::new(1.0, 0.0)), &plan).unwrap();
        assert!((next.gamma[0].abs() - 1.0).abs() < 1e-14 && next.offdiag_distance() < 1e-28);
    }

    #[test]
    fn imaginary_pivot_gives_real_alpha() {
        let alg = make_su2(1).unwrap();
        let plan = plan_step(
            &su2_decomp(0.0, C64::new(0.0, 0.7)),
            alg.cartan().triple(0),
            RotationScaling::Normalized,
        )
        .unwrap();
        assert!(plan.xi_x == 0.0 && plan.xi_y != 0.0);
        assert!(plan.alpha.im.abs() < 1e-15);
        assert!((plan.pi_x * plan.xi_x + plan.pi_y * plan.xi_y).abs() < 1e-12);
    }

    #[test]
    fn negative_cartan_component_rotates_past_equator() {
        let alg = make_su2(1).unwrap();
        let d = su2_decomp(-1.0, C64::new(0.01, 0.0));
        let plan = plan_step(&d, alg.cartan().triple(0), RotationScaling::Normalized).unwrap();
        assert!(plan.theta > PI - 0.05);
        let (next, _) = apply_step(&alg, &d, &plan).unwrap();
        assert!(next.iota[0].norm() < 1e-12);
        assert!((next.coefficient_norm_sq() - d.coefficient_norm_sq()).abs() < 1e-12);
    }

    #[test]
    fn zero_alpha_leaves_decomposition() {
        let alg = make_so2n(2).unwrap();
        let d = build_target(
            &alg,
            &MomentVector::exact(vec![0.3, -0.2, 0.1, 0.4, -0.5, 0.2]),
        )
        .unwrap();
        let out = conjugate(&alg, &d, &GroupOp::new(0, C64::new(0.0, 0.0)));
        for (a, b) in out.coefficients(&alg).iter().zip(d.coefficients(&alg)) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn single_root_needs_one_step() {
        let alg = make_su2(3).unwrap();
        let d = build_target(&alg, &MomentVector::exact(vec![0.2, -0.4, 0.9])).unwrap();
        let res = run(&alg, &d, 1e-20, &DiagonalizerOptions::default()).unwrap();
        assert_eq!(res.steps_taken, 1);
        assert!(res.trace[1] < 1e-20);
        let diag = CwDecomposition {
            iota: vec![C64::new(0.0, 0.0)],
            ..d
        };
        assert_eq!(
            run(&alg, &diag, 1e-3, &DiagonalizerOptions::default())
                .unwrap()
                .steps_taken,
            0
        );
    }

    #[test]
    fn bound_formula() {
        assert_eq!(step_bound(1.0, 0.01, 6), 30);
        assert_eq!(step_bound(0.001, 0.01, 6), 0);
    }

    #[test]
    fn max_steps_reports_trace() {
        let alg = make_so2n(3).unwrap();
        let v: Vec<f64> = (0..alg.dim())
            .map(|k| ((k * 7 % 5) as f64 - 2.0) / 5.0)
            .collect();
        let d = build_target(&alg, &MomentVector::exact(v)).unwrap();
        let opts = DiagonalizerOptions {
            max_steps: Some(1),
            ..Default::default()
        };
        match run(&alg, &d, 1e-30, &opts) {
            Err(Error::MaxStepsExceeded { trace, .. }) => assert_eq!(trace.len(), 2),
            other => panic!("unexpected {other:?}"),
        }
    }
}
