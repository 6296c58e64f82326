use gcs_synth::catalog::by_label;
use gcs_synth::diagonalizer::{self, DiagonalizerOptions, RotationScaling};
use gcs_synth::io::{GateRecord, LqcFile, LqcInitial};
use gcs_synth::linalg::{CVec, C64};
use gcs_synth::lqc::{final_state_query, gcs_certificate, propagate, LqcCircuit};
use gcs_synth::moments::{build_target, MomentVector};
use gcs_synth::pipeline::{make_budget, synthesize, verify, BudgetConstants, Source};
use gcs_synth::state::{
    apply_group_ops, exact_moments, hidden_gcs, highest_weight_state, sample_measurements, GroupOp,
    StateVector,
};
use gcs_synth::Error;

#[test]
fn so6_exact_synthesis_meets_tolerance() {
    let alg = by_label("so2n:3").unwrap();
    let budget = make_budget(&alg, 1e-4, 0.05, BudgetConstants::default()).unwrap();
    for seed in 0..20 {
        let hidden = hidden_gcs(&alg, seed, 8).unwrap();
        let moments = MomentVector::exact(hidden.exact_moments(&alg));
        let report = synthesize(
            &alg,
            Source::Moments(&moments),
            &budget,
            &Default::default(),
        )
        .unwrap();
        let v = verify(&alg, &report.circuit, hidden.state()).unwrap();
        assert!(v.distance <= 1e-4, "seed {seed}: {}", v.distance);
        assert_eq!(report.circuit.len(), report.kind_tags.len());
        assert_eq!(
            report.circuit.len(),
            report.jacobi_steps + report.weyl_steps
        );
        assert!(report.weyl_steps <= 4 * alg.num_roots());
    }
}

#[test]
fn hidden_preparation_verifies_exactly() {
    let alg = by_label("su2:3").unwrap();
    let hidden = hidden_gcs(&alg, 4, 5).unwrap();
    let v = verify(&alg, hidden.preparation(), hidden.state()).unwrap();
    assert!(v.distance < 1e-12);
    let (hw, _) = highest_weight_state(&alg).unwrap();
    let empty = verify(&alg, &[], hidden.state()).unwrap();
    assert!((empty.distance - hw.phase_distance(hidden.state())).abs() < 1e-14);
}

#[test]
fn top_eigenvector_of_target_is_the_state() {
    let alg = by_label("so2n:2").unwrap();
    let hidden = hidden_gcs(&alg, 8, 6).unwrap();
    let moments = hidden.exact_moments(&alg);
    let f = alg.basis().assemble(&moments);
    let (values, vectors) = gcs_synth::linalg::eigh(&f);
    let top = StateVector::new(vectors.column(values.len() - 1).into_owned()).unwrap();
    assert!((values[values.len() - 1] - gcs_synth::moments::purity(&moments)).abs() < 1e-9);
    assert!(top.phase_distance(hidden.state()) < 1e-9);
}

#[test]
fn hoeffding_coverage() {
    // |estimate − exact| ≤ sqrt(2 ln(2/δ))·‖O‖/sqrt(Q) in at least 1 − δ of trials
    let alg = by_label("su2:2").unwrap();
    let hidden = hidden_gcs(&alg, 3, 4).unwrap();
    let exact = hidden.exact_moments(&alg);
    let q = 400;
    let m = 1;
    let norm = alg.operator_norms()[m];
    let radius = (2.0 * (2.0f64 / 0.05).ln()).sqrt() * norm / (q as f64).sqrt();
    let inside = (0..1000u64)
        .filter(|&seed| {
            let r =
                sample_measurements(hidden.state(), alg.basis().element(m), m, q, seed).unwrap();
            assert!(r.estimate.abs() <= norm + 1e-12);
            (r.estimate - exact[m]).abs() <= radius
        })
        .count();
    assert!(inside >= 950, "{inside}/1000");
}

#[test]
fn unnormalized_rotation_fails_the_two_by_two_check() {
    let alg = by_label("su2:1").unwrap();
    let sigma_x = build_target(&alg, &MomentVector::exact(vec![0.0, 1.0, 0.0])).unwrap();
    let opts = DiagonalizerOptions {
        scaling: RotationScaling::Unnormalized,
        ..Default::default()
    };
    assert!(matches!(
        diagonalizer::run(&alg, &sigma_x, 1e-12, &opts),
        Err(Error::StepDidNotReducePivot { .. })
    ));
    assert_eq!(
        diagonalizer::run(&alg, &sigma_x, 1e-12, &Default::default())
            .unwrap()
            .steps_taken,
        1
    );
}

#[test]
fn lqc_trajectory_recovers_final_state() {
    let alg = by_label("so2n:3").unwrap();
    let ops: Vec<GroupOp> = (0..12)
        .map(|k| GroupOp::new(k % alg.num_roots(), C64::new(0.3 * k as f64 - 1.0, 0.2)))
        .collect();
    let file = LqcFile {
        algebra: alg.label().into(),
        initial: LqcInitial::Named("hw".into()),
        gates: ops
            .iter()
            .map(|o| GateRecord::GroupOp {
                l: o.root,
                alpha: [o.alpha.re, o.alpha.im],
            })
            .collect(),
    };
    let circuit = LqcCircuit::from_file(&alg, &file).unwrap();
    let moments = propagate(&circuit);
    let (hw, _) = highest_weight_state(&alg).unwrap();
    let brute = apply_group_ops(&hw, &ops, &alg);
    for (a, b) in moments.values().iter().zip(exact_moments(&brute, &alg)) {
        assert!((a - b).abs() < 1e-10);
    }
    assert!(gcs_certificate(&alg, moments.values()).unwrap().is_gcs);
    let budget = make_budget(&alg, 1e-5, 0.05, BudgetConstants::default()).unwrap();
    let report = final_state_query(&alg, &moments, &budget, &Default::default()).unwrap();
    assert!(verify(&alg, &report.circuit, &brute).unwrap().distance <= 1e-5);

    let empty = LqcFile {
        gates: vec![],
        ..file
    };
    let hw_moments = propagate(&LqcCircuit::from_file(&alg, &empty).unwrap());
    let report = final_state_query(&alg, &hw_moments, &budget, &Default::default()).unwrap();
    assert!(report.circuit.is_empty());
}

#[test]
fn uniform_superposition_is_not_coherent() {
    let alg = by_label("so2n:3").unwrap();
    let uniform = StateVector::new(CVec::from_element(8, C64::new(1.0, 0.0))).unwrap();
    let moments = MomentVector::exact(exact_moments(&uniform, &alg));
    let cert = gcs_certificate(&alg, moments.values()).unwrap();
    assert!(!cert.is_gcs && cert.deficit > 1e-6);
    let budget = make_budget(&alg, 1e-3, 0.05, BudgetConstants::default()).unwrap();
    assert!(matches!(
        final_state_query(&alg, &moments, &budget, &Default::default()),
        Err(Error::NotAGcs { .. })
    ));
}

#[test]
fn odd_parity_weight_state_makes_no_progress() {
    let alg = by_label("so2n:2").unwrap();
    let one_particle = StateVector::basis(4, 1);
    let moments = MomentVector::exact(exact_moments(&one_particle, &alg));
    let budget = make_budget(&alg, 1e-3, 0.05, BudgetConstants::default()).unwrap();
    assert!(matches!(
        synthesize(
            &alg,
            Source::Moments(&moments),
            &budget,
            &Default::default()
        ),
        Err(Error::NoProgress)
    ));
}
