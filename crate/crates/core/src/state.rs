//! Dense state vectors in the defining representation, group operations,
//! exact expectations and simulated projective measurements.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Binomial, Distribution, Normal};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::linalg::{eigh, expm_i_hermitian, hermiticity_residual, CMat, CVec, C64};

const NORM_TOL: f64 = 1e-12;
const KERNEL_TOL: f64 = 1e-10;
const WEIGHT_TOL: f64 = 1e-8;

/// Unit vector in the defining representation.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: CVec,
}

impl StateVector {
    /// Normalizes `amplitudes`; fails on a zero or non-finite vector.
    pub fn new(amplitudes: CVec) -> Result<Self> {
        let norm = amplitudes.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::InvalidParameter(
                "state vector has zero or non-finite norm".into(),
            ));
        }
        Ok(StateVector {
            amplitudes: amplitudes.unscale(norm),
        })
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = CVec::zeros(dim);
        v[k] = C64::new(1.0, 0.0);
        StateVector { amplitudes: v }
    }

    pub fn amplitudes(&self) -> &CVec {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn overlap(&self, other: &StateVector) -> f64 {
        self.inner(other).norm()
    }

    /// `min_φ ‖self − e^{iφ} other‖`.
    pub fn phase_distance(&self, other: &StateVector) -> f64 {
        (2.0 - 2.0 * self.overlap(other)).max(0.0).sqrt()
    }

    pub fn apply(&self, u: &CMat) -> StateVector {
        StateVector {
            amplitudes: u * &self.amplitudes,
        }
    }

    fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() < NORM_TOL
    }
}

/// `exp{i(α E+_l + α* E-_l)}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroupOp {
    pub root: usize,
    pub alpha: C64,
}

impl GroupOp {
    pub fn new(root: usize, alpha: C64) -> Self {
        GroupOp { root, alpha }
    }

    pub fn inverse(&self) -> GroupOp {
        GroupOp::new(self.root, -self.alpha)
    }

    pub fn check(&self, alg: &Algebra) -> Result<()> {
        if self.root >= alg.num_roots() {
            return Err(Error::InvalidRootIndex {
                index: self.root,
                num_roots: alg.num_roots(),
            });
        }
        if !(self.alpha.re.is_finite() && self.alpha.im.is_finite()) {
            return Err(Error::InvalidParameter(
                "group op alpha is not finite".into(),
            ));
        }
        Ok(())
    }

    /// Hermitian generator `α E+ + α* E-` in the defining representation.
    pub fn generator(&self, alg: &Algebra) -> CMat {
        let cw = alg.cartan();
        cw.raising()[self.root].map(|z| z * self.alpha)
            + cw.lowering()[self.root].map(|z| z * self.alpha.conj())
    }

    /// Real basis coefficients of the generator.
    pub fn generator_coeffs(&self, alg: &Algebra) -> Vec<f64> {
        alg.cartan().raising_coeffs()[self.root]
            .iter()
            .map(|&k| 2.0 * (self.alpha * k).re)
            .collect()
    }

    pub fn unitary(&self, alg: &Algebra) -> CMat {
        expm_i_hermitian(&self.generator(alg))
    }
}

/// Unit vector annihilated by every raising operator, with its weights
/// `w_r = ⟨hw|H_r|hw⟩`. When the annihilated subspace is larger than one
/// dimension (a reducible representation), the lexicographically largest
/// weight is selected; an ambiguity that survives is reported as
/// [`Error::NotUnique`].
pub fn highest_weight_state(alg: &Algebra) -> Result<(StateVector, Vec<f64>)> {
    let d = alg.rep_dim();
    let cw = alg.cartan();
    let mut casimir = CMat::zeros(d, d);
    for (ep, em) in cw.raising().iter().zip(cw.lowering()) {
        casimir += em * ep;
    }
    let (values, vectors) = eigh(&casimir);
    let scale = values.iter().fold(1.0_f64, |a, v| a.max(v.abs()));
    let kernel: Vec<usize> = (0..d)
        .filter(|&k| values[k].abs() < KERNEL_TOL * scale)
        .collect();
    if kernel.is_empty() {
        return Err(Error::NotUnique { dimension: 0 });
    }
    let mut space = CMat::from_fn(d, kernel.len(), |i, j| vectors[(i, kernel[j])]);
    for &r in cw.csa_indices() {
        if space.ncols() == 1 {
            break;
        }
        let h = alg.basis().element(r);
        let restricted = space.adjoint() * h * &space;
        let (vals, vecs) = eigh(&restricted);
        let top = vals[vals.len() - 1];
        let keep: Vec<usize> = (0..vals.len())
            .filter(|&k| top - vals[k] < WEIGHT_TOL)
            .collect();
        let sub = CMat::from_fn(vecs.nrows(), keep.len(), |i, j| vecs[(i, keep[j])]);
        space = &space * sub;
    }
    if space.ncols() != 1 {
        return Err(Error::NotUnique {
            dimension: space.ncols(),
        });
    }
    let mut v: CVec = space.column(0).into_owned();
    // fix the global phase: largest component real positive
    let (kmax, _) = v.iter().enumerate().fold((0, -1.0), |acc, (k, z)| {
        if z.norm() > acc.1 + 1e-12 {
            (k, z.norm())
        } else {
            acc
        }
    });
    let phase = v[kmax] / v[kmax].norm();
    v *= phase.conj();
    let state = StateVector::new(v)?;
    let weights = cw
        .csa_indices()
        .iter()
        .map(|&r| expectation_unchecked(&state, alg.basis().element(r)))
        .collect();
    Ok((state, weights))
}

/// Exact moments of the highest-weight state.
pub fn highest_weight_moments(alg: &Algebra) -> Result<Vec<f64>> {
    let (hw, _) = highest_weight_state(alg)?;
    Ok(exact_moments(&hw, alg))
}

pub fn apply_group_op(state: &StateVector, op: &GroupOp, alg: &Algebra) -> StateVector {
    let out = state.apply(&op.unitary(alg));
    debug_assert!(out.is_normalized());
    out
}

/// Applies `ops` in order: `ops[0]` acts first.
pub fn apply_group_ops(state: &StateVector, ops: &[GroupOp], alg: &Algebra) -> StateVector {
    ops.iter()
        .fold(state.clone(), |s, op| apply_group_op(&s, op, alg))
}

fn expectation_unchecked(state: &StateVector, observable: &CMat) -> f64 {
    state.amplitudes.dotc(&(observable * &state.amplitudes)).re
}

pub fn expectation(state: &StateVector, observable: &CMat) -> Result<f64> {
    let residual = hermiticity_residual(observable);
    if residual > 1e-10 {
        return Err(Error::NonHermitianObservable { residual });
    }
    Ok(expectation_unchecked(state, observable))
}

/// `⟨O_m⟩` for every basis element.
pub fn exact_moments(state: &StateVector, alg: &Algebra) -> Vec<f64> {
    alg.basis()
        .elements()
        .iter()
        .map(|o| expectation_unchecked(state, o))
        .collect()
}

/// Result of `Q` projective measurements of one observable.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementRecord {
    pub observable_index: usize,
    pub num_shots: u64,
    pub estimate: f64,
    pub shot_seed: u64,
}

/// Born distribution over the distinct eigenvalues of a Hermitian observable.
pub fn outcome_distribution(state: &StateVector, observable: &CMat) -> Vec<(f64, f64)> {
    let (values, vectors) = eigh(observable);
    let scale = values.iter().fold(1.0_f64, |a, v| a.max(v.abs()));
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (k, &lambda) in values.iter().enumerate() {
        let p = vectors.column(k).dotc(&state.amplitudes).norm_sqr();
        match out.last_mut() {
            Some((prev, acc)) if (lambda - *prev).abs() < 1e-9 * scale => *acc += p,
            _ => out.push((lambda, p)),
        }
    }
    out
}

/// Simulates `shots` projective measurements of `observable`. Outcome
/// counts are drawn from the multinomial distribution over eigenspaces,
/// which has the same law as `shots` independent Born draws.
pub fn sample_measurements(
    state: &StateVector,
    observable: &CMat,
    observable_index: usize,
    shots: u64,
    seed: u64,
) -> Result<MeasurementRecord> {
    if shots == 0 {
        return Err(Error::InvalidParameter(
            "number of shots must be at least 1".into(),
        ));
    }
    let residual = hermiticity_residual(observable);
    if residual > 1e-10 {
        return Err(Error::NonHermitianObservable { residual });
    }
    let outcomes = outcome_distribution(state, observable);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(observable_index as u64);
    let mut remaining = shots;
    let mut mass: f64 = outcomes.iter().map(|o| o.1).sum();
    let mut total = 0.0;
    for (k, &(lambda, p)) in outcomes.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        let count = if k + 1 == outcomes.len() || mass <= 0.0 {
            remaining
        } else {
            let q = (p / mass).clamp(0.0, 1.0);
            Binomial::new(remaining, q)
                .expect("probability in [0, 1]")
                .sample(&mut rng)
        };
        total += count as f64 * lambda;
        remaining -= count;
        mass -= p;
    }
    Ok(MeasurementRecord {
        observable_index,
        num_shots: shots,
        estimate: total / shots as f64,
        shot_seed: seed,
    })
}

/// A coherent state prepared by a hidden random circuit. Synthesis code
/// only sees shot samples; the remaining accessors are oracles for tests.
#[derive(Clone, Debug)]
pub struct HiddenGcs {
    seed: u64,
    ops: Vec<GroupOp>,
    state: StateVector,
}

/// Draws `num_ops` group operations with uniformly random roots and
/// `α ~ CN(0, 1)`, and applies them to the highest-weight state.
pub fn hidden_gcs(alg: &Algebra, seed: u64, num_ops: usize) -> Result<HiddenGcs> {
    let (hw, _) = highest_weight_state(alg)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).expect("valid deviation");
    let ops: Vec<GroupOp> = (0..num_ops)
        .map(|_| {
            let root = rng.random_range(0..alg.num_roots());
            let alpha = C64::new(normal.sample(&mut rng), normal.sample(&mut rng));
            GroupOp::new(root, alpha)
        })
        .collect();
    let state = apply_group_ops(&hw, &ops, alg);
    Ok(HiddenGcs { seed, ops, state })
}

impl HiddenGcs {
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn num_ops(&self) -> usize {
        self.ops.len()
    }

    /// Measures basis element `m` with `shots` shots.
    pub fn sample(
        &self,
        alg: &Algebra,
        m: usize,
        shots: u64,
        seed: u64,
    ) -> Result<MeasurementRecord> {
        sample_measurements(&self.state, alg.basis().element(m), m, shots, seed)
    }

    /// Measures every basis element, each on its own random stream.
    pub fn sample_all(
        &self,
        alg: &Algebra,
        shots: u64,
        seed: u64,
    ) -> Result<Vec<MeasurementRecord>> {
        (0..alg.dim())
            .map(|m| self.sample(alg, m, shots, seed))
            .collect()
    }

    /// Phase-minimized distance and overlap between `candidate` and the hidden state.
    pub fn verify(&self, candidate: &StateVector) -> (f64, f64) {
        (
            self.state.phase_distance(candidate),
            self.state.overlap(candidate),
        )
    }

    pub fn exact_moments(&self, alg: &Algebra) -> Vec<f64> {
        exact_moments(&self.state, alg)
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn preparation(&self) -> &[GroupOp] {
        &self.ops
    }
}
