//! Semisimple Lie algebras in a faithful matrix representation.
//!
//! An algebra is given by an orthogonal Hermitian basis `O_1..O_M` with
//! `Tr(O_m O_n) = N δ_mn`, split into Cartan generators `H_r` and pairs
//! `(E+_l + E-_l, i(E-_l - E+_l))` of Hermitian partners for every root.
//! From this we derive structure constants, the adjoint representation and
//! the `su(2)` triple attached to each root.
//!
//! Two bracket conventions are in play. Structure constants over the
//! Hermitian basis use `[A, B] = i(AB - BA)`, which keeps them real; root
//! triples and adjoint images of `E±` use the plain commutator `AB - BA`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    commutator, eigh, fro, hermitian_norm, hermiticity_residual, max_abs, to_complex,
    trace_product, trace_product_real, CMat, RMat, C64, I,
};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const ORTHOGONALITY_TOL: f64 = 1e-10;
pub const CLOSURE_TOL: f64 = 1e-8;
pub const KILLING_TOL: f64 = 1e-8;
pub const STRUCTURE_TOL: f64 = 1e-10;
pub const ADJOINT_TOL: f64 = 1e-9;
pub const COMMUTE_TOL: f64 = 1e-12;
pub const TRIPLE_TOL: f64 = 1e-10;
pub const ROOT_EIGEN_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BracketConvention {
    /// `[A, B] = i(AB - BA)`.
    PhysicsI,
    /// `[A, B] = AB - BA`.
    Commutator,
}

/// Orthogonal Hermitian basis of the algebra.
#[derive(Clone, Debug)]
pub struct AlgebraBasis {
    rep_dim: usize,
    normalization: f64,
    elements: Vec<CMat>,
}

impl AlgebraBasis {
    /// Wraps matrices without checking any invariant. Used for diagnostics
    /// on data that may be malformed; see [`validate_algebra`].
    pub fn new_unchecked(rep_dim: usize, normalization: f64, elements: Vec<CMat>) -> Self {
        AlgebraBasis {
            rep_dim,
            normalization,
            elements,
        }
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn rep_dim(&self) -> usize {
        self.rep_dim
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn elements(&self) -> &[CMat] {
        &self.elements
    }

    pub fn element(&self, m: usize) -> &CMat {
        &self.elements[m]
    }

    /// Real coefficients `Tr(X O_m)/N` of a matrix in the basis, and the
    /// Frobenius norm of what is left outside the span.
    pub fn expand(&self, x: &CMat) -> (Vec<C64>, f64) {
        let coeffs: Vec<C64> = self
            .elements
            .iter()
            .map(|o| trace_product(x, o) / self.normalization)
            .collect();
        let mut rest = x.clone();
        for (o, &k) in self.elements.iter().zip(&coeffs) {
            rest -= o.map(|z| z * k);
        }
        (coeffs, fro(&rest))
    }

    /// `Σ c_m O_m`.
    pub fn assemble(&self, coeffs: &[f64]) -> CMat {
        let n = self.rep_dim;
        let mut out = CMat::zeros(n, n);
        for (o, &k) in self.elements.iter().zip(coeffs) {
            if k != 0.0 {
                out += o.scale(k);
            }
        }
        out
    }

    pub fn assemble_complex(&self, coeffs: &[C64]) -> CMat {
        let n = self.rep_dim;
        let mut out = CMat::zeros(n, n);
        for (o, &k) in self.elements.iter().zip(coeffs) {
            out += o.map(|z| z * k);
        }
        out
    }

    /// Operator norms `‖O_m‖`.
    pub fn operator_norms(&self) -> Vec<f64> {
        self.elements.iter().map(hermitian_norm).collect()
    }
}

/// Rescales a Hermitian, trace-orthogonal family so that
/// `Tr(O_m O_n) = N δ_mn`, with `N = target_n` or `N = rep_dim`.
pub fn orthonormalize_basis(raw: &[CMat], target_n: Option<f64>) -> Result<AlgebraBasis> {
    let rep_dim = raw
        .first()
        .map(|m| m.nrows())
        .ok_or_else(|| Error::InvalidParameter("empty basis".into()))?;
    for (index, m) in raw.iter().enumerate() {
        if m.shape() != (rep_dim, rep_dim) {
            return Err(Error::LengthMismatch {
                expected: rep_dim,
                found: m.nrows(),
            });
        }
        let residual = hermiticity_residual(m);
        if residual > HERMITIAN_TOL * max_abs(m).max(1.0) {
            return Err(Error::NonHermitianInput { index, residual });
        }
    }
    let norms: Vec<f64> = raw.iter().map(|m| trace_product(m, m).re).collect();
    let largest = norms.iter().cloned().fold(0.0, f64::max);
    for (index, &g) in norms.iter().enumerate() {
        if g <= 1e-24 * largest.max(1e-300) || g <= 0.0 {
            return Err(Error::LinearlyDependentBasis { index });
        }
    }
    for i in 0..raw.len() {
        for j in (i + 1)..raw.len() {
            let g = trace_product(&raw[i], &raw[j]).norm();
            let scale = (norms[i] * norms[j]).sqrt();
            if g >= (1.0 - 1e-10) * scale {
                return Err(Error::LinearlyDependentBasis { index: j });
            }
            if g > ORTHOGONALITY_TOL * scale {
                return Err(Error::GramNotDiagonal { i, j, value: g });
            }
        }
    }
    let normalization = target_n.unwrap_or(rep_dim as f64);
    if !(normalization > 0.0 && normalization.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "normalization {normalization}"
        )));
    }
    let elements = raw
        .iter()
        .zip(&norms)
        .map(|(m, &g)| {
            // keep exact Hermiticity after scaling
            let h = (m + m.adjoint()).scale(0.5);
            h.scale((normalization / g).sqrt())
        })
        .collect();
    Ok(AlgebraBasis {
        rep_dim,
        normalization,
        elements,
    })
}

/// Real structure constants `f[a][b][c]` with `[O_a, O_b] = Σ_c f[a][b][c] O_c`.
#[derive(Clone, Debug)]
pub struct StructureConstants {
    dim: usize,
    values: Vec<f64>,
    convention: BracketConvention,
}

impl StructureConstants {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn convention(&self) -> BracketConvention {
        self.convention
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.values[(a * self.dim + b) * self.dim + c]
    }

    /// Killing form `K_ab = Tr(ad_a ad_b)` of the stored bracket.
    pub fn killing_form(&self) -> RMat {
        let m = self.dim;
        RMat::from_fn(m, m, |a, b| {
            let mut acc = 0.0;
            for c in 0..m {
                for d in 0..m {
                    acc += self.get(a, c, d) * self.get(b, d, c);
                }
            }
            acc
        })
    }
}

/// Adjoint representation. `generators[m]` is the real antisymmetric matrix
/// of `ad(O_m)` under the `i`-bracket, `(Ō_m)_{c b} = f[m][b][c]`.
/// Images of `E±_l` and `H_r` are taken under the plain commutator and are
/// filled in once a Cartan-Weyl labelling is attached.
#[derive(Clone, Debug)]
pub struct AdjointRep {
    generators: Vec<RMat>,
    gram: RMat,
    gram_inverse: RMat,
    raising: Vec<CMat>,
    lowering: Vec<CMat>,
    csa: Vec<CMat>,
}

impl AdjointRep {
    fn from_structure(sc: &StructureConstants) -> Self {
        let m = sc.dim();
        let generators: Vec<RMat> = (0..m)
            .map(|a| RMat::from_fn(m, m, |row, col| sc.get(a, col, row)))
            .collect();
        // Hermitian images are -i·A_m, so Tr(Ō_a Ō_b) = -Tr(A_a A_b).
        let gram = RMat::from_fn(m, m, |a, b| {
            -trace_product_real(&generators[a], &generators[b])
        });
        let gram_inverse = gram
            .clone()
            .try_inverse()
            .unwrap_or_else(|| RMat::zeros(m, m));
        AdjointRep {
            generators,
            gram,
            gram_inverse,
            raising: Vec::new(),
            lowering: Vec::new(),
            csa: Vec::new(),
        }
    }

    fn with_cartan(mut self, cw: &CartanWeylData) -> Self {
        self.raising = cw
            .raising_coeffs
            .iter()
            .map(|k| self.commutator_image_complex(k))
            .collect();
        self.lowering = cw
            .raising_coeffs
            .iter()
            .map(|k| {
                let conj: Vec<C64> = k.iter().map(|z| z.conj()).collect();
                self.commutator_image_complex(&conj)
            })
            .collect();
        self.csa = cw
            .csa_indices
            .iter()
            .map(|&r| self.generators[r].map(|x| C64::new(0.0, -x)))
            .collect();
        self
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[RMat] {
        &self.generators
    }

    /// `Tr(Ō_a Ō_b)` for the Hermitian (commutator) images.
    pub fn gram(&self) -> &RMat {
        &self.gram
    }

    pub fn raising(&self) -> &[CMat] {
        &self.raising
    }

    pub fn lowering(&self) -> &[CMat] {
        &self.lowering
    }

    pub fn csa(&self) -> &[CMat] {
        &self.csa
    }

    /// Real antisymmetric matrix of `ad(Σ c_m O_m)` under the `i`-bracket.
    pub fn image(&self, coeffs: &[f64]) -> RMat {
        let m = self.dim();
        let mut out = RMat::zeros(m, m);
        for (g, &k) in self.generators.iter().zip(coeffs) {
            if k != 0.0 {
                out += g * k;
            }
        }
        out
    }

    /// Matrix of `X ↦ [Σ c_m O_m, X]` (plain commutator), Hermitian for real `c`.
    pub fn commutator_image(&self, coeffs: &[f64]) -> CMat {
        self.image(coeffs).map(|x| C64::new(0.0, -x))
    }

    pub fn commutator_image_complex(&self, coeffs: &[C64]) -> CMat {
        let m = self.dim();
        let mut out = CMat::zeros(m, m);
        for (g, &k) in self.generators.iter().zip(coeffs) {
            let factor = -I * k;
            out += g.map(|x| factor * x);
        }
        out
    }

    /// Recovers basis coefficients from a commutator image using the
    /// adjoint inner product.
    pub fn extract(&self, image: &CMat) -> Vec<f64> {
        let m = self.dim();
        let projections = nalgebra::DVector::from_fn(m, |b, _| {
            let gb = self.generators[b].map(|x| C64::new(0.0, -x));
            trace_product(image, &gb).re
        });
        let coeffs = &self.gram_inverse * projections;
        coeffs.iter().cloned().collect()
    }
}

/// Expands every bracket of basis elements, producing real structure
/// constants and the adjoint representation.
pub fn derive_structure(basis: &AlgebraBasis) -> Result<(StructureConstants, AdjointRep)> {
    let (sc, _) = structure_with_residuals(basis)?;
    let adj = AdjointRep::from_structure(&sc);
    Ok((sc, adj))
}

struct StructureResiduals {
    closure: f64,
    imaginary: f64,
}

fn structure_with_residuals(
    basis: &AlgebraBasis,
) -> Result<(StructureConstants, StructureResiduals)> {
    let m = basis.dim();
    let n = basis.normalization();
    let unit = n.sqrt();
    let mut values = vec![0.0; m * m * m];
    let mut residuals = StructureResiduals {
        closure: 0.0,
        imaginary: 0.0,
    };
    for a in 0..m {
        for b in (a + 1)..m {
            let bracket = commutator(basis.element(a), basis.element(b)).map(|z| I * z);
            let (coeffs, rest) = basis.expand(&bracket);
            let residual = rest / unit;
            residuals.closure = residuals.closure.max(residual);
            if residual > CLOSURE_TOL * (1.0 + fro(&bracket) / unit) {
                return Err(Error::BasisNotClosed {
                    i: a,
                    j: b,
                    residual,
                });
            }
            for (c, k) in coeffs.iter().enumerate() {
                residuals.imaginary = residuals.imaginary.max(k.im.abs());
                values[(a * m + b) * m + c] = k.re;
                values[(b * m + a) * m + c] = -k.re;
            }
        }
    }
    Ok((
        StructureConstants {
            dim: m,
            values,
            convention: BracketConvention::PhysicsI,
        },
        residuals,
    ))
}

/// The `su(2)` subalgebra attached to one root.
#[derive(Clone, Debug)]
pub struct RootTriple {
    pub root_index: usize,
    /// `Z_l = Σ_r mu[r] H_r`.
    pub mu: Vec<f64>,
    /// `[Z_l, E+_l] = eta E+_l`.
    pub eta: f64,
    pub z: CMat,
    pub s_plus: CMat,
    pub s_minus: CMat,
    pub s_z: CMat,
    pub s_x: CMat,
    pub s_y: CMat,
}

/// Cartan subalgebra, root operators and their `su(2)` triples.
#[derive(Clone, Debug)]
pub struct CartanWeylData {
    csa_indices: Vec<usize>,
    pair_map: Vec<(usize, usize)>,
    pair_sign: Vec<f64>,
    raising: Vec<CMat>,
    lowering: Vec<CMat>,
    raising_coeffs: Vec<Vec<C64>>,
    roots: Vec<Vec<f64>>,
    triples: Vec<RootTriple>,
}

impl CartanWeylData {
    pub fn rank(&self) -> usize {
        self.csa_indices.len()
    }

    pub fn num_roots(&self) -> usize {
        self.pair_map.len()
    }

    pub fn csa_indices(&self) -> &[usize] {
        &self.csa_indices
    }

    /// Basis indices of `(E+_l + E-_l, ±i(E-_l - E+_l))` for every root.
    pub fn pair_map(&self) -> &[(usize, usize)] {
        &self.pair_map
    }

    /// `+1` when the second partner equals `i(E-_l - E+_l)`, `-1` when the
    /// raising/lowering roles were swapped to make the root positive.
    pub fn pair_sign(&self) -> &[f64] {
        &self.pair_sign
    }

    pub fn raising(&self) -> &[CMat] {
        &self.raising
    }

    pub fn lowering(&self) -> &[CMat] {
        &self.lowering
    }

    /// Expansion of each `E+_l` in the Hermitian basis.
    pub fn raising_coeffs(&self) -> &[Vec<C64>] {
        &self.raising_coeffs
    }

    /// Root `l` evaluated on each Cartan generator: `[H_r, E+_l] = roots[l][r] E+_l`.
    pub fn roots(&self) -> &[Vec<f64>] {
        &self.roots
    }

    pub fn triples(&self) -> &[RootTriple] {
        &self.triples
    }

    pub fn triple(&self, l: usize) -> &RootTriple {
        &self.triples[l]
    }
}

/// Recovers `E±_l` from each declared pair of Hermitian partners and checks
/// them against the Cartan subalgebra. Roots are oriented so that the first
/// nonzero component is positive, which fixes a consistent positive system.
pub fn build_cartan_weyl(
    basis: &AlgebraBasis,
    csa_indices: &[usize],
    root_pairs: &[(usize, usize)],
) -> Result<CartanWeylData> {
    let m = basis.dim();
    let mut seen = vec![false; m];
    for &k in csa_indices
        .iter()
        .chain(root_pairs.iter().flat_map(|(a, b)| [a, b]))
    {
        if k >= m {
            return Err(Error::InvalidLabelling(format!(
                "index {k} out of range (M = {m})"
            )));
        }
        if std::mem::replace(&mut seen[k], true) {
            return Err(Error::InvalidLabelling(format!("index {k} used twice")));
        }
    }
    if csa_indices.is_empty() || csa_indices.len() + 2 * root_pairs.len() != m {
        return Err(Error::InvalidLabelling(format!(
            "R = {} and L = {} do not satisfy R + 2L = M = {m}",
            csa_indices.len(),
            root_pairs.len()
        )));
    }

    let csa: Vec<&CMat> = csa_indices.iter().map(|&r| basis.element(r)).collect();
    for i in 0..csa.len() {
        for j in (i + 1)..csa.len() {
            let residual = max_abs(&commutator(csa[i], csa[j]));
            if residual
                > COMMUTE_TOL
                    * (max_abs(csa[i]) * max_abs(csa[j])).max(1.0)
                    * basis.rep_dim() as f64
            {
                return Err(Error::CsaNotAbelian {
                    i: csa_indices[i],
                    j: csa_indices[j],
                    residual,
                });
            }
        }
    }

    let mut pair_sign = Vec::with_capacity(root_pairs.len());
    let mut raising = Vec::with_capacity(root_pairs.len());
    let mut lowering = Vec::with_capacity(root_pairs.len());
    let mut raising_coeffs = Vec::with_capacity(root_pairs.len());
    let mut roots = Vec::with_capacity(root_pairs.len());
    for (l, &(a, b)) in root_pairs.iter().enumerate() {
        let oa = basis.element(a);
        let ob = basis.element(b);
        let mut e_plus = (oa + ob.map(|z| I * z)).scale(0.5);
        let mut e_minus = e_plus.adjoint();
        let norm = trace_product(&e_plus, &e_minus).re;
        let mut alpha = Vec::with_capacity(csa.len());
        let mut worst: f64 = 0.0;
        for h in &csa {
            let ad = commutator(h, &e_plus);
            let value = (trace_product(&ad, &e_minus) / norm).re;
            let residual = fro(&(ad - e_plus.scale(value))) / fro(&e_plus);
            worst = worst.max(residual / hermitian_norm(h).max(1.0));
            alpha.push(value);
        }
        if worst > ROOT_EIGEN_TOL {
            return Err(Error::RootPairNotEigenvector {
                root: l,
                residual: worst,
            });
        }
        let scale = alpha.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
        let leading = alpha.iter().find(|x| x.abs() > 1e-9 * scale.max(1e-300));
        let sign = match leading {
            None => {
                return Err(Error::InvalidLabelling(format!(
                    "root pair {l} commutes with the Cartan subalgebra"
                )))
            }
            Some(&x) if x < 0.0 => -1.0,
            Some(_) => 1.0,
        };
        if sign < 0.0 {
            std::mem::swap(&mut e_plus, &mut e_minus);
            alpha.iter_mut().for_each(|x| *x = -*x);
        }
        let mut coeffs = vec![C64::new(0.0, 0.0); m];
        coeffs[a] = C64::new(0.5, 0.0);
        coeffs[b] = C64::new(0.0, 0.5 * sign);
        pair_sign.push(sign);
        raising.push(e_plus);
        lowering.push(e_minus);
        raising_coeffs.push(coeffs);
        roots.push(alpha);
    }

    let mut cw = CartanWeylData {
        csa_indices: csa_indices.to_vec(),
        pair_map: root_pairs.to_vec(),
        pair_sign,
        raising,
        lowering,
        raising_coeffs,
        roots,
        triples: Vec::new(),
    };
    cw.triples = compute_root_triples(basis, &cw)?;
    Ok(cw)
}

/// Builds `Z_l = [E+_l, E-_l] = Σ_r μ_lr H_r`, `η_l` from
/// `[Z_l, E+_l] = η_l E+_l`, and the spin operators of each root.
pub fn compute_root_triples(basis: &AlgebraBasis, cw: &CartanWeylData) -> Result<Vec<RootTriple>> {
    let n = basis.normalization();
    let csa: Vec<&CMat> = cw.csa_indices.iter().map(|&r| basis.element(r)).collect();
    let mut out = Vec::with_capacity(cw.num_roots());
    for l in 0..cw.num_roots() {
        let mut e_plus = cw.raising[l].clone();
        let mut e_minus = cw.lowering[l].clone();
        let mut attempt = 0;
        let (z, mu, eta) = loop {
            let z = commutator(&e_plus, &e_minus);
            if max_abs(&z) < 1e-12 * max_abs(&e_plus).max(1.0) {
                return Err(Error::ZeroRootBracket { root: l });
            }
            let mu: Vec<f64> = csa.iter().map(|h| (trace_product(&z, h) / n).re).collect();
            let mut rest = z.clone();
            for (h, &k) in csa.iter().zip(&mu) {
                rest -= h.scale(k);
            }
            if fro(&rest) > CLOSURE_TOL * fro(&z) {
                return Err(Error::InvalidLabelling(format!(
                    "[E+, E-] for root {l} is not in the Cartan subalgebra"
                )));
            }
            let eta = (trace_product(&commutator(&z, &e_plus), &e_minus)
                / trace_product(&e_plus, &e_minus))
            .re;
            if eta > 0.0 {
                break (z, mu, eta);
            }
            attempt += 1;
            if attempt > 1 {
                return Err(Error::EtaNotPositiveAfterSwap { root: l, eta });
            }
            std::mem::swap(&mut e_plus, &mut e_minus);
        };
        let root_eta = eta.sqrt();
        let s_plus = e_plus.unscale(root_eta);
        let s_minus = e_minus.unscale(root_eta);
        let s_z = z.unscale(eta);
        let s_x = (&s_plus + &s_minus).unscale(std::f64::consts::SQRT_2);
        let s_y = (&s_minus - &s_plus)
            .map(|w| I * w)
            .unscale(std::f64::consts::SQRT_2);
        out.push(RootTriple {
            root_index: l,
            mu,
            eta,
            z,
            s_plus,
            s_minus,
            s_z,
            s_x,
            s_y,
        });
    }
    Ok(out)
}

/// One checked invariant.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub threshold: f64,
}

/// Outcome of [`validate_algebra`].
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    fn record(&mut self, name: &str, residual: f64, threshold: f64) -> bool {
        let passed = residual.is_finite() && residual <= threshold;
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            residual,
            threshold,
        });
        passed
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "[{}] {:<28} residual {:.3e} (threshold {:.1e})",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.residual,
                c.threshold
            )?;
        }
        Ok(())
    }
}

/// Checks every structural invariant of a basis and, optionally, of its
/// Cartan-Weyl labelling. Stops after the Killing-form check if the form is
/// degenerate, since nothing downstream is meaningful then.
pub fn validate_algebra(basis: &AlgebraBasis, cw: Option<&CartanWeylData>) -> ValidationReport {
    let mut report = ValidationReport::default();
    let m = basis.dim();
    let n = basis.normalization();

    let herm = basis
        .elements()
        .iter()
        .map(|o| hermiticity_residual(o) / max_abs(o).max(1.0))
        .fold(0.0, f64::max);
    report.record("hermitian", herm, HERMITIAN_TOL);

    let mut ortho: f64 = 0.0;
    for i in 0..m {
        for j in i..m {
            let g = trace_product(basis.element(i), basis.element(j));
            let target = if i == j { n } else { 0.0 };
            ortho = ortho.max((g - target).norm() / n);
        }
    }
    report.record("orthogonality", ortho, ORTHOGONALITY_TOL);

    let structure = match structure_with_residuals(basis) {
        Ok((sc, res)) => {
            report.record("closure", res.closure, CLOSURE_TOL);
            report.record("structure_real", res.imaginary, STRUCTURE_TOL);
            sc
        }
        Err(Error::BasisNotClosed { residual, .. }) => {
            report.record("closure", residual, CLOSURE_TOL);
            return report;
        }
        Err(_) => return report,
    };

    let killing = structure.killing_form();
    let (values, _) = eigh(&to_complex(&killing));
    let largest = values.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
    let smallest = values.iter().fold(f64::INFINITY, |acc, x| acc.min(x.abs()));
    let ratio = if largest > 0.0 {
        smallest / largest
    } else {
        0.0
    };
    // residual here is the singular-value ratio, so it must exceed the threshold
    let passed = ratio > KILLING_TOL;
    report.checks.push(Check {
        name: "killing_nondegenerate".to_string(),
        passed,
        residual: ratio,
        threshold: KILLING_TOL,
    });
    if !passed {
        return report;
    }

    let mut antisym: f64 = 0.0;
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                antisym = antisym.max((structure.get(a, b, c) + structure.get(b, a, c)).abs());
            }
        }
    }
    report.record("structure_antisymmetric", antisym, STRUCTURE_TOL);

    let adj = AdjointRep::from_structure(&structure);
    let mut hom: f64 = 0.0;
    for a in 0..m {
        for b in (a + 1)..m {
            let ga = &adj.generators[a];
            let gb = &adj.generators[b];
            let lhs: Vec<f64> = (0..m).map(|c| structure.get(a, b, c)).collect();
            let lhs = adj.image(&lhs);
            let rhs = ga * gb - gb * ga;
            let scale = (ga.norm() * gb.norm()).max(1e-300);
            hom = hom.max((lhs - rhs).norm() / scale);
        }
    }
    report.record("adjoint_homomorphism", hom, ADJOINT_TOL);

    let n_adj = adj.gram.trace() / m as f64;
    let mut adj_ortho: f64 = 0.0;
    for a in 0..m {
        for b in 0..m {
            let target = if a == b { n_adj } else { 0.0 };
            adj_ortho = adj_ortho.max((adj.gram[(a, b)] - target).abs() / n_adj.abs().max(1e-300));
        }
    }
    report.record("adjoint_inner_product", adj_ortho, ADJOINT_TOL);

    let Some(cw) = cw else {
        return report;
    };

    let r = cw.rank();
    let l = cw.num_roots();
    report.record(
        "root_count",
        ((m as f64 - r as f64) / 2.0 - l as f64).abs(),
        0.0,
    );

    let mut commute: f64 = 0.0;
    for &i in cw.csa_indices() {
        for &j in cw.csa_indices() {
            commute = commute.max(max_abs(&commutator(basis.element(i), basis.element(j))));
        }
    }
    report.record("csa_abelian", commute, COMMUTE_TOL * basis.rep_dim() as f64);

    let mut recon: f64 = 0.0;
    for (k, &(a, b)) in cw.pair_map().iter().enumerate() {
        let ep = &cw.raising[k];
        let em = &cw.lowering[k];
        let sum = ep + em;
        let diff = (em - ep).map(|z| I * z).scale(cw.pair_sign[k]);
        recon = recon.max(max_abs(&(basis.element(a) - sum)));
        recon = recon.max(max_abs(&(basis.element(b) - diff)));
        recon = recon.max(max_abs(&(em - ep.adjoint())));
    }
    report.record("cartan_weyl_reconstruction", recon, HERMITIAN_TOL * 10.0);

    let mut su2: f64 = 0.0;
    let mut eta_min = f64::INFINITY;
    for t in cw.triples() {
        su2 = su2.max(triple_residual(&t.s_plus, &t.s_minus, &t.s_z));
        eta_min = eta_min.min(t.eta);
    }
    report.record("su2_relations", su2, TRIPLE_TOL);
    report.record(
        "eta_positive",
        if eta_min > 0.0 { 0.0 } else { 1.0 - eta_min },
        0.0,
    );

    let adj = adj.with_cartan(cw);
    let mut su2_adj: f64 = 0.0;
    for (k, t) in cw.triples().iter().enumerate() {
        let root_eta = t.eta.sqrt();
        let sp = adj.raising[k].unscale(root_eta);
        let sm = adj.lowering[k].unscale(root_eta);
        let mut z = CMat::zeros(m, m);
        for (h, &mu) in adj.csa.iter().zip(&t.mu) {
            z += h.scale(mu);
        }
        let sz = z.unscale(t.eta);
        su2_adj = su2_adj.max(triple_residual(&sp, &sm, &sz));
    }
    report.record("su2_relations_adjoint", su2_adj, TRIPLE_TOL);
    report
}

/// Largest relative violation of `[S+, S-] = Sz`, `[Sz, S±] = ±S±`.
pub fn triple_residual(sp: &CMat, sm: &CMat, sz: &CMat) -> f64 {
    let scale = max_abs(sz).max(max_abs(sp)).max(1e-300);
    let r1 = max_abs(&(commutator(sp, sm) - sz));
    let r2 = max_abs(&(commutator(sz, sp) - sp));
    let r3 = max_abs(&(commutator(sz, sm) + sm));
    r1.max(r2).max(r3) / scale
}

/// A fully validated algebra: basis, structure, adjoint representation and
/// Cartan-Weyl data.
#[derive(Clone, Debug)]
pub struct Algebra {
    label: String,
    basis: AlgebraBasis,
    structure: StructureConstants,
    adjoint: AdjointRep,
    cartan: CartanWeylData,
    op_norms: Vec<f64>,
}

impl Algebra {
    pub fn new(
        label: impl Into<String>,
        basis: AlgebraBasis,
        csa_indices: &[usize],
        root_pairs: &[(usize, usize)],
    ) -> Result<Self> {
        let pre = validate_algebra(&basis, None);
        if !pre.all_passed() {
            return Err(Error::ValidationFailed(Box::new(pre)));
        }
        let (structure, adjoint) = derive_structure(&basis)?;
        let cartan = build_cartan_weyl(&basis, csa_indices, root_pairs)?;
        let report = validate_algebra(&basis, Some(&cartan));
        if !report.all_passed() {
            return Err(Error::ValidationFailed(Box::new(report)));
        }
        let adjoint = adjoint.with_cartan(&cartan);
        let op_norms = basis.operator_norms();
        Ok(Algebra {
            label: label.into(),
            basis,
            structure,
            adjoint,
            cartan,
            op_norms,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn basis(&self) -> &AlgebraBasis {
        &self.basis
    }

    pub fn structure(&self) -> &StructureConstants {
        &self.structure
    }

    pub fn adjoint(&self) -> &AdjointRep {
        &self.adjoint
    }

    pub fn cartan(&self) -> &CartanWeylData {
        &self.cartan
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn rep_dim(&self) -> usize {
        self.basis.rep_dim()
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    pub fn num_roots(&self) -> usize {
        self.cartan.num_roots()
    }

    pub fn operator_norms(&self) -> &[f64] {
        &self.op_norms
    }

    /// `‖O‖ = max_m ‖O_m‖`.
    pub fn max_operator_norm(&self) -> f64 {
        self.op_norms.iter().cloned().fold(0.0, f64::max)
    }

    pub fn validate(&self) -> ValidationReport {
        validate_algebra(&self.basis, Some(&self.cartan))
    }

    /// Splits real basis coefficients into Cartan and root parts,
    /// `ι_l = c_a - i·sign·c_b`.
    pub fn split_coefficients(&self, coeffs: &[f64]) -> (Vec<f64>, Vec<C64>) {
        let gamma = self.cartan.csa_indices.iter().map(|&r| coeffs[r]).collect();
        let iota = self
            .cartan
            .pair_map
            .iter()
            .zip(&self.cartan.pair_sign)
            .map(|(&(a, b), &s)| C64::new(coeffs[a], -s * coeffs[b]))
            .collect();
        (gamma, iota)
    }

    /// Inverse of [`Algebra::split_coefficients`].
    pub fn join_coefficients(&self, gamma: &[f64], iota: &[C64]) -> Vec<f64> {
        let mut coeffs = vec![0.0; self.dim()];
        for (&r, &g) in self.cartan.csa_indices.iter().zip(gamma) {
            coeffs[r] = g;
        }
        for ((&(a, b), &s), z) in self
            .cartan
            .pair_map
            .iter()
            .zip(&self.cartan.pair_sign)
            .zip(iota)
        {
            coeffs[a] = z.re;
            coeffs[b] = -s * z.im;
        }
        coeffs
    }
}
