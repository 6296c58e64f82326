//! Ready-made algebra instances and the algebra-file loader.

use std::collections::BTreeMap;
use std::path::Path;

use crate::algebra::{orthonormalize_basis, validate_algebra, Algebra, AlgebraBasis};
use crate::error::{Error, Result};
use crate::io::AlgebraFile;
use crate::linalg::{kron, pauli_x, pauli_y, pauli_z, CMat, C64, I};

/// Largest representation dimension the catalog will build.
pub const MAX_REP_DIM: usize = 64;

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub parameters: BTreeMap<&'static str, u32>,
    pub description: &'static str,
}

/// Families exposed by the catalog with their default parameters.
pub fn entries() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "su2",
            parameters: BTreeMap::from([("two_j", 1)]),
            description: "su(2) in the spin-j irrep, dimension two_j + 1",
        },
        CatalogEntry {
            name: "so2n",
            parameters: BTreeMap::from([("n", 3)]),
            description: "so(2n) from quadratic Majorana operators, Jordan-Wigner on n qubits",
        },
    ]
}

/// Builds a catalog algebra from a `family:parameter` label, e.g. `su2:1` or `so2n:3`.
pub fn by_label(label: &str) -> Result<Algebra> {
    let (family, param) = label
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("catalog label `{label}` is not `family:param`")))?;
    let param: u32 = param
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad catalog parameter in `{label}`")))?;
    match family.trim() {
        "su2" => make_su2(param),
        "so2n" => make_so2n(param),
        other => Err(Error::Parse(format!("unknown catalog family `{other}`"))),
    }
}

/// Resolves either a catalog label or a path to an algebra file.
pub fn resolve(spec: &str) -> Result<Algebra> {
    if Path::new(spec).exists() {
        load_algebra(spec)
    } else {
        by_label(spec)
    }
}

/// Spin matrices `(S_z, S_+)` for spin `two_j / 2`, basis ordered by
/// decreasing `S_z`.
pub fn spin_matrices(two_j: u32) -> (CMat, CMat) {
    let d = two_j as usize + 1;
    let j = two_j as f64 / 2.0;
    let mut sz = CMat::zeros(d, d);
    let mut sp = CMat::zeros(d, d);
    for k in 0..d {
        let m = j - k as f64;
        sz[(k, k)] = C64::new(m, 0.0);
        if k > 0 {
            // S+ |m⟩ = sqrt(j(j+1) - m(m+1)) |m+1⟩
            sp[(k - 1, k)] = C64::new((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
        }
    }
    (sz, sp)
}

/// `su(2)` in the spin-`two_j/2` irreducible representation. Basis
/// `(S_z, 2S_x, 2S_y)` rescaled to `N = two_j + 1`.
pub fn make_su2(two_j: u32) -> Result<Algebra> {
    if two_j < 1 {
        return Err(Error::InvalidParameter("two_j must be at least 1".into()));
    }
    if two_j as usize + 1 > MAX_REP_DIM {
        return Err(Error::InvalidParameter(format!(
            "two_j = {two_j} exceeds the catalog cap"
        )));
    }
    let (sz, sp) = spin_matrices(two_j);
    let sm = sp.adjoint();
    let raw = vec![sz, &sp + &sm, (&sm - &sp).map(|z| I * z)];
    let basis = orthonormalize_basis(&raw, None)?;
    Algebra::new(format!("su2:{two_j}"), basis, &[0], &[(1, 2)])
}

/// Jordan-Wigner Majorana operators `c_1..c_2n` on `n` qubits, qubit 1
/// being the most significant tensor factor:
/// `c_{2k-1} = Z..Z X_k`, `c_{2k} = Z..Z Y_k`.
pub fn majorana_operators(n: u32) -> Vec<CMat> {
    let n = n as usize;
    let id = CMat::identity(2, 2);
    let mut out = Vec::with_capacity(2 * n);
    for k in 0..n {
        for p in [pauli_x(), pauli_y()] {
            let mut acc = CMat::identity(1, 1);
            for q in 0..n {
                let factor = match q.cmp(&k) {
                    std::cmp::Ordering::Less => pauli_z(),
                    std::cmp::Ordering::Equal => p.clone(),
                    std::cmp::Ordering::Greater => id.clone(),
                };
                acc = kron(&acc, &factor);
            }
            out.push(acc);
        }
    }
    out
}

/// Fermionic annihilation operators `a_k = (c_{2k-1} + i c_{2k})/2`.
pub fn annihilation_operators(n: u32) -> Vec<CMat> {
    let c = majorana_operators(n);
    c.chunks(2)
        .map(|pair| (&pair[0] + pair[1].map(|z| I * z)).scale(0.5))
        .collect()
}

/// `so(2n)` on `2^n` qubit amplitudes. The Cartan generators are
/// `Z_k = -i c_{2k-1} c_{2k}`; for every pair of modes `j < k` the raising
/// operators are `a_j a_k` and `a_k† a_j`, so the fermionic vacuum
/// `|0…0⟩` is the highest-weight state. The basis follows the Cartan-Weyl
/// layout: Cartan generators, then every `E+ + E-`, then every `i(E- - E+)`.
pub fn make_so2n(n: u32) -> Result<Algebra> {
    if !(1..=6).contains(&n) {
        return Err(Error::InvalidParameter(format!(
            "so(2n) requires 1 <= n <= 6, got {n}"
        )));
    }
    let majoranas = majorana_operators(n);
    let a = annihilation_operators(n);
    let nn = n as usize;
    let mut csa = Vec::with_capacity(nn);
    for k in 0..nn {
        csa.push((&majoranas[2 * k] * &majoranas[2 * k + 1]).map(|z| -I * z));
    }
    let mut raising = Vec::new();
    for j in 0..nn {
        for k in (j + 1)..nn {
            raising.push(&a[j] * &a[k]);
            raising.push(a[k].adjoint() * &a[j]);
        }
    }
    let l = raising.len();
    let mut raw = csa;
    for e in &raising {
        raw.push(e + e.adjoint());
    }
    for e in &raising {
        raw.push((e.adjoint() - e).map(|z| I * z));
    }
    let basis = orthonormalize_basis(&raw, None)?;
    let csa_idx: Vec<usize> = (0..nn).collect();
    let pairs: Vec<(usize, usize)> = (0..l).map(|i| (nn + i, nn + l + i)).collect();
    Algebra::new(format!("so2n:{n}"), basis, &csa_idx, &pairs)
}

/// Reads and validates an algebra file.
pub fn load_algebra(path: impl AsRef<Path>) -> Result<Algebra> {
    let text = std::fs::read_to_string(path.as_ref())?;
    let file: AlgebraFile = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    algebra_from_file(&file)
}

pub fn algebra_from_file(file: &AlgebraFile) -> Result<Algebra> {
    let raw = file.matrices()?;
    let basis = match orthonormalize_basis(&raw, file.normalization) {
        Ok(b) => b,
        Err(
            err @ (Error::Parse(_) | Error::LengthMismatch { .. } | Error::InvalidParameter(_)),
        ) => return Err(err),
        Err(_) => {
            let n = file.normalization.unwrap_or(file.rep_dim as f64);
            let unchecked = AlgebraBasis::new_unchecked(file.rep_dim, n, raw);
            return Err(Error::ValidationFailed(Box::new(validate_algebra(
                &unchecked, None,
            ))));
        }
    };
    let pairs: Vec<(usize, usize)> = file.root_pairs.iter().map(|p| (p[0], p[1])).collect();
    let label = file
        .name
        .clone()
        .unwrap_or_else(|| AlgebraFile::fingerprint(&basis));
    Algebra::new(label, basis, &file.csa, &pairs)
}

pub fn save_algebra(alg: &Algebra, path: impl AsRef<Path>) -> Result<()> {
    let file = AlgebraFile::from_algebra(alg);
    let text = serde_json::to_string_pretty(&file).map_err(|e| Error::Parse(e.to_string()))?;
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{commutator, max_abs};

    #[test]
    fn su2_spin_half_is_pauli() {
        let alg = make_su2(1).unwrap();
        assert_eq!(alg.basis().normalization(), 2.0);
        assert!(max_abs(&(alg.basis().element(0) - pauli_z())) < 1e-15);
        assert!(max_abs(&(alg.basis().element(1) - pauli_x())) < 1e-15);
        assert!(max_abs(&(alg.basis().element(2) - pauli_y())) < 1e-15);
    }

    #[test]
    fn su2_spin_one_relations() {
        let (sz, sp) = spin_matrices(2);
        let sm = sp.adjoint();
        assert!(max_abs(&(commutator(&sp, &sm) - sz.scale(2.0))) < 1e-14);
        assert!(max_abs(&(commutator(&sz, &sp) - &sp)) < 1e-14);
        let alg = make_su2(2).unwrap();
        assert_eq!(
            (alg.dim(), alg.rank(), alg.num_roots(), alg.rep_dim()),
            (3, 1, 1, 3)
        );
    }

    #[test]
    fn so2n_dimensions() {
        for (n, m, r, l, d) in [(2, 6, 2, 2, 4), (3, 15, 3, 6, 8), (4, 28, 4, 12, 16)] {
            let alg = make_so2n(n).unwrap();
            assert_eq!(
                (alg.dim(), alg.rank(), alg.num_roots(), alg.rep_dim()),
                (m, r, l, d)
            );
        }
    }

    #[test]
    fn so2_is_rejected_by_killing_form() {
        match make_so2n(1) {
            Err(Error::ValidationFailed(report)) => {
                assert!(!report.check("killing_nondegenerate").unwrap().passed);
            }
            other => panic!("expected validation failure, got {other:?}"),
        }
    }

    #[test]
    fn so2n_spans_quadratic_majoranas() {
        let n = 3;
        let alg = make_so2n(n).unwrap();
        let c = majorana_operators(n);
        let mut count = 0;
        for a in 0..c.len() {
            for b in (a + 1)..c.len() {
                let q = (&c[a] * &c[b]).map(|z| I * z);
                let (_, rest) = alg.basis().expand(&q);
                assert!(rest < 1e-12, "i c_{a} c_{b} outside the span: {rest}");
                count += 1;
            }
        }
        assert_eq!(count, alg.dim());
    }

    #[test]
    fn majoranas_anticommute() {
        let c = majorana_operators(3);
        for a in 0..6 {
            for b in 0..6 {
                let ac = &c[a] * &c[b] + &c[b] * &c[a];
                let expected = if a == b {
                    CMat::identity(8, 8).scale(2.0)
                } else {
                    CMat::zeros(8, 8)
                };
                assert!(max_abs(&(ac - expected)) < 1e-14);
            }
        }
    }

    #[test]
    fn labels_resolve() {
        assert_eq!(by_label("su2:3").unwrap().rep_dim(), 4);
        assert!(matches!(by_label("sp4:2"), Err(Error::Parse(_))));
        assert!(matches!(by_label("su2"), Err(Error::Parse(_))));
    }
}
