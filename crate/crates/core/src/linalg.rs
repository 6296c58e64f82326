//! Dense complex matrix helpers shared by the defining and adjoint
//! representations.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;
pub type RMat = DMatrix<f64>;

pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Standard commutator `AB - BA`.
pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// `Tr(AB)` without forming the product.
pub fn trace_product(a: &CMat, b: &CMat) -> C64 {
    let n = a.nrows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

pub fn trace_product_real(a: &RMat, b: &RMat) -> f64 {
    let mut acc = 0.0;
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Largest entry modulus.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

pub fn hermiticity_residual(m: &CMat) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn eigh(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    // symmetrize to suppress round-off asymmetry before the solver sees it
    let h = (m + m.adjoint()).scale(0.5);
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// `exp(iG)` for Hermitian `G`, via its eigendecomposition.
pub fn expm_i_hermitian(g: &CMat) -> CMat {
    let (values, vectors) = eigh(g);
    let phases = CVec::from_iterator(
        values.len(),
        values.iter().map(|&x| C64::from_polar(1.0, x)),
    );
    let scaled = CMat::from_fn(vectors.nrows(), vectors.ncols(), |i, j| {
        vectors[(i, j)] * phases[j]
    });
    scaled * vectors.adjoint()
}

/// Operator norm of a Hermitian matrix.
pub fn hermitian_norm(m: &CMat) -> f64 {
    let (values, _) = eigh(m);
    values.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

/// Frobenius norm.
pub fn fro(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn to_complex(m: &RMat) -> CMat {
    m.map(|x| C64::new(x, 0.0))
}

/// Kronecker product.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    CMat::from_fn(ar * br, ac * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

pub fn pauli_x() -> CMat {
    CMat::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
}

pub fn pauli_y() -> CMat {
    CMat::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
}

pub fn pauli_z() -> CMat {
    CMat::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_pauli_matches_closed_form() {
        let theta = 0.37;
        let u = expm_i_hermitian(&pauli_x().scale(theta));
        let expected = CMat::identity(2, 2).scale(theta.cos()).map(|z| z)
            + pauli_x().map(|z| z * I * theta.sin());
        assert!(max_abs(&(u - expected)) < 1e-14);
    }

    #[test]
    fn eigh_sorts_ascending() {
        let (vals, vecs) = eigh(&pauli_z());
        assert_eq!(vals.len(), 2);
        assert!((vals[0] + 1.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);
        assert!(vecs[(0, 1)].norm() > 0.999);
    }

    #[test]
    fn trace_product_matches_product_trace() {
        let a = pauli_x() + pauli_z().map(|z| z * c(0.3, 0.1));
        let b = pauli_y();
        assert!((trace_product(&a, &b) - (&a * &b).trace()).norm() < 1e-15);
    }

    #[test]
    fn pauli_algebra() {
        let xy = pauli_x() * pauli_y();
        assert!(max_abs(&(xy - pauli_z().map(|z| z * I))) < 1e-15);
        let k = kron(&pauli_z(), &pauli_x());
        assert_eq!(k.shape(), (4, 4));
        assert!((k[(0, 1)].re - 1.0).abs() < 1e-15 && (k[(2, 3)].re + 1.0).abs() < 1e-15);
    }
}
