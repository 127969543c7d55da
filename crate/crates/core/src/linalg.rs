//! Dense complex matrix aliases and the few decompositions the estimators need.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub(crate) const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Eigendecomposition of a Hermitian matrix with eigenvalues sorted in
/// decreasing order and the eigenvector columns permuted to match.
///
/// Only the lower triangle is trusted; the input is symmetrised first so that
/// rounding in a product like `Y Y^*` cannot leak into the result.
pub fn hermitian_eig(c: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if !c.is_square() {
        return Err(Error::InvalidDimension(format!(
            "expected a square matrix, got {}x{}",
            c.nrows(),
            c.ncols()
        )));
    }
    if c.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let n = c.nrows();
    if n == 0 {
        return Ok((Vec::new(), CMatrix::zeros(0, 0)));
    }
    let sym = CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(c[(i, i)].re, 0.0)
        } else {
            (c[(i, j)] + c[(j, i)].conj()).unscale(2.0)
        }
    });
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, col| eig.eigenvectors[(r, order[col])]);
    Ok((values, vectors))
}

/// Eigenvalues only, decreasing.
pub fn hermitian_eigenvalues(c: &CMatrix) -> Result<Vec<f64>> {
    hermitian_eig(c).map(|(v, _)| v)
}

/// `Y Y^* / scale`, computed without forming `Y^*` explicitly twice.
pub fn gram(y: &CMatrix, scale: f64) -> CMatrix {
    let mut c = y * y.adjoint();
    c.unscale_mut(scale);
    c
}

/// Orthonormalise the columns of `g` (thin QR with the phase of `R`'s diagonal
/// absorbed into `Q`, which makes `Q` Haar-distributed when `g` is Gaussian).
pub fn orthonormal_columns(g: CMatrix) -> CMatrix {
    let k = g.ncols();
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..k {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..q.nrows() {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Frobenius norm.
pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `a^* b`
pub fn inner(a: &CVector, b: &CVector) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}
