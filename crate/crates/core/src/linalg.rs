//! Dense complex matrix helpers shared by every module.
//!
//! Bipartite matrices are ordered `S ⊗ R`: row `(i, a)` of an `NM × NM`
//! matrix sits at `i·M + a`. Vectorization stacks columns, so entry `(i, j)`
//! of an `N × N` matrix lands at `i + j·N`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type RMatrix = DMatrix<f64>;
pub type CVector = DVector<Complex64>;

/// Absolute tolerance for structural invariants (Hermiticity, trace, Gram).
pub const TOL: f64 = 1e-12;

/// Lowest eigenvalue still accepted as positive semidefinite.
pub const PSD_TOL: f64 = -1e-10;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn zeros(n: usize) -> CMatrix {
    CMatrix::zeros(n, n)
}

/// Promote a real matrix to a complex one.
pub fn complexify(a: &RMatrix) -> CMatrix {
    a.map(|x| c(x, 0.0))
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn trace(a: &CMatrix) -> Complex64 {
    a.diagonal().iter().sum()
}

/// `Tr[a·b]` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    debug_assert_eq!(a.ncols(), b.nrows());
    debug_assert_eq!(a.nrows(), b.ncols());
    let mut acc = ZERO;
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in max_abs_diff");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn max_abs_real(a: &RMatrix) -> f64 {
    a.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

pub fn hermiticity_defect(a: &CMatrix) -> f64 {
    max_abs_diff(a, &a.adjoint())
}

pub fn is_hermitian(a: &CMatrix, tol: f64) -> bool {
    a.is_square() && hermiticity_defect(a) <= tol
}

pub fn unitarity_defect(u: &CMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    max_abs_diff(&(u.adjoint() * u), &identity(u.nrows()))
}

pub fn ensure_square(a: &CMatrix, n: usize) -> Result<()> {
    if a.nrows() != n || a.ncols() != n {
        return Err(Error::dims(
            format!("{n}x{n}"),
            format!("{}x{}", a.nrows(), a.ncols()),
        ));
    }
    Ok(())
}

pub fn ensure_unitary(u: &CMatrix, tol: f64) -> Result<()> {
    let defect = unitarity_defect(u);
    if defect.is_nan() || defect > tol {
        return Err(Error::NotUnitary { defect });
    }
    Ok(())
}

/// Column-stacking vectorization.
pub fn vectorize(q: &CMatrix) -> CVector {
    CVector::from_column_slice(q.as_slice())
}

/// Inverse of [`vectorize`] for a square matrix of side `n`.
pub fn unvectorize(v: &CVector, n: usize) -> CMatrix {
    assert_eq!(v.len(), n * n, "vector length is not a square");
    CMatrix::from_column_slice(n, n, v.as_slice())
}

/// `Tr_R` of an `NM × NM` matrix.
pub fn partial_trace_r(pi: &CMatrix, n: usize, m: usize) -> Result<CMatrix> {
    ensure_square(pi, n * m)?;
    Ok(CMatrix::from_fn(n, n, |i, j| {
        (0..m).map(|a| pi[(i * m + a, j * m + a)]).sum()
    }))
}

/// `Tr_S` of an `NM × NM` matrix.
pub fn partial_trace_s(pi: &CMatrix, n: usize, m: usize) -> Result<CMatrix> {
    ensure_square(pi, n * m)?;
    Ok(CMatrix::from_fn(m, m, |a, b| {
        (0..n).map(|i| pi[(i * m + a, i * m + b)]).sum()
    }))
}

/// Eigen-decomposition of a Hermitian matrix with ascending eigenvalues.
/// The input is symmetrized first so round-off in the lower triangle cannot
/// leak into the spectrum.
pub fn hermitian_eigen(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let sym = (a + a.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(a.nrows(), order.len(), |r, col| {
        eig.eigenvectors[(r, order[col])]
    });
    (values, vectors)
}

pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    hermitian_eigen(a).0
}

pub fn min_eigenvalue(a: &CMatrix) -> f64 {
    hermitian_eigenvalues(a)
        .first()
        .copied()
        .unwrap_or(f64::INFINITY)
}

/// Nearest positive semidefinite matrix in Frobenius norm.
pub fn clip_psd(a: &CMatrix) -> CMatrix {
    let (values, vectors) = hermitian_eigen(a);
    let clipped = CMatrix::from_fn(values.len(), values.len(), |i, j| {
        if i == j {
            c(values[i].max(0.0), 0.0)
        } else {
            ZERO
        }
    });
    &vectors * clipped * vectors.adjoint()
}

/// Singular values, descending.
pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    let mut sv: Vec<f64> = a.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// `Re Tr[ρ²]`.
pub fn purity(rho: &CMatrix) -> f64 {
    trace_product(rho, rho).re
}

pub fn frobenius_norm(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_traces_of_product() {
        let a = CMatrix::from_row_slice(2, 2, &[c(0.7, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.0)]);
        let b = CMatrix::from_fn(3, 3, |i, j| if i == j { c(1.0 / 3.0, 0.0) } else { ZERO });
        let pi = kron(&a, &b);
        assert!(max_abs_diff(&partial_trace_r(&pi, 2, 3).unwrap(), &a) < TOL);
        assert!(max_abs_diff(&partial_trace_s(&pi, 2, 3).unwrap(), &b) < TOL);
        assert!(partial_trace_r(&pi, 3, 3).is_err());
    }

    #[test]
    fn vectorization_is_column_stacking() {
        let q = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)]);
        let v = vectorize(&q);
        let expected: Vec<f64> = vec![1.0, 3.0, 2.0, 4.0];
        assert_eq!(v.iter().map(|z| z.re).collect::<Vec<_>>(), expected);
        assert_eq!(unvectorize(&v, 2), q);
    }

    #[test]
    fn eigenvalues_ascend() {
        let a = CMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]);
        let ev = hermitian_eigenvalues(&a);
        assert!((ev[0] - 1.0).abs() < TOL && (ev[1] - 3.0).abs() < TOL);
        let clipped = clip_psd(&CMatrix::from_row_slice(
            2,
            2,
            &[c(1.0, 0.0), ZERO, ZERO, c(-1.0, 0.0)],
        ));
        assert!(max_abs_diff(&clipped, &CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ZERO])) < TOL);
    }
}
