//! Independent reference computations shared by the integration tests.
//!
//! Nothing here calls into the library's linear algebra helpers; the point is
//! to have a second, deliberately naive implementation to compare against.

#![allow(dead_code)]

use num_complex::Complex64;
use openmap_core::CMatrix;

pub fn z(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn sigma(k: usize) -> CMatrix {
    let o = z(0.0, 0.0);
    let one = z(1.0, 0.0);
    let i = z(0.0, 1.0);
    match k {
        0 => CMatrix::from_row_slice(2, 2, &[one, o, o, one]),
        1 => CMatrix::from_row_slice(2, 2, &[o, one, one, o]),
        2 => CMatrix::from_row_slice(2, 2, &[o, -i, i, o]),
        3 => CMatrix::from_row_slice(2, 2, &[one, o, o, -one]),
        _ => panic!("no Pauli matrix {k}"),
    }
}

/// Kronecker product by explicit index arithmetic.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn ket(n: usize, k: usize) -> CMatrix {
    let mut v = CMatrix::zeros(n, 1);
    v[(k, 0)] = z(1.0, 0.0);
    v
}

/// `Tr_R Π = Σ_a (1 ⊗ ⟨a|) Π (1 ⊗ |a⟩)`.
pub fn ptrace_r(pi: &CMatrix, n: usize, m: usize) -> CMatrix {
    let id = CMatrix::identity(n, n);
    let mut out = CMatrix::zeros(n, n);
    for a in 0..m {
        let p = kron(&id, &ket(m, a));
        out += p.adjoint() * pi * &p;
    }
    out
}

pub fn ptrace_s(pi: &CMatrix, n: usize, m: usize) -> CMatrix {
    let id = CMatrix::identity(m, m);
    let mut out = CMatrix::zeros(m, m);
    for i in 0..n {
        let p = kron(&ket(n, i), &id);
        out += p.adjoint() * pi * &p;
    }
    out
}

pub fn tr(a: &CMatrix) -> Complex64 {
    (0..a.nrows()).map(|i| a[(i, i)]).sum()
}

pub fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn max_norm(a: &CMatrix) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Smallest eigenvalue of a Hermitian matrix through the real symmetric
/// embedding `[[Re, −Im], [Im, Re]]`, which doubles every eigenvalue.
pub fn min_eig(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let h = (a + a.adjoint()) * z(0.5, 0.0);
    let real = nalgebra::DMatrix::<f64>::from_fn(2 * n, 2 * n, |r, c| {
        let (i, j) = (r % n, c % n);
        match (r < n, c < n) {
            (true, true) | (false, false) => h[(i, j)].re,
            (true, false) => -h[(i, j)].im,
            (false, true) => h[(i, j)].im,
        }
    });
    real.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}

/// Density matrix of a qubit with Bloch vector `b`.
pub fn bloch_state(b: [f64; 3]) -> CMatrix {
    (sigma(0) + sigma(1) * z(b[0], 0.0) + sigma(2) * z(b[1], 0.0) + sigma(3) * z(b[2], 0.0))
        * z(0.5, 0.0)
}

/// Apply a map given only as a black box on matrix units, rebuilt from
/// scratch as `Σ_{ij} Q_{ij} f(|i⟩⟨j|)`.
pub fn apply_by_units(f: impl Fn(&CMatrix) -> CMatrix, q: &CMatrix) -> CMatrix {
    let n = q.nrows();
    let mut out = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out += f(&(ket(n, i) * ket(n, j).adjoint())) * q[(i, j)];
        }
    }
    out
}
