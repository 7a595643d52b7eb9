//! Hermitian operator bases `F_{μ0}` for one subsystem and the product basis
//! `F_{μν} = F_{μ0} ⊗ F_{0ν}` for the pair.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{c, ensure_square, identity, kron, trace_product, CMatrix, ZERO};

/// Ordered family of `dim²` Hermitian matrices with `F_0 = 1` and
/// `Tr[F_μ F_ν] = dim·δ_{μν}`.
///
/// The traceless elements are generalized Gell-Mann matrices rescaled by
/// `√(dim/2)`: first the symmetric family `|j⟩⟨k| + |k⟩⟨j|`, then the
/// antisymmetric family `−i|j⟩⟨k| + i|k⟩⟨j|` (both with `j < k` in
/// lexicographic order), then the diagonal family. For `dim = 2` this gives
/// `(1, σx, σy, σz)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianBasis {
    dim: usize,
    elements: Vec<CMatrix>,
}

impl HermitianBasis {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let scale = (dim as f64 / 2.0).sqrt();
        let mut elements = Vec::with_capacity(dim * dim);
        elements.push(identity(dim));

        for j in 0..dim {
            for k in (j + 1)..dim {
                let mut g = CMatrix::zeros(dim, dim);
                g[(j, k)] = c(scale, 0.0);
                g[(k, j)] = c(scale, 0.0);
                elements.push(g);
            }
        }
        for j in 0..dim {
            for k in (j + 1)..dim {
                let mut g = CMatrix::zeros(dim, dim);
                g[(j, k)] = c(0.0, -scale);
                g[(k, j)] = c(0.0, scale);
                elements.push(g);
            }
        }
        for l in 1..dim {
            // sqrt(2 / (l (l + 1))) · (Σ_{j<l} |j⟩⟨j| − l |l⟩⟨l|), then rescaled.
            let norm = (2.0 / (l * (l + 1)) as f64).sqrt() * scale;
            let mut g = CMatrix::zeros(dim, dim);
            for j in 0..l {
                g[(j, j)] = c(norm, 0.0);
            }
            g[(l, l)] = c(-(l as f64) * norm, 0.0);
            elements.push(g);
        }
        debug_assert_eq!(elements.len(), dim * dim);
        Ok(Self { dim, elements })
    }

    pub fn pauli() -> Self {
        Self::new(2).expect("dimension 2 is valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    pub fn element(&self, mu: usize) -> &CMatrix {
        &self.elements[mu]
    }

    /// Coefficients `c_μ = Tr[F_μ Q] / dim`, so that `Q = Σ c_μ F_μ`.
    pub fn expand(&self, q: &CMatrix) -> Result<Vec<Complex64>> {
        ensure_square(q, self.dim)?;
        let n = self.dim as f64;
        Ok(self
            .elements
            .iter()
            .map(|f| trace_product(f, q) / n)
            .collect())
    }

    /// Real coefficients of a Hermitian matrix. Imaginary parts are dropped;
    /// they vanish up to round-off when `q` is Hermitian.
    pub fn expand_hermitian(&self, q: &CMatrix) -> Result<Vec<f64>> {
        Ok(self.expand(q)?.into_iter().map(|z| z.re).collect())
    }

    pub fn reconstruct(&self, coefficients: &[Complex64]) -> Result<CMatrix> {
        if coefficients.len() != self.len() {
            return Err(Error::dims(self.len(), coefficients.len()));
        }
        let mut q = CMatrix::zeros(self.dim, self.dim);
        for (f, &coef) in self.elements.iter().zip(coefficients) {
            if coef != ZERO {
                q += f * coef;
            }
        }
        Ok(q)
    }

    /// Gram matrix `Tr[F_μ F_ν]`.
    pub fn gram(&self) -> CMatrix {
        let n = self.len();
        CMatrix::from_fn(n, n, |i, j| trace_product(&self.elements[i], &self.elements[j]))
    }
}

/// Product basis for `S ⊗ R`, flattened as `(μ, ν) → μ·M² + ν`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointBasis {
    basis_s: HermitianBasis,
    basis_r: HermitianBasis,
    elements: Vec<CMatrix>,
}

impl JointBasis {
    pub fn new(basis_s: HermitianBasis, basis_r: HermitianBasis) -> Self {
        let mut elements = Vec::with_capacity(basis_s.len() * basis_r.len());
        for fs in basis_s.elements() {
            for fr in basis_r.elements() {
                elements.push(kron(fs, fr));
            }
        }
        Self {
            basis_s,
            basis_r,
            elements,
        }
    }

    /// Gell-Mann bases for dimensions `n` (S) and `m` (R).
    pub fn with_dims(n: usize, m: usize) -> Result<Self> {
        Ok(Self::new(HermitianBasis::new(n)?, HermitianBasis::new(m)?))
    }

    pub fn basis_s(&self) -> &HermitianBasis {
        &self.basis_s
    }

    pub fn basis_r(&self) -> &HermitianBasis {
        &self.basis_r
    }

    /// `N`
    pub fn n(&self) -> usize {
        self.basis_s.dim()
    }

    /// `M`
    pub fn m(&self) -> usize {
        self.basis_r.dim()
    }

    /// Side of the joint matrices, `N·M`.
    pub fn joint_dim(&self) -> usize {
        self.n() * self.m()
    }

    /// Number of `S` basis elements, `N²`.
    pub fn s_len(&self) -> usize {
        self.basis_s.len()
    }

    /// Number of `R` basis elements, `M²`.
    pub fn r_len(&self) -> usize {
        self.basis_r.len()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index(&self, mu: usize, nu: usize) -> usize {
        debug_assert!(mu < self.s_len() && nu < self.r_len());
        mu * self.r_len() + nu
    }

    pub fn split(&self, flat: usize) -> (usize, usize) {
        (flat / self.r_len(), flat % self.r_len())
    }

    pub fn element(&self, mu: usize, nu: usize) -> &CMatrix {
        &self.elements[self.index(mu, nu)]
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    pub fn gram(&self) -> CMatrix {
        let n = self.len();
        CMatrix::from_fn(n, n, |i, j| trace_product(&self.elements[i], &self.elements[j]))
    }
}
