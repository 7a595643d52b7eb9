//! Subsystem and joint states, both as matrices and as mean-value tables.

use crate::basis::{HermitianBasis, JointBasis};
use crate::error::{Error, Result};
use crate::linalg::{
    c, ensure_square, hermiticity_defect, min_eigenvalue, partial_trace_r, partial_trace_s,
    trace, trace_product, CMatrix, RMatrix, PSD_TOL, TOL,
};

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::InvalidState(format!(
                "density matrix must be square and non-empty, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let herm = hermiticity_defect(&matrix);
        if herm > TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {herm:e})"
            )));
        }
        let tr = trace(&matrix);
        if (tr - c(1.0, 0.0)).norm() > TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let lowest = min_eigenvalue(&matrix);
        if lowest < PSD_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {lowest:e}"
            )));
        }
        Ok(Self { matrix })
    }

    /// `(1/N)[1 + Σ_α ⟨F_α⟩ F_α]`, checked for positivity.
    pub fn from_means(basis: &HermitianBasis, means: &MeanValueVector) -> Result<Self> {
        Self::new(means.to_matrix(basis)?)
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Self {
            matrix: CMatrix::identity(dim, dim) / c(dim as f64, 0.0),
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn means(&self, basis: &HermitianBasis) -> Result<MeanValueVector> {
        MeanValueVector::from_matrix(basis, &self.matrix)
    }
}

/// The real vector `⟨F_α⟩`, `α = 1..N²−1`; the Bloch vector when `N = 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanValueVector {
    dim: usize,
    components: Vec<f64>,
}

impl MeanValueVector {
    pub fn new(dim: usize, components: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if components.len() != dim * dim - 1 {
            return Err(Error::dims(dim * dim - 1, components.len()));
        }
        if components.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidState("non-finite mean value".into()));
        }
        Ok(Self { dim, components })
    }

    pub fn zero(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Self {
            dim,
            components: vec![0.0; dim * dim - 1],
        })
    }

    pub fn from_matrix(basis: &HermitianBasis, rho: &CMatrix) -> Result<Self> {
        ensure_square(rho, basis.dim())?;
        let components = basis.elements()[1..]
            .iter()
            .map(|f| trace_product(f, rho).re)
            .collect();
        Ok(Self {
            dim: basis.dim(),
            components,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    /// `⟨F_α⟩` for `α ≥ 1`.
    pub fn get(&self, alpha: usize) -> f64 {
        self.components[alpha - 1]
    }

    /// `(1/N)[1 + Σ_α ⟨F_α⟩ F_α]`: Hermitian and unit-trace, not necessarily positive.
    pub fn to_matrix(&self, basis: &HermitianBasis) -> Result<CMatrix> {
        if basis.dim() != self.dim {
            return Err(Error::dims(self.dim, basis.dim()));
        }
        let mut rho = basis.element(0).clone();
        for (f, &v) in basis.elements()[1..].iter().zip(&self.components) {
            rho += f * c(v, 0.0);
        }
        Ok(rho / c(self.dim as f64, 0.0))
    }
}

/// Mean-value table `⟨F_{μν}⟩` (shape `N² × M²`, entry `(0,0)` equal to 1).
///
/// Positivity of the reconstructed joint matrix is not required here; the
/// compatibility domain is exactly the question of which tables are positive.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    n: usize,
    m: usize,
    means: RMatrix,
}

impl JointState {
    pub fn new(basis: &JointBasis, means: RMatrix) -> Result<Self> {
        let (rows, cols) = (basis.s_len(), basis.r_len());
        if means.shape() != (rows, cols) {
            return Err(Error::dims(
                format!("{rows}x{cols} mean table"),
                format!("{}x{}", means.nrows(), means.ncols()),
            ));
        }
        if means.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidState("non-finite mean value".into()));
        }
        if (means[(0, 0)] - 1.0).abs() > TOL {
            return Err(Error::InvalidState(format!(
                "<F_00> must be 1, got {}",
                means[(0, 0)]
            )));
        }
        Ok(Self {
            n: basis.n(),
            m: basis.m(),
            means,
        })
    }

    /// Means `⟨F_{αβ}⟩ = Tr[F_{αβ} Π]` of a Hermitian unit-trace matrix.
    pub fn from_matrix(basis: &JointBasis, pi: &CMatrix) -> Result<Self> {
        ensure_square(pi, basis.joint_dim())?;
        let herm = hermiticity_defect(pi);
        if herm > TOL {
            return Err(Error::NotHermitian { deviation: herm });
        }
        let tr = trace(pi);
        if (tr - c(1.0, 0.0)).norm() > TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let means = RMatrix::from_fn(basis.s_len(), basis.r_len(), |mu, nu| {
            trace_product(basis.element(mu, nu), pi).re
        });
        Self::new(basis, means)
    }

    /// Product state `ρ ⊗ ρ_R`.
    pub fn product(basis: &JointBasis, rho: &CMatrix, rho_r: &CMatrix) -> Result<Self> {
        ensure_square(rho, basis.n())?;
        ensure_square(rho_r, basis.m())?;
        Self::from_matrix(basis, &rho.kronecker(rho_r))
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.n, self.m)
    }

    pub fn means(&self) -> &RMatrix {
        &self.means
    }

    pub fn mean(&self, mu: usize, nu: usize) -> f64 {
        self.means[(mu, nu)]
    }

    /// `Π = (1/NM) Σ ⟨F_{μν}⟩ F_{μν}`.
    pub fn matrix(&self, basis: &JointBasis) -> Result<CMatrix> {
        self.check_basis(basis)?;
        let d = basis.joint_dim();
        let mut pi = CMatrix::zeros(d, d);
        for mu in 0..basis.s_len() {
            for nu in 0..basis.r_len() {
                let v = self.means[(mu, nu)];
                if v != 0.0 {
                    pi += basis.element(mu, nu) * c(v, 0.0);
                }
            }
        }
        Ok(pi / c(d as f64, 0.0))
    }

    /// `⟨F_{α0}⟩` for `α ≥ 1`.
    pub fn s_means(&self) -> MeanValueVector {
        MeanValueVector {
            dim: self.n,
            components: (1..self.n * self.n).map(|a| self.means[(a, 0)]).collect(),
        }
    }

    /// `⟨F_{0ν}⟩` for `ν ≥ 1`.
    pub fn r_means(&self) -> MeanValueVector {
        MeanValueVector {
            dim: self.m,
            components: (1..self.m * self.m).map(|b| self.means[(0, b)]).collect(),
        }
    }

    fn check_basis(&self, basis: &JointBasis) -> Result<()> {
        if (basis.n(), basis.m()) != (self.n, self.m) {
            return Err(Error::dims(
                format!("{}x{} joint basis", self.n, self.m),
                format!("{}x{}", basis.n(), basis.m()),
            ));
        }
        Ok(())
    }
}

/// Assemble a joint state from its mean table and return it with `Π`.
pub fn joint_from_means(basis: &JointBasis, means: RMatrix) -> Result<(JointState, CMatrix)> {
    let state = JointState::new(basis, means)?;
    let pi = state.matrix(basis)?;
    Ok((state, pi))
}

/// `ρ = Tr_R Π`, validated as a density matrix.
pub fn reduce(pi: &CMatrix, n: usize, m: usize) -> Result<DensityMatrix> {
    DensityMatrix::new(partial_trace_r(pi, n, m)?)
}

/// `ρ_R = Tr_S Π`, validated as a density matrix.
pub fn reduce_r(pi: &CMatrix, n: usize, m: usize) -> Result<DensityMatrix> {
    DensityMatrix::new(partial_trace_s(pi, n, m)?)
}

/// Correlations `Γ_{μν}` for `μ, ν ≥ 1`, stored at `(μ−1, ν−1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationTable {
    gamma: RMatrix,
}

impl CorrelationTable {
    pub fn new(n: usize, m: usize, gamma: RMatrix) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::ZeroDimension);
        }
        let shape = (n * n - 1, m * m - 1);
        if gamma.shape() != shape {
            return Err(Error::dims(
                format!("{}x{} correlation table", shape.0, shape.1),
                format!("{}x{}", gamma.nrows(), gamma.ncols()),
            ));
        }
        if gamma.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameters("non-finite correlation".into()));
        }
        Ok(Self { gamma })
    }

    pub fn zeros(n: usize, m: usize) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Self {
            gamma: RMatrix::zeros(n * n - 1, m * m - 1),
        })
    }

    /// Build from `(μ, ν, Γ_{μν})` entries with `μ, ν ≥ 1`; unlisted entries are 0.
    pub fn from_entries(n: usize, m: usize, entries: &[(usize, usize, f64)]) -> Result<Self> {
        let mut table = Self::zeros(n, m)?;
        for &(mu, nu, v) in entries {
            if mu == 0 || nu == 0 || mu >= n * n || nu >= m * m {
                return Err(Error::InvalidParameters(format!(
                    "correlation index ({mu}, {nu}) out of range for dims ({n}, {m})"
                )));
            }
            if !v.is_finite() {
                return Err(Error::InvalidParameters("non-finite correlation".into()));
            }
            table.gamma[(mu - 1, nu - 1)] = v;
        }
        Ok(table)
    }

    pub fn get(&self, mu: usize, nu: usize) -> f64 {
        self.gamma[(mu - 1, nu - 1)]
    }

    pub fn table(&self) -> &RMatrix {
        &self.gamma
    }

    /// `(N, M)` implied by the table shape.
    pub fn dims(&self) -> (usize, usize) {
        let side = |k: usize| ((k + 1) as f64).sqrt().round() as usize;
        (side(self.gamma.nrows()), side(self.gamma.ncols()))
    }

    pub fn max_abs(&self) -> f64 {
        crate::linalg::max_abs_real(&self.gamma)
    }
}

/// `Γ_{μν} = ⟨F_{μν}⟩ − ⟨F_{μ0}⟩⟨F_{0ν}⟩`.
pub fn correlations(state: &JointState) -> CorrelationTable {
    let (n, m) = state.dims();
    let gamma = RMatrix::from_fn(n * n - 1, m * m - 1, |i, j| {
        let (mu, nu) = (i + 1, j + 1);
        state.mean(mu, nu) - state.mean(mu, 0) * state.mean(0, nu)
    });
    CorrelationTable { gamma }
}
