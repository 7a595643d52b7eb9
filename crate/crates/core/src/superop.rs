//! Linear and affine maps on `N × N` matrices, the transfer matrix of a
//! unitary, and the induced affine maps on mean-value vectors.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::basis::{HermitianBasis, JointBasis};
use crate::error::{Error, Result};
use crate::linalg::{
    ensure_square, ensure_unitary, identity, max_abs, max_abs_diff, max_abs_real, trace,
    trace_product, unvectorize, vectorize, CMatrix, RMatrix, CVector, ONE, ZERO,
};
use crate::states::MeanValueVector;

/// Tolerance for the structural checks on maps (Hermiticity and trace
/// preservation). Looser than [`crate::linalg::TOL`] because inverses of
/// nearly singular maps amplify round-off.
pub const MAP_TOL: f64 = 1e-10;

/// Unitarity tolerance for inputs, `‖U†U − 1‖_max`.
pub const UNITARY_TOL: f64 = 1e-10;

/// Linear map on `N × N` matrices acting on column-stacked vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperOperator {
    dim: usize,
    rep: CMatrix,
}

impl SuperOperator {
    pub fn new(dim: usize, rep: CMatrix) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        ensure_square(&rep, dim * dim)?;
        Ok(Self { dim, rep })
    }

    /// Build the representation column by column from the images of the
    /// matrix units `|i⟩⟨j|`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(&CMatrix) -> CMatrix) -> Self {
        let d2 = dim * dim;
        let mut rep = CMatrix::zeros(d2, d2);
        let mut unit = CMatrix::zeros(dim, dim);
        for j in 0..dim {
            for i in 0..dim {
                unit[(i, j)] = ONE;
                let image = f(&unit);
                assert_eq!(image.shape(), (dim, dim), "image has the wrong shape");
                rep.column_mut(i + j * dim).copy_from(&vectorize(&image));
                unit[(i, j)] = ZERO;
            }
        }
        Self { dim, rep }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            rep: identity(dim * dim),
        }
    }

    /// `Q ↦ A Q B`, represented by `Bᵀ ⊗ A`.
    pub fn sandwich(a: &CMatrix, b: &CMatrix) -> Result<Self> {
        let dim = a.nrows();
        ensure_square(a, dim)?;
        ensure_square(b, dim)?;
        Ok(Self {
            dim,
            rep: b.transpose().kronecker(a),
        })
    }

    /// `Q ↦ V Q V†`.
    pub fn conjugation(v: &CMatrix) -> Result<Self> {
        Self::sandwich(v, &v.adjoint())
    }

    /// `Q ↦ Σ_k K_k Q K_k†`.
    pub fn from_kraus(factors: &[CMatrix]) -> Result<Self> {
        let first = factors
            .first()
            .ok_or_else(|| Error::InvalidParameters("empty Kraus family".into()))?;
        let mut acc = Self::sandwich(first, &first.adjoint())?;
        for k in &factors[1..] {
            acc.rep += Self::sandwich(k, &k.adjoint())?.rep;
        }
        Ok(acc)
    }

    /// `Q ↦ Tr[Q]·ρ₀`.
    pub fn replacement(rho0: &CMatrix) -> Result<Self> {
        let dim = rho0.nrows();
        ensure_square(rho0, dim)?;
        let trace_row = vectorize(&identity(dim)).transpose();
        Ok(Self {
            dim,
            rep: vectorize(rho0) * trace_row,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rep(&self) -> &CMatrix {
        &self.rep
    }

    pub fn apply(&self, q: &CMatrix) -> Result<CMatrix> {
        ensure_square(q, self.dim)?;
        Ok(self.apply_unchecked(q))
    }

    pub(crate) fn apply_unchecked(&self, q: &CMatrix) -> CMatrix {
        let v: CVector = &self.rep * vectorize(q);
        unvectorize(&v, self.dim)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SuperOperator) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::dims(self.dim, other.dim));
        }
        Ok(Self {
            dim: self.dim,
            rep: &self.rep * &other.rep,
        })
    }

    /// `max |h(Q†) − h(Q)†|` over matrix units.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for i in 0..n {
                let col = self.rep.column(i + j * n);
                let adj_col = self.rep.column(j + i * n);
                for b in 0..n {
                    for a in 0..n {
                        let lhs = adj_col[a + b * n];
                        let rhs = col[b + a * n].conj();
                        worst = worst.max((lhs - rhs).norm());
                    }
                }
            }
        }
        worst
    }

    /// `max |Tr h(|i⟩⟨j|) − δ_ij|`.
    pub fn trace_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for i in 0..n {
                let col = self.rep.column(i + j * n);
                let tr: num_complex::Complex64 = (0..n).map(|a| col[a + a * n]).sum();
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((tr - target).norm());
            }
        }
        worst
    }

    /// `max |h(1) − 1|`.
    pub fn unital_defect(&self) -> f64 {
        max_abs_diff(&self.apply_unchecked(&identity(self.dim)), &identity(self.dim))
    }

    pub fn is_hermiticity_preserving(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        self.trace_defect() <= tol
    }

    pub fn is_unital(&self, tol: f64) -> bool {
        self.unital_defect() <= tol
    }
}

/// Which construction produced an [`AffineMap`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapKind {
    FixedMeanValue,
    FixedCorrelation,
    Plain,
}

impl std::fmt::Display for MapKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MapKind::FixedMeanValue => "fixed-mean-value",
            MapKind::FixedCorrelation => "fixed-correlation",
            MapKind::Plain => "plain",
        })
    }
}

/// `Q ↦ H(Q) + offset·Tr Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    homogeneous: SuperOperator,
    offset: CMatrix,
    kind: MapKind,
}

impl AffineMap {
    pub fn new(homogeneous: SuperOperator, offset: CMatrix, kind: MapKind) -> Result<Self> {
        ensure_square(&offset, homogeneous.dim())?;
        Ok(Self {
            homogeneous,
            offset,
            kind,
        })
    }

    /// Purely linear map with zero offset.
    pub fn plain(homogeneous: SuperOperator) -> Self {
        let dim = homogeneous.dim();
        Self {
            homogeneous,
            offset: CMatrix::zeros(dim, dim),
            kind: MapKind::Plain,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::plain(SuperOperator::identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.homogeneous.dim()
    }

    pub fn homogeneous(&self) -> &SuperOperator {
        &self.homogeneous
    }

    pub fn offset(&self) -> &CMatrix {
        &self.offset
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn has_offset(&self, tol: f64) -> bool {
        max_abs(&self.offset) > tol
    }

    pub fn apply(&self, q: &CMatrix) -> Result<CMatrix> {
        ensure_square(q, self.dim())?;
        Ok(self.apply_unchecked(q))
    }

    pub(crate) fn apply_unchecked(&self, q: &CMatrix) -> CMatrix {
        let mut out = self.homogeneous.apply_unchecked(q);
        let tr = trace(q);
        if tr != ZERO {
            out += &self.offset * tr;
        }
        out
    }

    /// The whole map as one linear superoperator, `H + |offset⟩⟨⟨1|`.
    pub fn linear_extension(&self) -> SuperOperator {
        let trace_row = vectorize(&identity(self.dim())).transpose();
        SuperOperator {
            dim: self.dim(),
            rep: self.homogeneous.rep() + vectorize(&self.offset) * trace_row,
        }
    }

    /// Trace preservation of the whole map: `Tr[H(Q)] + Tr[offset]·Tr Q = Tr Q`.
    pub fn trace_defect(&self) -> f64 {
        self.linear_extension().trace_defect()
    }

    /// `self ∘ other`.
    ///
    /// When `self` has a nonzero offset, `other` must preserve the trace so
    /// that `Tr[other(Q)] = Tr Q` and the result keeps the affine form.
    pub fn compose(&self, other: &AffineMap) -> Result<AffineMap> {
        if self.dim() != other.dim() {
            return Err(Error::dims(self.dim(), other.dim()));
        }
        let homogeneous = self.homogeneous.compose(&other.homogeneous)?;
        let mut offset = self.homogeneous.apply_unchecked(&other.offset);
        if self.has_offset(0.0) {
            let defect = other.trace_defect();
            if defect > MAP_TOL {
                return Err(Error::NotTracePreserving(defect));
            }
            offset += &self.offset;
        }
        Ok(AffineMap {
            homogeneous,
            offset,
            kind: MapKind::Plain,
        })
    }

    /// Largest deviation of `self` from `other` over the given matrices.
    pub fn max_deviation_on(&self, other: &AffineMap, samples: &[CMatrix]) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for q in samples {
            worst = worst.max(max_abs_diff(&self.apply(q)?, &other.apply(q)?));
        }
        Ok(worst)
    }
}

/// Real orthogonal matrix `t_{αβ;μν}` with `U† F_{αβ} U = Σ t_{αβ;μν} F_{μν}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferMatrix {
    n: usize,
    m: usize,
    t: RMatrix,
}

impl TransferMatrix {
    pub fn new(u: &CMatrix, basis: &JointBasis) -> Result<Self> {
        ensure_square(u, basis.joint_dim())?;
        ensure_unitary(u, UNITARY_TOL)?;
        let scale = 1.0 / basis.joint_dim() as f64;
        let len = basis.len();
        let u_dag = u.adjoint();
        let mut t = RMatrix::zeros(len, len);
        for (row, f) in basis.elements().iter().enumerate() {
            let heis = &u_dag * f * u;
            for (col, g) in basis.elements().iter().enumerate() {
                t[(row, col)] = trace_product(g, &heis).re * scale;
            }
        }
        Ok(Self {
            n: basis.n(),
            m: basis.m(),
            t,
        })
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.n, self.m)
    }

    pub fn matrix(&self) -> &RMatrix {
        &self.t
    }

    /// `t_{αβ;μν}`.
    pub fn get(&self, alpha: usize, beta: usize, mu: usize, nu: usize) -> f64 {
        let r = self.m * self.m;
        self.t[(alpha * r + beta, mu * r + nu)]
    }

    /// `‖tᵀt − 1‖_max`.
    pub fn orthogonality_defect(&self) -> f64 {
        let prod = self.t.transpose() * &self.t;
        max_abs_real(&(prod - RMatrix::identity(self.t.nrows(), self.t.ncols())))
    }

    /// Transfer matrix of `U†`, which is `tᵀ`.
    pub fn inverse(&self) -> Self {
        Self {
            n: self.n,
            m: self.m,
            t: self.t.transpose(),
        }
    }
}

/// `v ↦ matrix·v + shift` on mean-value vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanAffineMap {
    dim: usize,
    matrix: RMatrix,
    shift: DVector<f64>,
}

impl MeanAffineMap {
    pub fn new(dim: usize, matrix: RMatrix, shift: DVector<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let k = dim * dim - 1;
        if matrix.shape() != (k, k) || shift.len() != k {
            return Err(Error::dims(
                format!("{k}x{k} matrix and length-{k} shift"),
                format!("{}x{} and {}", matrix.nrows(), matrix.ncols(), shift.len()),
            ));
        }
        Ok(Self { dim, matrix, shift })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &RMatrix {
        &self.matrix
    }

    pub fn shift(&self) -> &DVector<f64> {
        &self.shift
    }

    pub fn apply(&self, v: &MeanValueVector) -> Result<MeanValueVector> {
        if v.dim() != self.dim {
            return Err(Error::dims(self.dim, v.dim()));
        }
        let x = DVector::from_column_slice(v.components());
        let y = &self.matrix * x + &self.shift;
        MeanValueVector::new(self.dim, y.iter().copied().collect())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MeanAffineMap) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::dims(self.dim, other.dim));
        }
        Ok(Self {
            dim: self.dim,
            matrix: &self.matrix * &other.matrix,
            shift: &self.matrix * &other.shift + &self.shift,
        })
    }
}

/// Induced map on mean-value vectors:
/// `matrix_{αμ} = Tr[F_α H(F_μ)]/N`, `shift_α = Tr[F_α H(1)]/N + Tr[F_α·offset]`.
pub fn mean_affine(map: &AffineMap, basis: &HermitianBasis) -> Result<MeanAffineMap> {
    let n = map.dim();
    if basis.dim() != n {
        return Err(Error::dims(n, basis.dim()));
    }
    let herm = map
        .homogeneous()
        .hermiticity_defect()
        .max(crate::linalg::hermiticity_defect(map.offset()));
    if herm > MAP_TOL {
        return Err(Error::NotHermiticityPreserving(herm));
    }
    let tp = map.trace_defect();
    if tp > MAP_TOL {
        return Err(Error::NotTracePreserving(tp));
    }
    let k = n * n - 1;
    let inv_n = 1.0 / n as f64;
    let h = map.homogeneous();
    let images: Vec<CMatrix> = basis
        .elements()
        .iter()
        .map(|f| h.apply_unchecked(f))
        .collect();
    let matrix = RMatrix::from_fn(k, k, |a, mu| {
        trace_product(basis.element(a + 1), &images[mu + 1]).re * inv_n
    });
    let shift = DVector::from_fn(k, |a, _| {
        let f = basis.element(a + 1);
        trace_product(f, &images[0]).re * inv_n + trace_product(f, map.offset()).re
    });
    MeanAffineMap::new(n, matrix, shift)
}
