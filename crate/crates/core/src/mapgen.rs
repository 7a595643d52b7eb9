//! Construction of the fixed-mean-value maps `Ω = L + K` and the
//! fixed-correlation maps `Φ = D + C` from a unitary on `S + R`.

use crate::basis::JointBasis;
use crate::error::{Error, Result};
use crate::linalg::{
    c, ensure_square, identity, kron, partial_trace_r, vectorize, CMatrix, RMatrix,
};
use crate::states::{CorrelationTable, DensityMatrix, JointState, MeanValueVector};
use crate::superop::{AffineMap, MapKind, SuperOperator, TransferMatrix};

/// A mean `⟨F_{μν}⟩` is a map parameter when some `|t_{α0;μν}|` exceeds this.
pub const PARAMETER_THRESHOLD: f64 = 1e-12;

/// Fixed means `⟨F_{μν}⟩` for `ν ≥ 1` (all `μ`), stored at `(μ, ν−1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaParameters {
    n: usize,
    m: usize,
    means: RMatrix,
}

impl OmegaParameters {
    pub fn new(n: usize, m: usize, means: RMatrix) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::ZeroDimension);
        }
        let shape = (n * n, m * m - 1);
        if means.shape() != shape {
            return Err(Error::dims(
                format!("{}x{} parameter table", shape.0, shape.1),
                format!("{}x{}", means.nrows(), means.ncols()),
            ));
        }
        if means.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameters("non-finite mean value".into()));
        }
        Ok(Self { n, m, means })
    }

    pub fn zeros(n: usize, m: usize) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Self {
            n,
            m,
            means: RMatrix::zeros(n * n, m * m - 1),
        })
    }

    /// From `(μ, ν, ⟨F_{μν}⟩)` entries with `ν ≥ 1`; unlisted entries are 0.
    pub fn from_entries(n: usize, m: usize, entries: &[(usize, usize, f64)]) -> Result<Self> {
        let mut params = Self::zeros(n, m)?;
        for &(mu, nu, v) in entries {
            params.set(mu, nu, v)?;
        }
        Ok(params)
    }

    /// The `ν ≥ 1` columns of a joint mean table.
    pub fn from_joint_state(state: &JointState) -> Self {
        let (n, m) = state.dims();
        let means = state.means().columns(1, m * m - 1).into_owned();
        Self { n, m, means }
    }

    pub fn set(&mut self, mu: usize, nu: usize, value: f64) -> Result<()> {
        if nu == 0 || mu >= self.n * self.n || nu >= self.m * self.m {
            return Err(Error::InvalidParameters(format!(
                "parameter index ({mu}, {nu}) needs nu >= 1 and fits dims ({}, {})",
                self.n, self.m
            )));
        }
        if !value.is_finite() {
            return Err(Error::InvalidParameters("non-finite mean value".into()));
        }
        self.means[(mu, nu - 1)] = value;
        Ok(())
    }

    pub fn get(&self, mu: usize, nu: usize) -> f64 {
        self.means[(mu, nu - 1)]
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.n, self.m)
    }

    pub fn table(&self) -> &RMatrix {
        &self.means
    }

    /// Joint state whose `⟨F_{α0}⟩` are `s_means` and whose `ν ≥ 1` means are
    /// these parameters.
    pub fn joint_state(&self, basis: &JointBasis, s_means: &MeanValueVector) -> Result<JointState> {
        check_dims(basis, self.n, self.m)?;
        if s_means.dim() != self.n {
            return Err(Error::dims(self.n, s_means.dim()));
        }
        let mut table = RMatrix::zeros(self.n * self.n, self.m * self.m);
        table[(0, 0)] = 1.0;
        for a in 1..self.n * self.n {
            table[(a, 0)] = s_means.get(a);
        }
        table.columns_mut(1, self.m * self.m - 1).copy_from(&self.means);
        JointState::new(basis, table)
    }
}

/// State of `R` and fixed correlations `Γ_{μν}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiParameters {
    rho_r: DensityMatrix,
    gamma: CorrelationTable,
}

impl PhiParameters {
    pub fn new(rho_r: DensityMatrix, gamma: CorrelationTable) -> Result<Self> {
        let (_, m) = gamma.dims();
        if rho_r.dim() != m {
            return Err(Error::dims(
                format!("rho_R of dimension {m}"),
                rho_r.dim(),
            ));
        }
        Ok(Self { rho_r, gamma })
    }

    pub fn rho_r(&self) -> &DensityMatrix {
        &self.rho_r
    }

    pub fn gamma(&self) -> &CorrelationTable {
        &self.gamma
    }

    pub fn dims(&self) -> (usize, usize) {
        self.gamma.dims()
    }

    /// Joint state with `⟨F_{μν}⟩ = ⟨F_{μ0}⟩⟨F_{0ν}⟩ + Γ_{μν}`.
    pub fn joint_state(&self, basis: &JointBasis, s_means: &MeanValueVector) -> Result<JointState> {
        let (n, m) = self.dims();
        check_dims(basis, n, m)?;
        if s_means.dim() != n {
            return Err(Error::dims(n, s_means.dim()));
        }
        let r_means = self.rho_r.means(basis.basis_r())?;
        let mut table = RMatrix::zeros(n * n, m * m);
        table[(0, 0)] = 1.0;
        for a in 1..n * n {
            table[(a, 0)] = s_means.get(a);
        }
        for b in 1..m * m {
            table[(0, b)] = r_means.get(b);
        }
        for a in 1..n * n {
            for b in 1..m * m {
                table[(a, b)] = s_means.get(a) * r_means.get(b) + self.gamma.get(a, b);
            }
        }
        JointState::new(basis, table)
    }
}

/// Which fixed quantities a fixed-correlation map actually depends on.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PhiParameterSet {
    /// `ν` with `⟨F_{0ν}⟩` a parameter.
    pub r_means: Vec<usize>,
    /// `(μ, ν)` with `Γ_{μν}` a parameter.
    pub correlations: Vec<(usize, usize)>,
}

impl PhiParameterSet {
    pub fn len(&self) -> usize {
        self.r_means.len() + self.correlations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A unitary on `S + R` together with the quantities every map built from it
/// needs: the transfer matrix and the reduced images `Tr_R[U F_{μν} U†]`.
///
/// Build once per `(U, basis)` and reuse for every parameter set.
#[derive(Debug, Clone)]
pub struct Dynamics {
    u: CMatrix,
    basis: JointBasis,
    transfer: TransferMatrix,
    reduced_images: Vec<CMatrix>,
}

impl Dynamics {
    pub fn new(u: CMatrix, basis: JointBasis) -> Result<Self> {
        let transfer = TransferMatrix::new(&u, &basis)?;
        let (n, m) = (basis.n(), basis.m());
        let u_dag = u.adjoint();
        let reduced_images = basis
            .elements()
            .iter()
            .map(|f| partial_trace_r(&(&u * f * &u_dag), n, m))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            u,
            basis,
            transfer,
            reduced_images,
        })
    }

    /// Use Gell-Mann bases of dimensions `n` and `m`.
    pub fn with_dims(u: CMatrix, n: usize, m: usize) -> Result<Self> {
        Self::new(u, JointBasis::with_dims(n, m)?)
    }

    /// The reversed dynamics `U†`.
    pub fn reversed(&self) -> Result<Self> {
        Self::new(self.u.adjoint(), self.basis.clone())
    }

    pub fn unitary(&self) -> &CMatrix {
        &self.u
    }

    pub fn basis(&self) -> &JointBasis {
        &self.basis
    }

    pub fn transfer(&self) -> &TransferMatrix {
        &self.transfer
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.basis.n(), self.basis.m())
    }

    /// `Tr_R[U F_{μν} U†]`.
    pub fn reduced_image(&self, mu: usize, nu: usize) -> &CMatrix {
        &self.reduced_images[self.basis.index(mu, nu)]
    }

    /// `max_α |t_{α0;μν}|` over `α ≥ 1`.
    fn coupling(&self, mu: usize, nu: usize) -> f64 {
        (1..self.basis.s_len())
            .map(|a| self.transfer.get(a, 0, mu, nu).abs())
            .fold(0.0, f64::max)
    }

    /// Indices `(μ, ν)`, `ν ≥ 1`, whose means are parameters of `Ω`.
    pub fn omega_parameter_indices(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for mu in 0..self.basis.s_len() {
            for nu in 1..self.basis.r_len() {
                if self.coupling(mu, nu) > PARAMETER_THRESHOLD {
                    out.push((mu, nu));
                }
            }
        }
        out
    }

    /// Parameters of `Φ`: `Γ_{μν}` coupled through `t_{α0;μν}`, and
    /// `⟨F_{0ν}⟩` coupled either directly or through some `Γ_{μν}`.
    /// Accidental cancellations are not detected.
    pub fn phi_parameter_indices(&self) -> PhiParameterSet {
        let mut set = PhiParameterSet::default();
        for nu in 1..self.basis.r_len() {
            let mut via_products = false;
            for mu in 1..self.basis.s_len() {
                if self.coupling(mu, nu) > PARAMETER_THRESHOLD {
                    set.correlations.push((mu, nu));
                    via_products = true;
                }
            }
            if via_products || self.coupling(0, nu) > PARAMETER_THRESHOLD {
                set.r_means.push(nu);
            }
        }
        set.correlations.sort_unstable();
        set
    }

    /// `L(Q) = Tr_R[U (Q ⊗ 1_R/M) U†]`.
    pub fn l_map(&self) -> SuperOperator {
        let m = self.basis.m();
        let mixed = identity(m) / c(m as f64, 0.0);
        self.reduced_superoperator(&mixed)
    }

    /// `D(Q) = Tr_R[U (Q ⊗ ρ_R) U†]`.
    pub fn d_map(&self, rho_r: &DensityMatrix) -> Result<SuperOperator> {
        ensure_square(rho_r.matrix(), self.basis.m())?;
        Ok(self.reduced_superoperator(rho_r.matrix()))
    }

    fn reduced_superoperator(&self, env: &CMatrix) -> SuperOperator {
        let (n, m) = self.dims();
        let u_dag = self.u.adjoint();
        SuperOperator::from_fn(n, |q| {
            let joint = &self.u * kron(q, env) * &u_dag;
            partial_trace_r(&joint, n, m).expect("joint matrix has matching dimensions")
        })
    }

    /// `Ω = L + K` with `K = (1/NM) Σ_{μ, ν≥1} ⟨F_{μν}⟩ Tr_R[U F_{μν} U†]`,
    /// summed over detected parameters.
    pub fn omega(&self, params: &OmegaParameters) -> Result<AffineMap> {
        let (n, m) = self.dims();
        if params.dims() != (n, m) {
            return Err(Error::dims(format!("({n}, {m})"), format!("{:?}", params.dims())));
        }
        let scale = c(1.0 / (n * m) as f64, 0.0);
        let mut offset = CMatrix::zeros(n, n);
        for (mu, nu) in self.omega_parameter_indices() {
            let v = params.get(mu, nu);
            if v != 0.0 {
                offset += self.reduced_image(mu, nu) * c(v, 0.0);
            }
        }
        AffineMap::new(self.l_map(), offset * scale, MapKind::FixedMeanValue)
    }

    /// `Φ = D + C` with `C = (1/NM) Σ_{μ,ν≥1} Γ_{μν} Tr_R[U F_{μν} U†]`,
    /// summed over detected parameters.
    pub fn phi(&self, params: &PhiParameters) -> Result<AffineMap> {
        let (n, m) = self.dims();
        if params.dims() != (n, m) {
            return Err(Error::dims(format!("({n}, {m})"), format!("{:?}", params.dims())));
        }
        let scale = c(1.0 / (n * m) as f64, 0.0);
        let mut offset = CMatrix::zeros(n, n);
        for (mu, nu) in self.phi_parameter_indices().correlations {
            let g = params.gamma().get(mu, nu);
            if g != 0.0 {
                offset += self.reduced_image(mu, nu) * c(g, 0.0);
            }
        }
        AffineMap::new(
            self.d_map(params.rho_r())?,
            offset * scale,
            MapKind::FixedCorrelation,
        )
    }

    /// Heisenberg update of the subsystem means,
    /// `⟨U† F_{α0} U⟩ = Σ_{(μ,ν)≠(0,0)} t_{α0;μν} ⟨F_{μν}⟩`.
    pub fn heisenberg_means(&self, state: &JointState) -> Result<MeanValueVector> {
        let (n, m) = self.dims();
        if state.dims() != (n, m) {
            return Err(Error::dims(format!("({n}, {m})"), format!("{:?}", state.dims())));
        }
        let components = (1..n * n)
            .map(|a| {
                let mut acc = 0.0;
                for mu in 0..n * n {
                    for nu in 0..m * m {
                        if mu == 0 && nu == 0 {
                            continue;
                        }
                        acc += self.transfer.get(a, 0, mu, nu) * state.mean(mu, nu);
                    }
                }
                acc
            })
            .collect();
        MeanValueVector::new(n, components)
    }

    /// `U Π U†`.
    pub fn evolve(&self, pi: &CMatrix) -> Result<CMatrix> {
        ensure_square(pi, self.basis.joint_dim())?;
        Ok(&self.u * pi * self.u.adjoint())
    }
}

/// `E(Q) = D(Q) − D(1)·Tr Q/N + 1·Tr Q/N`, the unital companion of `D`.
pub fn e_map(d: &SuperOperator) -> SuperOperator {
    let n = d.dim();
    let inv_n = c(1.0 / n as f64, 0.0);
    let d_of_one = d.apply(&identity(n)).expect("identity has matching size");
    let trace_row = vectorize(&identity(n)).transpose();
    let correction = vectorize(&((identity(n) - d_of_one) * inv_n)) * trace_row;
    SuperOperator::new(n, d.rep() + correction).expect("shape is preserved")
}

fn check_dims(basis: &JointBasis, n: usize, m: usize) -> Result<()> {
    if (basis.n(), basis.m()) != (n, m) {
        return Err(Error::dims(
            format!("({n}, {m})"),
            format!("({}, {})", basis.n(), basis.m()),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs, max_abs_diff, trace, TOL};
    use crate::random::{ginibre, haar_unitary, random_density, seeded};

    #[test]
    fn zero_parameters_give_zero_offset() {
        let mut rng = seeded(21);
        let dyn_ = Dynamics::with_dims(haar_unitary(&mut rng, 6), 2, 3).unwrap();
        let omega = dyn_.omega(&OmegaParameters::zeros(2, 3).unwrap()).unwrap();
        assert!(max_abs(omega.offset()) < TOL);
        assert!(max_abs_diff(omega.homogeneous().rep(), dyn_.l_map().rep()) < TOL);
    }

    #[test]
    fn l_is_unital_and_trace_preserving() {
        let mut rng = seeded(22);
        for (n, m) in [(2, 2), (3, 2), (2, 3)] {
            let l = Dynamics::with_dims(haar_unitary(&mut rng, n * m), n, m)
                .unwrap()
                .l_map();
            assert!(l.unital_defect() < TOL);
            assert!(l.trace_defect() < TOL);
            assert!(l.hermiticity_defect() < TOL);
        }
    }

    #[test]
    fn e_map_of_unital_map_is_itself() {
        let mut rng = seeded(23);
        let l = Dynamics::with_dims(haar_unitary(&mut rng, 4), 2, 2)
            .unwrap()
            .l_map();
        assert!(max_abs_diff(e_map(&l).rep(), l.rep()) < TOL);
    }

    #[test]
    fn e_map_of_replacement_is_completely_depolarizing() {
        let mut rng = seeded(24);
        let rho0 = random_density(&mut rng, 3, 2);
        let e = e_map(&SuperOperator::replacement(&rho0).unwrap());
        for _ in 0..10 {
            let q = ginibre(&mut rng, 3, 3);
            let expected = identity(3) * (trace(&q) / c(3.0, 0.0));
            assert!(max_abs_diff(&e.apply(&q).unwrap(), &expected) < TOL);
        }
        assert!(e.unital_defect() < TOL);
    }

    #[test]
    fn parameter_table_validation() {
        let mut p = OmegaParameters::zeros(2, 2).unwrap();
        assert!(p.set(1, 0, 0.3).is_err());
        assert!(p.set(4, 1, 0.3).is_err());
        assert!(p.set(1, 3, f64::INFINITY).is_err());
        p.set(1, 3, 0.3).unwrap();
        assert_eq!(p.get(1, 3), 0.3);
        assert!(OmegaParameters::new(2, 2, RMatrix::zeros(4, 4)).is_err());
    }

    #[test]
    fn mismatched_parameter_dims_rejected() {
        let dyn_ = Dynamics::with_dims(identity(4), 2, 2).unwrap();
        assert!(dyn_.omega(&OmegaParameters::zeros(2, 3).unwrap()).is_err());
    }
}
