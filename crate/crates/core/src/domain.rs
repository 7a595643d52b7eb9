//! Compatibility domains: which subsystem states can be completed, together
//! with a map's fixed parameters, to a positive joint state.
//!
//! Two tiers are available. The canonical check assembles the joint matrix
//! with every free quantity set to zero and tests positivity; it is exact for
//! that completion. The thorough check additionally searches over the free
//! quantities by alternating projections (positive cone, then the affine set
//! of tables with the fixed entries restored) and reports whether the answer
//! is backed by an explicit positive witness.

use serde::Serialize;

use crate::basis::JointBasis;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, min_eigenvalue, CMatrix, RMatrix, PSD_TOL, c};
use crate::mapgen::{Dynamics, OmegaParameters, PhiParameters};
use crate::random::{random_density_any_rank, seeded};
use crate::states::{JointState, MeanValueVector};

/// Iteration cap for the feasibility search.
pub const MAX_ITERATIONS: usize = 500;

/// Residual negativity above which the search declares incompatibility.
pub const RESIDUAL_TOL: f64 = 1e-8;

/// Eigenvalue floor used when projecting onto the positive cone, so that a
/// strictly feasible point yields a witness that passes [`PSD_TOL`].
const CONE_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum DomainParameters {
    Omega(OmegaParameters),
    Phi(PhiParameters),
}

impl DomainParameters {
    pub fn dims(&self) -> (usize, usize) {
        match self {
            DomainParameters::Omega(p) => p.dims(),
            DomainParameters::Phi(p) => p.dims(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomainQuery {
    pub means: MeanValueVector,
    pub parameters: DomainParameters,
    /// Joint-table positions `(μ, ν)`, `ν ≥ 1`, held fixed. For the
    /// fixed-correlation kind these name `Γ_{μν}` (so `μ ≥ 1`); the state of
    /// `R` is always fixed. `None` fixes everything.
    pub fixed: Option<Vec<(usize, usize)>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Search {
    /// Free quantities set to zero.
    Canonical,
    /// Canonical first, then the feasibility search.
    Thorough,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tier {
    CanonicalCompletion,
    FeasibilitySearch,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Compatibility {
    pub compatible: bool,
    pub tier: Tier,
    /// `false` when the search stopped with residual negativity between
    /// `-RESIDUAL_TOL` and `PSD_TOL`: declared compatible without a witness.
    pub exact: bool,
    /// Lowest eigenvalue of the best completion tried.
    pub min_eigenvalue: f64,
    pub iterations: usize,
    #[serde(skip)]
    pub witness: Option<CMatrix>,
}

fn target_table(query: &DomainQuery, basis: &JointBasis) -> Result<RMatrix> {
    let state = match &query.parameters {
        DomainParameters::Omega(p) => p.joint_state(basis, &query.means)?,
        DomainParameters::Phi(p) => p.joint_state(basis, &query.means)?,
    };
    Ok(state.means().clone())
}

/// Table positions that may move during the search.
fn free_positions(query: &DomainQuery, basis: &JointBasis) -> Result<Vec<(usize, usize)>> {
    let Some(fixed) = &query.fixed else {
        return Ok(Vec::new());
    };
    let first_mu = match query.parameters {
        DomainParameters::Omega(_) => 0,
        DomainParameters::Phi(_) => 1,
    };
    for &(mu, nu) in fixed {
        if nu == 0 || mu < first_mu || mu >= basis.s_len() || nu >= basis.r_len() {
            return Err(Error::InvalidParameters(format!(
                "fixed position ({mu}, {nu}) is not a map parameter slot"
            )));
        }
    }
    let mut free = Vec::new();
    for mu in first_mu..basis.s_len() {
        for nu in 1..basis.r_len() {
            if !fixed.contains(&(mu, nu)) {
                free.push((mu, nu));
            }
        }
    }
    Ok(free)
}

/// Decide whether `query.means` lies in the compatibility domain.
pub fn compatible(query: &DomainQuery, basis: &JointBasis, search: Search) -> Result<Compatibility> {
    if query.parameters.dims() != (basis.n(), basis.m()) {
        return Err(Error::dims(
            format!("{:?}", (basis.n(), basis.m())),
            format!("{:?}", query.parameters.dims()),
        ));
    }
    let mut table = target_table(query, basis)?;
    let free = free_positions(query, basis)?;
    // Canonical completion: free quantities at zero. For the
    // fixed-correlation kind a free Γ at zero leaves the product term.
    if let DomainParameters::Phi(_) = query.parameters {
        for &(mu, nu) in &free {
            table[(mu, nu)] = table[(mu, 0)] * table[(0, nu)];
        }
    } else {
        for &(mu, nu) in &free {
            table[(mu, nu)] = 0.0;
        }
    }
    let target = table.clone();
    let pi = JointState::new(basis, table)?.matrix(basis)?;
    let lowest = min_eigenvalue(&pi);
    if lowest >= PSD_TOL {
        return Ok(Compatibility {
            compatible: true,
            tier: Tier::CanonicalCompletion,
            exact: true,
            min_eigenvalue: lowest,
            iterations: 0,
            witness: Some(pi),
        });
    }
    if search == Search::Canonical || free.is_empty() {
        return Ok(Compatibility {
            compatible: false,
            tier: Tier::CanonicalCompletion,
            exact: true,
            min_eigenvalue: lowest,
            iterations: 0,
            witness: None,
        });
    }
    Ok(feasibility_search(basis, &target, &free, pi, lowest))
}

fn feasibility_search(
    basis: &JointBasis,
    target: &RMatrix,
    free: &[(usize, usize)],
    start: CMatrix,
    start_eigenvalue: f64,
) -> Compatibility {
    let d = basis.joint_dim() as f64;
    let mut pi = start;
    let mut best = start_eigenvalue;
    for iteration in 1..=MAX_ITERATIONS {
        let (values, vectors) = hermitian_eigen(&pi);
        let floor = CONE_MARGIN / d;
        let diag = CMatrix::from_fn(values.len(), values.len(), |i, j| {
            if i == j {
                c(values[i].max(floor), 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let projected = &vectors * diag * vectors.adjoint();
        let mut table = target.clone();
        for &(mu, nu) in free {
            table[(mu, nu)] =
                crate::linalg::trace_product(basis.element(mu, nu), &projected).re;
        }
        pi = JointState::new(basis, table)
            .and_then(|s| s.matrix(basis))
            .expect("table keeps its shape and unit trace");
        let lowest = min_eigenvalue(&pi);
        best = best.max(lowest);
        if lowest >= PSD_TOL {
            return Compatibility {
                compatible: true,
                tier: Tier::FeasibilitySearch,
                exact: true,
                min_eigenvalue: lowest,
                iterations: iteration,
                witness: Some(pi),
            };
        }
    }
    Compatibility {
        compatible: best >= -RESIDUAL_TOL,
        tier: Tier::FeasibilitySearch,
        exact: false,
        min_eigenvalue: best,
        iterations: MAX_ITERATIONS,
        witness: None,
    }
}

/// How mean-value vectors are sampled for domain comparisons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sampling {
    /// Regular grid over `[-1, 1]` on every axis, endpoints included.
    Grid { points_per_axis: usize },
    /// Means of seeded random states of `S`.
    Random { count: usize, seed: u64 },
}

/// Largest grid the sampler will enumerate.
pub const MAX_GRID_POINTS: usize = 1_000_000;

pub fn sample_points(dim: usize, sampling: Sampling) -> Result<Vec<MeanValueVector>> {
    let k = dim * dim - 1;
    match sampling {
        Sampling::Grid { points_per_axis } => {
            if points_per_axis < 2 {
                return Err(Error::InvalidParameters(
                    "a grid needs at least 2 points per axis".into(),
                ));
            }
            let total = (points_per_axis as f64).powi(k as i32);
            if total > MAX_GRID_POINTS as f64 {
                return Err(Error::InvalidParameters(format!(
                    "grid of {points_per_axis}^{k} points is too large; sample randomly instead"
                )));
            }
            let axis: Vec<f64> = (0..points_per_axis)
                .map(|i| -1.0 + 2.0 * i as f64 / (points_per_axis - 1) as f64)
                .collect();
            let mut out = Vec::with_capacity(total as usize);
            let mut idx = vec![0usize; k];
            loop {
                out.push(MeanValueVector::new(dim, idx.iter().map(|&i| axis[i]).collect())?);
                let mut pos = 0;
                loop {
                    if pos == k {
                        return Ok(out);
                    }
                    idx[pos] += 1;
                    if idx[pos] < points_per_axis {
                        break;
                    }
                    idx[pos] = 0;
                    pos += 1;
                }
            }
        }
        Sampling::Random { count, seed } => {
            let basis = crate::basis::HermitianBasis::new(dim)?;
            let mut rng = seeded(seed);
            (0..count)
                .map(|_| MeanValueVector::from_matrix(&basis, &random_density_any_rank(&mut rng, dim)))
                .collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DomainSample {
    pub means: Vec<f64>,
    pub omega: bool,
    pub phi: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShrinkageReport {
    pub total: usize,
    pub omega_compatible: usize,
    pub phi_compatible: usize,
    pub omega_only: usize,
    pub phi_only: usize,
    pub omega_fraction: f64,
    pub phi_fraction: f64,
    #[serde(skip)]
    pub samples: Vec<DomainSample>,
}

/// Compare the compatibility domains of an `Ω` and a `Φ` built from the same
/// dynamics, holding each map's detected parameters fixed.
pub fn domain_shrinkage_demo(
    dynamics: &Dynamics,
    omega: &OmegaParameters,
    phi: &PhiParameters,
    sampling: Sampling,
    search: Search,
) -> Result<ShrinkageReport> {
    let basis = dynamics.basis();
    let omega_fixed = dynamics.omega_parameter_indices();
    let phi_fixed = dynamics.phi_parameter_indices().correlations;
    let points = sample_points(basis.n(), sampling)?;
    let mut samples = Vec::with_capacity(points.len());
    for means in points {
        let q_omega = DomainQuery {
            means: means.clone(),
            parameters: DomainParameters::Omega(omega.clone()),
            fixed: Some(omega_fixed.clone()),
        };
        let q_phi = DomainQuery {
            means: means.clone(),
            parameters: DomainParameters::Phi(phi.clone()),
            fixed: Some(phi_fixed.clone()),
        };
        samples.push(DomainSample {
            omega: compatible(&q_omega, basis, search)?.compatible,
            phi: compatible(&q_phi, basis, search)?.compatible,
            means: means.components().to_vec(),
        });
    }
    let total = samples.len();
    let count = |f: &dyn Fn(&DomainSample) -> bool| samples.iter().filter(|s| f(s)).count();
    let omega_compatible = count(&|s| s.omega);
    let phi_compatible = count(&|s| s.phi);
    let omega_only = count(&|s| s.omega && !s.phi);
    let phi_only = count(&|s| s.phi && !s.omega);
    let frac = |k: usize| if total == 0 { 0.0 } else { k as f64 / total as f64 };
    Ok(ShrinkageReport {
        total,
        omega_compatible,
        phi_compatible,
        omega_only,
        phi_only,
        omega_fraction: frac(omega_compatible),
        phi_fraction: frac(phi_compatible),
        samples,
    })
}
