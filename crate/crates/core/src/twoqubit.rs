//! Two qubits coupled by `U = exp(−i·γ/2·Σ₃Ξ₃)`: every closed-form result
//! for this example, checked against the general machinery.
//!
//! The closed forms are the oracles here; [`Dynamics`], [`invert`] and
//! [`choi_analysis`] are the code under test.

use serde::Serialize;

use crate::analysis::{choi_analysis, dynamics_realizability, invert, invertibility, Realizability};
use crate::basis::HermitianBasis;
use crate::error::{Error, Result};
use crate::linalg::{
    c, frobenius_norm, identity, kron, max_abs_diff, max_abs_real, min_eigenvalue, CMatrix,
    RMatrix,
};
use crate::mapgen::{Dynamics, OmegaParameters, PhiParameters};
use crate::states::{CorrelationTable, DensityMatrix, JointState, MeanValueVector};
use crate::superop::{mean_affine, AffineMap, SuperOperator};

/// Default tolerance for closed-form comparisons.
pub const ORACLE_TOL: f64 = 1e-10;

/// `|sin γ|` or `det` below this counts as zero.
pub const ZERO_TOL: f64 = 1e-12;

/// `Σ_k` (or `Ξ_k`) with `k = 0` the identity.
pub fn pauli(k: usize) -> CMatrix {
    HermitianBasis::pauli().element(k).clone()
}

/// `exp(−i·γ/2·σz⊗σz)`; diagonal since `σz⊗σz = diag(1, −1, −1, 1)`.
pub fn two_qubit_unitary(gamma: f64) -> CMatrix {
    let minus = c(0.0, -gamma / 2.0).exp();
    let plus = c(0.0, gamma / 2.0).exp();
    let mut u = CMatrix::zeros(4, 4);
    u[(0, 0)] = minus;
    u[(1, 1)] = plus;
    u[(2, 2)] = plus;
    u[(3, 3)] = minus;
    u
}

fn sx(j: usize, k: usize) -> CMatrix {
    kron(&pauli(j), &pauli(k))
}

/// Fixed quantities of the example.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoQubitScenario {
    pub gamma: f64,
    /// `⟨Ξ₃⟩`, the state of `R` for the fixed-correlation map.
    pub xi3: f64,
    /// `Γ₁₃`
    pub corr13: f64,
    /// `Γ₂₃`
    pub corr23: f64,
    /// `⟨Σ₂Ξ₃⟩`, parameter of the fixed-mean-value map.
    pub mean_s2x3: f64,
    /// `⟨Σ₁Ξ₃⟩`, parameter of the fixed-mean-value map.
    pub mean_s1x3: f64,
}

impl TwoQubitScenario {
    pub fn new(gamma: f64) -> Self {
        Self {
            gamma,
            xi3: 0.0,
            corr13: 0.0,
            corr23: 0.0,
            mean_s2x3: 0.0,
            mean_s1x3: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let values = [
            self.gamma,
            self.xi3,
            self.corr13,
            self.corr23,
            self.mean_s2x3,
            self.mean_s1x3,
        ];
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameters("non-finite scenario value".into()));
        }
        if self.xi3.abs() > 1.0 {
            return Err(Error::InvalidParameters(format!(
                "<Xi_3> = {} lies outside [-1, 1]",
                self.xi3
            )));
        }
        Ok(())
    }

    pub fn dynamics(&self) -> Result<Dynamics> {
        Dynamics::with_dims(two_qubit_unitary(self.gamma), 2, 2)
    }

    pub fn omega_parameters(&self) -> Result<OmegaParameters> {
        OmegaParameters::from_entries(2, 2, &[(2, 3, self.mean_s2x3), (1, 3, self.mean_s1x3)])
    }

    pub fn phi_parameters(&self) -> Result<PhiParameters> {
        let rho_r = DensityMatrix::new((identity(2) + pauli(3) * c(self.xi3, 0.0)) * c(0.5, 0.0))?;
        let gamma = CorrelationTable::from_entries(2, 2, &[(1, 3, self.corr13), (2, 3, self.corr23)])?;
        PhiParameters::new(rho_r, gamma)
    }
}

/// One closed-form comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub deviation: f64,
    pub passed: bool,
}

impl Check {
    fn numeric(name: &str, deviation: f64, tol: f64) -> Self {
        Self {
            name: name.to_string(),
            deviation,
            passed: deviation <= tol,
        }
    }

    fn verdict(name: &str, observed: bool, expected: bool) -> Self {
        Self {
            name: name.to_string(),
            deviation: if observed == expected { 0.0 } else { 1.0 },
            passed: observed == expected,
        }
    }
}

fn max_deviation(checks: &[Check]) -> f64 {
    checks.iter().map(|c| c.deviation).fold(0.0, f64::max)
}

fn images_deviation(map: &SuperOperator, expected: &[CMatrix; 4]) -> f64 {
    (0..4)
        .map(|k| max_abs_diff(&map.apply_unchecked(&pauli(k)), &expected[k]))
        .fold(0.0, f64::max)
}

/// Outcome of the fixed-mean-value reproduction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedMeanReport {
    pub scenario: TwoQubitScenario,
    pub invertible: bool,
    pub smallest_singular_value: f64,
    /// Whether `L⁻¹` is completely positive, when it exists.
    pub inverse_cp: Option<bool>,
    pub realizability: Realizability,
    pub checks: Vec<Check>,
    pub max_deviation: f64,
}

impl FixedMeanReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

/// Build `Ω` for the scenario and compare with every closed form: the
/// Heisenberg images, the basis images and operator-sum form of `L`, the
/// mean-value maps, `2K`, and (when `cos γ ≠ 0`) the inverse.
pub fn reproduce_fixed_mean(scenario: &TwoQubitScenario, tol: f64) -> Result<FixedMeanReport> {
    scenario.validate()?;
    let g = scenario.gamma;
    let (cos, sin) = (g.cos(), g.sin());
    let dynamics = scenario.dynamics()?;
    let omega = dynamics.omega(&scenario.omega_parameters()?)?;
    let l = omega.homogeneous();
    let u = dynamics.unitary();
    let mut checks = Vec::new();

    // U†Σ₁U = Σ₁cos γ − Σ₂Ξ₃ sin γ, U†Σ₂U = Σ₂cos γ + Σ₁Ξ₃ sin γ, U†Σ₃U = Σ₃.
    let heis = |k: usize| u.adjoint() * sx(k, 0) * u;
    let dev = max_abs_diff(&heis(1), &(sx(1, 0) * c(cos, 0.0) - sx(2, 3) * c(sin, 0.0)))
        .max(max_abs_diff(&heis(2), &(sx(2, 0) * c(cos, 0.0) + sx(1, 3) * c(sin, 0.0))))
        .max(max_abs_diff(&heis(3), &sx(3, 0)));
    checks.push(Check::numeric("Heisenberg images of the Pauli matrices", dev, tol));

    let l_images = [
        identity(2),
        pauli(1) * c(cos, 0.0),
        pauli(2) * c(cos, 0.0),
        pauli(3),
    ];
    checks.push(Check::numeric("basis images of L", images_deviation(l, &l_images), tol));

    let half = g / 2.0;
    let opsum = SuperOperator::from_kraus(&[
        identity(2) * c(half.cos(), 0.0),
        pauli(3) * c(half.sin(), 0.0),
    ])?;
    checks.push(Check::numeric(
        "operator-sum form of L",
        max_abs_diff(l.rep(), opsum.rep()),
        tol,
    ));

    let basis = HermitianBasis::pauli();
    let diag = RMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![cos, cos, 1.0]));
    let l_hat = mean_affine(&AffineMap::plain(l.clone()), &basis)?;
    checks.push(Check::numeric(
        "mean-value map of L",
        max_abs_real(&(l_hat.matrix() - &diag)).max(l_hat.shift().amax()),
        tol,
    ));

    let omega_hat = mean_affine(&omega, &basis)?;
    let shift = [-scenario.mean_s2x3 * sin, scenario.mean_s1x3 * sin, 0.0];
    let shift_dev = (0..3)
        .map(|k| (omega_hat.shift()[k] - shift[k]).abs())
        .fold(0.0, f64::max);
    checks.push(Check::numeric(
        "mean-value map of Omega",
        max_abs_real(&(omega_hat.matrix() - &diag)).max(shift_dev),
        tol,
    ));

    let two_k = (pauli(1) * c(-scenario.mean_s2x3, 0.0) + pauli(2) * c(scenario.mean_s1x3, 0.0))
        * c(sin, 0.0);
    checks.push(Check::numeric(
        "offset 2K",
        max_abs_diff(&(omega.offset() * c(2.0, 0.0)), &two_k),
        tol,
    ));
    checks.push(Check::numeric(
        "Omega(1) = 1 + 2K",
        max_abs_diff(&omega.apply(&identity(2))?, &(identity(2) + &two_k)),
        tol,
    ));

    // ρ ↦ ½[Ω(1) + Σ ⟨Σ_j⟩ L(Σ_j)] on a fixed state.
    let bloch = [0.3, -0.2, 0.5];
    let rho = (identity(2) + pauli(1) * c(bloch[0], 0.0) + pauli(2) * c(bloch[1], 0.0)
        + pauli(3) * c(bloch[2], 0.0))
        * c(0.5, 0.0);
    let assembled = (identity(2) + &two_k
        + (1..4)
            .map(|j| &l_images[j] * c(bloch[j - 1], 0.0))
            .fold(CMatrix::zeros(2, 2), |a, b| a + b))
        * c(0.5, 0.0);
    checks.push(Check::numeric(
        "Omega(rho) from basis images",
        max_abs_diff(&omega.apply(&rho)?, &assembled),
        tol,
    ));

    let report = invertibility(&omega)?;
    checks.push(Check::verdict(
        "L invertible iff cos(gamma) != 0",
        report.invertible,
        cos.abs() > ZERO_TOL,
    ));
    let mut inverse_cp = None;
    if report.invertible {
        let inv = invert(&omega)?;
        let l_inv = invert(&AffineMap::plain(l.clone()))?;
        let expected = [
            identity(2),
            pauli(1) * c(1.0 / cos, 0.0),
            pauli(2) * c(1.0 / cos, 0.0),
            pauli(3),
        ];
        checks.push(Check::numeric(
            "basis images of the inverse of L",
            images_deviation(l_inv.homogeneous(), &expected),
            tol,
        ));
        // ±(cos(γ/2)/√|cos γ|)² Q ∓ (sin(γ/2)/√|cos γ|)² Σ₃QΣ₃, upper sign for cos γ > 0.
        let sign = cos.signum();
        let scale = 1.0 / cos.abs();
        let closed = SuperOperator::new(
            2,
            SuperOperator::identity(2).rep() * c(sign * half.cos().powi(2) * scale, 0.0)
                - SuperOperator::conjugation(&pauli(3))?.rep()
                    * c(sign * half.sin().powi(2) * scale, 0.0),
        )?;
        checks.push(Check::numeric(
            "operator-sum form of the inverse of L",
            max_abs_diff(l_inv.homogeneous().rep(), closed.rep()),
            tol * scale.max(1.0),
        ));
        let round_trip = inv.compose(&omega)?;
        checks.push(Check::numeric(
            "inverse of Omega composed with Omega",
            max_abs_diff(round_trip.homogeneous().rep(), &identity(4))
                .max(crate::linalg::max_abs(round_trip.offset())),
            tol * scale.max(1.0),
        ));
        let cp = choi_analysis(l_inv.homogeneous()).is_cp;
        checks.push(Check::verdict(
            "inverse of L completely positive iff sin(gamma) = 0",
            cp,
            sin.abs() <= ZERO_TOL,
        ));
        inverse_cp = Some(cp);
    }

    Ok(FixedMeanReport {
        scenario: *scenario,
        invertible: report.invertible,
        smallest_singular_value: report.smallest_singular_value,
        inverse_cp,
        realizability: dynamics_realizability(&AffineMap::plain(l.clone())).verdict,
        max_deviation: max_deviation(&checks),
        checks,
    })
}

/// Outcome of the fixed-correlation reproduction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedCorrReport {
    pub scenario: TwoQubitScenario,
    /// `cos²γ + ⟨Ξ₃⟩² sin²γ`
    pub determinant: f64,
    pub invertible: bool,
    pub smallest_singular_value: f64,
    /// Whether `Φ(½(1 + Σ₃))` is positive.
    pub up_state_image_positive: bool,
    pub inverse_cp: Option<bool>,
    pub realizability: Realizability,
    pub checks: Vec<Check>,
    pub max_deviation: f64,
}

impl FixedCorrReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

/// Build `Φ` with `ρ_R = ½(1 + ⟨Ξ₃⟩Ξ₃)` and compare with the closed forms
/// for `D`, `C`, the mean-value maps, the determinant, `D⁻¹` and the
/// positivity of `Φ(½(1 + Σ₃))`.
pub fn reproduce_fixed_corr(scenario: &TwoQubitScenario, tol: f64) -> Result<FixedCorrReport> {
    scenario.validate()?;
    let g = scenario.gamma;
    let (cos, sin) = (g.cos(), g.sin());
    let xi = scenario.xi3;
    let (g13, g23) = (scenario.corr13, scenario.corr23);
    let dynamics = scenario.dynamics()?;
    let phi = dynamics.phi(&scenario.phi_parameters()?)?;
    let d = phi.homogeneous();
    let mut checks = Vec::new();

    let d_images = [
        identity(2),
        pauli(1) * c(cos, 0.0) + pauli(2) * c(xi * sin, 0.0),
        pauli(2) * c(cos, 0.0) - pauli(1) * c(xi * sin, 0.0),
        pauli(3),
    ];
    checks.push(Check::numeric("basis images of D", images_deviation(d, &d_images), tol));

    let c_closed = (pauli(2) * c(g13, 0.0) - pauli(1) * c(g23, 0.0)) * c(0.5 * sin, 0.0);
    checks.push(Check::numeric(
        "offset C",
        max_abs_diff(phi.offset(), &c_closed),
        tol,
    ));

    let basis = HermitianBasis::pauli();
    let phi_hat = mean_affine(&phi, &basis)?;
    let matrix = RMatrix::from_row_slice(3, 3, &[cos, -xi * sin, 0.0, xi * sin, cos, 0.0, 0.0, 0.0, 1.0]);
    let shift = [-g23 * sin, g13 * sin, 0.0];
    let shift_dev = (0..3)
        .map(|k| (phi_hat.shift()[k] - shift[k]).abs())
        .fold(0.0, f64::max);
    checks.push(Check::numeric(
        "mean-value map of Phi",
        max_abs_real(&(phi_hat.matrix() - &matrix)).max(shift_dev),
        tol,
    ));

    let determinant = cos * cos + xi * xi * sin * sin;
    let block = phi_hat.matrix().fixed_view::<2, 2>(0, 0).determinant();
    checks.push(Check::numeric("determinant", (block - determinant).abs(), tol));

    let up = (identity(2) + pauli(3)) * c(0.5, 0.0);
    let image = phi.apply(&up)?;
    let expected_image = (identity(2) + pauli(3) + pauli(2) * c(g13 * sin, 0.0)
        - pauli(1) * c(g23 * sin, 0.0))
        * c(0.5, 0.0);
    checks.push(Check::numeric(
        "image of the up state",
        max_abs_diff(&image, &expected_image),
        tol,
    ));
    // Eigenvalues of ½(1 + Σ₃ + xΣ₁ + yΣ₂) are ½(1 ± √(1 + x² + y²)).
    let closed_lowest = 0.5 * (1.0 - (1.0 + sin * sin * (g13 * g13 + g23 * g23)).sqrt());
    let lowest = min_eigenvalue(&image);
    checks.push(Check::numeric(
        "lowest eigenvalue of the up-state image",
        (lowest - closed_lowest).abs(),
        tol,
    ));
    let up_state_image_positive = lowest >= crate::linalg::PSD_TOL;

    let report = invertibility(&phi)?;
    checks.push(Check::verdict(
        "D invertible iff the determinant is nonzero",
        report.invertible,
        determinant >= ZERO_TOL,
    ));
    let mut inverse_cp = None;
    if report.invertible {
        let d_inv = invert(&AffineMap::plain(d.clone()))?;
        let expected = [
            identity(2),
            pauli(1) * c(cos / determinant, 0.0) - pauli(2) * c(xi * sin / determinant, 0.0),
            pauli(2) * c(cos / determinant, 0.0) + pauli(1) * c(xi * sin / determinant, 0.0),
            pauli(3),
        ];
        let amplification = (1.0 / determinant).max(1.0);
        checks.push(Check::numeric(
            "basis images of the inverse of D",
            images_deviation(d_inv.homogeneous(), &expected),
            tol * amplification,
        ));

        let inv_hat = mean_affine(&d_inv, &basis)?;
        let inv_matrix = RMatrix::from_row_slice(
            3,
            3,
            &[
                cos / determinant,
                xi * sin / determinant,
                0.0,
                -xi * sin / determinant,
                cos / determinant,
                0.0,
                0.0,
                0.0,
                1.0,
            ],
        );
        checks.push(Check::numeric(
            "mean-value map of the inverse of D",
            max_abs_real(&(inv_hat.matrix() - &inv_matrix)).max(inv_hat.shift().amax()),
            tol * amplification,
        ));

        // [D̂⁻¹⟨Σ₁⟩]² + [D̂⁻¹⟨Σ₂⟩]² = (⟨Σ₁⟩² + ⟨Σ₂⟩²)/det
        let mut worst: f64 = 0.0;
        for (a1, a2) in [(0.6, 0.0), (0.0, -0.8), (0.3, 0.4), (-0.5, 0.5)] {
            let v = inv_hat.apply(&MeanValueVector::new(2, vec![a1, a2, 0.1])?)?;
            let lhs = v.get(1).powi(2) + v.get(2).powi(2);
            let rhs = (a1 * a1 + a2 * a2) / determinant;
            worst = worst.max((lhs - rhs).abs());
        }
        checks.push(Check::numeric(
            "squared length under the inverse mean-value map",
            worst,
            tol * amplification,
        ));

        let round_trip = invert(&phi)?.compose(&phi)?;
        checks.push(Check::numeric(
            "inverse of Phi composed with Phi",
            max_abs_diff(round_trip.homogeneous().rep(), &identity(4))
                .max(crate::linalg::max_abs(round_trip.offset())),
            tol * amplification,
        ));

        let cp = choi_analysis(d_inv.homogeneous()).is_cp;
        // Pure R (either sign of ⟨Ξ₃⟩) makes D a rotation about z.
        let expected_cp = (xi.abs() - 1.0).abs() <= ZERO_TOL || sin.abs() <= ZERO_TOL;
        checks.push(Check::verdict(
            "inverse of D completely positive iff |<Xi_3>| = 1 or sin(gamma) = 0",
            cp,
            expected_cp,
        ));
        inverse_cp = Some(cp);
    }

    Ok(FixedCorrReport {
        scenario: *scenario,
        determinant,
        invertible: report.invertible,
        smallest_singular_value: report.smallest_singular_value,
        up_state_image_positive,
        inverse_cp,
        realizability: dynamics_realizability(&AffineMap::plain(d.clone())).verdict,
        max_deviation: max_deviation(&checks),
        checks,
    })
}

/// Forward and backward evolution of one initial state of `S`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DisconnectionReport {
    pub gamma: f64,
    pub initial_bloch: [f64; 3],
    pub forward_bloch: [f64; 3],
    /// `⟨Σ₂Ξ₃⟩′` after the forward step.
    pub evolved_s2x3: f64,
    /// `⟨Σ₁Ξ₃⟩′` after the forward step.
    pub evolved_s1x3: f64,
    /// Offset `K′` of the map built from `U†` with the evolved parameters.
    #[serde(serialize_with = "serialize_matrix")]
    pub backward_offset: CMatrix,
    pub returned_bloch: [f64; 3],
    pub round_trip_deviation: f64,
    pub checks: Vec<Check>,
    pub max_deviation: f64,
}

impl DisconnectionReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

fn serialize_matrix<S: serde::Serializer>(m: &CMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&crate::json::MatrixJson::from(m), s)
}

fn bloch_of(rho: &CMatrix) -> Result<[f64; 3]> {
    let v = MeanValueVector::from_matrix(&HermitianBasis::pauli(), rho)?;
    Ok([v.get(1), v.get(2), v.get(3)])
}

/// Start from `ρ ⊗ 1/2` (so `⟨Σ₂Ξ₃⟩ = ⟨Σ₁Ξ₃⟩ = 0`), evolve forward with
/// `U`, then build the backward map from `U†` with the evolved parameters and
/// apply it. The backward offset depends on the initial state.
pub fn disconnection_demo(gamma: f64, bloch: [f64; 3], tol: f64) -> Result<DisconnectionReport> {
    if !gamma.is_finite() || bloch.iter().any(|b| !b.is_finite()) {
        return Err(Error::InvalidParameters("non-finite input".into()));
    }
    let norm = bloch.iter().map(|b| b * b).sum::<f64>().sqrt();
    if norm > 1.0 + 1e-12 {
        return Err(Error::InvalidState(format!(
            "Bloch vector of length {norm} is outside the unit ball"
        )));
    }
    let (cos, sin) = (gamma.cos(), gamma.sin());
    let basis = HermitianBasis::pauli();
    let means = MeanValueVector::new(2, bloch.to_vec())?;
    let rho = means.to_matrix(&basis)?;

    let forward = Dynamics::with_dims(two_qubit_unitary(gamma), 2, 2)?;
    let joint = JointState::product(forward.basis(), &rho, &(identity(2) * c(0.5, 0.0)))?;
    let omega = forward.omega(&OmegaParameters::from_joint_state(&joint))?;
    let rho_forward = omega.apply(&rho)?;
    let pi_forward = forward.evolve(&joint.matrix(forward.basis())?)?;
    let evolved = JointState::from_matrix(forward.basis(), &pi_forward)?;

    let mut checks = Vec::new();
    checks.push(Check::numeric(
        "forward map is L (no offset)",
        crate::linalg::max_abs(omega.offset()),
        tol,
    ));
    checks.push(Check::numeric(
        "forward map agrees with the joint evolution",
        max_abs_diff(
            &rho_forward,
            &crate::linalg::partial_trace_r(&pi_forward, 2, 2)?,
        ),
        tol,
    ));
    let evolved_s2x3 = evolved.mean(2, 3);
    let evolved_s1x3 = evolved.mean(1, 3);
    checks.push(Check::numeric(
        "evolved correlations",
        (evolved_s2x3 - bloch[0] * sin)
            .abs()
            .max((evolved_s1x3 + bloch[1] * sin).abs()),
        tol,
    ));

    let backward = forward.reversed()?;
    let omega_back = backward.omega(&OmegaParameters::from_joint_state(&evolved))?;
    // U† flips the sign of sin γ in the offset formula.
    let two_k_back = (pauli(1) * c(-evolved_s2x3, 0.0) + pauli(2) * c(evolved_s1x3, 0.0))
        * c(-sin, 0.0);
    checks.push(Check::numeric(
        "backward offset 2K'",
        max_abs_diff(&(omega_back.offset() * c(2.0, 0.0)), &two_k_back),
        tol,
    ));
    checks.push(Check::numeric(
        "backward homogeneous part equals L",
        max_abs_diff(omega_back.homogeneous().rep(), omega.homogeneous().rep()),
        tol,
    ));

    let rho_back = omega_back.apply(&rho_forward)?;
    let forward_bloch = bloch_of(&rho_forward)?;
    let returned_bloch = bloch_of(&rho_back)?;
    // ⟨Σ₁⟩″ = L̂⟨Σ₁⟩cos γ + ⟨Σ₂Ξ₃⟩′ sin γ, ⟨Σ₂⟩″ = L̂⟨Σ₂⟩cos γ − ⟨Σ₁Ξ₃⟩′ sin γ.
    let closed = [
        forward_bloch[0] * cos + evolved_s2x3 * sin,
        forward_bloch[1] * cos - evolved_s1x3 * sin,
        forward_bloch[2],
    ];
    let closed_dev = (0..3)
        .map(|k| (returned_bloch[k] - closed[k]).abs())
        .fold(0.0, f64::max);
    checks.push(Check::numeric("returned means from the closed form", closed_dev, tol));
    let round_trip_deviation = (0..3)
        .map(|k| (returned_bloch[k] - bloch[k]).abs())
        .fold(0.0, f64::max);
    checks.push(Check::numeric("round trip", round_trip_deviation, tol));

    Ok(DisconnectionReport {
        gamma,
        initial_bloch: bloch,
        forward_bloch,
        evolved_s2x3,
        evolved_s1x3,
        backward_offset: omega_back.offset().clone(),
        returned_bloch,
        round_trip_deviation,
        max_deviation: max_deviation(&checks),
        checks,
    })
}

/// Frobenius distance between the backward offsets of two initial states.
pub fn backward_offset_difference(gamma: f64, first: [f64; 3], second: [f64; 3]) -> Result<f64> {
    let a = disconnection_demo(gamma, first, f64::INFINITY)?;
    let b = disconnection_demo(gamma, second, f64::INFINITY)?;
    Ok(frobenius_norm(&(a.backward_offset - b.backward_offset)))
}

/// One row of a `γ × ⟨Ξ₃⟩` sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub gamma: f64,
    pub xi3: f64,
    pub determinant: f64,
    pub l_invertible: bool,
    pub d_invertible: bool,
    pub l_inverse_cp: Option<bool>,
    pub d_inverse_cp: Option<bool>,
    pub max_deviation: f64,
    pub passed: bool,
}

/// `γ = kπ/12` for `k = 0..=24`.
pub fn gamma_sweep() -> Vec<f64> {
    (0..=24).map(|k| k as f64 * std::f64::consts::PI / 12.0).collect()
}

/// `⟨Ξ₃⟩ ∈ {0, ±0.3, ±0.7, ±1}`.
pub fn xi3_sweep() -> Vec<f64> {
    vec![0.0, 0.3, -0.3, 0.7, -0.7, 1.0, -1.0]
}

/// Run both reproductions over every `(γ, ⟨Ξ₃⟩)` pair, using `template` for
/// the remaining scenario values.
pub fn sweep(template: &TwoQubitScenario, gammas: &[f64], xis: &[f64], tol: f64) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(gammas.len() * xis.len());
    for &gamma in gammas {
        for &xi3 in xis {
            let scenario = TwoQubitScenario {
                gamma,
                xi3,
                ..*template
            };
            let fm = reproduce_fixed_mean(&scenario, tol)?;
            let fc = reproduce_fixed_corr(&scenario, tol)?;
            rows.push(SweepRow {
                gamma,
                xi3,
                determinant: fc.determinant,
                l_invertible: fm.invertible,
                d_invertible: fc.invertible,
                l_inverse_cp: fm.inverse_cp,
                d_inverse_cp: fc.inverse_cp,
                max_deviation: fm.max_deviation.max(fc.max_deviation),
                passed: fm.passed() && fc.passed(),
            });
        }
    }
    Ok(rows)
}
