//! Invertibility, affine inversion, Choi/Kraus analysis, the purity
//! inequality for unital channels, and the realizability verdict for inverses.

use serde::Serialize;

use crate::basis::HermitianBasis;
use crate::error::{Error, Result};
use crate::linalg::{
    c, hermitian_eigen, purity, singular_values, unvectorize, vectorize, CMatrix, CVector,
    PSD_TOL,
};
use crate::mapgen::e_map;
use crate::random::{random_density_any_rank, seeded};
use crate::superop::{mean_affine, AffineMap, MapKind, SuperOperator, MAP_TOL};

/// Singular values below `RANK_TOL · σ_max` count as zero.
pub const RANK_TOL: f64 = 1e-10;

/// The three equivalent invertibility criteria evaluated side by side.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvertibilityReport {
    pub invertible: bool,
    /// Dimension of the kernel of the homogeneous part.
    pub kernel_dimension: usize,
    pub smallest_singular_value: f64,
    /// Rank of the images of the basis matrices `F_μ`.
    pub basis_image_rank: usize,
    /// Kernel dimension of the linear part of the mean-value map of the
    /// unital companion `E` (equal to the homogeneous part itself when unital).
    pub mean_map_kernel_dimension: usize,
}

fn rank_threshold(sv: &[f64]) -> f64 {
    RANK_TOL * sv.first().copied().unwrap_or(0.0)
}

fn check_structure(h: &SuperOperator) -> Result<()> {
    let herm = h.hermiticity_defect();
    if herm > MAP_TOL {
        return Err(Error::NotHermiticityPreserving(herm));
    }
    let tp = h.trace_defect();
    if tp > MAP_TOL {
        return Err(Error::NotTracePreserving(tp));
    }
    Ok(())
}

/// Evaluate invertibility of the homogeneous part three ways: its kernel,
/// the rank of the basis images, and the kernel of the induced linear map on
/// mean-value vectors.
pub fn invertibility(map: &AffineMap) -> Result<InvertibilityReport> {
    let h = map.homogeneous();
    check_structure(h)?;
    let n = h.dim();
    let basis = HermitianBasis::new(n)?;

    let sv = singular_values(h.rep());
    let threshold = rank_threshold(&sv);
    let kernel_dimension = sv.iter().filter(|&&s| s < threshold).count();
    let smallest_singular_value = sv.last().copied().unwrap_or(0.0);

    // Basis matrices have Frobenius norm √N, which scales every singular value.
    let images = CMatrix::from_fn(n * n, n * n, |row, col| {
        vectorize(&h.apply_unchecked(basis.element(col)))[row]
    });
    let image_sv = singular_values(&images);
    let image_threshold = threshold * (n as f64).sqrt();
    let basis_image_rank = image_sv.iter().filter(|&&s| s >= image_threshold).count();

    let companion = AffineMap::plain(e_map(h));
    let mean = mean_affine(&companion, &basis)?;
    let mean_sv = singular_values(&crate::linalg::complexify(mean.matrix()));
    let mean_map_kernel_dimension = mean_sv.iter().filter(|&&s| s < threshold).count();

    let dim = n * n;
    if kernel_dimension != dim - basis_image_rank || kernel_dimension != mean_map_kernel_dimension
    {
        return Err(Error::InconsistentVerdict {
            kernel_dimension,
            basis_image_rank,
            mean_kernel_dimension: mean_map_kernel_dimension,
        });
    }
    Ok(InvertibilityReport {
        invertible: kernel_dimension == 0,
        kernel_dimension,
        smallest_singular_value,
        basis_image_rank,
        mean_map_kernel_dimension,
    })
}

/// Inverse of a trace-preserving affine map:
/// `Q ↦ H⁻¹(Q − offset·Tr Q)`, i.e. homogeneous part `H⁻¹` and offset
/// `−H⁻¹(offset)`.
pub fn invert(map: &AffineMap) -> Result<AffineMap> {
    let report = invertibility(map)?;
    if !report.invertible {
        return Err(Error::Singular {
            smallest: report.smallest_singular_value,
            kernel_dimension: report.kernel_dimension,
        });
    }
    let tp = map.trace_defect();
    if tp > MAP_TOL {
        return Err(Error::NotTracePreserving(tp));
    }
    let n = map.dim();
    let inv_rep = map
        .homogeneous()
        .rep()
        .clone()
        .lu()
        .try_inverse()
        .ok_or(Error::Singular {
            smallest: report.smallest_singular_value,
            kernel_dimension: report.kernel_dimension,
        })?;
    let inverse = SuperOperator::new(n, inv_rep)?;
    let offset = -inverse.apply_unchecked(map.offset());
    AffineMap::new(inverse, offset, MapKind::Plain)
}

/// Choi matrix `Σ_ij |i⟩⟨j| ⊗ h(|i⟩⟨j|)`.
pub fn choi_matrix(h: &SuperOperator) -> CMatrix {
    let n = h.dim();
    let rep = h.rep();
    CMatrix::from_fn(n * n, n * n, |row, col| {
        let (i, a) = (row / n, row % n);
        let (j, b) = (col / n, col % n);
        rep[(a + b * n, i + j * n)]
    })
}

/// Complete-positivity verdicts and, for CP maps, a Kraus decomposition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CpReport {
    /// Ascending.
    pub choi_eigenvalues: Vec<f64>,
    pub choi_rank: usize,
    pub is_cp: bool,
    pub is_tp: bool,
    pub is_unital: bool,
    #[serde(serialize_with = "crate::json::serialize_optional_matrices")]
    pub kraus_factors: Option<Vec<CMatrix>>,
}

pub fn choi_analysis(h: &SuperOperator) -> CpReport {
    let n = h.dim();
    let (values, vectors) = hermitian_eigen(&choi_matrix(h));
    let largest = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let cutoff = RANK_TOL * largest;
    let choi_rank = values.iter().filter(|v| v.abs() > cutoff).count();
    let is_cp = values.first().is_none_or(|&v| v >= PSD_TOL);
    let kraus_factors = is_cp.then(|| {
        values
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &v)| v > cutoff)
            .map(|(k, &v)| {
                let col: CVector = vectors.column(k) * c(v.sqrt(), 0.0);
                unvectorize(&col, n)
            })
            .collect()
    });
    CpReport {
        choi_eigenvalues: values,
        choi_rank,
        is_cp,
        is_tp: h.trace_defect() <= MAP_TOL,
        is_unital: h.unital_defect() <= MAP_TOL,
        kraus_factors,
    }
}

/// `min over samples of Tr[ρ²] − Tr[D(ρ)²]` for seeded random states `ρ`.
/// Requires a unital, trace-preserving `D`.
pub fn purity_inequality(d: &SuperOperator, samples: usize, seed: u64) -> Result<f64> {
    check_structure(d)?;
    let unital = d.unital_defect();
    if unital > MAP_TOL {
        return Err(Error::NotUnital(unital));
    }
    let mut rng = seeded(seed);
    let n = d.dim();
    let mut worst = f64::INFINITY;
    for _ in 0..samples {
        let rho = random_density_any_rank(&mut rng, n);
        let out = d.apply_unchecked(&rho);
        worst = worst.min(purity(&rho) - purity(&out));
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Realizability {
    /// Unitary conjugation: the inverse is the reversed conjugation.
    InverseRealizable,
    /// Unital trace-preserving CP map that is not a unitary conjugation: its
    /// inverse cannot come from any unitary dynamics on a larger system.
    InverseNotRealizable,
    /// Some hypothesis (TP, CP, unital, invertible) fails.
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealizabilityReport {
    pub verdict: Realizability,
    pub trace_preserving: bool,
    pub completely_positive: bool,
    pub unital: bool,
    pub invertible: bool,
    pub choi_rank: usize,
    pub reason: String,
}

/// Decide whether the inverse of `map` (taken as a whole linear map, offset
/// included) could come from unitary dynamics on a larger system.
pub fn dynamics_realizability(map: &AffineMap) -> RealizabilityReport {
    let whole = map.linear_extension();
    let cp = choi_analysis(&whole);
    let sv = singular_values(whole.rep());
    let threshold = rank_threshold(&sv);
    let invertible = sv.iter().all(|&s| s >= threshold) && !sv.is_empty();

    let mut failed = Vec::new();
    if !cp.is_tp {
        failed.push("not trace preserving");
    }
    if !cp.is_cp {
        failed.push("not completely positive");
    }
    if !cp.is_unital {
        failed.push("not unital");
    }
    if !invertible {
        failed.push("not invertible");
    }
    let (verdict, reason) = if !failed.is_empty() {
        (Realizability::NotApplicable, failed.join(", "))
    } else if cp.choi_rank == 1 {
        (
            Realizability::InverseRealizable,
            "unitary conjugation of the subsystem".to_string(),
        )
    } else {
        (
            Realizability::InverseNotRealizable,
            format!(
                "unital trace-preserving CP map with Choi rank {} is not a unitary conjugation",
                cp.choi_rank
            ),
        )
    };
    RealizabilityReport {
        verdict,
        trace_preserving: cp.is_tp,
        completely_positive: cp.is_cp,
        unital: cp.is_unital,
        invertible,
        choi_rank: cp.choi_rank,
        reason,
    }
}
