//! Serializable mirrors of the library types.
//!
//! Complex matrices are written as `{"rows": [[[re, im], ...], ...]}`.
//! Affine maps are `{"kind", "homogeneous", "offset"}` where `homogeneous`
//! is the `N² × N²` column-stacking representation.

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix};
use crate::mapgen::{OmegaParameters, PhiParameters};
use crate::states::{CorrelationTable, DensityMatrix};
use crate::superop::{AffineMap, MapKind, SuperOperator};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: Vec<Vec<[f64; 2]>>,
}

impl From<&CMatrix> for MatrixJson {
    fn from(m: &CMatrix) -> Self {
        let rows = (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect();
        Self { rows }
    }
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<CMatrix> {
        let nrows = self.rows.len();
        let ncols = self.rows.first().map_or(0, Vec::len);
        if let Some(bad) = self.rows.iter().find(|r| r.len() != ncols) {
            return Err(Error::dims(
                format!("rows of length {ncols}"),
                format!("a row of length {}", bad.len()),
            ));
        }
        let mut m = CMatrix::zeros(nrows, ncols);
        for (i, row) in self.rows.iter().enumerate() {
            for (j, [re, im]) in row.iter().enumerate() {
                m[(i, j)] = c(*re, *im);
            }
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineMapJson {
    pub kind: MapKind,
    pub homogeneous: MatrixJson,
    pub offset: MatrixJson,
    /// Joint-basis indices `(μ, ν)` of the fixed quantities the map depends on.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameters: Option<Vec<[usize; 2]>>,
}

impl From<&AffineMap> for AffineMapJson {
    fn from(map: &AffineMap) -> Self {
        Self {
            kind: map.kind(),
            homogeneous: MatrixJson::from(map.homogeneous().rep()),
            offset: MatrixJson::from(map.offset()),
            parameters: None,
        }
    }
}

impl AffineMapJson {
    pub fn to_map(&self) -> Result<AffineMap> {
        let offset = self.offset.to_matrix()?;
        let dim = offset.nrows();
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let homogeneous = SuperOperator::new(dim, self.homogeneous.to_matrix()?)?;
        AffineMap::new(homogeneous, offset, self.kind)
    }
}

/// One `(μ, ν, value)` table entry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub mu: usize,
    pub nu: usize,
    pub value: f64,
}

/// Parameters of a fixed-mean-value map: the listed `⟨F_{μν}⟩`, `ν ≥ 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmegaParamsJson {
    pub dims: [usize; 2],
    #[serde(default)]
    pub means: Vec<Entry>,
}

impl OmegaParamsJson {
    pub fn to_params(&self) -> Result<OmegaParameters> {
        let entries: Vec<_> = self.means.iter().map(|e| (e.mu, e.nu, e.value)).collect();
        OmegaParameters::from_entries(self.dims[0], self.dims[1], &entries)
    }
}

/// Parameters of a fixed-correlation map. The state of `R` is given either
/// as a matrix (`rho_r`) or by its means `⟨F_{0ν}⟩`, `ν ≥ 1` (`r_means`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiParamsJson {
    pub dims: [usize; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_r: Option<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_means: Option<Vec<f64>>,
    #[serde(default)]
    pub correlations: Vec<Entry>,
}

impl PhiParamsJson {
    pub fn to_params(&self) -> Result<PhiParameters> {
        let [n, m] = self.dims;
        let rho_r = match (&self.rho_r, &self.r_means) {
            (Some(mat), None) => DensityMatrix::new(mat.to_matrix()?)?,
            (None, Some(means)) => {
                let basis = crate::basis::HermitianBasis::new(m)?;
                let v = crate::states::MeanValueVector::new(m, means.clone())?;
                DensityMatrix::from_means(&basis, &v)?
            }
            (None, None) => DensityMatrix::maximally_mixed(m)?,
            (Some(_), Some(_)) => {
                return Err(Error::InvalidParameters(
                    "give either rho_r or r_means, not both".into(),
                ))
            }
        };
        let entries: Vec<_> = self
            .correlations
            .iter()
            .map(|e| (e.mu, e.nu, e.value))
            .collect();
        PhiParameters::new(rho_r, CorrelationTable::from_entries(n, m, &entries)?)
    }
}

pub(crate) fn serialize_optional_matrices<S: Serializer>(
    value: &Option<Vec<CMatrix>>,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    value
        .as_ref()
        .map(|ms| ms.iter().map(MatrixJson::from).collect::<Vec<_>>())
        .serialize(serializer)
}
