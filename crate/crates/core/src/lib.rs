//! Affine maps describing the open dynamics of a subsystem `S` that is part
//! of a larger system `S + R` evolving under a unitary `U`.
//!
//! Two families are built from the same dynamics:
//!
//! * fixed-mean-value maps `Ω(Q) = L(Q) + K·Tr Q`, where `L` depends on `U`
//!   only and `K` collects the fixed mean values that involve `R`;
//! * fixed-correlation maps `Φ(Q) = D(Q) + C·Tr Q`, where `D` depends on `U`
//!   and the state of `R`, and `C` collects the fixed correlations.
//!
//! The crate constructs both, inverts them, checks complete positivity through
//! the Choi matrix, decides membership in their compatibility domains, and
//! reproduces the two-qubit example with closed-form oracles.

pub mod analysis;
pub mod basis;
pub mod domain;
pub mod error;
pub mod json;
pub mod linalg;
pub mod mapgen;
pub mod random;
pub mod states;
pub mod superop;
pub mod twoqubit;

pub use analysis::{
    choi_analysis, dynamics_realizability, invert, invertibility, purity_inequality, CpReport,
    InvertibilityReport, Realizability, RealizabilityReport,
};
pub use basis::{HermitianBasis, JointBasis};
pub use error::{Error, Result};
pub use linalg::{CMatrix, RMatrix};
pub use mapgen::{Dynamics, OmegaParameters, PhiParameters};
pub use states::{CorrelationTable, DensityMatrix, JointState, MeanValueVector};
pub use superop::{AffineMap, MapKind, MeanAffineMap, SuperOperator, TransferMatrix};
