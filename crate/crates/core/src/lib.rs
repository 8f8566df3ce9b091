//! Exact-arithmetic toolkit for dualizing toric Landau-Ginzburg models.
//!
//! The crate works entirely over arbitrary-precision integers and rationals.
//! It builds LG models from complete intersections in toric varieties
//! (the sigma model / LG correspondence), swaps their linear data to obtain
//! the dual model, analyzes the structure of the dual (bundle total spaces,
//! superpotentials from sections), and reproduces the Batyrev-Borisov,
//! Berglund-Hübsch, and Givental/Hori-Vafa mirror constructions as special
//! cases of that duality.
//!
//! Module layout:
//! * [`linalg`] — integer matrices, Smith normal form, cokernels, lifts.
//! * [`lp`] — exact rational simplex (Bland's rule).
//! * [`polyhedra`] — H-representation polyhedra, facets, vertices, polars.
//! * [`lineardata`] — linear C/Z-data, kopasetic checks, dualization.
//! * [`sigma`] — LG models from split bundles and sections.
//! * [`structure`] — block extraction, Y', the bundle criterion, sections.
//! * [`constructions`] — Batyrev-Borisov, Berglund-Hübsch, Givental/Hori-Vafa.
//! * [`json`] — interchange formats ("p/q" rationals, string integers).

pub mod constructions;
pub mod json;
pub mod linalg;
pub mod lineardata;
pub mod lp;
pub mod polyhedra;
pub mod sigma;
pub mod structure;

pub use linalg::{CokernelPresentation, IntMatrix, RatVector, SmithDecomposition};
pub use lineardata::{ComplexLift, KopaseticReport, LinearData, ToricLGModel};
pub use polyhedra::{PointSet, Polyhedron};
pub use sigma::{SectionSpec, SigmaInput, SplitBundleData, ToricVarietyData};

use num::BigRational;

/// Default cap on the ambient dimension for vertex enumeration.
///
/// Enumeration is exhaustive over n-subsets of inequalities, which blows up
/// binomially; everything this crate targets lives in dimension <= 3.
pub const DEFAULT_DIM_CAP: usize = 8;

static DIM_CAP: std::sync::OnceLock<usize> = std::sync::OnceLock::new();

/// The process-wide vertex-enumeration cap (defaults to
/// [`DEFAULT_DIM_CAP`]).
pub fn dim_cap() -> usize {
    *DIM_CAP.get_or_init(|| DEFAULT_DIM_CAP)
}

/// Override the cap once, before any polyhedron is built. Returns false if
/// it was already fixed.
pub fn set_dim_cap(cap: usize) -> bool {
    DIM_CAP.set(cap).is_ok()
}

/// Errors shared across the geometric and algebraic layers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,
    #[error("cokernel has torsion {0:?}; this pipeline requires torsion-free class groups")]
    TorsionPresent(Vec<num::BigInt>),
    #[error("torsion obstructs an exact lift of the requested class")]
    TorsionObstruction,
    #[error("origin is not in the interior: offset {index} is {offset}")]
    OriginNotInterior { index: usize, offset: BigRational },
    #[error("polyhedron is unbounded; operation requires a polytope")]
    Unbounded,
    #[error("polyhedron has empty interior")]
    EmptyInterior,
    #[error("ambient dimension {dim} exceeds the vertex-enumeration cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("point is not a member of the point set")]
    NotAMember,
    #[error("polyhedron is not a lattice polytope: vertex {0} is fractional")]
    NotLattice(String),
    #[error("dual linear data is not kopasetic: {0}")]
    DualNotKopasetic(String),
    #[error("block structure absent or violated: {0}")]
    BlockStructure(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal consistency violated (a theorem-level identity failed): {0}")]
    InternalConsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
