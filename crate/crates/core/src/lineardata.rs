//! Linear C/Z-data and toric Landau-Ginzburg models.
//!
//! A `LinearData` is an integer matrix `C: Z^n -> Z^t` together with a lift
//! of a class in `coker(C)` with coefficients in `C/Z`: per row an exact
//! rational real part (normalized into `[0,1)`) and an exact rational
//! imaginary part. The pair `(div, K)` encodes a toric variety with a
//! complexified divisor class; the pair `(mon, L)` encodes a regular
//! function. A `ToricLGModel` is an ordered pair of these, and dualization
//! swaps them.

use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::linalg::{self, CokernelPresentation, IntMatrix};
use crate::polyhedra::{Polyhedron, RowFate};
use crate::{Error, Result};

/// One C/Z coefficient, stored as an exact lift.
///
/// The modeled coefficient is `exp(2 pi i (re + i im))`; only `im` enters
/// the geometry (it is the offset vector of the associated polyhedron) and
/// `re` is a phase. `re` is kept normalized to `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ComplexLift {
    re: BigRational,
    im: BigRational,
}

impl ComplexLift {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        ComplexLift { re: linalg::fract_mod_one(&re), im }
    }

    pub fn zero() -> Self {
        ComplexLift { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn from_im(im: BigRational) -> Self {
        ComplexLift { re: BigRational::zero(), im }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    /// `exp(2 pi i (re + i im))` as `(real, imag)` floats.
    pub fn coefficient_approx(&self) -> (f64, f64) {
        let re = rational_to_f64(&self.re);
        let im = rational_to_f64(&self.im);
        let radius = (-2.0 * std::f64::consts::PI * im).exp();
        let angle = 2.0 * std::f64::consts::PI * re;
        (radius * angle.cos(), radius * angle.sin())
    }
}

fn rational_to_f64(x: &BigRational) -> f64 {
    let num = x.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
    let den = x.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
    num / den
}

/// A torus element as exact coordinates on the source lattice: the shift
/// witness returned by [`LinearData::torus_shift_from`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPairShift {
    pub re: Vec<BigRational>,
    pub im: Vec<BigRational>,
}

/// Matrix plus class lift: the basic unit of data for both the geometry
/// side and the superpotential side.
#[derive(Clone, Debug)]
pub struct LinearData {
    matrix: IntMatrix,
    lift: Vec<ComplexLift>,
    coker: CokernelPresentation,
}

impl LinearData {
    pub fn new(matrix: IntMatrix, lift: Vec<ComplexLift>) -> Result<Self> {
        if lift.len() != matrix.rows() {
            return Err(Error::ShapeMismatch(format!(
                "lift has {} entries for a matrix with {} rows",
                lift.len(),
                matrix.rows()
            )));
        }
        let coker = linalg::cokernel(&matrix);
        Ok(LinearData { matrix, lift, coker })
    }

    pub fn from_im_parts(matrix: IntMatrix, im: &[BigRational]) -> Result<Self> {
        let lift = im.iter().map(|x| ComplexLift::from_im(x.clone())).collect();
        Self::new(matrix, lift)
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn lift(&self) -> &[ComplexLift] {
        &self.lift
    }

    pub fn coker(&self) -> &CokernelPresentation {
        &self.coker
    }

    pub fn im_parts(&self) -> Vec<BigRational> {
        self.lift.iter().map(|l| l.im().clone()).collect()
    }

    /// Replace the lift, keeping the matrix and cokernel.
    pub fn with_lift(&self, lift: Vec<ComplexLift>) -> Result<Self> {
        if lift.len() != self.matrix.rows() {
            return Err(Error::ShapeMismatch(format!(
                "lift has {} entries for a matrix with {} rows",
                lift.len(),
                self.matrix.rows()
            )));
        }
        Ok(LinearData { matrix: self.matrix.clone(), lift, coker: self.coker.clone() })
    }

    /// The polyhedral set `{ xi | matrix . xi + Im(lift) >= 0 }`.
    pub fn polytope(&self) -> Result<Polyhedron> {
        Polyhedron::new(self.matrix.clone(), self.im_parts())
    }

    /// One superpotential term per row: the coefficient lift paired with the
    /// exponent vector (the row, read as a character).
    pub fn superpotential_terms(&self) -> Vec<(ComplexLift, Vec<BigInt>)> {
        self.lift
            .iter()
            .cloned()
            .zip(self.matrix.row_slices().map(|r| r.to_vec()))
            .collect()
    }

    /// A torus element shifting `other` to this lift, when one exists: a
    /// solution `tau` (real and imaginary coordinate vectors on the source
    /// lattice) of `matrix . tau = lift - other`, the real part modulo 1.
    /// This makes the quotient by coordinate choices computable: two
    /// superpotentials present the same function exactly when a shift
    /// exists.
    pub fn torus_shift_from(&self, other: &[ComplexLift]) -> Result<Option<RatPairShift>> {
        if !self.lifts_same_class(other)? {
            return Ok(None);
        }
        let d_im: Vec<BigRational> = self
            .lift
            .iter()
            .zip(other.iter())
            .map(|(a, b)| a.im() - b.im())
            .collect();
        let tau_im = linalg::solve_rational(&self.matrix, &d_im)?
            .ok_or_else(|| Error::InternalConsistency("class-equal lifts must differ by an image".into()))?;
        // Real parts only need to match modulo 1: solve through the Smith
        // form, dividing the pivot coordinates.
        let d_re: Vec<BigRational> = self
            .lift
            .iter()
            .zip(other.iter())
            .map(|(a, b)| a.re() - b.re())
            .collect();
        let snf = self.coker.smith();
        let rank = snf.rank();
        let u_d: Vec<BigRational> = snf
            .u
            .mul_rat_vec(&d_re)?
            .into_iter()
            .collect();
        let mut w = vec![BigRational::zero(); self.matrix.cols()];
        for i in 0..rank {
            let f = BigRational::from(snf.invariant_factors[i].clone());
            w[i] = &u_d[i] / f;
        }
        let tau_re = snf.v.mul_rat_vec(&w)?;
        Ok(Some(RatPairShift { re: tau_re, im: tau_im }))
    }

    /// Do two lifts present the same class, modulo the image of the matrix
    /// and integer shifts of the real part?
    pub fn lifts_same_class(&self, other: &[ComplexLift]) -> Result<bool> {
        if other.len() != self.lift.len() {
            return Err(Error::ShapeMismatch("lift length mismatch".into()));
        }
        self.coker.require_torsion_free()?;
        let d_re: Vec<BigRational> = self
            .lift
            .iter()
            .zip(other.iter())
            .map(|(a, b)| a.re() - b.re())
            .collect();
        let d_im: Vec<BigRational> = self
            .lift
            .iter()
            .zip(other.iter())
            .map(|(a, b)| a.im() - b.im())
            .collect();
        let cls_im = self.coker.class_of_rat(&d_im)?;
        if cls_im.iter().any(|x| !x.is_zero()) {
            return Ok(false);
        }
        let cls_re = self.coker.class_of_rat(&d_re)?;
        Ok(cls_re.iter().all(|x| x.denom().is_one()))
    }
}

/// How a kopasetic check failed, when it did.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KopaseticFailure {
    /// The polyhedral set has empty interior. `feasible` distinguishes a
    /// degenerate (nonempty, lower-dimensional) set from an empty one.
    EmptyInterior { feasible: bool },
    /// Facet-defining rows that are not primitive, so no row-selection map
    /// onto a character-to-divisor matrix exists.
    NonPrimitiveFacets(Vec<usize>),
}

/// Result of the kopasetic admissibility check on one side of a model.
#[derive(Clone, Debug)]
pub struct KopaseticReport {
    pub interior_witness: Option<Vec<BigRational>>,
    /// 0-based facet row indices, ascending.
    pub facet_indices: Vec<usize>,
    /// Per original row: `Some(surviving row)` for facets and their exact
    /// duplicates, `None` for rows the selection map sends to zero.
    pub k_row_map: Vec<Option<usize>>,
    pub primitivity_failures: Vec<usize>,
    pub failure: Option<KopaseticFailure>,
    pub verdict: bool,
}

impl KopaseticReport {
    /// Push a per-row vector forward along the row selection: the surviving
    /// rows' entries, in facet order.
    pub fn push_rows<T: Clone>(&self, per_row: &[T]) -> Vec<T> {
        self.facet_indices.iter().map(|&i| per_row[i].clone()).collect()
    }
}

impl fmt::Display for KopaseticReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.verdict {
            write!(f, "kopasetic with {} facet rows", self.facet_indices.len())
        } else {
            match &self.failure {
                Some(KopaseticFailure::EmptyInterior { feasible: true }) => {
                    write!(f, "degenerate: the set is nonempty but has empty interior")
                }
                Some(KopaseticFailure::EmptyInterior { feasible: false }) => {
                    write!(f, "the polyhedral set is empty")
                }
                Some(KopaseticFailure::NonPrimitiveFacets(rows)) => {
                    write!(f, "facet rows {rows:?} are not primitive")
                }
                None => write!(f, "failed"),
            }
        }
    }
}

/// Admissibility of linear data: the set has nonempty interior and the
/// irredundant inequality rows are primitive, so selecting them yields an
/// honest character-to-divisor matrix. Exact duplicates map to the lowest
/// surviving index; every other redundant row maps to zero.
pub fn kopasetic_check(data: &LinearData) -> Result<KopaseticReport> {
    let poly = data.polytope()?;
    let rows = data.matrix().rows();
    match poly.interior_point() {
        None => Ok(KopaseticReport {
            interior_witness: None,
            facet_indices: Vec::new(),
            k_row_map: vec![None; rows],
            primitivity_failures: Vec::new(),
            failure: Some(KopaseticFailure::EmptyInterior { feasible: poly.is_feasible() }),
            verdict: false,
        }),
        Some(witness) => {
            let facets = poly.facet_rows()?;
            let mut primitivity_failures = Vec::new();
            for &i in &facets.facet_indices {
                if !linalg::is_primitive(&data.matrix().row(i))? {
                    primitivity_failures.push(i);
                }
            }
            let mut k_row_map: Vec<Option<usize>> = facets
                .row_map
                .iter()
                .map(|fate| match fate {
                    RowFate::Facet => None, // patched below
                    RowFate::DuplicateOf(s) => Some(*s),
                    RowFate::Redundant => None,
                })
                .collect();
            for &i in &facets.facet_indices {
                k_row_map[i] = Some(i);
            }
            // Duplicates of non-facet survivors fall to zero.
            for m in k_row_map.iter_mut() {
                if let Some(s) = *m {
                    if !facets.facet_indices.contains(&s) {
                        *m = None;
                    }
                }
            }
            let verdict = primitivity_failures.is_empty();
            let failure = if verdict {
                None
            } else {
                Some(KopaseticFailure::NonPrimitiveFacets(primitivity_failures.clone()))
            };
            Ok(KopaseticReport {
                interior_witness: Some(witness.clone()),
                facet_indices: facets.facet_indices.clone(),
                k_row_map,
                primitivity_failures,
                failure,
                verdict,
            })
        }
    }
}

/// Entrywise nonnegativity of `A . B^T`, the regularity criterion for the
/// superpotential: entry (j, i) < 0 means term i has a pole along divisor j.
#[derive(Clone, Debug)]
pub struct RegularityReport {
    pub ok: bool,
    /// `(divisor row, term row, value)` for each negative entry.
    pub offending: Vec<(usize, usize, BigInt)>,
}

pub fn regularity_check(a: &IntMatrix, b: &IntMatrix) -> Result<RegularityReport> {
    if a.cols() != b.cols() {
        return Err(Error::ShapeMismatch(format!(
            "A has {} columns, B has {}",
            a.cols(),
            b.cols()
        )));
    }
    let product = a.mul(&b.transpose())?;
    let mut offending = Vec::new();
    for i in 0..product.rows() {
        for j in 0..product.cols() {
            if product.get(i, j).is_negative() {
                offending.push((i, j, product.get(i, j).clone()));
            }
        }
    }
    Ok(RegularityReport { ok: offending.is_empty(), offending })
}

/// Is the character `xi` regular on the variety with the given div matrix?
pub fn monomial_regular(div: &IntMatrix, xi: &[BigInt]) -> Result<bool> {
    let vals = div.mul_vec(xi)?;
    Ok(vals.iter().all(|v| !v.is_negative()))
}

/// The canonical anticanonical representative: one of every boundary divisor.
pub fn anticanonical(num_rays: usize) -> Vec<BigInt> {
    vec![BigInt::from(1); num_rays]
}

/// Tag for one row of a mon-side matrix built from a split bundle: which
/// summand it belongs to, which lattice point, and whether it is the zero
/// point of that summand's polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonRowTag {
    pub bundle_index: usize,
    pub point: Vec<BigInt>,
    pub is_zero: bool,
}

/// Block decomposition metadata carried by sigma-built models: how the two
/// matrices split into base and fiber parts.
#[derive(Clone, Debug)]
pub struct SigmaBlocks {
    /// Rank of the base character lattice.
    pub base_cols: usize,
    /// Number of bundle summands.
    pub c: usize,
    /// Number of base boundary divisors (rows of the base div matrix).
    pub base_rows: usize,
    /// The base character-to-divisor matrix (base_rows x base_cols).
    pub base_div: IntMatrix,
    /// Divisor vectors as columns (base_rows x c).
    pub divisors: IntMatrix,
    /// One tag per row of the mon-side matrix.
    pub mon_tags: Vec<MonRowTag>,
    /// False on a sigma-built model (mon is the B side); flipped by
    /// dualization.
    pub mon_is_a_side: bool,
    /// User-asserted flags copied from the base variety.
    pub base_smooth: bool,
    pub base_complete: bool,
}

/// An ordered pair of linear data: `(A, K)` the geometry side and `(B, L)`
/// the superpotential side, plus optional block metadata.
#[derive(Clone, Debug)]
pub struct ToricLGModel {
    a_side: LinearData,
    b_side: LinearData,
    blocks: Option<SigmaBlocks>,
}

impl ToricLGModel {
    pub fn new(a_side: LinearData, b_side: LinearData, blocks: Option<SigmaBlocks>) -> Result<Self> {
        if a_side.matrix().cols() != b_side.matrix().cols() {
            return Err(Error::ShapeMismatch(format!(
                "A side has {} columns, B side has {}; the lattices M and N must have equal rank",
                a_side.matrix().cols(),
                b_side.matrix().cols()
            )));
        }
        Ok(ToricLGModel { a_side, b_side, blocks })
    }

    pub fn a_side(&self) -> &LinearData {
        &self.a_side
    }

    pub fn b_side(&self) -> &LinearData {
        &self.b_side
    }

    pub fn blocks(&self) -> Option<&SigmaBlocks> {
        self.blocks.as_ref()
    }

    /// Replace the B-side lift (the superpotential class).
    pub fn with_b_lift(&self, lift: Vec<ComplexLift>) -> Result<Self> {
        Ok(ToricLGModel {
            a_side: self.a_side.clone(),
            b_side: self.b_side.with_lift(lift)?,
            blocks: self.blocks.clone(),
        })
    }
}

/// Both halves of the pair condition: the A side is kopasetic and the
/// product `A . B^T` is entrywise nonnegative.
pub fn pair_kopasetic(model: &ToricLGModel) -> Result<bool> {
    let a = kopasetic_check(model.a_side())?;
    if !a.verdict {
        return Ok(false);
    }
    let reg = regularity_check(model.a_side().matrix(), model.b_side().matrix())?;
    Ok(reg.ok)
}

/// A dual model together with the row-selection map it was certified by and
/// the pushed class `k(K')` on the surviving rows.
#[derive(Clone, Debug)]
pub struct Dualized {
    pub model: ToricLGModel,
    pub k_report: KopaseticReport,
    pub pushed_lift: Vec<ComplexLift>,
}

/// Swap the two sides. The new A side (the old B side) must be kopasetic
/// for the dual to define a variety; regularity of the dual is automatic
/// because `A' . B'^T = (A . B^T)^T`.
pub fn dualize(model: &ToricLGModel) -> Result<Dualized> {
    let report = kopasetic_check(model.b_side())?;
    if !report.verdict {
        return Err(Error::DualNotKopasetic(report.to_string()));
    }
    let pushed_lift = report.push_rows(model.b_side().lift());
    let blocks = model.blocks().map(|b| {
        let mut flipped = b.clone();
        flipped.mon_is_a_side = !flipped.mon_is_a_side;
        flipped
    });
    let dual = ToricLGModel::new(model.b_side().clone(), model.a_side().clone(), blocks)?;
    Ok(Dualized { model: dual, k_report: report, pushed_lift })
}
