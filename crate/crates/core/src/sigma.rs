//! The sigma model / LG correspondence: a complete intersection cut out by
//! a section of a split bundle over a toric base becomes a superpotential on
//! the total space of the dual bundle.
//!
//! The A side of the resulting model is the block matrix
//! `[[div_Y, D_1..D_c], [0, Id]]`; the B side has one row `(nu, e_j)` per
//! section term `nu in P_{D_j}`. Generic sections take every lattice point
//! of every `P_{D_j}`.

use num::{BigInt, BigRational, One, Zero};

use crate::linalg::{self, CokernelPresentation, IntMatrix};
use crate::lineardata::{
    kopasetic_check, ComplexLift, KopaseticReport, LinearData, MonRowTag, SigmaBlocks,
    ToricLGModel,
};
use crate::polyhedra::Polyhedron;
use crate::{Error, Result};

/// A toric variety at the level of its linear data: ray names, the
/// character-to-divisor matrix, and its class group.
///
/// Torsion in the class group is recorded, not rejected: dual varieties can
/// honestly have torsion (the diamond has a Z/2), while pipelines that
/// interpret classes through lifts check `coker.require_torsion_free()`
/// themselves. `smooth` and `complete` are user assertions, not computed
/// facts; the operations that need them say so and trust the flags.
#[derive(Clone, Debug)]
pub struct ToricVarietyData {
    pub ray_names: Vec<String>,
    pub div: IntMatrix,
    pub coker: CokernelPresentation,
    pub smooth: bool,
    pub complete: bool,
}

impl ToricVarietyData {
    pub fn new(ray_names: Vec<String>, div: IntMatrix, smooth: bool, complete: bool) -> Result<Self> {
        if ray_names.len() != div.rows() {
            return Err(Error::ShapeMismatch(format!(
                "{} ray names for {} div rows",
                ray_names.len(),
                div.rows()
            )));
        }
        for i in 0..div.rows() {
            if !linalg::is_primitive(&div.row(i))? {
                return Err(Error::InvalidInput(format!(
                    "div row {} is not primitive",
                    i + 1
                )));
            }
        }
        let coker = linalg::cokernel(&div);
        Ok(ToricVarietyData { ray_names, div, coker, smooth, complete })
    }

    pub fn num_rays(&self) -> usize {
        self.div.rows()
    }

    pub fn dim(&self) -> usize {
        self.div.cols()
    }

    /// The polytope `P_D = { xi | div . xi + D >= 0 }` of a divisor vector.
    pub fn divisor_polytope(&self, d: &[BigInt]) -> Result<Polyhedron> {
        if d.len() != self.num_rays() {
            return Err(Error::ShapeMismatch(format!(
                "divisor vector of length {} for {} rays",
                d.len(),
                self.num_rays()
            )));
        }
        let offsets: Vec<BigRational> = d.iter().map(|x| BigRational::from(x.clone())).collect();
        Polyhedron::new(self.div.clone(), offsets)
    }
}

/// A split bundle `O(-D_1) + ... + O(-D_c)` over a toric base, described by
/// the divisor vectors `D_j`.
#[derive(Clone, Debug)]
pub struct SplitBundleData {
    pub base: ToricVarietyData,
    pub divisors: Vec<Vec<BigInt>>,
    pub summand_names: Vec<String>,
}

impl SplitBundleData {
    pub fn new(base: ToricVarietyData, divisors: Vec<Vec<BigInt>>) -> Result<Self> {
        base.coker.require_torsion_free()?;
        for (j, d) in divisors.iter().enumerate() {
            if d.len() != base.num_rays() {
                return Err(Error::ShapeMismatch(format!(
                    "divisor {} has length {}, base has {} rays",
                    j + 1,
                    d.len(),
                    base.num_rays()
                )));
            }
        }
        let summand_names = (1..=divisors.len()).map(|j| format!("sigma_{j}")).collect();
        Ok(SplitBundleData { base, divisors, summand_names })
    }

    pub fn c(&self) -> usize {
        self.divisors.len()
    }

    /// Divisor vectors as the columns of an r x c matrix.
    pub fn divisor_matrix(&self) -> IntMatrix {
        let r = self.base.num_rays();
        let c = self.c();
        let mut m = IntMatrix::zero(r, c);
        for (j, d) in self.divisors.iter().enumerate() {
            for i in 0..r {
                m.set(i, j, d[i].clone());
            }
        }
        m
    }
}

/// Which global section cuts out the complete intersection.
#[derive(Clone, Debug)]
pub enum SectionSpec {
    /// Every lattice point of every `P_{D_j}`, coefficient lift 0
    /// (coefficient 1 — the Givental-style choice).
    Generic,
    /// Explicit terms with their coefficient lifts.
    Explicit(Vec<ExplicitTerm>),
}

#[derive(Clone, Debug)]
pub struct ExplicitTerm {
    /// 0-based summand index.
    pub bundle_index: usize,
    pub exponent: Vec<BigInt>,
    pub coeff: ComplexLift,
}

/// Raw deserialized form of a sigma-model input file.
#[derive(Clone, Debug)]
pub struct SigmaInput {
    pub bundle: SplitBundleData,
    pub k_lift: Vec<ComplexLift>,
    pub section: SectionSpec,
    pub div_override: Option<IntMatrix>,
}

/// The character-to-divisor matrix of the bundle total space:
/// `[[div_Y | D_1 .. D_c], [0 | Id]]`, base rays first, then the summand
/// divisors; base characters first, then the fiber characters.
pub fn div_total_space(b: &SplitBundleData) -> IntMatrix {
    let r = b.base.num_rays();
    let n = b.base.dim();
    let c = b.c();
    let mut m = IntMatrix::zero(r + c, n + c);
    for i in 0..r {
        for k in 0..n {
            m.set(i, k, b.base.div.get(i, k).clone());
        }
        for (j, d) in b.divisors.iter().enumerate() {
            m.set(i, n + j, d[i].clone());
        }
    }
    for j in 0..c {
        m.set(r + j, n + j, BigInt::one());
    }
    m
}

/// Rows of the mon-side matrix for a section, with tags.
///
/// Generic ordering: summands ascending, lattice points of each `P_{D_j}`
/// ascending lexicographic, with all zero points grouped last (again by
/// summand). Explicit terms keep their input order within the same block
/// layout.
pub fn mon_for_section(
    b: &SplitBundleData,
    s: &SectionSpec,
) -> Result<(IntMatrix, Vec<MonRowTag>, Vec<ComplexLift>)> {
    let n = b.base.dim();
    let c = b.c();
    let mut nonzero: Vec<(MonRowTag, ComplexLift)> = Vec::new();
    let mut zero: Vec<(MonRowTag, ComplexLift)> = Vec::new();
    match s {
        SectionSpec::Generic => {
            for (j, d) in b.divisors.iter().enumerate() {
                let poly = b.base.divisor_polytope(d)?;
                let points = poly.lattice_points()?;
                for p in points {
                    let is_zero = p.iter().all(|x| x.is_zero());
                    let tag = MonRowTag { bundle_index: j, point: p, is_zero };
                    if is_zero {
                        zero.push((tag, ComplexLift::zero()));
                    } else {
                        nonzero.push((tag, ComplexLift::zero()));
                    }
                }
            }
        }
        SectionSpec::Explicit(terms) => {
            let mut seen = std::collections::BTreeSet::new();
            for t in terms {
                if t.bundle_index >= c {
                    return Err(Error::InvalidInput(format!(
                        "term references summand {} of {}",
                        t.bundle_index + 1,
                        c
                    )));
                }
                let poly = b.base.divisor_polytope(&b.divisors[t.bundle_index])?;
                let as_rat: Vec<BigRational> =
                    t.exponent.iter().map(|x| BigRational::from(x.clone())).collect();
                if !poly.contains(&as_rat)? {
                    return Err(Error::InvalidInput(format!(
                        "exponent {:?} lies outside the polytope of summand {}",
                        t.exponent,
                        t.bundle_index + 1
                    )));
                }
                if !seen.insert((t.bundle_index, t.exponent.clone())) {
                    return Err(Error::InvalidInput(format!(
                        "duplicate term {:?} on summand {}",
                        t.exponent,
                        t.bundle_index + 1
                    )));
                }
                let is_zero = t.exponent.iter().all(|x| x.is_zero());
                let tag = MonRowTag {
                    bundle_index: t.bundle_index,
                    point: t.exponent.clone(),
                    is_zero,
                };
                if is_zero {
                    zero.push((tag, t.coeff.clone()));
                } else {
                    nonzero.push((tag, t.coeff.clone()));
                }
            }
            nonzero.sort_by_key(|a| a.0.bundle_index);
            zero.sort_by_key(|a| a.0.bundle_index);
        }
    }
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    let mut tags = Vec::new();
    let mut coeffs = Vec::new();
    for (tag, coeff) in nonzero.into_iter().chain(zero) {
        let mut row = tag.point.clone();
        row.extend(std::iter::repeat_n(BigInt::zero(), c));
        row[n + tag.bundle_index] = BigInt::one();
        rows.push(row);
        tags.push(tag);
        coeffs.push(coeff);
    }
    let matrix = if rows.is_empty() {
        IntMatrix::zero(0, n + c)
    } else {
        IntMatrix::from_bigint_rows(&rows)?
    };
    Ok((matrix, tags, coeffs))
}

/// Assemble the LG model of a bundle-plus-section: the A side is the total
/// space's div matrix with the pulled-back class (zeros on fiber rows), the
/// B side is the section's term matrix with its coefficient lifts.
pub fn build_lg(b: &SplitBundleData, k_lift: &[ComplexLift], s: &SectionSpec) -> Result<ToricLGModel> {
    build_lg_inner(b, k_lift, s, None)
}

/// Same as [`build_lg`] but with an explicit total-space div matrix, for
/// bases presented in a non-standard lattice basis. The override must have
/// the block shape `[[*, *], [0, Id]]`; its top-left block replaces the
/// base div matrix and its top-right columns replace the divisor vectors.
pub fn build_lg_with_div_override(
    b: &SplitBundleData,
    override_div: &IntMatrix,
    k_lift: &[ComplexLift],
    s: &SectionSpec,
) -> Result<ToricLGModel> {
    build_lg_inner(b, k_lift, s, Some(override_div))
}

fn build_lg_inner(
    b: &SplitBundleData,
    k_lift: &[ComplexLift],
    s: &SectionSpec,
    override_div: Option<&IntMatrix>,
) -> Result<ToricLGModel> {
    let c = b.c();
    if c == 0 {
        return Err(Error::InvalidInput(
            "a bundle with zero summands does not define a superpotential".into(),
        ));
    }
    let effective = match override_div {
        None => b.clone(),
        Some(m) => apply_override(b, m)?,
    };
    let r = effective.base.num_rays();
    let n = effective.base.dim();
    if k_lift.len() != r {
        return Err(Error::ShapeMismatch(format!(
            "K lift has {} entries for {} base rays",
            k_lift.len(),
            r
        )));
    }
    let a_matrix = div_total_space(&effective);
    let mut a_lift = k_lift.to_vec();
    a_lift.extend(std::iter::repeat_n(ComplexLift::zero(), c));
    let a_side = LinearData::new(a_matrix, a_lift)?;
    a_side.coker().require_torsion_free()?;

    let (b_matrix, tags, coeffs) = mon_for_section(&effective, s)?;
    if b_matrix.rows() == 0 {
        return Err(Error::InvalidInput("the section has no terms".into()));
    }
    let b_side = LinearData::new(b_matrix, coeffs)?;

    let blocks = SigmaBlocks {
        base_cols: n,
        c,
        base_rows: r,
        base_div: effective.base.div.clone(),
        divisors: effective.divisor_matrix(),
        mon_tags: tags,
        mon_is_a_side: false,
        base_smooth: effective.base.smooth,
        base_complete: effective.base.complete,
    };
    ToricLGModel::new(a_side, b_side, Some(blocks))
}

fn apply_override(b: &SplitBundleData, m: &IntMatrix) -> Result<SplitBundleData> {
    let r = b.base.num_rays();
    let c = b.c();
    if m.rows() != r + c || m.cols() < c {
        return Err(Error::BlockStructure(format!(
            "override is {}x{}, expected {} rows",
            m.rows(),
            m.cols(),
            r + c
        )));
    }
    let n = m.cols() - c;
    for j in 0..c {
        for k in 0..m.cols() {
            let expected = if k == n + j { BigInt::one() } else { BigInt::zero() };
            if m.get(r + j, k) != &expected {
                return Err(Error::BlockStructure(
                    "override lower blocks are not [0 | Id]".into(),
                ));
            }
        }
    }
    let base_div = m.slice_cols(0, n).select_rows(&(0..r).collect::<Vec<_>>());
    let divisors: Vec<Vec<BigInt>> = (0..c)
        .map(|j| (0..r).map(|i| m.get(i, n + j).clone()).collect())
        .collect();
    let base = ToricVarietyData::new(
        b.base.ray_names.clone(),
        base_div,
        b.base.smooth,
        b.base.complete,
    )?;
    SplitBundleData::new(base, divisors)
}

/// Outcome of the existence question for the dual of a sigma-built model.
#[derive(Clone, Debug)]
pub enum DualExistence {
    /// The dual A side is kopasetic (guaranteed for positive codimension);
    /// the certifying report is returned.
    Holds(KopaseticReport),
    /// The model was not built from a bundle of positive rank.
    NotApplicable,
}

/// For sigma-built models with `c >= 1` the dual always exists; this runs
/// the actual check and returns the certificate.
pub fn dual_exists(model: &ToricLGModel) -> Result<DualExistence> {
    match model.blocks() {
        Some(blocks) if blocks.c >= 1 && !blocks.mon_is_a_side => {
            let report = kopasetic_check(model.b_side())?;
            Ok(DualExistence::Holds(report))
        }
        _ => Ok(DualExistence::NotApplicable),
    }
}

/// Witness for the restriction isomorphism between the class group of the
/// total space and that of the base: the map `(d, e) -> d - sum_j e_j D_j`
/// expressed as the matrix `[Id | -D]`.
pub fn chow_restriction_witness(b: &SplitBundleData) -> IntMatrix {
    let r = b.base.num_rays();
    let c = b.c();
    let mut w = IntMatrix::zero(r, r + c);
    for i in 0..r {
        w.set(i, i, BigInt::one());
        for (j, d) in b.divisors.iter().enumerate() {
            w.set(i, r + j, -d[i].clone());
        }
    }
    w
}
