//! Batyrev-Borisov: nef sub-partitions of the anticanonical divisor, the
//! dual partition data, and the end-to-end comparison with the LG duality.

use std::collections::BTreeSet;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::linalg::IntMatrix;
use crate::lineardata::{dualize, ComplexLift};
use crate::polyhedra::{hull_h_rep, vertex_test_with_ray, PointSet, Polyhedron};
use crate::sigma::{build_lg, SectionSpec, SplitBundleData, ToricVarietyData};
use crate::structure::{analyze_bundle, section_test, SectionOutcome};
use crate::{Error, Result};

/// A Fano base (given by a reflexive anticanonical polytope) together with
/// the divisor vectors of a candidate nef sub-partition.
#[derive(Clone, Debug)]
pub struct NefData {
    pub base: ToricVarietyData,
    pub parts: Vec<Vec<BigInt>>,
}

impl NefData {
    pub fn new(base: ToricVarietyData, parts: Vec<Vec<BigInt>>) -> Result<Self> {
        for (j, d) in parts.iter().enumerate() {
            if d.len() != base.num_rays() {
                return Err(Error::ShapeMismatch(format!(
                    "part {} has length {}, base has {} rays",
                    j + 1,
                    d.len(),
                    base.num_rays()
                )));
            }
        }
        Ok(NefData { base, parts })
    }

    /// The anticanonical polytope `P_{-kappa}` of the base.
    pub fn anticanonical_polytope(&self) -> Result<Polyhedron> {
        let ones = vec![BigInt::one(); self.base.num_rays()];
        self.base.divisor_polytope(&ones)
    }

    /// Rays (0-based row indices) carrying a positive coefficient in part j.
    pub fn support(&self, j: usize) -> Vec<usize> {
        self.parts[j]
            .iter()
            .enumerate()
            .filter(|(_, x)| x.is_positive())
            .map(|(i, _)| i)
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct NefVerdict {
    /// Each `D_j` is effective and nonzero, and `-kappa - sum D_j >= 0`.
    pub givental: bool,
    /// The classes satisfy `[sum D_j] = [-kappa]`.
    pub calabi_yau: bool,
    /// Every `C_j = conv(nonzero lattice points of P_{D_j})` is nonempty.
    pub parts_nonempty: bool,
    /// `vert(C) = union_j vert(C_j)`.
    pub vertex_condition: bool,
    pub reasons: Vec<String>,
}

impl NefVerdict {
    pub fn valid(&self) -> bool {
        self.givental && self.calabi_yau && self.parts_nonempty && self.vertex_condition
    }
}

fn nonzero_lattice_points(poly: &Polyhedron) -> Result<Vec<Vec<BigInt>>> {
    Ok(poly
        .lattice_points()?
        .into_iter()
        .filter(|p| p.iter().any(|x| !x.is_zero()))
        .collect())
}

fn int_points_to_rat(points: &[Vec<BigInt>]) -> Vec<Vec<BigRational>> {
    points
        .iter()
        .map(|p| p.iter().map(|x| BigRational::from(x.clone())).collect())
        .collect()
}

/// Vertices of the convex hull of an integer point set.
fn hull_vertices(points: &[Vec<BigInt>]) -> Result<Vec<Vec<BigInt>>> {
    let set = PointSet::new(int_points_to_rat(points), Vec::new())?;
    let mut out = Vec::new();
    for (rat, int) in set.points.iter().zip(points.iter()) {
        if vertex_test_with_ray(&set, rat)? {
            out.push(int.clone());
        }
    }
    Ok(out)
}

/// Check the Givental, Calabi-Yau, nonemptiness, and vertex conditions.
pub fn nef_subpartition_check(n: &NefData) -> Result<NefVerdict> {
    let r = n.base.num_rays();
    let mut reasons = Vec::new();

    let mut givental = true;
    let mut total = vec![BigInt::zero(); r];
    for (j, d) in n.parts.iter().enumerate() {
        if d.iter().any(|x| x.is_negative()) {
            givental = false;
            reasons.push(format!("part {} has a negative coefficient", j + 1));
        }
        if d.iter().all(|x| x.is_zero()) {
            givental = false;
            reasons.push(format!("part {} is zero", j + 1));
        }
        for (t, x) in total.iter_mut().zip(d.iter()) {
            *t += x;
        }
    }
    if total.iter().any(|x| x > &BigInt::one()) {
        givental = false;
        reasons.push("the parts exceed the anticanonical vector somewhere".into());
    }

    let anticanon = vec![BigInt::one(); r];
    let calabi_yau = crate::linalg::classes_equal(&n.base.coker, &total, &anticanon)?;
    if !calabi_yau {
        reasons.push("[sum D_j] differs from [-kappa]".into());
    }

    let mut parts_nonempty = true;
    let mut per_part_points: Vec<Vec<Vec<BigInt>>> = Vec::new();
    for (j, d) in n.parts.iter().enumerate() {
        let poly = n.base.divisor_polytope(d)?;
        let pts = nonzero_lattice_points(&poly)?;
        if pts.is_empty() {
            parts_nonempty = false;
            reasons.push(format!("P_D{} has no nonzero lattice point", j + 1));
        }
        per_part_points.push(pts);
    }

    let vertex_condition = if parts_nonempty {
        let mut union_points: Vec<Vec<BigInt>> = Vec::new();
        let mut seen = BTreeSet::new();
        for pts in &per_part_points {
            for p in pts {
                if seen.insert(p.clone()) {
                    union_points.push(p.clone());
                }
            }
        }
        let vert_c: BTreeSet<Vec<BigInt>> = hull_vertices(&union_points)?.into_iter().collect();
        let mut vert_parts: BTreeSet<Vec<BigInt>> = BTreeSet::new();
        for pts in &per_part_points {
            for v in hull_vertices(pts)? {
                vert_parts.insert(v);
            }
        }
        let ok = vert_c == vert_parts;
        if !ok {
            reasons.push("vert(C) differs from the union of the vert(C_j)".into());
        }
        ok
    } else {
        false
    };

    Ok(NefVerdict { givental, calabi_yau, parts_nonempty, vertex_condition, reasons })
}

/// The Kronecker condition on the support functions: `phi_i(e) = delta(i-j)`
/// for every ray normal `e` in part j, with `phi_i` evaluated by exact
/// minimization over the vertices of `P_{D_i}`.
pub fn phi_check(n: &NefData) -> Result<bool> {
    let anticanon = n.anticanonical_polytope()?;
    if !anticanon.is_reflexive()? {
        return Err(Error::InvalidInput("the base polytope is not reflexive".into()));
    }
    let c = n.parts.len();
    let mut part_vertices: Vec<Vec<Vec<BigRational>>> = Vec::new();
    for d in &n.parts {
        let poly = n.base.divisor_polytope(d)?;
        part_vertices.push(poly.vertices_and_rays()?.points);
    }
    for i in 0..c {
        for j in 0..c {
            for &ray in &n.support(j) {
                let normal = n.base.div.row(ray);
                // phi_i(normal) = -min over vertices of P_{D_i}.
                let mut min: Option<BigRational> = None;
                for v in &part_vertices[i] {
                    let val: BigRational = normal
                        .iter()
                        .zip(v.iter())
                        .map(|(a, b)| BigRational::from(a.clone()) * b)
                        .sum();
                    min = Some(match min {
                        None => val,
                        Some(m) => m.min(val),
                    });
                }
                let Some(min) = min else { return Ok(false) };
                let phi = -min;
                let expected = if i == j { BigRational::one() } else { BigRational::zero() };
                if phi != expected {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// The starred side of a nef sub-partition.
#[derive(Clone, Debug)]
pub struct BBDual {
    /// `Y*` with its parts `D*_j` (a `NefData` again, so the construction
    /// can be iterated).
    pub starred: NefData,
    /// `(P*)°  = conv(union nabla_j)` as an H-representation.
    pub pstar_polar: Polyhedron,
    /// `P* = ((P*)°)°`.
    pub pstar: Polyhedron,
    /// The dual partition: vertex sets `E*_j` of the `conv(nabla_j minus 0)`.
    pub estar: Vec<Vec<Vec<BigInt>>>,
}

/// Compute the dual nef partition: `nabla_j = P_{D_j}`,
/// `E*_j = vert(conv(nonzero lattice points of nabla_j))`,
/// `(P*)° = conv(union nabla_j)`, `P* = polar`, and parts on `Y*` assembled
/// from the `E*_j`.
pub fn bb_dual(n: &NefData) -> Result<BBDual> {
    let verdict = nef_subpartition_check(n)?;
    if !verdict.valid() {
        return Err(Error::InvalidInput(format!(
            "not a Calabi-Yau nef sub-partition: {}",
            verdict.reasons.join("; ")
        )));
    }
    let dim = n.base.dim();
    let mut estar: Vec<Vec<Vec<BigInt>>> = Vec::new();
    let mut all_points: Vec<Vec<BigInt>> = Vec::new();
    let mut seen = BTreeSet::new();
    for d in &n.parts {
        let poly = n.base.divisor_polytope(d)?;
        let pts = poly.lattice_points()?;
        let nonzero: Vec<Vec<BigInt>> =
            pts.iter().filter(|p| p.iter().any(|x| !x.is_zero())).cloned().collect();
        estar.push(hull_vertices(&nonzero)?);
        for p in pts {
            if seen.insert(p.clone()) {
                all_points.push(p);
            }
        }
    }
    let generator_set = PointSet::new(int_points_to_rat(&all_points), Vec::new())?;
    let pstar_polar = hull_h_rep(&generator_set, dim)?;
    if !pstar_polar.is_reflexive()? {
        return Err(Error::InternalConsistency(
            "the hull of the nabla_j is not reflexive, contradicting nef-partition duality".into(),
        ));
    }
    let pstar = crate::polyhedra::polar_of_point_set(&generator_set, dim)?;

    // Rays of Y* are the vertices of (P*)°; the facet rows of P* list them.
    let facets = pstar.facet_rows()?;
    let mut ray_rows: Vec<Vec<BigInt>> = Vec::new();
    for &i in &facets.facet_indices {
        // Offsets are 1 by reflexivity, so the row itself is the vertex.
        ray_rows.push(pstar.normals().row(i));
    }
    let names: Vec<String> = ray_rows.iter().map(|r| format!("nu{r:?}")).collect();
    let ystar = ToricVarietyData::new(
        names,
        IntMatrix::from_bigint_rows(&ray_rows)?,
        false,
        true,
    )?;

    // D*_j has coefficient 1 exactly on the rays lying in E*_j.
    let mut parts_star: Vec<Vec<BigInt>> = Vec::new();
    let mut covered: BTreeSet<usize> = BTreeSet::new();
    for e in &estar {
        let e_set: BTreeSet<Vec<BigInt>> = e.iter().cloned().collect();
        let mut dstar = vec![BigInt::zero(); ray_rows.len()];
        for (i, ray) in ray_rows.iter().enumerate() {
            if e_set.contains(ray) {
                dstar[i] = BigInt::one();
                covered.insert(i);
            }
        }
        let assigned = dstar.iter().filter(|x| x.is_one()).count();
        if assigned != e.len() {
            return Err(Error::InternalConsistency(
                "an E*_j vertex is not a ray of Y*, contradicting nef-partition duality".into(),
            ));
        }
        parts_star.push(dstar);
    }
    if covered.len() != ray_rows.len() {
        return Err(Error::InternalConsistency(
            "the E*_j do not cover the vertices of (P*)°".into(),
        ));
    }
    let starred = NefData::new(ystar, parts_star)?;
    Ok(BBDual { starred, pstar_polar, pstar, estar })
}

/// End-to-end comparison of the dual LG model with the starred data.
#[derive(Clone, Debug)]
pub struct BBPipelineReport {
    pub verdict: NefVerdict,
    pub dual_data: BBDual,
    pub yprime_matches_pstar: bool,
    pub pushed_divisors_match: bool,
    pub is_bundle: bool,
    pub dual_section_found: bool,
    pub bundle_report: crate::structure::BundleReport,
}

impl BBPipelineReport {
    pub fn all_checks_pass(&self) -> bool {
        self.yprime_matches_pstar
            && self.pushed_divisors_match
            && self.is_bundle
            && self.dual_section_found
    }
}

/// Build the sigma model with the anticanonical-style section (nonzero
/// terms get imaginary lift 1, zero terms lift 0), dualize, analyze, and
/// compare against [`bb_dual`].
pub fn bb_mirror_via_duality(n: &NefData, k_im: Option<&[BigRational]>) -> Result<BBPipelineReport> {
    let verdict = nef_subpartition_check(n)?;
    if !verdict.valid() {
        return Err(Error::InvalidInput(format!(
            "not a Calabi-Yau nef sub-partition: {}",
            verdict.reasons.join("; ")
        )));
    }
    let dual_data = bb_dual(n)?;

    let bundle = SplitBundleData::new(n.base.clone(), n.parts.clone())?;
    let default_k: Vec<BigRational> = vec![BigRational::one(); n.base.num_rays()];
    let k_im = k_im.unwrap_or(&default_k);
    let k_lift: Vec<ComplexLift> = k_im.iter().map(|x| ComplexLift::from_im(x.clone())).collect();
    let model = build_lg(&bundle, &k_lift, &SectionSpec::Generic)?;
    // The anticanonical-style coefficients.
    let blocks = model.blocks().expect("sigma-built model has blocks");
    let section_lift: Vec<ComplexLift> = blocks
        .mon_tags
        .iter()
        .map(|t| {
            if t.is_zero {
                ComplexLift::zero()
            } else {
                ComplexLift::from_im(BigRational::one())
            }
        })
        .collect();
    let model = model.with_b_lift(section_lift)?;

    let dual = dualize(&model)?.model;
    let dual_blocks = crate::structure::extract_blocks(&dual)?;
    let alpha: Vec<BigRational> = vec![BigRational::one(); dual_blocks.d_prime.rows()];
    let bundle_report = analyze_bundle(&dual, &alpha, model.blocks().expect("blocks"))?;

    // Y' polytope (with the pushed lift) must equal P* facet for facet.
    let yprime_poly = Polyhedron::new(
        bundle_report.yprime.variety.div.clone(),
        bundle_report.yprime.pushed_lift.clone(),
    )?;
    let yprime_matches_pstar =
        yprime_poly.canonical_facet_form()? == dual_data.pstar.canonical_facet_form()?
            && yprime_poly.is_reflexive()?;

    // k(D'_j) must equal D*_j after aligning the two ray orders.
    let pushed_divisors_match = divisors_match(
        &bundle_report.yprime.variety.div,
        &bundle_report.yprime.pushed_divisors,
        &dual_data.starred.base.div,
        &dual_data.starred.parts,
    );

    let dual_section = section_test(
        &bundle_report.yprime.variety.div,
        &bundle_report.yprime.pushed_divisors,
    )?;
    let dual_section_found = matches!(dual_section, SectionOutcome::Found(_));

    let is_bundle = bundle_report.is_bundle;
    Ok(BBPipelineReport {
        verdict,
        dual_data,
        yprime_matches_pstar,
        pushed_divisors_match,
        is_bundle,
        dual_section_found,
        bundle_report,
    })
}

/// Compare divisor vectors over two presentations of the same ray set.
fn divisors_match(
    rays_a: &IntMatrix,
    parts_a: &[Vec<BigInt>],
    rays_b: &IntMatrix,
    parts_b: &[Vec<BigInt>],
) -> bool {
    if rays_a.rows() != rays_b.rows() || parts_a.len() != parts_b.len() {
        return false;
    }
    // Map each ray of A to its position in B.
    let mut map = Vec::with_capacity(rays_a.rows());
    for i in 0..rays_a.rows() {
        let row = rays_a.row(i);
        let Some(pos) = (0..rays_b.rows()).find(|&k| rays_b.row(k) == row) else {
            return false;
        };
        map.push(pos);
    }
    for (da, db) in parts_a.iter().zip(parts_b.iter()) {
        for i in 0..map.len() {
            if da[i] != db[map[i]] {
                return false;
            }
        }
    }
    true
}
