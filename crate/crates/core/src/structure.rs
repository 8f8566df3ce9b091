//! Structure of the dual model: block extraction, the base variety Y', the
//! candidate bundle total space E', the vertex criterion deciding whether
//! the dual actually is a bundle, and the section test for the dual
//! superpotential.

use std::collections::BTreeSet;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::linalg::IntMatrix;
use crate::lineardata::{
    dualize, kopasetic_check, ComplexLift, KopaseticReport, LinearData, MonRowTag, SigmaBlocks,
    ToricLGModel,
};
use crate::polyhedra::{vertex_test_with_ray, PointSet, Polyhedron};
use crate::sigma::ToricVarietyData;
use crate::{Error, Result};

/// The dual A-side split into its blocks: `A' = [[d', D'], [0, Id]]`.
#[derive(Clone, Debug)]
pub struct DualBlocks {
    /// Rows of `d'`: one per nonzero section term, base columns only.
    pub d_prime: IntMatrix,
    /// The matching rows of `D'` (fiber columns, one column per summand).
    pub d_prime_divisors: IntMatrix,
    /// Row indices (into the dual A-side matrix) of the nonzero terms.
    pub xi_cross_rows: Vec<usize>,
    /// Tags of the nonzero terms, parallel to `xi_cross_rows`.
    pub xi_cross_tags: Vec<MonRowTag>,
    /// Row index of the zero term of each summand.
    pub zero_rows: Vec<usize>,
    pub base_cols: usize,
    pub c: usize,
}

/// Split the dual A-side into `[[d' | D'], [0 | Id]]` and verify the lower
/// blocks literally hold.
pub fn extract_blocks(dual: &ToricLGModel) -> Result<DualBlocks> {
    let blocks = dual
        .blocks()
        .ok_or_else(|| Error::BlockStructure("model carries no block metadata".into()))?;
    if !blocks.mon_is_a_side {
        return Err(Error::BlockStructure(
            "the A side is not the section-term matrix; dualize a sigma-built model first".into(),
        ));
    }
    let a = dual.a_side().matrix();
    let n = blocks.base_cols;
    let c = blocks.c;
    if a.cols() != n + c || blocks.mon_tags.len() != a.rows() {
        return Err(Error::BlockStructure("block metadata does not match the matrix".into()));
    }
    let mut xi_cross_rows = Vec::new();
    let mut xi_cross_tags = Vec::new();
    let mut zero_of: Vec<Option<usize>> = vec![None; c];
    for (i, tag) in blocks.mon_tags.iter().enumerate() {
        // Fiber part must be the summand's standard vector.
        for j in 0..c {
            let expected = if j == tag.bundle_index { BigInt::one() } else { BigInt::zero() };
            if a.get(i, n + j) != &expected {
                return Err(Error::BlockStructure(format!(
                    "row {} does not carry the standard fiber vector of summand {}",
                    i + 1,
                    tag.bundle_index + 1
                )));
            }
        }
        let base_part: Vec<BigInt> = (0..n).map(|k| a.get(i, k).clone()).collect();
        if tag.is_zero {
            if base_part.iter().any(|x| !x.is_zero()) {
                return Err(Error::BlockStructure(format!(
                    "row {} is tagged as a zero term but has nonzero base part",
                    i + 1
                )));
            }
            if zero_of[tag.bundle_index].replace(i).is_some() {
                return Err(Error::BlockStructure(format!(
                    "summand {} has more than one zero term",
                    tag.bundle_index + 1
                )));
            }
        } else {
            if base_part != tag.point {
                return Err(Error::BlockStructure(format!(
                    "row {} disagrees with its tag",
                    i + 1
                )));
            }
            xi_cross_rows.push(i);
            xi_cross_tags.push(tag.clone());
        }
    }
    let mut zero_rows = Vec::with_capacity(c);
    for (j, z) in zero_of.into_iter().enumerate() {
        zero_rows.push(z.ok_or_else(|| {
            Error::BlockStructure(format!("summand {} has no zero term (no identity block)", j + 1))
        })?);
    }
    let d_prime = a.slice_cols(0, n).select_rows(&xi_cross_rows);
    let d_prime_divisors = a.slice_cols(n, n + c).select_rows(&xi_cross_rows);
    Ok(DualBlocks {
        d_prime,
        d_prime_divisors,
        xi_cross_rows,
        xi_cross_tags,
        zero_rows,
        base_cols: n,
        c,
    })
}

/// Re-lift the dual class into the `(alpha', 0)` form: the identity block
/// lets the zero-term offsets be absorbed, shifting each nonzero term's
/// offset by its summand's zero-term offset. Returns the `alpha'` vector
/// over the nonzero terms.
pub fn normalized_alpha_prime(dual: &ToricLGModel, blocks: &DualBlocks) -> Vec<BigRational> {
    let im = dual.a_side().im_parts();
    blocks
        .xi_cross_rows
        .iter()
        .zip(blocks.xi_cross_tags.iter())
        .map(|(&row, tag)| &im[row] - &im[blocks.zero_rows[tag.bundle_index]])
        .collect()
}

/// A strictly positive lift whose polyhedral set has `0` interior: the
/// all-ones lift works whenever anything does, since every inequality then
/// has slack 1 at the origin.
pub fn suggest_kopasetic_lift(d_prime: &IntMatrix) -> Option<Vec<BigRational>> {
    let ones = vec![BigRational::one(); d_prime.rows()];
    let poly = Polyhedron::new(d_prime.clone(), ones.clone()).ok()?;
    poly.interior_point()?;
    Some(ones)
}

/// The base of the candidate bundle: `Y' = X(d', alpha')`.
#[derive(Clone, Debug)]
pub struct YPrime {
    pub variety: ToricVarietyData,
    /// Kopasetic certificate of `(d', alpha')`; its row selection is `k_Y'`.
    pub k_report: KopaseticReport,
    /// `k(D'_j)` for each summand: divisor vectors on Y'.
    pub pushed_divisors: Vec<Vec<BigInt>>,
    /// `k(alpha')`: the pushed lift.
    pub pushed_lift: Vec<BigRational>,
}

pub fn build_yprime(blocks: &DualBlocks, alpha_prime: &[BigRational]) -> Result<YPrime> {
    if alpha_prime.len() != blocks.d_prime.rows() {
        return Err(Error::ShapeMismatch(format!(
            "alpha' has {} entries for {} nonzero terms",
            alpha_prime.len(),
            blocks.d_prime.rows()
        )));
    }
    let data = LinearData::from_im_parts(blocks.d_prime.clone(), alpha_prime)?;
    let report = kopasetic_check(&data)?;
    if !report.verdict {
        return Err(Error::DualNotKopasetic(report.to_string()));
    }
    let div = blocks.d_prime.select_rows(&report.facet_indices);
    let names: Vec<String> = report
        .facet_indices
        .iter()
        .map(|&i| {
            let t = &blocks.xi_cross_tags[i];
            format!("nu{:?}_sigma{}", t.point, t.bundle_index + 1)
        })
        .collect();
    let variety = ToricVarietyData::new(names, div, false, false)?;
    let pushed_divisors = (0..blocks.c)
        .map(|j| {
            report
                .facet_indices
                .iter()
                .map(|&i| blocks.d_prime_divisors.get(i, j).clone())
                .collect()
        })
        .collect();
    let pushed_lift = report
        .facet_indices
        .iter()
        .map(|&i| alpha_prime[i].clone())
        .collect();
    Ok(YPrime { variety, k_report: report, pushed_divisors, pushed_lift })
}

/// The scaled generator hull of one summand: points `(nu, 1)/alpha` with
/// the fiber ray, its vertices, and the nonzero vertices.
#[derive(Clone, Debug)]
pub struct VjSet {
    pub bundle_index: usize,
    pub generators: PointSet,
    /// Nonzero vertices: `(tag index into xi_cross, scaled point)`.
    pub v_cross: Vec<(usize, Vec<BigRational>)>,
}

/// Scaled vertex data per summand. Requires `alpha' > 0` strictly; with
/// zero entries the scaling is undefined and the facet-level path below is
/// the total characterization.
pub fn compute_vj(blocks: &DualBlocks, alpha_prime: &[BigRational]) -> Result<Vec<VjSet>> {
    if alpha_prime.len() != blocks.d_prime.rows() {
        return Err(Error::ShapeMismatch("alpha' length mismatch".into()));
    }
    if let Some(bad) = alpha_prime.iter().position(|a| !a.is_positive()) {
        return Err(Error::InvalidInput(format!(
            "alpha'[{}] = {} is not strictly positive; the scaled-vertex path needs alpha' > 0",
            bad + 1,
            alpha_prime[bad]
        )));
    }
    let n = blocks.base_cols;
    let mut out = Vec::new();
    for j in 0..blocks.c {
        let mut points: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); n + 1]];
        let mut owners: Vec<Option<usize>> = vec![None];
        for (idx, tag) in blocks.xi_cross_tags.iter().enumerate() {
            if tag.bundle_index != j {
                continue;
            }
            let alpha = &alpha_prime[idx];
            let mut p: Vec<BigRational> = tag
                .point
                .iter()
                .map(|x| BigRational::from(x.clone()) / alpha)
                .collect();
            p.push(BigRational::one() / alpha);
            points.push(p);
            owners.push(Some(idx));
        }
        let mut ray = vec![BigInt::zero(); n + 1];
        ray[n] = BigInt::one();
        // Scaled points can coincide; keep the owner list aligned with the
        // deduplicated set.
        let set = PointSet::new(points.clone(), vec![ray])?;
        let mut v_cross = Vec::new();
        for p in &set.points {
            if p.iter().all(|x| x.is_zero()) {
                continue;
            }
            if vertex_test_with_ray(&set, p)? {
                let owner = points
                    .iter()
                    .position(|q| q == p)
                    .and_then(|i| owners[i]);
                if let Some(idx) = owner {
                    v_cross.push((idx, p.clone()));
                }
            }
        }
        out.push(VjSet { bundle_index: j, generators: set, v_cross });
    }
    Ok(out)
}

/// Did the superpotential of the dual come from a global section?
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SectionOutcome {
    /// Witness: one lattice point per summand with
    /// `sum_j (D_j + div(xi_j)) = all-ones`.
    Found(Vec<Vec<BigInt>>),
    /// Exhaustively absent.
    Absent,
    /// The search hit the tuple cap before deciding.
    Truncated,
}

const SECTION_SEARCH_CAP: u64 = 10_000_000;

/// Search for effective representatives summing to the anticanonical
/// vector: tuples `(xi_1..xi_c)` with `xi_j` a lattice point of `P_{D_j}`
/// and `sum_j (D_j + div(xi_j)) = (1,...,1)`.
pub fn section_test(base_div: &IntMatrix, divisors: &[Vec<BigInt>]) -> Result<SectionOutcome> {
    let r = base_div.rows();
    let c = divisors.len();
    let mut candidates: Vec<Vec<Vec<BigInt>>> = Vec::with_capacity(c);
    for d in divisors {
        let offsets: Vec<BigRational> = d.iter().map(|x| BigRational::from(x.clone())).collect();
        let poly = Polyhedron::new(base_div.clone(), offsets)?;
        candidates.push(poly.lattice_points()?);
    }
    // Per-summand effective contributions D_j + div(xi).
    let mut contribs: Vec<Vec<Vec<BigInt>>> = Vec::with_capacity(c);
    for (j, points) in candidates.iter().enumerate() {
        let mut list = Vec::with_capacity(points.len());
        for p in points {
            let dv = base_div.mul_vec(p)?;
            let eff: Vec<BigInt> = dv.iter().zip(divisors[j].iter()).map(|(a, b)| a + b).collect();
            list.push(eff);
        }
        contribs.push(list);
    }
    let target = vec![BigInt::one(); r];
    let mut visited: u64 = 0;
    let mut stack_choice: Vec<usize> = Vec::new();

    fn dfs(
        level: usize,
        acc: &[BigInt],
        contribs: &[Vec<Vec<BigInt>>],
        candidates: &[Vec<Vec<BigInt>>],
        target: &[BigInt],
        visited: &mut u64,
        choice: &mut Vec<usize>,
    ) -> Option<std::result::Result<Vec<usize>, ()>> {
        *visited += 1;
        if *visited > SECTION_SEARCH_CAP {
            return Some(Err(()));
        }
        if level == contribs.len() {
            return if acc == target { Some(Ok(choice.clone())) } else { None };
        }
        for (i, eff) in contribs[level].iter().enumerate() {
            let next: Vec<BigInt> = acc.iter().zip(eff.iter()).map(|(a, b)| a + b).collect();
            // Contributions are entrywise nonnegative, so overshoot prunes.
            if next.iter().zip(target.iter()).any(|(v, t)| v > t) {
                continue;
            }
            choice.push(i);
            match dfs(level + 1, &next, contribs, candidates, target, visited, choice) {
                Some(res) => return Some(res),
                None => {
                    choice.pop();
                }
            }
        }
        None
    }

    let zero_acc = vec![BigInt::zero(); r];
    match dfs(
        0,
        &zero_acc,
        &contribs,
        &candidates,
        &target,
        &mut visited,
        &mut stack_choice,
    ) {
        Some(Ok(choice)) => {
            let witness = choice
                .iter()
                .enumerate()
                .map(|(j, &i)| candidates[j][i].clone())
                .collect();
            Ok(SectionOutcome::Found(witness))
        }
        Some(Err(())) => Ok(SectionOutcome::Truncated),
        None => Ok(SectionOutcome::Absent),
    }
}

/// Section test for a sigma-built model, read off its block metadata.
pub fn section_test_model(model: &ToricLGModel) -> Result<SectionOutcome> {
    let blocks = model
        .blocks()
        .ok_or_else(|| Error::BlockStructure("model carries no block metadata".into()))?;
    let divisors: Vec<Vec<BigInt>> = (0..blocks.c).map(|j| blocks.divisors.column(j)).collect();
    section_test(&blocks.base_div, &divisors)
}

/// Everything the bundle question produces in one place.
#[derive(Clone, Debug)]
pub struct BundleReport {
    pub yprime: YPrime,
    /// Scaled vertex data, when `alpha' > 0` strictly.
    pub vj: Option<Vec<VjSet>>,
    pub is_bundle: bool,
    /// Section terms whose row is a facet of the X' polytope but not of Y':
    /// they partially compactify E'.
    pub failing_elements: Vec<MonRowTag>,
    /// Facet-set mismatches in the directions the theory says cannot occur;
    /// nonempty only on inputs outside the lemma's hypotheses.
    pub anomalies: Vec<String>,
    /// Both candidate div matrices have trivial anticanonical class: the
    /// all-ones vector lies in their integer column span.
    pub local_calabi_yau_xprime: bool,
    pub local_calabi_yau_eprime: bool,
    pub section: SectionOutcome,
    pub section_witness: Option<Vec<Vec<BigInt>>>,
}

/// Is the all-ones vector in the integer column span of `m`? Decided
/// through the cokernel: the class of the anticanonical vector must vanish,
/// torsion included.
fn anticanonical_class_trivial(m: &IntMatrix) -> Result<bool> {
    let coker = crate::linalg::cokernel(m);
    let ones = vec![BigInt::one(); m.rows()];
    let zero = vec![BigInt::zero(); m.rows()];
    crate::linalg::classes_equal(&coker, &ones, &zero)
}

/// Decide `X' = E'` for the dual model and assemble the full report.
///
/// `alpha_prime` is the lift of `Im(K')` over the nonzero terms; zero
/// entries are allowed (the facet-level comparison is total), and when all
/// entries are strictly positive the scaled vertex criterion is also run
/// and cross-checked row by row.
pub fn analyze_bundle(
    dual: &ToricLGModel,
    alpha_prime: &[BigRational],
    original_blocks: &SigmaBlocks,
) -> Result<BundleReport> {
    let blocks = extract_blocks(dual)?;
    let yprime = build_yprime(&blocks, alpha_prime)?;

    // Facet set of the X' polytope, with the lift in the (alpha', 0) form.
    let mut full_im = vec![BigRational::zero(); dual.a_side().matrix().rows()];
    for (pos, &row) in blocks.xi_cross_rows.iter().enumerate() {
        full_im[row] = alpha_prime[pos].clone();
    }
    let xprime_data = LinearData::from_im_parts(dual.a_side().matrix().clone(), &full_im)?;
    let xprime_report = kopasetic_check(&xprime_data)?;
    if !xprime_report.verdict {
        return Err(Error::DualNotKopasetic(xprime_report.to_string()));
    }
    let xprime_facets: BTreeSet<usize> = xprime_report.facet_indices.iter().copied().collect();
    let yprime_facets: BTreeSet<usize> = yprime.k_report.facet_indices.iter().copied().collect();

    let mut failing_elements = Vec::new();
    let mut anomalies = Vec::new();
    for (pos, &row) in blocks.xi_cross_rows.iter().enumerate() {
        let in_x = xprime_facets.contains(&row);
        let in_y = yprime_facets.contains(&pos);
        if in_x && !in_y {
            failing_elements.push(blocks.xi_cross_tags[pos].clone());
        } else if in_y && !in_x {
            anomalies.push(format!(
                "row {} defines a facet of Y' but not of X'",
                row + 1
            ));
        }
    }
    for &z in &blocks.zero_rows {
        if !xprime_facets.contains(&z) {
            anomalies.push(format!("zero-term row {} is not a facet of X'", z + 1));
        }
    }
    let is_bundle = failing_elements.is_empty() && anomalies.is_empty();

    // Scaled-vertex path when available, cross-checked against the facet
    // path (the row-of-Y' correspondence).
    let vj = if alpha_prime.iter().all(|a| a.is_positive()) {
        let vj = compute_vj(&blocks, alpha_prime)?;
        let mut q_points: Vec<Vec<BigRational>> =
            vec![vec![BigRational::zero(); blocks.base_cols]];
        for set in &vj {
            for (_, scaled) in &set.v_cross {
                q_points.push(scaled[..blocks.base_cols].to_vec());
            }
        }
        let q = PointSet::new(q_points, Vec::new())?;
        let mut vertex_rows: BTreeSet<usize> = BTreeSet::new();
        for set in &vj {
            for (idx, scaled) in &set.v_cross {
                let projected = scaled[..blocks.base_cols].to_vec();
                if vertex_test_with_ray(&q, &projected)? {
                    vertex_rows.insert(*idx);
                }
            }
        }
        // Row-of-Y': nu is a facet row of (d', alpha') iff its projection
        // is a nonzero vertex of Q. Compare as normalized inequalities to
        // absorb proportional duplicates.
        let facet_classes: BTreeSet<Vec<BigRational>> = yprime_facets
            .iter()
            .map(|&pos| scaled_direction(&blocks.xi_cross_tags[pos].point, &alpha_prime[pos]))
            .collect();
        let vertex_classes: BTreeSet<Vec<BigRational>> = vertex_rows
            .iter()
            .map(|&pos| scaled_direction(&blocks.xi_cross_tags[pos].point, &alpha_prime[pos]))
            .collect();
        if facet_classes != vertex_classes {
            return Err(Error::InternalConsistency(
                "facet rows of (d', alpha') disagree with the nonzero vertices of Q".into(),
            ));
        }
        Some(vj)
    } else {
        None
    };

    // Both candidates are local Calabi-Yau; failing here means the block
    // bookkeeping broke, not the input.
    let xprime_div = dual.a_side().matrix().select_rows(&xprime_report.facet_indices);
    let local_calabi_yau_xprime = anticanonical_class_trivial(&xprime_div)?;
    let eprime_div = assemble_eprime_div(&blocks, &yprime)?;
    let local_calabi_yau_eprime = anticanonical_class_trivial(&eprime_div)?;
    if !local_calabi_yau_xprime || !local_calabi_yau_eprime {
        return Err(Error::InternalConsistency(
            "a dual candidate lost the trivial anticanonical class".into(),
        ));
    }

    let divisors: Vec<Vec<BigInt>> = (0..original_blocks.c)
        .map(|j| original_blocks.divisors.column(j))
        .collect();
    let section = section_test(&original_blocks.base_div, &divisors)?;
    let section_witness = match &section {
        SectionOutcome::Found(w) => Some(w.clone()),
        _ => None,
    };
    Ok(BundleReport {
        yprime,
        vj,
        is_bundle,
        failing_elements,
        anomalies,
        local_calabi_yau_xprime,
        local_calabi_yau_eprime,
        section,
        section_witness,
    })
}

/// `div_{E'} = [[k d', k D'], [0, Id]]` assembled from the Y' data.
fn assemble_eprime_div(blocks: &DualBlocks, yprime: &YPrime) -> Result<IntMatrix> {
    let n = blocks.base_cols;
    let c = blocks.c;
    let ry = yprime.variety.div.rows();
    let mut m = IntMatrix::zero(ry + c, n + c);
    for i in 0..ry {
        for k in 0..n {
            m.set(i, k, yprime.variety.div.get(i, k).clone());
        }
        for j in 0..c {
            m.set(i, n + j, yprime.pushed_divisors[j][i].clone());
        }
    }
    for j in 0..c {
        m.set(ry + j, n + j, BigInt::one());
    }
    Ok(m)
}

fn scaled_direction(point: &[BigInt], alpha: &BigRational) -> Vec<BigRational> {
    point
        .iter()
        .map(|x| BigRational::from(x.clone()) / alpha)
        .collect()
}

/// The double dual and the superpotential terms it lost.
#[derive(Clone, Debug)]
pub struct DoubleDual {
    pub model: ToricLGModel,
    /// 0-based B-side row indices deleted by the first duality's row map.
    pub deleted_rows: Vec<usize>,
}

/// Dualize twice: the A side returns unchanged and the B side loses exactly
/// the rows killed by the first dualization's row selection.
pub fn double_dual_diff(model: &ToricLGModel) -> Result<DoubleDual> {
    let first = dualize(model)?;
    // The second dualization needs the original A side kopasetic.
    let back = kopasetic_check(model.a_side())?;
    if !back.verdict {
        return Err(Error::DualNotKopasetic(back.to_string()));
    }
    let keep = &first.k_report.facet_indices;
    let deleted_rows: Vec<usize> = (0..model.b_side().matrix().rows())
        .filter(|i| !keep.contains(i))
        .collect();
    let b_matrix = model.b_side().matrix().select_rows(keep);
    let b_lift: Vec<ComplexLift> = first.k_report.push_rows(model.b_side().lift());
    let b_side = LinearData::new(b_matrix, b_lift)?;
    let blocks = model.blocks().map(|b| {
        let mut trimmed = b.clone();
        trimmed.mon_tags = keep.iter().map(|&i| b.mon_tags[i].clone()).collect();
        trimmed
    });
    let doubled = ToricLGModel::new(model.a_side().clone(), b_side, blocks)?;
    Ok(DoubleDual { model: doubled, deleted_rows })
}
