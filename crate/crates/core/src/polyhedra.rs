//! Exact rational convex polyhedral sets in H-representation.
//!
//! A `Polyhedron` is `{ x | N x + a >= 0 }` with integer normal rows `N` and
//! rational offsets `a`. Interior points, facet (irredundancy) structure,
//! vertices and recession rays are computed eagerly at construction with the
//! exact LP kernel, so a constructed value is immutable and cheap to share.

use std::collections::BTreeSet;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::linalg::{self, IntMatrix};
use crate::lp::{self, Constraint, LpResult};
use crate::{dim_cap, Error, Result};

/// What became of an input row after deduplication and redundancy removal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowFate {
    /// The row defines a facet.
    Facet,
    /// The row is positively proportional to an earlier row (0-based index).
    DuplicateOf(usize),
    /// The row can be removed without changing the set.
    Redundant,
}

#[derive(Clone, Debug)]
pub struct FacetData {
    /// 0-based indices of facet-defining rows, ascending.
    pub facet_indices: Vec<usize>,
    /// Fate of every original row.
    pub row_map: Vec<RowFate>,
}

#[derive(Clone, Debug)]
struct VRep {
    feasible: bool,
    vertices: Vec<Vec<BigRational>>,
    rays: Vec<Vec<BigInt>>,
}

#[derive(Clone, Debug)]
pub struct Polyhedron {
    normals: IntMatrix,
    offsets: Vec<BigRational>,
    interior: Option<Vec<BigRational>>,
    facets: Option<FacetData>,
    vrep: Option<VRep>,
    dim_cap: usize,
}

/// Rational points together with primitive integer ray directions.
///
/// Stands for `conv(points) + cone(rays)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    pub points: Vec<Vec<BigRational>>,
    pub rays: Vec<Vec<BigInt>>,
}

impl PointSet {
    pub fn new(points: Vec<Vec<BigRational>>, rays: Vec<Vec<BigInt>>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut out_points = Vec::new();
        for p in points {
            if seen.insert(rat_vec_key(&p)) {
                out_points.push(p);
            }
        }
        let mut ray_seen = BTreeSet::new();
        let mut out_rays = Vec::new();
        for r in rays {
            let prim = linalg::make_primitive(&r)?;
            if ray_seen.insert(prim.clone()) {
                out_rays.push(prim);
            }
        }
        Ok(PointSet { points: out_points, rays: out_rays })
    }
}

impl Polyhedron {
    pub fn new(normals: IntMatrix, offsets: Vec<BigRational>) -> Result<Self> {
        let cap = dim_cap();
        Self::with_dim_cap(normals, offsets, cap)
    }

    pub fn with_dim_cap(normals: IntMatrix, offsets: Vec<BigRational>, dim_cap: usize) -> Result<Self> {
        if normals.rows() != offsets.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} normal rows vs {} offsets",
                normals.rows(),
                offsets.len()
            )));
        }
        let interior = interior_point_of(&normals, &offsets);
        let facets = interior.as_ref().map(|_| facet_data_of(&normals, &offsets));
        let vrep = if normals.cols() <= dim_cap {
            Some(enumerate_vrep(&normals, &offsets))
        } else {
            None
        };
        Ok(Polyhedron { normals, offsets, interior, facets, vrep, dim_cap })
    }

    pub fn ambient_dim(&self) -> usize {
        self.normals.cols()
    }

    pub fn normals(&self) -> &IntMatrix {
        &self.normals
    }

    pub fn offsets(&self) -> &[BigRational] {
        &self.offsets
    }

    /// A strictly interior point, or `None` when the interior is empty.
    /// Decided by the LP maximizing the common slack of all inequalities.
    pub fn interior_point(&self) -> Option<&Vec<BigRational>> {
        self.interior.as_ref()
    }

    /// Facet rows and the dedup/redundancy map. Requires nonempty interior.
    pub fn facet_rows(&self) -> Result<&FacetData> {
        self.facets.as_ref().ok_or(Error::EmptyInterior)
    }

    /// All 0-faces (exact rationals) and primitive recession-ray generators.
    pub fn vertices_and_rays(&self) -> Result<PointSet> {
        let v = self.vrep.as_ref().ok_or(Error::DimensionCap {
            dim: self.ambient_dim(),
            cap: self.dim_cap,
        })?;
        PointSet::new(v.vertices.clone(), v.rays.clone())
    }

    pub fn is_feasible(&self) -> bool {
        match &self.vrep {
            Some(v) => v.feasible,
            None => {
                let cons = nonstrict_constraints(&self.normals, &self.offsets);
                !matches!(
                    lp::maximize(&vec![BigRational::zero(); self.ambient_dim()], &cons),
                    LpResult::Infeasible
                )
            }
        }
    }

    /// Membership of a rational point.
    pub fn contains(&self, x: &[BigRational]) -> Result<bool> {
        let vals = self.normals.mul_rat_vec(x)?;
        Ok(vals
            .iter()
            .zip(self.offsets.iter())
            .all(|(v, a)| !(v + a).is_negative()))
    }

    /// Bounded iff the recession cone is trivial.
    pub fn is_bounded(&self) -> Result<bool> {
        let v = self.vrep.as_ref().ok_or(Error::DimensionCap {
            dim: self.ambient_dim(),
            cap: self.dim_cap,
        })?;
        Ok(v.rays.is_empty())
    }

    /// The set shifted by `shift`: `{ shift + x | x in self }`.
    pub fn translate(&self, shift: &[BigRational]) -> Result<Polyhedron> {
        let moved = self.normals.mul_rat_vec(shift)?;
        let offsets = self
            .offsets
            .iter()
            .zip(moved.iter())
            .map(|(a, d)| a - d)
            .collect();
        Polyhedron::with_dim_cap(self.normals.clone(), offsets, self.dim_cap)
    }

    /// All lattice points of a bounded polyhedron, ascending lexicographic.
    /// Scans the vertex bounding box with exact membership tests.
    pub fn lattice_points(&self) -> Result<Vec<Vec<BigInt>>> {
        if !self.is_bounded()? {
            return Err(Error::Unbounded);
        }
        let vrep = self.vrep.as_ref().expect("bounded check resolved vrep");
        let n = self.ambient_dim();
        if n == 0 {
            return Ok(if vrep.feasible { vec![vec![]] } else { vec![] });
        }
        if vrep.vertices.is_empty() {
            return Ok(Vec::new());
        }
        let mut lo = vec![BigInt::zero(); n];
        let mut hi = vec![BigInt::zero(); n];
        for i in 0..n {
            let min = vrep.vertices.iter().map(|v| &v[i]).min().expect("nonempty");
            let max = vrep.vertices.iter().map(|v| &v[i]).max().expect("nonempty");
            lo[i] = min.ceil().to_integer();
            hi[i] = max.floor().to_integer();
            if lo[i] > hi[i] {
                return Ok(Vec::new());
            }
        }
        let mut out = Vec::new();
        let mut cursor = lo.clone();
        loop {
            let as_rat: Vec<BigRational> =
                cursor.iter().map(|x| BigRational::from(x.clone())).collect();
            if self.contains(&as_rat)? {
                out.push(cursor.clone());
            }
            // Odometer, last coordinate fastest; lo..=hi per coordinate.
            let mut i = n;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                if cursor[i] < hi[i] {
                    cursor[i] += 1;
                    for j in i + 1..n {
                        cursor[j] = lo[j].clone();
                    }
                    break;
                }
            }
        }
    }

    /// Polar of a polyhedron with `0` in its interior: the generating point
    /// set `{ nu_j / alpha_j } ∪ { 0 }` of the polar polytope.
    pub fn polar(&self) -> Result<PointSet> {
        let n = self.ambient_dim();
        for (j, a) in self.offsets.iter().enumerate() {
            let zero_row = self.normals.row(j).iter().all(|x| x.is_zero());
            if (!zero_row && !a.is_positive()) || (zero_row && a.is_negative()) {
                return Err(Error::OriginNotInterior { index: j, offset: a.clone() });
            }
        }
        let mut points = vec![vec![BigRational::zero(); n]];
        for j in 0..self.normals.rows() {
            let row = self.normals.row(j);
            if row.iter().all(|x| x.is_zero()) {
                continue;
            }
            points.push(
                row.iter()
                    .map(|x| BigRational::from(x.clone()) / &self.offsets[j])
                    .collect(),
            );
        }
        PointSet::new(points, Vec::new())
    }

    /// Canonical facet form: primitive facet normals with scaled offsets,
    /// sorted lexicographically. Two polyhedra with nonempty interior are
    /// equal as sets iff these agree.
    pub fn canonical_facet_form(&self) -> Result<Vec<(Vec<BigInt>, BigRational)>> {
        let facets = self.facet_rows()?;
        let mut out = Vec::new();
        for &i in &facets.facet_indices {
            out.push(normalize_inequality(&self.normals.row(i), &self.offsets[i])?);
        }
        out.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        out.dedup();
        Ok(out)
    }

    /// Reflexivity of a lattice polytope containing `0` in its interior:
    /// every polar vertex `nu_F / alpha_F` over the facets must be integral.
    pub fn is_reflexive(&self) -> Result<bool> {
        if !self.is_bounded()? {
            return Err(Error::Unbounded);
        }
        let vrep = self.vrep.as_ref().expect("bounded implies vrep");
        for v in &vrep.vertices {
            if v.iter().any(|x| !x.denom().is_one()) {
                return Err(Error::NotLattice(format!("{v:?}")));
            }
        }
        let facets = self.facet_rows().map_err(|_| Error::OriginNotInterior {
            index: 0,
            offset: BigRational::zero(),
        })?;
        for &i in &facets.facet_indices {
            if !self.offsets[i].is_positive() {
                return Err(Error::OriginNotInterior {
                    index: i,
                    offset: self.offsets[i].clone(),
                });
            }
        }
        for &i in &facets.facet_indices {
            let (normal, offset) = normalize_inequality(&self.normals.row(i), &self.offsets[i])?;
            for x in &normal {
                let coord = BigRational::from(x.clone()) / &offset;
                if !coord.denom().is_one() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Polar of `conv(points) + cone(rays)` as an H-representation.
pub fn polar_of_point_set(s: &PointSet, ambient_dim: usize) -> Result<Polyhedron> {
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    let mut offsets: Vec<BigRational> = Vec::new();
    for p in &s.points {
        if p.len() != ambient_dim {
            return Err(Error::ShapeMismatch("point dimension mismatch".into()));
        }
        if p.iter().all(|x| x.is_zero()) {
            continue; // 0 . xi + 1 >= 0 carries no information
        }
        // p . xi + 1 >= 0, cleared to integer normals.
        let mut lcm = BigInt::one();
        for x in p {
            lcm = num::Integer::lcm(&lcm, x.denom());
        }
        rows.push(p.iter().map(|x| x.numer() * (&lcm / x.denom())).collect());
        offsets.push(BigRational::from(lcm));
    }
    for r in &s.rays {
        if r.len() != ambient_dim {
            return Err(Error::ShapeMismatch("ray dimension mismatch".into()));
        }
        rows.push(r.clone());
        offsets.push(BigRational::zero());
    }
    let normals = if rows.is_empty() {
        IntMatrix::zero(0, ambient_dim)
    } else {
        IntMatrix::from_bigint_rows(&rows)?
    };
    Polyhedron::new(normals, offsets)
}

/// H-representation of `conv(points ∪ {0}) + cone(rays)`.
///
/// Computed as the double polar: the facets are read off the vertices and
/// rays of the polar polyhedron. When `0` lies in the hull (every use here
/// has `0` interior) this is the hull of the point set itself.
pub fn hull_h_rep(s: &PointSet, ambient_dim: usize) -> Result<Polyhedron> {
    let polar = polar_of_point_set(s, ambient_dim)?;
    let vr = polar.vertices_and_rays()?;
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    let mut offsets: Vec<BigRational> = Vec::new();
    for v in &vr.points {
        if v.iter().all(|x| x.is_zero()) {
            continue;
        }
        let mut lcm = BigInt::one();
        for x in v {
            lcm = num::Integer::lcm(&lcm, x.denom());
        }
        rows.push(v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect());
        offsets.push(BigRational::from(lcm));
    }
    for r in &vr.rays {
        rows.push(r.clone());
        offsets.push(BigRational::zero());
    }
    let normals = if rows.is_empty() {
        IntMatrix::zero(0, ambient_dim)
    } else {
        IntMatrix::from_bigint_rows(&rows)?
    };
    Polyhedron::new(normals, offsets)
}

/// Is `p` a 0-face of `conv(points) + cone(rays)`?
///
/// Exact LP infeasibility of `p ∈ conv(points \ {p}) + cone(rays)`.
pub fn vertex_test_with_ray(s: &PointSet, p: &[BigRational]) -> Result<bool> {
    let pos = s
        .points
        .iter()
        .position(|q| q.as_slice() == p)
        .ok_or(Error::NotAMember)?;
    let others: Vec<&Vec<BigRational>> = s
        .points
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != pos)
        .map(|(_, q)| q)
        .collect();
    if others.is_empty() && s.rays.is_empty() {
        return Ok(true);
    }
    let dim = p.len();
    let n_vars = others.len() + s.rays.len();
    let mut constraints = Vec::new();
    for d in 0..dim {
        let mut coeffs = Vec::with_capacity(n_vars);
        for q in &others {
            coeffs.push(q[d].clone());
        }
        for r in &s.rays {
            coeffs.push(BigRational::from(r[d].clone()));
        }
        constraints.push(Constraint::eq(coeffs, p[d].clone()));
    }
    // Convexity: the point coefficients sum to 1.
    let mut conv = vec![BigRational::one(); others.len()];
    conv.extend(vec![BigRational::zero(); s.rays.len()]);
    constraints.push(Constraint::eq(conv, BigRational::one()));
    Ok(lp::feasible_nonneg(&constraints, n_vars).is_none())
}

fn rat_vec_key(v: &[BigRational]) -> Vec<(BigInt, BigInt)> {
    v.iter().map(|x| (x.numer().clone(), x.denom().clone())).collect()
}

/// Scale an inequality so the normal is primitive; offset scales along.
fn normalize_inequality(normal: &[BigInt], offset: &BigRational) -> Result<(Vec<BigInt>, BigRational)> {
    let prim = linalg::make_primitive(normal)?;
    // normal = g * prim with g > 0
    let g = normal
        .iter()
        .zip(prim.iter())
        .find(|(_, p)| !p.is_zero())
        .map(|(n, p)| n / p)
        .expect("primitive vector has a nonzero entry");
    Ok((prim, offset / BigRational::from(g)))
}

fn nonstrict_constraints(normals: &IntMatrix, offsets: &[BigRational]) -> Vec<Constraint> {
    (0..normals.rows())
        .map(|j| {
            let coeffs: Vec<BigRational> =
                normals.row(j).into_iter().map(BigRational::from).collect();
            Constraint::ge(coeffs, -offsets[j].clone())
        })
        .collect()
}

/// Maximize the common slack eps subject to N xi + a >= eps·1 and eps <= 1.
fn interior_point_of(normals: &IntMatrix, offsets: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = normals.cols();
    let r = normals.rows();
    if r == 0 {
        return Some(vec![BigRational::zero(); n]);
    }
    let mut constraints = Vec::with_capacity(r + 1);
    for j in 0..r {
        // -N_j xi + eps <= a_j
        let mut coeffs: Vec<BigRational> = normals
            .row(j)
            .into_iter()
            .map(|x| BigRational::from(-x))
            .collect();
        coeffs.push(BigRational::one());
        constraints.push(Constraint::le(coeffs, offsets[j].clone()));
    }
    let mut objective = vec![BigRational::zero(); n];
    objective.push(BigRational::one());
    constraints.push(Constraint::le(objective.clone(), BigRational::one()));
    match lp::maximize(&objective, &constraints) {
        LpResult::Optimal { value, point } if value.is_positive() => Some(point[..n].to_vec()),
        _ => None,
    }
}

fn facet_data_of(normals: &IntMatrix, offsets: &[BigRational]) -> FacetData {
    let r = normals.rows();
    let mut row_map = vec![RowFate::Redundant; r];
    // Dedup positively proportional affine inequalities, lowest index wins.
    let mut reps: Vec<usize> = Vec::new();
    let mut keys: Vec<Option<(Vec<BigInt>, BigRational)>> = Vec::with_capacity(r);
    for j in 0..r {
        let row = normals.row(j);
        if row.iter().all(|x| x.is_zero()) {
            keys.push(None);
            continue; // zero rows never define facets
        }
        let key = normalize_inequality(&row, &offsets[j]).expect("nonzero row");
        if let Some(&prev) = reps.iter().find(|&&p| keys[p].as_ref() == Some(&key)) {
            row_map[j] = RowFate::DuplicateOf(prev);
            keys.push(Some(key));
        } else {
            keys.push(Some(key));
            reps.push(j);
        }
    }
    // Irredundancy LP for each representative against the other survivors.
    let mut facet_indices = Vec::new();
    for &j in &reps {
        let mut constraints = Vec::new();
        for &k in &reps {
            if k == j {
                continue;
            }
            let coeffs: Vec<BigRational> =
                normals.row(k).into_iter().map(BigRational::from).collect();
            constraints.push(Constraint::ge(coeffs, -offsets[k].clone()));
        }
        // Bound the LP: a violation by 1 is as good as any.
        let neg_row: Vec<BigRational> = normals
            .row(j)
            .into_iter()
            .map(|x| BigRational::from(-x))
            .collect();
        constraints.push(Constraint::le(neg_row.clone(), &offsets[j] + BigRational::one()));
        let irredundant = match lp::maximize(&neg_row, &constraints) {
            LpResult::Optimal { value, .. } => value > offsets[j],
            LpResult::Unbounded => true,
            LpResult::Infeasible => false,
        };
        if irredundant {
            row_map[j] = RowFate::Facet;
            facet_indices.push(j);
        }
    }
    facet_indices.sort_unstable();
    FacetData { facet_indices, row_map }
}

fn enumerate_vrep(normals: &IntMatrix, offsets: &[BigRational]) -> VRep {
    let n = normals.cols();
    let r = normals.rows();
    let cons = nonstrict_constraints(normals, offsets);
    let feasible = !matches!(
        lp::maximize(&vec![BigRational::zero(); n], &cons),
        LpResult::Infeasible
    );
    if !feasible {
        return VRep { feasible, vertices: Vec::new(), rays: Vec::new() };
    }
    if n == 0 {
        return VRep { feasible, vertices: vec![vec![]], rays: Vec::new() };
    }

    // Distinct hyperplanes only (proportional inequalities share tight sets).
    let mut reps: Vec<usize> = Vec::new();
    let mut seen = BTreeSet::new();
    for j in 0..r {
        let row = normals.row(j);
        if row.iter().all(|x| x.is_zero()) {
            continue;
        }
        let key = normalize_inequality(&row, &offsets[j]).expect("nonzero row");
        if seen.insert((key.0, key.1)) {
            reps.push(j);
        }
    }

    // Vertices: solve every invertible n-subset, filter by membership.
    let mut vertices: Vec<Vec<BigRational>> = Vec::new();
    let mut vseen = BTreeSet::new();
    for subset in subsets_of_size(&reps, n) {
        let sub = normals.select_rows(&subset);
        if linalg::rational_rank(&sub) < n {
            continue;
        }
        let rhs: Vec<BigRational> = subset.iter().map(|&j| -offsets[j].clone()).collect();
        let Some(x) = linalg::solve_rational(&sub, &rhs).expect("consistent shapes") else {
            continue;
        };
        let ok = (0..r).all(|j| {
            let val: BigRational = normals
                .row(j)
                .iter()
                .zip(x.iter())
                .map(|(a, b)| BigRational::from(a.clone()) * b)
                .sum();
            !(val + &offsets[j]).is_negative()
        });
        if ok && vseen.insert(rat_vec_key(&x)) {
            vertices.push(x);
        }
    }
    vertices.sort_by(rat_vec_cmp);

    // Recession cone { N x >= 0 }: lineality basis (both signs) plus
    // extreme rays modulo lineality.
    let mut rays: Vec<Vec<BigInt>> = Vec::new();
    let kernel = linalg::kernel_basis(normals);
    let k = kernel.cols();
    for c in 0..k {
        let col = kernel.column(c);
        let prim = linalg::make_primitive(&col).expect("kernel basis columns are nonzero");
        rays.push(prim.iter().map(|x| -x).collect());
        rays.push(prim);
    }
    if n > k {
        let want_rank = n - k - 1;
        for subset in subsets_of_size(&reps, want_rank) {
            let sub = normals.select_rows(&subset);
            if linalg::rational_rank(&sub) != want_rank {
                continue;
            }
            rays.extend(ray_candidates(normals, &sub, &kernel));
        }
    }
    let mut dedup = BTreeSet::new();
    let mut rays: Vec<Vec<BigInt>> = rays.into_iter().filter(|r| dedup.insert(r.clone())).collect();
    rays.sort();
    VRep { feasible, vertices, rays }
}

fn rat_vec_cmp(a: &Vec<BigRational>, b: &Vec<BigRational>) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.cmp(y) {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

/// Extreme-ray candidates from one tight set: directions spanning the
/// solution space of `sub x = 0` beyond the lineality, canonicalized by
/// projecting off the lineality and filtered by cone membership.
fn ray_candidates(normals: &IntMatrix, sub: &IntMatrix, kernel: &IntMatrix) -> Vec<Vec<BigInt>> {
    let null = rational_nullspace(sub);
    let mut out = Vec::new();
    for v in &null {
        if in_rational_span(kernel, v) {
            continue;
        }
        let proj = project_off_span(kernel, v);
        if proj.iter().all(|x| x.is_zero()) {
            continue;
        }
        let dir = linalg::primitive_direction(&proj).expect("nonzero");
        let neg: Vec<BigInt> = dir.iter().map(|x| -x).collect();
        for signed in [dir, neg] {
            let vals = normals.mul_vec(&signed).expect("shape");
            if vals.iter().all(|x| !x.is_negative()) {
                out.push(signed);
                break;
            }
        }
    }
    out
}

/// Basis of the rational nullspace of `m`.
fn rational_nullspace(m: &IntMatrix) -> Vec<Vec<BigRational>> {
    let rows = m.rows();
    let cols = m.cols();
    let mut a: Vec<Vec<BigRational>> = (0..rows)
        .map(|r| m.row(r).into_iter().map(BigRational::from).collect())
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let d = a[rank][col].clone();
        for c in 0..cols {
            a[rank][c] /= &d;
        }
        for r in 0..rows {
            if r != rank && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..cols {
                    let v = &a[rank][c] * &f;
                    a[r][c] -= v;
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for &f in &free {
        let mut v = vec![BigRational::zero(); cols];
        v[f] = BigRational::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -a[i][f].clone();
        }
        basis.push(v);
    }
    basis
}

fn in_rational_span(basis_cols: &IntMatrix, v: &[BigRational]) -> bool {
    if basis_cols.cols() == 0 {
        return v.iter().all(|x| x.is_zero());
    }
    matches!(linalg::solve_rational(basis_cols, v), Ok(Some(_)))
}

/// Orthogonal projection (over Q) of `v` off the column span of `basis_cols`.
fn project_off_span(basis_cols: &IntMatrix, v: &[BigRational]) -> Vec<BigRational> {
    let mut out: Vec<BigRational> = v.to_vec();
    let mut ortho: Vec<Vec<BigRational>> = Vec::new();
    for c in 0..basis_cols.cols() {
        let mut b: Vec<BigRational> = basis_cols
            .column(c)
            .into_iter()
            .map(BigRational::from)
            .collect();
        for prev in &ortho {
            let num: BigRational = b.iter().zip(prev.iter()).map(|(x, y)| x * y).sum();
            let den: BigRational = prev.iter().map(|y| y * y).sum();
            let f = num / den;
            for (bi, pi) in b.iter_mut().zip(prev.iter()) {
                let d = &f * pi;
                *bi -= d;
            }
        }
        ortho.push(b);
    }
    for b in &ortho {
        let den: BigRational = b.iter().map(|y| y * y).sum();
        if den.is_zero() {
            continue;
        }
        let num: BigRational = out.iter().zip(b.iter()).map(|(x, y)| x * y).sum();
        let f = num / den;
        for (oi, bi) in out.iter_mut().zip(b.iter()) {
            let d = &f * bi;
            *oi -= d;
        }
    }
    out
}

fn subsets_of_size(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if size > items.len() {
        return out;
    }
    if size == 0 {
        out.push(Vec::new());
        return out;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let mut i = size;
        let mut advanced = false;
        while i > 0 {
            i -= 1;
            if idx[i] != i + items.len() - size {
                idx[i] += 1;
                for j in i + 1..size {
                    idx[j] = idx[j - 1] + 1;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            return out;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }
    fn qv(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| q(x)).collect()
    }

    fn square_side(half: i64) -> Polyhedron {
        Polyhedron::new(
            IntMatrix::from_rows(&[vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]]),
            qv(&[half, half, half, half]),
        )
        .unwrap()
    }

    fn diamond() -> Polyhedron {
        Polyhedron::new(
            IntMatrix::from_rows(&[vec![1, 1], vec![1, -1], vec![-1, 1], vec![-1, -1]]),
            qv(&[1, 1, 1, 1]),
        )
        .unwrap()
    }

    #[test]
    fn interior_of_square_and_empty_strip() {
        let sq = square_side(1);
        let p = sq.interior_point().expect("square has interior");
        assert!(sq.contains(p).unwrap());

        let strip =
            Polyhedron::new(IntMatrix::from_rows(&[vec![1], vec![-1]]), qv(&[0, 0])).unwrap();
        assert!(strip.interior_point().is_none());
        // The degenerate segment {0} still has its vertex.
        let vr = strip.vertices_and_rays().unwrap();
        assert_eq!(vr.points, vec![qv(&[0])]);
        assert!(vr.rays.is_empty());
    }

    #[test]
    fn duplicate_row_dropped() {
        let p = Polyhedron::new(
            IntMatrix::from_rows(&[vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1], vec![2, 0]]),
            qv(&[1, 1, 1, 1, 2]),
        )
        .unwrap();
        let f = p.facet_rows().unwrap();
        assert_eq!(f.facet_indices, vec![0, 1, 2, 3]);
        assert_eq!(f.row_map[4], RowFate::DuplicateOf(0));
    }

    #[test]
    fn diamond_vertices() {
        let vr = diamond().vertices_and_rays().unwrap();
        let expect: Vec<Vec<BigRational>> =
            vec![qv(&[-1, 0]), qv(&[0, -1]), qv(&[0, 1]), qv(&[1, 0])];
        assert_eq!(vr.points, expect);
        assert!(vr.rays.is_empty());
    }

    #[test]
    fn half_plane_rays() {
        let h = Polyhedron::new(IntMatrix::from_rows(&[vec![1, 0]]), qv(&[0])).unwrap();
        let vr = h.vertices_and_rays().unwrap();
        assert!(vr.points.is_empty());
        let rays: BTreeSet<Vec<BigInt>> = vr.rays.into_iter().collect();
        let expect: BTreeSet<Vec<BigInt>> = [
            vec![BigInt::from(0), BigInt::from(1)],
            vec![BigInt::from(0), BigInt::from(-1)],
            vec![BigInt::from(1), BigInt::from(0)],
        ]
        .into_iter()
        .collect();
        assert_eq!(rays, expect);
    }

    #[test]
    fn polar_square_is_diamond_and_involutive() {
        let sq = square_side(1);
        let polar = sq.polar().unwrap();
        // The polar's hull is the diamond...
        let hull = hull_h_rep(&polar, 2).unwrap();
        assert_eq!(
            hull.canonical_facet_form().unwrap(),
            diamond().canonical_facet_form().unwrap()
        );
        // ... and taking the polar again returns the square.
        let double = polar_of_point_set(&polar, 2).unwrap();
        assert_eq!(
            double.canonical_facet_form().unwrap(),
            sq.canonical_facet_form().unwrap()
        );
    }

    #[test]
    fn polar_requires_origin_interior() {
        let p = Polyhedron::new(IntMatrix::from_rows(&[vec![1], vec![-1]]), qv(&[0, 1])).unwrap();
        assert!(matches!(p.polar(), Err(Error::OriginNotInterior { .. })));
    }

    #[test]
    fn lattice_points_of_anticanonical_square() {
        let pts = square_side(1).lattice_points().unwrap();
        assert_eq!(pts.len(), 9);
        let as_set: BTreeSet<Vec<BigInt>> = pts.into_iter().collect();
        for (x, y) in [(0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1), (0, 0)]
        {
            assert!(as_set.contains(&vec![BigInt::from(x), BigInt::from(y)]));
        }
    }

    #[test]
    fn unit_segment_lattice_points() {
        let seg = Polyhedron::new(IntMatrix::from_rows(&[vec![1], vec![-1]]), qv(&[0, 1])).unwrap();
        assert_eq!(
            seg.lattice_points().unwrap(),
            vec![vec![BigInt::from(0)], vec![BigInt::from(1)]]
        );
    }

    #[test]
    fn unbounded_lattice_points_rejected() {
        let h = Polyhedron::new(IntMatrix::from_rows(&[vec![1, 0]]), qv(&[0])).unwrap();
        assert!(matches!(h.lattice_points(), Err(Error::Unbounded)));
    }

    #[test]
    fn reflexive_squares() {
        assert!(square_side(1).is_reflexive().unwrap());
        assert!(!square_side(2).is_reflexive().unwrap());
        assert!(diamond().is_reflexive().unwrap());
    }

    #[test]
    fn vertex_test_examples() {
        let s = PointSet::new(
            vec![qv(&[0, 0]), qv(&[1, 0])],
            vec![vec![BigInt::from(0), BigInt::from(1)]],
        )
        .unwrap();
        assert!(vertex_test_with_ray(&s, &qv(&[1, 0])).unwrap());

        let s2 = PointSet::new(vec![qv(&[0, 0]), qv(&[2, 0]), qv(&[1, 0])], vec![]).unwrap();
        assert!(!vertex_test_with_ray(&s2, &qv(&[1, 0])).unwrap());

        assert!(matches!(
            vertex_test_with_ray(&s2, &qv(&[5, 5])),
            Err(Error::NotAMember)
        ));
    }

    #[test]
    fn translation_moves_vertices() {
        let sq = square_side(1);
        let t = sq.translate(&qv(&[1, 1])).unwrap();
        let vr = t.vertices_and_rays().unwrap();
        assert_eq!(vr.points, vec![qv(&[0, 0]), qv(&[0, 2]), qv(&[2, 0]), qv(&[2, 2])]);
        let same = sq.translate(&qv(&[0, 0])).unwrap();
        assert_eq!(
            same.canonical_facet_form().unwrap(),
            sq.canonical_facet_form().unwrap()
        );
    }

    #[test]
    fn stop_sign_has_eight_vertices() {
        // Anticanonical square shell rows with the very-ample offsets.
        let rows = vec![
            vec![0, 1],
            vec![1, 1],
            vec![1, 0],
            vec![1, -1],
            vec![0, -1],
            vec![-1, -1],
            vec![-1, 0],
            vec![-1, 1],
        ];
        let p = Polyhedron::new(IntMatrix::from_rows(&rows), qv(&[2, 3, 2, 3, 2, 3, 2, 3])).unwrap();
        let f = p.facet_rows().unwrap();
        assert_eq!(f.facet_indices.len(), 8);
        let vr = p.vertices_and_rays().unwrap();
        assert_eq!(vr.points.len(), 8);
        for v in &vr.points {
            assert!(v.iter().all(|x| x.denom().is_one()));
        }
    }

    #[test]
    fn three_points_regimes_have_distinct_facet_sets() {
        let mon_w = IntMatrix::from_rows(&[vec![1, 1], vec![-1, 1], vec![-2, 1], vec![0, 1]]);
        let regimes = [
            qv(&[0, 2, 5, 0]),
            qv(&[0, 3, 5, 0]),
            qv(&[-1, -1, 0, 0]),
            qv(&[-1, 0, -1, 0]),
        ];
        let mut forms = Vec::new();
        for offsets in regimes {
            let p = Polyhedron::new(mon_w.clone(), offsets).unwrap();
            forms.push(p.canonical_facet_form().unwrap());
        }
        for i in 0..forms.len() {
            for j in i + 1..forms.len() {
                assert_ne!(forms[i], forms[j], "regimes {i} and {j} coincide");
            }
        }
        // The first regime keeps all four rows.
        let p1 = Polyhedron::new(mon_w, qv(&[0, 2, 5, 0])).unwrap();
        assert_eq!(p1.facet_rows().unwrap().facet_indices, vec![0, 1, 2, 3]);
    }
}
