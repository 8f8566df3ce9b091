//! Exact integer and rational linear algebra.
//!
//! Everything here is arbitrary precision: matrices over `BigInt`, vectors
//! over `BigRational`. The central computation is the Smith normal form,
//! from which cokernels (divisor class groups), kernels, and class lifts
//! are derived.

use num::bigint::Sign;
use num::{BigInt, BigRational, Integer, One, Signed, Zero};

use crate::{Error, Result};

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  [")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "expected {}x{}={} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Build from i64 rows; meant for tests and small fixed data.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let entries = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| BigInt::from(x)))
            .collect();
        IntMatrix { rows: r, cols: c, entries }
    }

    pub fn from_bigint_rows(rows: &[Vec<BigInt>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Ok(IntMatrix {
            rows: r,
            cols: c,
            entries: rows.iter().flatten().cloned().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> Vec<BigInt> {
        self.entries[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn row_slices(&self) -> impl Iterator<Item = &[BigInt]> {
        self.entries.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "matrix {}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c) * &v[c]).sum())
            .collect())
    }

    pub fn mul_rat_vec(&self, v: &[BigRational]) -> Result<Vec<BigRational>> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "matrix {}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| BigRational::from(self.get(r, c).clone()) * &v[c])
                    .sum()
            })
            .collect())
    }

    /// Select a subset of rows, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> IntMatrix {
        let mut out = IntMatrix::zero(indices.len(), self.cols);
        for (i, &r) in indices.iter().enumerate() {
            for c in 0..self.cols {
                out.set(i, c, self.get(r, c).clone());
            }
        }
        out
    }

    /// Select a contiguous column range `[from, to)`.
    pub fn slice_cols(&self, from: usize, to: usize) -> IntMatrix {
        let mut out = IntMatrix::zero(self.rows, to - from);
        for r in 0..self.rows {
            for (j, c) in (from..to).enumerate() {
                out.set(r, j, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn rank(&self) -> usize {
        rational_rank(self)
    }
}

/// Vector of exact rationals (kept in lowest terms by `BigRational` itself).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatVector(pub Vec<BigRational>);

impl RatVector {
    pub fn from_i64(v: &[i64]) -> Self {
        RatVector(v.iter().map(|&x| BigRational::from(BigInt::from(x))).collect())
    }

    pub fn zero(n: usize) -> Self {
        RatVector(vec![BigRational::zero(); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `U * C * V = D` with `U`, `V` unimodular and `D` in Smith form.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub d: IntMatrix,
    pub invariant_factors: Vec<BigInt>,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.invariant_factors.iter().filter(|f| !f.is_zero()).count()
    }
}

/// Smith normal form by elementary row/column reduction.
///
/// Pivot selection is the minimal nonzero absolute value in the working
/// submatrix, ties broken in row-major order, so the decomposition is
/// reproducible run to run.
pub fn smith_normal_form(c: &IntMatrix) -> SmithDecomposition {
    let t = c.rows();
    let g = c.cols();
    let mut d = c.clone();
    let mut u = IntMatrix::identity(t);
    let mut v = IntMatrix::identity(g);

    let n = t.min(g);
    for k in 0..n {
        loop {
            // Minimal |entry| pivot in the submatrix [k.., k..].
            let mut pivot: Option<(usize, usize)> = None;
            for i in k..t {
                for j in k..g {
                    let e = d.get(i, j);
                    if e.is_zero() {
                        continue;
                    }
                    match pivot {
                        None => pivot = Some((i, j)),
                        Some((pi, pj)) => {
                            if e.abs() < d.get(pi, pj).abs() {
                                pivot = Some((i, j));
                            }
                        }
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return finish_snf(d, u, v, n);
            };
            if pi != k {
                swap_rows(&mut d, k, pi);
                swap_rows(&mut u, k, pi);
            }
            if pj != k {
                swap_cols(&mut d, k, pj);
                swap_cols(&mut v, k, pj);
            }

            let mut clean = true;
            for i in k + 1..t {
                if !d.get(i, k).is_zero() {
                    let q = div_nearest(d.get(i, k), d.get(k, k));
                    row_axpy(&mut d, i, k, &-&q);
                    row_axpy(&mut u, i, k, &-&q);
                    if !d.get(i, k).is_zero() {
                        clean = false;
                    }
                }
            }
            for j in k + 1..g {
                if !d.get(k, j).is_zero() {
                    let q = div_nearest(d.get(k, j), d.get(k, k));
                    col_axpy(&mut d, j, k, &-&q);
                    col_axpy(&mut v, j, k, &-&q);
                    if !d.get(k, j).is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }

            // Column and row k are clear; force the divisibility chain.
            let pv = d.get(k, k).clone();
            let mut fixed = true;
            'scan: for i in k + 1..t {
                for j in k + 1..g {
                    if !d.get(i, j).is_multiple_of(&pv) {
                        add_row(&mut d, k, i);
                        add_row(&mut u, k, i);
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
    }
    finish_snf(d, u, v, n)
}

fn finish_snf(mut d: IntMatrix, mut u: IntMatrix, v: IntMatrix, n: usize) -> SmithDecomposition {
    for k in 0..n {
        if d.get(k, k).sign() == Sign::Minus {
            negate_row(&mut d, k);
            negate_row(&mut u, k);
        }
    }
    let invariant_factors = (0..n).map(|k| d.get(k, k).clone()).collect();
    SmithDecomposition { u, v, d, invariant_factors }
}

fn swap_rows(m: &mut IntMatrix, a: usize, b: usize) {
    for c in 0..m.cols() {
        let x = m.get(a, c).clone();
        let y = m.get(b, c).clone();
        m.set(a, c, y);
        m.set(b, c, x);
    }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    for r in 0..m.rows() {
        let x = m.get(r, a).clone();
        let y = m.get(r, b).clone();
        m.set(r, a, y);
        m.set(r, b, x);
    }
}

/// row[dst] += q * row[src]
fn row_axpy(m: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    for c in 0..m.cols() {
        let v = m.get(dst, c) + q * m.get(src, c);
        m.set(dst, c, v);
    }
}

/// col[dst] += q * col[src]
fn col_axpy(m: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    for r in 0..m.rows() {
        let v = m.get(r, dst) + q * m.get(r, src);
        m.set(r, dst, v);
    }
}

fn add_row(m: &mut IntMatrix, dst: usize, src: usize) {
    row_axpy(m, dst, src, &BigInt::one());
}

fn negate_row(m: &mut IntMatrix, r: usize) {
    for c in 0..m.cols() {
        let v = -m.get(r, c);
        m.set(r, c, v);
    }
}

/// Quotient minimizing |a - q*b|; deterministic for ties (rounds toward zero).
fn div_nearest(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    if &r.abs() * 2 > b.abs() {
        if (r.sign() == Sign::Minus) == (b.sign() == Sign::Minus) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// The cokernel of `C: Z^g -> Z^t` presented through unimodular coordinates.
///
/// `projection * C = 0` and `projection` is onto `Z^free_rank`; torsion
/// classes, when present, are recorded with their moduli so callers can
/// reject them (the geometric pipeline requires torsion-free class groups).
#[derive(Clone, Debug)]
pub struct CokernelPresentation {
    pub source_dim: usize,
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
    pub projection: IntMatrix,
    /// Rows of the coordinate change whose class is torsion, paired with the
    /// invariant factor that kills them.
    pub torsion_projection: Vec<(Vec<BigInt>, BigInt)>,
    smith: SmithDecomposition,
}

impl CokernelPresentation {
    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn require_torsion_free(&self) -> Result<()> {
        if self.is_torsion_free() {
            Ok(())
        } else {
            Err(Error::TorsionPresent(self.torsion.clone()))
        }
    }

    /// Free-part class coordinates of an integer vector in `Z^t`.
    pub fn class_of(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        self.projection.mul_vec(v)
    }

    /// Free-part class coordinates of a rational vector.
    pub fn class_of_rat(&self, v: &[BigRational]) -> Result<Vec<BigRational>> {
        self.projection.mul_rat_vec(v)
    }

    pub fn smith(&self) -> &SmithDecomposition {
        &self.smith
    }
}

/// Cokernel of an integer matrix via its Smith normal form.
pub fn cokernel(c: &IntMatrix) -> CokernelPresentation {
    let snf = smith_normal_form(c);
    let t = c.rows();
    let rank = snf.rank();
    let free_rank = t - rank;
    let mut torsion = Vec::new();
    let mut torsion_projection = Vec::new();
    for (k, f) in snf.invariant_factors.iter().enumerate() {
        if !f.is_zero() && !f.is_one() {
            torsion.push(f.clone());
            torsion_projection.push((snf.u.row(k), f.clone()));
        }
    }
    let projection = snf.u.select_rows(&(rank..t).collect::<Vec<_>>());
    CokernelPresentation {
        source_dim: t,
        free_rank,
        torsion,
        projection,
        torsion_projection,
        smith: snf,
    }
}

/// Class equality of two integer vectors in the cokernel, torsion included:
/// free coordinates must agree and each torsion coordinate must agree
/// modulo its invariant factor.
pub fn classes_equal(p: &CokernelPresentation, u: &[BigInt], v: &[BigInt]) -> Result<bool> {
    if p.class_of(u)? != p.class_of(v)? {
        return Ok(false);
    }
    for (row, modulus) in &p.torsion_projection {
        let du: BigInt = row.iter().zip(u.iter()).map(|(a, b)| a * b).sum();
        let dv: BigInt = row.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
        if !(du - dv).is_multiple_of(modulus) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Basis of the integer kernel of `C`, returned as matrix columns.
pub fn kernel_basis(c: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(c);
    let rank = snf.rank();
    let g = c.cols();
    let mut out = IntMatrix::zero(g, g - rank);
    for (j, col) in (rank..g).enumerate() {
        for i in 0..g {
            out.set(i, j, snf.v.get(i, col).clone());
        }
    }
    out
}

/// Basis of the integer left kernel of `C`, returned as matrix rows.
pub fn left_kernel_basis(c: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(c);
    let rank = snf.rank();
    snf.u.select_rows(&(rank..c.rows()).collect::<Vec<_>>())
}

/// True iff the gcd of the entries is 1.
pub fn is_primitive(v: &[BigInt]) -> Result<bool> {
    if v.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroVector);
    }
    let mut g = BigInt::zero();
    for x in v {
        g = g.gcd(x);
    }
    Ok(g.is_one())
}

/// Divide an integer vector by the gcd of its entries.
pub fn make_primitive(v: &[BigInt]) -> Result<Vec<BigInt>> {
    if v.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroVector);
    }
    let mut g = BigInt::zero();
    for x in v {
        g = g.gcd(x);
    }
    Ok(v.iter().map(|x| x / &g).collect())
}

/// Clear denominators of a rational vector and reduce to a primitive
/// integer vector pointing the same way.
pub fn primitive_direction(v: &[BigRational]) -> Result<Vec<BigInt>> {
    if v.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroVector);
    }
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect();
    make_primitive(&ints)
}

/// A complex-rational pair of coordinate vectors (real and imaginary parts).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPair {
    pub re: Vec<BigRational>,
    pub im: Vec<BigRational>,
}

/// Lift a class, given in free cokernel coordinates, to the source `Z^t`.
///
/// The real parts of the returned lift are normalized to `[0, 1)`.
/// Presentations with torsion are refused: the requested coefficients live
/// in `C/Z` and an exact lift through a torsion class is not well defined
/// at that level.
pub fn lift_class(p: &CokernelPresentation, re: &[BigRational], im: &[BigRational]) -> Result<RatPair> {
    if !p.is_torsion_free() {
        return Err(Error::TorsionObstruction);
    }
    if re.len() != p.free_rank || im.len() != p.free_rank {
        return Err(Error::ShapeMismatch(format!(
            "class has {}+{} coordinates, cokernel free rank is {}",
            re.len(),
            im.len(),
            p.free_rank
        )));
    }
    let t = p.source_dim;
    let rank = t - p.free_rank;
    let u_inv = inverse_unimodular(&p.smith.u)?;
    let mut lift_re = vec![BigRational::zero(); t];
    let mut lift_im = vec![BigRational::zero(); t];
    for i in 0..t {
        for (j, idx) in (rank..t).enumerate() {
            let coeff = BigRational::from(u_inv.get(i, idx).clone());
            lift_re[i] += &coeff * &re[j];
            lift_im[i] += &coeff * &im[j];
        }
    }
    for x in lift_re.iter_mut() {
        *x = fract_mod_one(x);
    }
    Ok(RatPair { re: lift_re, im: lift_im })
}

/// Reduce a rational to its representative in `[0, 1)`.
pub fn fract_mod_one(x: &BigRational) -> BigRational {
    let f = x.floor();
    x - f
}

/// Exact inverse of a unimodular integer matrix.
pub fn inverse_unimodular(m: &IntMatrix) -> Result<IntMatrix> {
    if m.rows() != m.cols() {
        return Err(Error::ShapeMismatch("inverse of a non-square matrix".into()));
    }
    let n = m.rows();
    let rat = |x: &BigInt| BigRational::from(x.clone());
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|r| (0..n).map(|c| rat(m.get(r, c))).collect())
        .collect();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    if r == c {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::ShapeMismatch("singular matrix has no inverse".into()))?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let d = a[col][col].clone();
        for c in 0..n {
            a[col][c] /= &d;
            inv[col][c] /= &d;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..n {
                    let av = &a[col][c] * &f;
                    a[r][c] -= av;
                    let iv = &inv[col][c] * &f;
                    inv[r][c] -= iv;
                }
            }
        }
    }
    let mut out = IntMatrix::zero(n, n);
    for r in 0..n {
        for c in 0..n {
            if !inv[r][c].denom().is_one() {
                return Err(Error::ShapeMismatch(
                    "matrix is not unimodular; inverse is fractional".into(),
                ));
            }
            out.set(r, c, inv[r][c].numer().clone());
        }
    }
    Ok(out)
}

/// Rank over the rationals by Gaussian elimination.
pub fn rational_rank(m: &IntMatrix) -> usize {
    let mut a: Vec<Vec<BigRational>> = m
        .row_slices()
        .map(|row| row.iter().map(|x| BigRational::from(x.clone())).collect())
        .collect();
    let rows = m.rows();
    let cols = m.cols();
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, piv);
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
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Solve `M x = b` over the rationals. Returns one solution if consistent.
pub fn solve_rational(m: &IntMatrix, b: &[BigRational]) -> Result<Option<Vec<BigRational>>> {
    if b.len() != m.rows() {
        return Err(Error::ShapeMismatch(format!(
            "system {}x{} with rhs of length {}",
            m.rows(),
            m.cols(),
            b.len()
        )));
    }
    let rows = m.rows();
    let cols = m.cols();
    let mut a: Vec<Vec<BigRational>> = (0..rows)
        .map(|r| {
            let mut row: Vec<BigRational> = m
                .row(r)
                .into_iter()
                .map(BigRational::from)
                .collect();
            row.push(b[r].clone());
            row
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, piv);
        let d = a[rank][col].clone();
        for c in 0..=cols {
            a[rank][c] /= &d;
        }
        for r in 0..rows {
            if r != rank && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..=cols {
                    let v = &a[rank][c] * &f;
                    a[r][c] -= v;
                }
            }
        }
        pivots.push((rank, col));
        rank += 1;
        if rank == rows {
            break;
        }
    }
    for r in rank..rows {
        if !a[r][cols].is_zero() {
            return Ok(None);
        }
    }
    let mut x = vec![BigRational::zero(); cols];
    for (r, c) in pivots {
        x[c] = a[r][cols].clone();
    }
    Ok(Some(x))
}

/// Row-style Hermite normal form of the lattice spanned by the rows.
///
/// Each pivot is positive, entries below a pivot are zero, and entries above
/// are reduced into `[0, pivot)`. Two row sets span the same lattice iff
/// their HNFs are identical, which is what makes this the canonical form for
/// cokernel projections and relation matrices.
pub fn row_hermite_normal_form(m: &IntMatrix) -> IntMatrix {
    let mut rows: Vec<Vec<BigInt>> = m.row_slices().map(|r| r.to_vec()).collect();
    let cols = m.cols();
    let mut pivot_row = 0;
    let mut pivot_cols = Vec::new();
    for col in 0..cols {
        // Euclidean reduction within this column.
        loop {
            let nonzero: Vec<usize> = (pivot_row..rows.len())
                .filter(|&r| !rows[r][col].is_zero())
                .collect();
            if nonzero.is_empty() {
                break;
            }
            let &min_r = nonzero
                .iter()
                .min_by_key(|&&r| rows[r][col].abs())
                .expect("nonempty");
            rows.swap(pivot_row, min_r);
            if rows[pivot_row][col].sign() == Sign::Minus {
                for v in rows[pivot_row].iter_mut() {
                    *v = -&*v;
                }
            }
            let mut done = true;
            let pin = rows[pivot_row].clone();
            for r in pivot_row + 1..rows.len() {
                if !rows[r][col].is_zero() {
                    let q = div_nearest(&rows[r][col], &pin[col]);
                    for c in 0..cols {
                        let v = &rows[r][c] - &q * &pin[c];
                        rows[r][c] = v;
                    }
                    if !rows[r][col].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if pivot_row < rows.len() && !rows[pivot_row][col].is_zero() {
            pivot_cols.push((pivot_row, col));
            pivot_row += 1;
        }
        if pivot_row == rows.len() {
            break;
        }
    }
    // Reduce entries above each pivot.
    for &(pr, pc) in pivot_cols.iter().rev() {
        let pin = rows[pr].clone();
        for r in 0..pr {
            let q = rows[r][pc].div_floor(&pin[pc]);
            if !q.is_zero() {
                for c in 0..cols {
                    let v = &rows[r][c] - &q * &pin[c];
                    rows[r][c] = v;
                }
            }
        }
    }
    let kept: Vec<Vec<BigInt>> = rows
        .into_iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    IntMatrix::from_bigint_rows(&kept).expect("rows stay rectangular")
}

/// Integer right inverse `R` of a surjective map: `M * R = Id`.
///
/// Pivot columns are chosen from the right, so the support of the inverse
/// sits on the latest columns that allow a unimodular solve; falls back to a
/// Smith-form solve when no such column set exists.
pub fn right_inverse_preferring_late_columns(m: &IntMatrix) -> Result<IntMatrix> {
    let k = m.rows();
    let n = m.cols();
    if k == 0 {
        return Ok(IntMatrix::zero(n, 0));
    }
    // Greedy from the right: take columns that increase the rank.
    let mut chosen: Vec<usize> = Vec::new();
    for col in (0..n).rev() {
        if chosen.len() == k {
            break;
        }
        let mut trial = chosen.clone();
        trial.push(col);
        trial.sort_unstable();
        let sub = select_cols(m, &trial);
        if rational_rank(&sub) == trial.len() {
            chosen.push(col);
            chosen.sort_unstable();
        }
    }
    if chosen.len() == k {
        let sub = select_cols(m, &chosen);
        if let Ok(sub_inv) = inverse_unimodular(&sub) {
            let mut out = IntMatrix::zero(n, k);
            for (i, &col) in chosen.iter().enumerate() {
                for j in 0..k {
                    out.set(col, j, sub_inv.get(i, j).clone());
                }
            }
            return Ok(out);
        }
    }
    // General integer solve via Smith form: M = U^-1 D V^-1.
    let snf = smith_normal_form(m);
    if snf.rank() < k {
        return Err(Error::ShapeMismatch("matrix is not surjective".into()));
    }
    let u_inv = inverse_unimodular(&snf.u)?;
    let mut w = IntMatrix::zero(n, k);
    for i in 0..k {
        let f = &snf.invariant_factors[i];
        for j in 0..k {
            let num = u_inv.get(i, j);
            if num.is_multiple_of(f) {
                w.set(i, j, num / f);
            } else {
                return Err(Error::ShapeMismatch(
                    "matrix is not surjective over the integers".into(),
                ));
            }
        }
    }
    snf.v.mul(&w)
}

fn select_cols(m: &IntMatrix, cols: &[usize]) -> IntMatrix {
    let mut out = IntMatrix::zero(m.rows(), cols.len());
    for r in 0..m.rows() {
        for (j, &c) in cols.iter().enumerate() {
            out.set(r, j, m.get(r, c).clone());
        }
    }
    out
}

/// Check `b = g a` and `a = h b` for integer `g`, `h`: the two full-row-rank
/// matrices present the same quotient up to unimodular change of target basis.
pub fn same_projection_up_to_unimodular(a: &IntMatrix, b: &IntMatrix) -> bool {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return false;
    }
    row_hermite_normal_form(a) == row_hermite_normal_form(b)
}
