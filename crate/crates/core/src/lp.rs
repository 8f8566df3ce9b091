//! Exact rational linear programming.
//!
//! A dense two-phase simplex over `BigRational` with Bland's anticycling
//! rule. Termination is guaranteed and every verdict (optimal, unbounded,
//! infeasible) is exact, which is what the polyhedral layer needs for
//! interior points, redundancy removal, and vertex tests. Problems here are
//! tiny (tens of rows), so no effort is spent on sparsity.

use num::{BigRational, One, Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub rel: Relation,
    pub rhs: BigRational,
}

impl Constraint {
    pub fn le(coeffs: Vec<BigRational>, rhs: BigRational) -> Self {
        Constraint { coeffs, rel: Relation::Le, rhs }
    }
    pub fn ge(coeffs: Vec<BigRational>, rhs: BigRational) -> Self {
        Constraint { coeffs, rel: Relation::Ge, rhs }
    }
    pub fn eq(coeffs: Vec<BigRational>, rhs: BigRational) -> Self {
        Constraint { coeffs, rel: Relation::Eq, rhs }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpResult {
    Optimal { value: BigRational, point: Vec<BigRational> },
    Unbounded,
    Infeasible,
}

/// Maximize `objective . x` over free variables subject to the constraints.
pub fn maximize(objective: &[BigRational], constraints: &[Constraint]) -> LpResult {
    solve(objective, constraints, false)
}

/// Maximize over variables constrained to be nonnegative.
pub fn maximize_nonneg(objective: &[BigRational], constraints: &[Constraint]) -> LpResult {
    solve(objective, constraints, true)
}

/// A feasible point of the system over nonnegative variables, if any.
pub fn feasible_nonneg(constraints: &[Constraint], n_vars: usize) -> Option<Vec<BigRational>> {
    match solve(&vec![BigRational::zero(); n_vars], constraints, true) {
        LpResult::Optimal { point, .. } => Some(point),
        _ => None,
    }
}

fn solve(objective: &[BigRational], constraints: &[Constraint], nonneg: bool) -> LpResult {
    let n_orig = objective.len();
    debug_assert!(constraints.iter().all(|c| c.coeffs.len() == n_orig));

    // Standard form: nonnegative variables, equalities, rhs >= 0.
    // Free variables are split x = u - v.
    let n_struct = if nonneg { n_orig } else { 2 * n_orig };
    let struct_coeff = |c: &Constraint, j: usize| -> BigRational {
        if nonneg {
            c.coeffs[j].clone()
        } else if j.is_multiple_of(2) {
            c.coeffs[j / 2].clone()
        } else {
            -c.coeffs[j / 2].clone()
        }
    };

    let m = constraints.len();
    let n_slack = constraints.iter().filter(|c| c.rel != Relation::Eq).count();
    let n_total = n_struct + n_slack + m; // + artificials, one per row

    // rows[i] = coefficients | rhs
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    let mut slack_idx = 0usize;
    for (i, c) in constraints.iter().enumerate() {
        let mut row = vec![BigRational::zero(); n_total + 1];
        let flip = c.rhs.is_negative();
        let sgn = |x: BigRational| if flip { -x } else { x };
        for j in 0..n_struct {
            row[j] = sgn(struct_coeff(c, j));
        }
        if c.rel != Relation::Eq {
            let s = match (c.rel, flip) {
                (Relation::Le, false) | (Relation::Ge, true) => BigRational::one(),
                _ => -BigRational::one(),
            };
            row[n_struct + slack_idx] = s;
            slack_idx += 1;
        }
        row[n_struct + n_slack + i] = BigRational::one();
        row[n_total] = sgn(c.rhs.clone());
        rows.push(row);
    }

    let mut basis: Vec<usize> = (0..m).map(|i| n_struct + n_slack + i).collect();

    // Phase 1: minimize the sum of artificials.
    let mut phase1_cost = vec![BigRational::zero(); n_total];
    for j in n_struct + n_slack..n_total {
        phase1_cost[j] = BigRational::one();
    }
    let p1 = run_simplex(&mut rows, &mut basis, &phase1_cost, n_total);
    debug_assert!(p1 != SimplexOutcome::Unbounded, "phase 1 is bounded below by 0");
    let p1_value: BigRational = basis
        .iter()
        .enumerate()
        .filter(|(_, &b)| b >= n_struct + n_slack)
        .map(|(i, _)| rows[i][n_total].clone())
        .sum();
    if !p1_value.is_zero() {
        return LpResult::Infeasible;
    }

    // Drive any residual (zero-valued) artificials out of the basis.
    let art_start = n_struct + n_slack;
    let mut drop_rows = Vec::new();
    for i in 0..rows.len() {
        if basis[i] >= art_start {
            let piv = (0..art_start).find(|&j| !rows[i][j].is_zero());
            match piv {
                Some(j) => pivot(&mut rows, &mut basis, i, j, n_total),
                None => drop_rows.push(i),
            }
        }
    }
    for &i in drop_rows.iter().rev() {
        rows.remove(i);
        basis.remove(i);
    }

    // Phase 2 on the original objective (maximize = minimize the negation),
    // with artificial columns frozen out.
    let mut cost = vec![BigRational::zero(); n_total];
    for j in 0..n_struct {
        let c = if nonneg {
            objective[j].clone()
        } else if j % 2 == 0 {
            objective[j / 2].clone()
        } else {
            -objective[j / 2].clone()
        };
        cost[j] = -c;
    }
    match run_simplex_restricted(&mut rows, &mut basis, &cost, n_total, art_start) {
        SimplexOutcome::Unbounded => LpResult::Unbounded,
        SimplexOutcome::Optimal => {
            let mut z = vec![BigRational::zero(); n_total];
            for (i, &b) in basis.iter().enumerate() {
                z[b] = rows[i][n_total].clone();
            }
            let point: Vec<BigRational> = if nonneg {
                z[..n_orig].to_vec()
            } else {
                (0..n_orig).map(|i| &z[2 * i] - &z[2 * i + 1]).collect()
            };
            let value = objective
                .iter()
                .zip(point.iter())
                .map(|(c, x)| c * x)
                .sum();
            LpResult::Optimal { value, point }
        }
    }
}

#[derive(PartialEq, Eq, Debug)]
enum SimplexOutcome {
    Optimal,
    Unbounded,
}

fn run_simplex(
    rows: &mut Vec<Vec<BigRational>>,
    basis: &mut Vec<usize>,
    cost: &[BigRational],
    n_total: usize,
) -> SimplexOutcome {
    run_simplex_restricted(rows, basis, cost, n_total, n_total)
}

/// Bland's rule simplex; columns `>= col_limit` are never entered.
///
/// The reduced-cost row is carried along and updated by the same pivots as
/// the tableau, so entering-column selection is a single scan.
fn run_simplex_restricted(
    rows: &mut Vec<Vec<BigRational>>,
    basis: &mut Vec<usize>,
    cost: &[BigRational],
    n_total: usize,
    col_limit: usize,
) -> SimplexOutcome {
    let mut reduced: Vec<BigRational> = cost.to_vec();
    reduced.push(BigRational::zero());
    for (i, &b) in basis.iter().enumerate() {
        if !cost[b].is_zero() {
            let f = cost[b].clone();
            for j in 0..=n_total {
                let v = &rows[i][j] * &f;
                reduced[j] -= v;
            }
        }
    }
    loop {
        // Bland: lowest-index negative reduced cost enters.
        let entering = (0..col_limit).find(|&j| reduced[j].is_negative());
        let Some(e) = entering else {
            return SimplexOutcome::Optimal;
        };

        // Ratio test; Bland tie-break on the basic variable index.
        let mut leaving: Option<(usize, BigRational)> = None;
        for i in 0..rows.len() {
            if rows[i][e].is_positive() {
                let ratio = &rows[i][n_total] / &rows[i][e];
                match &leaving {
                    None => leaving = Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < *lr || (ratio == *lr && basis[i] < basis[*li]) {
                            leaving = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((l, _)) = leaving else {
            return SimplexOutcome::Unbounded;
        };
        pivot(rows, basis, l, e, n_total);
        if !reduced[e].is_zero() {
            let f = reduced[e].clone();
            for j in 0..=n_total {
                let v = &rows[l][j] * &f;
                reduced[j] -= v;
            }
        }
    }
}

fn pivot(rows: &mut [Vec<BigRational>], basis: &mut [usize], r: usize, c: usize, n_total: usize) {
    let p = rows[r][c].clone();
    for j in 0..=n_total {
        rows[r][j] /= &p;
    }
    for i in 0..rows.len() {
        if i != r && !rows[i][c].is_zero() {
            let f = rows[i][c].clone();
            for j in 0..=n_total {
                let v = &rows[r][j] * &f;
                rows[i][j] -= v;
            }
        }
    }
    basis[r] = c;
}
