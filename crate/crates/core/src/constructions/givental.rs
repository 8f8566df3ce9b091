//! Givental / Hori-Vafa presentations of the dual model: binomial relations
//! cut out of affine space, the sum-of-coordinates superpotential, and the
//! weight-matrix identification between the two recipes.

use std::collections::BTreeSet;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::linalg::{self, IntMatrix};
use crate::lineardata::ToricLGModel;
use crate::lp::{self, Constraint};
use crate::{Error, Result};

/// The affine presentation: variables `x_1..x_r` (one per base divisor) and
/// `y_1..y_c` (one per summand), relations
/// `prod x_v^{m_iv} = Q_i prod y_j^{d_ij}`, and `F = sum x + sum y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GiventalPresentation {
    pub num_base_vars: usize,
    pub num_fiber_vars: usize,
    /// `m`: rows are relation exponents over the base variables.
    pub relation_weights: IntMatrix,
    /// `d`: rows are the fiber-variable degrees of each relation.
    pub relation_degrees: IntMatrix,
    /// `q_hat` exponents: row `v` gives `q_hat_v = prod_i Q_i^{entry}`,
    /// an exact integer solution of `sum_v m_iv t_hat_v = t_i`.
    pub qhat_exponents: IntMatrix,
    /// Characters of the dual variety the variables map to: row `v` is the
    /// exponent vector of `xi'_v` (for `v < r`) or `xi_j` (fiber rows).
    pub variable_characters: IntMatrix,
}

impl GiventalPresentation {
    /// Human-readable relation strings, e.g. `x1*x3 = Q1*y1^2`.
    pub fn relation_strings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for i in 0..self.relation_weights.rows() {
            let lhs = monomial_string("x", &self.relation_weights.row(i));
            let rhs_y = monomial_string("y", &self.relation_degrees.row(i));
            let rhs = if rhs_y == "1" {
                format!("Q{}", i + 1)
            } else {
                format!("Q{}*{}", i + 1, rhs_y)
            };
            out.push(format!("{lhs} = {rhs}"));
        }
        out
    }

    pub fn superpotential_string(&self) -> String {
        let xs = (1..=self.num_base_vars).map(|v| format!("x{v}"));
        let ys = (1..=self.num_fiber_vars).map(|j| format!("y{j}"));
        xs.chain(ys).collect::<Vec<_>>().join(" + ")
    }

    /// The variable map as strings, `x_v = q_hat_v * <character monomial>`.
    pub fn variable_map_strings(&self) -> Vec<String> {
        let n_primed = self.variable_characters.cols();
        let mut out = Vec::new();
        for v in 0..self.num_base_vars {
            let q = qhat_string(&self.qhat_exponents.row(v));
            let ch = primed_monomial_string(&self.variable_characters.row(v), n_primed);
            let rhs = match (q.as_str(), ch.as_str()) {
                ("1", c) => c.to_string(),
                (q, "1") => q.to_string(),
                (q, c) => format!("{q}*{c}"),
            };
            out.push(format!("x{} = {}", v + 1, rhs));
        }
        for j in 0..self.num_fiber_vars {
            let ch = primed_monomial_string(
                &self.variable_characters.row(self.num_base_vars + j),
                n_primed,
            );
            out.push(format!("y{} = {}", j + 1, ch));
        }
        out
    }
}

fn monomial_string(var: &str, exponents: &[BigInt]) -> String {
    let mut parts = Vec::new();
    for (i, e) in exponents.iter().enumerate() {
        if e.is_zero() {
            continue;
        }
        if e.is_one() {
            parts.push(format!("{var}{}", i + 1));
        } else {
            parts.push(format!("{var}{}^{}", i + 1, e));
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn qhat_string(exponents: &[BigInt]) -> String {
    let mut parts = Vec::new();
    for (i, e) in exponents.iter().enumerate() {
        if e.is_zero() {
            continue;
        }
        if e.is_one() {
            parts.push(format!("Q{}", i + 1));
        } else {
            parts.push(format!("Q{}^{}", i + 1, e));
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn primed_monomial_string(character: &[BigInt], n: usize) -> String {
    let mut parts = Vec::new();
    for (i, e) in character.iter().take(n).enumerate() {
        if e.is_zero() {
            continue;
        }
        if e.is_one() {
            parts.push(format!("z{}'", i + 1));
        } else {
            parts.push(format!("z{}'^{}", i + 1, e));
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Read the presentation off a sigma-built model: the relation exponents
/// are the rows of the (Hermite-normalized) cokernel projection of the
/// total space's div matrix, split into base and fiber columns.
///
/// `basis_override`, when given, must span the same row lattice; it
/// replaces the canonical basis (the positive-basis choice is the user's).
pub fn givental_presentation(
    model: &ToricLGModel,
    basis_override: Option<&IntMatrix>,
) -> Result<GiventalPresentation> {
    let blocks = model
        .blocks()
        .ok_or_else(|| Error::BlockStructure("model carries no block metadata".into()))?;
    if blocks.mon_is_a_side {
        return Err(Error::BlockStructure(
            "expected a sigma-built model (the superpotential on the B side)".into(),
        ));
    }
    if !blocks.base_complete {
        return Err(Error::InvalidInput(
            "the presentation needs a complete base (set the complete flag)".into(),
        ));
    }
    let r = blocks.base_rows;
    let c = blocks.c;
    let div_x = model.a_side().matrix();
    let coker = model.a_side().coker();
    coker.require_torsion_free()?;

    let canonical = linalg::row_hermite_normal_form(&coker.projection);
    let projection = match basis_override {
        None => canonical,
        Some(user) => {
            if linalg::row_hermite_normal_form(user) != canonical {
                return Err(Error::InvalidInput(
                    "basis override does not span the relation lattice".into(),
                ));
            }
            user.clone()
        }
    };
    let relation_weights = projection.slice_cols(0, r);
    // d_ij = -projection over the fiber columns.
    let mut relation_degrees = IntMatrix::zero(projection.rows(), c);
    for i in 0..projection.rows() {
        for j in 0..c {
            relation_degrees.set(i, j, -projection.get(i, r + j));
        }
    }
    let qhat_exponents = if projection.rows() == 0 {
        IntMatrix::zero(r, 0)
    } else {
        linalg::right_inverse_preferring_late_columns(&relation_weights)?
    };
    Ok(GiventalPresentation {
        num_base_vars: r,
        num_fiber_vars: c,
        relation_weights,
        relation_degrees,
        qhat_exponents,
        variable_characters: div_x.clone(),
    })
}

/// The Hori-Vafa data computed independently, with the equality certificate
/// against the Givental route.
#[derive(Clone, Debug)]
pub struct HvPresentation {
    pub givental: GiventalPresentation,
    /// Weight matrix of the torus action in the quotient presentation,
    /// computed from the base cokernel alone.
    pub weight_matrix: IntMatrix,
    /// Degrees of the defining polynomials under each torus factor.
    pub degree_matrix: IntMatrix,
    /// The parameter identification carries a sign: `t_i` on one side is
    /// `-t_i` on the other.
    pub t_sign_flipped: bool,
}

/// Compute the Hori-Vafa weight and degree matrices from the base variety's
/// cokernel and certify they agree with the Givental presentation.
pub fn hv_presentation(model: &ToricLGModel) -> Result<HvPresentation> {
    let blocks = model
        .blocks()
        .ok_or_else(|| Error::BlockStructure("model carries no block metadata".into()))?;
    let givental = givental_presentation(model, None)?;
    let base_coker = linalg::cokernel(&blocks.base_div);
    base_coker.require_torsion_free()?;
    let weight_matrix = linalg::row_hermite_normal_form(&base_coker.projection);
    // Degree of summand j under torus factor i: the weight of D_j.
    let mut degree_matrix = IntMatrix::zero(weight_matrix.rows(), blocks.c);
    for j in 0..blocks.c {
        let d = blocks.divisors.column(j);
        let cls = weight_matrix.mul_vec(&d)?;
        for (i, v) in cls.into_iter().enumerate() {
            degree_matrix.set(i, j, v);
        }
    }
    if weight_matrix != givental.relation_weights || degree_matrix != givental.relation_degrees {
        return Err(Error::InternalConsistency(
            "the quotient-presentation weights disagree with the relation exponents".into(),
        ));
    }
    Ok(HvPresentation { givental, weight_matrix, degree_matrix, t_sign_flipped: true })
}

/// Outcome of the bounded semigroup-generation check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SemigroupVerdict {
    /// Every cone lattice point in the box is a nonnegative integer
    /// combination of the rows.
    Generated { points_checked: usize },
    /// A cone point that is not generated.
    Counterexample(Vec<BigInt>),
    /// The rows do not lie in an open half-space, so the bounded search has
    /// no termination certificate.
    NoPositiveFunctional,
}

/// Do the rows generate, as a semigroup, every lattice point of the cone
/// they span — tested inside the box `[-bound, bound]^dim`?
pub fn semigroup_generation_check_rows(rows: &IntMatrix, bound: i64) -> Result<SemigroupVerdict> {
    let dim = rows.cols();
    let m = rows.rows();
    // A functional with value >= 1 on every row bounds the search depth.
    let functional: Option<Vec<BigRational>> = {
        let cons: Vec<Constraint> = (0..m)
            .map(|i| {
                Constraint::ge(
                    rows.row(i).into_iter().map(BigRational::from).collect(),
                    BigRational::one(),
                )
            })
            .collect();
        match lp::maximize(&vec![BigRational::zero(); dim], &cons) {
            lp::LpResult::Optimal { point, .. } => Some(point),
            _ => None,
        }
    };
    let Some(functional) = functional else {
        return Ok(SemigroupVerdict::NoPositiveFunctional);
    };

    let row_vecs: Vec<Vec<BigInt>> = rows.row_slices().map(|r| r.to_vec()).collect();
    let mut checked = 0usize;
    let mut cursor = vec![-bound; dim];
    loop {
        let point: Vec<BigInt> = cursor.iter().map(|&x| BigInt::from(x)).collect();
        if in_cone(&row_vecs, &point, dim) {
            checked += 1;
            let mut dead: BTreeSet<Vec<BigInt>> = BTreeSet::new();
            if !generated(&row_vecs, &functional, &point, &mut dead) {
                return Ok(SemigroupVerdict::Counterexample(point));
            }
        }
        // odometer over the box
        let mut i = dim;
        let mut advanced = false;
        while i > 0 {
            i -= 1;
            if cursor[i] < bound {
                cursor[i] += 1;
                for v in cursor.iter_mut().skip(i + 1) {
                    *v = -bound;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            break;
        }
    }
    Ok(SemigroupVerdict::Generated { points_checked: checked })
}

/// Semigroup check on a sigma-built model's A-side rows; the generation
/// statement assumes a smooth base, which the data asserts by flag.
pub fn semigroup_generation_check(model: &ToricLGModel, bound: i64) -> Result<SemigroupVerdict> {
    let blocks = model
        .blocks()
        .ok_or_else(|| Error::BlockStructure("model carries no block metadata".into()))?;
    if !blocks.base_smooth {
        return Err(Error::InvalidInput(
            "the generation statement assumes a smooth base (set the smooth flag)".into(),
        ));
    }
    semigroup_generation_check_rows(model.a_side().matrix(), bound)
}

fn in_cone(rows: &[Vec<BigInt>], point: &[BigInt], dim: usize) -> bool {
    // point = sum lambda_i row_i with lambda >= 0, solved exactly.
    let mut cons = Vec::with_capacity(dim);
    for d in 0..dim {
        let coeffs: Vec<BigRational> =
            rows.iter().map(|r| BigRational::from(r[d].clone())).collect();
        cons.push(Constraint::eq(coeffs, BigRational::from(point[d].clone())));
    }
    lp::feasible_nonneg(&cons, rows.len()).is_some()
}

/// Bounded DFS for a nonnegative integer combination; depth is bounded by
/// the functional, which drops by at least 1 per step.
fn generated(
    rows: &[Vec<BigInt>],
    functional: &[BigRational],
    target: &[BigInt],
    dead: &mut BTreeSet<Vec<BigInt>>,
) -> bool {
    if target.iter().all(|x| x.is_zero()) {
        return true;
    }
    let value: BigRational = functional
        .iter()
        .zip(target.iter())
        .map(|(f, t)| f * BigRational::from(t.clone()))
        .sum();
    if value.is_negative() {
        return false;
    }
    if dead.contains(target) {
        return false;
    }
    for row in rows {
        let next: Vec<BigInt> = target.iter().zip(row.iter()).map(|(t, r)| t - r).collect();
        if generated(rows, functional, &next, dead) {
            return true;
        }
    }
    dead.insert(target.to_vec());
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lineardata::ComplexLift;
    use crate::sigma::{build_lg, SectionSpec, SplitBundleData, ToricVarietyData};

    fn iv(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }
    fn lift_im(v: &[i64]) -> Vec<ComplexLift> {
        v.iter()
            .map(|&x| ComplexLift::from_im(BigRational::from(BigInt::from(x))))
            .collect()
    }

    fn elliptic_model() -> ToricLGModel {
        let base = ToricVarietyData::new(
            vec!["x0".into(), "y0".into(), "x_inf".into(), "y_inf".into()],
            IntMatrix::from_rows(&[vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]]),
            true,
            true,
        )
        .unwrap();
        let bundle = SplitBundleData::new(base, vec![iv(&[1, 1, 1, 1])]).unwrap();
        build_lg(&bundle, &lift_im(&[1, 1, 1, 1]), &SectionSpec::Generic).unwrap()
    }

    #[test]
    fn elliptic_relations() {
        let pres = givental_presentation(&elliptic_model(), None).unwrap();
        assert_eq!(
            pres.relation_weights,
            IntMatrix::from_rows(&[vec![1, 0, 1, 0], vec![0, 1, 0, 1]])
        );
        assert_eq!(pres.relation_degrees, IntMatrix::from_rows(&[vec![2], vec![2]]));
        assert_eq!(
            pres.relation_strings(),
            vec!["x1*x3 = Q1*y1^2", "x2*x4 = Q2*y1^2"]
        );
        assert_eq!(pres.superpotential_string(), "x1 + x2 + x3 + x4 + y1");
        // q_hat = (1, 1, Q1, Q2).
        assert_eq!(
            pres.qhat_exponents,
            IntMatrix::from_rows(&[vec![0, 0], vec![0, 0], vec![1, 0], vec![0, 1]])
        );
        let map = pres.variable_map_strings();
        assert_eq!(
            map,
            vec![
                "x1 = z1'*z3'",
                "x2 = z2'*z3'",
                "x3 = Q1*z1'^-1*z3'",
                "x4 = Q2*z2'^-1*z3'",
                "y1 = z3'",
            ]
        );
    }

    #[test]
    fn hv_certificate_on_elliptic() {
        let hv = hv_presentation(&elliptic_model()).unwrap();
        assert_eq!(hv.weight_matrix, hv.givental.relation_weights);
        assert_eq!(hv.degree_matrix, hv.givental.relation_degrees);
        assert!(hv.t_sign_flipped);
    }

    #[test]
    fn semigroup_checks() {
        let model = elliptic_model();
        assert!(matches!(
            semigroup_generation_check(&model, 4).unwrap(),
            SemigroupVerdict::Generated { .. }
        ));
        // Non-smooth cone: (1,1) lies in the cone of (1,0),(1,2) but is not
        // an integer combination.
        let rows = IntMatrix::from_rows(&[vec![1, 0], vec![1, 2]]);
        match semigroup_generation_check_rows(&rows, 2).unwrap() {
            SemigroupVerdict::Counterexample(p) => assert_eq!(p, iv(&[1, 1])),
            other => panic!("expected a counterexample, got {other:?}"),
        }
        // Rank one.
        let single = IntMatrix::from_rows(&[vec![1]]);
        assert!(matches!(
            semigroup_generation_check_rows(&single, 4).unwrap(),
            SemigroupVerdict::Generated { .. }
        ));
    }

    #[test]
    fn single_relation_on_the_line() {
        // Degree-2 bundle over P1: one relation from the 1-row cokernel.
        let base = ToricVarietyData::new(
            vec!["r0".into(), "r_inf".into()],
            IntMatrix::from_rows(&[vec![1], vec![-1]]),
            true,
            true,
        )
        .unwrap();
        let bundle = SplitBundleData::new(base, vec![iv(&[1, 1])]).unwrap();
        let model = build_lg(&bundle, &lift_im(&[1, 1]), &SectionSpec::Generic).unwrap();
        let pres = givental_presentation(&model, None).unwrap();
        assert_eq!(pres.relation_strings(), vec!["x1*x2 = Q1*y1^2"]);
        assert_eq!(pres.superpotential_string(), "x1 + x2 + y1");
    }

    #[test]
    fn hv_certificate_on_random_models() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(0x68760001);
        let bases: Vec<Vec<Vec<i64>>> = vec![
            vec![vec![1], vec![-1]],
            vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]],
            vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
        ];
        for _ in 0..25 {
            let rows = bases[rng.gen_range(0..bases.len())].clone();
            let r = rows.len();
            let base = ToricVarietyData::new(
                (0..r).map(|i| format!("r{i}")).collect(),
                IntMatrix::from_rows(&rows),
                true,
                true,
            )
            .unwrap();
            let divisors: Vec<Vec<BigInt>> = (0..rng.gen_range(1..=2))
                .map(|_| loop {
                    let cand: Vec<i64> = (0..r).map(|_| rng.gen_range(0i64..=1)).collect();
                    if cand.iter().any(|&x| x > 0) {
                        return cand.into_iter().map(BigInt::from).collect();
                    }
                })
                .collect();
            let bundle = SplitBundleData::new(base, divisors).unwrap();
            let k: Vec<ComplexLift> = (0..r)
                .map(|_| ComplexLift::from_im(BigRational::from(BigInt::from(1))))
                .collect();
            let model = build_lg(&bundle, &k, &SectionSpec::Generic).unwrap();
            let hv = hv_presentation(&model).unwrap();
            assert_eq!(hv.weight_matrix, hv.givental.relation_weights);
            assert_eq!(hv.degree_matrix, hv.givental.relation_degrees);
        }
    }

    #[test]
    fn zero_relation_case() {
        // A base with trivial class group: the affine line. Its divisor
        // polytope is unbounded, so the section has to be explicit.
        let base = ToricVarietyData::new(
            vec!["r".into()],
            IntMatrix::from_rows(&[vec![1]]),
            true,
            true,
        )
        .unwrap();
        let bundle = SplitBundleData::new(base, vec![iv(&[1])]).unwrap();
        let section = crate::sigma::SectionSpec::Explicit(vec![
            crate::sigma::ExplicitTerm {
                bundle_index: 0,
                exponent: iv(&[0]),
                coeff: ComplexLift::zero(),
            },
            crate::sigma::ExplicitTerm {
                bundle_index: 0,
                exponent: iv(&[-1]),
                coeff: ComplexLift::zero(),
            },
        ]);
        let model = build_lg(&bundle, &lift_im(&[1]), &section).unwrap();
        let pres = givental_presentation(&model, None).unwrap();
        assert_eq!(pres.relation_weights.rows(), 0);
        assert_eq!(pres.superpotential_string(), "x1 + y1");
    }
}
