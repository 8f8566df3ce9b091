//! Berglund-Hübsch transposition: mirror weights from the left kernel of
//! the transposed augmented exponent matrix.

use num::{BigInt, One, Signed, Zero};

use crate::linalg::{self, IntMatrix};
use crate::{Error, Result};

/// A weighted-homogeneous hypersurface datum: positive weights, their sum
/// as the degree, and a square invertible matrix whose columns are the
/// exponent vectors of the defining polynomial's terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BHData {
    pub weights: Vec<BigInt>,
    pub degree: BigInt,
    pub exponents: IntMatrix,
}

impl BHData {
    pub fn new(weights: Vec<BigInt>, exponents: IntMatrix) -> Result<Self> {
        let n = weights.len();
        if n == 0 {
            return Err(Error::InvalidInput("no weights given".into()));
        }
        if weights.iter().any(|w| !w.is_positive()) {
            return Err(Error::InvalidInput("weights must be positive".into()));
        }
        if exponents.rows() != n || exponents.cols() != n {
            return Err(Error::ShapeMismatch(format!(
                "exponent matrix is {}x{}, expected {}x{}",
                exponents.rows(),
                exponents.cols(),
                n,
                n
            )));
        }
        let degree: BigInt = weights.iter().sum();
        for col in 0..n {
            let wdeg: BigInt = (0..n).map(|row| &weights[row] * exponents.get(row, col)).sum();
            if wdeg != degree {
                return Err(Error::InvalidInput(format!(
                    "column {} has weighted degree {}, expected {}",
                    col + 1,
                    wdeg,
                    degree
                )));
            }
        }
        if exponents.rank() < n {
            return Err(Error::InvalidInput(
                "exponent matrix is singular; the transpose construction needs it invertible"
                    .into(),
            ));
        }
        Ok(BHData { weights, degree, exponents })
    }

    /// `[[P, 1], [1, 1]]`: exponent columns extended by the product of all
    /// variables, weights extended by the degree.
    pub fn augmented(&self) -> IntMatrix {
        let n = self.weights.len();
        let mut m = IntMatrix::zero(n + 1, n + 1);
        for r in 0..n {
            for c in 0..n {
                m.set(r, c, self.exponents.get(r, c).clone());
            }
            m.set(r, n, BigInt::one());
        }
        for c in 0..=n {
            m.set(n, c, BigInt::one());
        }
        m
    }
}

#[derive(Clone, Debug)]
pub struct BhDualResult {
    pub dual: BHData,
    /// The primitive positive left-kernel generator `(l_hat | -d_hat)`.
    pub kernel_generator: Vec<BigInt>,
    /// The augmented matrix factors as `A . B^T` with `A` the total-space
    /// div matrix of the weighted projective bundle and `B` the term
    /// characters; checked by explicit construction.
    pub factorization_checked: bool,
}

/// Transpose the exponent matrix and read the mirror weights off the left
/// kernel of the new augmented matrix.
pub fn bh_dual(data: &BHData) -> Result<BhDualResult> {
    let n = data.weights.len();
    let p_hat = data.exponents.transpose();
    // Augmented matrix of the transposed datum, weights still unknown:
    // [[P^T, 1], [1, 1]] — the transpose of the original augmented matrix.
    let aug_hat = data.augmented().transpose();
    let kernel = linalg::left_kernel_basis(&aug_hat);
    if kernel.rows() != 1 {
        return Err(Error::InvalidInput(format!(
            "augmented left kernel has rank {}, expected 1",
            kernel.rows()
        )));
    }
    let mut gen = linalg::make_primitive(&kernel.row(0))?;
    // Normalize so the weight block is positive and the degree negative.
    if gen[..n].iter().any(|x| x.is_negative()) || gen[n].is_positive() {
        gen = gen.iter().map(|x| -x).collect();
    }
    if gen[..n].iter().any(|x| !x.is_positive()) || !gen[n].is_negative() {
        return Err(Error::InvalidInput(
            "the left kernel has no strictly positive weight generator".into(),
        ));
    }
    let weights_hat: Vec<BigInt> = gen[..n].to_vec();
    let degree_hat = -gen[n].clone();
    let degree_check: BigInt = weights_hat.iter().sum();
    if degree_check != degree_hat {
        return Err(Error::InternalConsistency(
            "mirror degree differs from the sum of mirror weights".into(),
        ));
    }
    let dual = BHData::new(weights_hat, p_hat)?;
    let factorization_checked = verify_factorization(data)? && verify_factorization(&dual)?;
    if !factorization_checked {
        return Err(Error::InternalConsistency(
            "the augmented matrix does not factor as A . B^T".into(),
        ));
    }
    Ok(BhDualResult { dual, kernel_generator: gen, factorization_checked })
}

/// All exponent vectors of weighted degree `degree`: the candidates a user
/// picks a square invertible exponent matrix from.
pub fn degree_d_monomials(weights: &[BigInt], degree: &BigInt) -> Result<Vec<Vec<BigInt>>> {
    if weights.iter().any(|w| !w.is_positive()) {
        return Err(Error::InvalidInput("weights must be positive".into()));
    }
    let mut out = Vec::new();
    let mut current = vec![BigInt::from(0); weights.len()];
    fn rec(
        weights: &[BigInt],
        remaining: BigInt,
        idx: usize,
        current: &mut Vec<BigInt>,
        out: &mut Vec<Vec<BigInt>>,
    ) {
        if idx == weights.len() {
            if remaining.is_zero() {
                out.push(current.clone());
            }
            return;
        }
        if idx + 1 == weights.len() {
            // Last variable must absorb the remainder exactly.
            let (q, r) = num::Integer::div_rem(&remaining, &weights[idx]);
            if r.is_zero() && !q.is_negative() {
                current[idx] = q;
                out.push(current.clone());
                current[idx] = BigInt::from(0);
            }
            return;
        }
        let max = &remaining / &weights[idx];
        let mut e = BigInt::from(0);
        while e <= max {
            current[idx] = e.clone();
            let rest = &remaining - &e * &weights[idx];
            rec(weights, rest, idx + 1, current, out);
            e += 1;
        }
        current[idx] = BigInt::from(0);
    }
    rec(weights, degree.clone(), 0, &mut current, &mut out);
    out.sort();
    Ok(out)
}

/// Rebuild the augmented matrix as `A . B^T` where `A = [[K | 1], [0 | 1]]`
/// with `K` a kernel basis of the weights (the div matrix of the total
/// space over weighted projective space) and the rows of `B` solve
/// `A . mu = (xi_k, 1)` for each augmented column.
fn verify_factorization(data: &BHData) -> Result<bool> {
    let n = data.weights.len();
    let weight_row = IntMatrix::from_bigint_rows(std::slice::from_ref(&data.weights))?;
    let kernel = linalg::kernel_basis(&weight_row); // n x (n-1)
    let mut a = IntMatrix::zero(n + 1, n);
    for r in 0..n {
        for c in 0..n - 1 {
            a.set(r, c, kernel.get(r, c).clone());
        }
        a.set(r, n - 1, BigInt::one());
    }
    a.set(n, n - 1, BigInt::one());

    let aug = data.augmented();
    let mut b_rows: Vec<Vec<BigInt>> = Vec::with_capacity(n + 1);
    for col in 0..=n {
        let target: Vec<num::BigRational> = (0..=n)
            .map(|r| num::BigRational::from(aug.get(r, col).clone()))
            .collect();
        let Some(sol) = linalg::solve_rational(&a, &target)? else {
            return Ok(false);
        };
        if sol.iter().any(|x| !x.denom().is_one()) {
            return Ok(false);
        }
        b_rows.push(sol.iter().map(|x| x.numer().clone()).collect());
    }
    let b = IntMatrix::from_bigint_rows(&b_rows)?;
    Ok(a.mul(&b.transpose())? == aug)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn fermat_cubic() -> BHData {
        BHData::new(
            iv(&[1, 1, 1]),
            IntMatrix::from_rows(&[vec![3, 0, 0], vec![0, 3, 0], vec![0, 0, 3]]),
        )
        .unwrap()
    }

    #[test]
    fn fermat_cubic_is_self_mirror() {
        let res = bh_dual(&fermat_cubic()).unwrap();
        assert_eq!(res.dual.weights, iv(&[1, 1, 1]));
        assert_eq!(res.dual.degree, BigInt::from(3));
        assert_eq!(res.kernel_generator, iv(&[1, 1, 1, -3]));
    }

    #[test]
    fn chain_type_cubic() {
        // Terms x0^2 x1, x1^2 x2, x2^3 (columns), weights (1,1,1), d = 3.
        let p = IntMatrix::from_rows(&[vec![2, 0, 0], vec![1, 2, 0], vec![0, 1, 3]]);
        let data = BHData::new(iv(&[1, 1, 1]), p).unwrap();
        let res = bh_dual(&data).unwrap();
        assert_eq!(res.dual.weights, iv(&[2, 1, 1]));
        assert_eq!(res.dual.degree, BigInt::from(4));
        // Column degrees of the mirror: l_hat . P_hat column = d_hat.
        for col in 0..3 {
            let deg: BigInt = (0..3)
                .map(|row| &res.dual.weights[row] * res.dual.exponents.get(row, col))
                .sum();
            assert_eq!(deg, res.dual.degree);
        }
    }

    #[test]
    fn bh_dual_is_an_involution() {
        for data in [
            fermat_cubic(),
            BHData::new(
                iv(&[1, 1, 1]),
                IntMatrix::from_rows(&[vec![2, 0, 0], vec![1, 2, 0], vec![0, 1, 3]]),
            )
            .unwrap(),
        ] {
            let once = bh_dual(&data).unwrap();
            let twice = bh_dual(&once.dual).unwrap();
            assert_eq!(twice.dual, data);
        }
    }

    #[test]
    fn degree_three_monomials_in_three_variables() {
        let all = degree_d_monomials(&iv(&[1, 1, 1]), &BigInt::from(3)).unwrap();
        // C(3+2, 2) = 10 monomials of degree 3.
        assert_eq!(all.len(), 10);
        assert!(all.contains(&iv(&[3, 0, 0])));
        assert!(all.contains(&iv(&[1, 1, 1])));
        // Weighted: P(1,1,2), degree 4.
        let weighted = degree_d_monomials(&iv(&[1, 1, 2]), &BigInt::from(4)).unwrap();
        for m in &weighted {
            let deg: BigInt = m[0].clone() + &m[1] + BigInt::from(2) * &m[2];
            assert_eq!(deg, BigInt::from(4));
        }
        assert!(weighted.contains(&iv(&[0, 0, 2])));
        assert!(weighted.contains(&iv(&[2, 0, 1])));
    }

    #[test]
    fn degenerate_inputs_rejected() {
        // Singular exponent matrix.
        let p = IntMatrix::from_rows(&[vec![3, 3], vec![0, 0]]);
        assert!(BHData::new(iv(&[1, 1]), p).is_err());
        // Wrong column degree.
        let p = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert!(BHData::new(iv(&[1, 1]), p).is_err());
    }
}
