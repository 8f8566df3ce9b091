//! Shared generators and brute-force oracles for the randomized suites.
//! Everything here stays independent of the implementation paths it is
//! used to check: oracle computations go through direct arithmetic only.

use std::collections::BTreeSet;

use num::{BigInt, BigRational, Zero};
use rand::rngs::StdRng;
use rand::Rng;

use tlg_core::linalg::{self, IntMatrix};
use tlg_core::lineardata::{ComplexLift, ToricLGModel};
use tlg_core::polyhedra::Polyhedron;
use tlg_core::sigma::{build_lg, SectionSpec, SplitBundleData, ToricVarietyData};

pub fn q(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

/// Random H-representation with pairwise distinct normalized affine classes
/// and all offsets positive, so the origin is interior.
pub fn random_hrep_with_origin_interior(rng: &mut StdRng, dim: usize) -> Polyhedron {
    let rows = rng.gen_range(dim + 1..=dim + 5);
    let mut normals: Vec<Vec<i64>> = Vec::new();
    let mut offsets: Vec<BigRational> = Vec::new();
    let mut classes = BTreeSet::new();
    while normals.len() < rows {
        let cand: Vec<i64> = (0..dim).map(|_| rng.gen_range(-3i64..=3)).collect();
        if cand.iter().all(|&x| x == 0) {
            continue;
        }
        let offset = q(rng.gen_range(1i64..=4));
        if !classes.insert(affine_class_key(&cand, &offset)) {
            continue;
        }
        normals.push(cand);
        offsets.push(offset);
    }
    Polyhedron::new(IntMatrix::from_rows(&normals), offsets).unwrap()
}

pub fn affine_class_key(row: &[i64], offset: &BigRational) -> String {
    let ints: Vec<BigInt> = row.iter().map(|&x| BigInt::from(x)).collect();
    let prim = linalg::make_primitive(&ints).unwrap();
    let scale = ints
        .iter()
        .zip(prim.iter())
        .find(|(_, p)| !p.is_zero())
        .map(|(n, p)| n / p)
        .unwrap();
    format!("{:?}|{}", prim, offset / BigRational::from(scale))
}

/// Random sigma-built model over a small smooth complete base, with a
/// random exact-rational superpotential class.
pub fn random_sigma_model(rng: &mut StdRng) -> ToricLGModel {
    let bases: Vec<Vec<Vec<i64>>> = vec![
        vec![vec![1], vec![-1]],                                // P1
        vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]], // P1 x P1
        vec![vec![1, 0], vec![0, 1], vec![-1, -1]],             // P2
    ];
    let rows = bases[rng.gen_range(0..bases.len())].clone();
    let r = rows.len();
    let base = ToricVarietyData::new(
        (0..r).map(|i| format!("r{i}")).collect(),
        IntMatrix::from_rows(&rows),
        true,
        true,
    )
    .unwrap();
    let c = rng.gen_range(1..=2);
    let entry_cap = if r > 2 { 1 } else { 2 };
    let divisors: Vec<Vec<BigInt>> = (0..c)
        .map(|_| loop {
            let cand: Vec<i64> = (0..r).map(|_| rng.gen_range(0i64..=entry_cap)).collect();
            if cand.iter().any(|&x| x > 0) {
                return cand.into_iter().map(BigInt::from).collect();
            }
        })
        .collect();
    let bundle = SplitBundleData::new(base, divisors).unwrap();
    let k_lift: Vec<ComplexLift> = (0..r)
        .map(|_| ComplexLift::from_im(q(rng.gen_range(1i64..=3))))
        .collect();
    let model = build_lg(&bundle, &k_lift, &SectionSpec::Generic).unwrap();
    let b_lift: Vec<ComplexLift> = (0..model.b_side().matrix().rows())
        .map(|_| {
            ComplexLift::new(
                BigRational::new(BigInt::from(rng.gen_range(0i64..=3)), BigInt::from(4)),
                BigRational::new(
                    BigInt::from(rng.gen_range(-4i64..=6)),
                    BigInt::from(rng.gen_range(1i64..=2)),
                ),
            )
        })
        .collect();
    model.with_b_lift(b_lift).unwrap()
}

/// Brute-force 2-D vertex enumeration by Cramer solves of all 2x2
/// subsystems followed by direct feasibility checks.
pub fn oracle_vertices_2d(
    normals: &[Vec<i64>],
    offsets: &[BigRational],
) -> BTreeSet<(BigRational, BigRational)> {
    let n = normals.len();
    let mut out = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            let det = normals[i][0] * normals[j][1] - normals[i][1] * normals[j][0];
            if det == 0 {
                continue;
            }
            let det = q(det);
            let bx = (-offsets[i].clone() * q(normals[j][1])
                + offsets[j].clone() * q(normals[i][1]))
                / det.clone();
            let by = (-offsets[j].clone() * q(normals[i][0])
                + offsets[i].clone() * q(normals[j][0]))
                / det.clone();
            let feasible = normals.iter().zip(offsets.iter()).all(|(row, alpha)| {
                q(row[0]) * bx.clone() + q(row[1]) * by.clone() + alpha >= BigRational::zero()
            });
            if feasible {
                out.insert((bx, by));
            }
        }
    }
    out
}

/// Direct box scan: every integer point of `[-bound, bound]^dim` satisfying
/// all inequalities, tested by plain arithmetic.
pub fn oracle_box_scan(
    normals: &[Vec<i64>],
    offsets: &[BigRational],
    bound: i64,
    dim: usize,
) -> BTreeSet<Vec<BigInt>> {
    let mut expect = BTreeSet::new();
    let mut cursor = vec![-bound; dim];
    'scan: loop {
        let ok = normals.iter().zip(offsets.iter()).all(|(row, alpha)| {
            let val: i64 = row.iter().zip(cursor.iter()).map(|(a, b)| a * b).sum();
            BigRational::from(BigInt::from(val)) + alpha >= BigRational::zero()
        });
        if ok {
            expect.insert(cursor.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
        }
        let mut i = dim;
        loop {
            if i == 0 {
                break 'scan;
            }
            i -= 1;
            if cursor[i] < bound {
                cursor[i] += 1;
                for j in i + 1..dim {
                    cursor[j] = -bound;
                }
                break;
            }
        }
    }
    expect
}

/// A bounded, duplicate-free 2-D instance whose boundedness survives the
/// removal of any single row (a second, weaker box backs up the first).
pub fn random_bounded_2d_no_duplicates(rng: &mut StdRng) -> (Vec<Vec<i64>>, Vec<BigRational>) {
    let mut normals: Vec<Vec<i64>> = Vec::new();
    let mut offsets: Vec<BigRational> = Vec::new();
    for sign in [1i64, -1] {
        for d in 0..2 {
            let mut row = vec![0i64; 2];
            row[d] = sign;
            normals.push(row.clone());
            offsets.push(q(10));
            normals.push(row);
            offsets.push(q(11));
        }
    }
    let mut classes: BTreeSet<String> = normals
        .iter()
        .zip(offsets.iter())
        .map(|(r, a)| affine_class_key(r, a))
        .collect();
    for _ in 0..rng.gen_range(2..=5) {
        let row: Vec<i64> = (0..2).map(|_| rng.gen_range(-3i64..=3)).collect();
        if row.iter().all(|&x| x == 0) {
            continue;
        }
        let offset = q(rng.gen_range(1i64..=9));
        if !classes.insert(affine_class_key(&row, &offset)) {
            continue;
        }
        normals.push(row);
        offsets.push(offset);
    }
    (normals, offsets)
}
