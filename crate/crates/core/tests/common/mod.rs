//! Helpers shared by the integration tests: an exhaustive extreme-ray oracle
//! over exact rationals and small constructors for named vectors.

#![allow(dead_code)]

use std::collections::BTreeSet;

use hemicone::tuples::{KTuple, TupleIndex};
use hemicone::vector::{HemiVector, Partition};
use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Kernel of `rows` (each of length `d`) when it is one-dimensional.
fn kernel_line(rows: &[&Vec<i64>], d: usize) -> Option<Vec<BigRational>> {
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..d {
        let Some(p) = (row..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = a[row][col].recip();
        for x in a[row].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..a.len() {
            if i != row && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..d {
                    let t = &a[row][j] * &f;
                    a[i][j] = &a[i][j] - t;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if pivots.len() + 1 != d {
        return None;
    }
    let free = (0..d).find(|c| !pivots.contains(c)).unwrap();
    let mut x = vec![BigRational::zero(); d];
    x[free] = BigRational::one();
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = -a[r][free].clone();
    }
    Some(x)
}

fn primitive(x: &[BigRational]) -> Vec<i64> {
    let l = x.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = x.iter().map(|q| q.numer() * (&l / q.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    ints.iter().map(|v| (v / &g).to_i64().unwrap()).collect()
}

/// Extreme rays of the pointed cone `{x : a.x >= 0 for a in normals}`, found
/// by trying every (d-1)-subset of the normals.
pub fn brute_force_rays(normals: &[Vec<i64>], d: usize) -> BTreeSet<Vec<i64>> {
    let mut out = BTreeSet::new();
    for subset in normals.iter().combinations(d - 1) {
        let Some(x) = kernel_line(&subset, d) else {
            continue;
        };
        let r = primitive(&x);
        for s in [1i64, -1] {
            let cand: Vec<i64> = r.iter().map(|v| v * s).collect();
            if normals
                .iter()
                .all(|a| a.iter().zip(&cand).map(|(p, q)| p * q).sum::<i64>() >= 0)
            {
                out.insert(cand);
            }
        }
    }
    out
}

/// Vector with the given coefficients on tuples written as digit strings,
/// e.g. `&[("123", 2), ("124", -1)]`.
pub fn from_terms(n: usize, k: usize, terms: &[(&str, i64)]) -> HemiVector<i64> {
    let idx = TupleIndex::new(n, k).unwrap();
    let mut c = vec![0i64; idx.dim()];
    for (t, a) in terms {
        let pts: Vec<usize> = t
            .chars()
            .map(|ch| ch.to_digit(10).unwrap() as usize)
            .collect();
        c[idx.rank(&KTuple::from_points(n, &pts).unwrap()).unwrap()] += a;
    }
    HemiVector::from_i64s(n, k, &c).unwrap()
}

pub fn part(n: usize, s: &str) -> Partition {
    Partition::parse(n, s).unwrap()
}

pub fn sorted_rows<'a>(vs: impl IntoIterator<Item = &'a HemiVector<i64>>) -> BTreeSet<Vec<i64>> {
    vs.into_iter().map(|v| v.coords().to_vec()).collect()
}

pub fn is_nonneg(v: &[i64]) -> bool {
    v.iter().all(|x| !x.is_negative())
}
