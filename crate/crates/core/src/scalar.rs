//! Exact integer scalars.
//!
//! Every vector in this crate (rays, facet normals, partition hemimetrics)
//! is stored as a primitive integer vector. Rationals only show up at the
//! edges (parsing, nullspace solves) and are cleared immediately. The
//! machinery is generic over the integer type so that the same code runs on
//! machine words for speed and on [`BigInt`] when coefficients grow.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Signed, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Raised when a fixed-width scalar cannot hold an intermediate value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("integer overflow in exact arithmetic; rerun with a wider scalar type")]
pub struct Overflow;

pub trait Scalar:
    Integer
    + Signed
    + Clone
    + Debug
    + Display
    + Hash
    + Ord
    + Send
    + Sync
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + FromStr
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Short type name, used in cache keys and reports.
    const NAME: &'static str;

    fn int(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("every scalar holds an i64")
    }
}

impl Scalar for i64 {
    const NAME: &'static str = "i64";
}

impl Scalar for i128 {
    const NAME: &'static str = "i128";
}

impl Scalar for BigInt {
    const NAME: &'static str = "bigint";
}

#[inline]
pub fn add<S: Scalar>(a: &S, b: &S) -> Result<S, Overflow> {
    a.checked_add(b).ok_or(Overflow)
}

#[inline]
pub fn sub<S: Scalar>(a: &S, b: &S) -> Result<S, Overflow> {
    a.checked_sub(b).ok_or(Overflow)
}

#[inline]
pub fn mul<S: Scalar>(a: &S, b: &S) -> Result<S, Overflow> {
    a.checked_mul(b).ok_or(Overflow)
}

/// Exact inner product.
pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> Result<S, Overflow> {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = S::zero();
    for (x, y) in a.iter().zip(b) {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        acc = add(&acc, &mul(x, y)?)?;
    }
    Ok(acc)
}

/// Nonnegative gcd of all entries; zero for the zero vector.
pub fn content<S: Scalar>(v: &[S]) -> S {
    let mut g = S::zero();
    for x in v {
        if x.is_zero() {
            continue;
        }
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Divides out the content in place. Leaves the zero vector untouched.
pub fn make_primitive<S: Scalar>(v: &mut [S]) {
    let g = content(v);
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in v.iter_mut() {
        *x = x.div_floor(&g);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn content_and_primitive() {
        let mut v = vec![4i64, -6, 0, 10];
        assert_eq!(content(&v), 2);
        make_primitive(&mut v);
        assert_eq!(v, vec![2, -3, 0, 5]);
        let mut z = vec![0i64; 3];
        make_primitive(&mut z);
        assert_eq!(z, vec![0, 0, 0]);
    }

    #[test]
    fn checked_dot_reports_overflow() {
        let a = vec![i64::MAX, 1];
        let b = vec![2i64, 1];
        assert_eq!(dot(&a, &b), Err(Overflow));
        let big: Vec<BigInt> = a.iter().map(|&x| BigInt::from(x)).collect();
        let bb: Vec<BigInt> = b.iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(dot(&big, &bb).unwrap(), BigInt::from(i64::MAX) * 2 + 1);
    }
}
