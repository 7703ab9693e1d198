//! Exact polyhedral computations on cones of m-hemimetrics.
//!
//! The three cone families on n points live in dimension C(n, m+1):
//! `HM_n^m` (simplex inequalities), `NHM_n^m` (plus nonnegativity) and
//! `P_n^m` (generated by partition m-hemimetrics). For m = 1 they are the
//! metric cone `MET_n` and the cut cone `CUT_n`.
//!
//! ```
//! use hemicone::analysis::ConeData;
//! use hemicone::cone::Family;
//! use hemicone::dd::DdOptions;
//!
//! let c = ConeData::<i64>::compute(Family::Nhm, 5, 2, &DdOptions::default()).unwrap();
//! assert_eq!((c.v().len(), c.h().len()), (37, 30));
//! ```

pub mod analysis;
pub mod bitset;
pub mod cone;
pub mod conjecture;
pub mod dd;
pub mod error;
pub mod faces;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod report;
pub mod scalar;
pub mod symmetry;
pub mod tuples;
pub mod vector;

pub use error::{Error, Result};

/// Machine-word vectors; arithmetic is checked and reports overflow.
pub type Vector = vector::HemiVector<i64>;
/// Arbitrary-precision vectors.
pub type BigVector = vector::HemiVector<num_bigint::BigInt>;
