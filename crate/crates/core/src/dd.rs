//! Exact double description method.
//!
//! [`double_description`] computes the extreme rays of a pointed cone
//! `{x : A x >= 0}` by inserting inequalities one at a time into the ray list
//! of a simplicial starting cone. All arithmetic is on primitive integer
//! vectors; new rays are built as integer combinations of adjacent pairs and
//! divided by their content. The same routine run on the generators of a cone
//! yields its facets.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::BitSet;
use crate::cone::{ConeH, ConeV, Family, LinearInequality};
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{self, Overflow, Scalar};
use crate::vector::HemiVector;

/// Engine identifier; part of every cache key.
pub const ENGINE_VERSION: &str = "dd-1";

/// How the next inequality is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum InsertionOrder {
    /// Rows with fewest nonzero entries first, ties by index. On the cone
    /// families here this starts from the orthant and keeps intermediate
    /// ray counts near the final count.
    #[default]
    SparseFirst,
    /// Fewest currently violating rays first; ties by index.
    MinCutoff,
    /// Input order.
    Index,
}

impl InsertionOrder {
    /// Static priority of the rows; `MinCutoff` only uses it for the start basis.
    fn priority<S: Scalar>(self, rows: &[Vec<S>]) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..rows.len()).collect();
        if self == InsertionOrder::SparseFirst {
            idx.sort_by_key(|&i| (rows[i].iter().filter(|x| !x.is_zero()).count(), i));
        }
        idx
    }
}

/// Pair-adjacency test used while generating new rays.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum PairTest {
    /// Rank test when fewer than `2 * dim` rays are active, combinatorial otherwise.
    #[default]
    Auto,
    Combinatorial,
    Rank,
}

#[derive(Clone, Debug)]
pub struct DdProgress {
    pub processed: usize,
    pub total: usize,
    pub rays: usize,
    pub elapsed_secs: f64,
}

#[derive(Clone, Default)]
pub struct DdOptions {
    pub max_rays: Option<usize>,
    pub max_seconds: Option<f64>,
    pub order: InsertionOrder,
    pub pair_test: PairTest,
    pub progress: Option<Arc<dyn Fn(&DdProgress) + Send + Sync>>,
}

impl fmt::Debug for DdOptions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DdOptions")
            .field("max_rays", &self.max_rays)
            .field("max_seconds", &self.max_seconds)
            .field("order", &self.order)
            .field("pair_test", &self.pair_test)
            .finish()
    }
}

/// State of an interrupted run. `rays` are exactly the extreme rays of the
/// cone cut out by the `processed` inequalities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct DdSnapshot<S = i64> {
    pub dim: usize,
    pub total: usize,
    /// Fingerprint of the input rows; resuming against other rows is refused.
    pub input_digest: String,
    pub processed: Vec<usize>,
    pub rays: Vec<Vec<S>>,
    pub elapsed_secs: f64,
    pub peak_rays: usize,
}

#[derive(Debug, Error)]
pub enum DdError<S: Scalar = i64> {
    #[error("cone is not pointed: lineality space has dimension {lineality}")]
    NotPointed { lineality: usize },
    #[error("generators span only dimension {rank} of {dim}")]
    NotFullDimensional { rank: usize, dim: usize },
    #[error(
        "resource limit reached after {} of {} inequalities with {} rays in flight",
        .0.processed.len(), .0.total, .0.rays.len()
    )]
    ResourceLimit(Box<DdSnapshot<S>>),
    #[error("snapshot does not match this input")]
    SnapshotMismatch,
    #[error(transparent)]
    Overflow(#[from] Overflow),
    #[error(transparent)]
    Input(#[from] Error),
}

#[derive(Clone, Debug)]
pub struct DdStats {
    pub peak_rays: usize,
    pub elapsed_secs: f64,
    pub order: Vec<usize>,
}

#[derive(Clone)]
struct Ray<S> {
    coords: Vec<S>,
    zero: BitSet,
}

/// Stable fingerprint of a row list (FNV-1a over the decimal rendering).
pub fn digest_rows<S: Scalar>(rows: &[Vec<S>]) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    for r in rows {
        for x in r {
            for b in x.to_string().bytes().chain(*b",") {
                h ^= b as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
        }
        h ^= b';' as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}

/// Extreme rays of `{x : rows . x >= 0}`, primitive and sorted.
pub fn double_description<S: Scalar>(
    rows: &[Vec<S>],
    dim: usize,
    opts: &DdOptions,
    resume: Option<DdSnapshot<S>>,
) -> std::result::Result<(Vec<Vec<S>>, DdStats), DdError<S>> {
    let start = Instant::now();
    let total = rows.len();
    let digest = digest_rows(rows);
    let rows: Vec<Vec<S>> = rows
        .iter()
        .map(|r| {
            let mut r = r.clone();
            scalar::make_primitive(&mut r);
            r
        })
        .collect();

    let (mut rays, mut processed, mut peak, base_secs) = match resume {
        Some(snap) => {
            if snap.input_digest != digest || snap.dim != dim || snap.total != total {
                return Err(DdError::SnapshotMismatch);
            }
            let rays = snap
                .rays
                .into_iter()
                .map(|c| zero_set(&rows, &snap.processed, c))
                .collect::<std::result::Result<Vec<_>, Overflow>>()?;
            (rays, snap.processed, snap.peak_rays, snap.elapsed_secs)
        }
        None => {
            let r = linalg::rank(&rows, dim)?;
            if r < dim {
                return Err(DdError::NotPointed { lineality: dim - r });
            }
            let (rays, basis) = initial_rays(&rows, &opts.order.priority(&rows), dim)?;
            let peak = rays.len();
            (rays, basis, peak, 0.0)
        }
    };

    let mut done = vec![false; total];
    for &i in &processed {
        done[i] = true;
    }
    let elapsed = |start: &Instant| base_secs + start.elapsed().as_secs_f64();
    let priority = opts.order.priority(&rows);

    while processed.len() < total {
        if let Some(limit) = opts.max_seconds {
            if elapsed(&start) > limit {
                return Err(snapshot_error(
                    dim,
                    total,
                    digest,
                    processed,
                    &rays,
                    elapsed(&start),
                    peak,
                ));
            }
        }
        let next = choose_next(&rows, &done, &rays, &priority, opts.order)?;
        let a = &rows[next];
        let vals: Vec<S> = rays
            .par_iter()
            .map(|r| scalar::dot(a, &r.coords))
            .collect::<std::result::Result<_, _>>()?;
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut zer = Vec::new();
        for (i, v) in vals.iter().enumerate() {
            if v.is_positive() {
                pos.push(i);
            } else if v.is_negative() {
                neg.push(i);
            } else {
                zer.push(i);
            }
        }

        let mut next_rays: Vec<Ray<S>> = Vec::with_capacity(pos.len() + zer.len());
        if !neg.is_empty() {
            let use_rank = match opts.pair_test {
                PairTest::Rank => true,
                PairTest::Combinatorial => false,
                PairTest::Auto => rays.len() < 2 * dim,
            };
            let created: Vec<Vec<Ray<S>>> = pos
                .par_iter()
                .map(|&p| {
                    new_rays_from(
                        p, &neg, &rays, &vals, &rows, &processed, next, dim, use_rank,
                    )
                })
                .collect::<std::result::Result<_, Overflow>>()?;
            next_rays.extend(created.into_iter().flatten());
        }
        for &i in &pos {
            next_rays.push(rays[i].clone());
        }
        for &i in &zer {
            let mut r = rays[i].clone();
            r.zero.insert(next);
            next_rays.push(r);
        }
        next_rays.par_sort_by(|x, y| x.coords.cmp(&y.coords));
        next_rays.dedup_by(|x, y| x.coords == y.coords);

        if let Some(limit) = opts.max_rays {
            if next_rays.len() > limit {
                peak = peak.max(next_rays.len());
                return Err(snapshot_error(
                    dim,
                    total,
                    digest,
                    processed,
                    &rays,
                    elapsed(&start),
                    peak,
                ));
            }
        }
        rays = next_rays;
        peak = peak.max(rays.len());
        processed.push(next);
        done[next] = true;
        if let Some(cb) = &opts.progress {
            cb(&DdProgress {
                processed: processed.len(),
                total,
                rays: rays.len(),
                elapsed_secs: elapsed(&start),
            });
        }
    }

    let mut out: Vec<Vec<S>> = rays.into_iter().map(|r| r.coords).collect();
    out.sort();
    out.dedup();
    Ok((
        out,
        DdStats {
            peak_rays: peak,
            elapsed_secs: elapsed(&start),
            order: processed,
        },
    ))
}

fn snapshot_error<S: Scalar>(
    dim: usize,
    total: usize,
    input_digest: String,
    processed: Vec<usize>,
    rays: &[Ray<S>],
    elapsed_secs: f64,
    peak_rays: usize,
) -> DdError<S> {
    let mut coords: Vec<Vec<S>> = rays.iter().map(|r| r.coords.clone()).collect();
    coords.sort();
    DdError::ResourceLimit(Box::new(DdSnapshot {
        dim,
        total,
        input_digest,
        processed,
        rays: coords,
        elapsed_secs,
        peak_rays,
    }))
}

fn zero_set<S: Scalar>(
    rows: &[Vec<S>],
    processed: &[usize],
    coords: Vec<S>,
) -> std::result::Result<Ray<S>, Overflow> {
    let mut zero = BitSet::new(rows.len());
    for &i in processed {
        if scalar::dot(&rows[i], &coords)?.is_zero() {
            zero.insert(i);
        }
    }
    Ok(Ray { coords, zero })
}

/// Simplicial start: `dim` independent rows, one ray per row, tight on the others.
fn initial_rays<S: Scalar>(
    rows: &[Vec<S>],
    priority: &[usize],
    dim: usize,
) -> std::result::Result<(Vec<Ray<S>>, Vec<usize>), Overflow> {
    let mut basis: Vec<usize> = Vec::with_capacity(dim);
    let mut chosen: Vec<Vec<S>> = Vec::with_capacity(dim);
    for &i in priority {
        let r = &rows[i];
        if basis.len() == dim {
            break;
        }
        chosen.push(r.clone());
        if linalg::rank(&chosen, dim)? == chosen.len() {
            basis.push(i);
        } else {
            chosen.pop();
        }
    }
    let mut rays = Vec::with_capacity(dim);
    for (j, &bi) in basis.iter().enumerate() {
        let others: Vec<&Vec<S>> = chosen
            .iter()
            .enumerate()
            .filter(|&(l, _)| l != j)
            .map(|(_, r)| r)
            .collect();
        let ns = linalg::nullspace(&others, dim)?;
        debug_assert_eq!(ns.len(), 1);
        let mut x = ns.into_iter().next().expect("corank one");
        if scalar::dot(&rows[bi], &x)?.is_negative() {
            for c in x.iter_mut() {
                *c = -c.clone();
            }
        }
        rays.push(zero_set(rows, &basis, x)?);
    }
    Ok((rays, basis))
}

fn choose_next<S: Scalar>(
    rows: &[Vec<S>],
    done: &[bool],
    rays: &[Ray<S>],
    priority: &[usize],
    order: InsertionOrder,
) -> std::result::Result<usize, Overflow> {
    let remaining: Vec<usize> = priority.iter().copied().filter(|&i| !done[i]).collect();
    match order {
        InsertionOrder::Index | InsertionOrder::SparseFirst => Ok(remaining[0]),
        InsertionOrder::MinCutoff => {
            let counts: Vec<usize> = remaining
                .par_iter()
                .map(|&i| {
                    let mut c = 0;
                    for r in rays {
                        if scalar::dot(&rows[i], &r.coords)?.is_negative() {
                            c += 1;
                        }
                    }
                    Ok(c)
                })
                .collect::<std::result::Result<_, Overflow>>()?;
            let best = (0..remaining.len())
                .min_by_key(|&j| (counts[j], remaining[j]))
                .expect("nonempty");
            Ok(remaining[best])
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn new_rays_from<S: Scalar>(
    p: usize,
    neg: &[usize],
    rays: &[Ray<S>],
    vals: &[S],
    rows: &[Vec<S>],
    processed: &[usize],
    hyperplane: usize,
    dim: usize,
    use_rank: bool,
) -> std::result::Result<Vec<Ray<S>>, Overflow> {
    let need = dim.saturating_sub(2);
    let zp = &rays[p].zero;
    if zp.count() < need {
        return Ok(Vec::new());
    }
    // only rays sharing at least dim-2 tight rows with p can block a pair (p, q)
    let blockers: Vec<usize> = if use_rank {
        Vec::new()
    } else {
        (0..rays.len())
            .filter(|&t| t != p && rays[t].zero.intersection_count(zp) >= need)
            .collect()
    };
    let mut out = Vec::new();
    for &q in neg {
        if rays[q].zero.intersection_count(zp) < need {
            continue;
        }
        let common = zp.intersection(&rays[q].zero);
        let adjacent = if use_rank {
            let sub: Vec<&Vec<S>> = common.iter().map(|i| &rows[i]).collect();
            linalg::rank_capped(&sub, dim, need)? == need && linalg::rank(&sub, dim)? == need
        } else {
            !blockers
                .iter()
                .any(|&t| t != q && common.is_subset(&rays[t].zero))
        };
        if !adjacent {
            continue;
        }
        // vals[p] > 0 > vals[q]; the combination vanishes on the new hyperplane
        let a = &vals[p];
        let b = -vals[q].clone();
        let mut coords = Vec::with_capacity(dim);
        for (x, y) in rays[q].coords.iter().zip(&rays[p].coords) {
            coords.push(scalar::add(&scalar::mul(a, x)?, &scalar::mul(&b, y)?)?);
        }
        scalar::make_primitive(&mut coords);
        let mut zero = common;
        zero.insert(hyperplane);
        debug_assert!(processed.iter().all(|&i| zero.contains(i)
            == scalar::dot(&rows[i], &coords)
                .map(|v| v.is_zero())
                .unwrap_or(false)));
        out.push(Ray { coords, zero });
    }
    Ok(out)
}

/// Extreme rays of an H-representation.
pub fn rays_from_inequalities<S: Scalar>(
    h: &ConeH<S>,
    opts: &DdOptions,
) -> std::result::Result<ConeV<S>, DdError<S>> {
    rays_from_inequalities_resume(h, opts, None)
}

pub fn rays_from_inequalities_resume<S: Scalar>(
    h: &ConeH<S>,
    opts: &DdOptions,
    resume: Option<DdSnapshot<S>>,
) -> std::result::Result<ConeV<S>, DdError<S>> {
    let (rays, _) = double_description(&h.normals(), h.dim(), opts, resume)?;
    let rays = rays
        .into_iter()
        .map(|c| HemiVector::new(h.index.n(), h.index.k(), c))
        .collect::<Result<Vec<_>>>()?;
    let family = if h.family == Family::Custom {
        Family::Custom
    } else {
        h.family
    };
    Ok(ConeV {
        index: h.index.clone(),
        rays,
        family,
    })
}

/// Facets of a cone given by generators: extreme rays of the dual cone.
pub fn facets_from_rays<S: Scalar>(
    v: &ConeV<S>,
    opts: &DdOptions,
) -> std::result::Result<ConeH<S>, DdError<S>> {
    facets_from_rays_resume(v, opts, None)
}

pub fn facets_from_rays_resume<S: Scalar>(
    v: &ConeV<S>,
    opts: &DdOptions,
    resume: Option<DdSnapshot<S>>,
) -> std::result::Result<ConeH<S>, DdError<S>> {
    let rows = v.ray_coords();
    let r = linalg::rank(&rows, v.dim())?;
    if r < v.dim() {
        return Err(DdError::NotFullDimensional {
            rank: r,
            dim: v.dim(),
        });
    }
    let (normals, _) = double_description(&rows, v.dim(), opts, resume)?;
    let inequalities = normals
        .into_iter()
        .map(|c| LinearInequality::classified(HemiVector::new(v.index.n(), v.index.k(), c)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConeH {
        index: v.index.clone(),
        inequalities,
        family: v.family,
    })
}

/// Why a ray is or is not extreme, or an inequality is or is not a facet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub holds: bool,
    /// Tight inequalities (for rays) or tight rays (for inequalities).
    pub tight: Vec<usize>,
    pub rank: usize,
    pub dim: usize,
}

/// A feasible point spans an extreme ray iff its tight normals have rank dim - 1.
pub fn is_extreme_ray<S: Scalar>(h: &ConeH<S>, v: &HemiVector<S>) -> Result<Certificate> {
    if v.dim() != h.dim() {
        return Err(Error::MismatchedArity {
            left: v.dim(),
            right: h.dim(),
        });
    }
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let mut violated = Vec::new();
    let mut tight = Vec::new();
    for (i, ineq) in h.inequalities.iter().enumerate() {
        let s = ineq.normal.dot(v)?;
        if s.is_negative() {
            violated.push(i);
        } else if s.is_zero() {
            tight.push(i);
        }
    }
    if !violated.is_empty() {
        return Err(Error::InfeasiblePoint { violated });
    }
    let rows: Vec<&[S]> = tight
        .iter()
        .map(|&i| h.inequalities[i].normal.coords())
        .collect();
    let rank = linalg::rank(&rows, h.dim())?;
    Ok(Certificate {
        holds: rank + 1 == h.dim(),
        tight,
        rank,
        dim: h.dim(),
    })
}

/// A valid inequality defines a facet iff its tight rays have rank dim - 1.
pub fn is_facet<S: Scalar>(v: &ConeV<S>, ineq: &LinearInequality<S>) -> Result<Certificate> {
    if ineq.normal.dim() != v.dim() {
        return Err(Error::MismatchedArity {
            left: ineq.normal.dim(),
            right: v.dim(),
        });
    }
    let mut tight = Vec::new();
    for (i, r) in v.rays.iter().enumerate() {
        let s = ineq.normal.dot(r)?;
        if s.is_negative() {
            return Err(Error::NotValid {
                ray: i,
                slack: s.to_string(),
            });
        }
        if s.is_zero() {
            tight.push(i);
        }
    }
    let rows: Vec<&[S]> = tight.iter().map(|&i| v.rays[i].coords()).collect();
    let rank = linalg::rank(&rows, v.dim())?;
    Ok(Certificate {
        holds: rank + 1 == v.dim(),
        tight,
        rank,
        dim: v.dim(),
    })
}

/// Ray-by-inequality zero pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceMatrix {
    /// Row `r`: inequalities tight at ray `r`.
    rows: Vec<BitSet>,
    /// Column `c`: rays tight at inequality `c`.
    cols: Vec<BitSet>,
}

impl IncidenceMatrix {
    pub fn num_rays(&self) -> usize {
        self.rows.len()
    }

    pub fn num_inequalities(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, ray: usize, ineq: usize) -> bool {
        self.rows[ray].contains(ineq)
    }

    pub fn ray_row(&self, ray: usize) -> &BitSet {
        &self.rows[ray]
    }

    pub fn ineq_col(&self, ineq: usize) -> &BitSet {
        &self.cols[ineq]
    }

    pub fn ray_rows(&self) -> &[BitSet] {
        &self.rows
    }

    pub fn ineq_cols(&self) -> &[BitSet] {
        &self.cols
    }

    /// Same relation with the roles of rays and inequalities swapped.
    pub fn transpose(&self) -> IncidenceMatrix {
        IncidenceMatrix {
            rows: self.cols.clone(),
            cols: self.rows.clone(),
        }
    }
}

pub fn incidence<S: Scalar>(h: &ConeH<S>, v: &ConeV<S>) -> Result<IncidenceMatrix> {
    if h.dim() != v.dim() {
        return Err(Error::MismatchedArity {
            left: h.dim(),
            right: v.dim(),
        });
    }
    let nr = v.rays.len();
    let ni = h.inequalities.len();
    let rows = v
        .rays
        .par_iter()
        .enumerate()
        .map(|(r, ray)| {
            let mut row = BitSet::new(ni);
            for (c, ineq) in h.inequalities.iter().enumerate() {
                let s = ineq.normal.dot(ray)?;
                if s.is_negative() {
                    return Err(Error::InconsistentPair {
                        ray: r,
                        inequality: c,
                        value: s.to_string(),
                    });
                }
                if s.is_zero() {
                    row.insert(c);
                }
            }
            Ok(row)
        })
        .collect::<Result<Vec<BitSet>>>()?;
    let mut cols = vec![BitSet::new(nr); ni];
    for (r, row) in rows.iter().enumerate() {
        for c in row.iter() {
            cols[c].insert(r);
        }
    }
    Ok(IncidenceMatrix { rows, cols })
}

/// The primitive integer vector on the ray of a nonzero rational vector.
pub fn canonical_primitive<S: Scalar>(
    n: usize,
    k: usize,
    coords: &[Ratio<S>],
) -> Result<HemiVector<S>> {
    if coords.iter().all(num_traits::Zero::is_zero) {
        return Err(Error::ZeroVector);
    }
    let mut den = S::one();
    for c in coords {
        den = den.lcm(c.denom());
    }
    let mut out = Vec::with_capacity(coords.len());
    for c in coords {
        let q = den.div_floor(c.denom());
        out.push(scalar::mul(c.numer(), &q)?);
    }
    scalar::make_primitive(&mut out);
    HemiVector::new(n, k, out)
}

/// Drops the inequalities of `h` that do not define facets of the cone
/// spanned by `v`, and merges duplicates.
pub fn irredundant<S: Scalar>(h: &ConeH<S>, v: &ConeV<S>) -> Result<ConeH<S>> {
    let inc = incidence(h, v)?;
    let keep: Vec<bool> = (0..h.len())
        .into_par_iter()
        .map(|c| {
            let rows: Vec<&[S]> = inc.ineq_col(c).iter().map(|r| v.rays[r].coords()).collect();
            Ok(linalg::rank(&rows, v.dim())? + 1 == v.dim())
        })
        .collect::<Result<Vec<bool>>>()?;
    let mut seen = BTreeSet::new();
    let inequalities = h
        .inequalities
        .iter()
        .zip(keep)
        .filter(|(ineq, k)| *k && seen.insert(ineq.normal.coords().to_vec()))
        .map(|(ineq, _)| ineq.clone())
        .collect();
    Ok(ConeH {
        index: h.index.clone(),
        inequalities,
        family: h.family,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::{build_cone_h, build_cone_p};
    use num_bigint::BigInt;

    #[test]
    fn nhm_4_2() {
        let h: ConeH<i64> = build_cone_h(Family::Nhm, 4, 2).unwrap();
        let v = rays_from_inequalities(&h, &DdOptions::default()).unwrap();
        assert_eq!(v.len(), 6);
        let p: ConeV<i64> = build_cone_p(4, 2).unwrap();
        assert_eq!(v.rays, p.rays);
        let f = facets_from_rays(&p, &DdOptions::default()).unwrap();
        assert_eq!(f.len(), 8);
    }

    #[test]
    fn simplicial_hm() {
        for m in 2..=6 {
            let h: ConeH<i64> = build_cone_h(Family::Hm, m + 2, m).unwrap();
            let v = rays_from_inequalities(&h, &DdOptions::default()).unwrap();
            assert_eq!(v.len(), m + 2);
            for r in &v.rays {
                let c = r.coords();
                assert_eq!(c.iter().filter(|&&x| x == 1 - m as i64).count(), 1);
                assert_eq!(c.iter().filter(|&&x| x == 1).count(), m + 1);
            }
        }
    }

    #[test]
    fn pair_tests_agree() {
        let h: ConeH<i64> = build_cone_h(Family::Hm, 5, 2).unwrap();
        let mut outs = Vec::new();
        for pair_test in [PairTest::Auto, PairTest::Combinatorial, PairTest::Rank] {
            for order in [InsertionOrder::MinCutoff, InsertionOrder::Index] {
                let o = DdOptions {
                    pair_test,
                    order,
                    ..Default::default()
                };
                outs.push(rays_from_inequalities(&h, &o).unwrap().rays);
            }
        }
        assert_eq!(outs[0].len(), 92);
        assert!(outs.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn bigint_matches_i64() {
        let h: ConeH<i64> = build_cone_h(Family::Nhm, 5, 2).unwrap();
        let hb: ConeH<BigInt> = build_cone_h(Family::Nhm, 5, 2).unwrap();
        let v = rays_from_inequalities(&h, &DdOptions::default()).unwrap();
        let vb = rays_from_inequalities(&hb, &DdOptions::default()).unwrap();
        assert_eq!(v.len(), 37);
        let conv: Vec<Vec<BigInt>> = v
            .rays
            .iter()
            .map(|r| r.coords().iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        assert_eq!(conv, vb.ray_coords());
    }

    #[test]
    fn not_pointed_and_not_full_dimensional() {
        let idx = crate::tuples::TupleIndex::new(4, 3).unwrap();
        let h = ConeH::custom(idx.clone(), vec![vec![1i64, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap();
        assert!(matches!(
            rays_from_inequalities(&h, &DdOptions::default()),
            Err(DdError::NotPointed { lineality: 2 })
        ));
        let v = ConeV::custom(
            idx,
            vec![vec![1i64, 0, 0, 0], vec![0, 1, 0, 0], vec![1, 1, 0, 0]],
        )
        .unwrap();
        assert!(matches!(
            facets_from_rays(&v, &DdOptions::default()),
            Err(DdError::NotFullDimensional { rank: 2, dim: 4 })
        ));
    }

    #[test]
    fn ray_limit_and_resume() {
        let h: ConeH<i64> = build_cone_h(Family::Hm, 5, 2).unwrap();
        let opts = DdOptions {
            max_rays: Some(30),
            ..Default::default()
        };
        let snap = match rays_from_inequalities(&h, &opts) {
            Err(DdError::ResourceLimit(s)) => *s,
            other => panic!("expected resource limit, got {:?}", other.map(|v| v.len())),
        };
        assert!(snap.processed.len() < 20 && snap.rays.len() <= 30);
        // resumed rays are the extreme rays of the partial cone
        let partial = ConeH::custom(
            h.index.clone(),
            snap.processed
                .iter()
                .map(|&i| h.normals()[i].clone())
                .collect(),
        )
        .unwrap();
        let direct = rays_from_inequalities(&partial, &DdOptions::default()).unwrap();
        assert_eq!(direct.ray_coords(), snap.rays);
        let json = serde_json::to_string(&snap).unwrap();
        let snap: DdSnapshot<i64> = serde_json::from_str(&json).unwrap();
        let v =
            rays_from_inequalities_resume(&h, &DdOptions::default(), Some(snap.clone())).unwrap();
        assert_eq!(v.len(), 92);
        let other: ConeH<i64> = build_cone_h(Family::Nhm, 5, 2).unwrap();
        assert!(matches!(
            rays_from_inequalities_resume(&other, &DdOptions::default(), Some(snap)),
            Err(DdError::SnapshotMismatch)
        ));
    }

    #[test]
    fn certificates() {
        let h: ConeH<i64> = build_cone_h(Family::Hm, 5, 2).unwrap();
        let v4 = HemiVector::from_complement_order(5, 3, &[1, 1, 1, -1, 0, 0, 1, 0, 1, 1]).unwrap();
        assert!(is_extreme_ray(&h, &v4).unwrap().holds);
        let nhm: ConeH<i64> = build_cone_h(Family::Nhm, 5, 2).unwrap();
        let v1 = HemiVector::from_i64s(5, 3, &[1, 1, 1, 0, 0, 0, 0, 0, 0, 0]).unwrap();
        let v2 = HemiVector::from_i64s(5, 3, &[0, 1, 1, 1, 1, 0, 0, 0, 0, 0]).unwrap();
        let c = is_extreme_ray(&nhm, &v1.add(&v2).unwrap()).unwrap();
        assert!(!c.holds);
        assert!(c.rank < 9);
        assert!(matches!(
            is_extreme_ray(&nhm, &v4),
            Err(Error::InfeasiblePoint { .. })
        ));

        let p: ConeV<i64> = build_cone_p(4, 2).unwrap();
        let n123 =
            LinearInequality::new(HemiVector::from_i64s(4, 3, &[1, 0, 0, 0]).unwrap()).unwrap();
        let c = is_facet(&p, &n123).unwrap();
        assert!(c.holds);
        assert_eq!(c.tight.len(), 3);
        let bad =
            LinearInequality::new(HemiVector::from_i64s(4, 3, &[-1, 0, 0, 0]).unwrap()).unwrap();
        assert!(matches!(is_facet(&p, &bad), Err(Error::NotValid { .. })));
    }

    #[test]
    fn incidence_of_p42() {
        let h: ConeH<i64> = build_cone_h(Family::Nhm, 4, 2).unwrap();
        let v: ConeV<i64> = build_cone_p(4, 2).unwrap();
        let inc = incidence(&h, &v).unwrap();
        for r in 0..v.len() {
            let row = inc.ray_row(r);
            assert_eq!(row.iter().filter(|&c| c < 4).count(), 2);
            assert_eq!(row.iter().filter(|&c| c >= 4).count(), 2);
        }
        let mut hm = h.clone();
        hm.inequalities[0].normal = HemiVector::from_i64s(4, 3, &[-1, 0, 0, 0]).unwrap();
        assert!(matches!(
            incidence(&hm, &v),
            Err(Error::InconsistentPair { .. })
        ));
    }

    #[test]
    fn primitive_scaling() {
        let r = |a: i64, b: i64| Ratio::new(a, b);
        let v = canonical_primitive(4, 3, &[r(1, 2), r(1, 1), r(3, 2), r(0, 1)]).unwrap();
        assert_eq!(v.coords(), &[1, 2, 3, 0]);
        let v = canonical_primitive(4, 3, &[r(2, 1), r(2, 1), r(2, 1), r(0, 1)]).unwrap();
        assert_eq!(v.coords(), &[1, 1, 1, 0]);
        assert!(canonical_primitive::<i64>(4, 3, &[r(0, 1); 4]).is_err());
    }

    #[test]
    fn redundant_rows_are_dropped() {
        // nonnegativity is implied by the triangle inequalities for m = 1
        let h: ConeH<i64> = build_cone_h(Family::Nhm, 5, 1).unwrap();
        let v = rays_from_inequalities(&h, &DdOptions::default()).unwrap();
        assert_eq!(v.len(), 25);
        assert_eq!(irredundant(&h, &v).unwrap().len(), 30);
    }
}
