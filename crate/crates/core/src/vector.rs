//! Exact vectors over the (m+1)-subsets of V_n: partition hemimetrics,
//! multicut semimetrics, the simplex inequality and R-graphs.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{self, Graph};
use crate::scalar::{self, Scalar};
use crate::tuples::{binomial, enumerate_tuples, KTuple, TupleIndex};

/// A vector indexed by the k-subsets of {1..n} in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct HemiVector<S = i64> {
    n: usize,
    k: usize,
    coords: Vec<S>,
}

impl<S: Scalar> HemiVector<S> {
    pub fn new(n: usize, k: usize, coords: Vec<S>) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::InvalidDimension(format!("k={k} for n={n}")));
        }
        if coords.len() != binomial(n, k) {
            return Err(Error::InvalidDimension(format!(
                "expected C({n},{k}) = {} coordinates, got {}",
                binomial(n, k),
                coords.len()
            )));
        }
        Ok(HemiVector { n, k, coords })
    }

    pub fn zeros(n: usize, k: usize) -> Self {
        HemiVector {
            n,
            k,
            coords: vec![S::zero(); binomial(n, k)],
        }
    }

    pub fn from_i64s(n: usize, k: usize, coords: &[i64]) -> Result<Self> {
        Self::new(n, k, coords.iter().map(|&c| S::int(c)).collect())
    }

    /// Reads a vector listed in complement order, i.e. coordinate `i` belongs
    /// to the complement of the `i`-th (n-k)-subset in lexicographic order.
    /// This is the layout conventionally used for printing 3- and 4-hemimetric
    /// vectors on n = m+3 points.
    pub fn from_complement_order(n: usize, k: usize, coords: &[i64]) -> Result<Self> {
        let idx = TupleIndex::new(n, k)?;
        let comps = enumerate_tuples(n, n - k)?;
        if coords.len() != comps.len() {
            return Err(Error::InvalidDimension(format!(
                "expected {} coordinates, got {}",
                comps.len(),
                coords.len()
            )));
        }
        let mut v = Self::zeros(n, k);
        for (c, t) in coords.iter().zip(&comps) {
            let pos = idx.rank(&idx.complement(t))?;
            v.coords[pos] = S::int(*c);
        }
        Ok(v)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<S> {
        self.coords
    }

    pub(crate) fn coords_mut(&mut self) -> &mut [S] {
        &mut self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Positions of the nonzero coordinates.
    pub fn support(&self) -> Vec<usize> {
        (0..self.coords.len())
            .filter(|&i| !self.coords[i].is_zero())
            .collect()
    }

    /// Integer coordinates with gcd one.
    pub fn is_primitive(&self) -> bool {
        scalar::content(&self.coords).is_one()
    }

    pub fn dot(&self, other: &HemiVector<S>) -> Result<S> {
        if self.dim() != other.dim() {
            return Err(Error::MismatchedArity {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(scalar::dot(&self.coords, &other.coords)?)
    }

    pub fn add(&self, other: &HemiVector<S>) -> Result<HemiVector<S>> {
        if self.dim() != other.dim() {
            return Err(Error::MismatchedArity {
                left: self.dim(),
                right: other.dim(),
            });
        }
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| scalar::add(a, b))
            .collect::<std::result::Result<Vec<S>, _>>()?;
        Ok(HemiVector {
            n: self.n,
            k: self.k,
            coords,
        })
    }

    pub fn index(&self) -> TupleIndex {
        TupleIndex::new(self.n, self.k).expect("vector shape was validated")
    }

    /// Multi-line rendering with a coordinate header.
    pub fn layout(&self) -> String {
        let idx = self.index();
        let names: Vec<String> = idx
            .tuples()
            .iter()
            .map(|t| format!("x{}", idx.render(t)))
            .collect();
        format!("x=({})\n  {}", names.join(", "), self)
    }
}

impl<S: Scalar> fmt::Display for HemiVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A set partition of {1..n} into nonempty blocks, blocks sorted by minimum.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<u8>>,
}

impl Partition {
    /// From 1-based blocks in any order.
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(blocks.len());
        for b in blocks {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            let mut block = Vec::with_capacity(b.len());
            for p in b {
                if p == 0 || p > n {
                    return Err(Error::InvalidPartition(format!(
                        "point {p} outside 1..={n}"
                    )));
                }
                if seen[p - 1] {
                    return Err(Error::InvalidPartition(format!("point {p} in two blocks")));
                }
                seen[p - 1] = true;
                block.push((p - 1) as u8);
            }
            block.sort_unstable();
            out.push(block);
        }
        if let Some(p) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!(
                "point {} is not covered",
                p + 1
            )));
        }
        out.sort_by_key(|b| b[0]);
        Ok(Partition { n, blocks: out })
    }

    pub(crate) fn from_block_labels(labels: &[u8]) -> Self {
        let q = labels.iter().copied().max().map_or(0, |m| m as usize + 1);
        let mut blocks = vec![Vec::new(); q];
        for (p, &l) in labels.iter().enumerate() {
            blocks[l as usize].push(p as u8);
        }
        blocks.sort_by_key(|b| b[0]);
        Partition {
            n: labels.len(),
            blocks,
        }
    }

    /// Parses notation such as `1,23,45` or `1|23|45` (single-digit points).
    /// Blocks may also separate points with spaces: `1|10 11|2`.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let s = s
            .trim()
            .trim_start_matches("α")
            .trim_start_matches('(')
            .trim_end_matches(')');
        let sep = if s.contains('|') { '|' } else { ',' };
        let blocks = s
            .split(sep)
            .map(|b| {
                let b = b.trim();
                let pts: Option<Vec<usize>> = if b.contains(' ') {
                    b.split_whitespace().map(|t| t.parse().ok()).collect()
                } else {
                    b.chars()
                        .map(|c| c.to_digit(10).map(|d| d as usize))
                        .collect()
                };
                pts.ok_or_else(|| Error::InvalidPartition(format!("cannot parse block {b:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(n, blocks)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// 0-based blocks.
    pub fn blocks(&self) -> &[Vec<u8>] {
        &self.blocks
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// Block label of each point.
    pub fn labels(&self) -> Vec<u8> {
        let mut l = vec![0u8; self.n];
        for (i, b) in self.blocks.iter().enumerate() {
            for &p in b {
                l[p as usize] = i as u8;
            }
        }
        l
    }

    pub fn block_masks(&self) -> Vec<u32> {
        self.blocks
            .iter()
            .map(|b| b.iter().fold(0u32, |m, &p| m | 1 << p))
            .collect()
    }

    /// Applies a point permutation (0-based images).
    pub fn relabel(&self, perm: &[u8]) -> Partition {
        let blocks: Vec<Vec<usize>> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&p| perm[p as usize] as usize + 1).collect())
            .collect();
        Partition::new(self.n, blocks).expect("relabelling preserves partitions")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.n > 9;
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let pts: Vec<String> = b.iter().map(|&p| (p + 1).to_string()).collect();
                pts.join(if wide { " " } else { "" })
            })
            .collect();
        write!(f, "α({})", parts.join(if wide { "|" } else { "," }))
    }
}

/// The 0/1 vector that is 1 exactly on the transversals of `p`.
pub fn partition_hemimetric<S: Scalar>(index: &TupleIndex, p: &Partition) -> Result<HemiVector<S>> {
    if p.num_blocks() != index.k() {
        return Err(Error::WrongBlockCount {
            expected: index.k(),
            got: p.num_blocks(),
        });
    }
    if p.n() != index.n() {
        return Err(Error::InvalidDimension(format!(
            "partition of {} points for index on {}",
            p.n(),
            index.n()
        )));
    }
    let labels = p.labels();
    let coords = index
        .tuples()
        .iter()
        .map(|t| {
            let mut hit = 0u32;
            let transversal = t.points().iter().all(|&x| {
                let bit = 1 << labels[x as usize];
                let fresh = hit & bit == 0;
                hit |= bit;
                fresh
            });
            if transversal {
                S::one()
            } else {
                S::zero()
            }
        })
        .collect();
    HemiVector::new(index.n(), index.k(), coords)
}

/// Pairwise 0/1 distance: 0 inside a block, 1 across blocks.
pub fn multicut_semimetric<S: Scalar>(p: &Partition) -> Result<HemiVector<S>> {
    if p.num_blocks() < 2 {
        return Err(Error::WrongBlockCount {
            expected: 2,
            got: p.num_blocks(),
        });
    }
    let labels = p.labels();
    let index = TupleIndex::new(p.n(), 2)?;
    let coords = index
        .tuples()
        .iter()
        .map(|t| {
            let pts = t.points();
            if labels[pts[0] as usize] == labels[pts[1] as usize] {
                S::zero()
            } else {
                S::one()
            }
        })
        .collect();
    HemiVector::new(p.n(), 2, coords)
}

/// Both closed forms of α(p)(t) in terms of δ(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AlphaFromDelta {
    pub product: u8,
    pub floor_average: u8,
}

pub fn alpha_from_delta(p: &Partition, t: &KTuple) -> Result<AlphaFromDelta> {
    let q = p.num_blocks();
    if t.len() != q {
        return Err(Error::MismatchedArity {
            left: t.len(),
            right: q,
        });
    }
    let labels = p.labels();
    let pts = t.points();
    let mut product = 1u8;
    let mut sum = 0usize;
    for s in 0..q {
        for u in s + 1..q {
            let d = u8::from(labels[pts[s] as usize] != labels[pts[u] as usize]);
            product *= d;
            sum += d as usize;
        }
    }
    let pairs = binomial(q, 2).max(1);
    Ok(AlphaFromDelta {
        product,
        floor_average: (sum / pairs) as u8,
    })
}

/// One failing instance of the simplex inequality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexViolation<S> {
    /// The (m+2)-point support.
    pub support: KTuple,
    /// The tuple on the left-hand side.
    pub distinguished: KTuple,
    /// Right-hand side minus left-hand side (negative).
    pub slack: S,
}

/// Every (support, distinguished tuple) pair where the simplex inequality fails.
pub fn check_simplex<S: Scalar>(v: &HemiVector<S>) -> Result<Vec<SimplexViolation<S>>> {
    let idx = v.index();
    let mut out = Vec::new();
    if v.k() + 1 > v.n() {
        return Ok(out);
    }
    for w in enumerate_tuples(v.n(), v.k() + 1)? {
        let wm = w.mask();
        let faces: Vec<usize> = w
            .points()
            .iter()
            .map(|&p| idx.rank_mask(wm & !(1 << p)))
            .collect();
        let mut total = S::zero();
        for &f in &faces {
            total = scalar::add(&total, &v.coords()[f])?;
        }
        for &f in &faces {
            let lhs = &v.coords()[f];
            let others = scalar::sub(&total, lhs)?;
            let slack = scalar::sub(&others, lhs)?;
            if slack.is_negative() {
                out.push(SimplexViolation {
                    support: w.clone(),
                    distinguished: idx.unrank(f).clone(),
                    slack,
                });
            }
        }
    }
    Ok(out)
}

/// Vertex-labelled induced subgraph of J(n, k) on the support of a vector.
#[derive(Clone, Debug)]
pub struct RGraph<S = i64> {
    pub vertices: Vec<KTuple>,
    pub labels: Vec<S>,
    pub graph: Graph,
}

pub fn r_graph<S: Scalar>(v: &HemiVector<S>) -> RGraph<S> {
    let idx = v.index();
    let support = v.support();
    let vertices: Vec<KTuple> = support.iter().map(|&i| idx.unrank(i).clone()).collect();
    let labels = support.iter().map(|&i| v.coords()[i].clone()).collect();
    let mut g = Graph::new(vertices.len());
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            if vertices[i].intersection_size(&vertices[j]) + 1 == v.k() {
                g.add_edge(i, j);
            }
        }
    }
    RGraph {
        vertices,
        labels,
        graph: g,
    }
}

/// True iff R(α(p)) is the Hamming graph H(|S_1|, ..., |S_q|), the
/// Cartesian product of the cliques on the blocks.
pub fn r_graph_is_hamming(p: &Partition) -> Result<bool> {
    let index = TupleIndex::new(p.n(), p.num_blocks())?;
    let v: HemiVector<i64> = partition_hemimetric(&index, p)?;
    let r = r_graph(&v);
    Ok(r.graph.is_isomorphic(&graph::hamming(&p.block_sizes())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::enumerate_partitions;

    fn part(n: usize, s: &str) -> Partition {
        Partition::parse(n, s).unwrap()
    }

    fn alpha(n: usize, s: &str) -> HemiVector<i64> {
        let p = part(n, s);
        partition_hemimetric(&TupleIndex::new(n, p.num_blocks()).unwrap(), &p).unwrap()
    }

    #[test]
    fn partition_hemimetric_examples() {
        let a = alpha(4, "1,2,34");
        assert_eq!(a.coords(), &[1, 1, 0, 0]);
        assert_eq!(a.support().len(), 2);
        assert_eq!(
            alpha(5, "1,2,345").coords(),
            &[1, 1, 1, 0, 0, 0, 0, 0, 0, 0]
        );
        assert_eq!(
            alpha(5, "1,23,45").coords(),
            &[0, 1, 1, 1, 1, 0, 0, 0, 0, 0]
        );
        let idx = TupleIndex::new(5, 3).unwrap();
        assert!(matches!(
            partition_hemimetric::<i64>(&idx, &part(5, "12,345")),
            Err(Error::WrongBlockCount {
                expected: 3,
                got: 2
            })
        ));
    }

    #[test]
    fn partition_parsing_and_display() {
        let p = part(5, "45|1|23");
        assert_eq!(p.to_string(), "α(1,23,45)");
        assert!(Partition::parse(5, "1,2,34").is_err());
        assert!(Partition::parse(4, "1,2,24").is_err());
        let wide = Partition::new(10, vec![vec![1, 10], (2..10).collect()]).unwrap();
        assert_eq!(Partition::parse(10, &wide.to_string()).unwrap(), wide);
    }

    #[test]
    fn multicut_examples() {
        let d: HemiVector<i64> = multicut_semimetric(&part(3, "1,23")).unwrap();
        assert_eq!(d.coords(), &[1, 1, 0]);
        let d: HemiVector<i64> = multicut_semimetric(&part(4, "1,2,34")).unwrap();
        assert_eq!(d.coords(), &[1, 1, 1, 1, 1, 0]);
        assert!(multicut_semimetric::<i64>(&part(3, "123")).is_err());
    }

    #[test]
    fn two_block_alpha_is_cut() {
        for n in 2..=6 {
            let idx = TupleIndex::new(n, 2).unwrap();
            for p in enumerate_partitions(n, 2).unwrap() {
                let a: HemiVector<i64> = partition_hemimetric(&idx, &p).unwrap();
                assert_eq!(a, multicut_semimetric(&p).unwrap());
            }
        }
    }

    #[test]
    fn alpha_from_delta_examples() {
        let p = part(5, "1,2,345");
        let t = KTuple::from_points(5, &[1, 2, 3]).unwrap();
        assert_eq!(
            alpha_from_delta(&p, &t).unwrap(),
            AlphaFromDelta {
                product: 1,
                floor_average: 1
            }
        );
        let t = KTuple::from_points(5, &[3, 4, 5]).unwrap();
        assert_eq!(
            alpha_from_delta(&p, &t).unwrap(),
            AlphaFromDelta {
                product: 0,
                floor_average: 0
            }
        );
        let t = KTuple::from_points(5, &[3, 4]).unwrap();
        assert!(alpha_from_delta(&p, &t).is_err());
    }

    #[test]
    fn alpha_from_delta_exhaustive() {
        for n in 2..=6 {
            for q in 2..=n {
                let idx = TupleIndex::new(n, q).unwrap();
                for p in enumerate_partitions(n, q).unwrap() {
                    let a: HemiVector<i64> = partition_hemimetric(&idx, &p).unwrap();
                    for (i, t) in idx.tuples().iter().enumerate() {
                        let ad = alpha_from_delta(&p, t).unwrap();
                        assert_eq!(ad.product as i64, a.coords()[i]);
                        assert_eq!(ad.floor_average as i64, a.coords()[i]);
                    }
                }
            }
        }
    }

    #[test]
    fn simplex_checks() {
        assert!(check_simplex(&alpha(5, "1,2,345")).unwrap().is_empty());
        let mut e = HemiVector::<i64>::zeros(4, 3);
        e.coords_mut()[0] = 1;
        let viol = check_simplex(&e).unwrap();
        assert_eq!(viol.len(), 1);
        assert_eq!(viol[0].support.to_string(), "1234");
        assert_eq!(viol[0].distinguished.to_string(), "123");
        assert_eq!(viol[0].slack, -1);
        let v6 = HemiVector::<i64>::from_complement_order(5, 3, &[1, 0, 1, 0, 1, -1, 1, 1, 2, 1])
            .unwrap();
        assert!(check_simplex(&v6).unwrap().is_empty());
        // the same list read in lexicographic order is not a hemimetric
        let lex = HemiVector::<i64>::from_i64s(5, 3, &[1, 0, 1, 0, 1, -1, 1, 1, 2, 1]).unwrap();
        assert_eq!(check_simplex(&lex).unwrap().len(), 3);
    }

    #[test]
    fn support_size_and_simplex_for_all_partitions() {
        for n in 3..=7 {
            for q in 2..n {
                let idx = TupleIndex::new(n, q).unwrap();
                for p in enumerate_partitions(n, q).unwrap() {
                    let a: HemiVector<i64> = partition_hemimetric(&idx, &p).unwrap();
                    assert_eq!(a.support().len(), p.block_sizes().iter().product::<usize>());
                    assert!(a.coords().iter().all(|&c| c == 0 || c == 1));
                    assert!(check_simplex(&a).unwrap().is_empty());
                }
            }
        }
    }

    #[test]
    fn r_graph_examples() {
        let r = r_graph(&alpha(4, "1,2,34"));
        assert_eq!(r.vertices.len(), 2);
        assert_eq!(r.graph.edge_count(), 1);
        assert!(r_graph(&alpha(5, "1,2,345"))
            .graph
            .is_isomorphic(&graph::cycle(3)));
        assert!(r_graph(&alpha(5, "1,23,45"))
            .graph
            .is_isomorphic(&graph::cycle(4)));
        assert!(r_graph(&alpha(6, "1,2,3456"))
            .graph
            .is_isomorphic(&graph::complete(4)));
        let u3 = HemiVector::<i64>::from_complement_order(
            6,
            4,
            &[0, 0, 1, 1, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 1],
        )
        .unwrap();
        assert!(r_graph(&u3).graph.is_isomorphic(&graph::cycle(5)));
    }

    #[test]
    fn hamming_structure() {
        assert!(r_graph_is_hamming(&part(5, "1,2,345")).unwrap());
        assert!(r_graph_is_hamming(&part(5, "1,23,45")).unwrap());
        assert!(r_graph_is_hamming(&part(6, "12,34,56")).unwrap());
        let cube = r_graph(&alpha(6, "12,34,56"));
        assert!(cube.graph.is_isomorphic(&graph::hypercube(3)));
    }

    #[test]
    fn complement_order_reverses_lex_order() {
        let coords: Vec<i64> = (0..15).collect();
        let v = HemiVector::<i64>::from_complement_order(6, 4, &coords).unwrap();
        let rev: Vec<i64> = (0..15).rev().collect();
        assert_eq!(v.coords(), rev.as_slice());
    }
}
