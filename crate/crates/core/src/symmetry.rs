//! Sym(n) acting on coordinates, orbit decomposition and orbit tables.

use std::collections::HashMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tuples::{KTuple, TupleIndex};
use crate::vector::HemiVector;

/// A point permutation together with the permutation it induces on the
/// coordinate positions of a [`TupleIndex`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoordinatePermutation {
    points: Vec<u8>,
    map: Vec<u32>,
}

impl CoordinatePermutation {
    /// `images[i]` is the image of point `i + 1` (1-based).
    pub fn new(index: &TupleIndex, images: &[usize]) -> Result<Self> {
        let n = index.n();
        if images.len() != n {
            return Err(Error::InvalidPermutation(format!(
                "expected {n} images, got {}",
                images.len()
            )));
        }
        let mut seen = vec![false; n];
        for &p in images {
            if p == 0 || p > n || seen[p - 1] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a permutation of 1..{n}"
                )));
            }
            seen[p - 1] = true;
        }
        let points: Vec<u8> = images.iter().map(|&p| (p - 1) as u8).collect();
        Ok(Self::from_points(index, points))
    }

    fn from_points(index: &TupleIndex, points: Vec<u8>) -> Self {
        let map = index
            .tuples()
            .iter()
            .map(|t| {
                let mask = t
                    .points()
                    .iter()
                    .fold(0u32, |m, &p| m | 1 << points[p as usize]);
                index.rank_mask(mask) as u32
            })
            .collect();
        CoordinatePermutation { points, map }
    }

    pub fn identity(index: &TupleIndex) -> Self {
        Self::from_points(index, (0..index.n() as u8).collect())
    }

    /// 0-based point images.
    pub fn points(&self) -> &[u8] {
        &self.points
    }

    /// `coordinate_map()[i]` is the position that coordinate `i` moves to.
    pub fn coordinate_map(&self) -> &[u32] {
        &self.map
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, index: &TupleIndex, other: &CoordinatePermutation) -> Self {
        let points = other
            .points
            .iter()
            .map(|&p| self.points[p as usize])
            .collect();
        Self::from_points(index, points)
    }

    pub fn inverse(&self, index: &TupleIndex) -> Self {
        let mut points = vec![0u8; self.points.len()];
        for (i, &p) in self.points.iter().enumerate() {
            points[p as usize] = i as u8;
        }
        Self::from_points(index, points)
    }

    /// Image of a tuple.
    pub fn apply_tuple(&self, t: &KTuple) -> KTuple {
        let mask = t
            .points()
            .iter()
            .fold(0u32, |m, &p| m | 1 << self.points[p as usize]);
        KTuple::from_mask(mask)
    }

    /// Output coordinate at `π(t)` equals input coordinate at `t`.
    pub fn act<S: Scalar>(&self, v: &HemiVector<S>) -> Result<HemiVector<S>> {
        if v.dim() != self.map.len() || v.n() != self.points.len() {
            return Err(Error::MismatchedArity {
                left: self.map.len(),
                right: v.dim(),
            });
        }
        let mut out = vec![S::zero(); v.dim()];
        self.act_into(v.coords(), &mut out);
        HemiVector::new(v.n(), v.k(), out)
    }

    #[inline]
    fn act_into<S: Scalar>(&self, v: &[S], out: &mut [S]) {
        for (x, &j) in v.iter().zip(&self.map) {
            out[j as usize] = x.clone();
        }
    }
}

/// All n! coordinate permutations for a fixed index.
#[derive(Clone, Debug)]
pub struct SymmetricGroup {
    index: TupleIndex,
    elements: Vec<CoordinatePermutation>,
}

impl SymmetricGroup {
    pub fn new(index: &TupleIndex) -> Self {
        let n = index.n();
        let elements = (0..n as u8)
            .permutations(n)
            .map(|p| CoordinatePermutation::from_points(index, p))
            .collect();
        SymmetricGroup {
            index: index.clone(),
            elements,
        }
    }

    pub fn index(&self) -> &TupleIndex {
        &self.index
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[CoordinatePermutation] {
        &self.elements
    }

    /// Lexicographically smallest image of `v`.
    pub fn canonical<S: Scalar>(&self, v: &HemiVector<S>) -> HemiVector<S> {
        let mut best = v.coords().to_vec();
        let mut buf = best.clone();
        for g in &self.elements {
            g.act_into(v.coords(), &mut buf);
            if buf < best {
                std::mem::swap(&mut buf, &mut best);
            }
        }
        HemiVector::new(v.n(), v.k(), best).expect("same shape")
    }

    /// Distinct images of `v` in sorted order.
    pub fn orbit<S: Scalar>(&self, v: &HemiVector<S>) -> Vec<HemiVector<S>> {
        let mut out: Vec<Vec<S>> = self
            .elements
            .iter()
            .map(|g| {
                let mut buf = vec![S::zero(); v.dim()];
                g.act_into(v.coords(), &mut buf);
                buf
            })
            .collect();
        out.sort();
        out.dedup();
        out.into_iter()
            .map(|c| HemiVector::new(v.n(), v.k(), c).expect("same shape"))
            .collect()
    }

    /// True when every image of every member is again a member.
    pub fn is_invariant<S: Scalar>(&self, family: &[HemiVector<S>]) -> bool {
        let set: std::collections::HashSet<&[S]> = family.iter().map(|v| v.coords()).collect();
        let mut buf: Vec<S> = vec![S::zero(); self.index.dim()];
        family.iter().all(|v| {
            self.elements.iter().all(|g| {
                g.act_into(v.coords(), &mut buf);
                set.contains(buf.as_slice())
            })
        })
    }

    /// For every member, a group element (index into [`Self::elements`])
    /// taking the first member of its orbit to it.
    pub fn transversal<S: Scalar>(
        &self,
        family: &[HemiVector<S>],
        decomp: &OrbitDecomposition<S>,
    ) -> Vec<usize> {
        let lookup: HashMap<&[S], usize> = family
            .iter()
            .enumerate()
            .map(|(i, v)| (v.coords(), i))
            .collect();
        let mut out = vec![usize::MAX; family.len()];
        let mut buf: Vec<S> = vec![S::zero(); self.index.dim()];
        for o in &decomp.orbits {
            let l = o.members[0];
            for (gi, g) in self.elements.iter().enumerate() {
                g.act_into(family[l].coords(), &mut buf);
                if let Some(&j) = lookup.get(buf.as_slice()) {
                    if out[j] == usize::MAX {
                        out[j] = gi;
                    }
                }
            }
        }
        out
    }

    /// Splits `family` into orbits. Each orbit is scanned once: the images of
    /// its first unassigned member are looked up in a hash of the family.
    /// Images that are not members are ignored, so a family that is not
    /// invariant yields orbits that only partly fill their Sym(n) orbit.
    pub fn decompose<S: Scalar>(&self, family: &[HemiVector<S>]) -> OrbitDecomposition<S> {
        let lookup: HashMap<&[S], usize> = family
            .iter()
            .enumerate()
            .map(|(i, v)| (v.coords(), i))
            .collect();
        let mut orbit_of = vec![usize::MAX; family.len()];
        let mut orbits: Vec<Orbit<S>> = Vec::new();
        let mut buf: Vec<S> = vec![S::zero(); self.index.dim()];
        for i in 0..family.len() {
            if orbit_of[i] != usize::MAX {
                continue;
            }
            let id = orbits.len();
            let mut best = family[i].coords().to_vec();
            let mut members = Vec::new();
            for g in &self.elements {
                g.act_into(family[i].coords(), &mut buf);
                if let Some(&j) = lookup.get(buf.as_slice()) {
                    if orbit_of[j] == usize::MAX {
                        orbit_of[j] = id;
                        members.push(j);
                    }
                }
                if buf < best {
                    best.clone_from(&buf);
                }
            }
            members.sort_unstable();
            let representative =
                HemiVector::new(family[i].n(), family[i].k(), best).expect("same shape");
            orbits.push(Orbit {
                representative,
                members,
            });
        }
        orbits.sort_by(|a, b| a.representative.cmp(&b.representative));
        for (id, o) in orbits.iter().enumerate() {
            for &j in &o.members {
                orbit_of[j] = id;
            }
        }
        OrbitDecomposition {
            n: self.index.n(),
            orbits,
            orbit_of,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct Orbit<S = i64> {
    /// Lexicographically minimal image.
    pub representative: HemiVector<S>,
    /// Sorted indices into the decomposed family.
    pub members: Vec<usize>,
}

impl<S> Orbit<S> {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct OrbitDecomposition<S = i64> {
    pub n: usize,
    /// Sorted by representative.
    pub orbits: Vec<Orbit<S>>,
    /// Orbit id of every family member.
    pub orbit_of: Vec<usize>,
}

impl<S: Scalar> OrbitDecomposition<S> {
    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(|o| o.len()).collect()
    }

    /// First member of each orbit (the member used for table rows).
    pub fn leaders(&self) -> Vec<usize> {
        self.orbits.iter().map(|o| o.members[0]).collect()
    }

    /// Orbit whose representative equals the canonical form of `v`.
    pub fn find(&self, group: &SymmetricGroup, v: &HemiVector<S>) -> Option<usize> {
        let c = group.canonical(v);
        self.orbits
            .binary_search_by(|o| o.representative.cmp(&c))
            .ok()
    }

    /// Same orbits in a different order: `order[i]` is the old id of new orbit `i`.
    pub fn reordered(&self, order: &[usize]) -> Result<Self> {
        check_order(order, self.orbits.len())?;
        let orbits: Vec<Orbit<S>> = order.iter().map(|&o| self.orbits[o].clone()).collect();
        let mut orbit_of = self.orbit_of.clone();
        for (id, o) in orbits.iter().enumerate() {
            for &j in &o.members {
                orbit_of[j] = id;
            }
        }
        Ok(OrbitDecomposition {
            n: self.n,
            orbits,
            orbit_of,
        })
    }
}

fn check_order(order: &[usize], len: usize) -> Result<()> {
    let mut seen = vec![false; len];
    if order.len() != len {
        return Err(Error::UnknownOrbit(order.len()));
    }
    for &o in order {
        if o >= len || seen[o] {
            return Err(Error::UnknownOrbit(o));
        }
        seen[o] = true;
    }
    Ok(())
}

/// One row of an orbit table, in the format of the adjacency tables for
/// rays and facets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRow {
    /// Neighbours of one member in each orbit.
    pub adjacency: Vec<usize>,
    pub total_adjacency: usize,
    /// Incident members of each orbit of the dual family.
    pub incidence: Vec<usize>,
    pub total_incidence: usize,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitTable {
    pub rows: Vec<OrbitRow>,
}

/// Incidence between a decomposed family and the dual family.
pub struct IncidenceRelation<'a, S: Scalar> {
    /// Member of this family -> incident members of the dual family.
    pub forward: &'a [BitSet],
    /// Member of the dual family -> incident members of this family.
    pub backward: &'a [BitSet],
    pub dual: &'a OrbitDecomposition<S>,
}

/// Builds the table from neighbour lists of one member per orbit and checks
/// `|O_i| a_ij = |O_j| a_ji` for adjacency and incidence.
pub fn orbit_table<S: Scalar>(
    decomp: &OrbitDecomposition<S>,
    neighbors: &dyn Fn(usize) -> Vec<usize>,
    incidence: Option<&IncidenceRelation<'_, S>>,
) -> Result<OrbitTable> {
    let k = decomp.len();
    let leaders = decomp.leaders();
    let sizes = decomp.sizes();
    let mut rows = Vec::with_capacity(k);
    for &l in &leaders {
        let mut adjacency = vec![0usize; k];
        for j in neighbors(l) {
            if j == l {
                return Err(Error::UnknownVertex(j));
            }
            adjacency[decomp.orbit_of[j]] += 1;
        }
        let (incidence_counts, total_incidence) = match incidence {
            Some(rel) => {
                let mut c = vec![0usize; rel.dual.len()];
                for j in rel.forward[l].iter() {
                    c[rel.dual.orbit_of[j]] += 1;
                }
                let t = c.iter().sum();
                (c, t)
            }
            None => (Vec::new(), 0),
        };
        rows.push(OrbitRow {
            total_adjacency: adjacency.iter().sum(),
            adjacency,
            incidence: incidence_counts,
            total_incidence,
            size: sizes[decomp.orbit_of[l]],
        });
    }
    for i in 0..k {
        for j in 0..k {
            if sizes[i] * rows[i].adjacency[j] != sizes[j] * rows[j].adjacency[i] {
                return Err(Error::InconsistentRelation { row: i, col: j });
            }
        }
    }
    if let Some(rel) = incidence {
        let dual_sizes = rel.dual.sizes();
        for (j, dl) in rel.dual.leaders().into_iter().enumerate() {
            let mut back = vec![0usize; k];
            for i in rel.backward[dl].iter() {
                back[decomp.orbit_of[i]] += 1;
            }
            for i in 0..k {
                if sizes[i] * rows[i].incidence[j] != dual_sizes[j] * back[i] {
                    return Err(Error::InconsistentRelation { row: i, col: j });
                }
            }
        }
    }
    Ok(OrbitTable { rows })
}

impl OrbitTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Orbit order by decreasing (total adjacency, total incidence), ties by
    /// current position.
    pub fn degree_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| {
            (
                std::cmp::Reverse((self.rows[i].total_adjacency, self.rows[i].total_incidence)),
                i,
            )
        });
        order
    }

    /// Rows and adjacency columns permuted; `order[i]` is the old id of new row `i`.
    pub fn reordered(&self, order: &[usize]) -> Result<Self> {
        check_order(order, self.rows.len())?;
        let rows = order
            .iter()
            .map(|&o| {
                let r = &self.rows[o];
                OrbitRow {
                    adjacency: order.iter().map(|&c| r.adjacency[c]).collect(),
                    ..r.clone()
                }
            })
            .collect();
        Ok(OrbitTable { rows })
    }

    /// Incidence columns permuted to match a reordered dual decomposition.
    pub fn with_dual_order(&self, order: &[usize]) -> Result<Self> {
        let mut out = self.clone();
        for r in out.rows.iter_mut() {
            check_order(order, r.incidence.len())?;
            r.incidence = order.iter().map(|&c| r.incidence[c]).collect();
        }
        Ok(out)
    }

    /// `(total adjacency, total incidence)` per row.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.rows
            .iter()
            .map(|r| (r.total_adjacency, r.total_incidence))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::{build_cone_h, build_cone_p, Family};
    use crate::vector::{partition_hemimetric, Partition};

    #[test]
    fn transposition_relabels_blocks() {
        let idx = TupleIndex::new(5, 3).unwrap();
        let a =
            partition_hemimetric::<i64>(&idx, &Partition::parse(5, "1,23,45").unwrap()).unwrap();
        let b =
            partition_hemimetric::<i64>(&idx, &Partition::parse(5, "2,13,45").unwrap()).unwrap();
        let swap = CoordinatePermutation::new(&idx, &[2, 1, 3, 4, 5]).unwrap();
        assert_eq!(swap.act(&a).unwrap(), b);
        let id = CoordinatePermutation::identity(&idx);
        assert_eq!(id.act(&a).unwrap(), a);
        assert!(CoordinatePermutation::new(&idx, &[1, 1, 3, 4, 5]).is_err());
    }

    #[test]
    fn group_action_composes() {
        let idx = TupleIndex::new(5, 3).unwrap();
        let g = SymmetricGroup::new(&idx);
        assert_eq!(g.order(), 120);
        let v = HemiVector::<i64>::new(5, 3, (0..10).collect()).unwrap();
        for s in g.elements().iter().step_by(7) {
            for p in g.elements().iter().step_by(11) {
                let sp = s.compose(&idx, p);
                assert_eq!(sp.act(&v).unwrap(), s.act(&p.act(&v).unwrap()).unwrap());
                assert_eq!(p.inverse(&idx).act(&p.act(&v).unwrap()).unwrap(), v);
            }
        }
    }

    #[test]
    fn simplex_normals_are_permuted_among_themselves() {
        let h = build_cone_h::<i64>(Family::Hm, 5, 2).unwrap();
        let normals: Vec<HemiVector<i64>> =
            h.inequalities.iter().map(|i| i.normal.clone()).collect();
        let g = SymmetricGroup::new(&h.index);
        assert!(g.is_invariant(&normals));
        for e in g.elements() {
            for v in &normals {
                assert!(normals.contains(&e.act(v).unwrap()));
            }
        }
    }

    #[test]
    fn partition_orbits_of_p52() {
        let v = build_cone_p::<i64>(5, 2).unwrap();
        let g = SymmetricGroup::new(&v.index);
        let d = g.decompose(&v.rays);
        let mut sizes = d.sizes();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![10, 15]);
        let a = partition_hemimetric::<i64>(&v.index, &Partition::parse(5, "1,2,345").unwrap())
            .unwrap();
        let b = partition_hemimetric::<i64>(&v.index, &Partition::parse(5, "1,23,45").unwrap())
            .unwrap();
        let ia = d.find(&g, &a).unwrap();
        let ib = d.find(&g, &b).unwrap();
        assert_ne!(ia, ib);
        assert_eq!(d.orbits[ia].len(), 10);
        assert_eq!(d.orbits[ib].len(), 15);
        for o in &d.orbits {
            assert_eq!(g.canonical(&v.rays[o.members[0]]), o.representative);
            assert_eq!(g.orbit(&o.representative).len(), o.len());
        }
    }

    #[test]
    fn double_counting_is_enforced() {
        let v = build_cone_p::<i64>(4, 2).unwrap();
        let g = SymmetricGroup::new(&v.index);
        let d = g.decompose(&v.rays);
        assert_eq!(d.len(), 1);
        let all = |i: usize| (0..6).filter(|&j| j != i).collect::<Vec<_>>();
        let t = orbit_table(&d, &all, None).unwrap();
        assert_eq!(t.rows[0].total_adjacency, 5);
        let split = d.clone();
        let two = OrbitDecomposition {
            n: 4,
            orbits: vec![
                Orbit {
                    representative: split.orbits[0].representative.clone(),
                    members: vec![0],
                },
                Orbit {
                    representative: split.orbits[0].representative.clone(),
                    members: vec![1, 2, 3, 4, 5],
                },
            ],
            orbit_of: vec![0, 1, 1, 1, 1, 1],
        };
        let star = |i: usize| if i == 0 { vec![1] } else { vec![0] };
        assert!(matches!(
            orbit_table(&two, &star, None),
            Err(Error::InconsistentRelation { .. })
        ));
    }
}
