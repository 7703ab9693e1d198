//! Skeleton and ridge graphs, diameters, local graphs, orbit restrictions
//! and recognition of small named graphs.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::cone::{ConeH, ConeV};
use crate::dd::IncidenceMatrix;
use crate::error::{Error, Result};
use crate::graph::{self, Graph};
use crate::linalg;
use crate::scalar::Scalar;
use crate::symmetry::{OrbitDecomposition, SymmetricGroup};
use crate::vector::HemiVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GraphKind {
    /// Vertices are extreme rays.
    Skeleton,
    /// Vertices are facets.
    Ridge,
}

/// How a pair of faces is declared adjacent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum AdjacencyTest {
    /// Rank of the common tight set equals dim - 2.
    #[default]
    Rank,
    /// No third face contains the common tight set.
    Combinatorial,
}

#[derive(Clone, Debug)]
pub struct FaceGraph {
    pub kind: GraphKind,
    pub graph: Graph,
    /// Index into the ray or facet family of every graph vertex.
    pub vertices: Vec<usize>,
    /// Orbit id of every graph vertex, when known.
    pub orbit_of: Option<Vec<usize>>,
}

impl FaceGraph {
    pub fn order(&self) -> usize {
        self.graph.order()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn with_orbits<S: Scalar>(mut self, decomp: &OrbitDecomposition<S>) -> Self {
        self.orbit_of = Some(self.vertices.iter().map(|&v| decomp.orbit_of[v]).collect());
        self
    }

    fn sub(&self, keep: &[usize]) -> FaceGraph {
        FaceGraph {
            kind: self.kind,
            graph: self.graph.induced(keep),
            vertices: keep.iter().map(|&i| self.vertices[i]).collect(),
            orbit_of: self
                .orbit_of
                .as_ref()
                .map(|o| keep.iter().map(|&i| o[i]).collect()),
        }
    }
}

/// Tight sets of one family against the dual vectors, with the adjacency
/// test between two members.
pub struct AdjacencyOracle<'a, S: Scalar> {
    sets: &'a [BitSet],
    dual: Vec<&'a [S]>,
    dim: usize,
    test: AdjacencyTest,
}

impl<'a, S: Scalar> AdjacencyOracle<'a, S> {
    /// Adjacency of rays: `inc` rows against the inequality normals.
    pub fn rays(
        h: &'a ConeH<S>,
        v: &ConeV<S>,
        inc: &'a IncidenceMatrix,
        test: AdjacencyTest,
    ) -> Result<Self> {
        check_triple(h, v, inc)?;
        Ok(AdjacencyOracle {
            sets: inc.ray_rows(),
            dual: h.inequalities.iter().map(|i| i.normal.coords()).collect(),
            dim: h.dim(),
            test,
        })
    }

    /// Adjacency of facets: `inc` columns against the rays.
    pub fn facets(
        h: &ConeH<S>,
        v: &'a ConeV<S>,
        inc: &'a IncidenceMatrix,
        test: AdjacencyTest,
    ) -> Result<Self> {
        check_triple(h, v, inc)?;
        Ok(AdjacencyOracle {
            sets: inc.ineq_cols(),
            dual: v.rays.iter().map(|r| r.coords()).collect(),
            dim: h.dim(),
            test,
        })
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Sorted neighbours of member `i`.
    pub fn neighbors(&self, i: usize) -> Result<Vec<usize>> {
        self.neighbors_above(i, 0)
    }

    fn neighbors_above(&self, i: usize, from: usize) -> Result<Vec<usize>> {
        if i >= self.sets.len() {
            return Err(Error::UnknownVertex(i));
        }
        let need = self.dim.saturating_sub(2);
        let si = &self.sets[i];
        // any face containing the common set of (i, j) meets si in >= need elements
        let close: Vec<usize> = (0..self.sets.len())
            .filter(|&t| t != i && self.sets[t].intersection_count(si) >= need)
            .collect();
        let mut out = Vec::new();
        for &j in close.iter().filter(|&&j| j >= from) {
            let common = si.intersection(&self.sets[j]);
            let adjacent = match self.test {
                AdjacencyTest::Combinatorial => !close
                    .iter()
                    .any(|&t| t != j && common.is_subset(&self.sets[t])),
                AdjacencyTest::Rank => {
                    let rows: Vec<&[S]> = common.iter().map(|c| self.dual[c]).collect();
                    linalg::rank(&rows, self.dim)? == need
                }
            };
            if adjacent {
                out.push(j);
            }
        }
        Ok(out)
    }

    /// The whole graph by testing every pair.
    pub fn graph(&self) -> Result<Graph> {
        let lists: Vec<Vec<usize>> = (0..self.len())
            .into_par_iter()
            .map(|i| self.neighbors_above(i, i + 1))
            .collect::<Result<_>>()?;
        let mut g = Graph::new(self.len());
        for (i, l) in lists.into_iter().enumerate() {
            for j in l {
                g.add_edge(i, j);
            }
        }
        Ok(g)
    }

    /// The whole graph from the neighbours of one member per orbit, moved
    /// around by the group. Requires an invariant family.
    pub fn graph_by_symmetry(
        &self,
        family: &[HemiVector<S>],
        group: &SymmetricGroup,
        decomp: &OrbitDecomposition<S>,
    ) -> Result<Graph> {
        let lookup: HashMap<&[S], usize> = family
            .iter()
            .enumerate()
            .map(|(i, v)| (v.coords(), i))
            .collect();
        let transversal = group.transversal(family, decomp);
        if transversal.contains(&usize::MAX) {
            return Err(Error::InvalidPermutation(
                "family is not closed under Sym(n)".into(),
            ));
        }
        let leader_nbrs: Vec<Vec<usize>> = decomp
            .leaders()
            .into_par_iter()
            .map(|l| self.neighbors(l))
            .collect::<Result<_>>()?;
        let mut g = Graph::new(family.len());
        for (j, &gi) in transversal.iter().enumerate() {
            let elem = &group.elements()[gi];
            for &x in &leader_nbrs[decomp.orbit_of[j]] {
                let img = elem.act(&family[x])?;
                let y = *lookup.get(img.coords()).ok_or_else(|| {
                    Error::InvalidPermutation("family is not closed under Sym(n)".into())
                })?;
                if y > j {
                    g.add_edge(j, y);
                } else if !g.has_edge(j, y) {
                    return Err(Error::InconsistentRelation { row: j, col: y });
                }
            }
        }
        Ok(g)
    }
}

fn check_triple<S: Scalar>(h: &ConeH<S>, v: &ConeV<S>, inc: &IncidenceMatrix) -> Result<()> {
    if h.dim() != v.dim() || inc.num_rays() != v.len() || inc.num_inequalities() != h.len() {
        return Err(Error::InvalidDimension(format!(
            "inconsistent input: {} rays, {} inequalities, incidence {}x{}",
            v.len(),
            h.len(),
            inc.num_rays(),
            inc.num_inequalities()
        )));
    }
    Ok(())
}

/// Graph on the extreme rays; adjacent rays span a 2-face.
pub fn skeleton<S: Scalar>(
    v: &ConeV<S>,
    h: &ConeH<S>,
    inc: &IncidenceMatrix,
    test: AdjacencyTest,
) -> Result<FaceGraph> {
    let oracle = AdjacencyOracle::rays(h, v, inc, test)?;
    Ok(FaceGraph {
        kind: GraphKind::Skeleton,
        graph: oracle.graph()?,
        vertices: (0..v.len()).collect(),
        orbit_of: None,
    })
}

/// Graph on the facets; adjacent facets meet in a face of codimension 2.
pub fn ridge<S: Scalar>(
    h: &ConeH<S>,
    v: &ConeV<S>,
    inc: &IncidenceMatrix,
    test: AdjacencyTest,
) -> Result<FaceGraph> {
    let oracle = AdjacencyOracle::facets(h, v, inc, test)?;
    Ok(FaceGraph {
        kind: GraphKind::Ridge,
        graph: oracle.graph()?,
        vertices: (0..h.len()).collect(),
        orbit_of: None,
    })
}

/// Largest distance; `None` for a disconnected graph.
pub fn diameter(g: &FaceGraph) -> Option<usize> {
    g.graph.diameter()
}

/// Diameter of a graph whose automorphisms act transitively on each orbit:
/// the largest eccentricity among one vertex per orbit.
pub fn diameter_by_orbits(g: &FaceGraph) -> Option<usize> {
    let Some(orbit_of) = &g.orbit_of else {
        return diameter(g);
    };
    let mut firsts: Vec<usize> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (v, &o) in orbit_of.iter().enumerate() {
        if seen.insert(o) {
            firsts.push(v);
        }
    }
    let ecc: Vec<Option<usize>> = firsts
        .into_par_iter()
        .map(|v| g.graph.eccentricity(v))
        .collect();
    ecc.into_iter().try_fold(0, |acc, e| e.map(|e| acc.max(e)))
}

/// Subgraph induced by the neighbours of `vertex`.
pub fn local_graph(g: &FaceGraph, vertex: usize) -> Result<FaceGraph> {
    if vertex >= g.order() {
        return Err(Error::UnknownVertex(vertex));
    }
    let nbrs: Vec<usize> = g.graph.neighbors(vertex).collect();
    Ok(g.sub(&nbrs))
}

/// Subgraph induced by the vertices of one orbit.
pub fn restrict_to_orbit(g: &FaceGraph, orbit: usize) -> Result<FaceGraph> {
    let orbit_of = g.orbit_of.as_ref().ok_or(Error::UnknownOrbit(orbit))?;
    let keep: Vec<usize> = (0..g.order()).filter(|&v| orbit_of[v] == orbit).collect();
    if keep.is_empty() {
        return Err(Error::UnknownOrbit(orbit));
    }
    Ok(g.sub(&keep))
}

/// Graphs the catalog can name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NamedGraph {
    Empty(usize),
    Complete(usize),
    Cycle(usize),
    /// K_{size, ..., size} with `parts` parts.
    CompleteMultipartite {
        parts: usize,
        size: usize,
    },
    Octahedron,
    Cube(usize),
    Petersen,
    Johnson {
        n: usize,
        k: usize,
    },
    Hamming(Vec<usize>),
    /// K_p minus q disjoint copies of K_r.
    CompleteMinusCliques {
        p: usize,
        q: usize,
        r: usize,
    },
    /// K_p minus the edges of a cycle C_c.
    CompleteMinusCycle {
        p: usize,
        c: usize,
    },
    /// A new vertex placed on every edge of the inner graph.
    Subdivision(Box<NamedGraph>),
    Complement(Box<NamedGraph>),
}

impl fmt::Display for NamedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedGraph::Empty(n) => write!(f, "empty graph on {n} vertices"),
            NamedGraph::Complete(n) => write!(f, "K_{n}"),
            NamedGraph::Cycle(n) => write!(f, "C_{n}"),
            NamedGraph::CompleteMultipartite { parts, size } => {
                write!(f, "K_{{{}}}", vec![size.to_string(); *parts].join(","))
            }
            NamedGraph::Octahedron => write!(f, "octahedron K_6 − 3K_2"),
            NamedGraph::Cube(d) => write!(f, "cube Q_{d}"),
            NamedGraph::Petersen => write!(f, "Petersen graph"),
            NamedGraph::Johnson { n, k } => write!(f, "Johnson J({n},{k})"),
            NamedGraph::Hamming(s) => {
                write!(
                    f,
                    "Hamming {}",
                    s.iter()
                        .map(|x| format!("K_{x}"))
                        .collect::<Vec<_>>()
                        .join(" □ ")
                )
            }
            NamedGraph::CompleteMinusCliques { p, q, r } => write!(f, "K_{p} − {q}K_{r}"),
            NamedGraph::CompleteMinusCycle { p, c } => write!(f, "K_{p} − C_{c}"),
            NamedGraph::Subdivision(g) => write!(f, "{g} with a new vertex on each edge"),
            NamedGraph::Complement(g) => write!(f, "complement of {g}"),
        }
    }
}

impl NamedGraph {
    pub fn build(&self) -> Graph {
        match self {
            NamedGraph::Empty(n) => Graph::new(*n),
            NamedGraph::Complete(n) => graph::complete(*n),
            NamedGraph::Cycle(n) => graph::cycle(*n),
            NamedGraph::CompleteMultipartite { parts, size } => {
                graph::complete_multipartite(*parts, *size)
            }
            NamedGraph::Octahedron => graph::complete_minus_cliques(6, 3, 2),
            NamedGraph::Cube(d) => graph::hypercube(*d),
            NamedGraph::Petersen => graph::petersen(),
            NamedGraph::Johnson { n, k } => graph::johnson(*n, *k),
            NamedGraph::Hamming(s) => graph::hamming(s),
            NamedGraph::CompleteMinusCliques { p, q, r } => {
                graph::complete_minus_cliques(*p, *q, *r)
            }
            NamedGraph::CompleteMinusCycle { p, c } => {
                let mut g = graph::complete(*p);
                for i in 0..*c {
                    g.remove_edge(i, (i + 1) % c);
                }
                g
            }
            NamedGraph::Subdivision(g) => graph::subdivision(&g.build()),
            NamedGraph::Complement(g) => g.build().complement(),
        }
    }
}

/// Largest graph the catalog will look at.
pub const CATALOG_LIMIT: usize = 64;

/// Names `g` if it is isomorphic to a catalog graph of the same order.
pub fn identify_graph(g: &Graph) -> Result<Option<NamedGraph>> {
    let n = g.order();
    if n > CATALOG_LIMIT {
        return Err(Error::TooLarge(n));
    }
    let e = g.edge_count();
    Ok(candidates(n).into_iter().find(|c| {
        let h = c.build();
        h.order() == n && h.edge_count() == e && g.is_isomorphic(&h)
    }))
}

fn candidates(n: usize) -> Vec<NamedGraph> {
    let mut out = Vec::new();
    if n == 6 {
        out.push(NamedGraph::Octahedron);
    }
    if n == 10 {
        out.push(NamedGraph::Petersen);
    }
    if n == 25 {
        out.push(NamedGraph::Subdivision(Box::new(NamedGraph::Petersen)));
    }
    for d in 3..=6 {
        if n == 1 << d {
            out.push(NamedGraph::Cube(d));
        }
    }
    for jn in 5..=12 {
        for k in 2..=jn / 2 {
            if crate::tuples::binomial(jn, k) == n {
                out.push(NamedGraph::Johnson { n: jn, k });
                out.push(NamedGraph::Complement(Box::new(NamedGraph::Johnson {
                    n: jn,
                    k,
                })));
            }
        }
    }
    out.push(NamedGraph::Empty(n));
    out.push(NamedGraph::Complete(n));
    if n >= 3 {
        out.push(NamedGraph::Cycle(n));
    }
    for size in 2..n {
        if n.is_multiple_of(size) && n / size >= 2 {
            out.push(NamedGraph::CompleteMultipartite {
                parts: n / size,
                size,
            });
        }
    }
    for s in factorizations(n, n) {
        if s.len() >= 2 {
            out.push(NamedGraph::Hamming(s.clone()));
            out.push(NamedGraph::Complement(Box::new(NamedGraph::Hamming(s))));
        }
    }
    for r in 2..n {
        for q in 1..=n / r {
            out.push(NamedGraph::CompleteMinusCliques { p: n, q, r });
        }
    }
    for c in 4..=n {
        out.push(NamedGraph::CompleteMinusCycle { p: n, c });
    }
    out
}

/// Nonincreasing factor lists (each >= 2) with product `n`.
fn factorizations(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 1 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for f in (2..=max.min(n)).rev() {
        if n.is_multiple_of(f) {
            for mut rest in factorizations(n / f, f) {
                rest.insert(0, f);
                out.push(rest);
            }
        }
    }
    out
}
