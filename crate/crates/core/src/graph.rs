//! Simple undirected graphs on `0..n` with bitset adjacency rows, plus the
//! handful of named constructions and an isomorphism test used to recognise
//! skeleton, ridge and R-graphs.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::bitset::BitSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    rows: Vec<BitSet>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            rows: vec![BitSet::new(n); n],
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn order(&self) -> usize {
        self.rows.len()
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert_ne!(u, v, "loops are not allowed");
        self.rows[u].insert(v);
        self.rows[v].insert(u);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.rows[u].remove(v);
        self.rows[v].remove(u);
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    pub fn row(&self, u: usize) -> &BitSet {
        &self.rows[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.rows[u].count()
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[u].iter()
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(BitSet::count).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.order() {
            out.extend(self.rows[u].iter().filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.order()).map(|u| self.degree(u)).collect();
        d.sort_unstable();
        d
    }

    pub fn complement(&self) -> Graph {
        let n = self.order();
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if !self.has_edge(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    /// Subgraph induced on `vertices`; vertex `i` of the result is `vertices[i]`.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut g = Graph::new(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Breadth-first eccentricity of `src`; `None` if some vertex is unreachable.
    pub fn eccentricity(&self, src: usize) -> Option<usize> {
        let n = self.order();
        let mut seen = BitSet::new(n);
        seen.insert(src);
        let mut frontier = vec![src];
        let mut reached = 1;
        let mut depth = 0;
        while reached < n {
            let mut next = Vec::new();
            for &u in &frontier {
                for v in self.rows[u].iter() {
                    if !seen.contains(v) {
                        seen.insert(v);
                        next.push(v);
                    }
                }
            }
            if next.is_empty() {
                return None;
            }
            reached += next.len();
            depth += 1;
            frontier = next;
        }
        Some(depth)
    }

    /// Largest shortest-path distance; `None` when disconnected.
    pub fn diameter(&self) -> Option<usize> {
        if self.order() == 0 {
            return Some(0);
        }
        let ecc: Vec<Option<usize>> = (0..self.order())
            .into_par_iter()
            .map(|u| self.eccentricity(u))
            .collect();
        ecc.into_iter().try_fold(0, |acc, e| e.map(|e| acc.max(e)))
    }

    pub fn is_connected(&self) -> bool {
        self.order() == 0 || self.eccentricity(0).is_some()
    }

    /// Exact isomorphism test: colour refinement, then backtracking inside
    /// colour classes.
    pub fn is_isomorphic(&self, other: &Graph) -> bool {
        self.find_isomorphism(other).is_some()
    }

    /// A vertex map `phi` with `self.has_edge(u,v) == other.has_edge(phi[u], phi[v])`.
    pub fn find_isomorphism(&self, other: &Graph) -> Option<Vec<usize>> {
        let n = self.order();
        if n != other.order()
            || self.edge_count() != other.edge_count()
            || self.degree_sequence() != other.degree_sequence()
        {
            return None;
        }
        let (ca, cb) = refine_colours(self, other);
        let mut ha: Vec<usize> = ca.clone();
        let mut hb: Vec<usize> = cb.clone();
        ha.sort_unstable();
        hb.sort_unstable();
        if ha != hb {
            return None;
        }
        // class sizes guide the search order
        let mut class_size: HashMap<usize, usize> = HashMap::new();
        for &c in &ca {
            *class_size.entry(c).or_default() += 1;
        }
        let order = search_order(self, &ca, &class_size);
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        if extend(self, other, &ca, &cb, &order, 0, &mut map, &mut used) {
            Some(map)
        } else {
            None
        }
    }
}

fn refine_colours(a: &Graph, b: &Graph) -> (Vec<usize>, Vec<usize>) {
    let mut ca: Vec<usize> = (0..a.order()).map(|u| a.degree(u)).collect();
    let mut cb: Vec<usize> = (0..b.order()).map(|u| b.degree(u)).collect();
    let mut classes = distinct(&ca, &cb);
    loop {
        let mut table: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let mut step = |g: &Graph, c: &[usize]| -> Vec<usize> {
            (0..g.order())
                .map(|u| {
                    let mut sig: Vec<usize> = g.neighbors(u).map(|v| c[v]).collect();
                    sig.sort_unstable();
                    let len = table.len();
                    *table.entry((c[u], sig)).or_insert(len)
                })
                .collect()
        };
        let na = step(a, &ca);
        let nb = step(b, &cb);
        let nclasses = distinct(&na, &nb);
        ca = na;
        cb = nb;
        if nclasses == classes {
            return (ca, cb);
        }
        classes = nclasses;
    }
}

fn distinct(a: &[usize], b: &[usize]) -> usize {
    let mut all: Vec<usize> = a.iter().chain(b).copied().collect();
    all.sort_unstable();
    all.dedup();
    all.len()
}

/// Vertices ordered so each one (after the first of its component) has an
/// already-placed neighbour, preferring small colour classes.
fn search_order(g: &Graph, colour: &[usize], class_size: &HashMap<usize, usize>) -> Vec<usize> {
    let n = g.order();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let start = (0..n)
            .filter(|&u| !placed[u])
            .min_by_key(|&u| (class_size[&colour[u]], usize::MAX - g.degree(u)))
            .unwrap();
        placed[start] = true;
        order.push(start);
        loop {
            let next = (0..n)
                .filter(|&u| !placed[u])
                .filter(|&u| order.iter().any(|&w| g.has_edge(u, w)))
                .min_by_key(|&u| {
                    let links = order.iter().filter(|&&w| g.has_edge(u, w)).count();
                    (class_size[&colour[u]], usize::MAX - links)
                });
            match next {
                Some(u) => {
                    placed[u] = true;
                    order.push(u);
                }
                None => break,
            }
        }
    }
    order
}

#[allow(clippy::too_many_arguments)]
fn extend(
    a: &Graph,
    b: &Graph,
    ca: &[usize],
    cb: &[usize],
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let u = order[depth];
    for v in 0..b.order() {
        if used[v] || cb[v] != ca[u] {
            continue;
        }
        let consistent = order[..depth]
            .iter()
            .all(|&w| a.has_edge(u, w) == b.has_edge(v, map[w]));
        if !consistent {
            continue;
        }
        map[u] = v;
        used[v] = true;
        if extend(a, b, ca, cb, order, depth + 1, map, used) {
            return true;
        }
        used[v] = false;
        map[u] = usize::MAX;
    }
    false
}

pub fn complete(n: usize) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            g.add_edge(u, v);
        }
    }
    g
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3);
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
}

/// K_{size, ..., size} with `parts` parts.
pub fn complete_multipartite(parts: usize, size: usize) -> Graph {
    let n = parts * size;
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if u / size != v / size {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// K_p minus q disjoint copies of K_r.
pub fn complete_minus_cliques(p: usize, q: usize, r: usize) -> Graph {
    assert!(q * r <= p);
    let mut g = complete(p);
    for c in 0..q {
        for i in 0..r {
            for j in i + 1..r {
                g.remove_edge(c * r + i, c * r + j);
            }
        }
    }
    g
}

/// Johnson graph J(n, k) on the k-subsets in lexicographic order.
pub fn johnson(n: usize, k: usize) -> Graph {
    let tuples = crate::tuples::enumerate_tuples(n, k).expect("valid Johnson parameters");
    let mut g = Graph::new(tuples.len());
    for i in 0..tuples.len() {
        for j in i + 1..tuples.len() {
            if tuples[i].intersection_size(&tuples[j]) + 1 == k {
                g.add_edge(i, j);
            }
        }
    }
    g
}

pub fn petersen() -> Graph {
    johnson(5, 2).complement()
}

pub fn hypercube(d: usize) -> Graph {
    let n = 1 << d;
    let mut g = Graph::new(n);
    for u in 0..n {
        for b in 0..d {
            let v = u ^ (1 << b);
            if v > u {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Hamming graph: Cartesian product of the cliques K_{s} for s in `sizes`.
pub fn hamming(sizes: &[usize]) -> Graph {
    let n: usize = sizes.iter().product();
    let digits = |mut x: usize| -> Vec<usize> {
        sizes
            .iter()
            .map(|&s| {
                let d = x % s;
                x /= s;
                d
            })
            .collect()
    };
    let labels: Vec<Vec<usize>> = (0..n).map(digits).collect();
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            let diff = labels[u]
                .iter()
                .zip(&labels[v])
                .filter(|(a, b)| a != b)
                .count();
            if diff == 1 {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Places a new vertex on every edge of `g`.
pub fn subdivision(g: &Graph) -> Graph {
    let edges = g.edges();
    let n = g.order();
    let mut s = Graph::new(n + edges.len());
    for (i, &(u, v)) in edges.iter().enumerate() {
        s.add_edge(u, n + i);
        s.add_edge(v, n + i);
    }
    s
}

pub fn disjoint_union(a: &Graph, b: &Graph) -> Graph {
    let na = a.order();
    let mut g = Graph::new(na + b.order());
    for (u, v) in a.edges() {
        g.add_edge(u, v);
    }
    for (u, v) in b.edges() {
        g.add_edge(na + u, na + v);
    }
    g
}
