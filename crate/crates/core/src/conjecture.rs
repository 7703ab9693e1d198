//! Post-hoc audits of four conjectures on computed cones. Nothing here is
//! used to prune a computation.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::analysis::{ConeData, ConeStore};
use crate::cone::{enumerate_partitions, Family, InequalityKind};
use crate::dd::is_extreme_ray;
use crate::error::{Error, Result};
use crate::faces::AdjacencyTest;
use crate::scalar::Scalar;
use crate::tuples::{KTuple, TupleIndex};
use crate::vector::{partition_hemimetric, r_graph, HemiVector, Partition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Holds,
    Fails,
    PartiallyChecked,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::PartiallyChecked => "partially-checked",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WitnessKind {
    Confirmation,
    Counterexample,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: WitnessKind,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub conjecture: u8,
    pub m: usize,
    pub n: usize,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub notes: Vec<String>,
}

impl ConjectureReport {
    fn new(conjecture: u8, m: usize, n: usize) -> Self {
        ConjectureReport {
            conjecture,
            m,
            n,
            verdict: Verdict::Holds,
            witnesses: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn confirm(&mut self, detail: String) {
        self.witnesses.push(Witness {
            kind: WitnessKind::Confirmation,
            detail,
        });
    }

    fn counterexample(&mut self, detail: String) {
        self.verdict = Verdict::Fails;
        self.witnesses.push(Witness {
            kind: WitnessKind::Counterexample,
            detail,
        });
    }

    pub fn counterexamples(&self) -> impl Iterator<Item = &Witness> {
        self.witnesses
            .iter()
            .filter(|w| w.kind == WitnessKind::Counterexample)
    }
}

impl fmt::Display for ConjectureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "conjecture {} at (m,n)=({},{}): {}",
            self.conjecture, self.m, self.n, self.verdict
        )?;
        for w in &self.witnesses {
            let tag = match w.kind {
                WitnessKind::Confirmation => "ok",
                WitnessKind::Counterexample => "counterexample",
            };
            writeln!(f, "  [{tag}] {}", w.detail)?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}

/// Partition behind every ray of P_n^m.
fn ray_partitions<S: Scalar>(p: &ConeData<S>) -> Result<Vec<Partition>> {
    let mut by_vec: HashMap<Vec<S>, Partition> = HashMap::new();
    for part in enumerate_partitions(p.n(), p.m() + 1)? {
        let v: HemiVector<S> = partition_hemimetric(&p.h().index, &part)?;
        by_vec.insert(v.into_coords(), part);
    }
    p.v()
        .rays
        .iter()
        .map(|r| {
            by_vec.get(r.coords()).cloned().ok_or_else(|| {
                Error::InvalidPartition(format!("{r} is not a partition hemimetric"))
            })
        })
        .collect()
}

/// The combinatorial non-adjacency pattern: blocks S_i, S_j, S_k of `s` and
/// T_i', T_j', T_k' of `t` with S_i ∪ S_j = T_k' and S_k = T_i' ∪ T_j'.
/// Returns (pattern found with six different sets, pattern found at all).
pub fn six_subset_pattern(s: &Partition, t: &Partition) -> (bool, bool) {
    let sm = s.block_masks();
    let tm = t.block_masks();
    let mut any = false;
    let mut distinct = false;
    let one_way = |a: &[u32], b: &[u32], any: &mut bool, distinct: &mut bool| {
        for i in 0..a.len() {
            for j in i + 1..a.len() {
                let u = a[i] | a[j];
                for (kp, &bk) in b.iter().enumerate() {
                    if bk != u {
                        continue;
                    }
                    for k in (0..a.len()).filter(|&k| k != i && k != j) {
                        for ip in (0..b.len()).filter(|&x| x != kp) {
                            for jp in (ip + 1..b.len()).filter(|&x| x != kp) {
                                if b[ip] | b[jp] == a[k] {
                                    *any = true;
                                    let six: BTreeSet<u32> =
                                        [a[i], a[j], a[k], b[ip], b[jp], b[kp]]
                                            .into_iter()
                                            .collect();
                                    if six.len() == 6 {
                                        *distinct = true;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    };
    one_way(&sm, &tm, &mut any, &mut distinct);
    (distinct, any)
}

/// Non-adjacency in the skeleton of P_n^m against the six-subset pattern.
pub fn check_conjecture_1<S: Scalar>(
    store: &ConeStore<S>,
    m: usize,
    n: usize,
) -> Result<ConjectureReport> {
    let p = store.get(Family::P, n, m)?;
    let parts = ray_partitions(p)?;
    let skel = p.skeleton(AdjacencyTest::Rank)?;
    let recheck = p.ray_oracle(AdjacencyTest::Combinatorial);
    let mut rep = ConjectureReport::new(1, m, n);
    let mut nonadjacent = 0usize;
    let mut ambiguous = 0usize;
    for a in 0..parts.len() {
        for b in a + 1..parts.len() {
            let adjacent = skel.graph.has_edge(a, b);
            let (pattern, loose) = six_subset_pattern(&parts[a], &parts[b]);
            if pattern != loose {
                ambiguous += 1;
            }
            if !adjacent {
                nonadjacent += 1;
            }
            if adjacent == pattern {
                let confirmed = recheck.neighbors(a)?.contains(&b);
                rep.counterexample(format!(
                    "{} and {}: adjacent={} (combinatorial recheck {}), pattern={}",
                    parts[a], parts[b], adjacent, confirmed, pattern
                ));
            }
        }
    }
    if rep.verdict == Verdict::Holds {
        rep.confirm(format!(
            "{} pairs checked, {} non-adjacent, all matching the six-subset pattern",
            parts.len() * (parts.len() - 1) / 2,
            nonadjacent
        ));
    }
    if ambiguous > 0 {
        rep.notes.push(format!(
            "{ambiguous} pairs match the pattern only with repeated subsets"
        ));
    }
    Ok(rep)
}

/// Maps the facets of `small` to facets of `large`.
fn facet_embedding<S: Scalar>(small: &ConeData<S>, large: &ConeData<S>) -> Result<Vec<usize>> {
    small
        .h()
        .inequalities
        .iter()
        .map(|i| {
            large
                .find_facet(&i.normal)
                .ok_or_else(|| Error::FacetNotPresent(format!("{} in {}", i.label(), large.name())))
        })
        .collect()
}

fn induced_mismatches<S: Scalar>(
    small: &ConeData<S>,
    large: &ConeData<S>,
    rep: &mut ConjectureReport,
) -> Result<()> {
    let emb = facet_embedding(small, large)?;
    let ridge = small.ridge(AdjacencyTest::Rank)?;
    let oracle = large.facet_oracle(AdjacencyTest::Rank);
    let large_nbrs: Vec<BTreeSet<usize>> = emb
        .iter()
        .map(|&f| oracle.neighbors(f).map(|v| v.into_iter().collect()))
        .collect::<Result<_>>()?;
    let mut bad = 0;
    for i in 0..emb.len() {
        for j in i + 1..emb.len() {
            let a = ridge.graph.has_edge(i, j);
            let b = large_nbrs[i].contains(&emb[j]);
            if a != b {
                bad += 1;
                if bad <= 10 {
                    let (fi, fj) = (&small.h().inequalities[i], &small.h().inequalities[j]);
                    rep.counterexample(format!(
                        "{} / {}: adjacent in {} = {}, in {} = {}",
                        fi.label(),
                        fj.label(),
                        small.name(),
                        a,
                        large.name(),
                        b
                    ));
                }
            }
        }
    }
    if bad == 0 {
        rep.confirm(format!(
            "ridge({}) is the subgraph of ridge({}) induced on its {} facets",
            small.name(),
            large.name(),
            emb.len()
        ));
    } else if bad > 10 {
        rep.notes.push(format!(
            "{bad} mismatching pairs in total for {} in {}",
            small.name(),
            large.name()
        ));
    }
    Ok(())
}

/// Ridge graphs: HM inside NHM and NHM inside P as induced subgraphs.
pub fn check_conjecture_2<S: Scalar>(
    store: &ConeStore<S>,
    m: usize,
    n: usize,
) -> Result<ConjectureReport> {
    let hm = store.get(Family::Hm, n, m)?;
    let nhm = store.get(Family::Nhm, n, m)?;
    let p = store.get(Family::P, n, m)?;
    let mut rep = ConjectureReport::new(2, m, n);
    induced_mismatches(hm, nhm, &mut rep)?;
    induced_mismatches(nhm, p, &mut rep)?;
    skeleton_note(p, nhm, hm, &mut rep)?;
    Ok(rep)
}

/// Same-orbit neighbours of each P-orbit leader that is a ray of all three cones.
fn skeleton_note<S: Scalar>(
    p: &ConeData<S>,
    nhm: &ConeData<S>,
    hm: &ConeData<S>,
    rep: &mut ConjectureReport,
) -> Result<()> {
    for o in &p.ray_orbits().orbits {
        let v = &p.v().rays[o.members[0]];
        let mut counts = Vec::new();
        for c in [p, nhm, hm] {
            let Some(i) = c.find_ray(v) else {
                return Ok(());
            };
            let oid = c.ray_orbits().orbit_of[i];
            let nb = c.ray_oracle(AdjacencyTest::Rank).neighbors(i)?;
            counts.push(
                nb.iter()
                    .filter(|&&j| c.ray_orbits().orbit_of[j] == oid)
                    .count(),
            );
        }
        rep.notes.push(format!(
            "skeleton: ray {} has {}/{}/{} same-orbit neighbours in {}/{}/{}",
            v,
            counts[0],
            counts[1],
            counts[2],
            p.name(),
            nhm.name(),
            hm.name()
        ));
    }
    Ok(())
}

/// Non-neighbours of simplex facets and the nonnegativity restriction of
/// the ridge graph of NHM_n^m.
pub fn check_conjecture_3<S: Scalar>(
    store: &ConeStore<S>,
    m: usize,
    n: usize,
) -> Result<ConjectureReport> {
    let nhm = store.get(Family::Nhm, n, m)?;
    let mut rep = ConjectureReport::new(3, m, n);
    if m < 2 {
        rep.verdict = Verdict::PartiallyChecked;
        rep.notes
            .push("nonnegativity rows are not facets for m = 1".into());
        return Ok(rep);
    }
    let ridge = nhm.ridge(AdjacencyTest::Rank)?;
    let ineqs = &nhm.h().inequalities;
    let nonneg: HashMap<&[u8], usize> = ineqs
        .iter()
        .enumerate()
        .filter_map(|(i, q)| match &q.kind {
            InequalityKind::Nonnegativity { tuple } => Some((tuple.as_slice(), i)),
            _ => None,
        })
        .collect();
    let mut simplex_ok = 0;
    for (i, q) in ineqs.iter().enumerate() {
        let InequalityKind::Simplex {
            support,
            distinguished,
        } = &q.kind
        else {
            continue;
        };
        let mut expected: BTreeSet<usize> = ineqs
            .iter()
            .enumerate()
            .filter(|&(j, r)| {
                j != i
                    && matches!(&r.kind, InequalityKind::Simplex { support: s, .. } if s == support)
            })
            .map(|(j, _)| j)
            .collect();
        match nonneg.get(distinguished.as_slice()) {
            Some(&j) => {
                expected.insert(j);
            }
            None => rep.notes.push(format!("N for {} is missing", q.label())),
        }
        let actual: BTreeSet<usize> = (0..ineqs.len())
            .filter(|&j| j != i && !ridge.graph.has_edge(i, j))
            .collect();
        if actual == expected {
            simplex_ok += 1;
        } else {
            let show = |s: &BTreeSet<usize>| {
                s.iter()
                    .map(|&j| ineqs[j].label())
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            rep.counterexample(format!(
                "{}: non-neighbours [{}], expected [{}]",
                q.label(),
                show(&actual),
                show(&expected)
            ));
        }
    }
    if simplex_ok > 0 && rep.verdict == Verdict::Holds {
        rep.confirm(format!(
            "all {simplex_ok} simplex facets miss exactly m+2 = {} facets",
            m + 2
        ));
    }
    let ns: Vec<(&[u8], usize)> = nonneg.iter().map(|(t, &i)| (*t, i)).collect();
    let mut f2_bad = 0;
    for a in 0..ns.len() {
        for b in a + 1..ns.len() {
            let common = ns[a].0.iter().filter(|p| ns[b].0.contains(p)).count();
            // m = 2: complement of J(n,3), i.e. not sharing two points
            let expected = if m == 2 { common != 2 } else { true };
            if ridge.graph.has_edge(ns[a].1, ns[b].1) != expected {
                f2_bad += 1;
                rep.counterexample(format!(
                    "{} / {}: adjacency {} expected {}",
                    ineqs[ns[a].1].label(),
                    ineqs[ns[b].1].label(),
                    !expected,
                    expected
                ));
            }
        }
    }
    if f2_bad == 0 {
        rep.confirm(if m == 2 {
            format!("nonnegativity facets induce the complement of J({n},3)")
        } else {
            format!("nonnegativity facets induce K_{}", ns.len())
        });
    }
    rep.notes.push(match ridge.graph.diameter() {
        Some(d) => format!("ridge diameter {d}"),
        None => "ridge graph disconnected".into(),
    });
    Ok(rep)
}

/// Coordinates of the tuple `t ∪ {n}` take the value of `t`.
pub fn lift_ray<S: Scalar>(v: &HemiVector<S>) -> Result<HemiVector<S>> {
    let small = v.index();
    let n = v.n() + 1;
    let big = TupleIndex::new(n, v.k() + 1)?;
    let mut out = vec![S::zero(); big.dim()];
    for (i, c) in v.coords().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut pts = small.unrank(i).one_based();
        pts.push(n);
        out[big.rank(&KTuple::from_points(n, &pts)?)?] = c.clone();
    }
    HemiVector::new(n, v.k() + 1, out)
}

/// 0/1 vectors on n = m+3 points whose R-graph is an induced cycle C_i,
/// given by the complementary pairs: the i-cycle on points 1..i, and for
/// i = 3 also the star 12, 13, 14. Up to Sym(n) these are all of them.
pub fn cycle_vectors<S: Scalar>(m: usize, i: usize) -> Result<Vec<(String, HemiVector<S>)>> {
    let n = m + 3;
    let idx = TupleIndex::new(n, m + 1)?;
    let mut shapes: Vec<(String, Vec<(usize, usize)>)> = Vec::new();
    let cyc: Vec<(usize, usize)> = (1..=i).map(|a| (a, a % i + 1)).collect();
    shapes.push((format!("cycle on 1..{i}"), cyc));
    if i == 3 {
        shapes.push(("star at 1".into(), vec![(1, 2), (1, 3), (1, 4)]));
    }
    shapes
        .into_iter()
        .map(|(name, pairs)| {
            let mut c = vec![S::zero(); idx.dim()];
            for (a, b) in pairs {
                let t = idx.complement(&KTuple::from_points(n, &[a.min(b), a.max(b)])?);
                c[idx.rank(&t)?] = S::one();
            }
            Ok((name, HemiVector::new(n, m + 1, c)?))
        })
        .collect()
}

/// Lifted rays of NHM_{n-1}^{m-1} and the cycle-shaped 0/1 vectors are
/// extreme in NHM_n^m.
pub fn check_conjecture_4<S: Scalar>(
    store: &ConeStore<S>,
    m: usize,
    n: usize,
) -> Result<ConjectureReport> {
    let mut rep = ConjectureReport::new(4, m, n);
    let big = store.get(Family::Nhm, n, m)?;
    rep.notes
        .push("lifting: append the new point n to every support tuple".into());
    if m >= 2 {
        match store.get(Family::Nhm, n - 1, m - 1) {
            Ok(small) => {
                let mut ok = 0;
                for r in &small.v().rays {
                    let lifted = lift_ray(r)?;
                    let same_graph = r_graph(r).graph.is_isomorphic(&r_graph(&lifted).graph);
                    match is_extreme_ray(big.h(), &lifted) {
                        Ok(c) if c.holds && same_graph => ok += 1,
                        Ok(c) => rep.counterexample(format!(
                            "lift of {r} has tight rank {} < {}",
                            c.rank,
                            c.dim - 1
                        )),
                        Err(e) => {
                            rep.counterexample(format!("lift of {r} is not in {}: {e}", big.name()))
                        }
                    }
                }
                rep.confirm(format!(
                    "{ok} of {} lifted rays of {} are extreme in {}",
                    small.v().len(),
                    small.name(),
                    big.name()
                ));
            }
            Err(_) => {
                rep.verdict = Verdict::PartiallyChecked;
                rep.notes.push(format!(
                    "part (i) skipped: {} not computed",
                    Family::Nhm.cone_name(m - 1, n - 1)
                ));
            }
        }
    }
    if n == m + 3 {
        for i in 3..=m + 3 {
            let mut found = false;
            for (name, v) in cycle_vectors::<S>(m, i)? {
                match is_extreme_ray(big.h(), &v) {
                    Ok(c) if c.holds => {
                        found = true;
                        rep.confirm(format!("C_{i} ({name}): {v} is extreme"));
                    }
                    Ok(c) => rep.counterexample(format!(
                        "C_{i} ({name}): {v} lies in the cone but has tight rank {}",
                        c.rank
                    )),
                    Err(_) => rep
                        .notes
                        .push(format!("C_{i} ({name}): {v} is not in the cone")),
                }
            }
            if !found {
                rep.counterexample(format!("no 0/1 extreme ray with R-graph C_{i}"));
            }
        }
    } else {
        rep.notes.push("part (ii) applies to n = m + 3 only".into());
    }
    Ok(rep)
}
