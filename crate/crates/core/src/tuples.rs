//! Coordinates of R^{E_k}: the k-element subsets of {1, ..., n} in
//! lexicographic order, with ranking and Johnson-graph adjacency.
//!
//! Points are 1-based whenever they are printed or parsed and 0-based in
//! memory.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest ground set supported. Tuples are packed into `u8` points and the
/// symmetry code enumerates all n! permutations.
pub const MAX_POINTS: usize = 12;

/// A strictly increasing list of 0-based points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KTuple(Vec<u8>);

impl KTuple {
    /// Builds a tuple from 1-based points, which must be strictly increasing
    /// and lie in `1..=n`.
    pub fn from_points(n: usize, points: &[usize]) -> Result<Self> {
        let mut prev = 0;
        for &p in points {
            if p == 0 || p > n {
                return Err(Error::InvalidTuple(format!("point {p} outside 1..={n}")));
            }
            if p <= prev {
                return Err(Error::InvalidTuple(format!(
                    "{points:?} is not strictly increasing"
                )));
            }
            prev = p;
        }
        Ok(KTuple(points.iter().map(|&p| (p - 1) as u8).collect()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// 0-based points.
    pub fn points(&self) -> &[u8] {
        &self.0
    }

    /// 1-based points.
    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|&p| p as usize + 1).collect()
    }

    pub fn contains(&self, point0: u8) -> bool {
        self.0.binary_search(&point0).is_ok()
    }

    pub fn intersection_size(&self, other: &KTuple) -> usize {
        let (mut i, mut j, mut c) = (0, 0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    c += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        c
    }

    /// Bitmask of the points.
    pub fn mask(&self) -> u32 {
        self.0.iter().fold(0u32, |m, &p| m | (1 << p))
    }

    pub(crate) fn from_mask(mask: u32) -> Self {
        KTuple((0..32u8).filter(|&p| mask & (1 << p) != 0).collect())
    }
}

impl fmt::Display for KTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 && self.0.iter().any(|&q| q >= 9) {
                write!(f, ",")?;
            }
            write!(f, "{}", p + 1)?;
        }
        Ok(())
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Lexicographic listing of all k-subsets of an n-set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "IndexShape", into = "IndexShape")]
pub struct TupleIndex {
    n: usize,
    k: usize,
    tuples: Vec<KTuple>,
}

/// Serialized form; the listing is rebuilt on load.
#[derive(Serialize, Deserialize)]
struct IndexShape {
    n: usize,
    k: usize,
}

impl TryFrom<IndexShape> for TupleIndex {
    type Error = Error;
    fn try_from(s: IndexShape) -> Result<Self> {
        TupleIndex::new(s.n, s.k)
    }
}

impl From<TupleIndex> for IndexShape {
    fn from(t: TupleIndex) -> Self {
        IndexShape { n: t.n, k: t.k }
    }
}

impl TupleIndex {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        let tuples = enumerate_tuples(n, k)?;
        Ok(TupleIndex { n, k, tuples })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of coordinates, C(n, k).
    pub fn dim(&self) -> usize {
        self.tuples.len()
    }

    pub fn tuples(&self) -> &[KTuple] {
        &self.tuples
    }

    pub fn unrank(&self, i: usize) -> &KTuple {
        &self.tuples[i]
    }

    /// Position of `t` in lexicographic order, by the combinatorial number
    /// system.
    pub fn rank(&self, t: &KTuple) -> Result<usize> {
        if t.len() != self.k {
            return Err(Error::MismatchedArity {
                left: t.len(),
                right: self.k,
            });
        }
        let pts = t.points();
        if pts.windows(2).any(|w| w[0] >= w[1]) || pts.iter().any(|&p| p as usize >= self.n) {
            return Err(Error::InvalidTuple(format!(
                "{t} is not a {}-subset of 1..={}",
                self.k, self.n
            )));
        }
        Ok(rank_unchecked(self.n, self.k, pts))
    }

    /// Position of the tuple with the given 0-based bitmask.
    pub(crate) fn rank_mask(&self, mask: u32) -> usize {
        let mut pts = [0u8; 32];
        let mut len = 0;
        let mut m = mask;
        while m != 0 {
            pts[len] = m.trailing_zeros() as u8;
            len += 1;
            m &= m - 1;
        }
        rank_unchecked(self.n, self.k, &pts[..len])
    }

    pub fn complement(&self, t: &KTuple) -> KTuple {
        complement_tuple(self.n, t)
    }

    /// Display name: "123" normally, "~12" for (n-2)-subsets.
    pub fn render(&self, t: &KTuple) -> String {
        if self.k + 2 == self.n && self.k > 2 {
            format!("~{}", complement_tuple(self.n, t))
        } else {
            t.to_string()
        }
    }
}

fn rank_unchecked(n: usize, k: usize, pts: &[u8]) -> usize {
    let mut r = 0;
    let mut prev: usize = 0;
    for (i, &p) in pts.iter().enumerate() {
        let p = p as usize;
        for j in prev..p {
            r += binomial(n - 1 - j, k - 1 - i);
        }
        prev = p + 1;
    }
    r
}

/// All k-subsets of {1..n}, lexicographically sorted.
pub fn enumerate_tuples(n: usize, k: usize) -> Result<Vec<KTuple>> {
    if k < 1 || k > n || n > MAX_POINTS {
        return Err(Error::InvalidDimension(format!(
            "need 1 <= k <= n <= {MAX_POINTS}, got n={n}, k={k}"
        )));
    }
    let mut out = Vec::with_capacity(binomial(n, k));
    let mut cur: Vec<u8> = (0..k as u8).collect();
    loop {
        out.push(KTuple(cur.clone()));
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if (cur[i] as usize) < n - k + i {
                break;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

pub fn johnson_adjacent(t1: &KTuple, t2: &KTuple) -> Result<bool> {
    if t1.len() != t2.len() {
        return Err(Error::MismatchedArity {
            left: t1.len(),
            right: t2.len(),
        });
    }
    Ok(t1.intersection_size(t2) + 1 == t1.len())
}

pub fn complement_tuple(n: usize, t: &KTuple) -> KTuple {
    KTuple((0..n as u8).filter(|p| !t.contains(*p)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tup(n: usize, pts: &[usize]) -> KTuple {
        KTuple::from_points(n, pts).unwrap()
    }

    #[test]
    fn small_listings() {
        let l = enumerate_tuples(3, 2).unwrap();
        assert_eq!(l, vec![tup(3, &[1, 2]), tup(3, &[1, 3]), tup(3, &[2, 3])]);
        let l = enumerate_tuples(5, 3).unwrap();
        assert_eq!(l.len(), 10);
        let names: Vec<String> = l.iter().map(|t| t.to_string()).collect();
        assert_eq!(&names[..4], &["123", "124", "125", "134"]);
        assert_eq!(names[9], "345");
    }

    #[test]
    fn complements_of_pairs() {
        let idx = TupleIndex::new(6, 4).unwrap();
        assert_eq!(idx.dim(), 15);
        // the listing of 4-subsets read backwards is the complements of pairs in lex order
        let pairs = enumerate_tuples(6, 2).unwrap();
        for (i, p) in pairs.iter().enumerate() {
            let c = complement_tuple(6, p);
            assert_eq!(idx.rank(&c).unwrap(), 14 - i);
            assert_eq!(idx.render(&c), format!("~{p}"));
        }
    }

    #[test]
    fn ranks() {
        let idx = TupleIndex::new(5, 3).unwrap();
        assert_eq!(idx.rank(&tup(5, &[1, 2, 3])).unwrap(), 0);
        assert_eq!(idx.rank(&tup(5, &[3, 4, 5])).unwrap(), 9);
        let idx = TupleIndex::new(6, 4).unwrap();
        let t = tup(6, &[3, 4, 5, 6]);
        let scan = idx.tuples().iter().position(|u| *u == t).unwrap();
        assert_eq!(idx.rank(&t).unwrap(), scan);
        assert_eq!(scan, 14);
    }

    #[test]
    fn invalid_inputs() {
        assert!(enumerate_tuples(3, 4).is_err());
        assert!(enumerate_tuples(3, 0).is_err());
        assert!(KTuple::from_points(5, &[2, 1, 3]).is_err());
        assert!(KTuple::from_points(5, &[1, 2, 6]).is_err());
        let idx = TupleIndex::new(5, 3).unwrap();
        assert!(matches!(
            idx.rank(&tup(5, &[1, 2])),
            Err(Error::MismatchedArity { .. })
        ));
    }

    #[test]
    fn johnson_degree() {
        assert!(johnson_adjacent(&tup(5, &[1, 2, 3]), &tup(5, &[1, 2, 4])).unwrap());
        assert!(!johnson_adjacent(&tup(5, &[1, 2, 3]), &tup(5, &[1, 4, 5])).unwrap());
        assert!(johnson_adjacent(&tup(5, &[1, 2, 3]), &tup(5, &[1, 2])).is_err());
        let l = enumerate_tuples(6, 4).unwrap();
        for a in &l {
            let deg = l.iter().filter(|b| johnson_adjacent(a, b).unwrap()).count();
            assert_eq!(deg, 8);
        }
    }

    #[test]
    fn complement_involution() {
        assert_eq!(complement_tuple(6, &tup(6, &[1, 2])), tup(6, &[3, 4, 5, 6]));
        assert_eq!(
            complement_tuple(7, &tup(7, &[6, 7])),
            tup(7, &[1, 2, 3, 4, 5])
        );
        for t in enumerate_tuples(6, 4).unwrap() {
            assert_eq!(complement_tuple(6, &complement_tuple(6, &t)), t);
        }
    }

    #[test]
    fn complement_is_johnson_isomorphism() {
        let l = enumerate_tuples(7, 3).unwrap();
        for a in &l {
            for b in &l {
                let (ca, cb) = (complement_tuple(7, a), complement_tuple(7, b));
                assert_eq!(
                    johnson_adjacent(a, b).unwrap(),
                    johnson_adjacent(&ca, &cb).unwrap()
                );
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn rank_unrank_roundtrip(n in 2usize..=10, k in 1usize..=10) {
            proptest::prop_assume!(k <= n);
            let idx = TupleIndex::new(n, k).unwrap();
            proptest::prop_assert_eq!(idx.dim(), binomial(n, k));
            for i in 0..idx.dim() {
                proptest::prop_assert_eq!(idx.rank(idx.unrank(i)).unwrap(), i);
                proptest::prop_assert_eq!(idx.rank_mask(idx.unrank(i).mask()), i);
            }
        }
    }
}
