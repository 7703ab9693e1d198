//! The three cone families on V_n: HM and NHM by inequalities, P by
//! generators. Custom cones are plain [`ConeH`] / [`ConeV`] values built from
//! user-supplied rows.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};
use crate::tuples::{binomial, enumerate_tuples, TupleIndex};
use crate::vector::{partition_hemimetric, HemiVector, Partition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// Generated by partition m-hemimetrics.
    P,
    /// Simplex and nonnegativity inequalities.
    Nhm,
    /// Simplex inequalities only.
    Hm,
    Custom,
}

impl Family {
    /// Name as printed in tables, e.g. `NHM_5^2`, with the classical names for m = 1.
    pub fn cone_name(self, m: usize, n: usize) -> String {
        match (self, m) {
            (Family::P, 1) => format!("CUT_{n}"),
            (Family::Nhm | Family::Hm, 1) => format!("MET_{n}"),
            (Family::P, _) => format!("P_{n}^{m}"),
            (Family::Nhm, _) => format!("NHM_{n}^{m}"),
            (Family::Hm, _) => format!("HM_{n}^{m}"),
            (Family::Custom, _) => format!("custom_{n}^{m}"),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::P => "p",
            Family::Nhm => "nhm",
            Family::Hm => "hm",
            Family::Custom => "custom",
        })
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "p" | "cut" => Ok(Family::P),
            "nhm" | "met" => Ok(Family::Nhm),
            "hm" => Ok(Family::Hm),
            "custom" => Ok(Family::Custom),
            other => Err(Error::InvalidDimension(format!("unknown family {other:?}"))),
        }
    }
}

/// What an inequality row stands for; used for labels only.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InequalityKind {
    /// Coefficient -1 on `distinguished` and +1 on the other tuples of `support`.
    Simplex {
        support: Vec<u8>,
        distinguished: Vec<u8>,
    },
    Nonnegativity {
        tuple: Vec<u8>,
    },
    Other,
}

impl InequalityKind {
    /// Reads the kind off a primitive normal.
    pub fn classify<S: Scalar>(normal: &HemiVector<S>) -> Self {
        let idx = normal.index();
        let support = normal.support();
        let c = normal.coords();
        if support.len() == 1 && c[support[0]].is_one() {
            return InequalityKind::Nonnegativity {
                tuple: idx.unrank(support[0]).points().to_vec(),
            };
        }
        if support.len() != normal.k() + 1 {
            return InequalityKind::Other;
        }
        let minus: Vec<usize> = support
            .iter()
            .copied()
            .filter(|&i| c[i] == -S::one())
            .collect();
        let plus = support.iter().filter(|&&i| c[i].is_one()).count();
        let union = support.iter().fold(0u32, |m, &i| m | idx.unrank(i).mask());
        if minus.len() == 1 && plus == normal.k() && union.count_ones() as usize == normal.k() + 1 {
            return InequalityKind::Simplex {
                support: crate::tuples::KTuple::from_mask(union).points().to_vec(),
                distinguished: idx.unrank(minus[0]).points().to_vec(),
            };
        }
        InequalityKind::Other
    }
}

/// The half-space `normal . x >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct LinearInequality<S = i64> {
    pub normal: HemiVector<S>,
    pub kind: InequalityKind,
}

impl<S: Scalar> LinearInequality<S> {
    /// Wraps a normal, dividing out its content.
    pub fn new(mut normal: HemiVector<S>) -> Result<Self> {
        if normal.is_zero() {
            return Err(Error::ZeroVector);
        }
        scalar::make_primitive(normal.coords_mut());
        Ok(LinearInequality {
            normal,
            kind: InequalityKind::Other,
        })
    }

    /// Like [`Self::new`], but recognises simplex and nonnegativity normals.
    pub fn classified(normal: HemiVector<S>) -> Result<Self> {
        let mut out = Self::new(normal)?;
        out.kind = InequalityKind::classify(&out.normal);
        Ok(out)
    }

    /// Display name: `T_{123,4}`, `N_{123}`, or the coefficient vector.
    pub fn label(&self) -> String {
        let pts = |v: &[u8]| -> String {
            let wide = v.iter().any(|&p| p >= 9);
            v.iter()
                .map(|p| (p + 1).to_string())
                .collect::<Vec<_>>()
                .join(if wide { "," } else { "" })
        };
        match &self.kind {
            InequalityKind::Simplex {
                support,
                distinguished,
            } => {
                let rest: Vec<u8> = support
                    .iter()
                    .copied()
                    .filter(|p| !distinguished.contains(p))
                    .collect();
                format!("T_{{{},{}}}", pts(distinguished), pts(&rest))
            }
            InequalityKind::Nonnegativity { tuple } => format!("N_{{{}}}", pts(tuple)),
            InequalityKind::Other => self.normal.to_string(),
        }
    }
}

/// Half-space representation `{x : a_i . x >= 0}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct ConeH<S = i64> {
    pub index: TupleIndex,
    pub inequalities: Vec<LinearInequality<S>>,
    pub family: Family,
}

/// Generator representation: the cone spanned by `rays`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct ConeV<S = i64> {
    pub index: TupleIndex,
    pub rays: Vec<HemiVector<S>>,
    pub family: Family,
}

impl<S: Scalar> ConeH<S> {
    pub fn dim(&self) -> usize {
        self.index.dim()
    }

    pub fn len(&self) -> usize {
        self.inequalities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inequalities.is_empty()
    }

    pub fn normals(&self) -> Vec<Vec<S>> {
        self.inequalities
            .iter()
            .map(|i| i.normal.coords().to_vec())
            .collect()
    }

    /// Custom cone from raw normals (made primitive).
    pub fn custom(index: TupleIndex, normals: Vec<Vec<S>>) -> Result<Self> {
        let inequalities = normals
            .into_iter()
            .map(|c| LinearInequality::new(HemiVector::new(index.n(), index.k(), c)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(ConeH {
            index,
            inequalities,
            family: Family::Custom,
        })
    }

    /// Indices of inequalities violated by `v`.
    pub fn violated_by(&self, v: &HemiVector<S>) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for (i, ineq) in self.inequalities.iter().enumerate() {
            if ineq.normal.dot(v)?.is_negative() {
                out.push(i);
            }
        }
        Ok(out)
    }
}

impl<S: Scalar> ConeV<S> {
    pub fn dim(&self) -> usize {
        self.index.dim()
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn ray_coords(&self) -> Vec<Vec<S>> {
        self.rays.iter().map(|r| r.coords().to_vec()).collect()
    }

    /// Custom cone from raw generators: made primitive, zero vectors rejected,
    /// positive multiples merged.
    pub fn custom(index: TupleIndex, rays: Vec<Vec<S>>) -> Result<Self> {
        let mut out: Vec<HemiVector<S>> = Vec::with_capacity(rays.len());
        for c in rays {
            let mut v = HemiVector::new(index.n(), index.k(), c)?;
            if v.is_zero() {
                return Err(Error::ZeroVector);
            }
            scalar::make_primitive(v.coords_mut());
            out.push(v);
        }
        out.sort();
        out.dedup();
        Ok(ConeV {
            index,
            rays: out,
            family: Family::Custom,
        })
    }
}

/// For every (m+2)-set W and every (m+1)-subset t of W: -x_t plus the
/// other m+1 coordinates inside W.
pub fn simplex_inequalities<S: Scalar>(n: usize, m: usize) -> Result<Vec<LinearInequality<S>>> {
    check_nm(n, m)?;
    let index = TupleIndex::new(n, m + 1)?;
    let mut out = Vec::with_capacity((n - m - 1) * binomial(n, m + 1));
    for w in enumerate_tuples(n, m + 2)? {
        let wm = w.mask();
        for &drop in w.points().iter().rev() {
            // distinguished tuple = W minus the point `drop`; iterate so that
            // the distinguished tuples come out in lexicographic order
            let t_mask = wm & !(1 << drop);
            let mut normal = HemiVector::<S>::zeros(n, m + 1);
            for &p in w.points() {
                let pos = index.rank_mask(wm & !(1 << p));
                normal.coords_mut()[pos] = if p == drop { -S::one() } else { S::one() };
            }
            let distinguished = crate::tuples::KTuple::from_mask(t_mask).points().to_vec();
            out.push(LinearInequality {
                normal,
                kind: InequalityKind::Simplex {
                    support: w.points().to_vec(),
                    distinguished,
                },
            });
        }
    }
    Ok(out)
}

pub fn nonnegativity_inequalities<S: Scalar>(
    n: usize,
    m: usize,
) -> Result<Vec<LinearInequality<S>>> {
    if m < 1 || n < m + 1 {
        return Err(Error::InvalidDimension(format!(
            "need n >= m+1 >= 2, got n={n}, m={m}"
        )));
    }
    let index = TupleIndex::new(n, m + 1)?;
    Ok(index
        .tuples()
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let mut normal = HemiVector::<S>::zeros(n, m + 1);
            normal.coords_mut()[i] = S::one();
            LinearInequality {
                normal,
                kind: InequalityKind::Nonnegativity {
                    tuple: t.points().to_vec(),
                },
            }
        })
        .collect())
}

pub fn build_cone_h<S: Scalar>(family: Family, n: usize, m: usize) -> Result<ConeH<S>> {
    check_nm(n, m)?;
    let mut inequalities = simplex_inequalities(n, m)?;
    match family {
        Family::Hm => {}
        Family::Nhm => inequalities.extend(nonnegativity_inequalities(n, m)?),
        other => {
            return Err(Error::InvalidDimension(format!(
                "{other} is not defined by inequalities"
            )))
        }
    }
    Ok(ConeH {
        index: TupleIndex::new(n, m + 1)?,
        inequalities,
        family,
    })
}

/// All partitions of {1..n} into exactly q blocks, from restricted growth
/// strings in lexicographic order.
pub fn enumerate_partitions(n: usize, q: usize) -> Result<Vec<Partition>> {
    if q < 1 || q > n || n > crate::tuples::MAX_POINTS {
        return Err(Error::InvalidDimension(format!(
            "need 1 <= q <= n, got n={n}, q={q}"
        )));
    }
    let mut out = Vec::new();
    let mut rgs = vec![0u8; n];
    fn rec(pos: usize, max: u8, q: usize, rgs: &mut Vec<u8>, out: &mut Vec<Partition>) {
        let n = rgs.len();
        let used = max as usize + 1;
        // not enough points left to open the remaining blocks
        if used + (n - pos) < q {
            return;
        }
        if pos == n {
            if used == q {
                out.push(Partition::from_block_labels(rgs));
            }
            return;
        }
        for l in 0..=(max + 1).min(q as u8 - 1) {
            rgs[pos] = l;
            rec(pos + 1, max.max(l), q, rgs, out);
        }
    }
    if n == 0 {
        return Ok(out);
    }
    rec(1, 0, q, &mut rgs, &mut out);
    Ok(out)
}

/// Stirling number of the second kind.
pub fn stirling2(n: usize, k: usize) -> u64 {
    let mut row = vec![0u64; k + 1];
    row[0] = 1;
    for i in 1..=n {
        for j in (1..=k.min(i)).rev() {
            row[j] = j as u64 * row[j] + row[j - 1];
        }
        row[0] = 0;
    }
    row[k]
}

/// Generators of P_n^m: all partition m-hemimetrics, deduplicated.
pub fn build_cone_p<S: Scalar>(n: usize, m: usize) -> Result<ConeV<S>> {
    check_nm(n, m)?;
    let index = TupleIndex::new(n, m + 1)?;
    let mut rays = enumerate_partitions(n, m + 1)?
        .iter()
        .map(|p| partition_hemimetric(&index, p))
        .collect::<Result<Vec<HemiVector<S>>>>()?;
    rays.sort();
    rays.dedup();
    Ok(ConeV {
        index,
        rays,
        family: Family::P,
    })
}

fn check_nm(n: usize, m: usize) -> Result<()> {
    if m < 1 || n < m + 2 || n > crate::tuples::MAX_POINTS {
        return Err(Error::InvalidDimension(format!(
            "need m >= 1 and n >= m+2, got n={n}, m={m}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph;
    use crate::vector::r_graph;

    #[test]
    fn simplex_counts_and_shape() {
        let t: Vec<LinearInequality<i64>> = simplex_inequalities(4, 2).unwrap();
        assert_eq!(t.len(), 4);
        // T_{123,4}: -x123 + x124 + x134 + x234
        assert_eq!(t[0].normal.coords(), &[-1, 1, 1, 1]);
        assert_eq!(t[0].label(), "T_{123,4}");
        assert_eq!(simplex_inequalities::<i64>(5, 2).unwrap().len(), 20);
        assert_eq!(simplex_inequalities::<i64>(6, 3).unwrap().len(), 30);
        assert!(simplex_inequalities::<i64>(3, 2).is_err());
        for (n, m) in [(5, 1), (6, 2), (7, 3), (8, 5)] {
            assert_eq!(
                simplex_inequalities::<i64>(n, m).unwrap().len(),
                (n - m - 1) * binomial(n, m + 1)
            );
        }
    }

    #[test]
    fn nonnegativity_counts() {
        let nn: Vec<LinearInequality<i64>> = nonnegativity_inequalities(4, 2).unwrap();
        assert_eq!(nn.len(), 4);
        assert_eq!(nn[0].label(), "N_{123}");
        assert_eq!(nonnegativity_inequalities::<i64>(5, 2).unwrap().len(), 10);
        assert_eq!(nonnegativity_inequalities::<i64>(7, 4).unwrap().len(), 21);
    }

    #[test]
    fn cone_h_sizes() {
        let h: ConeH<i64> = build_cone_h(Family::Nhm, 5, 2).unwrap();
        assert_eq!((h.len(), h.dim()), (30, 10));
        assert_eq!(build_cone_h::<i64>(Family::Hm, 5, 2).unwrap().len(), 20);
        assert_eq!(build_cone_h::<i64>(Family::Nhm, 8, 5).unwrap().len(), 84);
        assert!(build_cone_h::<i64>(Family::P, 5, 2).is_err());
    }

    #[test]
    fn partitions() {
        let p = enumerate_partitions(4, 3).unwrap();
        let names: Vec<String> = p.iter().map(|p| p.to_string()).collect();
        let mut expected = vec![
            "α(1,2,34)",
            "α(1,24,3)",
            "α(1,23,4)",
            "α(14,2,3)",
            "α(13,2,4)",
            "α(12,3,4)",
        ];
        let mut got = names.clone();
        got.sort();
        expected.sort();
        assert_eq!(got, expected);
        assert_eq!(enumerate_partitions(5, 3).unwrap().len(), 25);
        assert_eq!(enumerate_partitions(6, 4).unwrap().len(), 65);
        assert_eq!(enumerate_partitions(7, 5).unwrap().len(), 140);
        assert_eq!(enumerate_partitions(8, 6).unwrap().len(), 266);
        for n in 1..=8 {
            for q in 1..=n {
                let all = enumerate_partitions(n, q).unwrap();
                assert_eq!(all.len() as u64, stirling2(n, q));
                let mut d = all.clone();
                d.sort();
                d.dedup();
                assert_eq!(d.len(), all.len());
            }
        }
    }

    #[test]
    fn cone_p_sizes() {
        assert_eq!(build_cone_p::<i64>(4, 2).unwrap().len(), 6);
        assert_eq!(build_cone_p::<i64>(5, 2).unwrap().len(), 25);
        assert_eq!(build_cone_p::<i64>(6, 3).unwrap().len(), 65);
        assert_eq!(build_cone_p::<i64>(5, 1).unwrap().len(), 15);
    }

    #[test]
    fn normal_r_graphs() {
        for (n, m) in [(5, 2), (6, 3), (7, 4)] {
            for t in simplex_inequalities::<i64>(n, m).unwrap() {
                let r = r_graph(&t.normal);
                assert!(r.graph.is_isomorphic(&graph::complete(m + 2)));
                assert_eq!(r.labels.iter().filter(|&&l| l == -1).count(), 1);
            }
            for t in nonnegativity_inequalities::<i64>(n, m).unwrap() {
                assert_eq!(r_graph(&t.normal).vertices.len(), 1);
            }
        }
    }

    #[test]
    fn containment_p_in_nhm_in_hm() {
        for (n, m) in [(4, 2), (5, 2), (6, 3), (5, 1), (6, 2)] {
            let p = build_cone_p::<i64>(n, m).unwrap();
            let nhm = build_cone_h::<i64>(Family::Nhm, n, m).unwrap();
            let hm = build_cone_h::<i64>(Family::Hm, n, m).unwrap();
            for r in &p.rays {
                assert!(nhm.violated_by(r).unwrap().is_empty());
                assert!(hm.violated_by(r).unwrap().is_empty());
            }
        }
    }
}
