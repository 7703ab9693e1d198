//! One cone with both representations, incidence, orbits and graphs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cone::{build_cone_h, build_cone_p, ConeH, ConeV, Family};
use crate::dd::{self, DdError, DdOptions, DdSnapshot, IncidenceMatrix};
use crate::error::{Error, Result};
use crate::faces::{AdjacencyOracle, AdjacencyTest, FaceGraph, GraphKind};
use crate::scalar::Scalar;
use crate::symmetry::{
    orbit_table, IncidenceRelation, OrbitDecomposition, OrbitTable, SymmetricGroup,
};
use crate::vector::HemiVector;

/// Serializable part of a computed cone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct ConeRecord<S = i64> {
    pub family: Family,
    pub n: usize,
    pub m: usize,
    pub h: ConeH<S>,
    pub v: ConeV<S>,
    pub ray_orbits: OrbitDecomposition<S>,
    pub facet_orbits: OrbitDecomposition<S>,
}

/// A fully computed cone: irredundant H, extreme rays, incidence and the
/// Sym(n) orbits of both families.
#[derive(Clone, Debug)]
pub struct ConeData<S: Scalar = i64> {
    pub record: ConeRecord<S>,
    pub incidence: IncidenceMatrix,
    pub group: SymmetricGroup,
}

impl<S: Scalar> ConeData<S> {
    /// Builds the cone and runs whichever conversion it needs.
    pub fn compute(
        family: Family,
        n: usize,
        m: usize,
        opts: &DdOptions,
    ) -> std::result::Result<Self, DdError<S>> {
        Self::compute_resume(family, n, m, opts, None)
    }

    /// Like [`Self::compute`], continuing an interrupted conversion.
    pub fn compute_resume(
        family: Family,
        n: usize,
        m: usize,
        opts: &DdOptions,
        resume: Option<DdSnapshot<S>>,
    ) -> std::result::Result<Self, DdError<S>> {
        let (h, v) = match family {
            Family::P => {
                let v = build_cone_p::<S>(n, m)?;
                let h = dd::facets_from_rays_resume(&v, opts, resume)?;
                (h, v)
            }
            Family::Hm | Family::Nhm => {
                let h = build_cone_h::<S>(family, n, m)?;
                let v = dd::rays_from_inequalities_resume(&h, opts, resume)?;
                let h = dd::irredundant(&h, &v)?;
                (h, v)
            }
            Family::Custom => {
                return Err(DdError::Input(Error::InvalidDimension(
                    "custom cones have no builder".into(),
                )));
            }
        };
        Ok(Self::from_parts(family, n, m, h, v)?)
    }

    /// Wraps given representations; orbits and incidence are computed here.
    pub fn from_parts(
        family: Family,
        n: usize,
        m: usize,
        h: ConeH<S>,
        v: ConeV<S>,
    ) -> Result<Self> {
        let group = SymmetricGroup::new(&h.index);
        let ray_orbits = group.decompose(&v.rays);
        let facet_orbits = group.decompose(&normals(&h));
        let incidence = dd::incidence(&h, &v)?;
        Ok(ConeData {
            record: ConeRecord {
                family,
                n,
                m,
                h,
                v,
                ray_orbits,
                facet_orbits,
            },
            incidence,
            group,
        })
    }

    /// Rebuilds from a stored record, recomputing incidence.
    pub fn from_record(record: ConeRecord<S>) -> Result<Self> {
        let group = SymmetricGroup::new(&record.h.index);
        let incidence = dd::incidence(&record.h, &record.v)?;
        Ok(ConeData {
            record,
            incidence,
            group,
        })
    }

    pub fn family(&self) -> Family {
        self.record.family
    }

    pub fn n(&self) -> usize {
        self.record.n
    }

    pub fn m(&self) -> usize {
        self.record.m
    }

    pub fn h(&self) -> &ConeH<S> {
        &self.record.h
    }

    pub fn v(&self) -> &ConeV<S> {
        &self.record.v
    }

    pub fn dim(&self) -> usize {
        self.record.h.dim()
    }

    pub fn ray_orbits(&self) -> &OrbitDecomposition<S> {
        &self.record.ray_orbits
    }

    pub fn facet_orbits(&self) -> &OrbitDecomposition<S> {
        &self.record.facet_orbits
    }

    /// Name as used in tables, e.g. `NHM_5^2` or `CUT_6`.
    pub fn name(&self) -> String {
        self.family().cone_name(self.m(), self.n())
    }

    pub fn normals(&self) -> Vec<HemiVector<S>> {
        normals(self.h())
    }

    pub fn ray_oracle(&self, test: AdjacencyTest) -> AdjacencyOracle<'_, S> {
        AdjacencyOracle::rays(self.h(), self.v(), &self.incidence, test)
            .expect("consistent by construction")
    }

    pub fn facet_oracle(&self, test: AdjacencyTest) -> AdjacencyOracle<'_, S> {
        AdjacencyOracle::facets(self.h(), self.v(), &self.incidence, test)
            .expect("consistent by construction")
    }

    /// Skeleton with orbit annotation. Above [`PAIRWISE_LIMIT`] vertices the
    /// graph is assembled from orbit leaders and the group action.
    pub fn skeleton(&self, test: AdjacencyTest) -> Result<FaceGraph> {
        let oracle = self.ray_oracle(test);
        let graph = if self.v().len() > PAIRWISE_LIMIT {
            oracle.graph_by_symmetry(&self.v().rays, &self.group, self.ray_orbits())?
        } else {
            oracle.graph()?
        };
        Ok(FaceGraph {
            kind: GraphKind::Skeleton,
            graph,
            vertices: (0..self.v().len()).collect(),
            orbit_of: None,
        }
        .with_orbits(self.ray_orbits()))
    }

    pub fn ridge(&self, test: AdjacencyTest) -> Result<FaceGraph> {
        let oracle = self.facet_oracle(test);
        let graph = if self.h().len() > PAIRWISE_LIMIT {
            oracle.graph_by_symmetry(&self.normals(), &self.group, self.facet_orbits())?
        } else {
            oracle.graph()?
        };
        Ok(FaceGraph {
            kind: GraphKind::Ridge,
            graph,
            vertices: (0..self.h().len()).collect(),
            orbit_of: None,
        }
        .with_orbits(self.facet_orbits()))
    }

    /// Orbit table of the rays (adjacency in the skeleton, incidence to
    /// facet orbits), from orbit leaders only.
    pub fn ray_table(&self, test: AdjacencyTest) -> Result<OrbitTable> {
        let oracle = self.ray_oracle(test);
        let nb = |i: usize| oracle.neighbors(i).expect("leader index is valid");
        let rel = IncidenceRelation {
            forward: self.incidence.ray_rows(),
            backward: self.incidence.ineq_cols(),
            dual: self.facet_orbits(),
        };
        orbit_table(self.ray_orbits(), &nb, Some(&rel))
    }

    /// Orbit table of the facets (adjacency in the ridge graph, incidence to
    /// ray orbits).
    pub fn facet_table(&self, test: AdjacencyTest) -> Result<OrbitTable> {
        let oracle = self.facet_oracle(test);
        let nb = |i: usize| oracle.neighbors(i).expect("leader index is valid");
        let rel = IncidenceRelation {
            forward: self.incidence.ineq_cols(),
            backward: self.incidence.ray_rows(),
            dual: self.ray_orbits(),
        };
        orbit_table(self.facet_orbits(), &nb, Some(&rel))
    }

    /// Index of a ray equal to `v` up to positive scaling.
    pub fn find_ray(&self, v: &HemiVector<S>) -> Option<usize> {
        let mut c = v.coords().to_vec();
        crate::scalar::make_primitive(&mut c);
        self.v()
            .rays
            .iter()
            .position(|r| r.coords() == c.as_slice())
    }

    /// Index of a facet with normal equal to `a` up to positive scaling.
    pub fn find_facet(&self, a: &HemiVector<S>) -> Option<usize> {
        let mut c = a.coords().to_vec();
        crate::scalar::make_primitive(&mut c);
        self.h()
            .inequalities
            .iter()
            .position(|i| i.normal.coords() == c.as_slice())
    }
}

/// Full pairwise adjacency is used up to this many vertices.
pub const PAIRWISE_LIMIT: usize = 1500;

fn normals<S: Scalar>(h: &ConeH<S>) -> Vec<HemiVector<S>> {
    h.inequalities.iter().map(|i| i.normal.clone()).collect()
}

/// Cones computed so far, keyed by (family, n, m).
#[derive(Default)]
pub struct ConeStore<S: Scalar = i64> {
    cones: BTreeMap<(Family, usize, usize), ConeData<S>>,
    pub options: DdOptions,
}

impl<S: Scalar> ConeStore<S> {
    pub fn new(options: DdOptions) -> Self {
        ConeStore {
            cones: BTreeMap::new(),
            options,
        }
    }

    pub fn get(&self, family: Family, n: usize, m: usize) -> Result<&ConeData<S>> {
        self.cones
            .get(&(family, n, m))
            .ok_or_else(|| Error::NotComputed(family.cone_name(m, n)))
    }

    pub fn insert(&mut self, data: ConeData<S>) {
        self.cones.insert((data.family(), data.n(), data.m()), data);
    }

    pub fn ensure(
        &mut self,
        family: Family,
        n: usize,
        m: usize,
    ) -> std::result::Result<&ConeData<S>, DdError<S>> {
        if !self.cones.contains_key(&(family, n, m)) {
            let data = ConeData::compute(family, n, m, &self.options)?;
            self.cones.insert((family, n, m), data);
        }
        Ok(&self.cones[&(family, n, m)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p52_tables_balance() {
        let c = ConeData::<i64>::compute(Family::P, 5, 2, &DdOptions::default()).unwrap();
        assert_eq!(c.v().len(), 25);
        assert_eq!(c.h().len(), 120);
        assert_eq!(c.ray_orbits().sizes().iter().sum::<usize>(), 25);
        let t = c.ray_table(AdjacencyTest::Rank).unwrap();
        let s = c.skeleton(AdjacencyTest::Rank).unwrap();
        let total: usize = t.rows.iter().map(|r| r.size * r.total_adjacency).sum();
        assert_eq!(total, 2 * s.edge_count());
        assert_eq!(s.edge_count(), 270);
    }

    #[test]
    fn met_drops_redundant_nonnegativity() {
        let c = ConeData::<i64>::compute(Family::Nhm, 5, 1, &DdOptions::default()).unwrap();
        assert_eq!(c.h().len(), 30);
        assert_eq!(c.v().len(), 25);
        assert_eq!(c.name(), "MET_5");
        let mut store = ConeStore::<i64>::default();
        assert!(matches!(
            store.get(Family::P, 5, 1),
            Err(Error::NotComputed(_))
        ));
        store.ensure(Family::P, 5, 1).unwrap();
        assert_eq!(store.get(Family::P, 5, 1).unwrap().h().len(), 40);
    }
}
