//! Text emitters: TSV orbit tables, the summary table, DOT graphs and
//! versioned JSON envelopes.

use std::fmt::Write as _;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::analysis::ConeData;
use crate::cone::{ConeV, LinearInequality};
use crate::dd::{is_facet, DdSnapshot, ENGINE_VERSION};
use crate::error::{Error, Result};
use crate::faces::{diameter_by_orbits, AdjacencyTest, FaceGraph, GraphKind};
use crate::scalar::Scalar;
use crate::symmetry::OrbitTable;
use crate::vector::{HemiVector, RGraph};

pub const SCHEMA: &str = "hemicone/1";

#[derive(Debug, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub schema: String,
    pub kind: String,
    pub engine: String,
    pub data: T,
}

pub fn to_json<T: Serialize>(kind: &str, data: &T) -> Result<String> {
    #[derive(Serialize)]
    struct Borrowed<'a, T> {
        schema: &'a str,
        kind: &'a str,
        engine: &'a str,
        data: &'a T,
    }
    serde_json::to_string_pretty(&Borrowed {
        schema: SCHEMA,
        kind,
        engine: ENGINE_VERSION,
        data,
    })
    .map_err(|e| Error::Io(e.to_string()))
}

/// Parses an envelope, refusing other schemas or kinds.
pub fn from_json<T: DeserializeOwned>(kind: &str, text: &str) -> Result<T> {
    let env: Envelope<T> = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    if env.schema != SCHEMA || env.kind != kind {
        return Err(Error::Parse {
            line: 1,
            message: format!(
                "expected {SCHEMA}/{kind}, found {}/{}",
                env.schema, env.kind
            ),
        });
    }
    Ok(env.data)
}

/// Which side of a cone a table describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Rays,
    Facets,
}

/// `|O_i| a_ij = |O_j| a_ji` for the adjacency block.
pub fn check_adjacency(t: &OrbitTable) -> Result<()> {
    for (i, ri) in t.rows.iter().enumerate() {
        for (j, rj) in t.rows.iter().enumerate() {
            if ri.size * ri.adjacency[j] != rj.size * rj.adjacency[i] {
                return Err(Error::InconsistentRelation { row: i, col: j });
            }
        }
    }
    Ok(())
}

/// `|O_i| I_{O_i,F_j} = |F_j| I_{F_j,O_i}` between a ray table and a facet table.
pub fn check_incidence(rays: &OrbitTable, facets: &OrbitTable) -> Result<()> {
    for (i, r) in rays.rows.iter().enumerate() {
        for (j, f) in facets.rows.iter().enumerate() {
            let (a, b) = (r.incidence.get(j), f.incidence.get(i));
            match (a, b) {
                (Some(a), Some(b)) if r.size * a == f.size * b => {}
                _ => return Err(Error::InconsistentRelation { row: i, col: j }),
            }
        }
    }
    Ok(())
}

/// Short name of a family member: coordinates for rays, `T_{..}`/`N_{..}`
/// for facets.
pub fn member_label<S: Scalar>(cone: &ConeData<S>, side: Side, i: usize) -> String {
    match side {
        Side::Rays => cone.v().rays[i].to_string(),
        Side::Facets => cone.h().inequalities[i].label(),
    }
}

/// Orbit table as TSV with columns orbit, representative, one adjacency
/// column per orbit, total adjacency, total incidence, one incidence column
/// per dual orbit, and orbit size.
pub fn orbit_table_tsv<S: Scalar>(
    cone: &ConeData<S>,
    side: Side,
    table: &OrbitTable,
) -> Result<String> {
    check_adjacency(table)?;
    let (decomp, own, dual) = match side {
        Side::Rays => (cone.ray_orbits(), "O", "F"),
        Side::Facets => (cone.facet_orbits(), "F", "O"),
    };
    if decomp.len() != table.len() {
        return Err(Error::UnknownOrbit(table.len()));
    }
    let k = table.len();
    let kd = table.rows.first().map_or(0, |r| r.incidence.len());
    let mut out = String::new();
    let mut head = vec!["orbit".to_string(), "representative".to_string()];
    head.extend((1..=k).map(|j| format!("{own}{j}")));
    head.push("adj".into());
    head.push("inc".into());
    head.extend((1..=kd).map(|j| format!("inc_{dual}{j}")));
    head.push("size".into());
    writeln!(out, "{}", head.join("\t")).unwrap();
    let leaders = decomp.leaders();
    for (i, r) in table.rows.iter().enumerate() {
        let mut cells = vec![
            format!("{own}{}", i + 1),
            member_label(cone, side, leaders[i]),
        ];
        cells.extend(r.adjacency.iter().map(|a| a.to_string()));
        cells.push(r.total_adjacency.to_string());
        cells.push(r.total_incidence.to_string());
        cells.extend(r.incidence.iter().map(|a| a.to_string()));
        cells.push(r.size.to_string());
        writeln!(out, "{}", cells.join("\t")).unwrap();
    }
    Ok(out)
}

/// Serializable form of a face graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub kind: GraphKind,
    pub labels: Vec<String>,
    pub orbits: Option<Vec<usize>>,
    pub edges: Vec<(usize, usize)>,
}

pub fn graph_doc<S: Scalar>(cone: &ConeData<S>, g: &FaceGraph) -> GraphDoc {
    let side = match g.kind {
        GraphKind::Skeleton => Side::Rays,
        GraphKind::Ridge => Side::Facets,
    };
    GraphDoc {
        kind: g.kind,
        labels: g
            .vertices
            .iter()
            .map(|&v| member_label(cone, side, v))
            .collect(),
        orbits: g.orbit_of.clone(),
        edges: g.graph.edges(),
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// DOT text with vertices in index order; orbit ids go into the label.
pub fn face_graph_dot(name: &str, doc: &GraphDoc) -> String {
    let mut out = format!("graph \"{}\" {{\n", dot_escape(name));
    for (i, l) in doc.labels.iter().enumerate() {
        let label = match &doc.orbits {
            Some(o) => format!("{}\\norbit {}", dot_escape(l), o[i] + 1),
            None => dot_escape(l),
        };
        writeln!(out, "  v{i} [label=\"{label}\"];").unwrap();
    }
    for (a, b) in &doc.edges {
        writeln!(out, "  v{a} -- v{b};").unwrap();
    }
    out.push_str("}\n");
    out
}

/// DOT text of an R-graph (or its complement); vertices are tuples with
/// their coordinate value.
pub fn r_graph_dot<S: Scalar>(name: &str, r: &RGraph<S>, complement: bool) -> String {
    let g = if complement {
        r.graph.complement()
    } else {
        r.graph.clone()
    };
    let mut out = format!("graph \"{}\" {{\n", dot_escape(name));
    for (i, (t, l)) in r.vertices.iter().zip(&r.labels).enumerate() {
        let pts: String = t
            .one_based()
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(if t.points().iter().any(|&p| p >= 9) {
                ","
            } else {
                ""
            });
        writeln!(out, "  v{i} [label=\"{pts}: {l}\"];").unwrap();
    }
    for (a, b) in g.edges() {
        writeln!(out, "  v{a} -- v{b};").unwrap();
    }
    out.push_str("}\n");
    out
}

/// A count, possibly only a lower bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Count {
    pub value: usize,
    pub orbits: Option<usize>,
    pub exact: bool,
}

impl std::fmt::Display for Count {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if !self.exact {
            f.write_str("≥")?;
        }
        write!(f, "{}", self.value)?;
        if let Some(o) = self.orbits {
            write!(f, "({o})")?;
        }
        Ok(())
    }
}

/// One row of the parameter summary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub name: String,
    pub dim: usize,
    pub rays: Count,
    pub facets: Count,
    pub skeleton_diameter: Option<usize>,
    pub ridge_diameter: Option<usize>,
}

impl SummaryRow {
    pub fn cells(&self) -> Vec<String> {
        let d = |x: Option<usize>| x.map_or("?".to_string(), |d| d.to_string());
        vec![
            self.name.clone(),
            self.dim.to_string(),
            self.rays.to_string(),
            self.facets.to_string(),
            format!("{}; {}", d(self.skeleton_diameter), d(self.ridge_diameter)),
        ]
    }
}

pub fn summary_row<S: Scalar>(cone: &ConeData<S>, test: AdjacencyTest) -> Result<SummaryRow> {
    let s = cone.skeleton(test)?;
    let r = cone.ridge(test)?;
    Ok(SummaryRow {
        name: cone.name(),
        dim: cone.dim(),
        rays: Count {
            value: cone.v().len(),
            orbits: Some(cone.ray_orbits().len()),
            exact: true,
        },
        facets: Count {
            value: cone.h().len(),
            orbits: Some(cone.facet_orbits().len()),
            exact: true,
        },
        skeleton_diameter: diameter_by_orbits(&s),
        ridge_diameter: diameter_by_orbits(&r),
    })
}

pub fn summary_tsv(rows: &[SummaryRow]) -> String {
    let mut out = String::from("cone\tdim\trays\tfacets\tdiameters\n");
    for r in rows {
        writeln!(out, "{}", r.cells().join("\t")).unwrap();
    }
    out
}

/// Normals in an interrupted facet enumeration that are already certified
/// facets of the cone generated by `v`.
pub fn certified_partial_facets<S: Scalar>(
    v: &ConeV<S>,
    snapshot: &DdSnapshot<S>,
) -> Result<Vec<LinearInequality<S>>> {
    let mut out = Vec::new();
    for c in &snapshot.rays {
        let ineq =
            LinearInequality::classified(HemiVector::new(v.index.n(), v.index.k(), c.clone())?)?;
        let mut valid = true;
        for r in &v.rays {
            if ineq.normal.dot(r)?.is_negative() {
                valid = false;
                break;
            }
        }
        if valid && is_facet(v, &ineq)?.holds {
            out.push(ineq);
        }
    }
    out.sort_by(|a, b| a.normal.cmp(&b.normal));
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::Family;
    use crate::dd::{facets_from_rays, DdError, DdOptions};

    #[test]
    fn nhm52_tables_and_row() {
        let c = ConeData::<i64>::compute(Family::Nhm, 5, 2, &DdOptions::default()).unwrap();
        let rt = c.ray_table(AdjacencyTest::Rank).unwrap();
        let ft = c.facet_table(AdjacencyTest::Rank).unwrap();
        check_incidence(&rt, &ft).unwrap();
        let tsv = orbit_table_tsv(&c, Side::Rays, &rt).unwrap();
        assert_eq!(tsv.lines().count(), 4);
        assert!(
            tsv.starts_with("orbit\trepresentative\tO1\tO2\tO3\tadj\tinc\tinc_F1\tinc_F2\tsize\n")
        );
        let row = summary_row(&c, AdjacencyTest::Rank).unwrap();
        assert_eq!(row.cells(), vec!["NHM_5^2", "10", "37(3)", "30(2)", "2; 2"]);
    }

    #[test]
    fn envelope_roundtrip_and_dot() {
        let c = ConeData::<i64>::compute(Family::P, 4, 2, &DdOptions::default()).unwrap();
        let g = c.ridge(AdjacencyTest::Rank).unwrap();
        let doc = graph_doc(&c, &g);
        let text = to_json("graph", &doc).unwrap();
        assert_eq!(from_json::<GraphDoc>("graph", &text).unwrap(), doc);
        assert!(from_json::<GraphDoc>("table", &text).is_err());
        let dot = face_graph_dot("ridge", &doc);
        assert_eq!(dot.matches(" -- ").count(), 12);
        assert!(dot.contains("orbit 2"));
    }

    #[test]
    fn lower_bound_from_interrupted_run() {
        let v = crate::cone::build_cone_p::<i64>(5, 2).unwrap();
        let opts = DdOptions {
            max_rays: Some(60),
            ..DdOptions::default()
        };
        let Err(DdError::ResourceLimit(snap)) = facets_from_rays(&v, &opts) else {
            panic!("ceiling not hit")
        };
        let found = certified_partial_facets(&v, &snap).unwrap();
        let all = facets_from_rays(&v, &DdOptions::default()).unwrap();
        assert!(found.len() <= all.len());
        assert!(found
            .iter()
            .all(|f| all.inequalities.iter().any(|g| g.normal == f.normal)));
        let row = Count {
            value: found.len(),
            orbits: None,
            exact: false,
        };
        assert!(row.to_string().starts_with('≥'));
    }
}
