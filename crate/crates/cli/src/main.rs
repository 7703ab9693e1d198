mod cache;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hemicone::analysis::{ConeData, ConeStore};
use hemicone::cone::{build_cone_h, build_cone_p, Family, LinearInequality};
use hemicone::conjecture::{
    check_conjecture_1, check_conjecture_2, check_conjecture_3, check_conjecture_4,
    ConjectureReport,
};
use hemicone::dd::{is_extreme_ray, is_facet, DdError, DdOptions, DdProgress, DdSnapshot};
use hemicone::faces::{
    diameter_by_orbits, identify_graph, local_graph, restrict_to_orbit, AdjacencyTest, FaceGraph,
    CATALOG_LIMIT,
};
use hemicone::io::{write_ext, write_ine};
use hemicone::report::{
    certified_partial_facets, check_incidence, face_graph_dot, graph_doc, member_label,
    orbit_table_tsv, r_graph_dot, summary_row, summary_tsv, to_json, Count, Side, SummaryRow,
};
use hemicone::scalar::Scalar;
use hemicone::symmetry::SymmetricGroup;
use hemicone::vector::{partition_hemimetric, r_graph, HemiVector, Partition};
use num_bigint::BigInt;
use serde::Serialize;

use crate::cache::{read_snapshot, Cache};

/// Exit status when a resource ceiling stops a computation.
const EXIT_LIMIT: u8 = 3;
/// Exit status for an unusable configuration.
const EXIT_CONFIG: u8 = 2;

#[derive(Parser)]
#[command(
    name = "hemicone",
    version,
    about = "Exact facets, extreme rays, orbits and graphs of m-hemimetric cones"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Directory for cached cones and interrupted runs.
    #[arg(long, global = true, env = "HEMICONE_CACHE")]
    cache_dir: Option<PathBuf>,
    /// Stop a double description run after this many seconds.
    #[arg(long, global = true)]
    max_seconds: Option<f64>,
    /// Stop a double description run when this many intermediate rays exist.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    max_rays: Option<u64>,
    /// Continue from a snapshot written by an interrupted run.
    #[arg(long, global = true)]
    resume: Option<PathBuf>,
    /// Integer type used for exact arithmetic.
    #[arg(long, global = true, value_enum, default_value_t = ScalarKind::I64)]
    scalar: ScalarKind,
    /// Adjacency test for skeleton and ridge graphs.
    #[arg(long, global = true, value_enum, default_value_t = TestKind::Rank)]
    test: TestKind,
    /// Write the result here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Report progress of long runs on standard error.
    #[arg(long, short, global = true)]
    verbose: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScalarKind {
    I64,
    Bigint,
}

#[derive(Clone, Copy, ValueEnum)]
enum TestKind {
    Rank,
    Combinatorial,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Debug)]
enum FamilyArg {
    P,
    Nhm,
    Hm,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::P => Family::P,
            FamilyArg::Nhm => Family::Nhm,
            FamilyArg::Hm => Family::Hm,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Debug)]
enum Format {
    Tsv,
    Json,
    Dot,
    Ine,
    Ext,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Rays,
    Facets,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Rays => Side::Rays,
            SideArg::Facets => Side::Facets,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphArg {
    Skeleton,
    Ridge,
}

#[derive(Args, Clone, Copy)]
struct ConeArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
}

#[derive(Args)]
struct VectorArgs {
    /// Comma-separated coordinates in lexicographic tuple order.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "partition")]
    vector: Option<String>,
    /// Read --vector in complement order (coordinate i belongs to the
    /// complement of the i-th (n-m-1)-subset).
    #[arg(long)]
    complement_order: bool,
    /// Partition such as 1,23,45; the vector is its partition hemimetric.
    #[arg(long)]
    partition: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute (or load) a cone and print its parameters.
    Build(ConeArgs),
    /// Extreme rays.
    Rays {
        #[command(flatten)]
        cone: ConeArgs,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// Facet normals.
    Facets {
        #[command(flatten)]
        cone: ConeArgs,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// Orbits of rays or facets under Sym(n).
    Orbits {
        #[command(flatten)]
        cone: ConeArgs,
        #[arg(long, value_enum, default_value_t = SideArg::Rays)]
        side: SideArg,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// Skeleton or ridge graph, optionally restricted to an orbit or a local graph.
    Graph {
        #[command(flatten)]
        cone: ConeArgs,
        #[arg(long, value_enum, default_value_t = GraphArg::Skeleton)]
        kind: GraphArg,
        /// Keep only this orbit (1-based).
        #[arg(long, conflicts_with = "local")]
        orbit: Option<usize>,
        /// Neighbourhood of the leader of this orbit (1-based).
        #[arg(long)]
        local: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// Diameters of the skeleton and ridge graphs.
    Diameter(ConeArgs),
    /// Orbit adjacency and incidence table.
    Table {
        #[command(flatten)]
        cone: ConeArgs,
        #[arg(long, value_enum, default_value_t = SideArg::Rays)]
        side: SideArg,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// R-graph of a vector or partition hemimetric.
    Rgraph {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        vector: VectorArgs,
        /// Emit the complement of the R-graph.
        #[arg(long)]
        complement: bool,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
    },
    /// Certify a vector against a cone, or re-check a whole computed cone.
    Verify {
        #[command(flatten)]
        cone: ConeArgs,
        #[command(flatten)]
        vector: VectorArgs,
        /// Treat the vector as an inequality normal and test for a facet.
        #[arg(long)]
        facet: bool,
    },
    /// Audit one of the four conjectures at (m, n).
    Conjecture {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        id: u8,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// Parameter table over several cones, e.g. --rows nhm:5:2,p:6:3 (family:n:m).
    Summary {
        #[arg(long, value_delimiter = ',')]
        rows: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
}

/// A ceiling stopped the run; the snapshot has been written.
#[derive(Debug)]
struct LimitReached {
    cone: String,
    snapshot: Option<PathBuf>,
    lower_bound: Count,
    side: &'static str,
}

impl std::fmt::Display for LimitReached {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "resource limit reached for {}: {} {}",
            self.cone, self.lower_bound, self.side
        )?;
        if let Some(p) = &self.snapshot {
            write!(f, "; snapshot written to {}", p.display())?;
        }
        Ok(())
    }
}

impl std::error::Error for LimitReached {}

#[derive(Debug)]
struct ConfigError(String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn config_err(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

struct Ctx {
    cache: Option<Cache>,
    opts: DdOptions,
    resume: Option<PathBuf>,
    test: AdjacencyTest,
    output: Option<PathBuf>,
    verbose: bool,
}

impl Ctx {
    fn emit(&self, text: &str) -> Result<()> {
        match &self.output {
            Some(p) => cache::write_atomic(p, text.as_bytes()),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    fn note(&self, msg: impl AsRef<str>) {
        if self.verbose {
            eprintln!("{}", msg.as_ref());
        }
    }

    fn cone<S: Scalar>(&self, family: Family, n: usize, m: usize) -> Result<ConeData<S>> {
        check_shape(n, m)?;
        if let Some(c) = &self.cache {
            if let Some(rec) = c.load::<S>(family, m, n)? {
                self.note(format!("{} loaded from cache", family.cone_name(m, n)));
                return Ok(ConeData::from_record(rec)?);
            }
        }
        let resume = match &self.resume {
            Some(p) => Some(read_snapshot::<S>(p)?),
            None => None,
        };
        let started = std::time::Instant::now();
        match ConeData::<S>::compute_resume(family, n, m, &self.opts, resume) {
            Ok(data) => {
                self.note(format!(
                    "{} computed in {:.2?}",
                    data.name(),
                    started.elapsed()
                ));
                if let Some(c) = &self.cache {
                    c.store(&data.record)?;
                }
                Ok(data)
            }
            Err(DdError::ResourceLimit(snap)) => Err(self.limit(family, n, m, &snap)?.into()),
            Err(e) => Err(e.into()),
        }
    }

    fn limit<S: Scalar>(
        &self,
        family: Family,
        n: usize,
        m: usize,
        snap: &DdSnapshot<S>,
    ) -> Result<LimitReached> {
        let snapshot = match &self.cache {
            Some(c) => Some(c.store_snapshot(family, m, n, snap)?),
            None => match &self.output {
                Some(p) => {
                    let path = p.with_extension("snapshot.json");
                    cache::write_atomic(&path, to_json("dd-snapshot", snap)?.as_bytes())?;
                    Some(path)
                }
                None => None,
            },
        };
        let (lower_bound, side) = partial_bound(family, n, m, snap)?;
        Ok(LimitReached {
            cone: family.cone_name(m, n),
            snapshot,
            lower_bound,
            side,
        })
    }
}

/// Certified members found before the ceiling hit.
fn partial_bound<S: Scalar>(
    family: Family,
    n: usize,
    m: usize,
    snap: &DdSnapshot<S>,
) -> Result<(Count, &'static str)> {
    if family == Family::P {
        let v = build_cone_p::<S>(n, m)?;
        let found = certified_partial_facets(&v, snap)?;
        let group = SymmetricGroup::new(&v.index);
        let orbits: BTreeSet<HemiVector<S>> =
            found.iter().map(|f| group.canonical(&f.normal)).collect();
        Ok((
            Count {
                value: found.len(),
                orbits: Some(orbits.len()),
                exact: false,
            },
            "facets",
        ))
    } else {
        let h = build_cone_h::<S>(family, n, m)?;
        let mut found = Vec::new();
        for r in &snap.rays {
            let v = HemiVector::new(n, m + 1, r.clone())?;
            if matches!(is_extreme_ray(&h, &v), Ok(c) if c.holds) {
                found.push(v);
            }
        }
        Ok((
            Count {
                value: found.len(),
                orbits: None,
                exact: false,
            },
            "rays",
        ))
    }
}

fn check_shape(n: usize, m: usize) -> Result<()> {
    if m < 1 || n < m + 2 {
        return Err(config_err(format!(
            "need m >= 1 and n >= m + 2, got m={m} n={n}"
        )));
    }
    if n > 12 {
        return Err(config_err(format!(
            "n={n} is beyond what this tool can enumerate"
        )));
    }
    Ok(())
}

fn require(format: Format, allowed: &[Format]) -> Result<()> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(config_err(format!(
            "format {format:?} is not available here; use one of {allowed:?}"
        )))
    }
}

fn parse_vector<S: Scalar>(n: usize, m: usize, a: &VectorArgs) -> Result<HemiVector<S>> {
    match (&a.vector, &a.partition) {
        (Some(s), None) => {
            let coords: Vec<i64> = s
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse().with_context(|| format!("bad coordinate {t:?}")))
                .collect::<Result<_>>()?;
            Ok(if a.complement_order {
                HemiVector::from_complement_order(n, m + 1, &coords)?
            } else {
                HemiVector::from_i64s(n, m + 1, &coords)?
            })
        }
        (None, Some(p)) => {
            let p = Partition::parse(n, p)?;
            if p.num_blocks() != m + 1 {
                return Err(config_err(format!(
                    "an m-hemimetric needs {} blocks, {p} has {}",
                    m + 1,
                    p.num_blocks()
                )));
            }
            let idx = hemicone::tuples::TupleIndex::new(n, m + 1)?;
            Ok(partition_hemimetric(&idx, &p)?)
        }
        _ => Err(config_err("give --vector or --partition")),
    }
}

fn coords_header<S: Scalar>(c: &ConeData<S>) -> Vec<String> {
    c.h()
        .index
        .tuples()
        .iter()
        .map(|t| c.h().index.render(t))
        .collect()
}

fn rays_cmd<S: Scalar>(ctx: &Ctx, c: &ConeData<S>, format: Format) -> Result<()> {
    require(format, &[Format::Tsv, Format::Json, Format::Ext])?;
    match format {
        Format::Ext => {
            let mut buf = Vec::new();
            write_ext(c.v(), &mut buf)?;
            ctx.emit(&String::from_utf8(buf)?)
        }
        Format::Json => ctx.emit(&to_json("rays", c.v())?),
        _ => {
            let mut out = format!("ray\torbit\t{}\n", coords_header(c).join("\t"));
            for (i, r) in c.v().rays.iter().enumerate() {
                let cs: Vec<String> = r.coords().iter().map(|x| x.to_string()).collect();
                out.push_str(&format!(
                    "{}\t{}\t{}\n",
                    i + 1,
                    c.ray_orbits().orbit_of[i] + 1,
                    cs.join("\t")
                ));
            }
            ctx.emit(&out)
        }
    }
}

fn facets_cmd<S: Scalar>(ctx: &Ctx, c: &ConeData<S>, format: Format) -> Result<()> {
    require(format, &[Format::Tsv, Format::Json, Format::Ine])?;
    match format {
        Format::Ine => {
            let mut buf = Vec::new();
            write_ine(c.h(), &mut buf)?;
            ctx.emit(&String::from_utf8(buf)?)
        }
        Format::Json => ctx.emit(&to_json("facets", c.h())?),
        _ => {
            let mut out = format!("facet\torbit\tlabel\t{}\n", coords_header(c).join("\t"));
            for (i, q) in c.h().inequalities.iter().enumerate() {
                let cs: Vec<String> = q.normal.coords().iter().map(|x| x.to_string()).collect();
                out.push_str(&format!(
                    "{}\t{}\t{}\t{}\n",
                    i + 1,
                    c.facet_orbits().orbit_of[i] + 1,
                    q.label(),
                    cs.join("\t")
                ));
            }
            ctx.emit(&out)
        }
    }
}

#[derive(Serialize)]
struct OrbitDoc {
    orbit: usize,
    size: usize,
    representative: String,
    members: Vec<usize>,
}

fn orbits_cmd<S: Scalar>(ctx: &Ctx, c: &ConeData<S>, side: Side, format: Format) -> Result<()> {
    require(format, &[Format::Tsv, Format::Json])?;
    let decomp = match side {
        Side::Rays => c.ray_orbits(),
        Side::Facets => c.facet_orbits(),
    };
    let docs: Vec<OrbitDoc> = decomp
        .orbits
        .iter()
        .enumerate()
        .map(|(i, o)| OrbitDoc {
            orbit: i + 1,
            size: o.members.len(),
            representative: member_label(c, side, o.members[0]),
            members: o.members.iter().map(|m| m + 1).collect(),
        })
        .collect();
    if format == Format::Json {
        return ctx.emit(&to_json("orbits", &docs)?);
    }
    let mut out = String::from("orbit\tsize\trepresentative\n");
    for d in &docs {
        out.push_str(&format!("{}\t{}\t{}\n", d.orbit, d.size, d.representative));
    }
    ctx.emit(&out)
}

fn face_graph<S: Scalar>(ctx: &Ctx, c: &ConeData<S>, kind: GraphArg) -> Result<FaceGraph> {
    Ok(match kind {
        GraphArg::Skeleton => c.skeleton(ctx.test)?,
        GraphArg::Ridge => c.ridge(ctx.test)?,
    })
}

fn graph_cmd<S: Scalar>(
    ctx: &Ctx,
    c: &ConeData<S>,
    kind: GraphArg,
    orbit: Option<usize>,
    local: Option<usize>,
    format: Format,
) -> Result<()> {
    require(format, &[Format::Tsv, Format::Json, Format::Dot])?;
    let full = face_graph(ctx, c, kind)?;
    let decomp = match kind {
        GraphArg::Skeleton => c.ray_orbits(),
        GraphArg::Ridge => c.facet_orbits(),
    };
    let one_based = |o: usize| -> Result<usize> {
        if o == 0 || o > decomp.len() {
            return Err(config_err(format!(
                "orbit {o} does not exist; there are {}",
                decomp.len()
            )));
        }
        Ok(o - 1)
    };
    let (g, what) = match (orbit, local) {
        (Some(o), _) => (
            restrict_to_orbit(&full, one_based(o)?)?,
            format!("restricted to orbit {o}"),
        ),
        (_, Some(o)) => {
            let leader = decomp.leaders()[one_based(o)?];
            (
                local_graph(&full, leader)?,
                format!("local graph of a member of orbit {o}"),
            )
        }
        _ => (full, String::new()),
    };
    let kind_name = match kind {
        GraphArg::Skeleton => "skeleton",
        GraphArg::Ridge => "ridge graph",
    };
    let title = format!("{} of {} {}", kind_name, c.name(), what)
        .trim()
        .to_string();
    let named = if g.order() <= CATALOG_LIMIT {
        identify_graph(&g.graph)?
    } else {
        None
    };
    let doc = graph_doc(c, &g);
    match format {
        Format::Dot => {
            let mut text = String::new();
            if let Some(nm) = &named {
                text.push_str(&format!("// {nm}\n"));
            }
            text.push_str(&face_graph_dot(&title, &doc));
            ctx.emit(&text)
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                title: &'a str,
                named: Option<String>,
                diameter: Option<usize>,
                graph: &'a hemicone::report::GraphDoc,
            }
            let diameter = g.graph.diameter();
            ctx.emit(&to_json(
                "graph",
                &Out {
                    title: &title,
                    named: named.map(|n| n.to_string()),
                    diameter,
                    graph: &doc,
                },
            )?)
        }
        _ => {
            let mut out = format!(
                "# {title}\n# vertices {} edges {}\n",
                g.order(),
                g.edge_count()
            );
            if let Some(nm) = &named {
                out.push_str(&format!("# isomorphic to {nm}\n"));
            }
            out.push_str("u\tv\n");
            for (a, b) in &doc.edges {
                out.push_str(&format!("{}\t{}\n", doc.labels[*a], doc.labels[*b]));
            }
            ctx.emit(&out)
        }
    }
}

fn diameter_cmd<S: Scalar>(ctx: &Ctx, c: &ConeData<S>) -> Result<()> {
    let d = |x: Option<usize>| x.map_or("disconnected".to_string(), |v| v.to_string());
    let s = diameter_by_orbits(&c.skeleton(ctx.test)?);
    let r = diameter_by_orbits(&c.ridge(ctx.test)?);
    ctx.emit(&format!(
        "cone\t{}\nskeleton\t{}\nridge\t{}\n",
        c.name(),
        d(s),
        d(r)
    ))
}

fn table_cmd<S: Scalar>(ctx: &Ctx, c: &ConeData<S>, side: Side, format: Format) -> Result<()> {
    require(format, &[Format::Tsv, Format::Json])?;
    let rays = c.ray_table(ctx.test)?;
    let facets = c.facet_table(ctx.test)?;
    check_incidence(&rays, &facets)?;
    let table = match side {
        Side::Rays => &rays,
        Side::Facets => &facets,
    };
    match format {
        Format::Json => ctx.emit(&to_json("orbit-table", table)?),
        _ => ctx.emit(&orbit_table_tsv(c, side, table)?),
    }
}

fn rgraph_cmd<S: Scalar>(
    ctx: &Ctx,
    n: usize,
    m: usize,
    va: &VectorArgs,
    complement: bool,
    format: Format,
) -> Result<()> {
    require(format, &[Format::Dot, Format::Json, Format::Tsv])?;
    check_shape(n, m)?;
    let v = parse_vector::<S>(n, m, va)?;
    let r = r_graph(&v);
    let g = if complement {
        r.graph.complement()
    } else {
        r.graph.clone()
    };
    let named = if g.order() <= CATALOG_LIMIT {
        identify_graph(&g)?
    } else {
        None
    };
    let title = format!(
        "{}R-graph of {v}",
        if complement { "complement of the " } else { "" }
    );
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out {
                title: String,
                vertices: Vec<String>,
                labels: Vec<String>,
                edges: Vec<(usize, usize)>,
                named: Option<String>,
            }
            let idx = v.index();
            ctx.emit(&to_json(
                "r-graph",
                &Out {
                    title,
                    vertices: r.vertices.iter().map(|t| idx.render(t)).collect(),
                    labels: r.labels.iter().map(|l| l.to_string()).collect(),
                    edges: g.edges(),
                    named: named.map(|n| n.to_string()),
                },
            )?)
        }
        Format::Tsv => {
            let idx = v.index();
            let mut out = format!("# {title}\n");
            if let Some(nm) = &named {
                out.push_str(&format!("# isomorphic to {nm}\n"));
            }
            out.push_str("u\tv\n");
            for (a, b) in g.edges() {
                out.push_str(&format!(
                    "{}\t{}\n",
                    idx.render(&r.vertices[a]),
                    idx.render(&r.vertices[b])
                ));
            }
            ctx.emit(&out)
        }
        _ => {
            let mut text = String::new();
            if let Some(nm) = &named {
                text.push_str(&format!("// {nm}\n"));
            }
            text.push_str(&r_graph_dot(&title, &r, complement));
            ctx.emit(&text)
        }
    }
}

/// Re-checks a computed cone; returns whether every check passed.
fn verify_cone<S: Scalar>(ctx: &Ctx, c: &ConeData<S>) -> Result<bool> {
    let mut lines = Vec::new();
    let mut ok = true;
    let mut record = |name: &str, pass: bool, detail: String| {
        ok &= pass;
        lines.push(format!(
            "{}\t{}\t{}",
            if pass { "PASS" } else { "FAIL" },
            name,
            detail
        ));
    };
    let mut valid = true;
    for r in &c.v().rays {
        if !c.h().violated_by(r)?.is_empty() {
            valid = false;
        }
    }
    record(
        "rays satisfy every inequality",
        valid,
        format!("{} rays x {} inequalities", c.v().len(), c.h().len()),
    );
    let extreme = c
        .v()
        .rays
        .iter()
        .filter(|r| matches!(is_extreme_ray(c.h(), r), Ok(x) if x.holds))
        .count();
    record(
        "every ray is extreme",
        extreme == c.v().len(),
        format!("{extreme} of {}", c.v().len()),
    );
    let facets = c
        .h()
        .inequalities
        .iter()
        .filter(|q| matches!(is_facet(c.v(), q), Ok(x) if x.holds))
        .count();
    record(
        "every inequality is a facet",
        facets == c.h().len(),
        format!("{facets} of {}", c.h().len()),
    );
    let group = &c.group;
    let inv_r = group.is_invariant(&c.v().rays);
    let inv_f = group.is_invariant(&c.normals());
    record(
        "Sym(n) invariance",
        inv_r && inv_f,
        format!("{} permutations", group.order()),
    );
    let tables = c
        .ray_table(ctx.test)
        .and_then(|r| Ok((r, c.facet_table(ctx.test)?)));
    let counted = tables
        .as_ref()
        .map(|(r, f)| check_incidence(r, f).is_ok())
        .unwrap_or(false);
    record(
        "double counting",
        counted,
        format!(
            "{} ray orbits, {} facet orbits",
            c.ray_orbits().len(),
            c.facet_orbits().len()
        ),
    );
    let mut text = format!("# verify {}\n", c.name());
    text.push_str(&lines.join("\n"));
    text.push('\n');
    ctx.emit(&text)?;
    Ok(ok)
}

fn verify_vector<S: Scalar>(
    ctx: &Ctx,
    family: Family,
    n: usize,
    m: usize,
    va: &VectorArgs,
    facet: bool,
) -> Result<bool> {
    let v = parse_vector::<S>(n, m, va)?;
    let mut out = format!("vector\t{v}\n");
    let ok = if facet {
        let c = ctx.cone::<S>(family, n, m)?;
        let q = LinearInequality::classified(v)?;
        match is_facet(c.v(), &q) {
            Ok(cert) => {
                out.push_str(&format!(
                    "label\t{}\nvalid\tyes\ntight rays\t{}\nrank\t{} of {}\nfacet\t{}\n",
                    q.label(),
                    cert.tight.len(),
                    cert.rank,
                    cert.dim - 1,
                    yes(cert.holds)
                ));
                cert.holds
            }
            Err(e) => {
                out.push_str(&format!("valid\tno ({e})\nfacet\tno\n"));
                false
            }
        }
    } else {
        let h = match family {
            Family::P => ctx.cone::<S>(family, n, m)?.record.h,
            _ => build_cone_h::<S>(family, n, m)?,
        };
        match is_extreme_ray(&h, &v) {
            Ok(cert) => {
                out.push_str(&format!(
                    "feasible\tyes\ntight inequalities\t{}\nrank\t{} of {}\nextreme ray\t{}\n",
                    cert.tight.len(),
                    cert.rank,
                    cert.dim - 1,
                    yes(cert.holds)
                ));
                cert.holds
            }
            Err(e) => {
                out.push_str(&format!("feasible\tno ({e})\nextreme ray\tno\n"));
                false
            }
        }
    };
    ctx.emit(&out)?;
    Ok(ok)
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn conjecture_cmd<S: Scalar>(ctx: &Ctx, id: u8, m: usize, n: usize, format: Format) -> Result<()> {
    require(format, &[Format::Tsv, Format::Json])?;
    check_shape(n, m)?;
    let mut needed = match id {
        1 => vec![(Family::P, n, m)],
        2 => vec![(Family::Hm, n, m), (Family::Nhm, n, m), (Family::P, n, m)],
        3 => vec![(Family::Nhm, n, m)],
        _ => vec![(Family::Nhm, n, m)],
    };
    if id == 4 && m >= 2 {
        needed.push((Family::Nhm, n - 1, m - 1));
    }
    let mut store = ConeStore::<S>::new(ctx.opts.clone());
    for (f, nn, mm) in needed {
        store.insert(ctx.cone::<S>(f, nn, mm)?);
    }
    let report: ConjectureReport = match id {
        1 => check_conjecture_1(&store, m, n)?,
        2 => check_conjecture_2(&store, m, n)?,
        3 => check_conjecture_3(&store, m, n)?,
        _ => check_conjecture_4(&store, m, n)?,
    };
    match format {
        Format::Json => ctx.emit(&to_json("conjecture", &report)?),
        _ => ctx.emit(&report.to_string()),
    }
}

const DEFAULT_ROWS: &[&str] = &[
    "p:4:2", "p:5:1", "nhm:5:1", "p:5:2", "nhm:5:2", "hm:5:2", "p:6:1", "nhm:6:1", "p:6:3",
    "nhm:6:3", "nhm:6:2", "nhm:7:4",
];

fn parse_row(s: &str) -> Result<(Family, usize, usize)> {
    let parts: Vec<&str> = s.split(':').collect();
    let [f, n, m] = parts.as_slice() else {
        return Err(config_err(format!("row {s:?} is not family:n:m")));
    };
    let family: Family = f
        .parse()
        .map_err(|_| config_err(format!("unknown family {f:?}")))?;
    if family == Family::Custom {
        return Err(config_err("custom cones have no summary row"));
    }
    let n = n
        .parse()
        .map_err(|_| config_err(format!("bad n in {s:?}")))?;
    let m = m
        .parse()
        .map_err(|_| config_err(format!("bad m in {s:?}")))?;
    Ok((family, n, m))
}

/// Returns whether every row is complete.
fn summary_cmd<S: Scalar>(ctx: &Ctx, rows: &[String], format: Format) -> Result<bool> {
    require(format, &[Format::Tsv, Format::Json])?;
    let specs: Vec<String> = if rows.is_empty() {
        DEFAULT_ROWS.iter().map(|s| s.to_string()).collect()
    } else {
        rows.to_vec()
    };
    let mut out: Vec<SummaryRow> = Vec::new();
    let mut complete = true;
    for s in &specs {
        let (family, n, m) = parse_row(s)?;
        match ctx.cone::<S>(family, n, m) {
            Ok(c) => out.push(summary_row(&c, ctx.test)?),
            Err(e) => {
                let limit = e.downcast::<LimitReached>()?;
                complete = false;
                ctx.note(limit.to_string());
                let dim = hemicone::tuples::binomial(n, m + 1);
                let known = match family {
                    Family::P => Count {
                        value: build_cone_p::<S>(n, m)?.len(),
                        orbits: Some(
                            hemicone::cone::enumerate_partitions(n, m + 1)?
                                .iter()
                                .map(|p| {
                                    let mut s = p.block_sizes();
                                    s.sort();
                                    s
                                })
                                .collect::<BTreeSet<_>>()
                                .len(),
                        ),
                        exact: true,
                    },
                    _ => Count {
                        value: build_cone_h::<S>(family, n, m)?.len(),
                        orbits: None,
                        exact: false,
                    },
                };
                let (rays, facets) = if family == Family::P {
                    (known, limit.lower_bound)
                } else {
                    (limit.lower_bound, known)
                };
                out.push(SummaryRow {
                    name: family.cone_name(m, n),
                    dim,
                    rays,
                    facets,
                    skeleton_diameter: None,
                    ridge_diameter: None,
                });
            }
        }
    }
    match format {
        Format::Json => ctx.emit(&to_json("summary", &out)?)?,
        _ => ctx.emit(&summary_tsv(&out))?,
    }
    Ok(complete)
}

fn build_cmd<S: Scalar>(ctx: &Ctx, c: &ConeData<S>) -> Result<()> {
    let mut text = format!(
        "cone\t{}\ndimension\t{}\nrays\t{}({})\nfacets\t{}({})\n",
        c.name(),
        c.dim(),
        c.v().len(),
        c.ray_orbits().len(),
        c.h().len(),
        c.facet_orbits().len()
    );
    if let Some(cache) = &ctx.cache {
        text.push_str(&format!(
            "cache\t{}\n",
            cache.entry_path::<S>(c.family(), c.m(), c.n()).display()
        ));
    }
    ctx.emit(&text)
}

/// Runs a command; `Ok(false)` means it ran but found something negative.
fn run<S: Scalar>(cli: &Cli, ctx: &Ctx) -> Result<bool> {
    match &cli.cmd {
        Cmd::Build(a) => build_cmd(ctx, &ctx.cone::<S>(a.family.into(), a.n, a.m)?)?,
        Cmd::Rays { cone, format } => rays_cmd(
            ctx,
            &ctx.cone::<S>(cone.family.into(), cone.n, cone.m)?,
            *format,
        )?,
        Cmd::Facets { cone, format } => facets_cmd(
            ctx,
            &ctx.cone::<S>(cone.family.into(), cone.n, cone.m)?,
            *format,
        )?,
        Cmd::Orbits { cone, side, format } => orbits_cmd(
            ctx,
            &ctx.cone::<S>(cone.family.into(), cone.n, cone.m)?,
            (*side).into(),
            *format,
        )?,
        Cmd::Graph {
            cone,
            kind,
            orbit,
            local,
            format,
        } => graph_cmd(
            ctx,
            &ctx.cone::<S>(cone.family.into(), cone.n, cone.m)?,
            *kind,
            *orbit,
            *local,
            *format,
        )?,
        Cmd::Diameter(a) => diameter_cmd(ctx, &ctx.cone::<S>(a.family.into(), a.n, a.m)?)?,
        Cmd::Table { cone, side, format } => table_cmd(
            ctx,
            &ctx.cone::<S>(cone.family.into(), cone.n, cone.m)?,
            (*side).into(),
            *format,
        )?,
        Cmd::Rgraph {
            m,
            n,
            vector,
            complement,
            format,
        } => rgraph_cmd::<S>(ctx, *n, *m, vector, *complement, *format)?,
        Cmd::Verify {
            cone,
            vector,
            facet,
        } => {
            return if vector.vector.is_some() || vector.partition.is_some() {
                verify_vector::<S>(ctx, cone.family.into(), cone.n, cone.m, vector, *facet)
            } else {
                verify_cone(ctx, &ctx.cone::<S>(cone.family.into(), cone.n, cone.m)?)
            };
        }
        Cmd::Conjecture { id, m, n, format } => conjecture_cmd::<S>(ctx, *id, *m, *n, *format)?,
        Cmd::Summary { rows, format } => {
            if !summary_cmd::<S>(ctx, rows, *format)? {
                return Err(LimitMarker.into());
            }
        }
    }
    Ok(true)
}

/// Marks a summary that finished with incomplete rows.
#[derive(Debug)]
struct LimitMarker;

impl std::fmt::Display for LimitMarker {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("some rows hit a resource limit and are lower bounds")
    }
}

impl std::error::Error for LimitMarker {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(s) = cli.max_seconds {
        if !(s > 0.0) {
            eprintln!("error: --max-seconds must be positive");
            return ExitCode::from(EXIT_CONFIG);
        }
    }
    let cache = match &cli.cache_dir {
        Some(d) => match Cache::open(d) {
            Ok(c) => Some(c),
            Err(e) => {
                eprintln!("error: {e:#}");
                return ExitCode::FAILURE;
            }
        },
        None => None,
    };
    let progress: Option<Arc<dyn Fn(&DdProgress) + Send + Sync>> = if cli.verbose {
        Some(Arc::new(|p: &DdProgress| {
            eprintln!(
                "  {}/{} inequalities, {} rays, {:.1}s",
                p.processed, p.total, p.rays, p.elapsed_secs
            )
        }))
    } else {
        None
    };
    let opts = DdOptions {
        max_rays: cli.max_rays.map(|r| r as usize),
        max_seconds: cli.max_seconds,
        progress,
        ..DdOptions::default()
    };
    let ctx = Ctx {
        cache,
        opts,
        resume: cli.resume.clone(),
        test: match cli.test {
            TestKind::Rank => AdjacencyTest::Rank,
            TestKind::Combinatorial => AdjacencyTest::Combinatorial,
        },
        output: cli.output.clone(),
        verbose: cli.verbose,
    };
    let result = match cli.scalar {
        ScalarKind::I64 => run::<i64>(&cli, &ctx),
        ScalarKind::Bigint => run::<BigInt>(&cli, &ctx),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            if e.downcast_ref::<LimitMarker>().is_some() {
                eprintln!("{}", LimitMarker);
                return ExitCode::from(EXIT_LIMIT);
            }
            if let Some(l) = e.downcast_ref::<LimitReached>() {
                eprintln!("{l}");
                return ExitCode::from(EXIT_LIMIT);
            }
            if e.downcast_ref::<ConfigError>().is_some() {
                eprintln!("error: {e:#}");
                return ExitCode::from(EXIT_CONFIG);
            }
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
