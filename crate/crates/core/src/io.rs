//! cdd-style `.ine` / `.ext` files.
//!
//! Cones are written with `b = 0`, so an inequality `a . x >= 0` becomes the
//! row `0 a_1 ... a_d` and a ray `r` becomes `0 r_1 ... r_d`. A comment line
//! `* hemicone family=nhm n=5 m=2` records the coordinate layout; without it
//! the layout is inferred from the dimension when that is unambiguous.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use num_rational::Ratio;

use crate::cone::{ConeH, ConeV, Family, LinearInequality};
use crate::dd::canonical_primitive;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tuples::{binomial, TupleIndex};
use crate::vector::HemiVector;

fn header<W: Write>(
    w: &mut W,
    family: Family,
    index: &TupleIndex,
    kind: &str,
) -> std::io::Result<()> {
    writeln!(
        w,
        "* hemicone family={} n={} m={}",
        family,
        index.n(),
        index.k() - 1
    )?;
    writeln!(w, "{kind}")?;
    writeln!(w, "begin")
}

fn rows<W: Write, S: Scalar>(w: &mut W, vs: &[&HemiVector<S>], d: usize) -> std::io::Result<()> {
    writeln!(w, " {} {} integer", vs.len(), d + 1)?;
    for v in vs {
        write!(w, " 0")?;
        for c in v.coords() {
            write!(w, " {c}")?;
        }
        writeln!(w)?;
    }
    writeln!(w, "end")
}

pub fn write_ine<S: Scalar, W: Write>(h: &ConeH<S>, w: &mut W) -> Result<()> {
    let vs: Vec<&HemiVector<S>> = h.inequalities.iter().map(|i| &i.normal).collect();
    header(w, h.family, &h.index, "H-representation").map_err(io_err)?;
    rows(w, &vs, h.dim()).map_err(io_err)
}

pub fn write_ext<S: Scalar, W: Write>(v: &ConeV<S>, w: &mut W) -> Result<()> {
    let vs: Vec<&HemiVector<S>> = v.rays.iter().collect();
    header(w, v.family, &v.index, "V-representation").map_err(io_err)?;
    rows(w, &vs, v.dim()).map_err(io_err)
}

/// Inequalities come back labelled by [`crate::cone::InequalityKind::classify`].
pub fn read_ine<S: Scalar, R: BufRead>(r: R) -> Result<ConeH<S>> {
    let f = parse(r, "H-representation")?;
    let inequalities = f
        .rows
        .into_iter()
        .map(LinearInequality::classified)
        .collect::<Result<Vec<_>>>()?;
    Ok(ConeH {
        index: f.index,
        inequalities,
        family: f.family,
    })
}

pub fn read_ext<S: Scalar, R: BufRead>(r: R) -> Result<ConeV<S>> {
    let f = parse(r, "V-representation")?;
    Ok(ConeV {
        index: f.index,
        rays: f.rows,
        family: f.family,
    })
}

pub fn save_ine<S: Scalar>(h: &ConeH<S>, path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    write_ine(h, &mut buf)?;
    fs::write(path, buf).map_err(io_err)
}

pub fn save_ext<S: Scalar>(v: &ConeV<S>, path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    write_ext(v, &mut buf)?;
    fs::write(path, buf).map_err(io_err)
}

pub fn load_ine<S: Scalar>(path: &Path) -> Result<ConeH<S>> {
    read_ine(BufReader::new(fs::File::open(path).map_err(io_err)?))
}

pub fn load_ext<S: Scalar>(path: &Path) -> Result<ConeV<S>> {
    read_ext(BufReader::new(fs::File::open(path).map_err(io_err)?))
}

fn io_err(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

struct Parsed<S> {
    index: TupleIndex,
    family: Family,
    rows: Vec<HemiVector<S>>,
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Reads `key=value` pairs out of a `* hemicone ...` comment.
fn layout_comment(s: &str) -> Option<(Option<Family>, Option<usize>, Option<usize>)> {
    let body = s.trim_start_matches('*').trim();
    let rest = body.strip_prefix("hemicone")?;
    let (mut fam, mut n, mut m) = (None, None, None);
    for kv in rest.split_whitespace() {
        match kv.split_once('=') {
            Some(("family", v)) => fam = v.parse().ok(),
            Some(("n", v)) => n = v.parse().ok(),
            Some(("m", v)) => m = v.parse().ok(),
            _ => {}
        }
    }
    Some((fam, n, m))
}

/// The unique (n, k) with C(n, k) = d, 2 <= k <= n - 1, if there is one.
fn infer_layout(d: usize, line: usize) -> Result<TupleIndex> {
    let mut found = Vec::new();
    for n in 3..=d.max(3) + 1 {
        for k in 2..n {
            if binomial(n, k) == d {
                found.push((n, k));
            }
        }
    }
    match found.as_slice() {
        [(n, k)] => TupleIndex::new(*n, *k),
        [] => Err(perr(
            line,
            format!("dimension {d} is not a binomial coefficient C(n,k) with k >= 2"),
        )),
        many => Err(perr(
            line,
            format!("dimension {d} is ambiguous ({many:?}); add a '* hemicone n= m=' comment"),
        )),
    }
}

fn parse<S: Scalar, R: BufRead>(r: R, expect: &str) -> Result<Parsed<S>> {
    let mut layout = (None, None, None);
    let mut seen_kind = false;
    let mut size: Option<(usize, usize, usize)> = None;
    let mut body: Vec<(usize, String)> = Vec::new();
    let mut in_body = false;
    let mut ended = false;
    for (i, line) in r.lines().enumerate() {
        let no = i + 1;
        let line = line.map_err(io_err)?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if t.starts_with('*') {
            if let Some(l) = layout_comment(t) {
                layout = l;
            }
            continue;
        }
        if ended {
            // trailing cdd options are tolerated
            continue;
        }
        if in_body {
            if t == "end" {
                ended = true;
                in_body = false;
            } else if size.is_none() {
                let f: Vec<&str> = t.split_whitespace().collect();
                if f.len() != 3 {
                    return Err(perr(no, "expected '<rows> <cols> <number type>'"));
                }
                let rows = f[0]
                    .parse()
                    .map_err(|_| perr(no, format!("bad row count {:?}", f[0])))?;
                let cols: usize = f[1]
                    .parse()
                    .map_err(|_| perr(no, format!("bad column count {:?}", f[1])))?;
                if cols < 2 {
                    return Err(perr(no, "need at least two columns"));
                }
                if !matches!(f[2], "integer" | "rational") {
                    return Err(perr(no, format!("unsupported number type {:?}", f[2])));
                }
                size = Some((rows, cols, no));
            } else {
                body.push((no, t.to_string()));
            }
            continue;
        }
        match t {
            "H-representation" | "V-representation" => {
                if t != expect {
                    return Err(perr(no, format!("expected {expect}, found {t}")));
                }
                seen_kind = true;
            }
            "begin" => in_body = true,
            _ if t.starts_with("linearity") => {
                return Err(perr(no, "linearity rows are not supported for cones"))
            }
            _ => return Err(perr(no, format!("unexpected line {t:?}"))),
        }
    }
    if !ended {
        return Err(perr(0, "missing 'end'"));
    }
    // cdd treats a file without a representation line as H
    if !seen_kind && expect == "V-representation" {
        return Err(perr(0, format!("missing '{expect}'")));
    }
    let (nrows, cols, size_line) = size.ok_or_else(|| perr(0, "missing size line"))?;
    let d = cols - 1;
    let index = match layout {
        (_, Some(n), Some(m)) => TupleIndex::new(n, m + 1).map_err(|e| perr(1, e.to_string()))?,
        _ => infer_layout(d, size_line)?,
    };
    if index.dim() != d {
        return Err(perr(
            size_line,
            format!(
                "{} columns but the layout has dimension {}",
                cols,
                index.dim()
            ),
        ));
    }
    if body.len() != nrows {
        return Err(perr(
            size_line,
            format!("declared {nrows} rows, found {}", body.len()),
        ));
    }
    let mut rows = Vec::with_capacity(nrows);
    for (no, t) in body {
        let vals = t
            .split_whitespace()
            .map(|x| {
                x.parse::<Ratio<S>>()
                    .map_err(|_| perr(no, format!("bad number {x:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if vals.len() != cols {
            return Err(perr(
                no,
                format!("expected {cols} entries, found {}", vals.len()),
            ));
        }
        if !num_traits::Zero::is_zero(&vals[0]) {
            return Err(perr(
                no,
                "nonzero first column: only cones (b = 0, rays) are supported",
            ));
        }
        let v = canonical_primitive(index.n(), index.k(), &vals[1..])
            .map_err(|e| perr(no, e.to_string()))?;
        rows.push(v);
    }
    Ok(Parsed {
        index,
        family: layout.0.unwrap_or(Family::Custom),
        rows,
    })
}
