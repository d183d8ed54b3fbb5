//! JSON-lines import and export of point sets and graphs, and CSV tail tables.
//!
//! Floats are written as shortest round-trip decimals, so a file read back
//! reproduces every coordinate and weight bit for bit.

use std::io::{BufRead, Write};

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Engine, ModelParams, WeightedGraph};
use crate::pointprocess::{BoxGeometry, PointSet, Topology};
use crate::weights::{WeightLaw, WeightVector};

pub const POINTS_FORMAT: &str = "sfperc-points";
pub const GRAPH_FORMAT: &str = "sfperc-graph";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightsHeader {
    pub law: WeightLaw,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointsHeader {
    pub format: String,
    pub version: u32,
    pub dim: usize,
    pub side: f64,
    pub topology: Topology,
    pub intensity: f64,
    pub seed: u64,
    pub count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<WeightsHeader>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct PointLine {
    x: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    w: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphHeader {
    pub format: String,
    pub version: u32,
    pub params: ModelParams,
    pub dim: usize,
    pub side: f64,
    pub topology: Topology,
    pub point_seed: u64,
    pub weight_seed: u64,
    pub edge_seed: u64,
    pub engine: Engine,
    pub vertices: usize,
    pub edges: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct VertexLine {
    v: usize,
    x: Vec<f64>,
    w: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct EdgeLine {
    e: [usize; 2],
}

fn write_line<W: Write, T: Serialize>(out: &mut W, value: &T) -> Result<()> {
    serde_json::to_writer(&mut *out, value).map_err(|e| Error::Io(e.to_string()))?;
    out.write_all(b"\n")?;
    Ok(())
}

struct Lines<R> {
    inner: std::iter::Enumerate<std::io::Lines<R>>,
}

impl<R: BufRead> Lines<R> {
    fn new(r: R) -> Self {
        Self { inner: r.lines().enumerate() }
    }

    /// Next non-blank line parsed as `T`; `None` at end of input.
    fn next<T: DeserializeOwned>(&mut self) -> Result<Option<(usize, T)>> {
        for (k, line) in self.inner.by_ref() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            return serde_json::from_str(&line)
                .map(|v| Some((k + 1, v)))
                .map_err(|e| Error::Parse { line: k + 1, reason: e.to_string() });
        }
        Ok(None)
    }

    fn expect<T: DeserializeOwned>(&mut self, what: &str) -> Result<(usize, T)> {
        self.next()?.ok_or_else(|| Error::Parse {
            line: 0,
            reason: format!("unexpected end of input, expected {what}"),
        })
    }
}

fn check_format(line: usize, format: &str, expected: &str, version: u32) -> Result<()> {
    if format != expected {
        return Err(Error::Parse { line, reason: format!("format {format:?}, expected {expected:?}") });
    }
    if version != VERSION {
        return Err(Error::Parse { line, reason: format!("unsupported version {version}") });
    }
    Ok(())
}

pub fn write_points<W: Write>(out: &mut W, ps: &PointSet, weights: Option<(&WeightLaw, &WeightVector)>) -> Result<()> {
    let g = ps.geometry();
    let header = PointsHeader {
        format: POINTS_FORMAT.into(),
        version: VERSION,
        dim: g.dim(),
        side: g.side(),
        topology: g.topology(),
        intensity: ps.intensity(),
        seed: ps.seed(),
        count: ps.len(),
        weights: weights.map(|(law, wv)| WeightsHeader { law: *law, seed: wv.seed() }),
    };
    if let Some((_, wv)) = weights {
        if wv.len() != ps.len() {
            return Err(Error::Misaligned { points: ps.len(), weights: wv.len() });
        }
    }
    write_line(out, &header)?;
    for (i, x) in ps.iter().enumerate() {
        let w = weights.map(|(_, wv)| wv.values()[i]);
        write_line(out, &PointLine { x: x.to_vec(), w })?;
    }
    Ok(())
}

/// Point set, plus the weight law and weights when the file carries them.
pub type PointsFile = (PointSet, Option<(WeightLaw, WeightVector)>);

pub fn read_points<R: BufRead>(input: R) -> Result<PointsFile> {
    let mut lines = Lines::new(input);
    let (hl, h): (usize, PointsHeader) = lines.expect("header")?;
    check_format(hl, &h.format, POINTS_FORMAT, h.version)?;
    let geometry = BoxGeometry::new(h.dim, h.side, h.topology)?;
    let mut coords = Vec::with_capacity(h.count * h.dim);
    let mut ws = Vec::with_capacity(h.count);
    for _ in 0..h.count {
        let (k, p): (usize, PointLine) = lines.expect("point line")?;
        if p.x.len() != h.dim {
            return Err(Error::Parse { line: k, reason: format!("expected {} coordinates", h.dim) });
        }
        coords.extend(p.x);
        match (p.w, &h.weights) {
            (Some(w), Some(_)) => ws.push(w),
            (None, None) => {}
            _ => return Err(Error::Parse { line: k, reason: "weight presence disagrees with header".into() }),
        }
    }
    if let Some((k, _)) = lines.next::<serde_json::Value>()? {
        return Err(Error::Parse { line: k, reason: format!("more than {} points", h.count) });
    }
    let ps = PointSet::from_coords(geometry, coords, h.intensity, h.seed)?;
    let weights = match h.weights {
        Some(wh) => Some((wh.law, WeightVector::from_values(ws, wh.seed)?)),
        None => None,
    };
    Ok((ps, weights))
}

pub fn write_graph<W: Write>(out: &mut W, g: &WeightedGraph) -> Result<()> {
    let geom = g.points().geometry();
    write_line(
        out,
        &GraphHeader {
            format: GRAPH_FORMAT.into(),
            version: VERSION,
            params: *g.params(),
            dim: geom.dim(),
            side: geom.side(),
            topology: geom.topology(),
            point_seed: g.points().seed(),
            weight_seed: g.weights().seed(),
            edge_seed: g.edge_seed(),
            engine: g.engine(),
            vertices: g.len(),
            edges: g.edge_count(),
        },
    )?;
    for (v, x) in g.points().iter().enumerate() {
        write_line(out, &VertexLine { v, x: x.to_vec(), w: g.weights().values()[v] })?;
    }
    for (i, j) in g.edges() {
        write_line(out, &EdgeLine { e: [i, j] })?;
    }
    Ok(())
}

pub fn read_graph<R: BufRead>(input: R) -> Result<WeightedGraph> {
    let mut lines = Lines::new(input);
    let (hl, h): (usize, GraphHeader) = lines.expect("header")?;
    check_format(hl, &h.format, GRAPH_FORMAT, h.version)?;
    h.params.validate()?;
    let geometry = BoxGeometry::new(h.dim, h.side, h.topology)?;
    let mut coords = Vec::with_capacity(h.vertices * h.dim);
    let mut ws = Vec::with_capacity(h.vertices);
    for idx in 0..h.vertices {
        let (k, v): (usize, VertexLine) = lines.expect("vertex line")?;
        if v.v != idx || v.x.len() != h.dim {
            return Err(Error::Parse { line: k, reason: format!("malformed vertex {idx}") });
        }
        coords.extend(v.x);
        ws.push(v.w);
    }
    let mut adjacency = vec![Vec::new(); h.vertices];
    let mut count = 0usize;
    while let Some((k, e)) = lines.next::<EdgeLine>()? {
        let [i, j] = e.e;
        if i >= j || j >= h.vertices {
            return Err(Error::Parse { line: k, reason: format!("bad edge ({i}, {j})") });
        }
        adjacency[i].push(j as u32);
        adjacency[j].push(i as u32);
        count += 1;
    }
    if count != h.edges {
        return Err(Error::Parse { line: 0, reason: format!("header lists {} edges, found {count}", h.edges) });
    }
    adjacency.iter_mut().for_each(|l| l.sort_unstable());
    let ps = PointSet::from_coords(geometry, coords, h.params.intensity, h.point_seed)?;
    let wv = WeightVector::from_values(ws, h.weight_seed)?;
    WeightedGraph::from_parts(ps, wv, h.params, adjacency, h.engine, h.edge_seed)
}

/// `s,ccdf` table of the empirical `P(D > s)`.
pub fn write_tail_csv<W: Write>(out: &mut W, ccdf: &[(usize, f64)]) -> Result<()> {
    writeln!(out, "s,ccdf")?;
    for (s, p) in ccdf {
        writeln!(out, "{s},{p}")?;
    }
    Ok(())
}

/// `degree,count` histogram table.
pub fn write_histogram_csv<W: Write>(out: &mut W, hist: &std::collections::BTreeMap<usize, usize>) -> Result<()> {
    writeln!(out, "degree,count")?;
    for (d, c) in hist {
        writeln!(out, "{d},{c}")?;
    }
    Ok(())
}
