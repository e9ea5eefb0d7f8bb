//! Graph files (node-link JSON, edge lists) and CSV result tables.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::graph::{Graph, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    NodeLink,
    EdgeList,
}

impl GraphFormat {
    /// `.json` means node-link; anything else is read as an edge list.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => GraphFormat::NodeLink,
            _ => GraphFormat::EdgeList,
        }
    }
}

impl FromStr for GraphFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "node-link" | "nodelink" | "json" => Ok(GraphFormat::NodeLink),
            "edge-list" | "edgelist" => Ok(GraphFormat::EdgeList),
            _ => Err(Error::InvalidArgument(format!(
                "unknown graph format {s:?} (expected node-link or edge-list)"
            ))),
        }
    }
}

impl fmt::Display for GraphFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphFormat::NodeLink => "node-link",
            GraphFormat::EdgeList => "edge-list",
        })
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct NodeLinkDocument {
    #[serde(default)]
    directed: bool,
    #[serde(default)]
    multigraph: bool,
    #[serde(default)]
    graph: serde_json::Map<String, serde_json::Value>,
    nodes: Vec<Node>,
    #[serde(alias = "edges")]
    links: Vec<Link>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Node {
    id: VertexId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    x: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    y: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Link {
    source: VertexId,
    target: VertexId,
}

/// Parses a node-link document. Coordinates are kept only when every node
/// has both `x` and `y`.
pub fn parse_node_link(text: &str) -> Result<Graph> {
    let doc: NodeLinkDocument = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        field: None,
        message: e.to_string(),
    })?;
    if doc.directed {
        return Err(Error::Directed);
    }
    let coords = doc
        .nodes
        .iter()
        .map(|n| Some((n.id.clone(), Point::new(n.x?, n.y?))))
        .collect::<Option<HashMap<_, _>>>();
    let ids = doc.nodes.into_iter().map(|n| n.id).collect();
    let edges: Vec<(VertexId, VertexId)> = doc.links.into_iter().map(|l| (l.source, l.target)).collect();
    Graph::from_ids(ids, &edges, coords)
}

pub fn node_link_string(g: &Graph) -> String {
    let coords = g.coords();
    let doc = NodeLinkDocument {
        directed: false,
        multigraph: false,
        graph: serde_json::Map::new(),
        nodes: (0..g.n())
            .map(|v| Node {
                id: g.ids()[v].clone(),
                x: coords.map(|c| c[v].x),
                y: coords.map(|c| c[v].y),
            })
            .collect(),
        links: g
            .edges()
            .iter()
            .map(|&(u, v)| Link {
                source: g.id(u).clone(),
                target: g.id(v).clone(),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("node-link serialization");
    s.push('\n');
    s
}

/// Whitespace-separated id pairs, one per line; `#` starts a comment. A
/// line holding a single id declares an isolated vertex.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut ids: Vec<VertexId> = Vec::new();
    let mut seen: HashSet<VertexId> = HashSet::new();
    let mut edges = Vec::new();
    let mut note = |id: &VertexId, ids: &mut Vec<VertexId>| {
        if seen.insert(id.clone()) {
            ids.push(id.clone());
        }
    };
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            [] => {}
            [a] => note(&VertexId::parse(a), &mut ids),
            [a, b] => {
                let (a, b) = (VertexId::parse(a), VertexId::parse(b));
                note(&a, &mut ids);
                note(&b, &mut ids);
                edges.push((a, b));
            }
            _ => {
                return Err(Error::Parse {
                    line: i + 1,
                    field: None,
                    message: format!("expected two ids, found {} tokens", tokens.len()),
                })
            }
        }
    }
    Graph::from_ids(ids, &edges, None)
}

pub fn edge_list_string(g: &Graph) -> String {
    let mut s = String::new();
    for v in 0..g.n() as u32 {
        if g.degree(v) == 0 {
            s.push_str(&format!("{}\n", g.id(v)));
        }
    }
    for &(u, v) in g.edges() {
        s.push_str(&format!("{} {}\n", g.id(u), g.id(v)));
    }
    s
}

pub fn load_graph(path: &Path, format: GraphFormat) -> Result<Graph> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    match format {
        GraphFormat::NodeLink => parse_node_link(&text),
        GraphFormat::EdgeList => parse_edge_list(&text),
    }
}

pub fn save_graph(g: &Graph, path: &Path, format: GraphFormat) -> Result<()> {
    let text = match format {
        GraphFormat::NodeLink => node_link_string(g),
        GraphFormat::EdgeList => edge_list_string(g),
    };
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// One CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(i64),
    Real(f64),
    Missing,
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Missing, Cell::Real)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Int(b as i64)
    }
}

macro_rules! int_cell {
    ($($t:ty),*) => {$(
        impl From<$t> for Cell {
            fn from(x: $t) -> Self {
                Cell::Int(x as i64)
            }
        }
    )*};
}
int_cell!(i32, i64, u32, usize);

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        // seeds use the full 64-bit range
        match i64::try_from(x) {
            Ok(i) => Cell::Int(i),
            Err(_) => Cell::Text(x.to_string()),
        }
    }
}

/// Twelve significant digits, fixed-point where that stays readable.
pub fn format_real(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    if (-5..15).contains(&mag) {
        format!("{:.*}", (11 - mag).max(0) as usize, x)
    } else {
        format!("{:.11e}", x)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Text(s) => f.write_str(s),
            Cell::Int(i) => write!(f, "{i}"),
            Cell::Real(x) => f.write_str(&format_real(*x)),
            Cell::Missing => Ok(()),
        }
    }
}

/// Named cells in column order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResultRow {
    pub cells: Vec<(String, Cell)>,
}

impl ResultRow {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: impl Into<Cell>) -> Self {
        self.cells.push((name.to_string(), value.into()));
        self
    }

    pub fn get(&self, name: &str) -> Option<&Cell> {
        self.cells.iter().find(|(n, _)| n == name).map(|(_, c)| c)
    }
}

/// Writes a header and one line per row; every row must have exactly the
/// columns of `schema`, in order.
pub fn write_rows_to<W: Write>(out: W, schema: &[&str], rows: &[ResultRow]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let io_err = |e: csv::Error| Error::io("<csv>", std::io::Error::other(e.to_string()));
    w.write_record(schema).map_err(io_err)?;
    for (i, row) in rows.iter().enumerate() {
        let names: Vec<&str> = row.cells.iter().map(|(n, _)| n.as_str()).collect();
        if names != schema {
            return Err(Error::SchemaMismatch {
                row: i,
                message: format!("columns {names:?}, expected {schema:?}"),
            });
        }
        w.write_record(row.cells.iter().map(|(_, c)| c.to_string()))
            .map_err(io_err)?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

pub fn write_rows(path: &Path, schema: &[&str], rows: &[ResultRow]) -> Result<()> {
    let mut buf = Vec::new();
    write_rows_to(&mut buf, schema, rows)?;
    fs::write(path, buf).map_err(|e| Error::io(path, e))
}

/// Header and records of a CSV file, as strings.
pub fn read_table(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let parse_err = |e: csv::Error| Error::Parse {
        line: e.position().map_or(0, |p| p.line() as usize),
        field: None,
        message: e.to_string(),
    };
    let header = r.headers().map_err(parse_err)?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        rows.push(rec.map_err(parse_err)?.iter().map(String::from).collect());
    }
    Ok((header, rows))
}

/// The numeric columns `x` and `y` of a CSV file; rows where either is
/// empty are skipped.
pub fn read_xy(path: &Path, x: &str, y: &str) -> Result<Vec<(f64, f64)>> {
    let (header, rows) = read_table(path)?;
    let col = |name: &str| {
        header.iter().position(|h| h == name).ok_or_else(|| Error::Parse {
            line: 1,
            field: Some(name.to_string()),
            message: "no such column".into(),
        })
    };
    let (ix, iy) = (col(x)?, col(y)?);
    let mut out = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let (sx, sy) = (row[ix].trim(), row[iy].trim());
        if sx.is_empty() || sy.is_empty() {
            continue;
        }
        let num = |s: &str, name: &str| {
            s.parse::<f64>().map_err(|_| Error::Parse {
                line: i + 2,
                field: Some(name.to_string()),
                message: format!("not a number: {s:?}"),
            })
        };
        out.push((num(sx, x)?, num(sy, y)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_link_path() {
        let g = parse_node_link(
            r#"{"directed": false, "nodes": [{"id": 0}, {"id": 1}, {"id": 2}],
                "links": [{"source": 0, "target": 1}, {"source": 2, "target": 1}]}"#,
        )
        .unwrap();
        assert_eq!((g.n(), g.m()), (3, 2));
        assert!(g.coords().is_none());
    }

    #[test]
    fn node_link_errors() {
        let directed = r#"{"directed": true, "nodes": [], "links": []}"#;
        assert!(matches!(parse_node_link(directed), Err(Error::Directed)));
        let dangling = r#"{"nodes": [{"id": "a"}], "links": [{"source": "a", "target": "b"}]}"#;
        match parse_node_link(dangling) {
            Err(Error::DanglingEndpoint(id)) => assert_eq!(id.to_string(), "b"),
            r => panic!("unexpected {r:?}"),
        }
        let bad = "{\"nodes\": [\n{\"id\": 0},\n oops]}";
        match parse_node_link(bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            r => panic!("unexpected {r:?}"),
        }
        let looped = r#"{"nodes": [{"id": 1}], "links": [{"source": 1, "target": 1}]}"#;
        assert!(matches!(parse_node_link(looped), Err(Error::SelfLoop(_))));
    }

    #[test]
    fn edge_list_collapses_duplicates() {
        let g = parse_edge_list("# path\n0 1\n1 2\n0 1\n").unwrap();
        assert_eq!((g.n(), g.m()), (3, 2));
        let err = parse_edge_list("0 1\n1 2 3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn round_trips() {
        let pts = vec![
            Point::new(0.1, 0.2),
            Point::new(1.0 / 3.0, 0.7),
            Point::new(0.9, 0.123456789012345),
        ];
        let g = Graph::from_edges_with_coords(pts, [(0, 1), (1, 2)]).unwrap();
        let back = parse_node_link(&node_link_string(&g)).unwrap();
        assert_eq!(back, g);
        let iso = Graph::from_edges(4, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(parse_edge_list(&edge_list_string(&iso)).unwrap().edges(), iso.edges());
        assert_eq!(parse_edge_list(&edge_list_string(&iso)).unwrap().n(), 4);
    }

    #[test]
    fn csv_rows() {
        let mut buf = Vec::new();
        write_rows_to(&mut buf, &["a", "b"], &[]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a,b\n");
        let rows = vec![
            ResultRow::new().with("a", "x,y").with("b", 0.1),
            ResultRow::new().with("a", 3usize).with("b", Option::<f64>::None),
        ];
        let mut buf = Vec::new();
        write_rows_to(&mut buf, &["a", "b"], &rows).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "a,b\n\"x,y\",0.100000000000\n3,\n"
        );
        let bad = vec![rows[0].clone(), ResultRow::new().with("b", 1.0).with("a", 2.0)];
        assert!(matches!(
            write_rows_to(Vec::new(), &["a", "b"], &bad),
            Err(Error::SchemaMismatch { row: 1, .. })
        ));
    }

    #[test]
    fn real_formatting_keeps_precision() {
        for x in [1.0991, -2.2818, 1e-7, 123456.789, 0.75, 1.0 / 3.0] {
            let s = format_real(x);
            let back: f64 = s.parse().unwrap();
            assert!((back - x).abs() <= 1e-11 * x.abs(), "{x} -> {s}");
        }
        assert_eq!(format_real(5.4), "5.40000000000");
    }
}
