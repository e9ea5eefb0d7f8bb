//! Undirected simple graphs with stable, totally ordered vertex ids.
//!
//! Vertices are stored in sorted id order and addressed internally by their
//! position in that order (`u32` indices). Adjacency is kept in compressed
//! sparse row form with every neighbor list sorted, so any walk over the
//! graph visits vertices in a reproducible order.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;

/// Opaque vertex identifier. Integers order before strings.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VertexId {
    Int(i64),
    Str(String),
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexId::Int(i) => write!(f, "{i}"),
            VertexId::Str(s) => f.write_str(s),
        }
    }
}

impl From<i64> for VertexId {
    fn from(v: i64) -> Self {
        VertexId::Int(v)
    }
}

impl From<usize> for VertexId {
    fn from(v: usize) -> Self {
        VertexId::Int(v as i64)
    }
}

impl From<&str> for VertexId {
    fn from(v: &str) -> Self {
        VertexId::Str(v.to_string())
    }
}

impl VertexId {
    /// Parses a token as an integer id when possible, otherwise keeps it as a string.
    pub fn parse(token: &str) -> Self {
        token
            .parse::<i64>()
            .map(VertexId::Int)
            .unwrap_or_else(|_| VertexId::Str(token.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    ids: Vec<VertexId>,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    edges: Vec<(u32, u32)>,
    coords: Option<Vec<Point>>,
}

impl Graph {
    /// Graph on vertices `0..n` (integer ids). Duplicate edges are collapsed;
    /// self-loops and out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut list = Vec::new();
        for (u, v) in edges {
            if u >= n {
                return Err(Error::DanglingEndpoint(u.into()));
            }
            if v >= n {
                return Err(Error::DanglingEndpoint(v.into()));
            }
            if u == v {
                return Err(Error::SelfLoop(u.into()));
            }
            list.push((u.min(v) as u32, u.max(v) as u32));
        }
        let ids = (0..n).map(VertexId::from).collect();
        Ok(Self::from_sorted_parts(ids, list, None))
    }

    /// Same as [`Graph::from_edges`] with one coordinate per vertex.
    pub fn from_edges_with_coords<I>(coords: Vec<Point>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let g = Self::from_edges(coords.len(), edges)?;
        Ok(g.with_coords(coords))
    }

    /// Builds a graph from arbitrary ids. `ids` need not be sorted but must be
    /// unique; `coords`, when given, must hold an entry for every vertex.
    pub fn from_ids(
        ids: Vec<VertexId>,
        edges: &[(VertexId, VertexId)],
        coords: Option<HashMap<VertexId, Point>>,
    ) -> Result<Self> {
        let mut sorted = ids;
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVertex(w[0].clone()));
        }
        let index = |id: &VertexId| {
            sorted
                .binary_search(id)
                .map(|i| i as u32)
                .map_err(|_| Error::DanglingEndpoint(id.clone()))
        };
        let mut list = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            let (u, v) = (index(a)?, index(b)?);
            if u == v {
                return Err(Error::SelfLoop(a.clone()));
            }
            list.push((u.min(v), u.max(v)));
        }
        let coords = match coords {
            Some(map) => {
                let mut out = Vec::with_capacity(sorted.len());
                for id in &sorted {
                    match map.get(id) {
                        Some(p) => out.push(*p),
                        None => {
                            return Err(Error::InvalidArgument(format!(
                                "vertex {id} has no coordinates"
                            )))
                        }
                    }
                }
                Some(out)
            }
            None => None,
        };
        Ok(Self::from_sorted_parts(sorted, list, coords))
    }

    /// `ids` sorted and unique, edges normalized to `u < v` (may repeat).
    pub(crate) fn from_sorted_parts(
        ids: Vec<VertexId>,
        mut edges: Vec<(u32, u32)>,
        coords: Option<Vec<Point>>,
    ) -> Self {
        debug_assert!(ids.windows(2).all(|w| w[0] < w[1]));
        edges.sort_unstable();
        edges.dedup();
        let n = ids.len();
        let mut degree = vec![0usize; n];
        for &(u, v) in &edges {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0u32; offsets[n]];
        for &(u, v) in &edges {
            targets[fill[u as usize]] = v;
            fill[u as usize] += 1;
            targets[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        for i in 0..n {
            targets[offsets[i]..offsets[i + 1]].sort_unstable();
        }
        Graph {
            ids,
            offsets,
            targets,
            edges,
            coords,
        }
    }

    pub fn with_coords(mut self, coords: Vec<Point>) -> Self {
        assert_eq!(coords.len(), self.n(), "one coordinate per vertex");
        self.coords = Some(coords);
        self
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn id(&self, v: u32) -> &VertexId {
        &self.ids[v as usize]
    }

    pub fn index_of(&self, id: &VertexId) -> Option<u32> {
        self.ids.binary_search(id).ok().map(|i| i as u32)
    }

    /// Sorted neighbor indices of `v`.
    #[inline]
    pub fn neighbors(&self, v: u32) -> &[u32] {
        let v = v as usize;
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    /// Position of `v`'s first neighbor in the flat adjacency array, so
    /// `(v, neighbors(v)[k])` can be addressed as `offset(v) + k`.
    pub fn offset(&self, v: u32) -> usize {
        self.offsets[v as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Edges as `(u, v)` index pairs with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn coords(&self) -> Option<&[Point]> {
        self.coords.as_deref()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n() as u32).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Subgraph induced by `vertices`; ids and coordinates carry over.
    pub fn induced_subgraph(&self, vertices: &[u32]) -> Graph {
        let mut keep: Vec<u32> = vertices.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut remap = vec![u32::MAX; self.n()];
        for (new, &old) in keep.iter().enumerate() {
            remap[old as usize] = new as u32;
        }
        let ids = keep.iter().map(|&v| self.ids[v as usize].clone()).collect();
        let edges = self
            .edges
            .iter()
            .filter_map(|&(u, v)| {
                let (a, b) = (remap[u as usize], remap[v as usize]);
                (a != u32::MAX && b != u32::MAX).then_some((a, b))
            })
            .collect();
        let coords = self
            .coords
            .as_ref()
            .map(|c| keep.iter().map(|&v| c[v as usize]).collect());
        Graph::from_sorted_parts(ids, edges, coords)
    }

    /// Same vertex set and coordinates with a different edge set.
    pub fn with_edges(&self, edges: Vec<(u32, u32)>) -> Graph {
        let edges = edges
            .into_iter()
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        Graph::from_sorted_parts(self.ids.clone(), edges, self.coords.clone())
    }
}

/// Average, median and maximum vertex degree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegreeStats {
    pub average: f64,
    pub median: f64,
    pub maximum: f64,
}

pub fn degree_stats(g: &Graph) -> Result<DegreeStats> {
    let n = g.n();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut degrees: Vec<usize> = (0..n as u32).map(|v| g.degree(v)).collect();
    degrees.sort_unstable();
    let median = if n % 2 == 1 {
        degrees[n / 2] as f64
    } else {
        (degrees[n / 2 - 1] + degrees[n / 2]) as f64 / 2.0
    };
    Ok(DegreeStats {
        average: 2.0 * g.m() as f64 / n as f64,
        median,
        maximum: degrees[n - 1] as f64,
    })
}

/// Connected components, largest first; equal sizes ordered by smallest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentDecomposition {
    /// Vertex indices of each component, sorted ascending.
    pub components: Vec<Vec<u32>>,
}

impl ComponentDecomposition {
    pub fn sizes(&self) -> Vec<usize> {
        self.components.iter().map(Vec::len).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components.len() == 1
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

pub fn connected_components(g: &Graph) -> ComponentDecomposition {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    let mut stack = Vec::new();
    for start in 0..n as u32 {
        if seen[start as usize] {
            continue;
        }
        seen[start as usize] = true;
        stack.push(start);
        let mut comp = Vec::new();
        while let Some(v) = stack.pop() {
            comp.push(v);
            for &w in g.neighbors(v) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        components.push(comp);
    }
    // Components were discovered in order of their smallest member, so a
    // stable sort by size keeps the tie-break.
    components.sort_by_key(|c| std::cmp::Reverse(c.len()));
    ComponentDecomposition { components }
}

pub fn is_connected(g: &Graph) -> bool {
    g.n() > 0 && connected_components(g).is_connected()
}

pub fn largest_component(g: &Graph) -> Result<Graph> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let comps = connected_components(g);
    if comps.is_connected() {
        return Ok(g.clone());
    }
    Ok(g.induced_subgraph(&comps.components[0]))
}
