//! Spanning-tree counting (matrix-tree theorem, in log space) and uniform
//! spanning-tree sampling.

mod laplacian;
mod wilson;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{connected_components, Graph};

pub use laplacian::{log_det_dense, log_det_sparse, DENSE_LIMIT};
pub use wilson::{trial_rng, WilsonBuffers};
pub(crate) use wilson::{sample_parents, NO_PARENT};

/// Edge subset of a host graph forming a spanning tree, as sorted `(u, v)`
/// index pairs with `u < v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpanningTree {
    n: usize,
    edges: Vec<(u32, u32)>,
}

impl SpanningTree {
    /// Validates that `edges` is a spanning tree of `host`.
    pub fn new(host: &Graph, edges: Vec<(u32, u32)>) -> Result<Self> {
        let n = host.n();
        let mut edges: Vec<(u32, u32)> = edges
            .into_iter()
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        if n == 0 || edges.len() != n - 1 {
            return Err(Error::InvalidArgument(format!(
                "a spanning tree on {n} vertices needs {} edges, got {}",
                n.saturating_sub(1),
                edges.len()
            )));
        }
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| !host.has_edge(u, v)) {
            return Err(Error::InvalidArgument(format!(
                "edge ({}, {}) is not in the host graph",
                host.id(u),
                host.id(v)
            )));
        }
        let tree = SpanningTree { n, edges };
        if !tree.is_connected_acyclic() {
            return Err(Error::InvalidArgument("edge set contains a cycle".into()));
        }
        Ok(tree)
    }

    pub(crate) fn from_parents(parents: &[u32]) -> Self {
        let mut edges: Vec<(u32, u32)> = parents
            .iter()
            .enumerate()
            .filter(|&(_, &p)| p != NO_PARENT)
            .map(|(v, &p)| ((v as u32).min(p), (v as u32).max(p)))
            .collect();
        edges.sort_unstable();
        SpanningTree {
            n: parents.len(),
            edges,
        }
    }

    /// Tree on vertices `0..n` without a host graph check; used by tree
    /// enumerations and tests.
    pub fn from_edges_unchecked(n: usize, mut edges: Vec<(u32, u32)>) -> Self {
        for e in &mut edges {
            *e = (e.0.min(e.1), e.0.max(e.1));
        }
        edges.sort_unstable();
        SpanningTree { n, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn is_connected_acyclic(&self) -> bool {
        if self.n == 0 || self.edges.len() + 1 != self.n {
            return false;
        }
        let mut dsu: Vec<u32> = (0..self.n as u32).collect();
        fn find(d: &mut [u32], mut x: u32) -> u32 {
            while d[x as usize] != x {
                d[x as usize] = d[d[x as usize] as usize];
                x = d[x as usize];
            }
            x
        }
        for &(u, v) in &self.edges {
            if u as usize >= self.n || v as usize >= self.n {
                return false;
            }
            let (a, b) = (find(&mut dsu, u), find(&mut dsu, v));
            if a == b {
                return false;
            }
            dsu[a as usize] = b;
        }
        true
    }

    /// Adjacency lists of the tree.
    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }

    /// Parent pointers with the tree rooted at `root` (root maps to `u32::MAX`).
    pub fn parents(&self, root: u32) -> Vec<u32> {
        let adj = self.adjacency();
        let mut parent = vec![NO_PARENT; self.n];
        let mut seen = vec![false; self.n];
        let mut stack = vec![root];
        seen[root as usize] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v as usize] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    parent[w as usize] = v;
                    stack.push(w);
                }
            }
        }
        parent
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpanningProfile {
    /// Natural log of the number of spanning trees.
    pub ln_count: f64,
    /// `ln_count / n`.
    pub st_constant: f64,
}

fn require_connected(g: &Graph) -> Result<()> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    if !connected_components(g).is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(())
}

/// `ln` of the number of spanning trees of a connected graph.
pub fn log_spanning_tree_count(g: &Graph) -> Result<f64> {
    require_connected(g)?;
    if laplacian::use_dense(g) {
        log_det_dense(g)
    } else {
        log_det_sparse(g)
    }
}

pub fn spanning_tree_constant(g: &Graph) -> Result<f64> {
    Ok(log_spanning_tree_count(g)? / g.n() as f64)
}

pub fn spanning_profile(g: &Graph) -> Result<SpanningProfile> {
    let ln_count = log_spanning_tree_count(g)?;
    Ok(SpanningProfile {
        ln_count,
        st_constant: ln_count / g.n() as f64,
    })
}

/// Uniform spanning tree of a connected graph, rooted at vertex 0.
pub fn wilson_ust(g: &Graph, seed: u64) -> Result<SpanningTree> {
    wilson_ust_rooted(g, 0, seed)
}

/// Uniform spanning tree with the walks' absorbing root at `root`.
pub fn wilson_ust_rooted(g: &Graph, root: u32, seed: u64) -> Result<SpanningTree> {
    require_connected(g)?;
    if root as usize >= g.n() {
        return Err(Error::InvalidArgument(format!("root {root} out of range")));
    }
    let mut buf = WilsonBuffers::new(g.n());
    let mut rng = trial_rng(seed, 0);
    sample_parents(g, root, &mut rng, &mut buf);
    Ok(SpanningTree::from_parents(buf.parents()))
}

/// Calls `visit` on every spanning tree of `g` (edges as indices into
/// `g.edges()`), stopping early once `limit` trees have been visited.
/// Returns the number of trees visited.
pub fn for_each_spanning_tree<F>(g: &Graph, limit: u64, mut visit: F) -> u64
where
    F: FnMut(&[usize]),
{
    let n = g.n();
    if n == 0 {
        return 0;
    }
    if n == 1 {
        visit(&[]);
        return 1;
    }
    let edges = g.edges();
    let mut state = Enumeration {
        n,
        edges,
        chosen: Vec::with_capacity(n - 1),
        dsu: (0..n as u32).collect(),
        count: 0,
        limit,
    };
    state.recurse(0, &mut visit);
    state.count
}

struct Enumeration<'a> {
    n: usize,
    edges: &'a [(u32, u32)],
    chosen: Vec<usize>,
    dsu: Vec<u32>,
    count: u64,
    limit: u64,
}

impl Enumeration<'_> {
    fn find(dsu: &[u32], mut x: u32) -> u32 {
        while dsu[x as usize] != x {
            x = dsu[x as usize];
        }
        x
    }

    /// Whether chosen edges plus edges `from..` can still connect every vertex.
    fn completable(&self, from: usize) -> bool {
        let mut d = self.dsu.clone();
        let mut comps = self.n - self.chosen.len();
        for &(u, v) in &self.edges[from..] {
            let (a, b) = (Self::find(&d, u), Self::find(&d, v));
            if a != b {
                d[a as usize] = b;
                comps -= 1;
                if comps == 1 {
                    return true;
                }
            }
        }
        comps == 1
    }

    fn recurse<F: FnMut(&[usize])>(&mut self, at: usize, visit: &mut F) {
        if self.count >= self.limit {
            return;
        }
        if self.chosen.len() == self.n - 1 {
            self.count += 1;
            visit(&self.chosen);
            return;
        }
        if at == self.edges.len() {
            return;
        }
        let (u, v) = self.edges[at];
        let (a, b) = (Self::find(&self.dsu, u), Self::find(&self.dsu, v));
        if a != b {
            // union without path compression so it can be undone
            self.dsu[a as usize] = b;
            self.chosen.push(at);
            self.recurse(at + 1, visit);
            self.chosen.pop();
            self.dsu[a as usize] = a;
        }
        if self.completable(at + 1) {
            self.recurse(at + 1, visit);
        }
    }
}
