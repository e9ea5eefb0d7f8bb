//! Uniform spanning trees via loop-erased random walks (Wilson's algorithm).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

pub(crate) const NO_PARENT: u32 = u32::MAX;

/// Generator for trial `index` under `seed`: one ChaCha stream per trial, so
/// every trial is reproducible on its own, independent of scheduling.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Reusable buffers for repeated sampling on one graph.
#[derive(Debug, Clone, Default)]
pub struct WilsonBuffers {
    pub(crate) parent: Vec<u32>,
    in_tree: Vec<bool>,
}

impl WilsonBuffers {
    pub fn new(n: usize) -> Self {
        WilsonBuffers {
            parent: vec![NO_PARENT; n],
            in_tree: vec![false; n],
        }
    }

    /// Parent pointers of the last sampled tree; the root maps to `u32::MAX`.
    pub fn parents(&self) -> &[u32] {
        &self.parent
    }
}

/// Samples a uniform spanning tree of the connected graph `g`, rooted at
/// `root`, into `buf.parent`. Walks start from vertices in index order.
pub(crate) fn sample_parents<R: Rng>(g: &Graph, root: u32, rng: &mut R, buf: &mut WilsonBuffers) {
    let n = g.n();
    buf.parent.clear();
    buf.parent.resize(n, NO_PARENT);
    buf.in_tree.clear();
    buf.in_tree.resize(n, false);
    buf.in_tree[root as usize] = true;
    let parent = &mut buf.parent;
    let in_tree = &mut buf.in_tree;
    for start in 0..n as u32 {
        let mut u = start;
        // Overwriting the successor on revisits erases loops implicitly.
        while !in_tree[u as usize] {
            let nbrs = g.neighbors(u);
            let next = nbrs[rng.random_range(0..nbrs.len())];
            parent[u as usize] = next;
            u = next;
        }
        u = start;
        while !in_tree[u as usize] {
            in_tree[u as usize] = true;
            u = parent[u as usize];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parents_form_a_tree_towards_root() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (1, 3)]).unwrap();
        let mut buf = WilsonBuffers::new(5);
        let mut rng = trial_rng(9, 0);
        sample_parents(&g, 2, &mut rng, &mut buf);
        assert_eq!(buf.parents()[2], NO_PARENT);
        for v in 0..5u32 {
            let mut u = v;
            let mut hops = 0;
            while u != 2 {
                let p = buf.parents()[u as usize];
                assert!(g.has_edge(u, p));
                u = p;
                hops += 1;
                assert!(hops < 5);
            }
        }
    }

    #[test]
    fn streams_differ() {
        let a: u64 = trial_rng(1, 0).random();
        let b: u64 = trial_rng(1, 1).random();
        let c: u64 = trial_rng(1, 0).random();
        assert_ne!(a, b);
        assert_eq!(a, c);
    }
}
