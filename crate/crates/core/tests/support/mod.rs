//! Brute-force oracles shared by the integration tests and the acceptance
//! harness.
#![allow(dead_code)]

use dualgraph::Graph;

pub fn graph(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Graph, dualgraph::Error> {
    Graph::from_edges(n, edges.into_iter().map(|(u, v)| (u as usize, v as usize)))
}

pub fn grid(r: u32, c: u32) -> Graph {
    let mut e = Vec::new();
    for i in 0..r {
        for j in 0..c {
            let v = i * c + j;
            if j + 1 < c {
                e.push((v, v + 1));
            }
            if i + 1 < r {
                e.push((v, v + c));
            }
        }
    }
    graph((r * c) as usize, e).unwrap()
}

pub fn complete(n: u32) -> Graph {
    graph(n as usize, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
}

pub fn cycle(n: u32) -> Graph {
    graph(n as usize, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
}

/// Exact determinant of the reduced Laplacian by fraction-free elimination.
pub fn bareiss_tree_count(g: &Graph) -> i128 {
    let m = g.n() - 1;
    if m == 0 {
        return 1;
    }
    let mut a = vec![vec![0i128; m]; m];
    for &(u, v) in g.edges() {
        let (u, v) = (u as usize, v as usize);
        for (x, y) in [(u, v), (v, u)] {
            if x >= 1 {
                a[x - 1][x - 1] += 1;
                if y >= 1 {
                    a[x - 1][y - 1] -= 1;
                }
            }
        }
    }
    let mut prev = 1i128;
    let mut sign = 1i128;
    for k in 0..m {
        if a[k][k] == 0 {
            match (k + 1..m).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..m {
            for j in k + 1..m {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[m - 1][m - 1]
}

/// Counts (n-1)-edge subsets that form a forest, i.e. spanning trees.
pub fn brute_force_count(n: usize, edges: &[(u32, u32)]) -> u64 {
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    fn rec(n: usize, edges: &[(u32, u32)], start: usize, chosen: &mut Vec<usize>) -> u64 {
        if chosen.len() == n - 1 {
            let mut p: Vec<usize> = (0..n).collect();
            for &e in chosen.iter() {
                let (a, b) = (find(&mut p, edges[e].0 as usize), find(&mut p, edges[e].1 as usize));
                if a == b {
                    return 0;
                }
                p[a] = b;
            }
            return 1;
        }
        let need = n - 1 - chosen.len();
        let mut total = 0;
        for e in start..=edges.len().saturating_sub(need) {
            if e >= edges.len() {
                break;
            }
            chosen.push(e);
            total += rec(n, edges, e + 1, chosen);
            chosen.pop();
        }
        total
    }
    if n <= 1 {
        return 1;
    }
    rec(n, edges, 0, &mut Vec::new())
}

/// Whether some ordering of `inner` gives a path `a - inner... - b`.
fn path_through(adj: &[[bool; 8]; 8], a: usize, b: usize, inner: &mut Vec<usize>, at: usize) -> bool {
    if inner.is_empty() {
        return adj[a][b];
    }
    for i in 0..inner.len() {
        let v = inner[i];
        if adj[at][v] {
            inner.swap_remove(i);
            let ok = path_through(adj, v, b, inner, v);
            inner.push(v);
            let last = inner.len() - 1;
            inner.swap(i, last);
            if ok {
                return true;
            }
        }
    }
    false
}

/// Tries every assignment of the free vertices to branch pairs (or to none).
fn paths_exist(adj: &[[bool; 8]; 8], pairs: &[(usize, usize)], free: &[usize]) -> bool {
    let slots = pairs.len() + 1;
    let total = slots.pow(free.len() as u32);
    for mut code in 0..total {
        let mut groups = vec![Vec::new(); pairs.len()];
        for &v in free {
            let s = code % slots;
            code /= slots;
            if s > 0 {
                groups[s - 1].push(v);
            }
        }
        if pairs.iter().zip(groups.iter_mut()).all(|(&(a, b), grp)| {
            let mut g = grp.clone();
            path_through(adj, a, b, &mut g, a)
        }) {
            return true;
        }
    }
    false
}

pub fn brute_force_nonplanar(n: usize, edges: &[(u32, u32)]) -> bool {
    let mut adj = [[false; 8]; 8];
    for &(u, v) in edges {
        adj[u as usize][v as usize] = true;
        adj[v as usize][u as usize] = true;
    }
    let subsets = |k: usize| -> Vec<Vec<usize>> {
        (0u32..1 << n)
            .filter(|m| m.count_ones() as usize == k)
            .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
            .collect()
    };
    for b in subsets(5) {
        let free: Vec<usize> = (0..n).filter(|v| !b.contains(v)).collect();
        let pairs: Vec<(usize, usize)> = (0..5)
            .flat_map(|i| (i + 1..5).map(move |j| (i, j)))
            .map(|(i, j)| (b[i], b[j]))
            .collect();
        if paths_exist(&adj, &pairs, &free) {
            return true;
        }
    }
    for b in subsets(6) {
        let free: Vec<usize> = (0..n).filter(|v| !b.contains(v)).collect();
        // sides containing b[0]
        for side in subsets_of(&b[1..], 2) {
            let left: Vec<usize> = std::iter::once(b[0]).chain(side).collect();
            let right: Vec<usize> = b.iter().copied().filter(|v| !left.contains(v)).collect();
            let pairs: Vec<(usize, usize)> = left
                .iter()
                .flat_map(|&a| right.iter().map(move |&c| (a, c)))
                .collect();
            if paths_exist(&adj, &pairs, &free) {
                return true;
            }
        }
    }
    false
}

fn subsets_of(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << items.len())
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| {
            (0..items.len())
                .filter(|&i| m >> i & 1 == 1)
                .map(|i| items[i])
                .collect()
        })
        .collect()
}

pub const ROOT: u32 = u32::MAX;

fn prufer_decode(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf, s));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Calls `f` on every labeled tree with `n` vertices.
pub fn for_each_tree(n: usize, mut f: impl FnMut(&[(usize, usize)])) {
    if n == 2 {
        f(&[(0, 1)]);
        return;
    }
    let len = n - 2;
    let mut seq = vec![0usize; len];
    loop {
        f(&prufer_decode(&seq, n));
        let mut i = 0;
        while i < len && seq[i] == n - 1 {
            seq[i] = 0;
            i += 1;
        }
        if i == len {
            return;
        }
        seq[i] += 1;
    }
}

pub fn parents(n: usize, edges: &[(usize, usize)], root: usize) -> Vec<u32> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut parent = vec![ROOT; n];
    let mut seen = vec![false; n];
    let mut stack = vec![root];
    seen[root] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = v as u32;
                stack.push(w);
            }
        }
    }
    parent
}

pub fn component_sizes(n: usize, edges: &[(usize, usize)], removed: &[usize]) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, &(u, v)) in edges.iter().enumerate() {
        if !removed.contains(&i) {
            let (a, b) = (find(&mut p, u), find(&mut p, v));
            p[a] = b;
        }
    }
    let mut sizes = vec![0usize; n];
    for v in 0..n {
        sizes[find(&mut p, v)] += 1;
    }
    sizes.into_iter().filter(|&s| s > 0).collect()
}

/// Tries every set of `k - 1` edges; sizes must lie in `[lo, hi]`.
pub fn brute_force(n: usize, edges: &[(usize, usize)], k: usize, lo: usize, hi: usize) -> bool {
    fn rec(
        n: usize,
        edges: &[(usize, usize)],
        k: usize,
        bounds: (usize, usize),
        start: usize,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if chosen.len() == k - 1 {
            return component_sizes(n, edges, chosen)
                .iter()
                .all(|&s| (bounds.0..=bounds.1).contains(&s));
        }
        for e in start..edges.len() {
            chosen.push(e);
            let ok = rec(n, edges, k, bounds, e + 1, chosen);
            chosen.pop();
            if ok {
                return true;
            }
        }
        false
    }
    rec(n, edges, k, (lo, hi), 0, &mut Vec::new())
}

