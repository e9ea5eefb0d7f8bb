//! Bowyer–Watson incremental Delaunay triangulation.
//!
//! The unbounded region is covered by ghost triangles that share a single
//! vertex at infinity, one per convex hull edge. A ghost triangle `(a, b, ∞)`
//! conflicts with `p` when `p` lies strictly left of `a → b` or on the open
//! segment `ab`, which is the limit of the in-circle test as the third vertex
//! recedes to infinity. This removes the need for a finite super-triangle and
//! keeps the output exactly Delaunay, hull included.

use std::cmp::Ordering;

use super::predicates::{incircle, orient2d};
use super::{Point, PointCloud};
use crate::error::{Error, Result};
use crate::graph::Graph;

const INF: u32 = u32::MAX;
const NONE: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub struct Triangulation {
    pub graph: Graph,
    /// Counterclockwise vertex triples.
    pub triangles: Vec<[u32; 3]>,
}

pub fn delaunay(cloud: &PointCloud) -> Result<Triangulation> {
    delaunay_points(&cloud.points)
}

/// Delaunay triangulation of `points`; vertex `i` of the graph is `points[i]`.
pub fn delaunay_points(points: &[Point]) -> Result<Triangulation> {
    if points.len() < 3 {
        return Err(Error::InvalidArgument(
            "triangulation needs at least three points".into(),
        ));
    }
    if let Some(p) = points.iter().find(|p| !p.x.is_finite() || !p.y.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite point {p:?}")));
    }
    check_duplicates(points)?;
    let mut mesh = Mesh::new(points)?;
    let (i0, i1, i2) = mesh.seed;
    for v in 0..points.len() as u32 {
        if v != i0 && v != i1 && v != i2 {
            mesh.insert(v);
        }
    }
    Ok(mesh.finish())
}

fn check_duplicates(points: &[Point]) -> Result<()> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        points[a]
            .x
            .total_cmp(&points[b].x)
            .then(points[a].y.total_cmp(&points[b].y))
            .then(a.cmp(&b))
    });
    for w in order.windows(2) {
        if points[w[0]] == points[w[1]] {
            return Err(Error::DuplicatePoints(w[0].min(w[1]), w[0].max(w[1])));
        }
    }
    Ok(())
}

struct Mesh<'a> {
    pts: &'a [Point],
    tris: Vec<[u32; 3]>,
    /// `nbr[t][i]` is the triangle across the edge opposite `tris[t][i]`.
    nbr: Vec<[u32; 3]>,
    alive: Vec<bool>,
    free: Vec<u32>,
    last: u32,
    seed: (u32, u32, u32),
    // scratch
    stamp: Vec<u32>,
    epoch: u32,
    start_at: Vec<u32>,
    end_at: Vec<u32>,
}

impl<'a> Mesh<'a> {
    fn new(pts: &'a [Point]) -> Result<Self> {
        let (i0, i1) = (0u32, 1u32);
        let i2 = (2..pts.len())
            .find(|&k| orient2d(pts[0], pts[1], pts[k]) != Ordering::Equal)
            .ok_or(Error::Collinear)? as u32;
        let (a, b, c) = if orient2d(pts[0], pts[1], pts[i2 as usize]) == Ordering::Greater {
            (i0, i1, i2)
        } else {
            (i1, i0, i2)
        };
        let n = pts.len();
        let mut mesh = Mesh {
            pts,
            tris: Vec::with_capacity(2 * n + 8),
            nbr: Vec::with_capacity(2 * n + 8),
            alive: Vec::with_capacity(2 * n + 8),
            free: Vec::new(),
            last: 0,
            seed: (i0, i1, i2),
            stamp: Vec::new(),
            epoch: 0,
            start_at: vec![NONE; n + 1],
            end_at: vec![NONE; n + 1],
        };
        // 0 = solid (a, b, c); ghosts over each hull edge, oriented so the
        // solid side is on the right.
        mesh.tris.push([a, b, c]);
        mesh.tris.push([b, a, INF]); // 1: across edge ab (opposite c)
        mesh.tris.push([c, b, INF]); // 2: across edge bc (opposite a)
        mesh.tris.push([a, c, INF]); // 3: across edge ca (opposite b)
        mesh.nbr.push([2, 3, 1]);
        // ghost [b, a, INF]: opposite b is edge (a, INF) shared with ghost 3,
        // opposite a is edge (INF, b) shared with ghost 2.
        mesh.nbr.push([3, 2, 0]);
        mesh.nbr.push([1, 3, 0]);
        mesh.nbr.push([2, 1, 0]);
        mesh.alive.extend([true; 4]);
        mesh.stamp.resize(4, 0);
        Ok(mesh)
    }

    #[inline]
    fn is_ghost(&self, t: u32) -> bool {
        self.tris[t as usize][2] == INF
    }

    fn conflicts(&self, t: u32, p: Point) -> bool {
        let [a, b, c] = self.tris[t as usize];
        if c == INF {
            let (pa, pb) = (self.pts[a as usize], self.pts[b as usize]);
            match orient2d(pa, pb, p) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => {
                    // open segment test along the dominant axis
                    let along = if (pa.x - pb.x).abs() >= (pa.y - pb.y).abs() {
                        (p.x - pa.x) * (p.x - pb.x)
                    } else {
                        (p.y - pa.y) * (p.y - pb.y)
                    };
                    along < 0.0
                }
            }
        } else {
            incircle(
                self.pts[a as usize],
                self.pts[b as usize],
                self.pts[c as usize],
                p,
            ) == Ordering::Greater
        }
    }

    /// Visibility walk over solid triangles towards `p`; returns a triangle
    /// in conflict with `p`.
    fn locate(&self, p: Point) -> u32 {
        let mut t = self.last;
        if !self.alive[t as usize] || self.is_ghost(t) {
            t = (0..self.tris.len() as u32)
                .find(|&t| self.alive[t as usize] && !self.is_ghost(t))
                .expect("mesh has a solid triangle");
        }
        let limit = 4 * self.tris.len() + 16;
        let mut step = 0usize;
        'walk: while step < limit {
            let tri = self.tris[t as usize];
            for k in 0..3 {
                let i = (k + step) % 3;
                let u = tri[(i + 1) % 3] as usize;
                let w = tri[(i + 2) % 3] as usize;
                if orient2d(self.pts[u], self.pts[w], p) == Ordering::Less {
                    let next = self.nbr[t as usize][i];
                    if self.is_ghost(next) {
                        return next;
                    }
                    t = next;
                    step += 1;
                    continue 'walk;
                }
            }
            return t;
        }
        // Walks terminate on Delaunay meshes; the scan is a safety net.
        (0..self.tris.len() as u32)
            .find(|&t| self.alive[t as usize] && self.conflicts(t, p))
            .expect("some triangle conflicts with a new point")
    }

    fn insert(&mut self, v: u32) {
        let p = self.pts[v as usize];
        let start = self.locate(p);

        self.epoch += 1;
        let epoch = self.epoch;
        let mut cavity = vec![start];
        self.stamp[start as usize] = epoch;
        let mut boundary: Vec<(u32, u32, u32, usize)> = Vec::new();
        let mut i = 0;
        while i < cavity.len() {
            let t = cavity[i];
            i += 1;
            for k in 0..3 {
                let nb = self.nbr[t as usize][k];
                if self.stamp[nb as usize] == epoch {
                    continue;
                }
                if self.conflicts(nb, p) {
                    self.stamp[nb as usize] = epoch;
                    cavity.push(nb);
                } else {
                    let tri = self.tris[t as usize];
                    let back = self.nbr[nb as usize]
                        .iter()
                        .position(|&x| x == t)
                        .expect("adjacency is symmetric");
                    boundary.push((tri[(k + 1) % 3], tri[(k + 2) % 3], nb, back));
                }
            }
        }
        for &t in &cavity {
            self.alive[t as usize] = false;
            self.free.push(t);
        }

        let slot = |x: u32, n: usize| if x == INF { n } else { x as usize };
        let n = self.pts.len();
        let mut created = Vec::with_capacity(boundary.len());
        for &(u, w, outer, back) in &boundary {
            // Keep the infinite vertex last so ghosts stay recognizable.
            let tri = if u == INF {
                [w, v, INF]
            } else if w == INF {
                [v, u, INF]
            } else {
                [v, u, w]
            };
            let t = self.alloc(tri);
            // index of the vertex opposite the boundary edge is the one == v
            let opp_v = tri.iter().position(|&x| x == v).unwrap();
            self.nbr[t as usize] = [NONE; 3];
            self.nbr[t as usize][opp_v] = outer;
            self.nbr[outer as usize][back] = t;
            self.start_at[slot(u, n)] = t;
            self.end_at[slot(w, n)] = t;
            created.push((t, u, w));
        }
        for &(t, u, w) in &created {
            let tri = self.tris[t as usize];
            // edge (w, v): neighbor is the new triangle whose boundary edge starts at w
            let across_wv = self.start_at[slot(w, n)];
            // edge (v, u): neighbor is the new triangle whose boundary edge ends at u
            let across_vu = self.end_at[slot(u, n)];
            let pos_u = tri.iter().position(|&x| x == u).unwrap();
            let pos_w = tri.iter().position(|&x| x == w).unwrap();
            self.nbr[t as usize][pos_u] = across_wv;
            self.nbr[t as usize][pos_w] = across_vu;
            if !self.is_ghost(t) {
                self.last = t;
            }
        }
    }

    fn alloc(&mut self, tri: [u32; 3]) -> u32 {
        if let Some(t) = self.free.pop() {
            self.tris[t as usize] = tri;
            self.alive[t as usize] = true;
            t
        } else {
            self.tris.push(tri);
            self.nbr.push([NONE; 3]);
            self.alive.push(true);
            self.stamp.push(0);
            (self.tris.len() - 1) as u32
        }
    }

    fn finish(self) -> Triangulation {
        let mut triangles = Vec::new();
        let mut edges = Vec::new();
        for (t, tri) in self.tris.iter().enumerate() {
            if !self.alive[t] || tri[2] == INF {
                continue;
            }
            triangles.push(*tri);
            for k in 0..3 {
                let (u, w) = (tri[k], tri[(k + 1) % 3]);
                edges.push((u.min(w) as usize, u.max(w) as usize));
            }
        }
        triangles.sort_unstable();
        let graph = Graph::from_edges_with_coords(self.pts.to_vec(), edges)
            .expect("triangulation edges are valid");
        Triangulation { graph, triangles }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::random_point_cloud;

    #[test]
    fn single_triangle() {
        let pts = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
        ];
        let t = delaunay_points(&pts).unwrap();
        assert_eq!(t.triangles.len(), 1);
        assert_eq!(t.graph.m(), 3);
    }

    #[test]
    fn square_with_center() {
        let pts = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
            Point::new(0.5, 0.5),
        ];
        let t = delaunay_points(&pts).unwrap();
        assert_eq!(t.triangles.len(), 4);
        assert_eq!(t.graph.m(), 8);
    }

    #[test]
    fn collinear_and_duplicates_rejected() {
        let line: Vec<_> = (0..5).map(|i| Point::new(i as f64, i as f64)).collect();
        assert!(matches!(delaunay_points(&line), Err(Error::Collinear)));
        let dup = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.3, 0.9),
            Point::new(1.0, 0.0),
        ];
        assert!(matches!(
            delaunay_points(&dup),
            Err(Error::DuplicatePoints(1, 3))
        ));
    }

    #[test]
    fn leading_collinear_points_handled() {
        // first three points collinear, hull has collinear vertices
        let pts = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(3.0, 0.0),
            Point::new(1.5, 1.0),
            Point::new(1.5, -1.0),
        ];
        let t = delaunay_points(&pts).unwrap();
        // hull (0,0), (1.5,-1), (3,0), (1.5,1); edges = 3n - 3 - h
        assert_eq!(t.graph.m(), 11);
    }

    #[test]
    fn grid_points_cocircular() {
        let mut pts = Vec::new();
        for i in 0..6 {
            for j in 0..6 {
                pts.push(Point::new(i as f64 / 5.0, j as f64 / 5.0));
            }
        }
        let t = delaunay_points(&pts).unwrap();
        // all 20 boundary points lie on the hull: 3*36 - 3 - 20
        assert_eq!(t.graph.m(), 85);
        assert_eq!(t.triangles.len(), 2 * 36 - 2 - 20);
    }

    #[test]
    fn random_cloud_edge_count_bound() {
        let cloud = random_point_cloud(500, 11).unwrap();
        let t = delaunay(&cloud).unwrap();
        assert!(t.graph.m() <= 3 * 500 - 6);
        assert!(crate::graph::is_connected(&t.graph));
    }
}
