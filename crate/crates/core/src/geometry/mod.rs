//! Random point clouds in the unit square and their Delaunay triangulations.

mod delaunay;
pub mod predicates;

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use delaunay::{delaunay, delaunay_points, Triangulation};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    #[inline]
    pub fn dist2(self, other: Point) -> f64 {
        let (dx, dy) = (self.x - other.x, self.y - other.y);
        dx * dx + dy * dy
    }

    #[inline]
    pub fn dist(self, other: Point) -> f64 {
        self.dist2(other).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    /// Generation order; the index of a point is its vertex id.
    pub points: Vec<Point>,
    pub seed: u64,
}

/// `n` independent uniform points in the unit square.
pub fn random_point_cloud(n: usize, seed: u64) -> Result<PointCloud> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "point cloud needs at least one point".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..n)
        .map(|_| Point::new(rng.random::<f64>(), rng.random::<f64>()))
        .collect();
    Ok(PointCloud { points, seed })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CircleSide {
    Inside,
    On,
    Outside,
}

/// Where `d` lies relative to the circle through `a`, `b`, `c` (any orientation).
pub fn in_circumcircle(a: Point, b: Point, c: Point, d: Point) -> Result<CircleSide> {
    let (a, b) = match predicates::orient2d(a, b, c) {
        Ordering::Equal => return Err(Error::Collinear),
        Ordering::Greater => (a, b),
        Ordering::Less => (b, a),
    };
    Ok(match predicates::incircle(a, b, c, d) {
        Ordering::Greater => CircleSide::Inside,
        Ordering::Equal => CircleSide::On,
        Ordering::Less => CircleSide::Outside,
    })
}
