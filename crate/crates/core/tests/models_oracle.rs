//! Delaunay output against brute-force geometry, and statistical properties
//! of the model stages.

use dualgraph::geometry::{delaunay, random_point_cloud, Point};
use dualgraph::models::{apply_stages, build_model, model_catalog, ModelSpec, Stage};
use dualgraph::planarity::check_planar;
use dualgraph::{connected_components, Graph};

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Convex hull, counterclockwise, by the monotone chain.
fn hull(points: &[Point]) -> Vec<Point> {
    let mut p = points.to_vec();
    p.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    let chain = |seq: &mut dyn Iterator<Item = Point>| {
        let mut h: Vec<Point> = Vec::new();
        for q in seq {
            while h.len() >= 2 && cross(h[h.len() - 2], h[h.len() - 1], q) <= 0.0 {
                h.pop();
            }
            h.push(q);
        }
        h.pop();
        h
    };
    let mut ring = chain(&mut p.iter().copied());
    ring.extend(chain(&mut p.iter().rev().copied()));
    ring
}

fn strictly_inside_circumcircle(a: Point, b: Point, c: Point, d: Point) -> bool {
    let (ax, ay) = (a.x - d.x, a.y - d.y);
    let (bx, by) = (b.x - d.x, b.y - d.y);
    let (cx, cy) = (c.x - d.x, c.y - d.y);
    let det = (ax * ax + ay * ay) * (bx * cy - cx * by) - (bx * bx + by * by) * (ax * cy - cx * ay)
        + (cx * cx + cy * cy) * (ax * by - bx * ay);
    // a, b, c are counterclockwise
    det > 1e-12
}

#[test]
fn delaunay_matches_brute_force() {
    for seed in 0..10 {
        let cloud = random_point_cloud(60, seed).unwrap();
        let pts = &cloud.points;
        let t = delaunay(&cloud).unwrap();
        let n = pts.len();
        let h = hull(pts).len();
        assert_eq!(t.triangles.len(), 2 * n - 2 - h);
        assert_eq!(t.graph.m(), 3 * n - 3 - h);
        let mut area = 0.0;
        for tri in &t.triangles {
            let [a, b, c] = tri.map(|v| pts[v as usize]);
            assert!(cross(a, b, c) > 0.0, "triangle not counterclockwise");
            area += cross(a, b, c) / 2.0;
            for (i, &d) in pts.iter().enumerate() {
                if tri.contains(&(i as u32)) {
                    continue;
                }
                assert!(!strictly_inside_circumcircle(a, b, c, d), "point {i} inside {tri:?}");
            }
            for (u, v) in [(tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])] {
                assert!(t.graph.has_edge(u, v));
            }
        }
        // triangles tile the hull
        let ring = hull(pts);
        let hull_area = (0..ring.len())
            .map(|i| {
                let (p, q) = (ring[i], ring[(i + 1) % ring.len()]);
                p.x * q.y - q.x * p.y
            })
            .sum::<f64>()
            / 2.0;
        assert!((area - hull_area).abs() < 1e-9);
        assert!(check_planar(&t.graph));
    }
}

#[test]
fn remove_random_is_binomial() {
    let base = build_model(&ModelSpec::resolve("3").unwrap(), 500, 3).unwrap();
    let m = base.m() as f64;
    let q = 0.2;
    let sd = (m * q * (1.0 - q)).sqrt();
    let mut total = 0.0;
    let seeds = 40;
    for seed in 0..seeds {
        let g = apply_stages(&base, &[Stage::RemoveRandom(q)], seed).unwrap();
        assert!(g.edges().iter().all(|&(u, v)| base.has_edge(u, v)));
        let removed = m - g.m() as f64;
        assert!((removed - m * q).abs() < 5.0 * sd, "removed {removed}");
        total += removed;
    }
    let mean = total / seeds as f64;
    assert!((mean - m * q).abs() < 4.0 * sd / (seeds as f64).sqrt(), "mean removed {mean}");
}

#[test]
fn stage_order_matters_for_models_9_and_10() {
    // remove-then-add keeps about 0.8m + n edges, add-then-remove about 0.8(m + n)
    let (m9, m10) = (ModelSpec::resolve("9").unwrap(), ModelSpec::resolve("10").unwrap());
    let n = 1000;
    let mut gap = 0.0;
    for seed in 0..5 {
        let g9 = build_model(&m9, n, seed).unwrap();
        let g10 = build_model(&m10, n, seed).unwrap();
        gap += (2 * g9.m()) as f64 / g9.n() as f64 - (2 * g10.m()) as f64 / g10.n() as f64;
    }
    let gap = gap / 5.0;
    assert!((gap - 0.4).abs() < 0.1, "degree gap {gap}");
}

#[test]
fn every_preset_builds() {
    for spec in model_catalog() {
        let g: Graph = build_model(&spec, 150, 9).unwrap();
        assert!(g.n() > 0, "{}", spec.name);
        if spec.to_string().ends_with("|lcc") {
            assert!(connected_components(&g).is_connected(), "{}", spec.name);
        }
        assert_eq!(build_model(&spec, 150, 9).unwrap().edges(), g.edges());
    }
}
