use std::collections::BTreeSet;

use dualgraph::geometry::Point;
use dualgraph::io::{
    edge_list_string, load_graph, node_link_string, parse_edge_list, parse_node_link, save_graph, write_rows,
    GraphFormat, ResultRow,
};
use dualgraph::models::{build_model, square_grid, ModelSpec};
use dualgraph::{Error, Graph, VertexId};
use proptest::prelude::*;

fn id_edges(g: &Graph) -> BTreeSet<(String, String)> {
    g.edges()
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (g.id(u).to_string(), g.id(v).to_string());
            (a.clone().min(b.clone()), a.max(b))
        })
        .collect()
}

fn id_set(g: &Graph) -> BTreeSet<String> {
    g.ids().iter().map(|i| i.to_string()).collect()
}

fn arb_graph() -> impl Strategy<Value = Graph> {
    (1usize..40, any::<bool>(), any::<u64>()).prop_flat_map(|(n, coords, salt)| {
        let pairs = prop::collection::vec((0..n, 0..n), 0..3 * n);
        let pts = prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3), n);
        (pairs, pts).prop_map(move |(pairs, pts)| {
            let edges: Vec<(usize, usize)> = pairs.into_iter().filter(|(u, v)| u != v).collect();
            let g = Graph::from_edges(n, edges).unwrap();
            // mix integer and string ids
            let ids: Vec<VertexId> = (0..n)
                .map(|v| {
                    if (salt >> (v % 64)) & 1 == 1 {
                        VertexId::from(format!("t{v}").as_str())
                    } else {
                        VertexId::from(v * 7)
                    }
                })
                .collect();
            let edges: Vec<(VertexId, VertexId)> = g
                .edges()
                .iter()
                .map(|&(u, v)| (ids[u as usize].clone(), ids[v as usize].clone()))
                .collect();
            let coords = coords.then(|| {
                ids.iter()
                    .cloned()
                    .zip(pts.iter().map(|&(x, y)| Point::new(x, y)))
                    .collect()
            });
            Graph::from_ids(ids, &edges, coords).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn node_link_round_trip(g in arb_graph()) {
        let h = parse_node_link(&node_link_string(&g)).unwrap();
        prop_assert_eq!(g.ids(), h.ids());
        prop_assert_eq!(g.edges(), h.edges());
        prop_assert_eq!(g.coords(), h.coords());
    }

    #[test]
    fn edge_list_round_trip(g in arb_graph()) {
        let h = parse_edge_list(&edge_list_string(&g)).unwrap();
        prop_assert_eq!(id_set(&g), id_set(&h));
        prop_assert_eq!(id_edges(&g), id_edges(&h));
    }

    #[test]
    fn link_order_is_irrelevant(g in arb_graph(), rot in 0usize..50) {
        let text = node_link_string(&g);
        let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        let links = doc["links"].as_array_mut().unwrap();
        if !links.is_empty() {
            let r = rot % links.len();
            links.rotate_left(r);
            links.reverse();
        }
        let h = parse_node_link(&doc.to_string()).unwrap();
        prop_assert_eq!(g.edges(), h.edges());
    }
}

#[test]
fn small_examples() {
    let g = parse_edge_list("0 1\n1 2\n0 1\n").unwrap();
    assert_eq!((g.n(), g.m()), (3, 2));
    let g = parse_node_link(r#"{"nodes":[{"id":0},{"id":1},{"id":2}],"links":[{"source":0,"target":1},{"source":1,"target":2}]}"#)
        .unwrap();
    assert_eq!((g.n(), g.m()), (3, 2));
    assert!(g.coords().is_none());
    assert_eq!(edge_list_string(&square_grid(3, 3).unwrap()).lines().count(), 12);
}

#[test]
fn malformed_inputs() {
    assert!(matches!(
        parse_node_link(r#"{"directed":true,"nodes":[],"links":[]}"#),
        Err(Error::Directed)
    ));
    let err = parse_node_link(r#"{"nodes":[{"id":"a"}],"links":[{"source":"a","target":"zz"}]}"#).unwrap_err();
    assert!(err.to_string().contains("zz"));
    assert!(matches!(parse_edge_list("1 1\n"), Err(Error::SelfLoop(_))));
    assert!(matches!(parse_edge_list("0 1\n1 2 3\n"), Err(Error::Parse { line: 2, .. })));
    assert!(matches!(parse_node_link("{\n\"nodes\": [\n}"), Err(Error::Parse { line: 3, .. })));
}

#[test]
fn files_round_trip_with_coordinates() {
    let dir = tempfile::tempdir().unwrap();
    let g = build_model(&ModelSpec::resolve("3").unwrap(), 200, 5).unwrap();
    let path = dir.path().join("g.json");
    save_graph(&g, &path, GraphFormat::NodeLink).unwrap();
    let h = load_graph(&path, GraphFormat::from_path(&path)).unwrap();
    assert_eq!(g.edges(), h.edges());
    for (a, b) in g.coords().unwrap().iter().zip(h.coords().unwrap()) {
        assert!((a.x - b.x).abs() < 1e-12 && (a.y - b.y).abs() < 1e-12);
    }
    let missing = dir.path().join("absent.txt");
    let err = load_graph(&missing, GraphFormat::EdgeList).unwrap_err();
    assert!(err.to_string().contains("absent.txt"));
}

#[test]
fn result_tables() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    write_rows(&path, &["graph", "p_hat"], &[]).unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "graph,p_hat\n");
    let rows = vec![
        ResultRow::new().with("graph", "a").with("p_hat", 0.125),
        ResultRow::new().with("graph", "b").with("q", 1.0),
    ];
    assert!(matches!(
        write_rows(&path, &["graph", "p_hat"], &rows),
        Err(Error::SchemaMismatch { row: 1, .. })
    ));
    write_rows(&path, &["graph", "p_hat"], &rows[..1]).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.ends_with('\n'));
}
