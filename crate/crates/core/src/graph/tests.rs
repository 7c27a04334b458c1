use super::*;
use crate::testkit;

fn parse_str(s: &str, format: GraphFormat) -> Result<DirectedGraph> {
    parse_edge_list(std::io::Cursor::new(s), format)
}

/// Raw-graph reachability by BFS over an ad-hoc adjacency map, independent
/// of the Dag machinery.
fn raw_reaches(g: &DirectedGraph, from: NodeId, to: NodeId) -> bool {
    if from == to {
        return true;
    }
    let mut adj = vec![Vec::new(); g.node_count() as usize];
    for &(u, v) in g.edges() {
        adj[u as usize].push(v);
    }
    let mut visited = vec![false; g.node_count() as usize];
    let mut stack = vec![from];
    visited[from as usize] = true;
    while let Some(u) = stack.pop() {
        for &v in &adj[u as usize] {
            if v == to {
                return true;
            }
            if !visited[v as usize] {
                visited[v as usize] = true;
                stack.push(v);
            }
        }
    }
    false
}

#[test]
fn parses_plain_edge_list() {
    let g = parse_str("0 1\n1 2\n", GraphFormat::EdgeList).unwrap();
    assert_eq!(g.node_count(), 3);
    assert_eq!(g.edge_count(), 2);
    assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
}

#[test]
fn normalizes_duplicates_and_self_loops() {
    let g = parse_str("0 1\n0 1\n1 1\n", GraphFormat::EdgeList).unwrap();
    assert_eq!(g.node_count(), 2);
    assert_eq!(g.edge_count(), 1);
    assert_eq!(g.dropped_duplicates(), 1);
    assert_eq!(g.dropped_self_loops(), 1);
}

#[test]
fn skips_comments_and_blank_lines() {
    let g = parse_str("# header\n\n0 2\n", GraphFormat::EdgeList).unwrap();
    assert_eq!(g.node_count(), 3);
    assert_eq!(g.edge_count(), 1);
}

#[test]
fn parses_gra_fixture() {
    let g = parse_str("3\n0: 1 2 #\n1: #\n2: #\n", GraphFormat::Gra).unwrap();
    assert_eq!(g.node_count(), 3);
    assert_eq!(g.edges(), &[(0, 1), (0, 2)]);
}

#[test]
fn parses_gra_with_header_line() {
    let g = parse_str("graph_for_greach\n2\n0: 1 #\n1: #\n", GraphFormat::Gra).unwrap();
    assert_eq!(g.node_count(), 2);
    assert_eq!(g.edges(), &[(0, 1)]);
}

#[test]
fn malformed_line_reports_line_number() {
    let err = parse_str("0 1\nnonsense\n", GraphFormat::EdgeList).unwrap_err();
    match err {
        Error::Parse { line, .. } => assert_eq!(line, 2),
        other => panic!("expected parse error, got {other:?}"),
    }
    let err = parse_str("2\n0 1 #\n1: #\n", GraphFormat::Gra).unwrap_err();
    assert!(matches!(err, Error::Parse { line: 2, .. }));
}

#[test]
fn oversized_id_is_a_capacity_error() {
    let err = parse_str("0 4294967295\n", GraphFormat::EdgeList).unwrap_err();
    assert!(matches!(err, Error::Capacity { .. }));
}

#[test]
fn gra_requires_all_vertex_lines() {
    let err = parse_str("3\n0: 1 #\n", GraphFormat::Gra).unwrap_err();
    assert!(matches!(err, Error::Parse { .. }));
}

#[test]
fn condenses_cycle_with_tail() {
    // 3-cycle a -> b -> c -> a plus c -> d.
    let g = DirectedGraph::from_edges(4, vec![(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
    let d = condense(&g);
    assert_eq!(d.node_count(), 2);
    assert_eq!(d.edge_count(), 1);
    let m = d.scc_map();
    assert_eq!(m[0], m[1]);
    assert_eq!(m[1], m[2]);
    assert_ne!(m[2], m[3]);
    assert_eq!(d.successors(m[0]), &[m[3]]);
}

#[test]
fn condensing_a_chain_is_the_identity() {
    let g = DirectedGraph::from_edges(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
    let d = condense(&g);
    assert_eq!(d.node_count(), 4);
    assert_eq!(d.scc_map(), &[0, 1, 2, 3]);
    assert_eq!(d.successors(0), &[1]);
    assert_eq!(d.successors(2), &[3]);
}

#[test]
fn condensed_reachability_matches_raw_reachability() {
    for seed in 0..60 {
        let g = testkit::random_digraph(seed, 30);
        let d = condense(&g);
        let m = d.scc_map();
        for u in 0..g.node_count() {
            for v in 0..g.node_count() {
                let raw = raw_reaches(&g, u, v);
                let dag = m[u as usize] == m[v as usize]
                    || crate::oracle::reach(&d, m[u as usize], m[v as usize]).unwrap();
                assert_eq!(raw, dag, "seed {seed}: {u} -> {v}");
            }
        }
    }
}

#[test]
fn condense_is_idempotent_up_to_renaming() {
    for seed in 0..40 {
        let g = testkit::random_digraph(seed, 25);
        let d1 = condense(&g);
        let as_raw = DirectedGraph::from_edges(
            d1.node_count(),
            (0..d1.node_count())
                .flat_map(|u| d1.successors(u).iter().map(move |&v| (u, v)))
                .collect(),
        )
        .unwrap();
        let d2 = condense(&as_raw);
        assert_eq!(d2.node_count(), d1.node_count());
        assert_eq!(d2.edge_count(), d1.edge_count());
        let m = d2.scc_map();
        let mut remapped: Vec<(NodeId, NodeId)> = (0..d1.node_count())
            .flat_map(|u| {
                d1.successors(u)
                    .iter()
                    .map(move |&v| (m[u as usize], m[v as usize]))
            })
            .collect();
        remapped.sort_unstable();
        let mut expected: Vec<(NodeId, NodeId)> = (0..d2.node_count())
            .flat_map(|u| d2.successors(u).iter().map(move |&v| (u, v)))
            .collect();
        expected.sort_unstable();
        assert_eq!(remapped, expected);
    }
}

#[test]
fn topo_order_is_valid_everywhere() {
    for seed in 0..40 {
        let g = testkit::random_digraph(seed, 25);
        let d = condense(&g);
        for u in 0..d.node_count() {
            for &v in d.successors(u) {
                assert!(d.topo_position(u) < d.topo_position(v));
            }
        }
        let dag = testkit::random_dag(seed, 25);
        for u in 0..dag.node_count() {
            for &v in dag.successors(u) {
                assert!(dag.topo_position(u) < dag.topo_position(v));
            }
        }
    }
}

#[test]
fn from_edges_rejects_cycles() {
    assert!(matches!(
        Dag::from_edges(2, vec![(0, 1), (1, 0)]),
        Err(Error::Cycle)
    ));
    assert!(matches!(Dag::from_edges(1, vec![(0, 0)]), Err(Error::Cycle)));
}

#[test]
fn rank_score_follows_degree_product() {
    // out-degree 3, in-degree 4 -> (3+1) * (4+1) = 20.
    let mut edges = vec![(0, 1), (0, 2), (0, 3)];
    edges.extend([(4, 0), (5, 0), (6, 0), (7, 0)]);
    let d = Dag::from_edges(8, edges).unwrap();
    let ranked = rank_nodes(&d);
    assert_eq!(ranked.score[0], 20);
    assert_eq!(ranked.order[0], 0);
}

#[test]
fn isolated_node_scores_one() {
    let d = Dag::from_edges(1, vec![]).unwrap();
    assert_eq!(rank_nodes(&d).score[0], 1);
}

#[test]
fn star_center_ranks_first() {
    // Center 2 with out-degree 3: score 4; leaves score 2.
    let d = Dag::from_edges(4, vec![(2, 0), (2, 1), (2, 3)]).unwrap();
    let ranked = rank_nodes(&d);
    assert_eq!(ranked.order[0], 2);
    // Degenerate star (m = 1) ties everyone at 2; ascending id wins.
    let d = Dag::from_edges(2, vec![(1, 0)]).unwrap();
    assert_eq!(rank_nodes(&d).order, vec![0, 1]);
}

#[test]
fn ranking_is_deterministic() {
    for seed in 0..10 {
        let d = testkit::random_dag(seed, 30);
        let a = rank_nodes(&d);
        let b = rank_nodes(&d);
        assert_eq!(a.order, b.order);
        assert_eq!(a.score, b.score);
        // Scores never increase along the order; equal scores keep id order.
        for w in a.order.windows(2) {
            let (x, y) = (w[0], w[1]);
            let (sx, sy) = (a.score[x as usize], a.score[y as usize]);
            assert!(sx > sy || (sx == sy && x < y));
        }
    }
}

#[test]
fn sample_graph_ranks_its_hop_nodes_first() {
    let d = testkit::sample_dag();
    let ranked = rank_nodes(&d);
    assert_eq!(&ranked.order[..3], &[0, 1, 2]);
    assert_eq!(ranked.score[0], 24);
    assert_eq!(ranked.score[1], 16);
    assert_eq!(ranked.score[2], 15);
}

#[test]
fn stats_of_a_chain() {
    let d = Dag::from_edges(5, vec![(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
    let stats = compute_stats(&d);
    assert_eq!(stats.topo_levels, 5);
    assert!((stats.avg_degree - 1.6).abs() < 1e-12);
}

#[test]
fn stats_of_a_single_node() {
    let d = Dag::from_edges(1, vec![]).unwrap();
    let stats = compute_stats(&d);
    assert_eq!(stats.topo_levels, 1);
    assert_eq!(stats.avg_degree, 0.0);
}

#[test]
fn stats_of_the_empty_graph_are_zero() {
    let d = Dag::from_edges(0, vec![]).unwrap();
    let stats = compute_stats(&d);
    assert_eq!(stats.node_count, 0);
    assert_eq!(stats.topo_levels, 0);
    assert_eq!(stats.avg_degree, 0.0);
}

#[test]
fn avg_reach_is_absent_until_requested() {
    let d = testkit::sample_dag();
    let stats = compute_stats(&d);
    assert!(stats.avg_reach.is_none());
    let tc = crate::oracle::tc_size(&d);
    let stats = stats.with_avg_reach(&tc);
    assert!((stats.avg_reach.unwrap() - 70.0 / 15.0).abs() < 1e-12);
}

#[test]
fn topo_levels_match_brute_force_longest_path() {
    for seed in 100..140 {
        let d = testkit::random_dag(seed, 12);
        let stats = compute_stats(&d);
        assert_eq!(
            stats.topo_levels,
            testkit::brute_force_longest_path(&d),
            "seed {seed}"
        );
    }
}

#[test]
fn gra_round_trip_preserves_structure() {
    let d = testkit::sample_dag();
    let mut buf = Vec::new();
    write_gra(&d, &mut buf).unwrap();
    let g = parse_str(std::str::from_utf8(&buf).unwrap(), GraphFormat::Gra).unwrap();
    assert_eq!(g.node_count(), d.node_count());
    assert_eq!(g.edge_count(), d.edge_count());
    for &(u, v) in g.edges() {
        assert!(d.successors(u).contains(&v));
    }
}
