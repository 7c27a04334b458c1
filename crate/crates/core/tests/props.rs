//! Property tests over the seeded random-graph sampler: each case draws a
//! seed (and whatever else it needs), builds a deterministic graph from it
//! and checks an invariant end to end.

use std::ops::ControlFlow;

use proptest::prelude::*;

use reach_ratio::bench::{answer, gen_workload, TopoPair};
use reach_ratio::engine::{incrr, TraversalSource};
use reach_ratio::graph::{parse_edge_list, rank_nodes, write_gra, GraphFormat};
use reach_ratio::labels::build_labels;
use reach_ratio::oracle;
use reach_ratio::testkit::random_dag;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Sampled queries through the full answer pipeline (labels, negative
    /// cut, traversal) never contradict the BFS oracle.
    #[test]
    fn answer_never_contradicts_the_oracle(
        seed in 0u64..10_000,
        k_frac in 0u32..=100,
        pairs in proptest::collection::vec((0u32..40, 0u32..40), 1..20),
    ) {
        let d = random_dag(seed, 40);
        let n = d.node_count();
        let ranked = rank_nodes(&d);
        let k = (n * k_frac) / 100;
        let (labels, _) = build_labels(&d, &ranked.order, k).unwrap();
        let topo = TopoPair::new(&d);
        for (u, v) in pairs {
            let (u, v) = (u % n, v % n);
            prop_assert_eq!(
                answer(&d, &labels, &topo, u, v),
                oracle::reach(&d, u, v).unwrap()
            );
        }
    }

    /// The incremental engine's running coverage equals the exhaustive
    /// enumeration at a sampled cut-off k.
    #[test]
    fn incremental_coverage_matches_enumeration(seed in 0u64..10_000, k_frac in 0u32..=100) {
        let d = random_dag(seed, 36);
        let n = d.node_count();
        let ranked = rank_nodes(&d);
        let k = ((n * k_frac) / 100).max(1).min(n);
        let tc = oracle::tc_size(&d).total;
        let mut source = TraversalSource::new(&d, &ranked.order);
        let report = incrr(&mut source, k, tc, |_| ControlFlow::Continue(())).unwrap();
        let (labels, _) = build_labels(&d, &ranked.order, k).unwrap();
        prop_assert_eq!(report.coverage, oracle::coverage_count(&d, &labels));
    }

    /// Writing a DAG in gra format and parsing it back preserves the
    /// successor structure node for node.
    #[test]
    fn gra_serialization_round_trips(seed in 0u64..10_000) {
        let d = random_dag(seed, 40);
        let mut buf = Vec::new();
        write_gra(&d, &mut buf).unwrap();
        let parsed = parse_edge_list(std::io::Cursor::new(&buf), GraphFormat::Gra).unwrap();
        prop_assert_eq!(parsed.node_count(), d.node_count());
        prop_assert_eq!(parsed.edge_count(), d.edge_count());
        for &(u, v) in parsed.edges() {
            prop_assert!(d.successors(u).contains(&v));
        }
    }

    /// Workload generation, whenever it succeeds, yields an exact split of
    /// oracle-true and oracle-false queries.
    #[test]
    fn workloads_split_exactly(seed in 0u64..10_000, half in 1u64..12) {
        let d = random_dag(seed, 30);
        if let Ok(w) = gen_workload(&d, half * 2, seed) {
            prop_assert_eq!(w.reachable, half);
            prop_assert_eq!(w.unreachable, half);
            for q in &w.queries {
                prop_assert_eq!(oracle::reach(&d, q.source, q.target).unwrap(), q.expected);
            }
        } else {
            // Generation may only fail when a class is genuinely absent.
            prop_assert!(d.node_count() < 2 || d.edge_count() == 0);
        }
    }
}
