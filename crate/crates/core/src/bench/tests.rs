use super::*;
use crate::graph::{rank_nodes, Dag};
use crate::labels::build_labels;
use crate::testkit::{random_dag, sample_dag};

fn chain(n: u32) -> Dag {
    Dag::from_edges(n, (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect()).unwrap()
}

fn labels_for(d: &Dag, k: u32) -> crate::labels::HopLabels {
    let ranked = rank_nodes(d);
    build_labels(d, &ranked.order, k).unwrap().0
}

#[test]
fn chain_workload_splits_evenly() {
    let d = chain(4);
    let w = gen_workload(&d, 4, 7).unwrap();
    assert_eq!(w.reachable, 2);
    assert_eq!(w.unreachable, 2);
    assert_eq!(w.queries.len(), 4);
    for q in &w.queries {
        assert_eq!(
            crate::oracle::reach(&d, q.source, q.target).unwrap(),
            q.expected
        );
        if q.expected {
            // On a chain every reachable pair points forward.
            assert!(q.source < q.target);
        }
    }
}

#[test]
fn empty_workload_is_fine() {
    let d = chain(4);
    let w = gen_workload(&d, 0, 1).unwrap();
    assert!(w.queries.is_empty());
}

#[test]
fn workloads_are_deterministic_per_seed() {
    let d = random_dag(5, 30);
    let a = gen_workload(&d, 40, 99).unwrap();
    let b = gen_workload(&d, 40, 99).unwrap();
    assert_eq!(a.queries, b.queries);
    let mut buf_a = Vec::new();
    let mut buf_b = Vec::new();
    write_workload(&a, d.structural_hash(), &mut buf_a).unwrap();
    write_workload(&b, d.structural_hash(), &mut buf_b).unwrap();
    assert_eq!(buf_a, buf_b);
    let c = gen_workload(&d, 40, 100).unwrap();
    assert_ne!(a.queries, c.queries);
}

#[test]
fn odd_sizes_are_rejected() {
    let d = chain(4);
    assert!(matches!(
        gen_workload(&d, 5, 1),
        Err(crate::Error::Usage(_))
    ));
}

#[test]
fn generation_errors_name_the_missing_class() {
    let edgeless = Dag::from_edges(3, vec![]).unwrap();
    assert!(matches!(
        gen_workload(&edgeless, 2, 1),
        Err(crate::Error::WorkloadGeneration { class: "reachable" })
    ));
    let single = chain(1);
    assert!(matches!(
        gen_workload(&single, 2, 1),
        Err(crate::Error::WorkloadGeneration { class: "unreachable" })
    ));
}

#[test]
fn positive_cut_answers_without_expansion() {
    let d = sample_dag();
    let labels = labels_for(&d, 2);
    let topo = TopoPair::new(&d);
    let mut scratch = AnswerScratch::new(d.node_count());
    // Covered pair: out(3) and in(6) share rank 1.
    let (got, channel, expanded) = answer_with_stats(&d, &labels, &topo, &mut scratch, 3, 6);
    assert!(got);
    assert_eq!(channel, AnswerChannel::Labels);
    assert_eq!(expanded, 0);
}

#[test]
fn negative_cut_answers_without_expansion() {
    let d = chain(3);
    let labels = labels_for(&d, 0);
    let topo = TopoPair::new(&d);
    let mut scratch = AnswerScratch::new(d.node_count());
    let (got, channel, expanded) = answer_with_stats(&d, &labels, &topo, &mut scratch, 2, 0);
    assert!(!got);
    assert_eq!(channel, AnswerChannel::NegativeCut);
    assert_eq!(expanded, 0);
}

#[test]
fn self_queries_are_true() {
    let d = chain(3);
    let labels = labels_for(&d, 0);
    let topo = TopoPair::new(&d);
    for v in 0..3 {
        assert!(answer(&d, &labels, &topo, v, v));
    }
}

#[test]
fn answer_agrees_with_the_oracle_for_all_pairs() {
    for seed in 600..625 {
        let d = random_dag(seed, 40);
        let topo = TopoPair::new(&d);
        let n = d.node_count();
        for k in [0, 16.min(n), n] {
            let labels = labels_for(&d, k);
            let mut scratch = AnswerScratch::new(n);
            for u in 0..n {
                for v in 0..n {
                    let want = crate::oracle::reach(&d, u, v).unwrap();
                    let (got, _, _) = answer_with_stats(&d, &labels, &topo, &mut scratch, u, v);
                    assert_eq!(got, want, "seed {seed} k {k}: {u} -> {v}");
                }
            }
        }
    }
}

#[test]
fn complete_labels_leave_no_traversal_work() {
    let d = sample_dag();
    let labels = labels_for(&d, d.node_count());
    let w = gen_workload(&d, 30, 11).unwrap();
    let stats = run_bench(&d, &labels, &w).unwrap();
    assert_eq!(stats.total, 30);
    assert_eq!(stats.answered_by_traversal, 0);
    assert_eq!(stats.expanded_nodes_total, 0);
    assert_eq!(
        stats.answered_by_labels + stats.answered_by_negative_cut + stats.answered_by_traversal,
        stats.total
    );
}

#[test]
fn antichain_is_settled_by_the_negative_cut() {
    let d = Dag::from_edges(2, vec![]).unwrap();
    let labels = labels_for(&d, 0);
    let w = Workload {
        queries: vec![
            Query {
                source: 0,
                target: 1,
                expected: false,
            },
            Query {
                source: 1,
                target: 0,
                expected: false,
            },
        ],
        seed: 0,
        reachable: 0,
        unreachable: 2,
    };
    let stats = run_bench(&d, &labels, &w).unwrap();
    assert_eq!(stats.answered_by_negative_cut, 2);
    assert_eq!(stats.answered_by_labels, 0);
    assert_eq!(stats.answered_by_traversal, 0);
}

#[test]
fn bench_aborts_on_a_wrong_expectation() {
    let d = chain(3);
    let labels = labels_for(&d, 0);
    let w = Workload {
        queries: vec![Query {
            source: 0,
            target: 2,
            expected: false, // wrong on purpose
        }],
        seed: 0,
        reachable: 0,
        unreachable: 1,
    };
    assert!(matches!(
        run_bench(&d, &labels, &w),
        Err(crate::Error::Correctness(_))
    ));
}

#[test]
fn label_channel_grows_with_k() {
    let d = random_dag(33, 35);
    let w = gen_workload(&d, 60, 5).unwrap();
    let mut prev = 0;
    for k in 0..=d.node_count() {
        let labels = labels_for(&d, k);
        let stats = run_bench(&d, &labels, &w).unwrap();
        assert!(
            stats.answered_by_labels >= prev,
            "k {k}: {} < {prev}",
            stats.answered_by_labels
        );
        prev = stats.answered_by_labels;
    }
}

#[test]
fn label_pruning_only_shrinks_traversals() {
    for seed in 700..715 {
        let d = random_dag(seed, 40);
        if d.edge_count() == 0 || d.node_count() < 2 {
            continue;
        }
        let w = gen_workload(&d, 40, seed).unwrap();
        let k0 = run_bench(&d, &labels_for(&d, 0), &w).unwrap();
        let k16 = run_bench(&d, &labels_for(&d, 16.min(d.node_count())), &w).unwrap();
        assert!(
            k16.expanded_nodes_total <= k0.expanded_nodes_total,
            "seed {seed}: {} > {}",
            k16.expanded_nodes_total,
            k0.expanded_nodes_total
        );
    }
}

#[test]
fn workload_csv_round_trips() {
    let d = sample_dag();
    let w = gen_workload(&d, 20, 42).unwrap();
    let hash = d.structural_hash();
    let mut buf = Vec::new();
    write_workload(&w, hash, &mut buf).unwrap();
    let (loaded, recorded_hash) = read_workload(std::io::Cursor::new(&buf)).unwrap();
    assert_eq!(recorded_hash, hash);
    assert_eq!(loaded.seed, 42);
    assert_eq!(loaded.queries, w.queries);
    assert_eq!(loaded.reachable, w.reachable);
    assert_eq!(loaded.unreachable, w.unreachable);
}

#[test]
fn workload_csv_rejects_malformed_input() {
    assert!(read_workload(std::io::Cursor::new(b"")).is_err());
    assert!(read_workload(std::io::Cursor::new(b"u,v,expected\n")).is_err());
    let bad = b"# graph_hash=00 seed=1\nu,v,expected\n1,2\n";
    assert!(read_workload(std::io::Cursor::new(&bad[..])).is_err());
    let bad = b"# graph_hash=00 seed=1\nu,v,expected\n1,2,maybe\n";
    assert!(read_workload(std::io::Cursor::new(&bad[..])).is_err());
}
