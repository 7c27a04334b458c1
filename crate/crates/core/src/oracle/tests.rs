use super::*;
use crate::graph::{rank_nodes, Dag};
use crate::labels::{build_labels, HopLabels};
use crate::testkit::{
    closure_by_squaring, closure_reaches, group_by_label, random_dag, sample_dag, sample_labels,
    SAMPLE_TC_TOTAL,
};

fn chain(n: u32) -> Dag {
    Dag::from_edges(n, (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect()).unwrap()
}

#[test]
fn reach_walks_a_chain() {
    let d = chain(3);
    assert!(reach(&d, 0, 2).unwrap());
    assert!(!reach(&d, 2, 0).unwrap());
}

#[test]
fn reach_is_reflexive() {
    let d = chain(3);
    for v in 0..3 {
        assert!(reach(&d, v, v).unwrap());
    }
}

#[test]
fn reach_rejects_out_of_range_ids() {
    let d = chain(3);
    assert!(matches!(
        reach(&d, 0, 7),
        Err(crate::Error::NodeOutOfRange { .. })
    ));
}

#[test]
fn reach_agrees_with_matrix_squaring() {
    for seed in 0..40 {
        let d = random_dag(seed, 30);
        let closure = closure_by_squaring(&d);
        for u in 0..d.node_count() {
            for v in 0..d.node_count() {
                assert_eq!(
                    reach(&d, u, v).unwrap(),
                    closure_reaches(&closure, u, v),
                    "seed {seed}: {u} -> {v}"
                );
            }
        }
    }
}

#[test]
fn tc_size_of_a_chain_has_closed_form() {
    for n in [1u32, 2, 5, 12] {
        let d = chain(n);
        let tc = tc_size(&d);
        assert_eq!(tc.total, (n as u64) * (n as u64 - 1) / 2);
        assert_eq!(tc.per_node_reach.iter().map(|&c| c as u64).sum::<u64>(), tc.total);
    }
}

#[test]
fn tc_size_of_an_edgeless_graph_is_zero() {
    let d = Dag::from_edges(6, vec![]).unwrap();
    let tc = tc_size(&d);
    assert_eq!(tc.total, 0);
    assert!(tc.per_node_reach.iter().all(|&c| c == 0));
}

#[test]
fn tc_size_of_the_sample_dag() {
    assert_eq!(tc_size(&sample_dag()).total, SAMPLE_TC_TOTAL);
}

#[test]
fn tc_size_is_invariant_under_relabeling() {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    for seed in 0..10u64 {
        let d = random_dag(seed, 30);
        let n = d.node_count();
        let mut perm: Vec<u32> = (0..n).collect();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0xabcd);
        perm.shuffle(&mut rng);
        let edges = (0..n)
            .flat_map(|u| {
                d.successors(u)
                    .iter()
                    .map(|&v| (perm[u as usize], perm[v as usize]))
                    .collect::<Vec<_>>()
            })
            .collect();
        let relabeled = Dag::from_edges(n, edges).unwrap();
        assert_eq!(tc_size(&d).total, tc_size(&relabeled).total, "seed {seed}");
    }
}

#[test]
fn tc_size_is_schedule_independent() {
    let d = random_dag(77, 40);
    let sequential = tc_size(&d);
    std::env::set_var("REACH_RATIO_THREADS", "4");
    let parallel = tc_size(&d);
    std::env::remove_var("REACH_RATIO_THREADS");
    assert_eq!(sequential.total, parallel.total);
    assert_eq!(sequential.per_node_reach, parallel.per_node_reach);
}

#[test]
fn coverage_of_empty_labels_is_zero() {
    let d = sample_dag();
    assert_eq!(coverage_count(&d, &HopLabels::new(15, 0)), 0);
}

#[test]
fn coverage_of_full_labels_is_the_tc_size() {
    for seed in 120..140 {
        let d = random_dag(seed, 35);
        let ranked = rank_nodes(&d);
        let (labels, _) = build_labels(&d, &ranked.order, d.node_count()).unwrap();
        assert_eq!(coverage_count(&d, &labels), tc_size(&d).total, "seed {seed}");
    }
}

#[test]
fn coverage_of_the_sample_labels() {
    let d = sample_dag();
    assert_eq!(coverage_count(&d, &sample_labels(1)), 27);
    assert_eq!(coverage_count(&d, &sample_labels(2)), 42);
    assert_eq!(coverage_count(&d, &sample_labels(3)), 60);
}

#[test]
fn single_class_partition_of_unlabeled_nodes() {
    let labels = HopLabels::new(6, 0);
    let subset = vec![0, 2, 4];
    assert!(verify_partition(&labels, &subset, Side::Forward, std::slice::from_ref(&subset)));
    assert!(verify_partition(&labels, &subset, Side::Backward, std::slice::from_ref(&subset)));
    // Splitting equal-label nodes is not a valid equivalence partition.
    assert!(!verify_partition(
        &labels,
        &subset,
        Side::Forward,
        &[vec![0], vec![2, 4]]
    ));
}

#[test]
fn sample_third_step_partitions() {
    let labels = sample_labels(2);
    let anc = vec![2, 3, 4, 5, 10];
    let good = vec![vec![2, 4], vec![3, 5, 10]];
    assert!(verify_partition(&labels, &anc, Side::Forward, &good));
    // Merged, incomplete and overlapping variants all fail.
    assert!(!verify_partition(&labels, &anc, Side::Forward, std::slice::from_ref(&anc)));
    assert!(!verify_partition(
        &labels,
        &anc,
        Side::Forward,
        &[vec![2, 4], vec![3, 5]]
    ));
    assert!(!verify_partition(
        &labels,
        &anc,
        Side::Forward,
        &[vec![2, 4], vec![3, 5, 10, 2]]
    ));

    let desc = vec![2, 7, 6, 8, 13];
    assert!(verify_partition(
        &labels,
        &desc,
        Side::Backward,
        &[vec![2, 7, 13], vec![6, 8]]
    ));
}

#[test]
fn verify_partition_agrees_with_group_by() {
    for seed in 150..175 {
        let d = random_dag(seed, 30);
        let ranked = rank_nodes(&d);
        let k = (d.node_count() / 2).max(1);
        let (labels, steps) = build_labels(&d, &ranked.order, k).unwrap();
        for step in &steps {
            for (subset, side) in [
                (&step.ancestors, Side::Forward),
                (&step.descendants, Side::Backward),
            ] {
                let classes = group_by_label(&labels, subset, side);
                assert!(
                    verify_partition(&labels, subset, side, &classes),
                    "seed {seed} rank {}",
                    step.rank
                );
            }
        }
    }
}
