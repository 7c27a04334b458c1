//! SCC condensation via an iterative Tarjan pass.
//!
//! The recursion is replaced by an explicit stack so arbitrarily deep graphs
//! condense without blowing the call stack. Components complete in reverse
//! topological order; DAG ids are handed out as `scc_count - 1 - completion`,
//! which makes every condensed edge run from a lower id to a higher one.

use super::{dag_from_parts, Adjacency, Dag, DirectedGraph, NodeId};

const UNVISITED: u32 = u32::MAX;

pub(super) fn condense(g: &DirectedGraph) -> Dag {
    let n = g.node_count();
    let adj = Adjacency::from_pairs(n, g.edges().to_vec());

    let mut index = vec![UNVISITED; n as usize];
    let mut lowlink = vec![0u32; n as usize];
    let mut on_stack = vec![false; n as usize];
    let mut comp = vec![UNVISITED; n as usize];
    let mut stack: Vec<NodeId> = Vec::new();
    let mut next_index = 0u32;
    let mut scc_count = 0u32;

    // (node, next neighbor offset) frames for the explicit DFS.
    let mut frames: Vec<(NodeId, usize)> = Vec::new();

    for root in 0..n {
        if index[root as usize] != UNVISITED {
            continue;
        }
        frames.push((root, 0));
        index[root as usize] = next_index;
        lowlink[root as usize] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root as usize] = true;

        while let Some(&mut (v, ref mut off)) = frames.last_mut() {
            let neighbors = adj.neighbors(v);
            if *off < neighbors.len() {
                let w = neighbors[*off];
                *off += 1;
                if index[w as usize] == UNVISITED {
                    index[w as usize] = next_index;
                    lowlink[w as usize] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w as usize] = true;
                    frames.push((w, 0));
                } else if on_stack[w as usize] {
                    lowlink[v as usize] = lowlink[v as usize].min(index[w as usize]);
                }
            } else {
                frames.pop();
                if let Some(&mut (parent, _)) = frames.last_mut() {
                    lowlink[parent as usize] = lowlink[parent as usize].min(lowlink[v as usize]);
                }
                if lowlink[v as usize] == index[v as usize] {
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w as usize] = false;
                        comp[w as usize] = scc_count;
                        if w == v {
                            break;
                        }
                    }
                    scc_count += 1;
                }
            }
        }
    }

    // Completion order is reverse topological; flip it so condensed edges go
    // from lower to higher DAG id.
    let scc_map: Vec<NodeId> = comp.iter().map(|&c| scc_count - 1 - c).collect();

    let mut edges: Vec<(NodeId, NodeId)> = g
        .edges()
        .iter()
        .map(|&(u, v)| (scc_map[u as usize], scc_map[v as usize]))
        .filter(|&(cu, cv)| cu != cv)
        .collect();
    edges.sort_unstable();
    edges.dedup();

    debug_assert!(edges.iter().all(|&(u, v)| u < v));
    let topo_order: Vec<NodeId> = (0..scc_count).collect();
    dag_from_parts(scc_count, edges, topo_order, scc_map)
}
