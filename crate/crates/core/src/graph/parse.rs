//! Input parsers for the two supported on-disk graph formats.
//!
//! Edge list: one `u v` pair per line, whitespace separated, `#` lines are
//! comments. Gra (the GRAIL dataset convention): an optional
//! `graph_for_greach` header, a vertex-count line, then one
//! `id: succ1 succ2 ... #` line per vertex.

use std::io::BufRead;

use super::{DirectedGraph, NodeId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    EdgeList,
    Gra,
}

/// Parses a graph from `reader`, normalizing duplicates and self loops.
pub fn parse_edge_list<R: BufRead>(reader: R, format: GraphFormat) -> Result<DirectedGraph> {
    match format {
        GraphFormat::EdgeList => parse_pairs(reader),
        GraphFormat::Gra => parse_gra(reader),
    }
}

fn parse_node(tok: &str, line: usize) -> Result<u64> {
    tok.parse::<u64>().map_err(|_| Error::Parse {
        line,
        msg: format!("expected a node id, got {tok:?}"),
    })
}

fn narrow(id: u64) -> Result<NodeId> {
    // Reserve u32::MAX so node counts (max id + 1) always fit in u32.
    if id >= u32::MAX as u64 {
        return Err(Error::Capacity {
            id,
            max: u32::MAX - 1,
        });
    }
    Ok(id as NodeId)
}

fn parse_pairs<R: BufRead>(reader: R) -> Result<DirectedGraph> {
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    let mut max_id: Option<NodeId> = None;
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut toks = line.split_whitespace();
        let (u, v) = match (toks.next(), toks.next(), toks.next()) {
            (Some(u), Some(v), None) => (u, v),
            _ => {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("expected \"u v\", got {line:?}"),
                })
            }
        };
        let u = narrow(parse_node(u, lineno)?)?;
        let v = narrow(parse_node(v, lineno)?)?;
        max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
        edges.push((u, v));
    }
    let node_count = max_id.map_or(0, |m| m + 1);
    DirectedGraph::from_edges(node_count, edges)
}

fn parse_gra<R: BufRead>(reader: R) -> Result<DirectedGraph> {
    let mut lines = reader.lines().enumerate();

    // Header: optional "graph_for_greach" marker, then the vertex count.
    let node_count;
    loop {
        match lines.next() {
            Some((idx, line)) => {
                let line = line?;
                let t = line.trim();
                if t.is_empty() || t == "graph_for_greach" {
                    continue;
                }
                node_count = narrow(parse_node(t, idx + 1)?)?;
                break;
            }
            None => {
                return Err(Error::Parse {
                    line: 0,
                    msg: "missing vertex count".into(),
                })
            }
        }
    }

    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    let mut seen = vec![false; node_count as usize];
    let mut vertex_lines = 0u32;
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let (id_part, rest) = t.split_once(':').ok_or_else(|| Error::Parse {
            line: lineno,
            msg: format!("expected \"id: successors #\", got {t:?}"),
        })?;
        let u = narrow(parse_node(id_part.trim(), lineno)?)?;
        if u >= node_count {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("vertex id {u} exceeds declared count {node_count}"),
            });
        }
        if seen[u as usize] {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("vertex {u} listed twice"),
            });
        }
        seen[u as usize] = true;
        vertex_lines += 1;
        for tok in rest.split_whitespace() {
            if tok == "#" {
                break;
            }
            let v = narrow(parse_node(tok, lineno)?)?;
            if v >= node_count {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("successor id {v} exceeds declared count {node_count}"),
                });
            }
            edges.push((u, v));
        }
    }
    if vertex_lines != node_count {
        return Err(Error::Parse {
            line: 0,
            msg: format!("expected {node_count} vertex lines, found {vertex_lines}"),
        });
    }
    DirectedGraph::from_edges(node_count, edges)
}

/// Writes a graph in gra format (used by the `condense` CLI subcommand).
pub fn write_gra<W: std::io::Write>(d: &super::Dag, mut w: W) -> std::io::Result<()> {
    writeln!(w, "graph_for_greach")?;
    writeln!(w, "{}", d.node_count())?;
    for u in 0..d.node_count() {
        write!(w, "{u}:")?;
        for &v in d.successors(u) {
            write!(w, " {v}")?;
        }
        writeln!(w, " #")?;
    }
    Ok(())
}
