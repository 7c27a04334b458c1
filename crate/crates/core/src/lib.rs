//! Partial 2-hop reachability labels over a DAG, three engines of
//! increasing sophistication for computing the reachability ratio they
//! achieve, and a label-accelerated query benchmark.
//!
//! The pipeline: parse a directed graph ([`graph::parse_edge_list`]),
//! condense strongly connected components ([`graph::condense`]), rank nodes
//! by degree ([`graph::rank_nodes`]), build partial labels over the top-k
//! hop nodes ([`labels`]), and compute the covered share of the transitive
//! closure ([`engine`]) against the ground truth from [`oracle`].

pub mod bench;
pub mod engine;
pub mod error;
pub mod graph;
pub mod labels;
pub mod oracle;
pub mod testkit;
mod workers;

pub use error::{Error, Result};
