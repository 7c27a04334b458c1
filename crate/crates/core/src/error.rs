//! Error type shared by all modules of this crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A malformed input line, reported with its 1-based line number.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A node id too large for the internal 32-bit representation.
    #[error("node id {id} exceeds the supported capacity of {max} nodes")]
    Capacity { id: u64, max: u32 },

    /// A node id outside `[0, node_count)`.
    #[error("node {node} out of range: graph has {count} nodes")]
    NodeOutOfRange { node: u64, count: u32 },

    /// An edge set that cannot form a DAG.
    #[error("edge set contains a cycle")]
    Cycle,

    /// A hop node handed to the label builder twice.
    #[error("node {0} is already a hop node")]
    AlreadyProcessed(u32),

    /// A violated internal counting invariant; always signals a bug.
    #[error("internal consistency violation: {0}")]
    Inconsistency(String),

    /// Workload generation could not supply the requested query class.
    #[error("workload generation failed: graph has no {class} node pair")]
    WorkloadGeneration { class: &'static str },

    /// A benchmark answer that contradicts the recorded expectation.
    #[error("correctness failure: {0}")]
    Correctness(String),

    /// A label snapshot that does not follow the on-disk format.
    #[error("invalid label snapshot: {0}")]
    Snapshot(String),

    #[error("invalid usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
