//! Benchmark-only crate: the targets live in benches/, shared fixtures
//! here.

pub use krank_core::PartitionTable;

/// Builds a table for the benchmark targets, panicking on failure since
/// benches have no error channel.
pub fn table(max_n: u64) -> PartitionTable {
    PartitionTable::build(max_n).expect("table build")
}
