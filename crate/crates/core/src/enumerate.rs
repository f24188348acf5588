//! Brute-force partition enumeration with the rank and crank statistics.
//!
//! This is the combinatorial oracle: it shares no code with the recurrence
//! or the series expansion, so agreement between all three paths is strong
//! evidence each one is right.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Enumeration walks every partition of n, so the budget is tight.
pub const ENUMERATION_MAX_N: u64 = 45;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Statistic {
    /// Largest part minus number of parts.
    Rank,
    /// Largest part if no part equals 1; otherwise the number of parts
    /// larger than the count of 1s, minus the count of 1s.
    Crank,
}

/// Exact histogram value -> count of the chosen statistic over all
/// partitions of n. The empty partition of n = 0 contributes {0: 1} for
/// both statistics.
pub fn enumerate_statistic(n: u64, statistic: Statistic) -> Result<BTreeMap<i64, u64>> {
    if n > ENUMERATION_MAX_N {
        return Err(Error::Budget {
            what: "partition enumeration",
            requested: n,
            budget: ENUMERATION_MAX_N,
        });
    }
    let mut histogram = BTreeMap::new();
    let mut parts = Vec::new();
    walk(n, n, &mut parts, &mut |p| {
        let value = match statistic {
            Statistic::Rank => rank(p),
            Statistic::Crank => crank(p),
        };
        *histogram.entry(value).or_insert(0) += 1;
    });
    Ok(histogram)
}

/// Emits every partition of `remaining` with parts <= `max_part`, in
/// non-increasing part order.
fn walk(remaining: u64, max_part: u64, parts: &mut Vec<u64>, emit: &mut impl FnMut(&[u64])) {
    if remaining == 0 {
        emit(parts);
        return;
    }
    let top = remaining.min(max_part);
    for part in (1..=top).rev() {
        parts.push(part);
        walk(remaining - part, part, parts, emit);
        parts.pop();
    }
}

fn rank(parts: &[u64]) -> i64 {
    let largest = parts.first().copied().unwrap_or(0) as i64;
    largest - parts.len() as i64
}

fn crank(parts: &[u64]) -> i64 {
    // Parts are non-increasing, so the 1s form a suffix.
    let ones = parts.iter().rev().take_while(|&&p| p == 1).count() as u64;
    if ones == 0 {
        parts.first().copied().unwrap_or(0) as i64
    } else {
        let above = parts.iter().take_while(|&&p| p > ones).count() as i64;
        above - ones as i64
    }
}
