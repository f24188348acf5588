//! Exact partition numbers p(0..=max_n) via Euler's pentagonal recurrence
//!
//!   p(i) = sum_{j>=1} (-1)^{j-1} [ p(i - j(3j-1)/2) + p(i - j(3j+1)/2) ],
//!
//! with p(r) = 0 for r < 0. Values are arbitrary-precision integers;
//! p(10^5) already has 347 decimal digits. Construction is sequential
//! (each value depends on earlier ones); afterwards the table is immutable
//! and safe to share across threads.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_bigint::BigUint;
use num_traits::Zero;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Hard ceiling on table size, so a mistyped request cannot exhaust memory.
pub const MAX_TABLE_N: u64 = 2_000_000;

const CACHE_MAGIC: [u8; 4] = *b"PTAB";
const CACHE_VERSION: u32 = 1;
/// Fixed seed for the load-time spot check; a fixed seed keeps corruption
/// tests deterministic.
const SPOT_CHECK_SEED: u64 = 0x5054_4142;
const SPOT_CHECK_COUNT: usize = 16;
/// No p(i) below MAX_TABLE_N needs anywhere near this many bytes; a larger
/// length field in a cache file means the file is damaged.
const MAX_VALUE_BYTES: u32 = 4096;

pub struct PartitionTable {
    values: Vec<BigUint>,
    zero: BigUint,
}

impl PartitionTable {
    /// Builds p(0..=max_n) from scratch.
    pub fn build(max_n: u64) -> Result<Self> {
        if max_n > MAX_TABLE_N {
            return Err(Error::Budget {
                what: "partition table",
                requested: max_n,
                budget: MAX_TABLE_N,
            });
        }
        let len = max_n as usize + 1;
        let mut values = Vec::with_capacity(len);
        values.push(BigUint::from(1u32));
        for i in 1..len {
            values.push(pentagonal_step(&values, i));
        }
        Ok(PartitionTable {
            values,
            zero: BigUint::zero(),
        })
    }

    pub fn max_n(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    /// p(r), with p(r) = 0 for every negative r.
    ///
    /// # Edge cases
    /// Negative indices return zero rather than an error; only indices above
    /// the table top are rejected.
    pub fn p_at(&self, r: i64) -> Result<&BigUint> {
        if r < 0 {
            return Ok(&self.zero);
        }
        let idx = r as u64;
        if idx > self.max_n() {
            return Err(Error::OutOfRange {
                index: r,
                max_n: self.max_n(),
            });
        }
        Ok(&self.values[idx as usize])
    }

    /// Writes the cache format: magic "PTAB", little-endian u32 version,
    /// little-endian u64 max_n, then per value a little-endian u32 byte
    /// length followed by the little-endian magnitude bytes.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        w.write_all(&CACHE_MAGIC)?;
        w.write_all(&CACHE_VERSION.to_le_bytes())?;
        w.write_all(&self.max_n().to_le_bytes())?;
        for v in &self.values {
            let bytes = v.to_bytes_le();
            w.write_all(&(bytes.len() as u32).to_le_bytes())?;
            w.write_all(&bytes)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a cache file back, then checks structure before trusting it:
    /// exact magic and version, p(0) = p(1) = 1, a nondecreasing scan, and
    /// a recurrence re-computation at the seeded spot-check indices.
    pub fn load(path: &Path) -> Result<Self> {
        let mut r = BufReader::new(File::open(path)?);

        let mut magic = [0u8; 4];
        read_exact(&mut r, &mut magic, "magic")?;
        if magic != CACHE_MAGIC {
            return Err(Error::CorruptCache("bad magic bytes".into()));
        }
        let mut buf4 = [0u8; 4];
        read_exact(&mut r, &mut buf4, "version")?;
        let version = u32::from_le_bytes(buf4);
        if version != CACHE_VERSION {
            return Err(Error::CorruptCache(format!(
                "unsupported version {version}"
            )));
        }
        let mut buf8 = [0u8; 8];
        read_exact(&mut r, &mut buf8, "max_n")?;
        let max_n = u64::from_le_bytes(buf8);
        if max_n > MAX_TABLE_N {
            return Err(Error::CorruptCache(format!(
                "stored max_n {max_n} exceeds the table budget"
            )));
        }

        let mut values = Vec::with_capacity(max_n as usize + 1);
        for i in 0..=max_n {
            read_exact(&mut r, &mut buf4, "value length")?;
            let len = u32::from_le_bytes(buf4);
            if len > MAX_VALUE_BYTES {
                return Err(Error::CorruptCache(format!(
                    "value {i} has implausible byte length {len}"
                )));
            }
            let mut bytes = vec![0u8; len as usize];
            read_exact(&mut r, &mut bytes, "value bytes")?;
            values.push(BigUint::from_bytes_le(&bytes));
        }
        let mut probe = [0u8; 1];
        if r.read(&mut probe)? != 0 {
            return Err(Error::CorruptCache("trailing bytes after last value".into()));
        }

        let one = BigUint::from(1u32);
        if values[0] != one {
            return Err(Error::CorruptCache("p(0) != 1".into()));
        }
        if max_n >= 1 && values[1] != one {
            return Err(Error::CorruptCache("p(1) != 1".into()));
        }
        for i in 1..values.len() {
            if values[i] < values[i - 1] {
                return Err(Error::CorruptCache(format!(
                    "values decrease at index {i}"
                )));
            }
        }
        for idx in spot_check_indices(max_n) {
            let recomputed = pentagonal_step(&values, idx as usize);
            if recomputed != values[idx as usize] {
                return Err(Error::RecurrenceMismatch { index: idx });
            }
        }

        Ok(PartitionTable {
            values,
            zero: BigUint::zero(),
        })
    }
}

/// One pentagonal-recurrence step: p(i) from the already-known p(0..i).
/// Positive and negative contributions accumulate separately so the
/// arithmetic stays in unsigned integers until the final subtraction.
fn pentagonal_step(values: &[BigUint], i: usize) -> BigUint {
    let mut pos = BigUint::zero();
    let mut neg = BigUint::zero();
    let mut j = 1usize;
    loop {
        let g1 = j * (3 * j - 1) / 2;
        if g1 > i {
            break;
        }
        let g2 = g1 + j;
        let acc = if j % 2 == 1 { &mut pos } else { &mut neg };
        *acc += &values[i - g1];
        if g2 <= i {
            *acc += &values[i - g2];
        }
        j += 1;
    }
    pos - neg
}

/// The indices the loader re-derives from the recurrence. Public so tests
/// can corrupt a covered index on purpose.
pub fn spot_check_indices(max_n: u64) -> Vec<u64> {
    if max_n < 2 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SPOT_CHECK_SEED);
    (0..SPOT_CHECK_COUNT)
        .map(|_| 2 + rng.next_u64() % (max_n - 1))
        .collect()
}

fn read_exact(r: &mut impl Read, buf: &mut [u8], what: &str) -> Result<()> {
    r.read_exact(buf)
        .map_err(|_| Error::CorruptCache(format!("truncated while reading {what}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values_match_direct_enumeration() {
        let t = PartitionTable::build(9).unwrap();
        let expect = [1u32, 1, 2, 3, 5, 7, 11, 15, 22, 30];
        for (i, e) in expect.iter().enumerate() {
            assert_eq!(t.p_at(i as i64).unwrap(), &BigUint::from(*e));
        }
    }

    #[test]
    fn known_checkpoints() {
        let t = PartitionTable::build(200).unwrap();
        assert_eq!(t.p_at(50).unwrap(), &BigUint::from(204_226u64));
        assert_eq!(t.p_at(100).unwrap(), &BigUint::from(190_569_292u64));
        assert_eq!(t.p_at(200).unwrap(), &BigUint::from(3_972_999_029_388u64));
    }

    #[test]
    fn degenerate_table() {
        let t = PartitionTable::build(0).unwrap();
        assert_eq!(t.max_n(), 0);
        assert_eq!(t.p_at(0).unwrap(), &BigUint::from(1u32));
    }

    #[test]
    fn negative_arguments_are_zero() {
        let t = PartitionTable::build(5).unwrap();
        assert!(t.p_at(-1).unwrap().is_zero());
        assert!(t.p_at(-3).unwrap().is_zero());
        assert!(t.p_at(i64::MIN).unwrap().is_zero());
    }

    #[test]
    fn out_of_range_is_an_error() {
        let t = PartitionTable::build(5).unwrap();
        assert!(matches!(
            t.p_at(6),
            Err(Error::OutOfRange { index: 6, max_n: 5 })
        ));
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            PartitionTable::build(MAX_TABLE_N + 1),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn values_never_decrease() {
        let t = PartitionTable::build(500).unwrap();
        for w in t.values().windows(2) {
            assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn spot_check_indices_are_stable_and_in_range() {
        let a = spot_check_indices(1000);
        let b = spot_check_indices(1000);
        assert_eq!(a, b);
        assert_eq!(a.len(), 16);
        assert!(a.iter().all(|&i| (2..=1000).contains(&i)));
        assert!(spot_check_indices(1).is_empty());
    }
}
