//! End-to-end exercises of the on-disk table cache: byte-stable
//! round-trips and refusal to load damaged files.

use std::fs;

use krank_core::{spot_check_indices, Error, PartitionTable};

/// Byte offset of the length-prefixed value record for `index`.
fn value_offset(bytes: &[u8], index: u64) -> usize {
    let mut at = 4 + 4 + 8; // magic, version, max_n
    for _ in 0..index {
        let len = u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap()) as usize;
        at += 4 + len;
    }
    at
}

#[test]
fn round_trip_is_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path_a = dir.path().join("a.bin");
    let path_b = dir.path().join("b.bin");

    let table = PartitionTable::build(600).unwrap();
    table.save(&path_a).unwrap();
    let loaded = PartitionTable::load(&path_a).unwrap();
    assert_eq!(loaded.max_n(), 600);
    assert_eq!(loaded.values(), table.values());

    loaded.save(&path_b).unwrap();
    assert_eq!(fs::read(&path_a).unwrap(), fs::read(&path_b).unwrap());
}

#[test]
fn truncated_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.bin");
    PartitionTable::build(300).unwrap().save(&path).unwrap();

    let bytes = fs::read(&path).unwrap();
    fs::write(&path, &bytes[..bytes.len() / 2]).unwrap();
    match PartitionTable::load(&path).err() {
        Some(Error::CorruptCache(msg)) => assert!(msg.contains("truncated"), "{msg}"),
        other => panic!("expected truncation error, got {other:?}"),
    }
}

#[test]
fn trailing_garbage_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.bin");
    PartitionTable::build(50).unwrap().save(&path).unwrap();

    let mut bytes = fs::read(&path).unwrap();
    bytes.push(0);
    fs::write(&path, &bytes).unwrap();
    assert!(matches!(
        PartitionTable::load(&path),
        Err(Error::CorruptCache(_))
    ));
}

#[test]
fn bad_magic_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.bin");
    PartitionTable::build(50).unwrap().save(&path).unwrap();

    let mut bytes = fs::read(&path).unwrap();
    bytes[0] ^= 0xff;
    fs::write(&path, &bytes).unwrap();
    assert!(matches!(
        PartitionTable::load(&path),
        Err(Error::CorruptCache(_))
    ));
}

#[test]
fn corruption_at_spot_check_index_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.bin");
    let max_n = 500;
    PartitionTable::build(max_n).unwrap().save(&path).unwrap();

    // Nudge one covered value up by one. p(n) grows by more than one per
    // step here, so the file stays monotone and only the recurrence
    // re-computation can notice.
    let target = *spot_check_indices(max_n).iter().max().unwrap();
    let mut bytes = fs::read(&path).unwrap();
    let at = value_offset(&bytes, target);
    let first = at + 4;
    assert!(bytes[first] < 0xff, "pick a different index");
    bytes[first] += 1;
    fs::write(&path, &bytes).unwrap();

    match PartitionTable::load(&path).err() {
        Some(Error::RecurrenceMismatch { index }) => assert_eq!(index, target),
        other => panic!("expected a recurrence mismatch, got {other:?}"),
    }
}
