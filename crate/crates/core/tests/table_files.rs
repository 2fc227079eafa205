use std::fs;

use num_bigint::BigInt;
use opart::exact::{build_table, load_table, save_table, OverpartitionTable, TableError};

const FIXTURE: &str = include_str!("fixtures/table_8.tbl");

#[test]
fn fixture_matches_build() {
    let parsed = OverpartitionTable::parse(FIXTURE).unwrap();
    assert_eq!(parsed, build_table(8).unwrap());
    assert_eq!(parsed.to_file_string(), FIXTURE);
    assert_eq!(parsed.get(8).unwrap(), &BigInt::from(100));
}

#[test]
fn save_load_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.tbl");
    let table = build_table(500).unwrap();
    save_table(&table, &path).unwrap();
    let back = load_table(&path).unwrap();
    assert_eq!(back, table);
    assert_eq!(back.digest(), table.digest());
    let text = fs::read_to_string(&path).unwrap();
    // Header, 501 records, trailer.
    assert_eq!(text.lines().count(), 503);
}

#[test]
fn digest_is_deterministic() {
    assert_eq!(build_table(300).unwrap().digest(), build_table(300).unwrap().digest());
    assert_ne!(build_table(300).unwrap().digest(), build_table(301).unwrap().digest());
}

#[test]
fn corrupted_files_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.tbl");
    fs::write(&path, FIXTURE.replace("\t100\n", "\t101\n")).unwrap();
    assert!(matches!(load_table(&path), Err(TableError::Checksum { .. })));
    fs::write(&path, &FIXTURE[..FIXTURE.len() / 2]).unwrap();
    assert!(matches!(load_table(&path), Err(TableError::Format(_))));
    assert!(matches!(load_table(dir.path().join("missing.tbl")), Err(TableError::Io(_))));
}

#[test]
fn large_table_prefix_agrees() {
    let big = build_table(5003).unwrap();
    let small = build_table(1000).unwrap();
    assert_eq!(&big.values()[..=1000], small.values());
    assert_eq!(big.get(5003).unwrap().to_string().len(), 92);
}
