#![allow(dead_code)]

use std::path::PathBuf;

use voterfit::ingest::{binarize, load_elections, ElectionRecord};
use voterfit::ObservationSeries;

pub const UK: &str = "uk_general_elections.csv";
pub const UK_2024: &str = "uk_general_elections_2024.csv";
pub const US: &str = "us_presidential_elections.csv";

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

pub fn records(name: &str) -> Vec<ElectionRecord> {
    load_elections(data_path(name)).unwrap()
}

pub fn series(name: &str, party: &str) -> ObservationSeries {
    binarize(&records(name), party, 100).unwrap()
}

/// Reference `(s0, s1)` per election, each fitted on the elections before it.
/// UK rows run 1924 to 2019, US rows 1920 to 2020.
#[rustfmt::skip]
pub const REFERENCE_CON: [(u32, u32); 25] = [
    (62, 38), (20, 21), (28, 20), (1, 5), (9, 10), (11, 10), (13, 12), (13, 12), (15, 14), (16, 15),
    (18, 16), (18, 16), (19, 17), (19, 16), (19, 16), (20, 17), (20, 17), (22, 18), (22, 18), (19, 15),
    (18, 14), (17, 13), (18, 13), (18, 13), (19, 14),
];
#[rustfmt::skip]
pub const REFERENCE_LAB: [(u32, u32); 25] = [
    (65, 30), (61, 30), (55, 30), (53, 27), (48, 26), (26, 17), (23, 16), (23, 16), (22, 16), (25, 18),
    (25, 18), (24, 18), (26, 19), (26, 19), (26, 19), (28, 20), (22, 15), (21, 14), (23, 15), (24, 16),
    (24, 16), (24, 16), (22, 14), (22, 14), (22, 14),
];
#[rustfmt::skip]
pub const REFERENCE_REP: [(u32, u32); 26] = [
    (23, 23), (15, 21), (18, 23), (18, 23), (16, 18), (13, 13), (14, 14), (15, 15), (17, 16), (16, 16),
    (16, 16), (17, 17), (17, 16), (17, 16), (15, 15), (16, 16), (16, 16), (16, 16), (16, 16), (15, 15),
    (16, 15), (16, 15), (16, 16), (17, 16), (17, 16), (18, 17),
];
#[rustfmt::skip]
pub const REFERENCE_DEM: [(u32, u32); 26] = [
    (44, 42), (18, 12), (15, 8), (18, 11), (10, 8), (7, 7), (9, 8), (9, 8), (10, 9), (11, 10),
    (11, 10), (12, 11), (10, 10), (12, 11), (11, 10), (12, 11), (13, 11), (13, 11), (14, 12), (14, 12),
    (15, 13), (15, 13), (15, 13), (16, 14), (16, 14), (16, 14),
];

/// `(time, got, want)` for a trace row that differs from the reference.
pub type Mismatch = (f64, (u32, u32), (u32, u32));

pub fn mismatches(trace: &[(f64, voterfit::StubbornConfig)], table: &[(u32, u32)]) -> Vec<Mismatch> {
    assert_eq!(trace.len(), table.len());
    trace
        .iter()
        .zip(table)
        .filter_map(|((t, c), &want)| {
            let got = (c.s0(), c.s1());
            (got != want).then_some((*t, got, want))
        })
        .collect()
}
