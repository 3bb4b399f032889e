//! Election results in long CSV form, reduced to one party against the rest.
//!
//! Files are UTF-8 with the header `year,party,share_percent`, one row per
//! party and election. `year` is a decimal year (`1974.12` for February
//! 1974), `party` an uppercase token, `share_percent` a vote share in
//! `[0, 100]`. Rows of one election are contiguous, elections ascend.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::Read;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimate::{Observation, ObservationSeries};

pub const HEADER: [&str; 3] = ["year", "party", "share_percent"];

/// Slack on the per-election share total for rounding in the source.
const TOTAL_SHARE_SLACK: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ElectionRecord {
    pub time: f64,
    pub shares: BTreeMap<String, f64>,
}

impl ElectionRecord {
    pub fn total_share(&self) -> f64 {
        self.shares.values().sum()
    }
}

fn is_party_token(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_uppercase() || c.is_ascii_digit() || c == '_')
}

pub fn load_elections(path: impl AsRef<Path>) -> Result<Vec<ElectionRecord>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    parse_elections(file, path)
}

/// Parses election rows from any reader; `origin` only labels errors.
pub fn parse_elections<R: Read>(reader: R, origin: impl AsRef<Path>) -> Result<Vec<ElectionRecord>> {
    let origin: PathBuf = origin.as_ref().to_path_buf();
    let parse_error = |line: u64, message: String| Error::Parse { path: origin.clone(), line, message };

    let mut csv = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header = csv.headers().map_err(|e| parse_error(1, e.to_string()))?;
    if header.iter().ne(HEADER.iter().copied()) {
        return Err(parse_error(1, format!("expected header `{}`", HEADER.join(","))));
    }

    let mut records: Vec<ElectionRecord> = Vec::new();
    for row in csv.records() {
        let row = row.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_error(line, e.to_string())
        })?;
        let line = row.position().map_or(0, |p| p.line());
        let year: f64 = row[0]
            .parse()
            .ok()
            .filter(|y: &f64| y.is_finite())
            .ok_or_else(|| parse_error(line, format!("invalid year `{}`", &row[0])))?;
        let party = &row[1];
        if !is_party_token(party) {
            return Err(parse_error(line, format!("party `{party}` is not an uppercase token")));
        }
        let share: f64 = row[2]
            .parse()
            .ok()
            .filter(|s: &f64| (0.0..=100.0).contains(s))
            .ok_or_else(|| parse_error(line, format!("share `{}` is not a percentage in [0, 100]", &row[2])))?;

        match records.last_mut() {
            Some(last) if last.time == year => {
                if last.shares.insert(party.to_string(), share).is_some() {
                    return Err(parse_error(line, format!("party {party} listed twice for {year}")));
                }
                if last.total_share() > 100.0 + TOTAL_SHARE_SLACK {
                    return Err(parse_error(line, format!("shares for {year} add up to more than 100%")));
                }
            }
            Some(last) if year < last.time => {
                return Err(Error::Ordering { path: origin.clone(), line, year, previous: last.time });
            }
            _ => records.push(ElectionRecord { time: year, shares: BTreeMap::from([(party.to_string(), share)]) }),
        }
    }
    Ok(records)
}

/// Count on the `0..=n` scale for a percentage share, rounding halves to even.
pub fn share_to_count(share: f64, n: u32) -> u32 {
    (share * (n as f64 / 100.0)).round_ties_even() as u32
}

/// `target` against every other party, as counts out of `n`.
pub fn binarize(records: &[ElectionRecord], target: &str, n: u32) -> Result<ObservationSeries> {
    let points = records
        .iter()
        .map(|r| {
            let share =
                r.shares.get(target).ok_or_else(|| Error::MissingData { party: target.to_string(), time: r.time })?;
            Ok(Observation { time: r.time, count: share_to_count(*share, n) })
        })
        .collect::<Result<Vec<_>>>()?;
    ObservationSeries::new(n, points)
}
