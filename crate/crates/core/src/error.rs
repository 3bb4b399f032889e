use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("population size n = {0} is degenerate, the model needs at least two nodes")]
    DegeneratePopulation(u32),

    #[error("stubborn couple (s0 = {s0}, s1 = {s1}) is not admissible for n = {n}: need 1 <= s0 + s1 <= n")]
    InvalidConfig { n: u32, s0: u32, s1: u32 },

    #[error("state {state} lies outside the state space {{{low}, ..., {high}}}")]
    StateOutOfRange { state: u32, low: u32, high: u32 },

    #[error("time must be finite and non-negative, got {0}")]
    InvalidTime(f64),

    #[error("at least {} datapoints required, got {got}", spelled(*.needed))]
    InsufficientData { needed: usize, got: usize },

    #[error("invalid observation series: {0}")]
    InvalidSeries(String),

    #[error("no stubborn couple gives the observed series a positive likelihood")]
    NoFeasibleModel,

    #[error("no election at or after {start_time} to evaluate")]
    EmptyEvaluation { start_time: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{path}: line {line}: {message}")]
    Parse { path: PathBuf, line: u64, message: String },

    #[error("{path}: line {line}: year {year} does not follow {previous}, times must be strictly increasing")]
    Ordering { path: PathBuf, line: u64, year: f64, previous: f64 },

    #[error("party {party} has no share recorded for the election of {time}")]
    MissingData { party: String, time: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn spelled(count: usize) -> String {
    match count {
        1 => "one".into(),
        2 => "two".into(),
        3 => "three".into(),
        other => other.to_string(),
    }
}
