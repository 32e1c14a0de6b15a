use thiserror::Error;

/// Fatal conditions that abort a simulation run.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("event scheduled in the past (now {now} us, requested {requested} us)")]
    ScheduleInPast { now: u64, requested: u64 },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("trace output failed: {0}")]
    Trace(String),
}

/// A scenario document that failed to parse or validate.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}: {message}")]
pub struct ConfigError {
    /// 1-based line number; 0 when the problem is not tied to one line.
    pub line: usize,
    pub message: String,
}

impl ConfigError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ConfigError { line, message: message.into() }
    }
}

/// No eligible next hop exists.
#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("no route")]
pub struct NoRoute;

/// Error raised by a single run of an experiment, tagged with its origin.
#[derive(Debug, Error)]
#[error("scenario {scenario}, seed {seed}: {source}")]
pub struct RunError {
    pub scenario: String,
    pub seed: u64,
    #[source]
    pub source: SimError,
}
