//! Seed and parameter sweeps over a scenario, and their CSV output.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{RunError, SimError};
use crate::metrics::{self, MetricsLedger};
use crate::network::{RunOutput, Simulation};
use crate::scenario::Scenario;

/// One CSV row; field order is the column order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRow {
    pub scenario: String,
    pub routing: String,
    pub seed: u64,
    pub p0: f64,
    pub ant_rate: f64,
    pub flows: usize,
    pub node_speed: f64,
    pub mobile_fraction: f64,
    pub throughput_bps: f64,
    pub mean_delay_us: f64,
    pub pdf: f64,
    pub nrl: f64,
    pub loss_queue: u64,
    pub loss_mac: u64,
    pub loss_ttl: u64,
    pub loss_noroute: u64,
    /// Empty when the run never settled (or had no change point).
    pub learning_time_us: Option<u64>,
}

impl RunRow {
    /// Metrics are pure functions of the ledger, so a persisted ledger
    /// reproduces its row exactly.
    pub fn from_ledger(s: &Scenario, seed: u64, l: &MetricsLedger) -> Self {
        let learning = metrics::ledger_learning_time(l, s.run.learn_window_us, s.run.learn_epsilon, s.run.settle_windows)
            .and_then(|x| x.micros());
        let mobile = s.mobility.enabled();
        RunRow {
            scenario: s.name.clone(),
            routing: s.routing.label().to_string(),
            seed,
            p0: s.params.p0,
            ant_rate: s.params.ant_rate_hz,
            flows: s.flows.len(),
            node_speed: if mobile { s.mobility.speed_mps } else { 0.0 },
            mobile_fraction: if mobile { s.mobility.mobile_fraction } else { 0.0 },
            throughput_bps: metrics::throughput(l),
            mean_delay_us: metrics::mean_delay(l),
            pdf: metrics::delivery_fraction(l),
            nrl: metrics::nrl(l),
            loss_queue: l.loss.queue_overflow,
            loss_mac: l.loss.mac_loss,
            loss_ttl: l.loss.ttl_expired,
            loss_noroute: l.loss.no_route,
            learning_time_us: learning,
        }
    }
}

pub const CSV_HEADER: &[&str] = &[
    "scenario",
    "routing",
    "seed",
    "p0",
    "ant_rate",
    "flows",
    "node_speed",
    "mobile_fraction",
    "throughput_bps",
    "mean_delay_us",
    "pdf",
    "nrl",
    "loss_queue",
    "loss_mac",
    "loss_ttl",
    "loss_noroute",
    "learning_time_us",
];

/// Run a sweep-free scenario once.
pub fn run_once(s: &Scenario, seed: u64, trace: Option<Box<dyn Write + Send>>) -> Result<RunOutput, RunError> {
    let tag = |source: SimError| RunError { scenario: s.name.clone(), seed, source };
    let setup = s.setup().map_err(|e| tag(SimError::Config(e.to_string())))?;
    Simulation::new(setup, seed, trace).map_err(tag)?.run().map_err(tag)
}

/// One job of an experiment: a seed at a sweep point.
#[derive(Clone, Debug)]
pub struct Job {
    pub seed: u64,
    pub point: Vec<(String, String)>,
    pub scenario: Scenario,
}

/// Jobs in output order: seeds outermost, sweep points within a seed.
pub fn jobs(s: &Scenario, seeds: &[u64]) -> Result<Vec<Job>, RunError> {
    let points = s.sweep_points();
    let mut out = Vec::with_capacity(seeds.len() * points.len());
    for &seed in seeds {
        for p in &points {
            let scenario = s
                .at_point(p)
                .map_err(|m| RunError { scenario: s.name.clone(), seed, source: SimError::Config(m) })?;
            out.push(Job { seed, point: p.clone(), scenario });
        }
    }
    Ok(out)
}

/// Run every (seed, sweep point) in parallel; rows come back in job order.
pub fn run_experiment(s: &Scenario, seeds: &[u64]) -> Result<Vec<RunRow>, RunError> {
    let jobs = jobs(s, seeds)?;
    jobs.par_iter()
        .map(|j| run_once(&j.scenario, j.seed, None).map(|o| RunRow::from_ledger(&j.scenario, j.seed, &o.ledger)))
        .collect()
}

/// Ledgers for every job, for analyses that need more than the CSV row.
pub fn run_ledgers(s: &Scenario, seeds: &[u64]) -> Result<Vec<(Job, MetricsLedger)>, RunError> {
    let jobs = jobs(s, seeds)?;
    jobs.into_par_iter()
        .map(|j| {
            let out = run_once(&j.scenario, j.seed, None)?;
            Ok((j, out.ledger))
        })
        .collect()
}

pub fn write_csv<W: Write>(out: W, rows: &[RunRow]) -> Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(rows: &[RunRow]) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("csv output is utf-8")
}
