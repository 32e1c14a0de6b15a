use std::collections::{BTreeMap, VecDeque};

use crate::sim::SimTime;
use crate::topology::{Channel, NodeId};

/// Sliding window of the last `W` trip times reported for each destination.
#[derive(Clone, Debug, PartialEq)]
pub struct DelayTable {
    window: usize,
    entries: BTreeMap<NodeId, DelayEntry>,
}

#[derive(Clone, Debug, Default, PartialEq)]
struct DelayEntry {
    samples: VecDeque<f64>,
    last_via: BTreeMap<NodeId, f64>,
}

impl DelayTable {
    pub fn new(window: usize) -> Self {
        DelayTable { window: window.max(1), entries: BTreeMap::new() }
    }

    /// Arithmetic mean of the buffered trips to `dst`.
    pub fn mean(&self, dst: NodeId) -> Option<f64> {
        let e = self.entries.get(&dst)?;
        if e.samples.is_empty() {
            return None;
        }
        Some(e.samples.iter().sum::<f64>() / e.samples.len() as f64)
    }

    pub fn len(&self, dst: NodeId) -> usize {
        self.entries.get(&dst).map_or(0, |e| e.samples.len())
    }

    pub fn record(&mut self, dst: NodeId, via: NodeId, trip_us: f64) {
        let e = self.entries.entry(dst).or_default();
        if e.samples.len() == self.window {
            e.samples.pop_front();
        }
        e.samples.push_back(trip_us);
        e.last_via.insert(via, trip_us);
    }

    /// Most recent trip to `dst` measured through neighbour `via`.
    pub fn last_trip_via(&self, dst: NodeId, via: NodeId) -> Option<f64> {
        self.entries.get(&dst)?.last_via.get(&via).copied()
    }

    pub fn destinations(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.entries.keys().copied()
    }
}

/// Per-channel queue lengths as advertised in a hello.
pub type QueueReport = Vec<(Channel, u32)>;

pub fn queue_on(report: &[(Channel, u32)], channel: Channel) -> u32 {
    report.iter().find(|(c, _)| *c == channel).map_or(0, |(_, q)| *q)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinkEstimate {
    pub lq_us: f64,
    /// Queue of the far endpoint on the link's channel.
    pub neighbor_queue: u32,
    /// Queues of the far endpoint's own neighbours on the link's channel.
    pub two_hop_queues: BTreeMap<NodeId, u32>,
    pub last_hello_at: SimTime,
}

/// Outgoing link estimates keyed by `(neighbour, channel)`, plus the latest
/// queue report heard from each neighbour (re-advertised in our own hellos).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LinkEstimationTable {
    links: BTreeMap<(NodeId, Channel), LinkEstimate>,
    reports: BTreeMap<NodeId, (SimTime, QueueReport)>,
}

impl LinkEstimationTable {
    pub fn update(&mut self, neighbor: NodeId, channel: Channel, estimate: LinkEstimate) {
        self.links.insert((neighbor, channel), estimate);
    }

    pub fn record_report(&mut self, neighbor: NodeId, at: SimTime, report: QueueReport) {
        self.reports.insert(neighbor, (at, report));
    }

    pub fn get(&self, neighbor: NodeId, channel: Channel) -> Option<&LinkEstimate> {
        self.links.get(&(neighbor, channel))
    }

    pub fn get_mut(&mut self, neighbor: NodeId, channel: Channel) -> Option<&mut LinkEstimate> {
        self.links.get_mut(&(neighbor, channel))
    }

    /// The estimate if it was refreshed within `max_age_us`.
    pub fn fresh(&self, neighbor: NodeId, channel: Channel, now: SimTime, max_age_us: u64) -> Option<&LinkEstimate> {
        self.get(neighbor, channel).filter(|e| now.0.saturating_sub(e.last_hello_at.0) <= max_age_us)
    }

    /// Neighbour queue reports no older than `max_age_us`, ascending by id.
    pub fn fresh_reports(&self, now: SimTime, max_age_us: u64) -> Vec<(NodeId, QueueReport)> {
        self.reports
            .iter()
            .filter(|(_, (at, _))| now.0.saturating_sub(at.0) <= max_age_us)
            .map(|(n, (_, r))| (*n, r.clone()))
            .collect()
    }

    /// Forget everything about a neighbour that is no longer reachable.
    pub fn forget(&mut self, neighbor: NodeId) {
        self.links.retain(|(n, _), _| *n != neighbor);
        self.reports.remove(&neighbor);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(NodeId, Channel), &LinkEstimate)> {
        self.links.iter()
    }
}
