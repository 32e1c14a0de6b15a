//! Constant-bit-rate flows and the load script that switches them on and off.

use std::collections::BTreeSet;

use crate::sim::RngStream;
use crate::topology::NodeId;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlowDst {
    Node(NodeId),
    RandomGateway,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowSpec {
    pub id: u32,
    pub src: NodeId,
    pub dst: FlowDst,
    pub rate_pps: f64,
    pub start_us: u64,
    /// `None` runs until the horizon.
    pub stop_us: Option<u64>,
    pub pkt_bytes: u64,
}

impl FlowSpec {
    pub fn stop_or(&self, horizon_us: u64) -> u64 {
        self.stop_us.unwrap_or(horizon_us)
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.rate_pps > 0.0 && self.rate_pps.is_finite()) {
            return Err(format!("flow {}: rate must be positive", self.id));
        }
        if let Some(stop) = self.stop_us {
            if stop <= self.start_us {
                return Err(format!("flow {}: stop must come after start", self.id));
            }
        }
        if self.dst == FlowDst::Node(self.src) {
            return Err(format!("flow {}: source and destination coincide", self.id));
        }
        if self.pkt_bytes == 0 {
            return Err(format!("flow {}: packet size must be positive", self.id));
        }
        Ok(())
    }

    /// Offset of this flow's first packet: flows sharing a rate are spread
    /// evenly across one period, ordered by their index.
    pub fn phase_offset_us(&self, index: usize, n_flows: usize) -> u64 {
        let period = 1e6 / self.rate_pps;
        (period * index as f64 / n_flows.max(1) as f64).floor() as u64
    }

    /// Time of the `k`-th injection, computed from `k` directly so rounding
    /// never accumulates.
    pub fn injection_time(&self, k: u64, offset_us: u64) -> u64 {
        self.start_us + offset_us + (k as f64 * 1e6 / self.rate_pps).floor() as u64
    }

    /// Number of injections in `[start, stop)`.
    pub fn injection_count(&self, offset_us: u64, horizon_us: u64) -> u64 {
        let stop = self.stop_or(horizon_us);
        let mut k = 0;
        while self.injection_time(k, offset_us) < stop {
            k += 1;
        }
        k
    }
}

/// Flows with resolved destinations.
pub fn resolve_destinations(flows: &[FlowSpec], gateways: &[NodeId], rng: &mut RngStream) -> Result<Vec<(FlowSpec, NodeId)>, String> {
    flows
        .iter()
        .map(|f| {
            let dst = match f.dst {
                FlowDst::Node(n) => n,
                FlowDst::RandomGateway => {
                    let candidates: Vec<NodeId> = gateways.iter().copied().filter(|g| *g != f.src).collect();
                    if candidates.is_empty() {
                        return Err(format!("flow {}: no gateway to send to", f.id));
                    }
                    candidates[rng.below(candidates.len())]
                }
            };
            Ok((f.clone(), dst))
        })
        .collect()
}

pub fn check_unique_ids(flows: &[FlowSpec]) -> Result<(), String> {
    let mut seen = BTreeSet::new();
    for f in flows {
        if !seen.insert(f.id) {
            return Err(format!("duplicate flow id {}", f.id));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LoadChange {
    Add(Vec<u32>),
    Remove(Vec<u32>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoadAction {
    pub at_us: u64,
    pub change: LoadChange,
}

/// Time-ordered flow additions and removals.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LoadScript {
    pub actions: Vec<LoadAction>,
}

impl LoadScript {
    /// Derive the script from flow lifetimes; stops at or past the horizon
    /// are not changes within the run.
    pub fn from_flows(flows: &[FlowSpec], horizon_us: u64) -> Self {
        let mut times: BTreeSet<u64> = BTreeSet::new();
        for f in flows {
            times.insert(f.start_us);
            if let Some(s) = f.stop_us.filter(|s| *s < horizon_us) {
                times.insert(s);
            }
        }
        let mut actions = Vec::new();
        for t in times {
            let adds: Vec<u32> = flows.iter().filter(|f| f.start_us == t).map(|f| f.id).collect();
            let removes: Vec<u32> =
                flows.iter().filter(|f| f.stop_us == Some(t) && t < horizon_us).map(|f| f.id).collect();
            if !removes.is_empty() {
                actions.push(LoadAction { at_us: t, change: LoadChange::Remove(removes) });
            }
            if !adds.is_empty() {
                actions.push(LoadAction { at_us: t, change: LoadChange::Add(adds) });
            }
        }
        LoadScript { actions }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.actions.windows(2).any(|w| w[1].at_us < w[0].at_us) {
            return Err("load script times must be nondecreasing".into());
        }
        Ok(())
    }

    /// Distinct action times.
    pub fn change_points(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.actions.iter().map(|a| a.at_us).collect();
        v.dedup();
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flow(id: u32, rate: f64, start_s: u64, stop_s: Option<u64>) -> FlowSpec {
        FlowSpec {
            id,
            src: NodeId(0),
            dst: FlowDst::Node(NodeId(1)),
            rate_pps: rate,
            start_us: start_s * 1_000_000,
            stop_us: stop_s.map(|s| s * 1_000_000),
            pkt_bytes: 512,
        }
    }

    #[test]
    fn cbr_count() {
        let f = flow(0, 100.0, 0, Some(10));
        assert_eq!(f.injection_count(0, 60_000_000), 1000);
        assert_eq!(f.injection_count(f.phase_offset_us(1, 2), 60_000_000), 1000);
    }

    #[test]
    fn nothing_after_stop() {
        let f = flow(0, 33.0, 2, Some(5));
        let n = f.injection_count(0, 60_000_000);
        assert!(f.injection_time(n - 1, 0) < 5_000_000);
        assert!(f.injection_time(n, 0) >= 5_000_000);
        assert!((n as f64 - 33.0 * 3.0).abs() <= 1.0);
    }

    #[test]
    fn equal_rate_flows_interleave() {
        let a = flow(0, 10.0, 0, None);
        let b = flow(1, 10.0, 0, None);
        let oa = a.phase_offset_us(0, 2);
        let ob = b.phase_offset_us(1, 2);
        let mut merged: Vec<(u64, u32)> = (0..5).flat_map(|k| [(a.injection_time(k, oa), 0), (b.injection_time(k, ob), 1)]).collect();
        merged.sort();
        let order: Vec<u32> = merged.iter().map(|x| x.1).collect();
        assert_eq!(order, vec![0, 1, 0, 1, 0, 1, 0, 1, 0, 1]);
    }

    #[test]
    fn learning_script_has_three_change_points() {
        let flows = vec![flow(0, 50.0, 0, None), flow(1, 50.0, 10, Some(20)), flow(2, 50.0, 10, Some(20)), flow(3, 50.0, 10, Some(20))];
        let s = LoadScript::from_flows(&flows, 30_000_000);
        assert_eq!(s.change_points(), vec![0, 10_000_000, 20_000_000]);
        assert_eq!(s.actions[1].change, LoadChange::Add(vec![1, 2, 3]));
        assert_eq!(s.actions[2].change, LoadChange::Remove(vec![1, 2, 3]));
    }

    #[test]
    fn steady_flows_only() {
        let s = LoadScript::from_flows(&[flow(0, 5.0, 0, None)], 10_000_000);
        assert_eq!(s.change_points(), vec![0]);
    }

    #[test]
    fn stop_before_start_rejected() {
        let mut f = flow(0, 5.0, 10, Some(5));
        assert!(f.validate().is_err());
        f.stop_us = Some(10_000_000);
        assert!(f.validate().is_err());
    }

    #[test]
    fn duplicate_ids_rejected() {
        assert!(check_unique_ids(&[flow(3, 1.0, 0, None), flow(3, 2.0, 0, None)]).is_err());
    }
}
