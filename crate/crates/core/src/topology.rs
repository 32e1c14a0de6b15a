//! Nodes, radios, disc connectivity, interference sets and random-waypoint
//! mobility.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::sim::{RngStream, SimTime};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub type Channel = u16;

pub const DEFAULT_BANDWIDTH_BPS: u64 = 2_000_000;
pub const MAX_RADIOS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub fn new(x: f64, y: f64) -> Self {
        Position { x, y }
    }

    pub fn distance(&self, other: &Position) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Radio {
    pub owner: NodeId,
    pub channel: Channel,
    pub bandwidth_bps: u64,
}

/// Directed link; links always exist in both directions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Link {
    pub from: NodeId,
    pub to: NodeId,
    pub channel: Channel,
    pub bandwidth_bps: u64,
}

/// Directed links that appeared or vanished during one mobility tick.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinkDelta {
    pub appeared: Vec<Link>,
    pub vanished: Vec<Link>,
}

impl LinkDelta {
    pub fn is_empty(&self) -> bool {
        self.appeared.is_empty() && self.vanished.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Area {
    pub width: f64,
    pub height: f64,
}

impl Area {
    pub fn contains(&self, p: &Position) -> bool {
        (0.0..=self.width).contains(&p.x) && (0.0..=self.height).contains(&p.y)
    }
}

#[derive(Clone, Debug)]
pub struct Topology {
    area: Area,
    tx_range: f64,
    interference_range: f64,
    positions: Vec<Position>,
    radios: Vec<Vec<Radio>>,
    gateways: Vec<bool>,
    /// Per node, outgoing links sorted by (to, channel).
    adjacency: Vec<Vec<Link>>,
}

impl Topology {
    /// Build a topology. `radios[n]` lists node `n`'s radios; every node needs
    /// between one and three radios on distinct channels.
    pub fn new(
        area: Area,
        tx_range: f64,
        interference_multiplier: f64,
        positions: Vec<Position>,
        radios: Vec<Vec<Radio>>,
        gateways: Vec<bool>,
    ) -> Result<Self, String> {
        if positions.len() != radios.len() || positions.len() != gateways.len() {
            return Err("node, radio and gateway lists differ in length".into());
        }
        for (i, rs) in radios.iter().enumerate() {
            if rs.is_empty() || rs.len() > MAX_RADIOS {
                return Err(format!("node {i} has {} radios (allowed 1..=3)", rs.len()));
            }
            let distinct: BTreeSet<Channel> = rs.iter().map(|r| r.channel).collect();
            if distinct.len() != rs.len() {
                return Err(format!("node {i} has two radios on one channel"));
            }
            if rs.iter().any(|r| r.owner.index() != i || r.bandwidth_bps == 0) {
                return Err(format!("node {i} has an invalid radio"));
            }
        }
        for (i, p) in positions.iter().enumerate() {
            if !area.contains(p) {
                return Err(format!("node {i} at ({}, {}) lies outside the area", p.x, p.y));
            }
        }
        let mut topo = Topology {
            area,
            tx_range,
            interference_range: tx_range * interference_multiplier,
            positions,
            radios,
            gateways,
            adjacency: Vec::new(),
        };
        topo.adjacency = topo.compute_links();
        Ok(topo)
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.positions.len() as u32).map(NodeId)
    }

    pub fn area(&self) -> Area {
        self.area
    }

    pub fn tx_range(&self) -> f64 {
        self.tx_range
    }

    pub fn interference_range(&self) -> f64 {
        self.interference_range
    }

    pub fn position(&self, n: NodeId) -> Position {
        self.positions[n.index()]
    }

    pub fn set_position(&mut self, n: NodeId, p: Position) {
        self.positions[n.index()] = p;
    }

    pub fn radios(&self, n: NodeId) -> &[Radio] {
        &self.radios[n.index()]
    }

    pub fn radio_index(&self, n: NodeId, channel: Channel) -> Option<usize> {
        self.radios[n.index()].iter().position(|r| r.channel == channel)
    }

    pub fn is_gateway(&self, n: NodeId) -> bool {
        self.gateways[n.index()]
    }

    pub fn gateways(&self) -> Vec<NodeId> {
        self.nodes().filter(|n| self.is_gateway(*n)).collect()
    }

    pub fn distance(&self, a: NodeId, b: NodeId) -> f64 {
        self.position(a).distance(&self.position(b))
    }

    pub fn within_interference(&self, a: NodeId, b: NodeId) -> bool {
        a == b || self.distance(a, b) <= self.interference_range
    }

    fn compute_links(&self) -> Vec<Vec<Link>> {
        let n = self.positions.len();
        let mut adj = vec![Vec::new(); n];
        for a in 0..n {
            for b in 0..n {
                if a == b || self.positions[a].distance(&self.positions[b]) > self.tx_range {
                    continue;
                }
                for ra in &self.radios[a] {
                    if let Some(rb) = self.radios[b].iter().find(|r| r.channel == ra.channel) {
                        adj[a].push(Link {
                            from: NodeId(a as u32),
                            to: NodeId(b as u32),
                            channel: ra.channel,
                            bandwidth_bps: ra.bandwidth_bps.min(rb.bandwidth_bps),
                        });
                    }
                }
            }
            adj[a].sort();
        }
        adj
    }

    /// All directed links, sorted.
    pub fn links(&self) -> Vec<Link> {
        self.adjacency.iter().flatten().copied().collect()
    }

    /// Outgoing links of `node`, one per (neighbor, shared channel).
    pub fn neighbors(&self, node: NodeId) -> &[Link] {
        &self.adjacency[node.index()]
    }

    /// Distinct neighbor ids of `node`, ascending.
    pub fn neighbor_ids(&self, node: NodeId) -> Vec<NodeId> {
        let mut ids: Vec<NodeId> = self.adjacency[node.index()].iter().map(|l| l.to).collect();
        ids.dedup();
        ids
    }

    pub fn link(&self, from: NodeId, to: NodeId, channel: Channel) -> Option<Link> {
        self.adjacency[from.index()].iter().copied().find(|l| l.to == to && l.channel == channel)
    }

    pub fn links_between(&self, from: NodeId, to: NodeId) -> impl Iterator<Item = &Link> {
        self.adjacency[from.index()].iter().filter(move |l| l.to == to)
    }

    /// Nodes with a radio on `channel` within interference range of `node`.
    pub fn interferers(&self, node: NodeId, channel: Channel) -> Vec<NodeId> {
        self.nodes()
            .filter(|&m| m != node)
            .filter(|&m| self.radio_index(m, channel).is_some())
            .filter(|&m| self.distance(node, m) <= self.interference_range)
            .collect()
    }

    /// Recompute connectivity after positions changed and report the delta.
    pub fn refresh_links(&mut self) -> LinkDelta {
        let old: BTreeSet<Link> = self.links().into_iter().collect();
        self.adjacency = self.compute_links();
        let new: BTreeSet<Link> = self.links().into_iter().collect();
        LinkDelta {
            appeared: new.difference(&old).copied().collect(),
            vanished: old.difference(&new).copied().collect(),
        }
    }

    /// Hop distances from `src` over the current link graph (`None` if unreachable).
    pub fn hop_distances(&self, src: NodeId) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.len()];
        let mut frontier = std::collections::VecDeque::new();
        dist[src.index()] = Some(0);
        frontier.push_back(src);
        while let Some(n) = frontier.pop_front() {
            let d = dist[n.index()].unwrap_or(0);
            for m in self.neighbor_ids(n) {
                if dist[m.index()].is_none() {
                    dist[m.index()] = Some(d + 1);
                    frontier.push_back(m);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.is_empty() || self.hop_distances(NodeId(0)).iter().all(|d| d.is_some())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WaypointState {
    pub target: Position,
    pub speed_mps: f64,
    pub pause_until: SimTime,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MobilityConfig {
    pub speed_mps: f64,
    pub mobile_fraction: f64,
    pub pause_s: f64,
    pub tick_s: f64,
}

impl Default for MobilityConfig {
    fn default() -> Self {
        MobilityConfig { speed_mps: 0.0, mobile_fraction: 0.0, pause_s: 0.0, tick_s: 0.1 }
    }
}

impl MobilityConfig {
    pub fn enabled(&self) -> bool {
        self.speed_mps > 0.0 && self.mobile_fraction > 0.0
    }
}

/// Random-waypoint movement for the mobile subset of nodes.
#[derive(Clone, Debug)]
pub struct Mobility {
    config: MobilityConfig,
    states: Vec<Option<WaypointState>>,
}

impl Mobility {
    /// Pick `round(fraction * N)` mobile nodes and give each an initial target.
    pub fn new(config: MobilityConfig, topo: &Topology, rng: &mut RngStream) -> Self {
        let n = topo.len();
        let mut states = vec![None; n];
        if config.enabled() {
            let count = ((config.mobile_fraction.clamp(0.0, 1.0) * n as f64).round() as usize).min(n);
            let mut order: Vec<usize> = (0..n).collect();
            // partial Fisher-Yates: the first `count` entries are the mobile set
            for i in 0..count {
                let j = i + rng.below(n - i);
                order.swap(i, j);
            }
            let mut mobile: Vec<usize> = order[..count].to_vec();
            mobile.sort_unstable();
            for i in mobile {
                states[i] = Some(WaypointState {
                    target: random_point(topo.area(), rng),
                    speed_mps: config.speed_mps,
                    pause_until: SimTime::ZERO,
                });
            }
        }
        Mobility { config, states }
    }

    pub fn config(&self) -> &MobilityConfig {
        &self.config
    }

    pub fn tick_us(&self) -> u64 {
        SimTime::from_secs_f64(self.config.tick_s).0.max(1)
    }

    pub fn is_mobile(&self, n: NodeId) -> bool {
        self.states[n.index()].is_some()
    }

    pub fn state(&self, n: NodeId) -> Option<&WaypointState> {
        self.states[n.index()].as_ref()
    }

    /// Advance every mobile node by one tick ending at `now`, then recompute
    /// links and return the delta.
    pub fn tick(&mut self, now: SimTime, topo: &mut Topology, rng: &mut RngStream) -> LinkDelta {
        if !self.config.enabled() {
            return LinkDelta::default();
        }
        let tick_us = self.tick_us();
        let start = SimTime(now.0.saturating_sub(tick_us));
        let pause_us = SimTime::from_secs_f64(self.config.pause_s).0;
        let mut moved = false;
        for i in 0..self.states.len() {
            let Some(mut st) = self.states[i] else { continue };
            let node = NodeId(i as u32);
            let mut pos = topo.position(node);
            let mut t = start.max(st.pause_until);
            while t < now {
                let budget = (now.0 - t.0) as f64 / 1e6 * st.speed_mps;
                let remaining = pos.distance(&st.target);
                if remaining > budget {
                    let f = budget / remaining;
                    pos = Position::new(pos.x + (st.target.x - pos.x) * f, pos.y + (st.target.y - pos.y) * f);
                    t = now;
                } else {
                    let travel_us = (remaining / st.speed_mps * 1e6).round() as u64;
                    t = t + travel_us.max(1);
                    pos = st.target;
                    st.target = random_point(topo.area(), rng);
                    if pause_us > 0 {
                        st.pause_until = t + pause_us;
                        t = st.pause_until;
                    }
                }
                moved = true;
            }
            topo.set_position(node, pos);
            self.states[i] = Some(st);
        }
        if moved {
            topo.refresh_links()
        } else {
            LinkDelta::default()
        }
    }
}

fn random_point(area: Area, rng: &mut RngStream) -> Position {
    Position::new(rng.range_f64(0.0, area.width), rng.range_f64(0.0, area.height))
}
