use std::collections::BTreeSet;

use crate::antmesh::estimation::{inter_flow_delay, intra_flow_cost, link_quality, reinforcement};
use crate::antmesh::tables::queue_on;
use crate::antmesh::transition::select_next_hop;
use crate::antmesh::{AntMeshParams, AntSources, DelayTable, HelloAnt, Hop, LinkEstimate, LinkEstimationTable, PheromoneTable, SmartAnt};
use crate::error::{NoRoute, SimError};
use crate::mac::{Packet, Payload};
use crate::network::{Event, Net, Router, TableRow};
use crate::sim::{SimTime, StreamId};
use crate::topology::{Channel, LinkDelta, NodeId, Topology};

/// Local conditions of the link a backward ant is being charged for.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HopContext {
    pub now: SimTime,
    /// Single-attempt service time of one data packet on the link.
    pub e_tx_us: f64,
    /// This node's queue on the link's channel.
    pub own_queue: u32,
    pub pkt_bits: u64,
    pub link_bps: u64,
    pub max_age_us: u64,
}

/// What one node learned from one backward ant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BsaStep {
    pub via: NodeId,
    pub lq_us: f64,
    pub ifld_us: f64,
    pub alpha_us: f64,
    pub itt_us: f64,
    pub trip_us: f64,
    pub delta_p: f64,
    pub stale: bool,
}

/// Routing state held by one node. Nodes never read each other's state.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeState {
    pub id: NodeId,
    pub pheromone: PheromoneTable,
    pub delay: DelayTable,
    pub links: LinkEstimationTable,
    /// See [`AntMeshParams::pheromone_floor`]; zero applies the bare update.
    pub pheromone_floor: f64,
}

impl NodeState {
    pub fn new(id: NodeId, neighbors: Vec<NodeId>, window: usize) -> Self {
        NodeState {
            id,
            pheromone: PheromoneTable::new(neighbors),
            delay: DelayTable::new(window),
            links: LinkEstimationTable::default(),
            pheromone_floor: 0.0,
        }
    }

    /// Fold a hello heard from `from` on `channel` into the link estimate for
    /// the link toward `from`.
    pub fn absorb_hello(&mut self, from: NodeId, channel: Channel, hello: &HelloAnt, e_tx_us: f64, own_queue: u32, now: SimTime) {
        self.links.record_report(from, now, hello.queues.clone());
        let two_hop_queues = hello
            .neighbors
            .iter()
            .filter(|(n, _)| *n != self.id)
            .map(|(n, report)| (*n, queue_on(report, channel)))
            .collect();
        let estimate = LinkEstimate {
            lq_us: link_quality(e_tx_us, own_queue),
            neighbor_queue: queue_on(&hello.queues, channel),
            two_hop_queues,
            last_hello_at: now,
        };
        self.links.update(from, channel, estimate);
    }

    /// Charge the link `hops[i] -> downstream` to the ant, record the trip in
    /// the delay table and reinforce the downstream neighbour.
    pub fn absorb_bsa(&mut self, ant: &SmartAnt, i: usize, ctx: &HopContext, cap: f64) -> BsaStep {
        let channel = ant.hops[i].channel;
        let via = ant.downstream_of(i);
        let prev_channel = ant.hops.get(i + 1).map(|h| h.channel);
        let (lq, interferers, q_next, stale) = match self.links.get_mut(via, channel) {
            Some(e) if ctx.now.0.saturating_sub(e.last_hello_at.0) <= ctx.max_age_us => {
                e.lq_us = link_quality(ctx.e_tx_us, ctx.own_queue);
                let mut qs: Vec<u32> = vec![e.neighbor_queue];
                qs.extend(e.two_hop_queues.values().copied());
                (e.lq_us, qs, e.neighbor_queue, false)
            }
            _ => (link_quality(ctx.e_tx_us, 0), Vec::new(), 0, true),
        };
        let ifld = inter_flow_delay(lq, &interferers);
        let alpha = intra_flow_cost(prev_channel, channel, q_next, ctx.pkt_bits, ctx.link_bps);
        let itt = ifld + alpha;
        let trip = itt + ant.trip_us;
        let delta_p = self.learn(ant.dst, via, trip, cap);
        BsaStep { via, lq_us: lq, ifld_us: ifld, alpha_us: alpha, itt_us: itt, trip_us: trip, delta_p, stale }
    }

    /// Record `trip` toward `dst` via `via` and reinforce; returns the
    /// reinforcement applied.
    pub fn learn(&mut self, dst: NodeId, via: NodeId, trip: f64, cap: f64) -> f64 {
        let mean = self.delay.mean(dst).unwrap_or(trip);
        let dp = reinforcement(mean, trip, cap);
        self.delay.record(dst, via, trip);
        // the neighbour may have moved away while the ant was in flight
        if self.pheromone.reinforce(dst, via, dp).is_ok() {
            self.pheromone.apply_floor(dst, self.pheromone_floor);
        }
        dp
    }
}

/// How backward ants price a path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum PathMetric {
    /// Interference-aware trip time.
    Interference,
    /// Hop count only.
    HopCount,
}

pub struct AntMeshRouter {
    params: AntMeshParams,
    metric: PathMetric,
    data_p0: f64,
    nodes: Vec<NodeState>,
}

impl AntMeshRouter {
    pub fn new(params: AntMeshParams, topo: &Topology) -> Self {
        let p0 = params.p0;
        Self::with_metric(params, topo, PathMetric::Interference, p0)
    }

    pub(crate) fn with_metric(params: AntMeshParams, topo: &Topology, metric: PathMetric, data_p0: f64) -> Self {
        let nodes = topo
            .nodes()
            .map(|n| NodeState {
                pheromone_floor: params.pheromone_floor,
                ..NodeState::new(n, topo.neighbor_ids(n), params.window_w)
            })
            .collect();
        AntMeshRouter { params, metric, data_p0, nodes }
    }

    pub fn node(&self, n: NodeId) -> &NodeState {
        &self.nodes[n.index()]
    }

    pub fn params(&self) -> &AntMeshParams {
        &self.params
    }

    fn ant_destination(&self, net: &mut Net, node: NodeId) -> Option<NodeId> {
        let flows = net.active_destinations(node);
        let candidates = if !flows.is_empty() {
            flows
        } else if self.params.ant_sources == AntSources::All {
            net.topo.gateways().into_iter().filter(|g| *g != node).collect()
        } else {
            Vec::new()
        };
        if candidates.is_empty() {
            return None;
        }
        let i = net.rng.stream(StreamId::AntForwarding).below(candidates.len());
        Some(candidates[i])
    }

    fn forward_fsa(&mut self, net: &mut Net, node: NodeId, mut ant: SmartAnt, ttl: u32) -> Result<(), SimError> {
        if ttl == 0 {
            net.ledger.ants.died += 1;
            return Ok(());
        }
        let st = &mut self.nodes[node.index()];
        st.pheromone.ensure_column(ant.dst);
        let entries = st.pheromone.entries(ant.dst);
        let next = if st.pheromone.neighbors().binary_search(&ant.dst).is_ok() {
            ant.dst
        } else {
            let u = net.rng.uniform(StreamId::AntForwarding);
            match select_next_hop(&entries, |n| ant.visited.contains(&n), self.params.p0, u) {
                Ok(n) => n,
                Err(NoRoute) => {
                    net.ledger.ants.died += 1;
                    return Ok(());
                }
            }
        };
        let Some(link) = net.best_link(node, next) else {
            net.ledger.ants.died += 1;
            return Ok(());
        };
        ant.hops.push(Hop { node, channel: link.channel });
        ant.visited.insert(next);
        let id = net.packet_id();
        let packet = Packet::ant(id, ant, net.now(), ttl - 1);
        net.send(node, next, link.channel, packet)?;
        Ok(())
    }

    /// Send a backward ant to the node at `hops[ant.cursor]`.
    fn send_bsa(net: &mut Net, from: NodeId, ant: SmartAnt, ttl: u32) -> Result<(), SimError> {
        let hop = ant.hops[ant.cursor];
        let id = net.packet_id();
        let packet = Packet::ant(id, ant, net.now(), ttl);
        net.send(from, hop.node, hop.channel, packet)?;
        Ok(())
    }

    fn on_bsa(&mut self, net: &mut Net, node: NodeId, mut ant: SmartAnt, ttl: u32) -> Result<(), SimError> {
        let i = ant.cursor;
        if ant.hops.get(i).map(|h| h.node) != Some(node) {
            net.ledger.ants.died += 1;
            return Ok(());
        }
        let trip = match self.metric {
            PathMetric::Interference => {
                let ctx = self.hop_context(net, node, ant.downstream_of(i), ant.hops[i].channel);
                let step = self.nodes[node.index()].absorb_bsa(&ant, i, &ctx, self.params.delta_p_cap);
                if step.stale {
                    net.ledger.ants.stale_estimates += 1;
                }
                step.trip_us
            }
            PathMetric::HopCount => {
                let hops = (ant.hops.len() - i) as f64;
                let via = ant.downstream_of(i);
                self.nodes[node.index()].learn(ant.dst, via, hops, self.params.delta_p_cap);
                hops
            }
        };
        ant.trip_us = trip;
        if i == 0 {
            net.ledger.ants.completed += 1;
            return Ok(());
        }
        ant.cursor = i - 1;
        Self::send_bsa(net, node, ant, ttl)
    }

    fn hop_context(&self, net: &Net, node: NodeId, via: NodeId, channel: Channel) -> HopContext {
        let link_bps = net
            .topo
            .link(node, via, channel)
            .map(|l| l.bandwidth_bps)
            .or_else(|| net.topo.radio_index(node, channel).map(|r| net.topo.radios(node)[r].bandwidth_bps))
            .unwrap_or(crate::topology::DEFAULT_BANDWIDTH_BPS);
        let pkt_bits = net.mac.data_pkt_bits();
        HopContext {
            now: net.now(),
            e_tx_us: net.mac.single_tx_time(pkt_bits, link_bps) as f64,
            own_queue: net.queue_len(node, channel),
            pkt_bits,
            link_bps,
            max_age_us: self.params.expiry_us(),
        }
    }

    fn stagger(period_us: u64, node: NodeId, n: usize) -> u64 {
        period_us * node.0 as u64 / n.max(1) as u64
    }
}

impl Router for AntMeshRouter {
    fn start(&mut self, net: &mut Net) -> Result<(), SimError> {
        let n = net.topo.len();
        let ant_period = self.params.ant_period_us();
        let hello_period = self.params.hello_period_us();
        for node in net.topo.nodes() {
            net.events.schedule(SimTime(Self::stagger(ant_period, node, n)), Event::AntTimer { node })?;
            if self.metric == PathMetric::Interference {
                net.events.schedule(SimTime(Self::stagger(hello_period, node, n)), Event::HelloTimer { node })?;
            }
        }
        Ok(())
    }

    fn route_data(&mut self, net: &mut Net, node: NodeId, packet: &Packet, from: Option<NodeId>) -> Result<NodeId, NoRoute> {
        let st = &mut self.nodes[node.index()];
        // a neighbouring destination is one hop away whatever the tables say
        if st.pheromone.neighbors().binary_search(&packet.dst).is_ok() {
            return Ok(packet.dst);
        }
        st.pheromone.ensure_column(packet.dst);
        let entries = st.pheromone.entries(packet.dst);
        let u = net.rng.uniform(StreamId::AntForwarding);
        select_next_hop(&entries, |n| Some(n) == from, self.data_p0, u)
    }

    fn on_control(&mut self, net: &mut Net, node: NodeId, from: NodeId, channel: Channel, packet: Packet) -> Result<(), SimError> {
        let ttl = packet.ttl;
        match packet.payload {
            Payload::Ant(ant) if ant.is_forward() => {
                if node == ant.dst {
                    net.ledger.ants.arrived += 1;
                    if ant.hops.is_empty() {
                        return Ok(());
                    }
                    let bsa = ant.into_backward();
                    let ttl = net.mac.ttl;
                    Self::send_bsa(net, node, bsa, ttl)
                } else {
                    self.forward_fsa(net, node, ant, ttl)
                }
            }
            Payload::Ant(ant) => self.on_bsa(net, node, ant, ttl),
            Payload::Hello(hello) => {
                let pkt_bits = net.mac.data_pkt_bits();
                let bps = net.topo.link(node, from, channel).map(|l| l.bandwidth_bps);
                let Some(bps) = bps else { return Ok(()) };
                let e_tx = net.mac.single_tx_time(pkt_bits, bps) as f64;
                let q = net.queue_len(node, channel);
                let now = net.now();
                self.nodes[node.index()].absorb_hello(from, channel, &hello, e_tx, q, now);
                Ok(())
            }
            Payload::Data { .. } => Ok(()),
        }
    }

    fn on_ant_timer(&mut self, net: &mut Net, node: NodeId) -> Result<(), SimError> {
        if let Some(dst) = self.ant_destination(net, node) {
            net.ledger.ants.launched += 1;
            let ttl = net.mac.ttl;
            self.forward_fsa(net, node, SmartAnt::forward(node, dst), ttl)?;
        }
        net.events.schedule_in(self.params.ant_period_us(), Event::AntTimer { node })?;
        Ok(())
    }

    fn on_hello_timer(&mut self, net: &mut Net, node: NodeId) -> Result<(), SimError> {
        let now = net.now();
        let hello = HelloAnt {
            from: node,
            queues: net.queue_report(node),
            neighbors: self.nodes[node.index()].links.fresh_reports(now, self.params.expiry_us()),
        };
        let channels: Vec<Channel> = net.topo.radios(node).iter().map(|r| r.channel).collect();
        for ch in channels {
            let id = net.packet_id();
            net.broadcast(node, ch, Packet::hello(id, hello.clone(), now))?;
        }
        net.events.schedule_in(self.params.hello_period_us(), Event::HelloTimer { node })?;
        Ok(())
    }

    fn on_topology_change(&mut self, net: &mut Net, delta: &LinkDelta) -> Result<(), SimError> {
        let touched: BTreeSet<NodeId> = delta.appeared.iter().chain(&delta.vanished).map(|l| l.from).collect();
        for node in touched {
            let current = net.topo.neighbor_ids(node);
            let st = &mut self.nodes[node.index()];
            st.pheromone.sync_neighbors(&current);
            for l in delta.vanished.iter().filter(|l| l.from == node) {
                if !current.contains(&l.to) {
                    st.links.forget(l.to);
                }
            }
        }
        Ok(())
    }

    fn dump(&self, _net: &Net) -> Vec<TableRow> {
        let mut rows = Vec::new();
        for st in &self.nodes {
            for dst in st.pheromone.destinations() {
                for (via, p) in st.pheromone.entries(dst) {
                    let lq = st
                        .links
                        .iter()
                        .filter(|((n, _), _)| *n == via)
                        .map(|(_, e)| e.lq_us)
                        .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.min(x))));
                    rows.push(TableRow {
                        node: st.id,
                        dst,
                        via,
                        probability: p,
                        mean_trip_us: st.delay.mean(dst),
                        lq_us: lq,
                    });
                }
            }
        }
        rows
    }
}
