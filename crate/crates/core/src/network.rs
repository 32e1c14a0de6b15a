//! The simulated network: radios, contention, packet delivery and the event
//! loop that drives a routing agent.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use crate::antmesh::{AntMeshParams, AntMeshRouter};
use crate::baselines::{HopAntRouter, StaticRouter};
use crate::error::{NoRoute, SimError};
use crate::mac::{sample_n_tx, Attempts, EnqueueOutcome, Frame, MacConfig, Packet, PacketKind, Payload, RadioQueue};
use crate::metrics::{LossCause, MetricsLedger};
use crate::sim::{Dispatch, EventQueue, EventTag, RngStreams, SimTime, StreamId, TraceWriter};
use crate::topology::{Channel, Link, LinkDelta, Mobility, MobilityConfig, NodeId, Topology};
use crate::traffic::{resolve_destinations, FlowSpec, LoadScript};

#[derive(Clone, Debug, PartialEq)]
pub enum Event {
    PacketArrival { node: NodeId, from: NodeId, channel: Channel, packet: Box<Packet> },
    TxComplete { node: NodeId, radio: usize },
    AntTimer { node: NodeId },
    HelloTimer { node: NodeId },
    MobilityTick,
    FlowStart { flow: usize },
    FlowStop { flow: usize },
    FlowTick { flow: usize },
    MetricsSample,
}

impl EventTag for Event {
    fn tag(&self) -> &'static str {
        match self {
            Event::PacketArrival { .. } => "packet-arrival",
            Event::TxComplete { .. } => "tx-complete",
            Event::AntTimer { .. } => "ant-timer",
            Event::HelloTimer { .. } => "hello-timer",
            Event::MobilityTick => "mobility-tick",
            Event::FlowStart { .. } => "flow-start",
            Event::FlowStop { .. } => "flow-stop",
            Event::FlowTick { .. } => "flow-tick",
            Event::MetricsSample => "metrics-sample",
        }
    }

    fn summary(&self) -> String {
        match self {
            Event::PacketArrival { node, from, channel, packet } => format!(
                "{}#{} {}->{} ch{} src={} dst={} ttl={}",
                packet.kind().label(),
                packet.id,
                from,
                node,
                channel,
                packet.src,
                packet.dst,
                packet.ttl
            ),
            Event::TxComplete { node, radio } => format!("node={node} radio={radio}"),
            Event::AntTimer { node } | Event::HelloTimer { node } => format!("node={node}"),
            Event::MobilityTick | Event::MetricsSample => String::new(),
            Event::FlowStart { flow } | Event::FlowStop { flow } | Event::FlowTick { flow } => format!("flow={flow}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RoutingAlgorithm {
    AntMesh,
    Static,
    HopAnt,
}

impl RoutingAlgorithm {
    pub fn label(self) -> &'static str {
        match self {
            RoutingAlgorithm::AntMesh => "antmesh",
            RoutingAlgorithm::Static => "static",
            RoutingAlgorithm::HopAnt => "hopant",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "antmesh" => Some(RoutingAlgorithm::AntMesh),
            "static" => Some(RoutingAlgorithm::Static),
            "hopant" => Some(RoutingAlgorithm::HopAnt),
            _ => None,
        }
    }
}

/// One line of the per-node table dump.
#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    pub node: NodeId,
    pub dst: NodeId,
    pub via: NodeId,
    pub probability: f64,
    pub mean_trip_us: Option<f64>,
    pub lq_us: Option<f64>,
}

/// A routing agent. Nodes only share state through packets; the agent keeps
/// one independent table set per node.
pub trait Router: Send {
    fn start(&mut self, net: &mut Net) -> Result<(), SimError>;

    /// Next hop for a data packet at `node`, which arrived from `from`.
    fn route_data(&mut self, net: &mut Net, node: NodeId, packet: &Packet, from: Option<NodeId>) -> Result<NodeId, NoRoute>;

    fn on_control(&mut self, net: &mut Net, node: NodeId, from: NodeId, channel: Channel, packet: Packet) -> Result<(), SimError>;

    fn on_ant_timer(&mut self, _net: &mut Net, _node: NodeId) -> Result<(), SimError> {
        Ok(())
    }

    fn on_hello_timer(&mut self, _net: &mut Net, _node: NodeId) -> Result<(), SimError> {
        Ok(())
    }

    fn on_topology_change(&mut self, _net: &mut Net, _delta: &LinkDelta) -> Result<(), SimError> {
        Ok(())
    }

    fn dump(&self, _net: &Net) -> Vec<TableRow> {
        Vec::new()
    }
}

pub fn make_router(algorithm: RoutingAlgorithm, params: &AntMeshParams, topo: &Topology) -> Box<dyn Router> {
    match algorithm {
        RoutingAlgorithm::AntMesh => Box::new(AntMeshRouter::new(params.clone(), topo)),
        RoutingAlgorithm::Static => Box::new(StaticRouter::new(params.hello_interval_s, topo)),
        RoutingAlgorithm::HopAnt => Box::new(HopAntRouter::new(params.clone(), topo)),
    }
}

#[derive(Clone, Debug)]
struct InFlight {
    frame: Frame,
    attempts: Attempts,
    started: SimTime,
}

#[derive(Clone, Debug)]
pub struct RadioState {
    pub channel: Channel,
    pub bandwidth_bps: u64,
    queue: RadioQueue,
    current: Option<InFlight>,
    waiting: bool,
}

impl RadioState {
    pub fn queue(&self) -> &RadioQueue {
        &self.queue
    }

    pub fn is_transmitting(&self) -> bool {
        self.current.is_some()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct ActiveTx {
    node: NodeId,
    radio: usize,
    rx: Option<NodeId>,
}

#[derive(Clone, Debug, Default)]
struct ChannelState {
    active: Vec<ActiveTx>,
    /// Pending requests served in (request time, node, radio) order.
    waiting: BTreeSet<(SimTime, NodeId, usize)>,
}

/// One completed transmission, kept when logging is enabled.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TxRecord {
    pub node: NodeId,
    pub rx: Option<NodeId>,
    pub channel: Channel,
    pub kind: PacketKind,
    pub start: SimTime,
    pub end: SimTime,
    pub bits: u64,
    pub bandwidth_bps: u64,
    pub attempts: u32,
    pub delivered: bool,
}

#[derive(Clone, Debug)]
struct FlowRuntime {
    spec: FlowSpec,
    dst: NodeId,
    offset_us: u64,
    stop_us: u64,
    active: bool,
    next_k: u64,
}

/// Everything except the routing agent.
pub struct Net {
    pub events: EventQueue<Event>,
    pub topo: Topology,
    pub mobility: Mobility,
    pub rng: RngStreams,
    pub ledger: MetricsLedger,
    pub mac: MacConfig,
    radios: Vec<Vec<RadioState>>,
    channels: BTreeMap<Channel, ChannelState>,
    flows: Vec<FlowRuntime>,
    next_packet_id: u64,
    tx_log: Option<Vec<TxRecord>>,
}

impl Net {
    pub fn now(&self) -> SimTime {
        self.events.now()
    }

    pub fn packet_id(&mut self) -> u64 {
        self.next_packet_id += 1;
        self.next_packet_id
    }

    pub fn radio(&self, node: NodeId, radio: usize) -> &RadioState {
        &self.radios[node.index()][radio]
    }

    /// Data packets buffered on `node`'s radio for `channel`. Ants in the
    /// priority lane are not counted: the load a route must carry is the
    /// data backlog.
    pub fn queue_len(&self, node: NodeId, channel: Channel) -> u32 {
        self.topo
            .radio_index(node, channel)
            .map_or(0, |r| self.radios[node.index()][r].queue.data_len() as u32)
    }

    /// Data backlog per radio channel of `node`.
    pub fn queue_report(&self, node: NodeId) -> Vec<(Channel, u32)> {
        self.radios[node.index()].iter().map(|r| (r.channel, r.queue.data_len() as u32)).collect()
    }

    /// Single-attempt service time of a data packet over `link`.
    pub fn data_tx_time(&self, link: &Link) -> u64 {
        self.mac.single_tx_time(self.mac.data_pkt_bits(), link.bandwidth_bps)
    }

    /// Among the links from `from` to `to`, the one whose radio would clear
    /// a new data packet soonest; ties go to the lowest channel.
    pub fn best_link(&self, from: NodeId, to: NodeId) -> Option<Link> {
        self.topo
            .links_between(from, to)
            .min_by_key(|l| (self.data_tx_time(l) * (self.queue_len(from, l.channel) as u64 + 1), l.channel))
            .copied()
    }

    /// Destinations of flows currently sourced at `node`.
    pub fn active_destinations(&self, node: NodeId) -> Vec<NodeId> {
        let mut v: Vec<NodeId> = self.flows.iter().filter(|f| f.active && f.spec.src == node).map(|f| f.dst).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn tx_log(&self) -> Option<&[TxRecord]> {
        self.tx_log.as_deref()
    }

    pub fn drop_data(&mut self, cause: LossCause) {
        self.ledger.record_loss(cause);
    }

    /// Queue `packet` for unicast to `to` on `channel`.
    pub fn send(&mut self, from: NodeId, to: NodeId, channel: Channel, packet: Packet) -> Result<EnqueueOutcome, SimError> {
        self.enqueue(from, channel, Frame { packet, next_hop: Some(to) })
    }

    /// Queue `packet` for one-hop broadcast on `channel`.
    pub fn broadcast(&mut self, from: NodeId, channel: Channel, packet: Packet) -> Result<EnqueueOutcome, SimError> {
        self.enqueue(from, channel, Frame { packet, next_hop: None })
    }

    fn enqueue(&mut self, node: NodeId, channel: Channel, frame: Frame) -> Result<EnqueueOutcome, SimError> {
        let Some(r) = self.topo.radio_index(node, channel) else {
            return Err(SimError::Config(format!("node {node} has no radio on channel {channel}")));
        };
        let is_data = !frame.packet.kind().is_control();
        let outcome = self.radios[node.index()][r].queue.push(frame);
        if outcome == EnqueueOutcome::Dropped {
            if is_data {
                self.ledger.record_loss(LossCause::QueueOverflow);
            }
            return Ok(outcome);
        }
        self.request_tx(node, r)?;
        Ok(outcome)
    }

    fn request_tx(&mut self, node: NodeId, radio: usize) -> Result<(), SimError> {
        let now = self.now();
        let st = &mut self.radios[node.index()][radio];
        if st.current.is_some() || st.waiting || st.queue.is_empty() {
            return Ok(());
        }
        st.waiting = true;
        let channel = st.channel;
        self.channels.entry(channel).or_default().waiting.insert((now, node, radio));
        self.service_channel(channel)
    }

    fn conflicts(&self, a: &ActiveTx, b_node: NodeId, b_rx: Option<NodeId>) -> bool {
        let ends_a = [Some(a.node), a.rx];
        let ends_b = [Some(b_node), b_rx];
        ends_a
            .iter()
            .flatten()
            .any(|p| ends_b.iter().flatten().any(|q| self.topo.within_interference(*p, *q)))
    }

    /// Start every waiting transmission on `channel` that does not conflict
    /// with one already on the air, in request order.
    fn service_channel(&mut self, channel: Channel) -> Result<(), SimError> {
        let pending: Vec<(SimTime, NodeId, usize)> = match self.channels.get(&channel) {
            Some(c) => c.waiting.iter().copied().collect(),
            None => return Ok(()),
        };
        for key @ (_, node, radio) in pending {
            // discard heads whose link vanished
            let rx = loop {
                let Some(head) = self.radios[node.index()][radio].queue.peek() else { break None };
                match head.next_hop {
                    Some(to) if self.topo.link(node, to, channel).is_none() => {
                        let frame = self.radios[node.index()][radio].queue.pop().expect("peeked");
                        self.count_mac_loss(&frame.packet);
                    }
                    other => break Some(other),
                }
            };
            let Some(rx) = rx else {
                self.channels.get_mut(&channel).expect("channel").waiting.remove(&key);
                self.radios[node.index()][radio].waiting = false;
                continue;
            };
            let busy = self.channels[&channel].active.iter().any(|a| self.conflicts(a, node, rx));
            if busy {
                continue;
            }
            let ch = self.channels.get_mut(&channel).expect("channel");
            ch.waiting.remove(&key);
            ch.active.push(ActiveTx { node, radio, rx });
            self.radios[node.index()][radio].waiting = false;
            self.start_tx(node, radio)?;
        }
        Ok(())
    }

    fn start_tx(&mut self, node: NodeId, radio: usize) -> Result<(), SimError> {
        let now = self.now();
        let st = &mut self.radios[node.index()][radio];
        let frame = st.queue.pop().expect("start_tx with empty queue");
        let bandwidth = st.bandwidth_bps;
        let kind = frame.packet.kind();
        let attempts = if frame.next_hop.is_some() {
            sample_n_tx(self.mac.p_fail, self.mac.retry_limit, self.rng.stream(StreamId::Loss))
        } else {
            Attempts { count: 1, delivered: true }
        };
        let duration = crate::mac::expected_tx_time(
            frame.packet.size_bits(),
            bandwidth,
            attempts.count,
            &self.mac.constants_for(kind),
        )
        .map_err(|e| SimError::Config(e.to_string()))?;
        if kind.is_control() {
            self.ledger.control_tx_hops += 1;
            match kind {
                PacketKind::Fsa => self.ledger.control.fsa += 1,
                PacketKind::Bsa => self.ledger.control.bsa += 1,
                _ => self.ledger.control.hsa += 1,
            }
        } else {
            self.ledger.data_tx_hops += 1;
        }
        self.radios[node.index()][radio].current = Some(InFlight { frame, attempts, started: now });
        self.events.schedule(now + duration, Event::TxComplete { node, radio })?;
        Ok(())
    }

    fn count_mac_loss(&mut self, packet: &Packet) {
        if packet.kind().is_control() {
            self.ledger.ants.lost_in_mac += 1;
        } else {
            self.ledger.record_loss(LossCause::MacLoss);
        }
    }

    /// Finish the transmission on `(node, radio)` and schedule arrivals.
    fn complete_tx(&mut self, node: NodeId, radio: usize) -> Result<(), SimError> {
        let now = self.now();
        let st = &mut self.radios[node.index()][radio];
        let Some(inflight) = st.current.take() else { return Ok(()) };
        let channel = st.channel;
        let bandwidth = st.bandwidth_bps;
        if let Some(ch) = self.channels.get_mut(&channel) {
            ch.active.retain(|a| !(a.node == node && a.radio == radio));
        }
        let InFlight { frame, attempts, started } = inflight;
        if let Some(log) = self.tx_log.as_mut() {
            log.push(TxRecord {
                node,
                rx: frame.next_hop,
                channel,
                kind: frame.packet.kind(),
                start: started,
                end: now,
                bits: frame.packet.size_bits(),
                bandwidth_bps: bandwidth,
                attempts: attempts.count,
                delivered: attempts.delivered,
            });
        }
        match frame.next_hop {
            Some(to) if attempts.delivered => {
                self.events.schedule(
                    now,
                    Event::PacketArrival { node: to, from: node, channel, packet: Box::new(frame.packet) },
                )?;
            }
            Some(_) => self.count_mac_loss(&frame.packet),
            None => {
                let receivers: Vec<NodeId> =
                    self.topo.neighbors(node).iter().filter(|l| l.channel == channel).map(|l| l.to).collect();
                for to in receivers {
                    self.events.schedule(
                        now,
                        Event::PacketArrival { node: to, from: node, channel, packet: Box::new(frame.packet.clone()) },
                    )?;
                }
            }
        }
        self.service_channel(channel)?;
        self.request_tx(node, radio)
    }

    fn service_all_channels(&mut self) -> Result<(), SimError> {
        let chans: Vec<Channel> = self.channels.keys().copied().collect();
        for c in chans {
            self.service_channel(c)?;
        }
        Ok(())
    }
}

/// Inputs of one run.
#[derive(Clone, Debug)]
pub struct SimSetup {
    pub topology: Topology,
    pub mobility: MobilityConfig,
    pub mac: MacConfig,
    pub algorithm: RoutingAlgorithm,
    pub params: AntMeshParams,
    pub flows: Vec<FlowSpec>,
    pub horizon_us: u64,
    pub warmup_us: u64,
    /// Interval of per-node table dumps; `None` disables them.
    pub dump_interval_us: Option<u64>,
    pub log_transmissions: bool,
}

/// Result of one run.
#[derive(Debug)]
pub struct RunOutput {
    pub ledger: MetricsLedger,
    pub dispatched: u64,
    pub table_dump: Vec<String>,
    pub tx_log: Option<Vec<TxRecord>>,
    pub final_tables: Vec<TableRow>,
}

pub struct Simulation {
    net: Net,
    router: Box<dyn Router>,
    trace: Option<TraceWriter>,
    horizon: SimTime,
    dump_interval_us: Option<u64>,
    table_dump: Vec<String>,
}

impl Simulation {
    pub fn new(setup: SimSetup, seed: u64, trace: Option<Box<dyn Write + Send>>) -> Result<Self, SimError> {
        let SimSetup { topology, mobility, mac, algorithm, params, flows, horizon_us, warmup_us, dump_interval_us, log_transmissions } =
            setup;
        let mut rng = RngStreams::new(seed);
        let mobility = Mobility::new(mobility, &topology, rng.stream(StreamId::Mobility));
        let resolved = resolve_destinations(&flows, &topology.gateways(), rng.stream(StreamId::Traffic))
            .map_err(SimError::Config)?;
        for (f, dst) in &resolved {
            if f.src.index() >= topology.len() || dst.index() >= topology.len() {
                return Err(SimError::Config(format!("flow {} names a missing node", f.id)));
            }
        }
        let n_flows = resolved.len();
        let flows: Vec<FlowRuntime> = resolved
            .into_iter()
            .enumerate()
            .map(|(i, (spec, dst))| FlowRuntime {
                offset_us: spec.phase_offset_us(i, n_flows),
                stop_us: spec.stop_or(horizon_us),
                dst,
                spec,
                active: false,
                next_k: 0,
            })
            .collect();
        let radios = topology
            .nodes()
            .map(|n| {
                topology
                    .radios(n)
                    .iter()
                    .map(|r| RadioState {
                        channel: r.channel,
                        bandwidth_bps: r.bandwidth_bps,
                        queue: RadioQueue::new(mac.buffer_packets),
                        current: None,
                        waiting: false,
                    })
                    .collect()
            })
            .collect();
        let router = make_router(algorithm, &params, &topology);
        let mut ledger = MetricsLedger::new(horizon_us, warmup_us);
        let specs: Vec<FlowSpec> = flows.iter().map(|f| f.spec.clone()).collect();
        ledger.change_points_us = LoadScript::from_flows(&specs, horizon_us).change_points();
        let net = Net {
            events: EventQueue::new(),
            topo: topology,
            mobility,
            rng,
            ledger,
            mac,
            radios,
            channels: BTreeMap::new(),
            flows,
            next_packet_id: 0,
            tx_log: log_transmissions.then(Vec::new),
        };
        Ok(Simulation {
            net,
            router,
            trace: trace.map(TraceWriter::new),
            horizon: SimTime(horizon_us),
            dump_interval_us,
            table_dump: Vec::new(),
        })
    }

    pub fn net(&self) -> &Net {
        &self.net
    }

    fn schedule_initial(&mut self) -> Result<(), SimError> {
        let specs: Vec<FlowSpec> = self.net.flows.iter().map(|f| f.spec.clone()).collect();
        let script = LoadScript::from_flows(&specs, self.horizon.0);
        script.validate().map_err(SimError::Config)?;
        for action in &script.actions {
            let ids = match &action.change {
                crate::traffic::LoadChange::Add(ids) | crate::traffic::LoadChange::Remove(ids) => ids,
            };
            for id in ids {
                let idx = self.net.flows.iter().position(|f| f.spec.id == *id).expect("flow from script");
                let ev = match action.change {
                    crate::traffic::LoadChange::Add(_) => Event::FlowStart { flow: idx },
                    crate::traffic::LoadChange::Remove(_) => Event::FlowStop { flow: idx },
                };
                self.net.events.schedule(SimTime(action.at_us), ev)?;
            }
        }
        if self.net.mobility.config().enabled() {
            let tick = self.net.mobility.tick_us();
            self.net.events.schedule(SimTime(tick), Event::MobilityTick)?;
        }
        if let Some(iv) = self.dump_interval_us {
            self.net.events.schedule(SimTime(iv), Event::MetricsSample)?;
        }
        self.router.start(&mut self.net)
    }

    pub fn run(mut self) -> Result<RunOutput, SimError> {
        self.schedule_initial()?;
        let mut dispatched = 0;
        while let Some(d) = self.net.events.pop_until(self.horizon) {
            if let Some(t) = self.trace.as_mut() {
                t.record(&d)?;
            }
            self.dispatch(d)?;
            dispatched += 1;
        }
        self.net.events.advance_to(self.horizon);
        if let Some(t) = self.trace.as_mut() {
            t.flush()?;
        }
        self.net.ledger.finish();
        let final_tables = self.router.dump(&self.net);
        Ok(RunOutput {
            ledger: self.net.ledger,
            dispatched,
            table_dump: self.table_dump,
            tx_log: self.net.tx_log,
            final_tables,
        })
    }

    fn dispatch(&mut self, d: Dispatch<Event>) -> Result<(), SimError> {
        let net = &mut self.net;
        match d.payload {
            Event::PacketArrival { node, from, channel, packet } => {
                if packet.kind().is_control() {
                    self.router.on_control(net, node, from, channel, *packet)?;
                } else {
                    self.data_arrival(node, from, *packet)?;
                }
            }
            Event::TxComplete { node, radio } => net.complete_tx(node, radio)?,
            Event::AntTimer { node } => self.router.on_ant_timer(net, node)?,
            Event::HelloTimer { node } => self.router.on_hello_timer(net, node)?,
            Event::MobilityTick => {
                let now = net.now();
                let delta = net.mobility.tick(now, &mut net.topo, net.rng.stream(StreamId::Mobility));
                if !delta.is_empty() {
                    self.router.on_topology_change(net, &delta)?;
                }
                net.service_all_channels()?;
                let tick = net.mobility.tick_us();
                net.events.schedule_in(tick, Event::MobilityTick)?;
            }
            Event::FlowStart { flow } => {
                let f = &mut net.flows[flow];
                f.active = true;
                let first = f.spec.injection_time(f.next_k, f.offset_us);
                if first < f.stop_us {
                    net.events.schedule(SimTime(first), Event::FlowTick { flow })?;
                }
            }
            Event::FlowStop { flow } => net.flows[flow].active = false,
            Event::FlowTick { flow } => self.inject(flow)?,
            Event::MetricsSample => {
                let now = self.net.now();
                for row in self.router.dump(&self.net) {
                    self.table_dump.push(format_row(now, &row));
                }
                if let Some(iv) = self.dump_interval_us {
                    self.net.events.schedule_in(iv, Event::MetricsSample)?;
                }
            }
        }
        Ok(())
    }

    fn inject(&mut self, flow: usize) -> Result<(), SimError> {
        let now = self.net.now();
        let f = &mut self.net.flows[flow];
        if !f.active || now.0 >= f.stop_us {
            return Ok(());
        }
        let (src, dst, bits, id) = (f.spec.src, f.dst, f.spec.pkt_bytes * 8, f.spec.id);
        f.next_k += 1;
        let next = f.spec.injection_time(f.next_k, f.offset_us);
        if next < f.stop_us {
            self.net.events.schedule(SimTime(next), Event::FlowTick { flow })?;
        }
        let pid = self.net.packet_id();
        let ttl = self.net.mac.ttl;
        let packet = Packet::data(pid, id, src, dst, bits, now, ttl);
        self.net.ledger.data_sent += 1;
        self.forward_data(src, packet, None)
    }

    fn data_arrival(&mut self, node: NodeId, from: NodeId, packet: Packet) -> Result<(), SimError> {
        if node == packet.dst {
            let now = self.net.now();
            let flow = match packet.payload {
                Payload::Data { flow } => flow,
                _ => 0,
            };
            let delay = now.0 - packet.born_at.0;
            self.net.ledger.record_delivery(now.0, delay, packet.size_bits(), flow);
            return Ok(());
        }
        self.forward_data(node, packet, Some(from))
    }

    fn forward_data(&mut self, node: NodeId, mut packet: Packet, from: Option<NodeId>) -> Result<(), SimError> {
        if packet.ttl == 0 {
            self.net.drop_data(LossCause::TtlExpired);
            return Ok(());
        }
        let next = match self.router.route_data(&mut self.net, node, &packet, from) {
            Ok(n) => n,
            Err(NoRoute) => {
                self.net.drop_data(LossCause::NoRoute);
                return Ok(());
            }
        };
        let Some(link) = self.net.best_link(node, next) else {
            self.net.drop_data(LossCause::NoRoute);
            return Ok(());
        };
        packet.ttl -= 1;
        self.net.send(node, next, link.channel, packet)?;
        Ok(())
    }
}

pub fn format_row(now: SimTime, r: &TableRow) -> String {
    let opt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |x| format!("{x:.1}"));
    format!(
        "{}\t{}\t{}\t{}\t{:.6}\t{}\t{}",
        now.0,
        r.node,
        r.dst,
        r.via,
        r.probability,
        opt(r.mean_trip_us),
        opt(r.lq_us)
    )
}
