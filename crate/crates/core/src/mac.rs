//! Link-layer timing, loss sampling and per-radio priority queues.

use std::collections::VecDeque;

use crate::antmesh::{HelloAnt, SmartAnt};
use crate::sim::{RngStream, SimTime};
use crate::topology::NodeId;

/// 802.11 frame-exchange timing constants in microseconds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MacConstants {
    pub t_rts: u64,
    pub t_cts: u64,
    pub t_ack: u64,
    pub t_sifs: u64,
    pub t_difs: u64,
}

impl Default for MacConstants {
    /// 802.11b control frames at the 1 Mbps basic rate.
    fn default() -> Self {
        MacConstants { t_rts: 352, t_cts: 304, t_ack: 304, t_sifs: 10, t_difs: 50 }
    }
}

impl MacConstants {
    /// Same constants with the RTS/CTS exchange removed.
    pub fn without_rts_cts(self) -> Self {
        MacConstants { t_rts: 0, t_cts: 0, ..self }
    }
}

/// Fixed cost of one frame exchange: RTS + CTS + 3 SIFS + DIFS + ACK.
pub fn mac_overhead(c: &MacConstants) -> u64 {
    c.t_rts + c.t_cts + 3 * c.t_sifs + c.t_difs + c.t_ack
}

/// Serialization time of `bits` at `rate_bps`, rounded up to whole microseconds.
pub fn airtime_us(bits: u64, rate_bps: u64) -> u64 {
    (bits as u128 * 1_000_000).div_ceil(rate_bps as u128) as u64
}

/// Expected MAC service time of one packet that needs `n_tx` attempts.
pub fn expected_tx_time(pkt_bits: u64, link_rate_bps: u64, n_tx: u32, c: &MacConstants) -> Result<u64, MacError> {
    if link_rate_bps == 0 {
        return Err(MacError::ZeroRate);
    }
    if n_tx == 0 {
        return Err(MacError::ZeroAttempts);
    }
    Ok(n_tx as u64 * (mac_overhead(c) + airtime_us(pkt_bits, link_rate_bps)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum MacError {
    #[error("link rate must be positive")]
    ZeroRate,
    #[error("transmission count must be at least 1")]
    ZeroAttempts,
}

/// Outcome of the retransmission process for one packet.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Attempts {
    pub count: u32,
    pub delivered: bool,
}

/// Attempts until the first success, each failing with `p_fail`, capped at
/// `retry_limit` attempts; if every attempt fails the packet is lost.
pub fn sample_n_tx(p_fail: f64, retry_limit: u32, rng: &mut RngStream) -> Attempts {
    let limit = retry_limit.max(1);
    for k in 1..=limit {
        if rng.uniform() >= p_fail {
            return Attempts { count: k, delivered: true };
        }
    }
    Attempts { count: limit, delivered: false }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MacConfig {
    pub constants: MacConstants,
    pub p_fail: f64,
    pub retry_limit: u32,
    pub use_rts_cts_overhead: bool,
    /// Whether ant frames also pay for the RTS/CTS handshake. Off by default:
    /// they sit far below any RTS threshold.
    pub control_rts_cts: bool,
    pub buffer_packets: usize,
    pub ttl: u32,
    pub data_pkt_bytes: u64,
}

impl Default for MacConfig {
    fn default() -> Self {
        MacConfig {
            constants: MacConstants::default(),
            p_fail: 0.1,
            retry_limit: 7,
            use_rts_cts_overhead: true,
            control_rts_cts: false,
            buffer_packets: 20,
            ttl: 32,
            data_pkt_bytes: 512,
        }
    }
}

impl MacConfig {
    /// Constants actually charged per exchange, honouring the RTS/CTS flag.
    pub fn effective_constants(&self) -> MacConstants {
        if self.use_rts_cts_overhead {
            self.constants
        } else {
            self.constants.without_rts_cts()
        }
    }

    /// Constants charged for a frame of `kind`.
    pub fn constants_for(&self, kind: PacketKind) -> MacConstants {
        if kind.is_control() && !self.control_rts_cts {
            self.constants.without_rts_cts()
        } else {
            self.effective_constants()
        }
    }

    pub fn data_pkt_bits(&self) -> u64 {
        self.data_pkt_bytes * 8
    }

    /// Service time of one `bits`-sized packet over a `rate_bps` link with a single attempt.
    pub fn single_tx_time(&self, bits: u64, rate_bps: u64) -> u64 {
        expected_tx_time(bits, rate_bps.max(1), 1, &self.effective_constants()).unwrap_or(u64::MAX)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PacketKind {
    Data,
    Fsa,
    Bsa,
    Hsa,
}

impl PacketKind {
    pub fn is_control(self) -> bool {
        self != PacketKind::Data
    }

    pub fn label(self) -> &'static str {
        match self {
            PacketKind::Data => "data",
            PacketKind::Fsa => "fsa",
            PacketKind::Bsa => "bsa",
            PacketKind::Hsa => "hsa",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Payload {
    Data { flow: u32 },
    Ant(SmartAnt),
    Hello(HelloAnt),
}

pub const ANT_BASE_BYTES: u64 = 64;
pub const ANT_PER_HOP_BYTES: u64 = 8;
pub const HELLO_BASE_BYTES: u64 = 32;
pub const HELLO_PER_NEIGHBOR_BYTES: u64 = 12;

#[derive(Clone, Debug, PartialEq)]
pub struct Packet {
    pub id: u64,
    pub src: NodeId,
    pub dst: NodeId,
    pub born_at: SimTime,
    pub ttl: u32,
    pub payload: Payload,
    data_bits: u64,
}

impl Packet {
    pub fn data(id: u64, flow: u32, src: NodeId, dst: NodeId, bits: u64, born_at: SimTime, ttl: u32) -> Self {
        Packet { id, src, dst, born_at, ttl, payload: Payload::Data { flow }, data_bits: bits }
    }

    pub fn ant(id: u64, ant: SmartAnt, born_at: SimTime, ttl: u32) -> Self {
        Packet { id, src: ant.src, dst: ant.dst, born_at, ttl, payload: Payload::Ant(ant), data_bits: 0 }
    }

    pub fn hello(id: u64, hello: HelloAnt, born_at: SimTime) -> Self {
        Packet { id, src: hello.from, dst: hello.from, born_at, ttl: 1, payload: Payload::Hello(hello), data_bits: 0 }
    }

    pub fn kind(&self) -> PacketKind {
        match &self.payload {
            Payload::Data { .. } => PacketKind::Data,
            Payload::Ant(a) if a.is_forward() => PacketKind::Fsa,
            Payload::Ant(_) => PacketKind::Bsa,
            Payload::Hello(_) => PacketKind::Hsa,
        }
    }

    /// Size on air; ants grow with their recorded path, hellos with the
    /// advertised neighbour list.
    pub fn size_bits(&self) -> u64 {
        match &self.payload {
            Payload::Data { .. } => self.data_bits,
            Payload::Ant(a) => 8 * (ANT_BASE_BYTES + ANT_PER_HOP_BYTES * a.hops.len() as u64),
            Payload::Hello(h) => 8 * (HELLO_BASE_BYTES + HELLO_PER_NEIGHBOR_BYTES * h.neighbors.len() as u64),
        }
    }
}

/// A queued packet and where it goes: `None` means one-hop broadcast.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    pub packet: Packet,
    pub next_hop: Option<NodeId>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnqueueOutcome {
    Accepted,
    Dropped,
}

/// Two-lane FIFO: ants and hellos bypass data and are never dropped for
/// capacity; the data lane holds at most `capacity_data` packets.
#[derive(Clone, Debug)]
pub struct RadioQueue {
    control: VecDeque<Frame>,
    data: VecDeque<Frame>,
    capacity_data: usize,
}

impl RadioQueue {
    pub fn new(capacity_data: usize) -> Self {
        RadioQueue { control: VecDeque::new(), data: VecDeque::new(), capacity_data }
    }

    pub fn push(&mut self, frame: Frame) -> EnqueueOutcome {
        if frame.packet.kind().is_control() {
            self.control.push_back(frame);
            EnqueueOutcome::Accepted
        } else if self.data.len() < self.capacity_data {
            self.data.push_back(frame);
            EnqueueOutcome::Accepted
        } else {
            EnqueueOutcome::Dropped
        }
    }

    /// The frame `pop` would return next.
    pub fn peek(&self) -> Option<&Frame> {
        self.control.front().or_else(|| self.data.front())
    }

    pub fn pop(&mut self) -> Option<Frame> {
        self.control.pop_front().or_else(|| self.data.pop_front())
    }

    pub fn len(&self) -> usize {
        self.control.len() + self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.control.is_empty() && self.data.is_empty()
    }

    pub fn data_len(&self) -> usize {
        self.data.len()
    }

    pub fn control_len(&self) -> usize {
        self.control.len()
    }
}
