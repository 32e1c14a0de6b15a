//! Discrete-event engine: integer microsecond clock, a `(fire_at, seq)`
//! ordered event queue, and named RNG streams.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::SimError;

/// Simulated time in integer microseconds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SimTime(pub u64);

impl SimTime {
    pub const ZERO: SimTime = SimTime(0);

    pub fn from_secs_f64(secs: f64) -> Self {
        SimTime((secs * 1e6).round().max(0.0) as u64)
    }

    pub fn from_millis(ms: u64) -> Self {
        SimTime(ms * 1_000)
    }

    pub fn from_secs(s: u64) -> Self {
        SimTime(s * 1_000_000)
    }

    pub fn as_micros(self) -> u64 {
        self.0
    }

    pub fn as_secs_f64(self) -> f64 {
        self.0 as f64 / 1e6
    }

    pub fn saturating_sub(self, other: SimTime) -> SimTime {
        SimTime(self.0.saturating_sub(other.0))
    }
}

impl std::ops::Add<u64> for SimTime {
    type Output = SimTime;
    fn add(self, us: u64) -> SimTime {
        SimTime(self.0 + us)
    }
}

impl fmt::Display for SimTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Events carry a short tag used in traces.
pub trait EventTag {
    fn tag(&self) -> &'static str;
    fn summary(&self) -> String;
}

#[derive(Debug)]
struct Entry<E> {
    fire_at: SimTime,
    seq: u64,
    payload: E,
}

impl<E> PartialEq for Entry<E> {
    fn eq(&self, other: &Self) -> bool {
        (self.fire_at, self.seq) == (other.fire_at, other.seq)
    }
}
impl<E> Eq for Entry<E> {}
impl<E> PartialOrd for Entry<E> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl<E> Ord for Entry<E> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.fire_at, self.seq).cmp(&(other.fire_at, other.seq))
    }
}

/// A dispatched event: its time, insertion sequence number and payload.
#[derive(Debug)]
pub struct Dispatch<E> {
    pub fire_at: SimTime,
    pub seq: u64,
    pub payload: E,
}

/// Priority queue ordered by `(fire_at, seq)`; `seq` is the insertion counter,
/// so simultaneous events fire in insertion order.
#[derive(Debug)]
pub struct EventQueue<E> {
    now: SimTime,
    next_seq: u64,
    heap: BinaryHeap<Reverse<Entry<E>>>,
}

impl<E> Default for EventQueue<E> {
    fn default() -> Self {
        Self::new()
    }
}

impl<E> EventQueue<E> {
    pub fn new() -> Self {
        EventQueue { now: SimTime::ZERO, next_seq: 0, heap: BinaryHeap::new() }
    }

    pub fn now(&self) -> SimTime {
        self.now
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    /// Enqueue `payload` at `fire_at`. Scheduling before the current time is
    /// a programming error and aborts the run.
    pub fn schedule(&mut self, fire_at: SimTime, payload: E) -> Result<u64, SimError> {
        if fire_at < self.now {
            return Err(SimError::ScheduleInPast { now: self.now.0, requested: fire_at.0 });
        }
        let seq = self.next_seq;
        self.next_seq += 1;
        self.heap.push(Reverse(Entry { fire_at, seq, payload }));
        Ok(seq)
    }

    pub fn schedule_in(&mut self, delay_us: u64, payload: E) -> Result<u64, SimError> {
        let at = self.now + delay_us;
        self.schedule(at, payload)
    }

    /// Pop the next event if it fires no later than `end`, advancing the clock.
    pub fn pop_until(&mut self, end: SimTime) -> Option<Dispatch<E>> {
        match self.heap.peek() {
            Some(Reverse(e)) if e.fire_at <= end => {}
            _ => return None,
        }
        let Reverse(e) = self.heap.pop()?;
        self.now = e.fire_at;
        Some(Dispatch { fire_at: e.fire_at, seq: e.seq, payload: e.payload })
    }

    /// Move the clock forward to `end` once nothing remains before it.
    pub fn advance_to(&mut self, end: SimTime) {
        if end > self.now {
            self.now = end;
        }
    }

    /// Dispatch every event with `fire_at <= end` through `handler`, then set
    /// the clock to `end`. Returns the number of dispatched events.
    pub fn run_until<F>(&mut self, end: SimTime, mut handler: F) -> Result<u64, SimError>
    where
        F: FnMut(&mut Self, Dispatch<E>) -> Result<(), SimError>,
    {
        let mut count = 0;
        while let Some(d) = self.pop_until(end) {
            handler(self, d)?;
            count += 1;
        }
        self.advance_to(end);
        Ok(count)
    }
}

/// Writes one `<time_us>\t<seq>\t<kind>\t<summary>` line per dispatch.
pub struct TraceWriter {
    out: Box<dyn Write + Send>,
}

impl TraceWriter {
    pub fn new(out: Box<dyn Write + Send>) -> Self {
        TraceWriter { out }
    }

    pub fn record<E: EventTag>(&mut self, d: &Dispatch<E>) -> Result<(), SimError> {
        writeln!(self.out, "{}\t{}\t{}\t{}", d.fire_at.0, d.seq, d.payload.tag(), d.payload.summary())
            .map_err(|e| SimError::Trace(e.to_string()))
    }

    pub fn flush(&mut self) -> Result<(), SimError> {
        self.out.flush().map_err(|e| SimError::Trace(e.to_string()))
    }
}

impl fmt::Debug for TraceWriter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("TraceWriter")
    }
}

/// Named consumers of randomness. Each maps to its own ChaCha stream so that
/// draws by one consumer never shift another's sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StreamId {
    AntForwarding,
    Traffic,
    Mobility,
    Loss,
}

impl StreamId {
    pub const ALL: [StreamId; 4] =
        [StreamId::AntForwarding, StreamId::Traffic, StreamId::Mobility, StreamId::Loss];

    pub fn label(self) -> &'static str {
        match self {
            StreamId::AntForwarding => "ant-forwarding",
            StreamId::Traffic => "traffic",
            StreamId::Mobility => "mobility",
            StreamId::Loss => "loss",
        }
    }
}

/// FNV-1a over the label; the stream number depends on the name only.
fn stream_number(label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// One deterministic random sequence identified by `(seed, label)`.
#[derive(Clone, Debug)]
pub struct RngStream {
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, label: &str) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_number(label));
        RngStream { rng }
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    /// Uniform integer in `[0, n)`. `n` must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn range_f64(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }
}

/// The fixed set of streams used by one run.
#[derive(Clone, Debug)]
pub struct RngStreams {
    streams: [RngStream; 4],
}

impl RngStreams {
    pub fn new(seed: u64) -> Self {
        RngStreams { streams: StreamId::ALL.map(|s| RngStream::new(seed, s.label())) }
    }

    pub fn stream(&mut self, id: StreamId) -> &mut RngStream {
        &mut self.streams[id as usize]
    }

    pub fn uniform(&mut self, id: StreamId) -> f64 {
        self.stream(id).uniform()
    }
}
