//! Line-oriented scenario documents: `[section]` headers, `key = value`
//! pairs and `#` comments. Omitted keys keep their defaults; unknown keys are
//! rejected with the offending line number.

mod presets;

use std::fmt::Write as _;

use crate::antmesh::{AntMeshParams, AntSources};
use crate::error::ConfigError;
use crate::mac::MacConfig;
use crate::network::{RoutingAlgorithm, SimSetup};
use crate::topology::{Area, Channel, MobilityConfig, NodeId, Position, Radio, Topology, DEFAULT_BANDWIDTH_BPS, MAX_RADIOS};
use crate::traffic::{check_unique_ids, FlowDst, FlowSpec};

pub use presets::{preset, preset_names, topology_preset, PRESETS};

#[derive(Clone, Debug, PartialEq)]
pub struct NodeSpec {
    pub position: Position,
    pub channels: Vec<Channel>,
    pub gateway: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TopologySpec {
    pub area: Area,
    pub tx_range: f64,
    pub interference_multiplier: f64,
    pub bandwidth_bps: u64,
    pub nodes: Vec<NodeSpec>,
}

impl TopologySpec {
    pub fn build(&self) -> Result<Topology, String> {
        let positions = self.nodes.iter().map(|n| n.position).collect();
        let radios = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| {
                n.channels
                    .iter()
                    .map(|&channel| Radio { owner: NodeId(i as u32), channel, bandwidth_bps: self.bandwidth_bps })
                    .collect()
            })
            .collect();
        let gateways = self.nodes.iter().map(|n| n.gateway).collect();
        Topology::new(self.area, self.tx_range, self.interference_multiplier, positions, radios, gateways)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunSpec {
    pub horizon_us: u64,
    pub warmup_us: u64,
    pub seeds: Vec<u64>,
    /// Learning-time probe: window length, relative band, windows to settle.
    pub learn_window_us: u64,
    pub learn_epsilon: f64,
    pub settle_windows: usize,
    /// Interval of routing-table dumps; `None` disables them.
    pub dump_interval_us: Option<u64>,
}

impl Default for RunSpec {
    fn default() -> Self {
        RunSpec {
            horizon_us: 30_000_000,
            warmup_us: 5_000_000,
            seeds: vec![1],
            learn_window_us: 500_000,
            learn_epsilon: 0.10,
            settle_windows: 3,
            dump_interval_us: None,
        }
    }
}

/// One swept parameter and the values it takes.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepAxis {
    pub key: String,
    pub values: Vec<String>,
}

pub const SWEEP_KEYS: &[&str] = &[
    "routing",
    "p0",
    "ant_rate",
    "ant_sources",
    "hello_interval",
    "window",
    "delta_p_cap",
    "pheromone_floor",
    "rate",
    "flows",
    "speed",
    "mobile_fraction",
    "pause",
    "p_fail",
];

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub topology: TopologySpec,
    pub mac: MacConfig,
    pub routing: RoutingAlgorithm,
    pub params: AntMeshParams,
    pub flows: Vec<FlowSpec>,
    pub mobility: MobilityConfig,
    pub run: RunSpec,
    pub sweep: Vec<SweepAxis>,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            name: "default".into(),
            topology: topology_preset("grid15").expect("grid15 preset"),
            mac: MacConfig::default(),
            routing: RoutingAlgorithm::AntMesh,
            params: AntMeshParams::default(),
            flows: Vec::new(),
            mobility: MobilityConfig::default(),
            run: RunSpec::default(),
            sweep: Vec::new(),
        }
    }
}

impl Scenario {
    /// Cross-field checks that a line-level parse cannot do.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let err = |m: String| Err(ConfigError::new(0, m));
        let n = self.topology.nodes.len();
        if n == 0 {
            return err("topology has no nodes".into());
        }
        self.topology.build().map_err(|m| ConfigError::new(0, m))?;
        if let Err(m) = self.params.validate() {
            return err(m);
        }
        for f in &self.flows {
            f.validate().map_err(|m| ConfigError::new(0, m))?;
            if f.src.index() >= n {
                return err(format!("flow {}: source {} does not exist", f.id, f.src));
            }
            match f.dst {
                FlowDst::Node(d) if d.index() >= n => return err(format!("flow {}: destination {d} does not exist", f.id)),
                FlowDst::RandomGateway if !self.topology.nodes.iter().any(|s| s.gateway) => {
                    return err(format!("flow {}: random_gateway requested but no node is a gateway", f.id))
                }
                _ => {}
            }
        }
        check_unique_ids(&self.flows).map_err(|m| ConfigError::new(0, m))?;
        if self.run.horizon_us <= self.run.warmup_us {
            return err("horizon must exceed warmup".into());
        }
        if self.run.seeds.is_empty() {
            return err("at least one seed is required".into());
        }
        if !(0.0..=1.0).contains(&self.mac.p_fail) {
            return err(format!("p_fail must lie in [0, 1], got {}", self.mac.p_fail));
        }
        for axis in &self.sweep {
            for v in &axis.values {
                let mut s = self.clone();
                s.sweep.clear();
                s.apply(&axis.key, v).map_err(|m| ConfigError::new(0, format!("sweep {}: {m}", axis.key)))?;
            }
        }
        Ok(())
    }

    /// Set one sweepable parameter from its text form.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "routing" => self.routing = parse_routing(value)?,
            "p0" => self.params.p0 = parse_unit(value)?,
            "ant_rate" => self.params.ant_rate_hz = parse_positive(value)?,
            "ant_sources" => self.params.ant_sources = parse_sources(value)?,
            "hello_interval" => self.params.hello_interval_s = parse_positive(value)?,
            "window" => self.params.window_w = parse_count(value)?,
            "delta_p_cap" => self.params.delta_p_cap = parse_positive(value)?,
            "pheromone_floor" => self.params.pheromone_floor = parse_f64(value)?,
            "rate" => {
                let r = parse_positive(value)?;
                self.flows.iter_mut().for_each(|f| f.rate_pps = r);
            }
            "flows" => {
                let k = parse_count(value)?;
                if k > self.flows.len() {
                    return Err(format!("only {} flows are defined", self.flows.len()));
                }
                self.flows.truncate(k);
            }
            "speed" => self.mobility.speed_mps = parse_nonneg(value)?,
            "mobile_fraction" => self.mobility.mobile_fraction = parse_unit(value)?,
            "pause" => self.mobility.pause_s = parse_nonneg(value)?,
            "p_fail" => self.mac.p_fail = parse_unit(value)?,
            other => return Err(format!("'{other}' cannot be swept")),
        }
        Ok(())
    }

    /// Every combination of sweep values, first axis varying slowest.
    pub fn sweep_points(&self) -> Vec<Vec<(String, String)>> {
        let mut points: Vec<Vec<(String, String)>> = vec![Vec::new()];
        for axis in &self.sweep {
            let mut next = Vec::with_capacity(points.len() * axis.values.len());
            for p in &points {
                for v in &axis.values {
                    let mut q = p.clone();
                    q.push((axis.key.clone(), v.clone()));
                    next.push(q);
                }
            }
            points = next;
        }
        points
    }

    /// The scenario at one sweep point, with the sweep itself removed.
    pub fn at_point(&self, point: &[(String, String)]) -> Result<Scenario, String> {
        let mut s = self.clone();
        s.sweep.clear();
        for (k, v) in point {
            s.apply(k, v)?;
        }
        Ok(s)
    }

    pub fn setup(&self) -> Result<SimSetup, ConfigError> {
        let topology = self.topology.build().map_err(|m| ConfigError::new(0, m))?;
        Ok(SimSetup {
            topology,
            mobility: self.mobility.clone(),
            mac: self.mac.clone(),
            algorithm: self.routing,
            params: self.params.clone(),
            flows: self.flows.clone(),
            horizon_us: self.run.horizon_us,
            warmup_us: self.run.warmup_us,
            dump_interval_us: self.run.dump_interval_us,
            log_transmissions: false,
        })
    }
}

fn parse_routing(v: &str) -> Result<RoutingAlgorithm, String> {
    RoutingAlgorithm::parse(v).ok_or_else(|| format!("unknown routing '{v}' (expected antmesh, static or hopant)"))
}

fn parse_sources(v: &str) -> Result<AntSources, String> {
    AntSources::parse(v).ok_or_else(|| format!("unknown ant_sources '{v}' (expected all or flows)"))
}

fn parse_f64(v: &str) -> Result<f64, String> {
    let x: f64 = v.parse().map_err(|_| format!("'{v}' is not a number"))?;
    if !x.is_finite() {
        return Err(format!("'{v}' is not finite"));
    }
    Ok(x)
}

fn parse_nonneg(v: &str) -> Result<f64, String> {
    let x = parse_f64(v)?;
    if x < 0.0 {
        return Err(format!("{x} must not be negative"));
    }
    Ok(x)
}

fn parse_positive(v: &str) -> Result<f64, String> {
    let x = parse_f64(v)?;
    if x <= 0.0 {
        return Err(format!("{x} must be positive"));
    }
    Ok(x)
}

fn parse_unit(v: &str) -> Result<f64, String> {
    let x = parse_f64(v)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(format!("{x} is outside [0, 1]"));
    }
    Ok(x)
}

fn parse_u64(v: &str) -> Result<u64, String> {
    v.parse().map_err(|_| format!("'{v}' is not a nonnegative integer"))
}

fn parse_count(v: &str) -> Result<usize, String> {
    v.parse().map_err(|_| format!("'{v}' is not a nonnegative integer"))
}

fn parse_bool(v: &str) -> Result<bool, String> {
    match v {
        "true" | "yes" | "on" => Ok(true),
        "false" | "no" | "off" => Ok(false),
        _ => Err(format!("'{v}' is not a boolean")),
    }
}

fn secs_to_us(v: &str) -> Result<u64, String> {
    Ok((parse_nonneg(v)? * 1e6).round() as u64)
}

fn us_to_secs(us: u64) -> f64 {
    us as f64 / 1e6
}

/// `a..b` (inclusive) or a comma list.
pub fn parse_seeds(v: &str) -> Result<Vec<u64>, String> {
    if let Some((a, b)) = v.split_once("..") {
        let (a, b) = (parse_u64(a.trim())?, parse_u64(b.trim())?);
        if b < a {
            return Err(format!("empty seed range {a}..{b}"));
        }
        return Ok((a..=b).collect());
    }
    v.split(',').map(|s| parse_u64(s.trim())).collect()
}

fn format_seeds(seeds: &[u64]) -> String {
    let contiguous = seeds.len() > 1 && seeds.windows(2).all(|w| w[1] == w[0] + 1);
    if contiguous {
        format!("{}..{}", seeds[0], seeds[seeds.len() - 1])
    } else {
        seeds.iter().map(u64::to_string).collect::<Vec<_>>().join(", ")
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Top,
    Topology,
    Mac,
    Routing,
    Traffic,
    Mobility,
    Run,
    Sweep,
}

/// Parse a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario, ConfigError> {
    let mut s = Scenario::default();
    let mut section = Section::Top;
    let mut explicit_nodes = false;
    let mut explicit_flows = false;
    let mut explicit_sweep = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |m: String| ConfigError::new(line_no, m);
        if let Some(name) = line.strip_prefix('[') {
            let name = name.strip_suffix(']').ok_or_else(|| at("unterminated section header".into()))?.trim();
            section = match name {
                "topology" => Section::Topology,
                "mac" => Section::Mac,
                "routing" => Section::Routing,
                "traffic" => Section::Traffic,
                "mobility" => Section::Mobility,
                "run" => Section::Run,
                "sweep" => Section::Sweep,
                other => return Err(at(format!("unknown section [{other}]"))),
            };
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| at(format!("expected 'key = value', got '{line}'")))?;
        let (key, value) = (key.trim(), value.trim());
        let r: Result<(), String> = match section {
            Section::Top => match key {
                "name" => {
                    s.name = value.to_string();
                    Ok(())
                }
                "preset" => preset(value).map(|p| s = p).ok_or_else(|| format!("unknown preset '{value}'")),
                _ => Err(format!("unknown key '{key}'")),
            },
            Section::Topology => parse_topology_key(&mut s.topology, key, value, &mut explicit_nodes),
            Section::Mac => parse_mac_key(&mut s.mac, key, value),
            Section::Routing => match key {
                "routing" => parse_routing(value).map(|r| s.routing = r),
                "p0" => parse_unit(value).map(|x| s.params.p0 = x),
                "ant_rate" => parse_positive(value).map(|x| s.params.ant_rate_hz = x),
                "hello_interval" => parse_positive(value).map(|x| s.params.hello_interval_s = x),
                "window" => parse_count(value).map(|x| s.params.window_w = x),
                "delta_p_cap" => parse_positive(value).map(|x| s.params.delta_p_cap = x),
                "pheromone_floor" => parse_f64(value).map(|x| s.params.pheromone_floor = x),
                "ant_sources" => parse_sources(value).map(|x| s.params.ant_sources = x),
                "hello_expiry" => parse_count(value).map(|x| s.params.hello_expiry = x as u32),
                _ => Err(format!("unknown key '{key}'")),
            }
            .and_then(|_| s.params.validate()),
            Section::Traffic => match key {
                "flow" => {
                    if !explicit_flows {
                        s.flows.clear();
                        explicit_flows = true;
                    }
                    parse_flow(value, s.mac.data_pkt_bytes).map(|f| s.flows.push(f))
                }
                "clear" => parse_bool(value).map(|b| {
                    if b {
                        s.flows.clear();
                        explicit_flows = true;
                    }
                }),
                _ => Err(format!("unknown key '{key}'")),
            },
            Section::Mobility => match key {
                "speed" => parse_nonneg(value).map(|x| s.mobility.speed_mps = x),
                "mobile_fraction" => parse_unit(value).map(|x| s.mobility.mobile_fraction = x),
                "pause" => parse_nonneg(value).map(|x| s.mobility.pause_s = x),
                "tick" => parse_positive(value).map(|x| s.mobility.tick_s = x),
                _ => Err(format!("unknown key '{key}'")),
            },
            Section::Run => match key {
                "horizon" => secs_to_us(value).map(|x| s.run.horizon_us = x),
                "warmup" => secs_to_us(value).map(|x| s.run.warmup_us = x),
                "seeds" => parse_seeds(value).map(|x| s.run.seeds = x),
                "learn_window" => secs_to_us(value).and_then(|x| {
                    if x == 0 {
                        Err("learn_window must be positive".into())
                    } else {
                        s.run.learn_window_us = x;
                        Ok(())
                    }
                }),
                "learn_epsilon" => parse_positive(value).map(|x| s.run.learn_epsilon = x),
                "settle_windows" => parse_count(value).map(|x| s.run.settle_windows = x.max(1)),
                "dump_interval" => secs_to_us(value).map(|x| s.run.dump_interval_us = (x > 0).then_some(x)),
                _ => Err(format!("unknown key '{key}'")),
            },
            Section::Sweep => {
                if !explicit_sweep {
                    s.sweep.clear();
                    explicit_sweep = true;
                }
                if !SWEEP_KEYS.contains(&key) {
                    Err(format!("'{key}' cannot be swept (expected one of {})", SWEEP_KEYS.join(", ")))
                } else {
                    let values: Vec<String> =
                        value.split(',').map(|v| v.trim().to_string()).filter(|v| !v.is_empty()).collect();
                    if values.is_empty() {
                        Err(format!("sweep '{key}' has no values"))
                    } else if s.sweep.iter().any(|a| a.key == key) {
                        Err(format!("sweep '{key}' given twice"))
                    } else {
                        s.sweep.push(SweepAxis { key: key.to_string(), values });
                        Ok(())
                    }
                }
            }
        };
        r.map_err(at)?;
    }
    s.validate()?;
    Ok(s)
}

fn parse_topology_key(t: &mut TopologySpec, key: &str, value: &str, explicit_nodes: &mut bool) -> Result<(), String> {
    match key {
        "preset" => {
            *t = topology_preset(value).ok_or_else(|| format!("unknown topology preset '{value}'"))?;
            *explicit_nodes = false;
        }
        "area" => {
            let parts: Vec<&str> = value.split_whitespace().collect();
            let [w, h] = parts[..] else { return Err("area expects 'width height'".into()) };
            t.area = Area { width: parse_positive(w)?, height: parse_positive(h)? };
        }
        "tx_range" => t.tx_range = parse_positive(value)?,
        "interference_multiplier" => {
            let m = parse_positive(value)?;
            t.interference_multiplier = m;
        }
        "bandwidth" => {
            let b = parse_u64(value)?;
            if b == 0 {
                return Err("bandwidth must be positive".into());
            }
            t.bandwidth_bps = b;
        }
        "node" => {
            if !*explicit_nodes {
                t.nodes.clear();
                *explicit_nodes = true;
            }
            let parts: Vec<&str> = value.split_whitespace().collect();
            if parts.len() < 4 || parts.len() > 5 {
                return Err("node expects 'id x y channels [gateway]'".into());
            }
            let id = parse_count(parts[0])?;
            if id != t.nodes.len() {
                return Err(format!("node ids must be dense and ascending: expected {}, got {id}", t.nodes.len()));
            }
            let position = Position::new(parse_nonneg(parts[1])?, parse_nonneg(parts[2])?);
            let channels: Vec<Channel> = parts[3]
                .split(',')
                .map(|c| c.parse::<Channel>().map_err(|_| format!("'{c}' is not a channel")))
                .collect::<Result<_, _>>()?;
            if channels.is_empty() || channels.len() > MAX_RADIOS {
                return Err(format!("a node needs 1..={MAX_RADIOS} radios"));
            }
            if channels.contains(&0) {
                return Err("channels must be positive".into());
            }
            let gateway = match parts.get(4) {
                None => false,
                Some(&"gateway") => true,
                Some(other) => return Err(format!("unexpected '{other}' (expected 'gateway')")),
            };
            t.nodes.push(NodeSpec { position, channels, gateway });
        }
        _ => return Err(format!("unknown key '{key}'")),
    }
    Ok(())
}

fn parse_mac_key(m: &mut MacConfig, key: &str, value: &str) -> Result<(), String> {
    match key {
        "t_rts" => m.constants.t_rts = parse_u64(value)?,
        "t_cts" => m.constants.t_cts = parse_u64(value)?,
        "t_ack" => m.constants.t_ack = parse_u64(value)?,
        "t_sifs" => m.constants.t_sifs = parse_u64(value)?,
        "t_difs" => m.constants.t_difs = parse_u64(value)?,
        "p_fail" => m.p_fail = parse_unit(value)?,
        "retry_limit" => {
            let r = parse_count(value)?;
            if r == 0 {
                return Err("retry_limit must be at least 1".into());
            }
            m.retry_limit = r as u32;
        }
        "use_rts_cts_overhead" => m.use_rts_cts_overhead = parse_bool(value)?,
        "control_rts_cts" => m.control_rts_cts = parse_bool(value)?,
        "buffer" => m.buffer_packets = parse_count(value)?,
        "ttl" => {
            let t = parse_count(value)?;
            if t == 0 {
                return Err("ttl must be at least 1".into());
            }
            m.ttl = t as u32;
        }
        "data_bytes" => {
            let b = parse_u64(value)?;
            if b == 0 {
                return Err("data_bytes must be positive".into());
            }
            m.data_pkt_bytes = b;
        }
        _ => return Err(format!("unknown key '{key}'")),
    }
    Ok(())
}

/// `id src dst rate start stop [bytes]`; `dst` may be `random_gateway` and
/// `stop` may be `end`.
fn parse_flow(value: &str, default_bytes: u64) -> Result<FlowSpec, String> {
    let p: Vec<&str> = value.split_whitespace().collect();
    if p.len() < 6 || p.len() > 7 {
        return Err("flow expects 'id src dst rate start stop [bytes]'".into());
    }
    let id = p[0].parse::<u32>().map_err(|_| format!("'{}' is not a flow id", p[0]))?;
    let src = NodeId(p[1].parse::<u32>().map_err(|_| format!("'{}' is not a node id", p[1]))?);
    let dst = if p[2] == "random_gateway" {
        FlowDst::RandomGateway
    } else {
        FlowDst::Node(NodeId(p[2].parse::<u32>().map_err(|_| format!("'{}' is not a node id", p[2]))?))
    };
    let rate_pps = parse_positive(p[3])?;
    let start_us = secs_to_us(p[4])?;
    let stop_us = if p[5] == "end" { None } else { Some(secs_to_us(p[5])?) };
    let pkt_bytes = match p.get(6) {
        Some(b) => parse_u64(b)?,
        None => default_bytes,
    };
    let f = FlowSpec { id, src, dst, rate_pps, start_us, stop_us, pkt_bytes };
    f.validate()?;
    Ok(f)
}

/// Fully explicit text form; parsing it yields an identical scenario.
pub fn serialize_scenario(s: &Scenario) -> String {
    let mut o = String::new();
    let t = &s.topology;
    let m = &s.mac;
    let p = &s.params;
    let _ = writeln!(o, "name = {}", s.name);
    let _ = writeln!(o, "\n[topology]");
    let _ = writeln!(o, "area = {} {}", t.area.width, t.area.height);
    let _ = writeln!(o, "tx_range = {}", t.tx_range);
    let _ = writeln!(o, "interference_multiplier = {}", t.interference_multiplier);
    let _ = writeln!(o, "bandwidth = {}", t.bandwidth_bps);
    for (i, n) in t.nodes.iter().enumerate() {
        let chans: Vec<String> = n.channels.iter().map(|c| c.to_string()).collect();
        let gw = if n.gateway { " gateway" } else { "" };
        let _ = writeln!(o, "node = {i} {} {} {}{gw}", n.position.x, n.position.y, chans.join(","));
    }
    let _ = writeln!(o, "\n[mac]");
    let c = &m.constants;
    let _ = writeln!(o, "t_rts = {}\nt_cts = {}\nt_ack = {}\nt_sifs = {}\nt_difs = {}", c.t_rts, c.t_cts, c.t_ack, c.t_sifs, c.t_difs);
    let _ = writeln!(o, "p_fail = {}\nretry_limit = {}", m.p_fail, m.retry_limit);
    let _ = writeln!(o, "use_rts_cts_overhead = {}", m.use_rts_cts_overhead);
    let _ = writeln!(o, "control_rts_cts = {}", m.control_rts_cts);
    let _ = writeln!(o, "buffer = {}\nttl = {}\ndata_bytes = {}", m.buffer_packets, m.ttl, m.data_pkt_bytes);
    let _ = writeln!(o, "\n[routing]");
    let _ = writeln!(o, "routing = {}", s.routing.label());
    let _ = writeln!(o, "p0 = {}\nant_rate = {}\nhello_interval = {}", p.p0, p.ant_rate_hz, p.hello_interval_s);
    let _ = writeln!(o, "window = {}\ndelta_p_cap = {}", p.window_w, p.delta_p_cap);
    let _ = writeln!(o, "pheromone_floor = {}", p.pheromone_floor);
    let _ = writeln!(o, "ant_sources = {}\nhello_expiry = {}", p.ant_sources.label(), p.hello_expiry);
    let _ = writeln!(o, "\n[traffic]");
    if s.flows.is_empty() {
        let _ = writeln!(o, "clear = true");
    }
    for f in &s.flows {
        let dst = match f.dst {
            FlowDst::Node(n) => n.to_string(),
            FlowDst::RandomGateway => "random_gateway".into(),
        };
        let stop = f.stop_us.map_or_else(|| "end".to_string(), |x| us_to_secs(x).to_string());
        let _ = writeln!(o, "flow = {} {} {dst} {} {} {stop} {}", f.id, f.src, f.rate_pps, us_to_secs(f.start_us), f.pkt_bytes);
    }
    let mo = &s.mobility;
    let _ = writeln!(o, "\n[mobility]");
    let _ = writeln!(o, "speed = {}\nmobile_fraction = {}\npause = {}\ntick = {}", mo.speed_mps, mo.mobile_fraction, mo.pause_s, mo.tick_s);
    let r = &s.run;
    let _ = writeln!(o, "\n[run]");
    let _ = writeln!(o, "horizon = {}\nwarmup = {}", us_to_secs(r.horizon_us), us_to_secs(r.warmup_us));
    let _ = writeln!(o, "seeds = {}", format_seeds(&r.seeds));
    let _ = writeln!(o, "learn_window = {}", us_to_secs(r.learn_window_us));
    let _ = writeln!(o, "learn_epsilon = {}\nsettle_windows = {}", r.learn_epsilon, r.settle_windows);
    let _ = writeln!(o, "dump_interval = {}", us_to_secs(r.dump_interval_us.unwrap_or(0)));
    let _ = writeln!(o, "\n[sweep]");
    for a in &s.sweep {
        let _ = writeln!(o, "{} = {}", a.key, a.values.join(", "));
    }
    o
}

impl Default for TopologySpec {
    fn default() -> Self {
        TopologySpec {
            area: Area { width: 1000.0, height: 1000.0 },
            tx_range: 250.0,
            interference_multiplier: 2.0,
            bandwidth_bps: DEFAULT_BANDWIDTH_BPS,
            nodes: Vec::new(),
        }
    }
}
