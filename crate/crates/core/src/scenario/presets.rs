//! Built-in topologies and experiment setups. Changing any of these changes
//! published numbers, so treat edits as breaking.

use crate::antmesh::{AntMeshParams, AntSources};
use crate::network::RoutingAlgorithm;
use crate::scenario::{NodeSpec, RunSpec, Scenario, SweepAxis, TopologySpec};
use crate::sim::RngStream;
use crate::topology::{Area, Channel, MobilityConfig, NodeId, Position};
use crate::traffic::{FlowDst, FlowSpec};

pub const PRESETS: &[(&str, &str)] = &[
    ("grid15", "3x5 two-radio grid, one flow toward the corner gateway"),
    ("semirandom20", "grid15 plus 20 random multi-radio nodes, four flows to the corner gateways"),
    ("random100-mobile", "100 two-radio nodes in 500x500 m, six flows, random waypoint at 10 m/s"),
    ("fig4-learning", "grid15: one flow, +3 flows at 10 s, -3 at 20 s; sweeps ant rate 10/20/40"),
    ("fig4a-p0sweep", "grid15 under four flows; sweeps flow rate 10/20/40 pps and p0 0.2/0.5/0.8"),
    ("fig4c-nrl", "grid15: light (1 flow) vs overloaded (4 flows) load; sweeps ant rate 10/20/40"),
    ("fig5-saturation", "semirandom20; sweeps flow rate 10..200 pps for antmesh and hopant"),
    ("fig6-speed-sweep", "random100-mobile; sweeps speed 0/10/30 m/s for antmesh and static"),
    ("fig6-mobile-fraction", "random100-mobile at 10 m/s; sweeps mobile fraction 0.2..1.0"),
];

pub fn preset_names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(n, _)| *n)
}

const GRID_SPACING: f64 = 250.0;
const GRID_GATEWAY: u32 = 4;
const SEMIRANDOM_SEED: u64 = 20;
const RANDOM100_SEED: u64 = 100;

/// Grid node `(row, col)` sits at `(250 col, 250 + 250 row)`. Its two radios
/// use channels `1 + (row + col) % 3` and `1 + (row + col + 1) % 3`, so every
/// lattice link has exactly one shared channel and consecutive links along a
/// row or column never share one.
fn grid_nodes() -> Vec<NodeSpec> {
    let mut nodes = Vec::with_capacity(15);
    for row in 0..3u32 {
        for col in 0..5u32 {
            let s = row + col;
            nodes.push(NodeSpec {
                position: Position::new(GRID_SPACING * col as f64, GRID_SPACING + GRID_SPACING * row as f64),
                channels: vec![1 + (s % 3) as Channel, 1 + ((s + 1) % 3) as Channel],
                gateway: row * 5 + col == GRID_GATEWAY,
            });
        }
    }
    nodes
}

fn grid15_topology() -> TopologySpec {
    TopologySpec { nodes: grid_nodes(), ..TopologySpec::default() }
}

fn random_channels(rng: &mut RngStream, count: usize) -> Vec<Channel> {
    let mut pool: Vec<Channel> = vec![1, 2, 3];
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let i = rng.below(pool.len());
        out.push(pool.remove(i));
    }
    out.sort_unstable();
    out
}

/// The grid plus 20 nodes drawn uniformly over the area with one to three
/// radios each, redrawn until the network is connected. The node nearest to
/// each area corner is a gateway (grid gateway flags are cleared).
fn semirandom20_topology() -> TopologySpec {
    let mut rng = RngStream::new(SEMIRANDOM_SEED, "preset-semirandom20");
    loop {
        let mut t = grid15_topology();
        for n in &mut t.nodes {
            n.gateway = false;
        }
        for _ in 0..20 {
            let position = Position::new(rng.range_f64(0.0, 1000.0), rng.range_f64(0.0, 1000.0));
            let radios = 1 + rng.below(3);
            t.nodes.push(NodeSpec { position, channels: random_channels(&mut rng, radios), gateway: false });
        }
        for corner in [(0.0, 0.0), (1000.0, 0.0), (0.0, 1000.0), (1000.0, 1000.0)] {
            let c = Position::new(corner.0, corner.1);
            let best = (0..t.nodes.len())
                .filter(|&i| !t.nodes[i].gateway)
                .min_by(|&a, &b| t.nodes[a].position.distance(&c).total_cmp(&t.nodes[b].position.distance(&c)))
                .expect("nonempty");
            t.nodes[best].gateway = true;
        }
        if t.build().map(|topo| topo.is_connected()).unwrap_or(false) {
            return t;
        }
    }
}

/// 100 nodes uniform over 500x500 m, two radios on distinct channels of
/// {1, 2, 3} (any two nodes therefore share a channel), redrawn until
/// connected.
fn random100_topology() -> TopologySpec {
    let mut rng = RngStream::new(RANDOM100_SEED, "preset-random100");
    loop {
        let mut t = TopologySpec { area: Area { width: 500.0, height: 500.0 }, ..TopologySpec::default() };
        for _ in 0..100 {
            let position = Position::new(rng.range_f64(0.0, 500.0), rng.range_f64(0.0, 500.0));
            t.nodes.push(NodeSpec { position, channels: random_channels(&mut rng, 2), gateway: false });
        }
        if t.build().map(|topo| topo.is_connected()).unwrap_or(false) {
            return t;
        }
    }
}

pub fn topology_preset(name: &str) -> Option<TopologySpec> {
    match name {
        "grid15" => Some(grid15_topology()),
        "semirandom20" => Some(semirandom20_topology()),
        "random100" => Some(random100_topology()),
        _ => None,
    }
}

fn flow(id: u32, src: u32, dst: u32, rate_pps: f64, start_s: u64, stop_s: Option<u64>) -> FlowSpec {
    FlowSpec {
        id,
        src: NodeId(src),
        dst: FlowDst::Node(NodeId(dst)),
        rate_pps,
        start_us: start_s * 1_000_000,
        stop_us: stop_s.map(|s| s * 1_000_000),
        pkt_bytes: 512,
    }
}

fn axis(key: &str, values: &[&str]) -> SweepAxis {
    SweepAxis { key: key.into(), values: values.iter().map(|v| v.to_string()).collect() }
}

fn base(name: &str, topology: TopologySpec) -> Scenario {
    Scenario {
        name: name.into(),
        topology,
        params: AntMeshParams { ant_sources: AntSources::Flows, ..AntMeshParams::default() },
        run: RunSpec { seeds: (1..=10).collect(), ..RunSpec::default() },
        ..Scenario::default()
    }
}

/// Flow sources on the grid, all heading for the gateway in the top-right
/// corner: the far corner first, then the three nodes of the left column
/// and bottom row whose shortest paths overlap it.
const GRID_SOURCES: [u32; 4] = [10, 5, 11, 0];

fn grid_flows(rate: f64, extra_window: Option<(u64, u64)>) -> Vec<FlowSpec> {
    GRID_SOURCES
        .iter()
        .enumerate()
        .map(|(i, &src)| match (i, extra_window) {
            (0, _) | (_, None) => flow(i as u32 + 1, src, GRID_GATEWAY, rate, 0, None),
            (_, Some((a, b))) => flow(i as u32 + 1, src, GRID_GATEWAY, rate, a, Some(b)),
        })
        .collect()
}

fn semirandom_flows(topo: &TopologySpec, rate: f64) -> Vec<FlowSpec> {
    // four sources near the centre of the area, one per gateway
    let gateways: Vec<u32> = (0..topo.nodes.len() as u32).filter(|&i| topo.nodes[i as usize].gateway).collect();
    let centre = Position::new(500.0, 500.0);
    let mut order: Vec<u32> = (0..topo.nodes.len() as u32).filter(|i| !gateways.contains(i)).collect();
    order.sort_by(|&a, &b| {
        let (pa, pb) = (topo.nodes[a as usize].position, topo.nodes[b as usize].position);
        pa.distance(&centre).total_cmp(&pb.distance(&centre)).then(a.cmp(&b))
    });
    gateways.iter().zip(order).enumerate().map(|(i, (&g, src))| flow(i as u32 + 1, src, g, rate, 0, None)).collect()
}

fn random100_flows(rate: f64) -> Vec<FlowSpec> {
    let mut rng = RngStream::new(RANDOM100_SEED, "preset-random100-flows");
    let mut flows = Vec::new();
    let mut used = Vec::new();
    while flows.len() < 6 {
        let (s, d) = (rng.below(100) as u32, rng.below(100) as u32);
        if s == d || used.contains(&s) || used.contains(&d) {
            continue;
        }
        used.extend([s, d]);
        flows.push(flow(flows.len() as u32 + 1, s, d, rate, 0, None));
    }
    flows
}

pub fn preset(name: &str) -> Option<Scenario> {
    let s = match name {
        "grid15" => Scenario { flows: grid_flows(20.0, None)[..1].to_vec(), ..base(name, grid15_topology()) },
        "semirandom20" => {
            let t = semirandom20_topology();
            Scenario { flows: semirandom_flows(&t, 20.0), ..base(name, t) }
        }
        "random100-mobile" => random100_mobile(name),
        "fig4-learning" => Scenario {
            flows: grid_flows(20.0, Some((10, 20))),
            sweep: vec![axis("ant_rate", &["10", "20", "40"])],
            ..base(name, grid15_topology())
        },
        "fig4a-p0sweep" => Scenario {
            flows: grid_flows(20.0, None),
            sweep: vec![axis("rate", &["10", "20", "40"]), axis("p0", &["0.2", "0.5", "0.8"])],
            ..base(name, grid15_topology())
        },
        "fig4c-nrl" => {
            let mut flows = grid_flows(60.0, None);
            flows[0].rate_pps = 20.0;
            Scenario {
                flows,
                sweep: vec![axis("flows", &["1", "4"]), axis("ant_rate", &["10", "20", "40"])],
                ..base(name, grid15_topology())
            }
        }
        "fig5-saturation" => {
            let t = semirandom20_topology();
            Scenario {
                flows: semirandom_flows(&t, 10.0),
                sweep: vec![
                    axis("rate", &["10", "25", "50", "100", "200"]),
                    axis("routing", &["antmesh", "hopant"]),
                ],
                ..base(name, t)
            }
        }
        "fig6-speed-sweep" => Scenario {
            sweep: vec![axis("speed", &["0", "10", "30"]), axis("routing", &["antmesh", "static"])],
            ..random100_mobile(name)
        },
        "fig6-mobile-fraction" => Scenario {
            sweep: vec![
                axis("mobile_fraction", &["0.2", "0.4", "0.6", "0.8", "1"]),
                axis("routing", &["antmesh", "static"]),
            ],
            ..random100_mobile(name)
        },
        _ => return None,
    };
    Some(s)
}

fn random100_mobile(name: &str) -> Scenario {
    let mut s = base(name, random100_topology());
    s.flows = random100_flows(10.0);
    s.params.ant_rate_hz = 10.0;
    s.mobility = MobilityConfig { speed_mps: 10.0, mobile_fraction: 1.0, ..MobilityConfig::default() };
    s.run.horizon_us = 60_000_000;
    s.routing = RoutingAlgorithm::AntMesh;
    s
}
