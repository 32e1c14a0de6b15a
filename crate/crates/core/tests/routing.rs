use antmesh_core::baselines::StaticRouteTable;
use antmesh_core::network::TableRow;
use antmesh_core::scenario::{preset, topology_preset, NodeSpec, Scenario, TopologySpec};
use antmesh_core::topology::{Channel, Position};
use antmesh_core::traffic::{FlowDst, FlowSpec};
use antmesh_core::{NodeId, RoutingAlgorithm};
use antmesh_core::experiment::run_once;

fn node(x: f64, y: f64, channels: Vec<Channel>) -> NodeSpec {
    NodeSpec { position: Position::new(x, y), channels, gateway: false }
}

fn flow(src: u32, dst: u32, rate_pps: f64) -> FlowSpec {
    FlowSpec { id: 1, src: NodeId(src), dst: FlowDst::Node(NodeId(dst)), rate_pps, start_us: 0, stop_us: None, pkt_bytes: 512 }
}

fn entry(rows: &[TableRow], node: u32, dst: u32, via: u32) -> f64 {
    rows.iter()
        .find(|r| r.node == NodeId(node) && r.dst == NodeId(dst) && r.via == NodeId(via))
        .map(|r| r.probability)
        .unwrap_or_else(|| panic!("no entry {node}->{dst} via {via}"))
}

#[test]
fn static_routes_follow_manhattan_distance_on_the_grid() {
    let topo = topology_preset("grid15").unwrap().build().unwrap();
    let table = StaticRouteTable::compute(&topo);
    for src in 0..15u32 {
        for dst in 0..15u32 {
            if src == dst {
                continue;
            }
            let (r1, c1, r2, c2) = (src / 5, src % 5, dst / 5, dst % 5);
            let manhattan = r1.abs_diff(r2) + c1.abs_diff(c2);
            let mut at = NodeId(src);
            let mut hops = 0;
            while at != NodeId(dst) {
                at = table.next_hop(at, NodeId(dst)).unwrap();
                hops += 1;
                assert!(hops <= 15);
            }
            assert_eq!(hops, manhattan, "{src}->{dst}");
        }
    }
}

#[test]
fn static_routing_reports_partitions() {
    let spec = TopologySpec { nodes: vec![node(0.0, 0.0, vec![1]), node(900.0, 900.0, vec![1])], ..TopologySpec::default() };
    let table = StaticRouteTable::compute(&spec.build().unwrap());
    assert!(table.next_hop(NodeId(0), NodeId(1)).is_err());
}

/// S (0) has a dead-end neighbour X (1) and a relay R (2) in front of D (3).
fn dead_end_scenario(routing: RoutingAlgorithm) -> Scenario {
    let topology = TopologySpec {
        nodes: vec![node(200.0, 200.0, vec![1]), node(200.0, 400.0, vec![1]), node(400.0, 200.0, vec![1]), node(600.0, 200.0, vec![1])],
        ..TopologySpec::default()
    };
    let mut s = Scenario { topology, routing, flows: vec![flow(0, 3, 2.0)], ..Scenario::default() };
    s.params.ant_rate_hz = 10.0;
    s.params.pheromone_floor = 0.0;
    s.run.horizon_us = 10_000_000;
    s
}

#[test]
fn hop_ants_lock_onto_the_only_path() {
    let out = run_once(&dead_end_scenario(RoutingAlgorithm::HopAnt), 1, None).unwrap();
    assert!(entry(&out.final_tables, 0, 3, 2) > 0.99);
    assert!(out.ledger.ants.died > 0, "ants into the dead end die");
}

#[test]
fn antmesh_learns_the_only_path_too() {
    let out = run_once(&dead_end_scenario(RoutingAlgorithm::AntMesh), 1, None).unwrap();
    assert!(entry(&out.final_tables, 0, 3, 2) > 0.99);
    assert_eq!(out.ledger.data_delivered + out.ledger.loss.total(), out.ledger.data_sent);
    assert!(out.ledger.data_delivered as f64 >= 0.95 * out.ledger.data_sent as f64);
}

#[test]
fn neighbouring_destination_is_reached_in_one_hop() {
    let topology = TopologySpec {
        nodes: vec![node(200.0, 200.0, vec![1]), node(400.0, 200.0, vec![1]), node(300.0, 350.0, vec![1])],
        ..TopologySpec::default()
    };
    let mut s = Scenario { topology, flows: vec![flow(0, 1, 10.0)], ..Scenario::default() };
    s.mac.p_fail = 0.0;
    let mut setup = s.setup().unwrap();
    setup.log_transmissions = true;
    let out = antmesh_core::Simulation::new(setup, 3, None).unwrap().run().unwrap();
    let data: Vec<_> = out.tx_log.unwrap().into_iter().filter(|r| r.kind == antmesh_core::mac::PacketKind::Data).collect();
    assert!(!data.is_empty());
    assert!(data.iter().all(|r| r.node == NodeId(0) && r.rx == Some(NodeId(1))));
}

#[test]
fn antmesh_tables_stay_normalised_after_a_run() {
    let mut s = preset("fig4-learning").unwrap();
    s.sweep.clear();
    s.run.horizon_us = 12_000_000;
    let out = run_once(&s, 9, None).unwrap();
    let mut sums: std::collections::BTreeMap<(NodeId, NodeId), f64> = Default::default();
    for r in &out.final_tables {
        assert!((0.0..=1.0).contains(&r.probability));
        *sums.entry((r.node, r.dst)).or_default() += r.probability;
    }
    assert!(!sums.is_empty());
    for ((n, d), total) in sums {
        assert!((total - 1.0).abs() < 1e-9, "column {n}->{d} sums to {total}");
    }
    assert!(out.ledger.ants.completed > 0);
    assert!(out.ledger.ants.completed <= out.ledger.ants.launched);
}
