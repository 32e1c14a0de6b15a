use antmesh_core::antmesh::SmartAnt;
use antmesh_core::mac::{expected_tx_time, EnqueueOutcome, Frame, MacConstants, Packet, PacketKind, RadioQueue};
use antmesh_core::network::TxRecord;
use antmesh_core::scenario::{preset, NodeSpec, Scenario, TopologySpec};
use antmesh_core::topology::{Channel, Position};
use antmesh_core::traffic::{FlowDst, FlowSpec};
use antmesh_core::{NodeId, RoutingAlgorithm, RunOutput, SimTime, Simulation};

fn node(x: f64, y: f64, channels: Vec<Channel>) -> NodeSpec {
    NodeSpec { position: Position::new(x, y), channels, gateway: false }
}

fn cbr(id: u32, src: u32, dst: u32, rate_pps: f64) -> FlowSpec {
    FlowSpec { id, src: NodeId(src), dst: FlowDst::Node(NodeId(dst)), rate_pps, start_us: 0, stop_us: None, pkt_bytes: 512 }
}

fn run_logged(s: &Scenario, seed: u64) -> RunOutput {
    let mut setup = s.setup().unwrap();
    setup.log_transmissions = true;
    Simulation::new(setup, seed, None).unwrap().run().unwrap()
}

#[test]
fn lone_link_delay_is_pure_service_time() {
    let mut s = Scenario {
        topology: TopologySpec { nodes: vec![node(100.0, 100.0, vec![1]), node(300.0, 100.0, vec![1])], ..TopologySpec::default() },
        routing: RoutingAlgorithm::Static,
        flows: vec![cbr(1, 0, 1, 5.0)],
        ..Scenario::default()
    };
    s.mac.p_fail = 0.0;
    s.run.warmup_us = 0;
    let out = run_logged(&s, 3);
    let e_tx = expected_tx_time(4096, 2_000_000, 1, &MacConstants::default()).unwrap();
    assert_eq!(e_tx, 3088);
    assert!(out.ledger.data_delivered > 100);
    for d in &out.ledger.delay_samples {
        assert_eq!(d.delay_us, e_tx);
    }
}

#[test]
fn per_hop_delays_add_up_along_a_path() {
    // 0 -> 1 -> 2 with each hop on its own channel: nothing contends, so a
    // packet's delay is exactly its two service times
    let mut s = Scenario {
        topology: TopologySpec {
            nodes: vec![node(100.0, 100.0, vec![1]), node(300.0, 100.0, vec![1, 2]), node(500.0, 100.0, vec![2])],
            ..TopologySpec::default()
        },
        routing: RoutingAlgorithm::Static,
        flows: vec![cbr(1, 0, 2, 20.0)],
        ..Scenario::default()
    };
    s.mac.p_fail = 0.0;
    s.run.warmup_us = 0;
    let out = run_logged(&s, 11);
    let log = out.tx_log.unwrap();
    let hop = |n: u32| -> Vec<&TxRecord> { log.iter().filter(|r| r.kind == PacketKind::Data && r.node == NodeId(n)).collect() };
    let (first, second) = (hop(0), hop(1));
    assert_eq!(first.len(), second.len());
    for (a, b) in first.iter().zip(&second) {
        assert_eq!(a.end.0 - a.start.0, 3088);
        assert_eq!(b.start, a.end, "relay starts as soon as the packet lands");
        assert_eq!(b.end.0 - b.start.0, 3088);
    }
    assert!(out.ledger.data_delivered > 500);
    assert!(out.ledger.delay_samples.iter().all(|d| d.delay_us == 2 * 3088));
}

#[test]
fn retries_stretch_the_airtime() {
    let mut s = Scenario {
        topology: TopologySpec { nodes: vec![node(100.0, 100.0, vec![1]), node(300.0, 100.0, vec![1])], ..TopologySpec::default() },
        routing: RoutingAlgorithm::Static,
        flows: vec![cbr(1, 0, 1, 20.0)],
        ..Scenario::default()
    };
    s.mac.p_fail = 0.3;
    let out = run_logged(&s, 8);
    let log = out.tx_log.unwrap();
    assert!(log.iter().any(|r| r.attempts > 1));
    for r in &log {
        let per_try = expected_tx_time(r.bits, r.bandwidth_bps, 1, &MacConstants::default()).unwrap();
        assert_eq!(r.end.0 - r.start.0, per_try * r.attempts as u64);
    }
}

#[test]
fn overlapping_transmissions_never_conflict() {
    let mut s = preset("fig4a-p0sweep").unwrap();
    s.sweep.clear();
    s.apply("rate", "40").unwrap();
    s.run.horizon_us = 8_000_000;
    let out = run_logged(&s, 5);
    let topo = s.setup().unwrap().topology;
    let mut log = out.tx_log.unwrap();
    assert!(log.len() > 1000);
    log.sort_by_key(|r| (r.start, r.node));
    let ends = |r: &TxRecord| [Some(r.node), r.rx];
    for (i, a) in log.iter().enumerate() {
        for b in log[i + 1..].iter().take_while(|b| b.start < a.end) {
            if a.channel != b.channel {
                continue;
            }
            let clash = ends(a).iter().flatten().any(|p| ends(b).iter().flatten().any(|q| topo.within_interference(*p, *q)));
            assert!(!clash, "{a:?} overlaps {b:?}");
        }
    }
}

#[test]
fn every_sent_packet_is_accounted_for() {
    for name in ["grid15", "fig4-learning", "semirandom20"] {
        let mut s = preset(name).unwrap();
        if let Some(p) = s.sweep_points().first().cloned() {
            s = s.at_point(&p).unwrap();
        }
        s.apply("rate", "200").unwrap();
        s.run.horizon_us = 6_000_000;
        let out = run_logged(&s, 2);
        let l = &out.ledger;
        assert!(l.data_sent > 0);
        assert_eq!(l.data_sent, l.data_delivered + l.loss.total(), "{name}");
        // what the horizon cut off must still fit in the buffers or on the air
        let setup = s.setup().unwrap();
        let radios: usize = setup.topology.nodes().map(|n| setup.topology.radios(n).len()).sum();
        assert!(l.loss.horizon_cut as usize <= radios * (setup.mac.buffer_packets + 1), "{name}");
        assert!(l.loss.queue_overflow > 0, "{name} should overflow at this load");
    }
}

#[test]
fn control_frames_jump_the_data_queue() {
    let mut q = RadioQueue::new(2);
    let data = |id| Frame { packet: Packet::data(id, 1, NodeId(0), NodeId(3), 4096, SimTime::ZERO, 32), next_hop: Some(NodeId(1)) };
    assert_eq!(q.push(data(1)), EnqueueOutcome::Accepted);
    assert_eq!(q.push(data(2)), EnqueueOutcome::Accepted);
    assert_eq!(q.push(data(3)), EnqueueOutcome::Dropped);
    let ant = Frame { packet: Packet::ant(9, SmartAnt::forward(NodeId(0), NodeId(3)), SimTime::ZERO, 32), next_hop: Some(NodeId(1)) };
    assert_eq!(q.push(ant), EnqueueOutcome::Accepted);
    assert_eq!(q.data_len(), 2);
    assert_eq!(q.pop().unwrap().packet.kind(), PacketKind::Fsa);
    assert_eq!(q.pop().unwrap().packet.id, 1);
}
