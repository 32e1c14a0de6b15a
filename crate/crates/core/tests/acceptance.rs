//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Pass criterion names as arguments to run a subset.

use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use antmesh_core::antmesh::estimation::{inter_flow_delay, intra_flow_cost, link_quality, reinforcement};
use antmesh_core::antmesh::transition::select_next_hop;
use antmesh_core::antmesh::{HelloAnt, Hop, HopContext, NodeState, PheromoneTable, SmartAnt};
use antmesh_core::experiment::{csv_string, run_experiment, run_ledgers, run_once, RunRow};
use antmesh_core::mac::{expected_tx_time, mac_overhead, MacConstants, PacketKind};
use antmesh_core::metrics::{self, stats};
use antmesh_core::scenario::{preset, NodeSpec, Scenario, SweepAxis, TopologySpec, PRESETS};
use antmesh_core::topology::{Channel, Position};
use antmesh_core::traffic::{FlowDst, FlowSpec};
use antmesh_core::{NodeId, SimTime, Simulation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// ---- pinned thresholds -------------------------------------------------

/// Relative tolerance for float equation checks.
const EQ_REL_TOL: f64 = 1e-12;
const NORM_OPS: usize = 10_000;
const NORM_TOL: f64 = 1e-9;
const LAW_DRAWS: usize = 1_000_000;
const LAW_P0S: [f64; 4] = [0.0, 0.5, 0.8, 1.0];
const LAW_SIGMAS: f64 = 3.0;
const SEEDS: std::ops::RangeInclusive<u64> = 1..=10;
const LEARNING_ANT_RATES: [&str; 3] = ["10", "20", "40"];
const LEARNING_MIN_SEEDS: usize = 8;
const NRL_ANT_RATES: [&str; 3] = ["10", "20", "40"];
const NRL_MIN_SEEDS: usize = 9;
/// Moderate-to-high load: four flows at this rate approach the grid's
/// capacity without saturating it.
const P0_RATE_PPS: &str = "20";
const P0_LOW_P0: &str = "0.2";
const P0_HIGH_P0: &str = "0.8";
const DIVERSITY_MIN_SHARE: f64 = 0.70;
const DIVERSITY_P0: f64 = 0.8;
/// A path whose hops share a channel carries about 160 pps of 512-byte
/// packets; the diverse path about twice that. The load sits between, where
/// the shared channel backs up the relay and the difference becomes visible.
const DIVERSITY_RATE_PPS: f64 = 200.0;
/// Packets sent before this instant are left out of the steady-state count.
const DIVERSITY_STEADY_FROM_US: u64 = 10_000_000;
const MOBILITY_SPEEDS: [&str; 3] = ["0", "10", "30"];
const MOBILITY_FAST: &str = "30";
/// Horizon used for the determinism runs, so every preset fits the budget.
const DETERMINISM_HORIZON_US: u64 = 4_000_000;
const DETERMINISM_SEED: u64 = 7;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= EQ_REL_TOL * b.abs().max(f64::MIN_POSITIVE)
}

fn seeds() -> Vec<u64> {
    SEEDS.collect()
}

// ---- equations ----------------------------------------------------------

fn equation_suite() -> Outcome {
    let mut failures = Vec::new();
    let mut check = |name: &str, ok: bool| {
        if !ok {
            failures.push(name.to_string());
        }
    };
    let c = MacConstants::default();
    // overhead: 352 + 304 + 3*10 + 50 + 304
    check("mac overhead", mac_overhead(&c) == 1040);
    // service time: 1040 + 4096 bits / 2 Mbps
    check("expected tx time", expected_tx_time(4096, 2_000_000, 1, &c) == Ok(3088));
    check("expected tx time, two attempts", expected_tx_time(4096, 2_000_000, 2, &c) == Ok(6176));
    check("link quality", close(link_quality(3088.0, 5), 18_528.0));
    check("link quality, empty queue", close(link_quality(3088.0, 0), 3088.0));
    check("inter-flow delay", close(inter_flow_delay(1000.0, &[0, 3, 5]), 5000.0));
    check("inter-flow delay clamp", close(inter_flow_delay(1000.0, &[0, 0]), 1000.0));
    check("inter-flow delay, no interferers", close(inter_flow_delay(1000.0, &[]), 1000.0));
    // 2 * 4 * 4096 / 2e6 s
    check("intra-flow cost", close(intra_flow_cost(Some(2), 2, 4, 4096, 2_000_000), 16_384.0));
    check("intra-flow cost, distinct channels", intra_flow_cost(Some(4), 2, 4, 4096, 2_000_000) == 0.0);
    check("reinforcement, cap", close(reinforcement(1000.0, 250.0, 1.0), 1.0));
    check("reinforcement", close(reinforcement(1000.0, 2000.0, 1.0), 0.25));
    check("reinforcement, equal", close(reinforcement(1000.0, 1000.0, 1.0), 0.5));

    // cumulative trip at one backward-ant hop: node 1 charged for 1 -> 2 on
    // channel 2, the hop after it also on channel 2
    let mut st = NodeState::new(NodeId(1), vec![NodeId(0), NodeId(2)], 10);
    let hello = HelloAnt { from: NodeId(2), queues: vec![(2, 4)], neighbors: vec![(NodeId(3), vec![(2, 5)]), (NodeId(1), vec![(2, 9)])] };
    st.absorb_hello(NodeId(2), 2, &hello, 3088.0, 1, SimTime(0));
    let mut ant = SmartAnt::forward(NodeId(0), NodeId(9));
    ant.hops = vec![Hop { node: NodeId(0), channel: 1 }, Hop { node: NodeId(1), channel: 2 }, Hop { node: NodeId(2), channel: 2 }];
    ant.trip_us = 10_000.0;
    let ctx = HopContext { now: SimTime(0), e_tx_us: 3088.0, own_queue: 1, pkt_bits: 4096, link_bps: 2_000_000, max_age_us: 3_000_000 };
    let step = st.absorb_bsa(&ant, 1, &ctx, 1.0);
    // LQ = 3088 * 2; worst queue 5 (own report of node 1 excluded); alpha = 2*4*2048
    let lq = 6176.0;
    let ifld = lq * 5.0;
    let alpha = 16_384.0;
    check("bsa link quality", close(step.lq_us, lq));
    check("bsa inter-flow delay", close(step.ifld_us, ifld));
    check("bsa intra-flow cost", close(step.alpha_us, alpha));
    check("bsa cumulative trip", close(step.trip_us, ifld + alpha + 10_000.0));
    check("bsa first reinforcement", close(step.delta_p, 0.5));
    check("bsa delay table", st.delay.last_trip_via(NodeId(9), NodeId(2)).is_some_and(|t| close(t, ifld + alpha + 10_000.0)));

    let mut t = PheromoneTable::new(vec![NodeId(1), NodeId(2)]);
    t.ensure_column(NodeId(5));
    t.reinforce(NodeId(5), NodeId(1), 0.5).unwrap();
    check("pheromone two-way", close(t.probability(NodeId(5), NodeId(1)).unwrap(), 2.0 / 3.0));
    check("pheromone two-way other", close(t.probability(NodeId(5), NodeId(2)).unwrap(), 1.0 / 3.0));

    // {0.5, 0.3, 0.2} reached from uniform thirds, then reinforce the first
    let mut t = PheromoneTable::new(vec![NodeId(1), NodeId(2), NodeId(3)]);
    t.ensure_column(NodeId(7));
    t.reinforce(NodeId(7), NodeId(1), 0.5).unwrap(); // {5/9, 2/9, 2/9}
    let before: Vec<f64> = t.entries(NodeId(7)).iter().map(|e| e.1).collect();
    t.reinforce(NodeId(7), NodeId(1), 0.5).unwrap();
    let after: Vec<f64> = t.entries(NodeId(7)).iter().map(|e| e.1).collect();
    check("pheromone three-way via", close(after[0], (before[0] + 0.5) / 1.5));
    check("pheromone three-way others", close(after[1], before[1] / 1.5) && close(after[2], before[2] / 1.5));
    check("pheromone column sum", (after.iter().sum::<f64>() - 1.0).abs() < 1e-12);

    let mut t = PheromoneTable::new(vec![NodeId(1), NodeId(2), NodeId(3)]);
    t.ensure_column(NodeId(7));
    let unchanged = t.clone();
    t.reinforce(NodeId(7), NodeId(2), 0.0).unwrap();
    check("pheromone zero reinforcement", t == unchanged);

    Outcome::new(failures.is_empty(), if failures.is_empty() { "all checks agree".into() } else { format!("mismatch: {}", failures.join(", ")) })
}

// ---- normalization ----------------------------------------------------

fn normalization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut t = PheromoneTable::new((1..=4).map(NodeId).collect());
    let mut worst = 0.0f64;
    for _ in 0..NORM_OPS {
        let dst = NodeId(rng.gen_range(100..104));
        let n = NodeId(rng.gen_range(1..=8));
        match rng.gen_range(0..6) {
            0..=2 => {
                t.ensure_column(dst);
                let _ = t.reinforce(dst, n, rng.gen_range(0.0..1.0));
            }
            3 => t.add_neighbor(n),
            4 => t.remove_neighbor(n),
            _ => {
                t.ensure_column(dst);
                t.apply_floor(dst, rng.gen_range(0.0..0.3));
            }
        }
        if t.neighbors().is_empty() {
            continue;
        }
        let dsts: Vec<NodeId> = t.destinations().collect();
        for d in dsts {
            let s = t.column_sum(d).unwrap_or(1.0);
            worst = worst.max((s - 1.0).abs());
        }
    }
    Outcome::new(worst <= NORM_TOL, format!("worst column error {worst:.2e} over {NORM_OPS} ops (limit {NORM_TOL:.0e})"))
}

// ---- transition law ---------------------------------------------------

fn transition_law() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a3_u64);
    let mut worst_z = 0.0f64;
    for &p0 in &LAW_P0S {
        let k = 5;
        let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let entries: Vec<(NodeId, f64)> = raw.iter().enumerate().map(|(i, p)| (NodeId(i as u32), p / total)).collect();
        let argmax = entries.iter().max_by(|a, b| a.1.total_cmp(&b.1)).unwrap().0;
        let mut counts = vec![0usize; k];
        for _ in 0..LAW_DRAWS {
            let u: f64 = rng.gen();
            let n = select_next_hop(&entries, |_| false, p0, u).unwrap();
            counts[n.index()] += 1;
        }
        for (i, &(n, p)) in entries.iter().enumerate() {
            let expect = p0 * f64::from(u8::from(n == argmax)) + (1.0 - p0) * p;
            let mean = LAW_DRAWS as f64 * expect;
            let sd = (LAW_DRAWS as f64 * expect * (1.0 - expect)).sqrt();
            let dev = (counts[i] as f64 - mean).abs();
            let z = if sd == 0.0 {
                if dev == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                dev / sd
            };
            worst_z = worst_z.max(z);
        }
    }
    Outcome::new(worst_z <= LAW_SIGMAS, format!("largest deviation {worst_z:.2} sigma (limit {LAW_SIGMAS})"))
}

// ---- illustrative example --------------------------------------------

/// The example network: S reaches D over S-A-F-D or S-G-C-F-D. Queue
/// lengths sit next to each node; A is backed up and F's neighbourhood
/// holds E's backlog of five.
struct Example {
    names: &'static [&'static str],
    queues: &'static [u32],
    links: &'static [(&'static str, &'static str, Channel)],
}

const EXAMPLE: Example = Example {
    names: &["S", "A", "G", "C", "F", "D", "E"],
    queues: &[0, 4, 0, 1, 1, 0, 5],
    links: &[("S", "A", 2), ("A", "F", 2), ("F", "D", 4), ("S", "G", 3), ("G", "C", 1), ("C", "F", 3), ("F", "E", 5)],
};

impl Example {
    fn id(&self, name: &str) -> NodeId {
        NodeId(self.names.iter().position(|n| *n == name).unwrap() as u32)
    }

    fn neighbors(&self, n: NodeId) -> Vec<(NodeId, Channel)> {
        let mut out = Vec::new();
        for &(a, b, c) in self.links {
            let (a, b) = (self.id(a), self.id(b));
            if a == n {
                out.push((b, c));
            } else if b == n {
                out.push((a, c));
            }
        }
        out.sort();
        out
    }

    /// Each node's state after one round of hellos from every neighbour.
    fn states(&self, e_tx: f64) -> Vec<NodeState> {
        let report = |n: NodeId| -> Vec<(Channel, u32)> {
            let mut chans: Vec<Channel> = self.neighbors(n).iter().map(|x| x.1).collect();
            chans.sort();
            chans.dedup();
            chans.into_iter().map(|c| (c, self.queues[n.index()])).collect()
        };
        (0..self.names.len() as u32)
            .map(NodeId)
            .map(|n| {
                let nbrs = self.neighbors(n);
                let mut st = NodeState::new(n, nbrs.iter().map(|x| x.0).collect(), 10);
                for &(m, ch) in &nbrs {
                    let hello = HelloAnt {
                        from: m,
                        queues: report(m),
                        neighbors: self.neighbors(m).iter().map(|&(k, _)| (k, report(k))).collect(),
                    };
                    st.absorb_hello(m, ch, &hello, e_tx, self.queues[n.index()], SimTime(0));
                }
                st
            })
            .collect()
    }

    fn ant(&self, path: &[&str]) -> SmartAnt {
        let ids: Vec<NodeId> = path.iter().map(|p| self.id(p)).collect();
        let mut ant = SmartAnt::forward(ids[0], *ids.last().unwrap());
        for w in ids.windows(2) {
            let ch = self.neighbors(w[0]).into_iter().find(|x| x.0 == w[1]).unwrap().1;
            ant.hops.push(Hop { node: w[0], channel: ch });
            ant.visited.insert(w[1]);
        }
        ant.into_backward()
    }
}

/// Walk a backward ant home, charging every hop; returns the trip recorded at the source.
fn walk_back(ex: &Example, states: &mut [NodeState], mut ant: SmartAnt, e_tx: f64) -> f64 {
    loop {
        let i = ant.cursor;
        let node = ant.hops[i].node;
        let ctx = HopContext {
            now: SimTime(0),
            e_tx_us: e_tx,
            own_queue: ex.queues[node.index()],
            pkt_bits: 4096,
            link_bps: 2_000_000,
            max_age_us: 3_000_000,
        };
        let step = states[node.index()].absorb_bsa(&ant, i, &ctx, 1.0);
        ant.trip_us = step.trip_us;
        if i == 0 {
            return step.trip_us;
        }
        ant.cursor -= 1;
    }
}

fn illustrative_example() -> Outcome {
    let ex = &EXAMPLE;
    let e_tx = 3088.0;
    let (s, a, g, d) = (ex.id("S"), ex.id("A"), ex.id("G"), ex.id("D"));
    let mut details = Vec::new();
    let mut pass = true;
    // both arrival orders of the two backward ants
    for order in [[0usize, 1], [1, 0]] {
        let mut states = ex.states(e_tx);
        let paths = [ex.ant(&["S", "A", "F", "D"]), ex.ant(&["S", "G", "C", "F", "D"])];
        let mut trips = [0.0; 2];
        for &k in &order {
            trips[k] = walk_back(ex, &mut states, paths[k].clone(), e_tx);
        }
        let dt = &states[s.index()].delay;
        let via_a = dt.last_trip_via(d, a).unwrap();
        let via_g = dt.last_trip_via(d, g).unwrap();
        let ph = &states[s.index()].pheromone;
        let (pa, pg) = (ph.probability(d, a).unwrap(), ph.probability(d, g).unwrap());
        let ok = via_g < via_a && pg > pa;
        pass &= ok;
        details.push(format!("trip via G {via_g:.0} us vs via A {via_a:.0} us, P(G)={pg:.3} P(A)={pa:.3}"));
    }
    Outcome::new(pass, details.join("; "))
}

// ---- determinism --------------------------------------------------------

#[derive(Clone, Default)]
struct SharedBuf(Arc<Mutex<Vec<u8>>>);

impl Write for SharedBuf {
    fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
        self.0.lock().unwrap().extend_from_slice(buf);
        Ok(buf.len())
    }

    fn flush(&mut self) -> std::io::Result<()> {
        Ok(())
    }
}

fn traced(s: &Scenario, seed: u64) -> (Vec<u8>, String) {
    let buf = SharedBuf::default();
    let out = run_once(s, seed, Some(Box::new(buf.clone()))).expect("run");
    let row = RunRow::from_ledger(s, seed, &out.ledger);
    let trace = buf.0.lock().unwrap().clone();
    (trace, csv_string(&[row]))
}

fn determinism() -> Outcome {
    let mut bad = Vec::new();
    let mut bytes = 0usize;
    for (name, _) in PRESETS {
        let p = preset(name).unwrap();
        let mut s = p.at_point(&p.sweep_points()[0]).unwrap();
        s.run.horizon_us = s.run.horizon_us.min(DETERMINISM_HORIZON_US);
        s.run.warmup_us = s.run.warmup_us.min(s.run.horizon_us / 2);
        let (t1, c1) = traced(&s, DETERMINISM_SEED);
        let (t2, c2) = traced(&s, DETERMINISM_SEED);
        bytes += t1.len();
        if t1.is_empty() || t1 != t2 || c1 != c2 {
            bad.push(*name);
        }
    }
    Outcome::new(
        bad.is_empty(),
        if bad.is_empty() { format!("{} presets, {bytes} trace bytes identical", PRESETS.len()) } else { format!("diverged: {}", bad.join(", ")) },
    )
}

// ---- parameter studies --------------------------------------------------

/// Rows keyed by seed, in sweep-point order within a seed.
fn by_seed(rows: Vec<RunRow>) -> BTreeMap<u64, Vec<RunRow>> {
    let mut m: BTreeMap<u64, Vec<RunRow>> = BTreeMap::new();
    for r in rows {
        m.entry(r.seed).or_default().push(r);
    }
    m
}

fn learning_vs_ant_rate() -> Outcome {
    let mut s = preset("fig4-learning").unwrap();
    s.sweep = vec![SweepAxis { key: "ant_rate".into(), values: LEARNING_ANT_RATES.iter().map(|v| v.to_string()).collect() }];
    let rows = run_experiment(&s, &seeds()).expect("fig4-learning");
    let mut good = 0;
    let mut shown = Vec::new();
    for (seed, rs) in by_seed(rows) {
        // a run that never settles counts as infinitely slow
        let lt: Vec<f64> = rs.iter().map(|r| r.learning_time_us.map_or(f64::INFINITY, |x| x as f64 / 1e6)).collect();
        if lt.windows(2).all(|w| w[1] <= w[0]) {
            good += 1;
        }
        let fmt: Vec<String> = lt.iter().map(|x| if x.is_finite() { format!("{x:.1}") } else { "-".into() }).collect();
        shown.push(format!("s{seed}:{}", fmt.join("/")));
    }
    Outcome::new(good >= LEARNING_MIN_SEEDS, format!("{good}/{} seeds nonincreasing (need {LEARNING_MIN_SEEDS}); learning s at 10/20/40: {}", SEEDS.count(), shown.join(" ")))
}

fn nrl_vs_ant_rate() -> Outcome {
    let mut s = preset("fig4c-nrl").unwrap();
    s.sweep = vec![
        SweepAxis { key: "flows".into(), values: vec!["1".into(), "4".into()] },
        SweepAxis { key: "ant_rate".into(), values: NRL_ANT_RATES.iter().map(|v| v.to_string()).collect() },
    ];
    let rows = run_experiment(&s, &seeds()).expect("fig4c-nrl");
    let k = NRL_ANT_RATES.len();
    let (mut inc_light, mut inc_heavy, mut heavier) = (0, 0, 0);
    let mut means = vec![0.0; 2 * k];
    let n = SEEDS.count() as f64;
    for rs in by_seed(rows).values() {
        let nrl: Vec<f64> = rs.iter().map(|r| r.nrl).collect();
        for (m, x) in means.iter_mut().zip(&nrl) {
            *m += x / n;
        }
        let (light, heavy) = nrl.split_at(k);
        inc_light += usize::from(light.windows(2).all(|w| w[1] > w[0]));
        inc_heavy += usize::from(heavy.windows(2).all(|w| w[1] > w[0]));
        heavier += usize::from(heavy[k - 1] > light[k - 1]);
    }
    let pass = inc_light >= NRL_MIN_SEEDS && inc_heavy >= NRL_MIN_SEEDS && heavier >= NRL_MIN_SEEDS;
    Outcome::new(
        pass,
        format!(
            "increasing light {inc_light}/10, overloaded {inc_heavy}/10, overloaded>light at 40/s {heavier}/10 (need {NRL_MIN_SEEDS} each); mean NRL light {:.1}/{:.1}/{:.1}, overloaded {:.1}/{:.1}/{:.1}",
            means[0], means[1], means[2], means[3], means[4], means[5]
        ),
    )
}

fn throughput_vs_p0() -> Outcome {
    let mut s = preset("fig4a-p0sweep").unwrap();
    s.apply("rate", P0_RATE_PPS).unwrap();
    s.sweep = vec![SweepAxis { key: "p0".into(), values: vec![P0_LOW_P0.into(), P0_HIGH_P0.into()] }];
    let rows = run_experiment(&s, &seeds()).expect("fig4a-p0sweep");
    let (mut lo, mut hi) = (Vec::new(), Vec::new());
    for rs in by_seed(rows).values() {
        lo.push(rs[0].throughput_bps);
        hi.push(rs[1].throughput_bps);
    }
    let (lower, pass) = stats::paired_greater(&hi, &lo);
    let ((ml, cl), (mh, ch)) = (stats::mean_ci95(&lo), stats::mean_ci95(&hi));
    Outcome::new(
        pass,
        format!("throughput p0=0.8 {mh:.0}±{ch:.0} vs p0=0.2 {ml:.0}±{cl:.0} bps at {P0_RATE_PPS} pps; 95% lower bound of paired gain {lower:.0} bps"),
    )
}

// ---- comparative ------------------------------------------------------

fn saturation() -> Outcome {
    let mut s = preset("fig5-saturation").unwrap();
    let top = s.sweep.iter().find(|a| a.key == "rate").and_then(|a| a.values.last().cloned()).expect("rate axis");
    s.sweep.retain(|a| a.key != "rate");
    s.apply("rate", &top).unwrap();
    let runs = run_ledgers(&s, &seeds()).expect("fig5-saturation");
    let mut thr: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    let mut loss: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for (job, l) in &runs {
        let r = job.scenario.routing.label().to_string();
        thr.entry(r.clone()).or_default().push(metrics::throughput(l));
        loss.entry(r).or_default().push(metrics::loss_ratio(l));
    }
    let (ta, tb) = (stats::mean_ci95(&thr["antmesh"]), stats::mean_ci95(&thr["hopant"]));
    let (la, lb) = (stats::mean(&loss["antmesh"]), stats::mean(&loss["hopant"]));
    Outcome::new(
        ta.0 >= tb.0 && la < lb,
        format!("at {top} pps: throughput antmesh {:.0}±{:.0} vs hopant {:.0}±{:.0} bps; loss ratio {la:.3} vs {lb:.3}", ta.0, ta.1, tb.0, tb.1),
    )
}

/// S reaches D over A, where both hops share channel 1, or over B, whose
/// hops use channels 2 then 3. Hop counts and link rates are equal.
fn two_path_scenario() -> Scenario {
    let node = |x: f64, y: f64, channels: Vec<Channel>| NodeSpec { position: Position::new(x, y), channels, gateway: false };
    let topology = TopologySpec {
        nodes: vec![
            node(0.0, 200.0, vec![1, 2]),   // S
            node(200.0, 300.0, vec![1]),    // A
            node(200.0, 100.0, vec![2, 3]), // B
            node(400.0, 200.0, vec![1, 3]), // D
        ],
        ..TopologySpec::default()
    };
    let mut s = Scenario { name: "two-path".into(), topology, ..Scenario::default() };
    s.params.p0 = DIVERSITY_P0;
    s.flows = vec![FlowSpec { id: 1, src: NodeId(0), dst: FlowDst::Node(NodeId(3)), rate_pps: DIVERSITY_RATE_PPS, start_us: 0, stop_us: None, pkt_bytes: 512 }];
    s
}

fn channel_diversity() -> Outcome {
    let s = two_path_scenario();
    let (mut diverse, mut total) = (0usize, 0usize);
    let mut per_seed = Vec::new();
    for seed in seeds() {
        let mut setup = s.setup().unwrap();
        setup.log_transmissions = true;
        let out = Simulation::new(setup, seed, None).unwrap().run().unwrap();
        let log = out.tx_log.unwrap();
        let from_s = log.iter().filter(|r| r.kind == PacketKind::Data && r.node == NodeId(0) && r.start.0 >= DIVERSITY_STEADY_FROM_US);
        let (mut d, mut t) = (0, 0);
        for r in from_s {
            t += 1;
            d += usize::from(r.rx == Some(NodeId(2)));
        }
        per_seed.push(format!("{:.2}", d as f64 / t.max(1) as f64));
        diverse += d;
        total += t;
    }
    let share = diverse as f64 / total.max(1) as f64;
    Outcome::new(
        share >= DIVERSITY_MIN_SHARE,
        format!("{:.1}% of {total} steady-state packets on the diverse path (need {:.0}%); per seed {}", 100.0 * share, 100.0 * DIVERSITY_MIN_SHARE, per_seed.join(" ")),
    )
}

fn mobility() -> Outcome {
    let mut s = preset("fig6-speed-sweep").unwrap();
    s.sweep = vec![
        SweepAxis { key: "speed".into(), values: MOBILITY_SPEEDS.iter().map(|v| v.to_string()).collect() },
        SweepAxis { key: "routing".into(), values: vec!["antmesh".into(), "static".into()] },
    ];
    let rows = run_experiment(&s, &seeds()).expect("fig6-speed-sweep");
    let mut pdf: BTreeMap<(String, String), Vec<f64>> = BTreeMap::new();
    let points = s.sweep_points();
    for (i, r) in rows.iter().enumerate() {
        let p = &points[i % points.len()];
        pdf.entry((p[0].1.clone(), r.routing.clone())).or_default().push(r.pdf);
    }
    let mean = |speed: &str, routing: &str| stats::mean(&pdf[&(speed.to_string(), routing.to_string())]);
    let ant: Vec<f64> = MOBILITY_SPEEDS.iter().map(|v| mean(v, "antmesh")).collect();
    let st: Vec<f64> = MOBILITY_SPEEDS.iter().map(|v| mean(v, "static")).collect();
    let nonincreasing = ant.windows(2).all(|w| w[1] <= w[0]);
    let beats = mean(MOBILITY_FAST, "antmesh") > mean(MOBILITY_FAST, "static");
    Outcome::new(
        nonincreasing && beats,
        format!(
            "mean PDF antmesh {:.5}/{:.5}/{:.5}, static {:.5}/{:.5}/{:.5} at 0/10/30 m/s",
            ant[0], ant[1], ant[2], st[0], st[1], st[2]
        ),
    )
}

// ---- driver -------------------------------------------------------------

type Criterion = (&'static str, fn() -> Outcome);

const CRITERIA: &[Criterion] = &[
    ("equations", equation_suite),
    ("normalization", normalization),
    ("transition-law", transition_law),
    ("illustrative-example", illustrative_example),
    ("determinism", determinism),
    ("learning-time", learning_vs_ant_rate),
    ("routing-load", nrl_vs_ant_rate),
    ("p0-throughput", throughput_vs_p0),
    ("saturation", saturation),
    ("channel-diversity", channel_diversity),
    ("mobility", mobility),
];

fn main() -> ExitCode {
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    let mut ran = 0;
    let start = Instant::now();
    for (name, f) in CRITERIA {
        if !filters.is_empty() && !filters.iter().any(|x| name.contains(x.as_str())) {
            continue;
        }
        let t = Instant::now();
        let o = f();
        ran += 1;
        if !o.pass {
            failed += 1;
        }
        println!("{} {name} ({}): {}", if o.pass { "PASS" } else { "FAIL" }, secs(t.elapsed()), o.detail);
    }
    println!("acceptance: {}/{ran} passed in {}", ran - failed, secs(start.elapsed()));
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn secs(d: Duration) -> String {
    format!("{:.1}s", d.as_secs_f64())
}
