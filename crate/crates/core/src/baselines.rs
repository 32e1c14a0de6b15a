//! Comparison routers on the same MAC/topology stack: static min-hop and a
//! hop-count-only ant router ("min-hop-ant").

use crate::antmesh::agent::PathMetric;
use crate::antmesh::{AntMeshParams, AntMeshRouter, AntSources};
use crate::error::{NoRoute, SimError};
use crate::mac::Packet;
use crate::network::{Event, Net, Router, TableRow};
use crate::sim::SimTime;
use crate::topology::{Channel, LinkDelta, NodeId, Topology};

/// Next hop per (node, destination) on a minimum-hop path; among equal
/// candidates the lowest id wins.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StaticRouteTable {
    next: Vec<Vec<Option<NodeId>>>,
}

impl StaticRouteTable {
    pub fn compute(topo: &Topology) -> Self {
        let n = topo.len();
        let mut next = vec![vec![None; n]; n];
        for dst in topo.nodes() {
            let dist = topo.hop_distances(dst);
            for node in topo.nodes() {
                if node == dst {
                    continue;
                }
                let Some(d) = dist[node.index()] else { continue };
                // neighbour ids are ascending, so the first hit is the lowest id
                next[node.index()][dst.index()] =
                    topo.neighbor_ids(node).into_iter().find(|m| dist[m.index()] == Some(d - 1));
            }
        }
        StaticRouteTable { next }
    }

    pub fn next_hop(&self, node: NodeId, dst: NodeId) -> Result<NodeId, NoRoute> {
        self.next[node.index()][dst.index()].ok_or(NoRoute)
    }
}

/// Min-hop routing. Topology changes are picked up at the next refresh tick
/// (one hello interval), the delay a hello-driven protocol would have.
pub struct StaticRouter {
    table: StaticRouteTable,
    refresh_us: u64,
    dirty: bool,
}

impl StaticRouter {
    pub fn new(hello_interval_s: f64, topo: &Topology) -> Self {
        StaticRouter {
            table: StaticRouteTable::compute(topo),
            refresh_us: ((hello_interval_s * 1e6).round() as u64).max(1),
            dirty: false,
        }
    }

    pub fn table(&self) -> &StaticRouteTable {
        &self.table
    }
}

impl Router for StaticRouter {
    fn start(&mut self, net: &mut Net) -> Result<(), SimError> {
        if net.mobility.config().enabled() {
            net.events.schedule(SimTime(self.refresh_us), Event::HelloTimer { node: NodeId(0) })?;
        }
        Ok(())
    }

    fn route_data(&mut self, _net: &mut Net, node: NodeId, packet: &Packet, _from: Option<NodeId>) -> Result<NodeId, NoRoute> {
        self.table.next_hop(node, packet.dst)
    }

    fn on_control(&mut self, _net: &mut Net, _node: NodeId, _from: NodeId, _channel: Channel, _packet: Packet) -> Result<(), SimError> {
        Ok(())
    }

    fn on_hello_timer(&mut self, net: &mut Net, _node: NodeId) -> Result<(), SimError> {
        if self.dirty {
            self.table = StaticRouteTable::compute(&net.topo);
            self.dirty = false;
        }
        net.events.schedule_in(self.refresh_us, Event::HelloTimer { node: NodeId(0) })?;
        Ok(())
    }

    fn on_topology_change(&mut self, _net: &mut Net, _delta: &LinkDelta) -> Result<(), SimError> {
        self.dirty = true;
        Ok(())
    }

    fn dump(&self, net: &Net) -> Vec<TableRow> {
        let mut rows = Vec::new();
        for node in net.topo.nodes() {
            for dst in net.topo.nodes() {
                if let Ok(via) = self.table.next_hop(node, dst) {
                    rows.push(TableRow { node, dst, via, probability: 1.0, mean_trip_us: None, lq_us: None });
                }
            }
        }
        rows
    }
}

/// Ant router that prices paths by hop count alone and forwards data on the
/// best entry. Ants are launched only by flow sources.
pub struct HopAntRouter(AntMeshRouter);

impl HopAntRouter {
    pub fn new(mut params: AntMeshParams, topo: &Topology) -> Self {
        params.ant_sources = AntSources::Flows;
        HopAntRouter(AntMeshRouter::with_metric(params, topo, PathMetric::HopCount, 1.0))
    }

    pub fn inner(&self) -> &AntMeshRouter {
        &self.0
    }
}

impl Router for HopAntRouter {
    fn start(&mut self, net: &mut Net) -> Result<(), SimError> {
        self.0.start(net)
    }

    fn route_data(&mut self, net: &mut Net, node: NodeId, packet: &Packet, from: Option<NodeId>) -> Result<NodeId, NoRoute> {
        self.0.route_data(net, node, packet, from)
    }

    fn on_control(&mut self, net: &mut Net, node: NodeId, from: NodeId, channel: Channel, packet: Packet) -> Result<(), SimError> {
        self.0.on_control(net, node, from, channel, packet)
    }

    fn on_ant_timer(&mut self, net: &mut Net, node: NodeId) -> Result<(), SimError> {
        self.0.on_ant_timer(net, node)
    }

    fn on_topology_change(&mut self, net: &mut Net, delta: &LinkDelta) -> Result<(), SimError> {
        self.0.on_topology_change(net, delta)
    }

    fn dump(&self, net: &Net) -> Vec<TableRow> {
        self.0.dump(net)
    }
}
