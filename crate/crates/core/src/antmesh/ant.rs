use std::collections::BTreeSet;

use crate::antmesh::tables::QueueReport;
use crate::topology::{Channel, NodeId};

/// One step of a recorded path: the node the ant left and the channel of the
/// link it left on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Hop {
    pub node: NodeId,
    pub channel: Channel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AntKind {
    Forward,
    Backward,
}

/// Forward/backward ant state. A forward ant appends to `hops`; its backward
/// twin walks the same list in reverse, with `cursor` indexing the hop whose
/// node it is travelling to.
#[derive(Clone, Debug, PartialEq)]
pub struct SmartAnt {
    pub kind: AntKind,
    pub src: NodeId,
    pub dst: NodeId,
    pub hops: Vec<Hop>,
    pub visited: BTreeSet<NodeId>,
    /// Accumulated trip time from the current node to `dst` (backward only).
    pub trip_us: f64,
    pub cursor: usize,
}

impl SmartAnt {
    pub fn forward(src: NodeId, dst: NodeId) -> Self {
        SmartAnt {
            kind: AntKind::Forward,
            src,
            dst,
            hops: Vec::new(),
            visited: BTreeSet::from([src]),
            trip_us: 0.0,
            cursor: 0,
        }
    }

    pub fn is_forward(&self) -> bool {
        self.kind == AntKind::Forward
    }

    /// Turn an arrived forward ant into the backward ant retracing its path.
    pub fn into_backward(self) -> Self {
        let cursor = self.hops.len().saturating_sub(1);
        SmartAnt { kind: AntKind::Backward, trip_us: 0.0, cursor, ..self }
    }

    /// Nodes in the order the backward ant visits them, ending at the source.
    pub fn reverse_path(&self) -> Vec<NodeId> {
        self.hops.iter().rev().map(|h| h.node).collect()
    }

    /// Node downstream of `hops[i]` (toward the destination).
    pub fn downstream_of(&self, i: usize) -> NodeId {
        self.hops.get(i + 1).map_or(self.dst, |h| h.node)
    }
}

/// Periodic one-hop advertisement of the sender's per-channel queue lengths
/// and of the queue reports it has heard from its own neighbours.
#[derive(Clone, Debug, PartialEq)]
pub struct HelloAnt {
    pub from: NodeId,
    pub queues: QueueReport,
    pub neighbors: Vec<(NodeId, QueueReport)>,
}
