use std::collections::BTreeMap;

use crate::topology::NodeId;

/// Per-node routing probabilities: for each destination, a column holding
/// one probability per current neighbour. Every column sums to one.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PheromoneTable {
    neighbors: Vec<NodeId>,
    columns: BTreeMap<NodeId, Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("node {0} is not a current neighbour")]
pub struct NotNeighbor(pub NodeId);

impl PheromoneTable {
    pub fn new(mut neighbors: Vec<NodeId>) -> Self {
        neighbors.sort_unstable();
        neighbors.dedup();
        PheromoneTable { neighbors, columns: BTreeMap::new() }
    }

    pub fn neighbors(&self) -> &[NodeId] {
        &self.neighbors
    }

    pub fn destinations(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.columns.keys().copied()
    }

    pub fn has_column(&self, dst: NodeId) -> bool {
        self.columns.contains_key(&dst)
    }

    /// Create the column for `dst` with a uniform prior if it does not exist.
    pub fn ensure_column(&mut self, dst: NodeId) {
        if self.neighbors.is_empty() {
            return;
        }
        let n = self.neighbors.len();
        self.columns.entry(dst).or_insert_with(|| vec![1.0 / n as f64; n]);
    }

    /// `(neighbour, probability)` pairs for `dst`, ascending by neighbour.
    pub fn entries(&self, dst: NodeId) -> Vec<(NodeId, f64)> {
        match self.columns.get(&dst) {
            Some(col) => self.neighbors.iter().copied().zip(col.iter().copied()).collect(),
            None => Vec::new(),
        }
    }

    pub fn probability(&self, dst: NodeId, via: NodeId) -> Option<f64> {
        let i = self.neighbors.binary_search(&via).ok()?;
        self.columns.get(&dst).map(|c| c[i])
    }

    pub fn column_sum(&self, dst: NodeId) -> Option<f64> {
        self.columns.get(&dst).map(|c| c.iter().sum())
    }

    /// Reinforce `via` toward `dst` by `dp` and downgrade every other
    /// neighbour so the column keeps summing to one:
    /// `P_via = (P_via + dp) / (1 + dp)`, `P_j = P_j / (1 + dp)`.
    pub fn reinforce(&mut self, dst: NodeId, via: NodeId, dp: f64) -> Result<(), NotNeighbor> {
        let i = self.neighbors.binary_search(&via).map_err(|_| NotNeighbor(via))?;
        self.ensure_column(dst);
        let dp = dp.max(0.0);
        let col = self.columns.get_mut(&dst).expect("column exists after ensure_column");
        let scale = 1.0 + dp;
        for (j, p) in col.iter_mut().enumerate() {
            *p = if j == i { (*p + dp) / scale } else { *p / scale };
        }
        Ok(())
    }

    /// Lift every entry of the `dst` column to at least `floor` (capped at
    /// `1/(2|N|)`), taking the difference from the entries above it in
    /// proportion to their excess. The column still sums to one.
    pub fn apply_floor(&mut self, dst: NodeId, floor: f64) {
        let Some(col) = self.columns.get_mut(&dst) else { return };
        let f = floor.min(1.0 / (2.0 * col.len() as f64));
        if !(f > 0.0) {
            return;
        }
        let deficit: f64 = col.iter().filter(|&&p| p < f).map(|p| f - p).sum();
        if deficit == 0.0 {
            return;
        }
        let excess: f64 = col.iter().filter(|&&p| p > f).map(|p| p - f).sum();
        for p in col.iter_mut() {
            *p = if *p < f { f } else { *p - deficit * (*p - f) / excess };
        }
    }

    /// Add a neighbour row at `1/(2|N|)` in every column, then renormalise.
    pub fn add_neighbor(&mut self, n: NodeId) {
        let Err(pos) = self.neighbors.binary_search(&n) else { return };
        self.neighbors.insert(pos, n);
        let eps = 1.0 / (2.0 * self.neighbors.len() as f64);
        for col in self.columns.values_mut() {
            col.insert(pos, eps);
            normalize(col);
        }
    }

    /// Drop a neighbour row and renormalise; columns vanish with the last neighbour.
    pub fn remove_neighbor(&mut self, n: NodeId) {
        let Ok(pos) = self.neighbors.binary_search(&n) else { return };
        self.neighbors.remove(pos);
        if self.neighbors.is_empty() {
            self.columns.clear();
            return;
        }
        for col in self.columns.values_mut() {
            col.remove(pos);
            normalize(col);
        }
    }

    /// Apply adds and removes so the row set equals `current`.
    pub fn sync_neighbors(&mut self, current: &[NodeId]) {
        let gone: Vec<NodeId> = self.neighbors.iter().copied().filter(|n| !current.contains(n)).collect();
        for n in gone {
            self.remove_neighbor(n);
        }
        for &n in current {
            self.add_neighbor(n);
        }
    }
}

fn normalize(col: &mut [f64]) {
    let sum: f64 = col.iter().sum();
    if sum > 0.0 && sum.is_finite() {
        col.iter_mut().for_each(|p| *p /= sum);
    } else {
        let u = 1.0 / col.len() as f64;
        col.iter_mut().for_each(|p| *p = u);
    }
}
