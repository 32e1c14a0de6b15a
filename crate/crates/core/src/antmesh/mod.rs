//! The AntMesh routing agent and its building blocks.

pub mod agent;
pub mod ant;
pub mod estimation;
pub mod pheromone;
pub mod tables;
pub mod transition;

pub use agent::{AntMeshRouter, BsaStep, HopContext, NodeState};
pub use ant::{AntKind, HelloAnt, Hop, SmartAnt};
pub use pheromone::PheromoneTable;
pub use tables::{DelayTable, LinkEstimate, LinkEstimationTable};

/// Which nodes launch forward ants.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AntSources {
    /// Every node; nodes without a flow target a random gateway.
    All,
    /// Only nodes currently sourcing a flow.
    Flows,
}

impl AntSources {
    pub fn label(self) -> &'static str {
        match self {
            AntSources::All => "all",
            AntSources::Flows => "flows",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "all" => Some(AntSources::All),
            "flows" => Some(AntSources::Flows),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AntMeshParams {
    pub p0: f64,
    /// Forward ants per source node per second.
    pub ant_rate_hz: f64,
    pub hello_interval_s: f64,
    pub window_w: usize,
    pub delta_p_cap: f64,
    /// Least probability any neighbour keeps after an update, so routes the
    /// tables have moved away from are still sampled now and then.
    pub pheromone_floor: f64,
    pub ant_sources: AntSources,
    /// Link estimates older than this many hello intervals are stale.
    pub hello_expiry: u32,
}

impl Default for AntMeshParams {
    fn default() -> Self {
        AntMeshParams {
            p0: 0.8,
            ant_rate_hz: 40.0,
            hello_interval_s: 1.0,
            window_w: 10,
            delta_p_cap: 1.0,
            pheromone_floor: 0.02,
            ant_sources: AntSources::All,
            hello_expiry: 3,
        }
    }
}

impl AntMeshParams {
    pub fn validate(&self) -> Result<(), String> {
        if !(0.0..=1.0).contains(&self.p0) {
            return Err(format!("p0 must lie in [0, 1], got {}", self.p0));
        }
        if !(self.ant_rate_hz > 0.0 && self.ant_rate_hz.is_finite()) {
            return Err(format!("ant_rate must be positive, got {}", self.ant_rate_hz));
        }
        if !(self.hello_interval_s > 0.0 && self.hello_interval_s.is_finite()) {
            return Err(format!("hello_interval must be positive, got {}", self.hello_interval_s));
        }
        if self.window_w == 0 {
            return Err("window must be at least 1".into());
        }
        if !(self.delta_p_cap > 0.0) {
            return Err(format!("delta_p_cap must be positive, got {}", self.delta_p_cap));
        }
        if !(0.0..0.5).contains(&self.pheromone_floor) {
            return Err(format!("pheromone_floor must lie in [0, 0.5), got {}", self.pheromone_floor));
        }
        if self.hello_expiry == 0 {
            return Err("hello_expiry must be at least 1".into());
        }
        Ok(())
    }

    pub fn ant_period_us(&self) -> u64 {
        ((1e6 / self.ant_rate_hz).round() as u64).max(1)
    }

    pub fn hello_period_us(&self) -> u64 {
        ((self.hello_interval_s * 1e6).round() as u64).max(1)
    }

    pub fn expiry_us(&self) -> u64 {
        self.hello_period_us() * self.hello_expiry as u64
    }
}
