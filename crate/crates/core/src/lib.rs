//! Deterministic discrete-event simulator of multi-radio wireless mesh
//! networks with ant-colony routing.

pub mod antmesh;
pub mod baselines;
pub mod error;
pub mod experiment;
pub mod mac;
pub mod metrics;
pub mod network;
pub mod scenario;
pub mod sim;
pub mod topology;
pub mod traffic;

pub use error::{ConfigError, NoRoute, RunError, SimError};
pub use network::{RoutingAlgorithm, RunOutput, SimSetup, Simulation};
pub use sim::SimTime;
pub use topology::NodeId;
