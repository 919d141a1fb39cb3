//! Cell-less (cell-free) uplink with user-centric AP clusters.
//!
//! APs on a square area each serve the users for which they are among the
//! strongest `cluster_size` APs. Per-AP maximum-ratio combining on local CSI
//! is followed by centrally optimized LSFD weights, and the resulting
//! use-and-then-forget SINR is a utility of the form `p_k / f_k(p)` with a
//! standard interference function `f_k`. Any power vector with `‖p‖ = p̄`
//! therefore yields rates on the boundary of the achievable rate region.

mod config;
mod model;
mod moments;
mod network;
mod policy;

pub use config::{dbm_to_watts, ApLayout, ExperimentConfig, NetworkConfig, Pathloss, UserLayout};
pub use model::{eval_fk, eval_rates, lsfd_quotient, optimal_lsfd, CellLessModel};
pub use moments::{estimate_moments, ChannelDraw, MomentAccumulator, UserMoments};
pub use network::{generate_network, Network};
pub use policy::{apply_policy, run_policies, PolicyOutcome, PowerPolicy};

use crate::error::Result;

/// Generates the network and estimates its moments in one step.
pub fn build_model(cfg: &NetworkConfig) -> Result<(Network, CellLessModel)> {
    let network = generate_network(cfg)?;
    let moments = estimate_moments(&network, cfg)?;
    Ok((network, CellLessModel::new(moments)?))
}
