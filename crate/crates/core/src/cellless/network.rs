use rand::Rng;
use serde::Serialize;

use super::config::{dbm_to_watts, ApLayout, NetworkConfig, UserLayout};
use crate::error::Result;
use crate::sampling;

/// Geometry, large-scale gains and user-centric clusters of a network.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Network {
    pub ap_positions: Vec<[f64; 2]>,
    pub user_positions: Vec<[f64; 2]>,
    /// `gains[l][k]`: channel gain from user `k` to AP `l` divided by the
    /// noise power (linear, per watt of transmit power).
    pub gains: Vec<Vec<f64>>,
    /// Serving APs of each user, in increasing index order.
    pub clusters: Vec<Vec<usize>>,
    pub antennas_per_ap: usize,
}

impl Network {
    pub fn ap_count(&self) -> usize {
        self.ap_positions.len()
    }

    pub fn user_count(&self) -> usize {
        self.user_positions.len()
    }

    /// `Σ_{l ∈ D_k} β_lk`.
    pub fn cluster_gain(&self, k: usize) -> f64 {
        self.clusters[k].iter().map(|&l| self.gains[l][k]).sum()
    }
}

fn grid_positions(count: usize, side: f64) -> Vec<[f64; 2]> {
    let per_row = (count as f64).sqrt().round() as usize;
    let pitch = side / per_row as f64;
    let mut out = Vec::with_capacity(count);
    for row in 0..per_row {
        for col in 0..per_row {
            out.push([pitch * (col as f64 + 0.5), pitch * (row as f64 + 0.5)]);
        }
    }
    out
}

/// Places APs and users, computes the noise-normalized gains and assigns
/// each user the `cluster_size` APs with the largest gain.
pub fn generate_network(cfg: &NetworkConfig) -> Result<Network> {
    cfg.validate()?;
    let ap_positions = match &cfg.ap_layout {
        ApLayout::RegularGrid => grid_positions(cfg.ap_count, cfg.area_side),
        ApLayout::Explicit(p) => p.clone(),
    };
    let user_positions = match &cfg.user_layout {
        UserLayout::UniformRandom(seed) => {
            let mut rng = sampling::rng(*seed);
            (0..cfg.user_count)
                .map(|_| [rng.random::<f64>() * cfg.area_side, rng.random::<f64>() * cfg.area_side])
                .collect()
        }
        UserLayout::Explicit(p) => p.clone(),
    };

    let noise_watts = dbm_to_watts(cfg.noise_power_dbm);
    let gains: Vec<Vec<f64>> = ap_positions
        .iter()
        .map(|ap| {
            user_positions
                .iter()
                .map(|ue| {
                    let d = (ap[0] - ue[0]).hypot(ap[1] - ue[1]);
                    10f64.powf(-cfg.pathloss.loss_db(d) / 10.0) / noise_watts
                })
                .collect()
        })
        .collect();

    let clusters = (0..cfg.user_count)
        .map(|k| {
            let mut order: Vec<usize> = (0..cfg.ap_count).collect();
            order.sort_by(|&a, &b| gains[b][k].total_cmp(&gains[a][k]).then(a.cmp(&b)));
            let mut chosen = order[..cfg.cluster_size].to_vec();
            chosen.sort_unstable();
            chosen
        })
        .collect();

    Ok(Network {
        ap_positions,
        user_positions,
        gains,
        clusters,
        antennas_per_ap: cfg.antennas_per_ap,
    })
}
