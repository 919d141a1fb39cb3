//! Monte-Carlo estimation of the channel statistics behind the cell-less SINR.
//!
//! Every AP `l` serving user `k` applies a local maximum-ratio combiner
//! `v_lk = ĥ_lk` and forwards the scalar `g_kj[l] = v_lkᴴ h_lj` for every
//! user `j`. A central unit then weights the forwarded scalars with
//! large-scale fading decoding (LSFD) coefficients `a`, so user `k`'s
//! effective channel from user `j` is `aᴴ g_kj`. The SINR only depends on
//!
//! * `b_k = E[g_kk]`,
//! * `G_kj = E[g_kj g_kjᴴ]` for every `j`,
//! * `S_k = diag(E[‖v_lk‖²])`,
//!
//! which are sampled here once, independently of the transmit powers.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::config::NetworkConfig;
use super::network::Network;
use crate::error::{Error, Result};
use crate::sampling;

/// Realizations per independently seeded block.
const BLOCK: usize = 1000;

/// Smallest `‖b_k‖` accepted.
const MIN_GAIN: f64 = 1e-12;

/// Channel statistics of one user and its serving cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct UserMoments {
    pub user: usize,
    pub serving: Vec<usize>,
    /// `b_k`
    pub mean_gain: DVector<Complex64>,
    /// `G_kj` for `j = 0..K`
    pub cross: Vec<DMatrix<Complex64>>,
    /// Diagonal of `S_k`.
    pub combiner_energy: DVector<f64>,
}

/// One realization of all AP-user channels, `N` antennas each.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelDraw {
    users: usize,
    antennas: usize,
    data: Vec<Complex64>,
}

impl ChannelDraw {
    pub fn zeros(aps: usize, users: usize, antennas: usize) -> Self {
        Self {
            users,
            antennas,
            data: vec![Complex64::new(0.0, 0.0); aps * users * antennas],
        }
    }

    fn offset(&self, ap: usize, user: usize) -> usize {
        (ap * self.users + user) * self.antennas
    }

    pub fn get(&self, ap: usize, user: usize) -> &[Complex64] {
        let o = self.offset(ap, user);
        &self.data[o..o + self.antennas]
    }

    pub fn get_mut(&mut self, ap: usize, user: usize) -> &mut [Complex64] {
        let o = self.offset(ap, user);
        &mut self.data[o..o + self.antennas]
    }
}

/// Running sums of the per-user statistics.
#[derive(Debug, Clone)]
pub struct MomentAccumulator {
    clusters: Vec<Vec<usize>>,
    draws: usize,
    gain_sum: Vec<DVector<Complex64>>,
    cross_sum: Vec<Vec<DMatrix<Complex64>>>,
    energy_sum: Vec<DVector<f64>>,
}

impl MomentAccumulator {
    pub fn new(clusters: Vec<Vec<usize>>) -> Self {
        let users = clusters.len();
        let gain_sum = clusters.iter().map(|c| DVector::zeros(c.len())).collect();
        let cross_sum = clusters
            .iter()
            .map(|c| vec![DMatrix::zeros(c.len(), c.len()); users])
            .collect();
        let energy_sum = clusters.iter().map(|c| DVector::zeros(c.len())).collect();
        Self {
            clusters,
            draws: 0,
            gain_sum,
            cross_sum,
            energy_sum,
        }
    }

    /// Adds one realization: `channel` holds the true channels `h_lj`,
    /// `estimate` the local estimates `ĥ_lk` used as combiners.
    pub fn add(&mut self, channel: &ChannelDraw, estimate: &ChannelDraw) {
        let users = self.clusters.len();
        let mut g = Vec::new();
        for k in 0..users {
            let cluster = &self.clusters[k];
            let m = cluster.len();
            for (i, &l) in cluster.iter().enumerate() {
                let v = estimate.get(l, k);
                self.energy_sum[k][i] += v.iter().map(|c| c.norm_sqr()).sum::<f64>();
            }
            for j in 0..users {
                g.clear();
                g.extend(cluster.iter().map(|&l| {
                    let v = estimate.get(l, k);
                    let h = channel.get(l, j);
                    v.iter().zip(h).map(|(v, h)| v.conj() * h).sum::<Complex64>()
                }));
                if j == k {
                    for (sum, gi) in self.gain_sum[k].iter_mut().zip(&g) {
                        *sum += gi;
                    }
                }
                let acc = &mut self.cross_sum[k][j];
                for c in 0..m {
                    let gc = g[c].conj();
                    for r in 0..m {
                        acc[(r, c)] += g[r] * gc;
                    }
                }
            }
        }
        self.draws += 1;
    }

    fn merge(&mut self, other: MomentAccumulator) {
        self.draws += other.draws;
        for (a, b) in self.gain_sum.iter_mut().zip(other.gain_sum) {
            *a += b;
        }
        for (a, b) in self.cross_sum.iter_mut().zip(other.cross_sum) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        for (a, b) in self.energy_sum.iter_mut().zip(other.energy_sum) {
            *a += b;
        }
    }

    /// Sample means, with every `G_kj` replaced by `(G + Gᴴ) / 2`.
    pub fn finish(self) -> Result<Vec<UserMoments>> {
        let n = self.draws.max(1) as f64;
        let mut out = Vec::with_capacity(self.clusters.len());
        let parts = self
            .clusters
            .into_iter()
            .zip(self.gain_sum)
            .zip(self.cross_sum)
            .zip(self.energy_sum);
        for (user, (((serving, gain), cross), energy)) in parts.enumerate() {
            let mean_gain = gain.unscale(n);
            let magnitude = mean_gain.norm();
            if !(magnitude >= MIN_GAIN) {
                return Err(Error::VanishingGain { user, magnitude });
            }
            let cross = cross
                .into_iter()
                .map(|g| {
                    let g = g.unscale(n);
                    (&g + g.adjoint()).unscale(2.0)
                })
                .collect();
            out.push(UserMoments {
                user,
                serving,
                mean_gain,
                cross,
                combiner_energy: energy.unscale(n),
            });
        }
        Ok(out)
    }
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(s * re, s * im)
}

/// Draws `cfg.mc_draws` independent Rayleigh realizations and returns the
/// per-user statistics.
///
/// Draws are split into blocks of a fixed size, each with its own random
/// substream, and the block sums are added in block order; the result does
/// not depend on how many worker threads run.
pub fn estimate_moments(network: &Network, cfg: &NetworkConfig) -> Result<Vec<UserMoments>> {
    cfg.validate()?;
    let aps = network.ap_count();
    let users = network.user_count();
    let antennas = network.antennas_per_ap;
    let blocks = cfg.mc_draws.div_ceil(BLOCK);

    let partial: Vec<MomentAccumulator> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = sampling::substream(cfg.rng_seed, b as u64);
            let count = BLOCK.min(cfg.mc_draws - b * BLOCK);
            let mut acc = MomentAccumulator::new(network.clusters.clone());
            let mut h = ChannelDraw::zeros(aps, users, antennas);
            let mut h_est = h.clone();
            for _ in 0..count {
                for l in 0..aps {
                    for k in 0..users {
                        let beta = network.gains[l][k];
                        for x in h.get_mut(l, k) {
                            *x = complex_normal(&mut rng, beta);
                        }
                    }
                }
                if cfg.csi_error_variance > 0.0 {
                    h_est.data.copy_from_slice(&h.data);
                    for x in h_est.data.iter_mut() {
                        *x += complex_normal(&mut rng, cfg.csi_error_variance);
                    }
                    acc.add(&h, &h_est);
                } else {
                    acc.add(&h, &h);
                }
            }
            acc
        })
        .collect();

    let mut total = MomentAccumulator::new(network.clusters.clone());
    for acc in partial {
        total.merge(acc);
    }
    total.finish()
}
