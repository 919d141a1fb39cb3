use std::str::FromStr;

use serde::Serialize;

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ApLayout {
    /// A `√L × √L` lattice centered in the square; `L` must be a perfect square.
    RegularGrid,
    Explicit(Vec<[f64; 2]>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum UserLayout {
    UniformRandom(u64),
    Explicit(Vec<[f64; 2]>),
}

/// Log-distance pathloss `PL(d) = ref_loss_db + 10 · exponent · log10(d / 1 m)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pathloss {
    pub ref_loss_db: f64,
    pub exponent: f64,
}

impl Pathloss {
    /// Loss in dB at distance `d` meters, clamped below 1 m.
    pub fn loss_db(&self, d: f64) -> f64 {
        self.ref_loss_db + 10.0 * self.exponent * d.max(1.0).log10()
    }
}

impl Default for Pathloss {
    fn default() -> Self {
        Self {
            ref_loss_db: 30.5,
            exponent: 3.76,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetworkConfig {
    pub ap_count: usize,
    pub antennas_per_ap: usize,
    pub user_count: usize,
    /// Side of the square service area in meters.
    pub area_side: f64,
    pub cluster_size: usize,
    pub ap_layout: ApLayout,
    pub user_layout: UserLayout,
    pub pathloss: Pathloss,
    pub noise_power_dbm: f64,
    pub mc_draws: usize,
    pub rng_seed: u64,
    /// Per-antenna variance of the additive local channel estimation error,
    /// in units of the noise power. Zero means perfect local CSI.
    pub csi_error_variance: f64,
}

impl Default for NetworkConfig {
    /// 16 users, 16 two-antenna APs on a grid over 1 km², clusters of 4.
    fn default() -> Self {
        Self {
            ap_count: 16,
            antennas_per_ap: 2,
            user_count: 16,
            area_side: 1000.0,
            cluster_size: 4,
            ap_layout: ApLayout::RegularGrid,
            user_layout: UserLayout::UniformRandom(0),
            pathloss: Pathloss::default(),
            noise_power_dbm: -94.0,
            mc_draws: 20_000,
            rng_seed: 0,
            csi_error_variance: 0.0,
        }
    }
}

impl NetworkConfig {
    /// 8 users, 9 two-antenna APs, clusters of 3.
    pub fn desk_scale() -> Self {
        Self {
            ap_count: 9,
            user_count: 8,
            cluster_size: 3,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.ap_count == 0 || self.antennas_per_ap == 0 || self.user_count == 0 {
            return Err(invalid("network size", "L, N and K must all be at least 1"));
        }
        if self.cluster_size == 0 || self.cluster_size > self.ap_count {
            return Err(invalid(
                "cluster_size",
                format!("{} is outside [1, {}]", self.cluster_size, self.ap_count),
            ));
        }
        if !(self.area_side.is_finite() && self.area_side > 0.0) {
            return Err(invalid("area_side", "must be positive"));
        }
        if self.mc_draws < 100 {
            return Err(invalid("mc_draws", "at least 100 draws are required"));
        }
        if !(self.csi_error_variance.is_finite() && self.csi_error_variance >= 0.0) {
            return Err(invalid("csi_error_variance", "must be nonnegative"));
        }
        if !(self.noise_power_dbm.is_finite()
            && self.pathloss.ref_loss_db.is_finite()
            && self.pathloss.exponent.is_finite())
        {
            return Err(invalid("pathloss", "parameters must be finite"));
        }
        match &self.ap_layout {
            ApLayout::RegularGrid => {
                let side = (self.ap_count as f64).sqrt().round() as usize;
                if side * side != self.ap_count {
                    return Err(invalid(
                        "ap_layout",
                        format!("a regular grid needs a square AP count, got {}", self.ap_count),
                    ));
                }
            }
            ApLayout::Explicit(pos) if pos.len() != self.ap_count => {
                return Err(invalid(
                    "ap_positions",
                    format!("{} positions given for {} APs", pos.len(), self.ap_count),
                ));
            }
            ApLayout::Explicit(_) => {}
        }
        if let UserLayout::Explicit(pos) = &self.user_layout {
            if pos.len() != self.user_count {
                return Err(invalid(
                    "user_positions",
                    format!("{} positions given for {} users", pos.len(), self.user_count),
                ));
            }
        }
        Ok(())
    }
}

/// `10^((dBm − 30) / 10)` watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// Network plus the power-control settings of the policy experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub network: NetworkConfig,
    /// Per-user power budget `p̄` in dBm.
    pub budget_dbm: f64,
    pub fractional_exponent: f64,
    pub policy_seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            network: NetworkConfig::default(),
            budget_dbm: 20.0,
            fractional_exponent: -1.0,
            policy_seed: 0,
        }
    }
}

fn parse_positions(line: usize, value: &str) -> Result<Vec<[f64; 2]>> {
    value
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|pair| {
            let xy: Vec<&str> = pair.split(',').map(str::trim).collect();
            match xy.as_slice() {
                [x, y] => match (x.parse::<f64>(), y.parse::<f64>()) {
                    (Ok(x), Ok(y)) if x.is_finite() && y.is_finite() => Ok([x, y]),
                    _ => Err(Error::Parse {
                        line,
                        reason: format!("`{pair}` is not an `x, y` pair of numbers"),
                    }),
                },
                _ => Err(Error::Parse {
                    line,
                    reason: format!("`{pair}` is not an `x, y` pair"),
                }),
            }
        })
        .collect()
}

fn parse_num<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::Parse {
        line,
        reason: format!("`{value}` is not a valid value for `{key}`"),
    })
}

/// Reads the flat `key = value` format; `#` starts a comment.
///
/// Recognized keys: `L`, `N`, `K`, `area_side`, `cluster_size`,
/// `ap_layout` (`grid` | `explicit`), `ap_positions` (`x,y; x,y; …`),
/// `user_layout` (`random` | `explicit`), `user_seed`, `user_positions`,
/// `ref_loss_db`, `pathloss_exponent`, `noise_power_dbm`, `mc_draws`,
/// `rng_seed`, `csi_error_variance`, `budget_dbm`, `fractional_exponent`,
/// `policy_seed`. Unset keys keep their defaults.
impl FromStr for ExperimentConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        let mut ap_layout = "grid".to_string();
        let mut ap_positions = None;
        let mut user_layout = "random".to_string();
        let mut user_positions = None;
        let mut user_seed = 0u64;

        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or(Error::Parse {
                line,
                reason: "expected `key = value`".into(),
            })?;
            let (key, value) = (key.trim(), value.trim());
            let net = &mut cfg.network;
            match key {
                "L" | "ap_count" => net.ap_count = parse_num(line, key, value)?,
                "N" | "antennas_per_ap" => net.antennas_per_ap = parse_num(line, key, value)?,
                "K" | "user_count" => net.user_count = parse_num(line, key, value)?,
                "area_side" => net.area_side = parse_num(line, key, value)?,
                "cluster_size" => net.cluster_size = parse_num(line, key, value)?,
                "ap_layout" => ap_layout = value.to_ascii_lowercase(),
                "ap_positions" => ap_positions = Some(parse_positions(line, value)?),
                "user_layout" => user_layout = value.to_ascii_lowercase(),
                "user_seed" => user_seed = parse_num(line, key, value)?,
                "user_positions" => user_positions = Some(parse_positions(line, value)?),
                "ref_loss_db" => net.pathloss.ref_loss_db = parse_num(line, key, value)?,
                "pathloss_exponent" => net.pathloss.exponent = parse_num(line, key, value)?,
                "noise_power_dbm" => net.noise_power_dbm = parse_num(line, key, value)?,
                "mc_draws" => net.mc_draws = parse_num(line, key, value)?,
                "rng_seed" => net.rng_seed = parse_num(line, key, value)?,
                "csi_error_variance" => net.csi_error_variance = parse_num(line, key, value)?,
                "budget_dbm" => cfg.budget_dbm = parse_num(line, key, value)?,
                "fractional_exponent" => cfg.fractional_exponent = parse_num(line, key, value)?,
                "policy_seed" => cfg.policy_seed = parse_num(line, key, value)?,
                _ => {
                    return Err(Error::Parse {
                        line,
                        reason: format!("unknown key `{key}`"),
                    })
                }
            }
        }

        cfg.network.ap_layout = match ap_layout.as_str() {
            "grid" | "regular_grid" => ApLayout::RegularGrid,
            "explicit" => {
                ApLayout::Explicit(ap_positions.ok_or(invalid("ap_positions", "required when ap_layout = explicit"))?)
            }
            other => return Err(invalid("ap_layout", format!("unknown layout `{other}`"))),
        };
        cfg.network.user_layout = match user_layout.as_str() {
            "random" | "uniform_random" => UserLayout::UniformRandom(user_seed),
            "explicit" => UserLayout::Explicit(
                user_positions.ok_or(invalid("user_positions", "required when user_layout = explicit"))?,
            ),
            other => return Err(invalid("user_layout", format!("unknown layout `{other}`"))),
        };
        if !cfg.budget_dbm.is_finite() {
            return Err(invalid("budget_dbm", "must be finite"));
        }
        cfg.network.validate()?;
        Ok(cfg)
    }
}
