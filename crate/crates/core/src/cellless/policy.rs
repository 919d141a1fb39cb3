use rand::Rng;
use serde::Serialize;

use super::model::{eval_rates, CellLessModel};
use super::network::Network;
use crate::error::{invalid, Result};
use crate::interference::eval_utilities;
use crate::norm::MonotoneNorm;
use crate::sampling;
use crate::vector::PowerVector;

/// Power allocation rules; every one is rescaled onto `‖p‖ = p̄`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum PowerPolicy {
    FullPower,
    /// I.i.d. uniform powers on `[0, p̄]`.
    RandomBox {
        seed: u64,
    },
    /// `p_k ∝ (Σ_{l ∈ D_k} β_lk)^exponent`.
    FractionalExponent {
        exponent: f64,
    },
}

impl PowerPolicy {
    pub fn name(&self) -> &'static str {
        match self {
            PowerPolicy::FullPower => "full",
            PowerPolicy::RandomBox { .. } => "random",
            PowerPolicy::FractionalExponent { .. } => "fractional",
        }
    }
}

/// Builds the policy's raw power vector and rescales it so the budget
/// constraint holds with equality.
pub fn apply_policy(policy: PowerPolicy, network: &Network, norm: &MonotoneNorm) -> Result<PowerVector> {
    let k = network.user_count();
    let budget = norm.budget;
    let raw = match policy {
        PowerPolicy::FullPower => vec![budget; k],
        PowerPolicy::RandomBox { seed } => {
            let mut stream = 0;
            loop {
                let mut rng = sampling::substream(seed, stream);
                let v: Vec<f64> = (0..k).map(|_| budget * rng.random::<f64>()).collect();
                if v.iter().any(|x| *x > 0.0) {
                    break v;
                }
                stream += 1;
            }
        }
        PowerPolicy::FractionalExponent { exponent } => {
            if !exponent.is_finite() {
                return Err(invalid("fractional exponent", "must be finite"));
            }
            (0..k).map(|u| network.cluster_gain(u).powf(exponent)).collect()
        }
    };
    if raw.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(invalid("policy", "produced a non-finite or negative power"));
    }
    Ok(PowerVector::from_vec_unchecked(norm.normalize(&raw)?))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolicyOutcome {
    pub policy: PowerPolicy,
    pub p: PowerVector,
    pub sinr: Vec<f64>,
    pub rates: Vec<f64>,
}

/// Evaluates each policy on the model; one outcome per policy, in order.
pub fn run_policies(
    model: &CellLessModel,
    network: &Network,
    norm: &MonotoneNorm,
    policies: &[PowerPolicy],
) -> Result<Vec<PolicyOutcome>> {
    policies
        .iter()
        .map(|&policy| {
            let p = apply_policy(policy, network, norm)?;
            let sinr = eval_utilities(model, &p)?.into_vec();
            let rates = eval_rates(model, &p)?;
            Ok(PolicyOutcome { policy, p, sinr, rates })
        })
        .collect()
}
