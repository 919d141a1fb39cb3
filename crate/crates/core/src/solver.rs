//! Weighted max-min utility optimization by normalized fixed-point iteration.
//!
//! Maximizing `min_k u_k(p) / ω_k` subject to `‖p‖ ≤ p̄` reduces to finding
//! the unique fixed point of
//!
//! ```text
//! T̃(p) = (p̄ / ‖T(p)‖) T(p),    T(p) = (ω_1 f_1(p), …, ω_K f_K(p)).
//! ```
//!
//! The fixed point `p⋆` saturates the budget, all weighted utilities are
//! equal at `p⋆`, and the optimal level is `c⋆ = p̄ / ‖T(p⋆)‖`. Plain
//! iteration `p_{n+1} = T̃(p_n)` converges from any nonnegative start.

use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::interference::{eval_utilities, scale_by_weights, InterferenceModel};
use crate::norm::MonotoneNorm;
use crate::vector::{PowerVector, UtilityProfile, WeightVector};

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    /// Stop once `‖p_{n+1} − p_n‖_∞ / p̄ ≤ tol`.
    pub tol: f64,
    pub max_iter: usize,
    /// Starting point; defaults to `(p̄ / ‖1‖) 1`.
    pub p_init: Option<PowerVector>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 10_000,
            p_init: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaxMinSolution {
    pub p_star: PowerVector,
    pub c_star: f64,
    pub utilities: UtilityProfile,
    pub iterations: usize,
    /// `(n, ‖p_n − p_{n−1}‖_∞ / p̄)` for every iteration performed.
    #[serde(rename = "residual_trace")]
    pub trace: Vec<(usize, f64)>,
    pub converged: bool,
}

/// One application of `T̃(p) = (p̄ / ‖T(p)‖) T(p)`.
pub fn normalized_map<M: InterferenceModel + ?Sized>(
    model_t: &M,
    norm: &MonotoneNorm,
    p: &PowerVector,
) -> Result<PowerVector> {
    check_dim(model_t.dim(), p.len())?;
    let t = model_t.eval(p)?;
    let out = norm.normalize(&t)?;
    Ok(PowerVector::from_vec_unchecked(out))
}

/// Solves the weighted max-min problem under `‖p‖ ≤ p̄`.
///
/// Non-convergence within `max_iter` is reported through
/// [`MaxMinSolution::converged`] rather than as an error.
pub fn solve_weighted_maxmin<M: InterferenceModel + ?Sized>(
    model: &M,
    weights: &WeightVector,
    norm: &MonotoneNorm,
    opts: &SolverOptions,
) -> Result<MaxMinSolution> {
    let k = model.dim();
    check_dim(k, weights.len())?;
    if !(opts.tol > 0.0) {
        return Err(crate::error::invalid("tol", "must be positive"));
    }
    if opts.max_iter == 0 {
        return Err(crate::error::invalid("max_iter", "must be at least 1"));
    }
    let t_map = scale_by_weights(model, weights)?;
    let budget = norm.budget;

    let mut p = match &opts.p_init {
        Some(p0) => {
            check_dim(k, p0.len())?;
            p0.clone()
        }
        None => PowerVector::from_vec_unchecked(norm.uniform_point(k)?),
    };

    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    while iterations < opts.max_iter {
        let next = normalized_map(&t_map, norm, &p)?;
        iterations += 1;
        let residual = next
            .iter()
            .zip(p.iter())
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
            / budget;
        trace.push((iterations, residual));
        p = next;
        if residual <= opts.tol {
            converged = true;
            break;
        }
    }

    let t = t_map.eval(&p)?;
    let c_star = budget / norm.eval(&t)?;
    let utilities = eval_utilities(model, &p)?;
    Ok(MaxMinSolution {
        p_star: p,
        c_star,
        utilities,
        iterations,
        trace,
        converged,
    })
}

/// Weights `ω_k = u_k(p⋆)` for which `p⋆` is the max-min solution.
///
/// Requires a strictly positive `p⋆`; boundary points with inactive users
/// are handled on the reduced network (see [`crate::pareto`]).
pub fn extract_weights<M: InterferenceModel + ?Sized>(model: &M, p_star: &PowerVector) -> Result<WeightVector> {
    if let Some(index) = p_star.iter().position(|v| *v <= 0.0) {
        return Err(Error::ZeroCoordinate { index });
    }
    let u = eval_utilities(model, p_star)?;
    WeightVector::new(u.into_vec())
}

/// Checks `p ≥ c T(p)` coordinate-wise, which holds exactly when
/// `u_k(p) ≥ c ω_k` for every user.
pub fn feasibility_certificate<M: InterferenceModel + ?Sized>(
    model: &M,
    weights: &WeightVector,
    p: &PowerVector,
    c: f64,
) -> Result<bool> {
    check_dim(model.dim(), p.len())?;
    check_dim(model.dim(), weights.len())?;
    if !(c >= 0.0) {
        return Err(crate::error::invalid("c", "must be nonnegative"));
    }
    let t = scale_by_weights(model, weights)?.eval(p)?;
    Ok(p.iter().zip(&t).all(|(p, t)| *p >= c * t))
}
