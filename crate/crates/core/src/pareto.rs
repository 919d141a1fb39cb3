//! The weak Pareto boundary of the utility region.
//!
//! A feasible `p` yields utilities on the weak Pareto boundary exactly when
//! `‖p‖ = p̄`: no feasible `p′` can then raise every user's utility at once.
//! Conversely, any `p` with `‖p‖ < p̄` is strictly dominated, and a dominator
//! can be built by scaling `p` up to the budget and switching on the idle
//! users with a small amount of power.

use serde::Serialize;

use crate::error::{check_dim, invalid, Error, Result};
use crate::interference::{eval_utilities, InterferenceModel, Reduced};
use crate::norm::MonotoneNorm;
use crate::sampling;
use crate::solver::{extract_weights, solve_weighted_maxmin, SolverOptions};
use crate::vector::{PowerVector, UtilityProfile};

/// Relative slack `|‖p‖ − p̄| ≤ BOUNDARY_TOL · p̄` treated as "on the boundary".
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Perturbations tried by [`find_dominating_point`], largest first.
pub const PERTURBATION_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Crosscheck {
    /// Users kept in the (possibly reduced) network the solver ran on.
    pub active_users: Vec<usize>,
    pub c_star: f64,
    /// Solver output embedded back into the full network.
    pub recovered_p: PowerVector,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryCertificate {
    pub on_boundary: bool,
    pub norm_value: f64,
    pub budget: f64,
    pub solver_crosscheck: Option<Crosscheck>,
    pub dominator: Option<PowerVector>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundarySample {
    pub p: PowerVector,
    pub u: UtilityProfile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Dominance {
    FirstStrictlyDominates,
    SecondStrictlyDominates,
    Neither,
}

/// Strict coordinate-wise comparison in both directions.
pub fn dominance_compare(u1: &[f64], u2: &[f64]) -> Result<Dominance> {
    check_dim(u1.len(), u2.len())?;
    if u1.iter().zip(u2).all(|(a, b)| a > b) {
        Ok(Dominance::FirstStrictlyDominates)
    } else if u1.iter().zip(u2).all(|(a, b)| b > a) {
        Ok(Dominance::SecondStrictlyDominates)
    } else {
        Ok(Dominance::Neither)
    }
}

fn strictly_dominates(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x > y)
}

/// Decides boundary membership by the norm test `‖p‖ = p̄`.
///
/// With `crosscheck`, the max-min problem is re-solved with the weights
/// `ω = u(p)` on the network of active users; on the boundary this recovers
/// `p` with `c⋆ = 1`. Off the boundary a verified dominator is attached.
pub fn certify_boundary<M: InterferenceModel + ?Sized>(
    model: &M,
    norm: &MonotoneNorm,
    p: &PowerVector,
    tol: f64,
    crosscheck: bool,
) -> Result<BoundaryCertificate> {
    check_dim(model.dim(), p.len())?;
    if !(tol >= 0.0) {
        return Err(invalid("tol", "must be nonnegative"));
    }
    let budget = norm.budget;
    let norm_value = norm.eval(p)?;
    if norm_value > budget * (1.0 + tol) {
        return Err(Error::OutsideConstraint {
            norm: norm_value,
            budget,
        });
    }
    let on_boundary = (norm_value - budget).abs() <= budget * tol;

    let solver_crosscheck = if crosscheck {
        reduced_crosscheck(model, norm, p)?
    } else {
        None
    };
    let dominator = if on_boundary {
        None
    } else {
        find_dominating_point(model, norm, p, 1e-2)?
    };
    Ok(BoundaryCertificate {
        on_boundary,
        norm_value,
        budget,
        solver_crosscheck,
        dominator,
    })
}

fn reduced_crosscheck<M: InterferenceModel + ?Sized>(
    model: &M,
    norm: &MonotoneNorm,
    p: &PowerVector,
) -> Result<Option<Crosscheck>> {
    let active: Vec<usize> = (0..p.len()).filter(|&k| p[k] > 0.0).collect();
    if active.is_empty() {
        return Ok(None);
    }
    let reduced = Reduced::new(model, active.clone())?;
    let reduced_norm = norm.restrict(&active);
    let p_active = PowerVector::from_vec_unchecked(active.iter().map(|&k| p[k]).collect());
    let weights = extract_weights(&reduced, &p_active)?;
    let sol = solve_weighted_maxmin(&reduced, &weights, &reduced_norm, &SolverOptions::default())?;
    Ok(Some(Crosscheck {
        recovered_p: PowerVector::from_vec_unchecked(reduced.embed(&sol.p_star)),
        active_users: active,
        c_star: sol.c_star,
        converged: sol.converged,
    }))
}

/// Builds a strictly positive `p′ ∈ C` with `u(p′) > u(p)` in every
/// coordinate, or returns `None` when `p` is on the boundary.
///
/// `p` is scaled up to the budget; idle users are then given power
/// `ε p̄` and the result is renormalized onto `‖·‖ = p̄`. `ε` runs from
/// `perturbation` down to [`PERTURBATION_FLOOR`] by factors of ten, and the
/// first candidate whose dominance verifies is returned.
pub fn find_dominating_point<M: InterferenceModel + ?Sized>(
    model: &M,
    norm: &MonotoneNorm,
    p: &PowerVector,
    perturbation: f64,
) -> Result<Option<PowerVector>> {
    check_dim(model.dim(), p.len())?;
    if !(perturbation > 0.0) {
        return Err(invalid("perturbation", "must be positive"));
    }
    let budget = norm.budget;
    let n = norm.eval(p)?;
    if n >= budget * (1.0 - BOUNDARY_TOL) {
        return Ok(None);
    }
    let u = eval_utilities(model, p)?;
    let verified = |cand: Vec<f64>| -> Result<Option<PowerVector>> {
        let cand = PowerVector::from_vec_unchecked(cand);
        if norm.eval(&cand)? > budget * (1.0 + BOUNDARY_TOL) {
            return Ok(None);
        }
        let uc = eval_utilities(model, &cand)?;
        Ok(strictly_dominates(&uc, &u).then_some(cand))
    };

    if n == 0.0 {
        return verified(norm.uniform_point(p.len())?);
    }
    let scaled: Vec<f64> = p.iter().map(|v| v * budget / n).collect();
    if scaled.iter().all(|v| *v > 0.0) {
        return verified(scaled);
    }
    let mut eps = perturbation;
    while eps >= PERTURBATION_FLOOR * (1.0 - 1e-9) {
        let filled: Vec<f64> = scaled
            .iter()
            .map(|v| if *v > 0.0 { *v } else { eps * budget })
            .collect();
        if let Some(d) = verified(norm.normalize(&filled)?)? {
            return Ok(Some(d));
        }
        eps /= 10.0;
    }
    Ok(None)
}

/// Draws `n` points on `‖p‖ = p̄` together with their utilities.
///
/// The first sample is the equal-power point; when `n ≥ K + 1` the `K` axis
/// points follow. Remaining directions have log-uniform coordinates over
/// six decades.
pub fn sample_boundary<M: InterferenceModel + ?Sized>(
    model: &M,
    norm: &MonotoneNorm,
    n: usize,
    seed: u64,
) -> Result<Vec<BoundarySample>> {
    if n == 0 {
        return Err(invalid("n", "must be at least 1"));
    }
    let k = model.dim();
    let mut directions = vec![vec![1.0; k]];
    if n > k {
        for i in 0..k {
            let mut e = vec![0.0; k];
            e[i] = 1.0;
            directions.push(e);
        }
    }
    let mut rng = sampling::rng(seed);
    while directions.len() < n {
        directions.push(sampling::log_uniform_vec(&mut rng, k, 1e-6, 1.0));
    }
    directions
        .into_iter()
        .map(|d| {
            let p = PowerVector::from_vec_unchecked(norm.normalize(&d)?);
            let u = eval_utilities(model, &p)?;
            Ok(BoundarySample { p, u })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DominatorSearch {
    pub dominator: Option<PowerVector>,
    pub feasible_candidates: usize,
}

/// Brute-force search for a feasible point strictly dominating `p`.
///
/// Candidates have coordinates log-uniform over `[1e-6 p̄, p̄]` and are kept
/// only if they lie in `C`. At most `100 · candidates` draws are made.
pub fn search_dominator<M: InterferenceModel + ?Sized>(
    model: &M,
    norm: &MonotoneNorm,
    p: &PowerVector,
    candidates: usize,
    seed: u64,
) -> Result<DominatorSearch> {
    check_dim(model.dim(), p.len())?;
    let k = p.len();
    let budget = norm.budget;
    let u = eval_utilities(model, p)?;
    let mut rng = sampling::rng(seed);
    let mut feasible = 0;
    let mut draws = 0usize;
    while feasible < candidates && draws < candidates.saturating_mul(100) {
        draws += 1;
        let c: Vec<f64> = (0..k)
            .map(|_| sampling::log_uniform(&mut rng, 1e-6 * budget, budget))
            .collect();
        if norm.eval(&c)? > budget {
            continue;
        }
        feasible += 1;
        let c = PowerVector::from_vec_unchecked(c);
        let uc = eval_utilities(model, &c)?;
        if strictly_dominates(&uc, &u) {
            return Ok(DominatorSearch {
                dominator: Some(c),
                feasible_candidates: feasible,
            });
        }
    }
    Ok(DominatorSearch {
        dominator: None,
        feasible_candidates: feasible,
    })
}
