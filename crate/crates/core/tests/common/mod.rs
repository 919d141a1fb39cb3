//! Test-only oracles, independent of the fixed-point solver.
#![allow(dead_code)]

use fairpower::{AffineModel, MonotoneNorm, Norm};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn two_user_example() -> AffineModel {
    AffineModel::new(vec![vec![0.0, 0.1], vec![0.2, 0.0]], vec![1.0, 1.0]).unwrap()
}

/// `c⋆` of the two-user example: `p_2 = 10`, `p_1 = 2c`, `0.4c² + c = 10`.
pub fn two_user_closed_form() -> f64 {
    (17f64.sqrt() - 1.0) / 0.8
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
pub fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            let (top, bottom) = a.split_at_mut(row);
            for (x, pivot) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *x -= factor * pivot;
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|c| a[row][c] * x[c]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// Smallest `p ≥ 0` with `p = c T(p)` for the affine `T = diag(ω)(F p + σ)`,
/// i.e. `(I − c diag(ω) F) p = c diag(ω) σ`, or `None` when it does not exist.
/// Exact for irreducible or zero `F`.
pub fn affine_fixed_point(model: &AffineModel, weights: &[f64], c: f64) -> Option<Vec<f64>> {
    let k = weights.len();
    let f = model.coupling();
    let a: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| f64::from(u8::from(i == j)) - c * weights[i] * f[i][j])
                .collect()
        })
        .collect();
    let b: Vec<f64> = (0..k).map(|i| c * weights[i] * model.noise()[i]).collect();
    let x = gauss_solve(a, b)?;
    x.iter().all(|v| *v >= 0.0 && v.is_finite()).then_some(x)
}

/// Largest `c` for which the weighted utilities `c ω_k` are simultaneously
/// achievable within the budget, found by bisection on `c`.
pub fn bisection_c_star(model: &AffineModel, weights: &[f64], norm: &MonotoneNorm) -> (f64, Vec<f64>) {
    let feasible = |c: f64| affine_fixed_point(model, weights, c).filter(|p| norm.norm(p) <= norm.budget);
    let mut lo = 0.0;
    let mut hi = 1.0;
    while feasible(hi).is_some() {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid).is_some() {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    (lo, feasible(lo).unwrap_or_else(|| vec![0.0; weights.len()]))
}

/// Random affine instance with strictly positive off-diagonal coupling.
pub fn random_affine(rng: &mut ChaCha8Rng, k: usize) -> AffineModel {
    let coupling = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    if i == j {
                        0.0
                    } else {
                        rng.random_range(0.01..0.5) / (k - 1) as f64
                    }
                })
                .collect()
        })
        .collect();
    let noise = (0..k).map(|_| log_uniform(rng, 0.5, 2.0)).collect();
    AffineModel::new(coupling, noise).unwrap()
}

pub fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (lo.ln() + (hi.ln() - lo.ln()) * rng.random::<f64>()).exp()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn sup_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Samples `trials` points and checks, for the utilities `u = p / f(p)`:
/// `u_k(p) = 0 ⇔ p_k = 0`, `u_k(αp) > u_k(p)` for `p_k > 0` and `α ∈ (1, 10]`,
/// and `u_k(p) ≤ u_k(x)` whenever `p ≥ x` with `p_k = x_k`. Returns the first
/// failure as a message.
pub fn utility_property_failure<M: fairpower::InterferenceModel>(
    model: &M,
    trials: usize,
    seed: u64,
) -> Option<String> {
    use fairpower::{eval_utilities, PowerVector};
    let k = model.dim();
    let mut r = rng(seed);
    let sample = |r: &mut ChaCha8Rng| -> Vec<f64> {
        (0..k)
            .map(|_| {
                if r.random_bool(0.2) {
                    0.0
                } else {
                    log_uniform(r, 1e-6, 1e3)
                }
            })
            .collect()
    };
    for t in 0..trials {
        let x = sample(&mut r);
        let alpha = 10.0 - 9.0 * r.random::<f64>();
        let px = PowerVector::new(x.clone()).unwrap();
        let ux = eval_utilities(model, &px).unwrap();
        for c in 0..k {
            if (ux[c] == 0.0) != (x[c] == 0.0) || ux[c] < 0.0 {
                return Some(format!("(iii) trial {t}: p = {x:?}, u = {ux:?}"));
            }
        }
        let scaled = PowerVector::new(x.iter().map(|v| alpha * v).collect()).unwrap();
        let us = eval_utilities(model, &scaled).unwrap();
        for c in 0..k {
            // Strict increase, with ties within 1e-12 relative ignored.
            if x[c] > 0.0 && us[c] < ux[c] * (1.0 - 1e-12) {
                return Some(format!("(iv) trial {t}: coordinate {c}, {} -> {}", ux[c], us[c]));
            }
        }
        let c = r.random_range(0..k);
        let bigger: Vec<f64> = x
            .iter()
            .enumerate()
            .map(|(i, v)| if i == c { *v } else { v + log_uniform(&mut r, 1e-6, 1e3) })
            .collect();
        let ub = eval_utilities(model, &PowerVector::new(bigger).unwrap()).unwrap();
        if ub[c] > ux[c] * (1.0 + 1e-12) {
            return Some(format!("(v) trial {t}: coordinate {c}, {} -> {}", ux[c], ub[c]));
        }
    }
    None
}
