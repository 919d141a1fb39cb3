//! Monotone norms and the budget constraint `‖p‖ ≤ p̄`.
//!
//! A norm is monotone when `0 ≤ x ≤ y` implies `‖x‖ ≤ ‖y‖`. The per-user
//! power constraint is the `l∞` ball and the sum-power constraint the `l1`
//! ball; positive weights rescale either one.

use rand::Rng;
use serde::Serialize;

use crate::check::{CheckReport, Property, Violation, STRICT_MARGIN};
use crate::error::{check_dim, invalid, Result};
use crate::sampling;

/// Anything that can be evaluated as a candidate norm on `R^K`.
pub trait Norm {
    fn norm(&self, x: &[f64]) -> f64;
}

impl<F: Fn(&[f64]) -> f64> Norm for F {
    fn norm(&self, x: &[f64]) -> f64 {
        self(x)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "weights", rename_all = "snake_case")]
pub enum NormKind {
    L1,
    LInf,
    WeightedL1(Vec<f64>),
    WeightedLInf(Vec<f64>),
}

impl NormKind {
    fn weights(&self) -> Option<&[f64]> {
        match self {
            NormKind::L1 | NormKind::LInf => None,
            NormKind::WeightedL1(w) | NormKind::WeightedLInf(w) => Some(w),
        }
    }
}

impl Norm for NormKind {
    fn norm(&self, x: &[f64]) -> f64 {
        match self {
            NormKind::L1 => x.iter().map(|v| v.abs()).sum(),
            NormKind::LInf => x.iter().fold(0.0, |m, v| m.max(v.abs())),
            NormKind::WeightedL1(w) => x.iter().zip(w).map(|(v, w)| w * v.abs()).sum(),
            NormKind::WeightedLInf(w) => x.iter().zip(w).fold(0.0, |m, (v, w)| m.max(w * v.abs())),
        }
    }
}

/// A monotone norm together with the budget `p̄` defining `C = {p ≥ 0 : ‖p‖ ≤ p̄}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotoneNorm {
    pub kind: NormKind,
    pub budget: f64,
}

impl MonotoneNorm {
    pub fn new(kind: NormKind, budget: f64) -> Result<Self> {
        if !(budget.is_finite() && budget > 0.0) {
            return Err(invalid("budget", format!("{budget} is not a positive finite value")));
        }
        if let Some(w) = kind.weights() {
            if w.is_empty() || w.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
                return Err(invalid("norm weights", "weights must be finite and strictly positive"));
            }
        }
        Ok(Self { kind, budget })
    }

    pub fn l1(budget: f64) -> Result<Self> {
        Self::new(NormKind::L1, budget)
    }

    pub fn linf(budget: f64) -> Result<Self> {
        Self::new(NormKind::LInf, budget)
    }

    /// Evaluates `‖x‖`.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if let Some(w) = self.kind.weights() {
            check_dim(w.len(), x.len())?;
        }
        Ok(self.kind.norm(x))
    }

    /// `(p̄ / ‖x‖) x`, which lies on the sphere `‖·‖ = p̄`. `x` must be nonzero.
    pub fn normalize(&self, x: &[f64]) -> Result<Vec<f64>> {
        let n = self.eval(x)?;
        if n <= 0.0 {
            return Err(invalid("vector", "cannot normalize the zero vector"));
        }
        let s = self.budget / n;
        Ok(x.iter().map(|v| v * s).collect())
    }

    /// The point `v = (p̄ / ‖1‖) 1` with equal coordinates on the boundary.
    pub fn uniform_point(&self, k: usize) -> Result<Vec<f64>> {
        self.normalize(&vec![1.0; k])
    }

    /// The same norm kind restricted to the coordinates in `active`.
    pub fn restrict(&self, active: &[usize]) -> MonotoneNorm {
        let pick = |w: &[f64]| active.iter().map(|&i| w[i]).collect::<Vec<_>>();
        let kind = match &self.kind {
            NormKind::L1 => NormKind::L1,
            NormKind::LInf => NormKind::LInf,
            NormKind::WeightedL1(w) => NormKind::WeightedL1(pick(w)),
            NormKind::WeightedLInf(w) => NormKind::WeightedLInf(pick(w)),
        };
        MonotoneNorm {
            kind,
            budget: self.budget,
        }
    }
}

impl Norm for MonotoneNorm {
    fn norm(&self, x: &[f64]) -> f64 {
        self.kind.norm(x)
    }
}

const EQ_TOL: f64 = 1e-10;

fn exceeds(lhs: f64, rhs: f64) -> bool {
    lhs - rhs > STRICT_MARGIN * rhs.abs().max(lhs.abs()) + f64::MIN_POSITIVE
}

/// Sampled check of the norm axioms and of monotonicity on the nonnegative
/// orthant of `R^dim`. A pass is evidence, not proof.
pub fn check_monotone_norm<N: Norm + ?Sized>(norm: &N, dim: usize, trials: usize, seed: u64) -> Result<CheckReport> {
    if dim == 0 {
        return Err(invalid("dim", "must be at least 1"));
    }
    if trials == 0 {
        return Err(invalid("trials", "must be at least 1"));
    }
    let mut rng = sampling::rng(seed);

    let zero = vec![0.0; dim];
    let z = norm.norm(&zero);
    if z.abs() > 0.0 {
        return Ok(CheckReport::fail(
            0,
            Violation {
                property: Property::Definiteness,
                coordinate: None,
                x: zero,
                y: None,
                alpha: None,
                lhs: z,
                rhs: 0.0,
            },
        ));
    }
    let mut probes = vec![vec![1.0; dim]];
    for i in 0..dim {
        let mut e = vec![0.0; dim];
        e[i] = 1.0;
        probes.push(e);
    }
    for x in probes {
        let v = norm.norm(&x);
        if !(v > 0.0) {
            return Ok(CheckReport::fail(
                0,
                Violation {
                    property: Property::Definiteness,
                    coordinate: None,
                    x,
                    y: None,
                    alpha: None,
                    lhs: v,
                    rhs: 0.0,
                },
            ));
        }
    }

    for trial in 1..=trials {
        // 0 <= y <= x on the orthant, plus sign flips for the axioms on R^K.
        let y = sampling::log_uniform_with_zeros(&mut rng, dim, 1e-6, 1e3);
        let x: Vec<f64> = y
            .iter()
            .map(|v| {
                let step = sampling::log_uniform(&mut rng, 1e-6, 1e3);
                if rng.random_bool(0.75) {
                    v + step
                } else {
                    *v
                }
            })
            .collect();
        let signed: Vec<f64> = x.iter().map(|v| if rng.random_bool(0.5) { -v } else { *v }).collect();
        let lambda = (rng.random::<f64>() * 2.0 - 1.0) * sampling::log_uniform(&mut rng, 1e-3, 1e3);

        let nx = norm.norm(&x);
        let ny = norm.norm(&y);
        let ns = norm.norm(&signed);

        if y.iter().any(|v| *v != 0.0) && !(ny > 0.0) {
            return Ok(CheckReport::fail(
                trial,
                Violation {
                    property: Property::Definiteness,
                    coordinate: None,
                    x: y,
                    y: None,
                    alpha: None,
                    lhs: ny,
                    rhs: 0.0,
                },
            ));
        }

        if exceeds(ny, nx) {
            return Ok(CheckReport::fail(
                trial,
                Violation {
                    property: Property::Monotonicity,
                    coordinate: None,
                    x,
                    y: Some(y),
                    alpha: None,
                    lhs: ny,
                    rhs: nx,
                },
            ));
        }

        let scaled: Vec<f64> = signed.iter().map(|v| lambda * v).collect();
        let lhs = norm.norm(&scaled);
        let rhs = lambda.abs() * ns;
        if (lhs - rhs).abs() > EQ_TOL * rhs.abs().max(lhs.abs()) {
            return Ok(CheckReport::fail(
                trial,
                Violation {
                    property: Property::Homogeneity,
                    coordinate: None,
                    x: signed,
                    y: None,
                    alpha: Some(lambda),
                    lhs,
                    rhs,
                },
            ));
        }

        let neg_y: Vec<f64> = y.iter().map(|v| -v).collect();
        let sum: Vec<f64> = signed.iter().zip(&neg_y).map(|(a, b)| a + b).collect();
        let lhs = norm.norm(&sum);
        let rhs = ns + norm.norm(&neg_y);
        if exceeds(lhs, rhs) {
            return Ok(CheckReport::fail(
                trial,
                Violation {
                    property: Property::TriangleInequality,
                    coordinate: None,
                    x: signed,
                    y: Some(neg_y),
                    alpha: None,
                    lhs,
                    rhs,
                },
            ));
        }
    }
    Ok(CheckReport::pass(trials))
}
