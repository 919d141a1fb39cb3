//! Standard interference models and the utilities they induce.
//!
//! A mapping `f : R_+^K → R_++^K` is a standard interference (SI) mapping
//! when every coordinate is positive, monotone (`x ≥ y ⇒ f(x) ≥ f(y)`) and
//! strictly scalable (`α f(x) > f(αx)` for `α > 1`). Each user's utility is
//! `u_k(p) = p_k / f_k(p)`, e.g. an SINR with `f_k` the effective
//! interference-plus-noise seen by user `k`.

use std::fmt::Write as _;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::check::{CheckReport, Property, Violation, STRICT_MARGIN};
use crate::error::{check_dim, invalid, Error, Result};
use crate::sampling;
use crate::vector::{PowerVector, UtilityProfile, WeightVector};

/// An evaluable interference mapping `p ↦ (f_1(p), …, f_K(p))`.
///
/// Implementations return [`Error::DimensionMismatch`] when `p.len()` differs
/// from [`dim`](Self::dim). Callers pass nonnegative vectors.
pub trait InterferenceModel {
    fn dim(&self) -> usize;

    fn eval(&self, p: &[f64]) -> Result<Vec<f64>>;
}

impl<M: InterferenceModel + ?Sized> InterferenceModel for &M {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn eval(&self, p: &[f64]) -> Result<Vec<f64>> {
        (**self).eval(p)
    }
}

impl<M: InterferenceModel + ?Sized> InterferenceModel for Box<M> {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn eval(&self, p: &[f64]) -> Result<Vec<f64>> {
        (**self).eval(p)
    }
}

/// `f(p) = F p + σ` with a nonnegative coupling matrix `F` and noise `σ`.
///
/// `σ > 0` is what makes the mapping standard; a zero entry is accepted by
/// [`AffineModel::new`] so the checkers can be exercised on it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AffineModel {
    coupling: Vec<Vec<f64>>,
    noise: Vec<f64>,
}

impl AffineModel {
    pub fn new(coupling: Vec<Vec<f64>>, noise: Vec<f64>) -> Result<Self> {
        let k = noise.len();
        if k == 0 {
            return Err(invalid("affine model", "at least one user is required"));
        }
        check_dim(k, coupling.len())?;
        for row in &coupling {
            check_dim(k, row.len())?;
            if row.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                return Err(invalid("coupling matrix", "entries must be finite and nonnegative"));
            }
        }
        if noise.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(invalid("noise vector", "entries must be finite and nonnegative"));
        }
        Ok(Self { coupling, noise })
    }

    pub fn coupling(&self) -> &[Vec<f64>] {
        &self.coupling
    }

    pub fn noise(&self) -> &[f64] {
        &self.noise
    }

    /// Renders the model in the text format read by [`FromStr`].
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.noise.len());
        for row in &self.coupling {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        let line: Vec<String> = self.noise.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{}", line.join(" "));
        out
    }
}

impl InterferenceModel for AffineModel {
    fn dim(&self) -> usize {
        self.noise.len()
    }

    fn eval(&self, p: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), p.len())?;
        Ok(self
            .coupling
            .iter()
            .zip(&self.noise)
            .map(|(row, s)| row.iter().zip(p).map(|(a, b)| a * b).sum::<f64>() + s)
            .collect())
    }
}

/// Parses the plain-text affine format: a line with `K`, then the `K` rows of
/// the coupling matrix, then the `K` noise values. `#` starts a comment.
impl FromStr for AffineModel {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());

        let parse_row = |line: usize, s: &str| -> Result<Vec<f64>> {
            s.split_whitespace()
                .map(|t| {
                    t.parse::<f64>().map_err(|_| Error::Parse {
                        line,
                        reason: format!("`{t}` is not a number"),
                    })
                })
                .collect()
        };

        let (line, first) = lines.next().ok_or(Error::Parse {
            line: 1,
            reason: "missing user count".into(),
        })?;
        let k: usize = first.parse().map_err(|_| Error::Parse {
            line,
            reason: format!("`{first}` is not a positive integer user count"),
        })?;
        if k == 0 {
            return Err(Error::Parse {
                line,
                reason: "user count must be at least 1".into(),
            });
        }

        let mut coupling = Vec::with_capacity(k);
        let mut last_line = line;
        for r in 0..k {
            let (line, s) = lines.next().ok_or(Error::Parse {
                line: last_line + 1,
                reason: format!("expected coupling row {} of {k}", r + 1),
            })?;
            let row = parse_row(line, s)?;
            if row.len() != k {
                return Err(Error::Parse {
                    line,
                    reason: format!("coupling row has {} entries, expected {k}", row.len()),
                });
            }
            if row.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                return Err(Error::Parse {
                    line,
                    reason: "coupling entries must be nonnegative".into(),
                });
            }
            coupling.push(row);
            last_line = line;
        }

        let (line, s) = lines.next().ok_or(Error::Parse {
            line: last_line + 1,
            reason: "expected the noise line".into(),
        })?;
        let noise = parse_row(line, s)?;
        if noise.len() != k {
            return Err(Error::Parse {
                line,
                reason: format!("noise line has {} entries, expected {k}", noise.len()),
            });
        }
        if noise.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::Parse {
                line,
                reason: "noise entries must be positive".into(),
            });
        }
        if let Some((line, _)) = lines.next() {
            return Err(Error::Parse {
                line,
                reason: "unexpected trailing content".into(),
            });
        }
        AffineModel::new(coupling, noise)
    }
}

/// Adapts a closure into an [`InterferenceModel`] of fixed dimension.
pub struct FnModel<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&[f64]) -> Vec<f64>> FnModel<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(&[f64]) -> Vec<f64>> InterferenceModel for FnModel<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, p: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim, p.len())?;
        let out = (self.f)(p);
        check_dim(self.dim, out.len())?;
        Ok(out)
    }
}

/// The weighted mapping `T(p) = (ω_1 f_1(p), …, ω_K f_K(p))`.
#[derive(Debug, Clone)]
pub struct Weighted<M> {
    inner: M,
    weights: WeightVector,
}

impl<M> Weighted<M> {
    pub fn inner(&self) -> &M {
        &self.inner
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }
}

impl<M: InterferenceModel> InterferenceModel for Weighted<M> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval(&self, p: &[f64]) -> Result<Vec<f64>> {
        let mut f = self.inner.eval(p)?;
        for (v, w) in f.iter_mut().zip(self.weights.iter()) {
            *v *= w;
        }
        Ok(f)
    }
}

/// Builds `T = diag(ω) f`, again an SI mapping when `f` is one.
pub fn scale_by_weights<M: InterferenceModel>(model: M, weights: &WeightVector) -> Result<Weighted<M>> {
    check_dim(model.dim(), weights.len())?;
    Ok(Weighted {
        inner: model,
        weights: weights.clone(),
    })
}

/// The network left after deleting the users outside `active`: the inactive
/// users transmit nothing and are dropped from the output.
#[derive(Debug, Clone)]
pub struct Reduced<M> {
    inner: M,
    active: Vec<usize>,
}

impl<M: InterferenceModel> Reduced<M> {
    pub fn new(inner: M, active: Vec<usize>) -> Result<Self> {
        let k = inner.dim();
        if active.is_empty() {
            return Err(invalid("active users", "at least one user must remain"));
        }
        if active.windows(2).any(|w| w[0] >= w[1]) || active.iter().any(|&i| i >= k) {
            return Err(invalid(
                "active users",
                "indices must be strictly increasing and below the model dimension",
            ));
        }
        Ok(Self { inner, active })
    }

    pub fn active(&self) -> &[usize] {
        &self.active
    }

    /// Embeds a reduced vector into the full network with zeros elsewhere.
    pub fn embed(&self, p: &[f64]) -> Vec<f64> {
        let mut full = vec![0.0; self.inner.dim()];
        for (&i, v) in self.active.iter().zip(p) {
            full[i] = *v;
        }
        full
    }
}

impl<M: InterferenceModel> InterferenceModel for Reduced<M> {
    fn dim(&self) -> usize {
        self.active.len()
    }

    fn eval(&self, p: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), p.len())?;
        let f = self.inner.eval(&self.embed(p))?;
        Ok(self.active.iter().map(|&i| f[i]).collect())
    }
}

/// `u_k(p) = p_k / f_k(p)`; exactly zero for users with `p_k = 0`.
pub fn eval_utilities<M: InterferenceModel + ?Sized>(model: &M, p: &PowerVector) -> Result<UtilityProfile> {
    check_dim(model.dim(), p.len())?;
    let f = model.eval(p)?;
    Ok(UtilityProfile::new(
        p.iter()
            .zip(&f)
            .map(|(p, f)| if *p == 0.0 { 0.0 } else { p / f })
            .collect(),
    ))
}

/// Interval `(low, high]` from which the scaling factor `α` is drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleRange {
    pub low: f64,
    pub high: f64,
}

impl Default for ScaleRange {
    fn default() -> Self {
        Self { low: 1.0, high: 10.0 }
    }
}

impl ScaleRange {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let a = self.high - (self.high - self.low) * rng.random::<f64>();
        // (low, high] even when the draw rounds onto `low`.
        if a > self.low {
            a
        } else {
            self.high
        }
    }
}

/// Sampled check of positivity, monotonicity and strict scalability.
///
/// Pairs `x ≥ y ≥ 0` are drawn with coordinates log-uniform over
/// `[1e-6, 1e3]` and random coordinates zeroed; the first trial uses `y = 0`.
/// Ties within [`STRICT_MARGIN`] are not reported.
pub fn check_standard_interference<M: InterferenceModel + ?Sized>(
    model: &M,
    trials: usize,
    scale_range: ScaleRange,
    seed: u64,
) -> Result<CheckReport> {
    if trials == 0 {
        return Err(invalid("trials", "must be at least 1"));
    }
    if !(scale_range.low >= 1.0 && scale_range.high > scale_range.low && scale_range.high.is_finite()) {
        return Err(invalid("scale range", "expected 1 <= low < high < inf"));
    }
    let k = model.dim();
    let mut rng = sampling::rng(seed);

    for trial in 1..=trials {
        let y = if trial == 1 {
            vec![0.0; k]
        } else {
            sampling::log_uniform_with_zeros(&mut rng, k, 1e-6, 1e3)
        };
        let step = sampling::log_uniform_with_zeros(&mut rng, k, 1e-6, 1e3);
        let x: Vec<f64> = y.iter().zip(&step).map(|(a, b)| a + b).collect();
        let alpha = scale_range.sample(&mut rng);

        let fy = model.eval(&y)?;
        let fx = model.eval(&x)?;

        for (point, f) in [(&y, &fy), (&x, &fx)] {
            if let Some((c, v)) = f.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v > 0.0)) {
                return Ok(CheckReport::fail(
                    trial,
                    Violation {
                        property: Property::Positivity,
                        coordinate: Some(c),
                        x: point.clone(),
                        y: None,
                        alpha: None,
                        lhs: *v,
                        rhs: 0.0,
                    },
                ));
            }
        }

        for c in 0..k {
            if fy[c] - fx[c] > STRICT_MARGIN * fx[c] {
                return Ok(CheckReport::fail(
                    trial,
                    Violation {
                        property: Property::Monotonicity,
                        coordinate: Some(c),
                        x,
                        y: Some(y),
                        alpha: None,
                        lhs: fy[c],
                        rhs: fx[c],
                    },
                ));
            }
        }

        for (point, f) in [(&y, &fy), (&x, &fx)] {
            let scaled: Vec<f64> = point.iter().map(|v| alpha * v).collect();
            let fs = model.eval(&scaled)?;
            for c in 0..k {
                let bound = alpha * f[c];
                if fs[c] - bound > STRICT_MARGIN * bound {
                    return Ok(CheckReport::fail(
                        trial,
                        Violation {
                            property: Property::Scalability,
                            coordinate: Some(c),
                            x: point.clone(),
                            y: None,
                            alpha: Some(alpha),
                            lhs: fs[c],
                            rhs: bound,
                        },
                    ));
                }
            }
        }
    }
    Ok(CheckReport::pass(trials))
}
