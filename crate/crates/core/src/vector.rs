//! Validated vector newtypes shared by every module.

use std::ops::Deref;

use serde::Serialize;

use crate::error::{invalid, Result};

/// Nonnegative vector of transmit powers in linear watts, one entry per user.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct PowerVector(Vec<f64>);

impl PowerVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("power vector", "at least one user is required"));
        }
        if let Some((k, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < 0.0) {
            return Err(invalid(
                "power vector",
                format!("coordinate {k} is {v}, expected a finite nonnegative value"),
            ));
        }
        Ok(Self(values))
    }

    pub fn zeros(k: usize) -> Self {
        Self(vec![0.0; k.max(1)])
    }

    /// Callers guarantee every coordinate is finite and nonnegative.
    pub(crate) fn from_vec_unchecked(values: Vec<f64>) -> Self {
        debug_assert!(values.iter().all(|v| v.is_finite() && *v >= 0.0));
        Self(values)
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.0.iter().all(|v| *v > 0.0)
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl Deref for PowerVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Strictly positive per-user priorities of the weighted max-min problem.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("weights", "at least one weight is required"));
        }
        if let Some((k, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite() || **v <= 0.0) {
            return Err(invalid(
                "weights",
                format!("weight {k} is {v}, expected a finite positive value"),
            ));
        }
        Ok(Self(values))
    }

    pub fn uniform(k: usize) -> Self {
        Self(vec![1.0; k.max(1)])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl Deref for WeightVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Per-user utilities `u_k(p) = p_k / f_k(p)` (SINR values, unitless).
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct UtilityProfile(Vec<f64>);

impl UtilityProfile {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// `log2(1 + u_k)` for every user.
    pub fn rates(&self) -> Vec<f64> {
        self.0.iter().map(|u| u.ln_1p() / std::f64::consts::LN_2).collect()
    }
}

impl Deref for UtilityProfile {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}
