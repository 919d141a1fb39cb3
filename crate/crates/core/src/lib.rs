//! Fair and efficient resource allocation with standard interference functions.
//!
//! Users' utilities have the form `u_k(p) = p_k / f_k(p)` where `f` is a
//! standard interference mapping, and feasible allocations satisfy a single
//! monotone-norm budget `‖p‖ ≤ p̄`. Under these assumptions:
//!
//! * the weighted max-min problem has a unique solution given by the fixed
//!   point of `p ↦ (p̄ / ‖T(p)‖) T(p)` ([`solver`]);
//! * an allocation is weakly Pareto efficient if and only if `‖p‖ = p̄`, and
//!   every such allocation is max-min fair for the weights `ω_k = u_k(p)`
//!   ([`pareto`]);
//! * the cell-less uplink with optimized LSFD combining fits the framework
//!   ([`cellless`]).
//!
//! ```
//! use fairpower::{AffineModel, MonotoneNorm, SolverOptions, WeightVector, solve_weighted_maxmin};
//!
//! let model = AffineModel::new(vec![vec![0.0, 0.1], vec![0.2, 0.0]], vec![1.0, 1.0])?;
//! let norm = MonotoneNorm::linf(10.0)?;
//! let sol = solve_weighted_maxmin(&model, &WeightVector::uniform(2), &norm, &SolverOptions::default())?;
//! assert!((sol.c_star - (17f64.sqrt() - 1.0) / 0.8).abs() < 1e-9);
//! # Ok::<(), fairpower::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cellless;
pub mod check;
mod error;
pub mod interference;
pub mod norm;
pub mod pareto;
mod sampling;
pub mod solver;
mod vector;

pub use check::{CheckReport, Property, Violation};
pub use error::{Error, Result};
pub use interference::{
    check_standard_interference, eval_utilities, scale_by_weights, AffineModel, FnModel, InterferenceModel, Reduced,
    ScaleRange, Weighted,
};
pub use norm::{check_monotone_norm, MonotoneNorm, Norm, NormKind};
pub use pareto::{
    certify_boundary, dominance_compare, find_dominating_point, sample_boundary, search_dominator, BoundaryCertificate,
    BoundarySample, Dominance, BOUNDARY_TOL,
};
pub use solver::{
    extract_weights, feasibility_certificate, normalized_map, solve_weighted_maxmin, MaxMinSolution, SolverOptions,
};
pub use vector::{PowerVector, UtilityProfile, WeightVector};
