//! The combiner-optimized interference function of the cell-less uplink.
//!
//! For LSFD coefficients `a` the use-and-then-forget SINR of user `k` is
//!
//! ```text
//!             p_k |aᴴ b|²
//! SINR = ─────────────────────,   Ψ(p) = Σ_j p_j G_kj − p_k b bᴴ + S_k.
//!            aᴴ Ψ(p) a
//! ```
//!
//! Its supremum over `a` is `p_k bᴴ Ψ(p)⁻¹ b`, attained at `a = Ψ(p)⁻¹ b`,
//! so `u_k(p) = p_k / f_k(p)` with `f_k(p) = 1 / (bᴴ Ψ(p)⁻¹ b)`. As an
//! infimum of functions affine in `p`, `f_k` is concave and positive, hence
//! a standard interference function.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::moments::UserMoments;
use crate::error::{check_dim, Error, Result};
use crate::interference::{eval_utilities, InterferenceModel};
use crate::vector::PowerVector;

fn interference_matrix(m: &UserMoments, p: &[f64]) -> Result<DMatrix<Complex64>> {
    check_dim(m.cross.len(), p.len())?;
    let size = m.mean_gain.len();
    let mut psi = DMatrix::from_diagonal(&m.combiner_energy.map(|s| Complex64::new(s, 0.0)));
    for (g, &pj) in m.cross.iter().zip(p) {
        if pj != 0.0 {
            psi += g * Complex64::new(pj, 0.0);
        }
    }
    let pk = p[m.user];
    if pk != 0.0 {
        psi -= &m.mean_gain * m.mean_gain.adjoint() * Complex64::new(pk, 0.0);
    }
    debug_assert_eq!(psi.nrows(), size);
    Ok(psi)
}

fn condition_estimate(psi: &DMatrix<Complex64>) -> f64 {
    let eig = psi.clone().symmetric_eigenvalues();
    let (lo, hi) = (eig.min(), eig.max());
    if lo <= 0.0 {
        f64::INFINITY
    } else {
        hi / lo
    }
}

/// Solves `Ψ x = b` through a Cholesky factorization of the Jacobi-scaled
/// matrix `D Ψ D`, `D = diag(Ψ)^{-1/2}`. Returns `x` and `bᴴ x`.
fn solve_scaled(m: &UserMoments, psi: &DMatrix<Complex64>) -> Result<(DVector<Complex64>, f64)> {
    let scale: DVector<f64> = psi.diagonal().map(|d| 1.0 / d.re.sqrt());
    let not_pd = || Error::NotPositiveDefinite {
        user: m.user,
        condition: condition_estimate(psi),
    };
    if scale.iter().any(|s| !s.is_finite()) {
        return Err(not_pd());
    }
    let n = psi.nrows();
    let scaled = DMatrix::from_fn(n, n, |r, c| psi[(r, c)] * (scale[r] * scale[c]));
    let chol = scaled.cholesky().ok_or_else(not_pd)?;
    let rhs = DVector::from_fn(n, |r, _| m.mean_gain[r] * scale[r]);
    let y = chol.solve(&rhs);
    let x = DVector::from_fn(n, |r, _| y[r] * scale[r]);
    let q = rhs.dotc(&y).re;
    if !(q.is_finite() && q > 0.0) {
        return Err(not_pd());
    }
    Ok((x, q))
}

/// `f_k(p) = 1 / (bᴴ Ψ(p)⁻¹ b)`.
pub fn eval_fk(moments: &UserMoments, p: &[f64]) -> Result<f64> {
    let psi = interference_matrix(moments, p)?;
    let (_, q) = solve_scaled(moments, &psi)?;
    Ok(1.0 / q)
}

/// The SINR-maximizing LSFD vector `a = Ψ(p)⁻¹ b`.
pub fn optimal_lsfd(moments: &UserMoments, p: &[f64]) -> Result<DVector<Complex64>> {
    let psi = interference_matrix(moments, p)?;
    Ok(solve_scaled(moments, &psi)?.0)
}

/// `aᴴ Ψ(p) a / |aᴴ b|²`: the interference-plus-noise to gain ratio of a
/// given LSFD vector. Never below `f_k(p)`.
pub fn lsfd_quotient(moments: &UserMoments, p: &[f64], a: &DVector<Complex64>) -> Result<f64> {
    let psi = interference_matrix(moments, p)?;
    check_dim(psi.nrows(), a.len())?;
    let num = a.dotc(&(&psi * a)).re;
    let den = a.dotc(&moments.mean_gain).norm_sqr();
    Ok(num / den)
}

/// The cell-less uplink as an [`InterferenceModel`].
#[derive(Debug, Clone, PartialEq)]
pub struct CellLessModel {
    moments: Vec<UserMoments>,
}

impl CellLessModel {
    pub fn new(moments: Vec<UserMoments>) -> Result<Self> {
        let k = moments.len();
        if k == 0 {
            return Err(crate::error::invalid("moments", "at least one user is required"));
        }
        for (i, m) in moments.iter().enumerate() {
            if m.user != i {
                return Err(crate::error::invalid("moments", "users must be listed in order"));
            }
            check_dim(k, m.cross.len())?;
            let size = m.mean_gain.len();
            check_dim(size, m.combiner_energy.len())?;
            if m.cross.iter().any(|g| g.nrows() != size || g.ncols() != size) {
                return Err(crate::error::invalid(
                    "moments",
                    "moment matrices must match the cluster size",
                ));
            }
            if m.combiner_energy.iter().any(|s| !(*s > 0.0)) {
                return Err(crate::error::invalid("moments", "combiner energies must be positive"));
            }
            let magnitude = m.mean_gain.norm();
            if !(magnitude > 0.0) {
                return Err(Error::VanishingGain { user: i, magnitude });
            }
        }
        Ok(Self { moments })
    }

    pub fn moments(&self) -> &[UserMoments] {
        &self.moments
    }
}

impl InterferenceModel for CellLessModel {
    fn dim(&self) -> usize {
        self.moments.len()
    }

    fn eval(&self, p: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), p.len())?;
        self.moments.iter().map(|m| eval_fk(m, p)).collect()
    }
}

/// Achievable rates `log2(1 + u_k(p))` in bits/s/Hz.
pub fn eval_rates(model: &CellLessModel, p: &PowerVector) -> Result<Vec<f64>> {
    Ok(eval_utilities(model, p)?.rates())
}
