//! Power limit `P∞ = lim P^k` by three independent routes: the out-forest
//! trace recursion, the resolvent `(I + τL)⁻¹` as `τ → ∞`, and repeated
//! squaring.

use alloc::vec::Vec;

use crate::digraph::KirchhoffMatrix;
use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, StochasticMatrix, ToleranceConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimitMethod {
    /// Trace recursion; `steps = n - ν`.
    Recursive { steps: usize },
    /// Richardson-extrapolated resolvent; `tau` is the largest τ used.
    Resolvent { tau: f64 },
    /// Repeated squaring of `P`.
    Iterative { squarings: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerLimit {
    pub matrix: DenseMatrix,
    pub method: LimitMethod,
}

/// `J_k = I - k L J_{k-1} / tr(L J_{k-1})` for `k = 1..n-ν`, `J_0 = I`.
/// The last iterate is the normalized matrix of maximum out-forests.
pub fn power_limit_recursive(
    l: &KirchhoffMatrix,
    nu: usize,
    tol: &ToleranceConfig,
) -> Result<PowerLimit> {
    let n = l.n();
    let lm = l.as_matrix();
    let identity = DenseMatrix::identity(n);
    let steps = n.saturating_sub(nu);
    let mut j = identity.clone();
    for k in 1..=steps {
        let lj = lm.matmul(&j);
        let tr = lj.trace();
        if tr.abs() < tol.zero_tol {
            return Err(Error::ZeroTrace { step: k });
        }
        j = identity.sub(&lj.scale(k as f64 / tr));
    }
    let residual = lm.matmul(&j).norm_inf();
    if residual > tol.conv_tol {
        return Err(Error::ResidualTooLarge { residual });
    }
    Ok(PowerLimit {
        matrix: j,
        method: LimitMethod::Recursive { steps },
    })
}

/// `(I + τL)⁻¹` for a single `τ > 0`.
pub fn resolvent(l: &KirchhoffMatrix, tau: f64, tol: &ToleranceConfig) -> Result<DenseMatrix> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidTolerance);
    }
    let n = l.n();
    DenseMatrix::identity(n)
        .add(&l.as_matrix().scale(tau))
        .invert(tol)
}

/// Limit of the resolvent as `τ → ∞`.
///
/// `(I + τL)⁻¹` is analytic in `1/τ` around 0 (the index of `L` is 1), so the
/// sequence at `τ = 1, 2, 4, ...` is fed through a Richardson tableau. Stops
/// when successive diagonal entries of the tableau differ by less than
/// `conv_tol`.
pub fn power_limit_resolvent(l: &KirchhoffMatrix, tol: &ToleranceConfig) -> Result<PowerLimit> {
    // Beyond ~2^40 the resolvent is dominated by roundoff.
    const MAX_DOUBLINGS: usize = 40;
    let limit = tol.max_iter.min(MAX_DOUBLINGS);
    let mut tau = 1.0;
    let mut prev_row: Vec<DenseMatrix> = Vec::new();
    let mut last_diag: Option<DenseMatrix> = None;
    for step in 0..limit {
        let mut row = Vec::with_capacity(step + 1);
        row.push(resolvent(l, tau, tol)?);
        for m in 1..=step {
            // error terms in h = 1/τ; halving h each step
            let factor = (1u64 << m) as f64;
            let improved = row[m - 1]
                .scale(factor)
                .sub(&prev_row[m - 1])
                .scale(1.0 / (factor - 1.0));
            row.push(improved);
        }
        let diag = row[step].clone();
        if let Some(prev) = &last_diag {
            if diag.max_abs_diff(prev) < tol.conv_tol {
                return Ok(PowerLimit {
                    matrix: diag,
                    method: LimitMethod::Resolvent { tau },
                });
            }
        }
        last_diag = Some(diag);
        prev_row = row;
        tau *= 2.0;
    }
    Err(Error::NoConvergence { iterations: limit })
}

/// Repeated squaring `A ← A²` starting from `P`, until `A` is idempotent
/// and fixed by `P`. A periodic final class keeps `P·A ≠ A` forever, which is
/// reported as `NoConvergence`.
pub fn power_limit_iterative(p: &StochasticMatrix, tol: &ToleranceConfig) -> Result<PowerLimit> {
    // Past P^(2^40) roundoff shrinks the unit-modulus eigenvalues of a
    // periodic class enough for the powers to look convergent.
    const MAX_SQUARINGS: usize = 40;
    let limit = tol.max_iter.min(MAX_SQUARINGS);
    let pm = p.as_matrix();
    let mut a = pm.clone();
    for k in 1..=limit {
        let sq = a.matmul(&a);
        let settled = sq.max_abs_diff(&a) < tol.conv_tol;
        a = sq;
        if settled {
            if pm.matmul(&a).max_abs_diff(&a) < tol.conv_tol {
                return Ok(PowerLimit {
                    matrix: a,
                    method: LimitMethod::Iterative { squarings: k },
                });
            }
            return Err(Error::NoConvergence { iterations: k });
        }
    }
    Err(Error::NoConvergence { iterations: limit })
}

/// Stationary vector of final class `class` read from a row of the limit.
pub fn class_stationary(limit: &DenseMatrix, class: &[usize]) -> Vec<f64> {
    let r = class[0];
    class.iter().map(|&c| limit[(r, c)]).collect()
}
