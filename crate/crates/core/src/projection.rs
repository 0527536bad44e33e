//! Regularized power limit `P̂∞ = P∞ S`, the weight vector `α`, and the
//! preequalize-then-iterate procedure.

use alloc::vec::Vec;

use crate::digraph::{
    require_proper, structure, BicomponentDecomposition, CommunicationDigraph, KirchhoffMatrix,
    SpectralClass,
};
use crate::error::{Error, Result};
use crate::limits::{class_stationary, power_limit_recursive, PowerLimit};
use crate::matrix::{dot, max_abs_diff_vec, DenseMatrix, StochasticMatrix, ToleranceConfig};
use crate::oracle::{TreeWeights, DEFAULT_CLASS_CAP};
use crate::region::{
    build_region_basis, build_xz, nonorthogonal_projection_tilde, orthogonal_projection_via_pinv,
    orthogonal_projection_via_z, z_inverse, NonbasicFill, OrthogonalProjector, RegionBasis,
    TildeProjector, ZConstruction,
};

/// Where the out-tree totals behind `β` came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeSource {
    Enumerated,
    Cofactors,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsensusAnalysis {
    pub p: StochasticMatrix,
    pub graph: CommunicationDigraph,
    pub kirchhoff: KirchhoffMatrix,
    pub decomposition: BicomponentDecomposition,
    pub spectral: SpectralClass,
    pub p_inf: PowerLimit,
    pub basis: RegionBasis,
    pub s: OrthogonalProjector,
    pub s_tilde: TildeProjector,
    pub xz: ZConstruction,
    /// `Z⁻¹` in Frobenius order.
    pub z_inv: DenseMatrix,
    /// `P̂∞ = P∞ S`.
    pub p_hat: DenseMatrix,
    /// `α`, read from the first row of `P̂∞`.
    pub alpha: Vec<f64>,
    /// `α` read from the first row of `Z⁻¹`, in original order.
    pub alpha_from_z: Vec<f64>,
    /// Stationary vector of each final class, indexed like its vertices.
    pub stationary: Vec<Vec<f64>>,
    pub trees: TreeWeights,
    pub tree_source: TreeSource,
    pub beta: Vec<f64>,
}

impl ConsensusAnalysis {
    pub fn n(&self) -> usize {
        self.p.n()
    }
}

pub fn analyze(p: &StochasticMatrix, tol: &ToleranceConfig) -> Result<ConsensusAnalysis> {
    analyze_with_cap(p, tol, DEFAULT_CLASS_CAP)
}

/// As [`analyze`], enumerating out-trees only for final classes of at most
/// `class_cap` vertices; larger systems fall back to cofactors.
pub fn analyze_with_cap(
    p: &StochasticMatrix,
    tol: &ToleranceConfig,
    class_cap: usize,
) -> Result<ConsensusAnalysis> {
    tol.validate()?;
    let (g, l, d, spectral) = structure(p, tol)?;
    require_proper(&d, &spectral)?;

    let p_inf = power_limit_recursive(&l, d.nu(), tol)?;
    let basis = build_region_basis(&l, &d, tol)?;
    let s = orthogonal_projection_via_pinv(&basis, &d, tol)?;
    let xz = build_xz(&l, &d, &p_inf, NonbasicFill::default(), tol)?;
    let s_via_z = orthogonal_projection_via_z(&xz, &d, tol)?;
    let dev = s.s.max_abs_diff(&s_via_z.s);
    if dev > tol.agreement() {
        return Err(Error::CrossCheckFailed {
            check: "projector routes",
            deviation: dev,
        });
    }
    let s_tilde = nonorthogonal_projection_tilde(p, &s, &d, tol);

    let p_hat = p_inf.matrix.matmul(&s.s);
    let alpha = p_hat.row(0).to_vec();
    let z_inv = z_inverse(&xz, tol)?;
    let alpha_from_z = d.unpermute_vec(z_inv.row(0));
    let dev = max_abs_diff_vec(&alpha, &alpha_from_z);
    if dev > tol.agreement() {
        return Err(Error::CrossCheckFailed {
            check: "alpha routes",
            deviation: dev,
        });
    }

    let stationary = d
        .basic_classes()
        .iter()
        .map(|c| class_stationary(&p_inf.matrix, c))
        .collect();
    let fits = d.basic_classes().iter().all(|c| c.len() <= class_cap);
    let (trees, tree_source) = if fits {
        (
            TreeWeights::enumerate(&g, &l, &d, class_cap)?,
            TreeSource::Enumerated,
        )
    } else {
        (TreeWeights::from_cofactors(&l, &d), TreeSource::Cofactors)
    };
    let beta = trees.betas();

    Ok(ConsensusAnalysis {
        p: p.clone(),
        graph: g,
        kirchhoff: l,
        decomposition: d,
        spectral,
        p_inf,
        basis,
        s,
        s_tilde,
        xz,
        z_inv,
        p_hat,
        alpha,
        alpha_from_z,
        stationary,
        trees,
        tree_source,
        beta,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PreequalizationMode {
    #[default]
    Orthogonal,
    Tilde,
}

fn check_len(a: &ConsensusAnalysis, s0: &[f64]) -> Result<()> {
    if s0.len() != a.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: s0.len(),
        });
    }
    Ok(())
}

/// `S s0` or `S̃ s0`.
pub fn preequalize(
    a: &ConsensusAnalysis,
    s0: &[f64],
    mode: PreequalizationMode,
) -> Result<Vec<f64>> {
    check_len(a, s0)?;
    Ok(match mode {
        PreequalizationMode::Orthogonal => a.s.apply(s0),
        PreequalizationMode::Tilde => a.s_tilde.s_tilde.mul_vec(s0),
    })
}

/// `s̄ = αᵀ s0`.
pub fn consensus_value(a: &ConsensusAnalysis, s0: &[f64]) -> Result<f64> {
    check_len(a, s0)?;
    Ok(dot(&a.alpha, s0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct OpinionTrajectory {
    pub initial: Vec<f64>,
    pub preequalized: Vec<f64>,
    /// `s(0)` (preequalized) through `s(converged_at)`.
    pub states: Vec<Vec<f64>>,
    pub consensus: f64,
    pub converged_at: usize,
}

fn spread(v: &[f64]) -> f64 {
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = v.iter().copied().fold(f64::INFINITY, f64::min);
    max - min
}

/// Preequalizes `s0`, then iterates `s(k) = P s(k-1)` until the spread
/// `max - min` drops below `conv_tol`. The consensus is the mean of the
/// final state.
pub fn simulate(
    a: &ConsensusAnalysis,
    s0: &[f64],
    mode: PreequalizationMode,
    tol: &ToleranceConfig,
) -> Result<OpinionTrajectory> {
    let pre = preequalize(a, s0, mode)?;
    let pm = a.p.as_matrix();
    let mut states = Vec::new();
    states.push(pre.clone());
    for k in 0..=tol.max_iter {
        let cur = &states[k];
        if spread(cur) < tol.conv_tol {
            let consensus = cur.iter().sum::<f64>() / cur.len() as f64;
            return Ok(OpinionTrajectory {
                initial: s0.to_vec(),
                preequalized: pre,
                states,
                consensus,
                converged_at: k,
            });
        }
        if k < tol.max_iter {
            let next = pm.mul_vec(cur);
            states.push(next);
        }
    }
    Err(Error::NoConvergence {
        iterations: tol.max_iter,
    })
}

/// Plain DeGroot iteration without preequalization. Runs until successive
/// states differ by less than `conv_tol` and returns the final state, which
/// need not be a consensus.
pub fn degroot_limit(p: &StochasticMatrix, s0: &[f64], tol: &ToleranceConfig) -> Result<Vec<f64>> {
    let pm = p.as_matrix();
    if s0.len() != pm.rows() {
        return Err(Error::DimensionMismatch {
            expected: pm.rows(),
            found: s0.len(),
        });
    }
    let mut cur = s0.to_vec();
    for _ in 0..tol.max_iter {
        let next = pm.mul_vec(&cur);
        let done = max_abs_diff_vec(&next, &cur) < tol.conv_tol;
        cur = next;
        if done {
            return Ok(cur);
        }
    }
    Err(Error::NoConvergence {
        iterations: tol.max_iter,
    })
}

/// Spread `max - min` of an opinion vector.
pub fn opinion_spread(v: &[f64]) -> f64 {
    spread(v)
}
