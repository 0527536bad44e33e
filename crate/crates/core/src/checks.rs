//! Self-consistency checks over a finished analysis. Each check compares two
//! independently computed quantities and records the largest deviation.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::limits::{power_limit_iterative, power_limit_resolvent};
use crate::matrix::{max_abs_diff_vec, DenseMatrix, ToleranceConfig};
use crate::oracle::{maximum_out_forest_matrix, stationary_via_trees, DEFAULT_FOREST_CAP};
use crate::projection::{simulate, ConsensusAnalysis, PreequalizationMode};
use crate::region::{orthogonal_projection_via_z, build_xz, NonbasicFill};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub deviation: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn new(name: &'static str, deviation: f64, tolerance: f64) -> Self {
        Check {
            name,
            passed: deviation.is_finite() && deviation <= tolerance,
            deviation,
            tolerance,
        }
    }

    /// A check that could not run because a route errored.
    pub fn failed(name: &'static str, tolerance: f64) -> Self {
        Check {
            name,
            passed: false,
            deviation: f64::INFINITY,
            tolerance,
        }
    }
}

/// Largest `|row sum|` over rows `2..n` together with `|first row sum - 1|`.
pub fn inverse_row_sum_deviation(inverse: &DenseMatrix) -> f64 {
    inverse
        .row_sums()
        .iter()
        .enumerate()
        .map(|(r, s)| if r == 0 { (s - 1.0).abs() } else { s.abs() })
        .fold(0.0, f64::max)
}

fn route<T>(name: &'static str, tol: f64, r: Result<T>, f: impl FnOnce(T) -> f64) -> Check {
    match r {
        Ok(v) => Check::new(name, f(v), tol),
        Err(_) => Check::failed(name, tol),
    }
}

/// Runs every cross-check that applies to `a`. Oracle checks are skipped
/// when the system exceeds `forest_cap` vertices.
pub fn run_checks(a: &ConsensusAnalysis, tol: &ToleranceConfig, forest_cap: usize) -> Vec<Check> {
    let agree = tol.agreement();
    let d = &a.decomposition;
    let p_inf = &a.p_inf.matrix;
    let mut out = Vec::new();

    out.push(route(
        "power limit: recursion vs resolvent",
        agree,
        power_limit_resolvent(&a.kirchhoff, tol),
        |r| r.matrix.max_abs_diff(p_inf),
    ));
    out.push(route(
        "power limit: recursion vs squaring",
        agree,
        power_limit_iterative(&a.p, tol),
        |r| r.matrix.max_abs_diff(p_inf),
    ));
    if a.n() <= forest_cap {
        out.push(route(
            "power limit: recursion vs out-forest enumeration",
            agree,
            maximum_out_forest_matrix(&a.graph, d, forest_cap),
            |f| f.j_tilde.max_abs_diff(p_inf),
        ));
    }

    out.push(route(
        "projector: pseudo-inverse vs X Z^-1",
        agree,
        orthogonal_projection_via_z(&a.xz, d, tol),
        |s| s.s.max_abs_diff(&a.s.s),
    ));
    out.push(route(
        "projector: G copied from L gives the same S",
        agree,
        build_xz(&a.kirchhoff, d, &a.p_inf, NonbasicFill::CopiedFromKirchhoff, tol)
            .and_then(|xz| orthogonal_projection_via_z(&xz, d, tol)),
        |s| s.s.max_abs_diff(&a.s.s),
    ));
    out.push(Check::new(
        "projector: symmetric",
        a.s.s.max_abs_diff(&a.s.s.transpose()),
        agree,
    ));
    out.push(Check::new(
        "projector: idempotent",
        a.s.s.matmul(&a.s.s).max_abs_diff(&a.s.s),
        agree,
    ));
    let ones = vec![1.0; a.n()];
    out.push(Check::new(
        "projector: fixes the all-ones vector",
        max_abs_diff_vec(&a.s.apply(&ones), &ones),
        agree,
    ));

    out.push(Check::new(
        "alpha: first row of P^ vs first row of Z^-1",
        max_abs_diff_vec(&a.alpha, &a.alpha_from_z),
        agree,
    ));
    let row_spread = (0..a.n())
        .map(|r| max_abs_diff_vec(a.p_hat.row(r), &a.alpha))
        .fold(0.0, f64::max);
    out.push(Check::new("alpha: all rows of P^ equal", row_spread, agree));
    out.push(Check::new(
        "alpha: sums to one",
        (a.alpha.iter().sum::<f64>() - 1.0).abs(),
        agree,
    ));
    out.push(Check::new(
        "alpha: stationary for P",
        max_abs_diff_vec(&a.p.as_matrix().vec_mul(&a.alpha), &a.alpha),
        agree,
    ));
    let nonbasic = d
        .nonbasic_vertices()
        .iter()
        .map(|&v| a.alpha[v].abs())
        .fold(0.0, f64::max);
    out.push(Check::new("alpha: zero on nonbasic agents", nonbasic, agree));
    out.push(Check::new(
        "alpha: ratio law with beta weights",
        ratio_law_deviation(a),
        agree,
    ));
    out.push(Check::new(
        "Z^-1: row sums (1, 0, ..., 0)",
        inverse_row_sum_deviation(&a.z_inv),
        agree,
    ));

    let mut tree_dev = 0.0f64;
    let mut tree_ok = true;
    for (class, pi) in d.basic_classes().iter().zip(&a.stationary) {
        match stationary_via_trees(&a.graph, class, crate::oracle::DEFAULT_CLASS_CAP) {
            Ok(t) => tree_dev = tree_dev.max(max_abs_diff_vec(&t, pi)),
            Err(Error::TooLarge { .. }) => {}
            Err(_) => tree_ok = false,
        }
    }
    out.push(if tree_ok {
        Check::new("stationary vectors: trees vs power limit", tree_dev, agree)
    } else {
        Check::failed("stationary vectors: trees vs power limit", agree)
    });
    let w_dev = a
        .trees
        .classes
        .iter()
        .map(|c| {
            let sq: f64 = c.per_root.iter().map(|t| t * t).sum();
            (c.w - sq / c.total).abs() / c.w.abs().max(1.0)
        })
        .fold(0.0, f64::max);
    out.push(Check::new("W: determinant vs tree sums", w_dev, agree));

    let tilde_dev = p_inf
        .matmul(&a.s_tilde.s_tilde)
        .max_abs_diff(&a.p_hat);
    out.push(Check::new("S~: same regularized limit as S", tilde_dev, agree));

    let probe: Vec<f64> = (1..=a.n()).map(|k| k as f64).collect();
    let expected = crate::matrix::dot(&a.alpha, &probe);
    out.push(route(
        "simulation: consensus equals alpha^T s(0)",
        agree,
        simulate(a, &probe, PreequalizationMode::Orthogonal, tol),
        |t| (t.consensus - expected).abs(),
    ));
    out
}

/// Largest `|α_g - w_{c(g)} π_g|` where `w_i = β_i / Σβ`.
pub fn ratio_law_deviation(a: &ConsensusAnalysis) -> f64 {
    let total: f64 = a.beta.iter().sum();
    let mut dev = 0.0f64;
    for ((class, pi), beta) in a
        .decomposition
        .basic_classes()
        .iter()
        .zip(&a.stationary)
        .zip(&a.beta)
    {
        for (&v, &p) in class.iter().zip(pi) {
            dev = dev.max((a.alpha[v] - beta / total * p).abs());
        }
    }
    dev
}

/// Default cap for the forest oracle inside [`run_checks`].
pub const FOREST_CAP: usize = DEFAULT_FOREST_CAP;
