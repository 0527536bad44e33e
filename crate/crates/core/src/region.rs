//! The region of convergence to consensus `T_P = R(L) ⊕ span{1}` and the
//! projectors onto it.

use alloc::vec;
use alloc::vec::Vec;

use crate::digraph::{BicomponentDecomposition, KirchhoffMatrix};
use crate::error::{Error, Result};
use crate::limits::{class_stationary, PowerLimit};
use crate::matrix::{max_abs_diff_vec, DenseMatrix, StochasticMatrix, ToleranceConfig};

/// Full-column-rank matrix whose columns span `T_P`: the all-ones column
/// followed by the columns of `L` that remain after deleting one column per
/// final class.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionBasis {
    pub u: DenseMatrix,
    /// Deleted vertex of each final class (its lowest-numbered vertex).
    pub deleted_columns: Vec<usize>,
}

impl RegionBasis {
    pub fn dimension(&self) -> usize {
        self.u.cols()
    }
}

pub fn build_region_basis(
    l: &KirchhoffMatrix,
    d: &BicomponentDecomposition,
    tol: &ToleranceConfig,
) -> Result<RegionBasis> {
    let n = l.n();
    let deleted: Vec<usize> = d.basic_classes().iter().map(|c| c[0]).collect();
    let kept: Vec<usize> = (0..n).filter(|v| !deleted.contains(v)).collect();
    let expected = n - d.nu() + 1;
    let mut u = DenseMatrix::zeros(n, expected);
    u.set_column(0, &vec![1.0; n]);
    for (k, &c) in kept.iter().enumerate() {
        u.set_column(k + 1, &l.as_matrix().column(c));
    }
    let rank = u.rank(tol);
    if rank != expected {
        return Err(Error::RankAssertionFailed { rank, expected });
    }
    Ok(RegionBasis {
        u,
        deleted_columns: deleted,
    })
}

/// Orthogonal projector `S` onto `T_P`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalProjector {
    pub s: DenseMatrix,
    /// `S_B`: rows and columns of the basic vertices in Frobenius order.
    pub basic_block: DenseMatrix,
}

impl OrthogonalProjector {
    fn from_matrix(s: DenseMatrix, d: &BicomponentDecomposition) -> Self {
        let basic = d.basic_vertices();
        let basic_block = s.select(basic, basic);
        OrthogonalProjector { s, basic_block }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.s.mul_vec(x)
    }
}

/// True iff `s0` already lies in `T_P`, i.e. `‖S s0 - s0‖∞ ≤ conv_tol`.
pub fn membership(s0: &[f64], proj: &OrthogonalProjector, tol: &ToleranceConfig) -> Result<bool> {
    let n = proj.s.rows();
    if s0.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: s0.len(),
        });
    }
    Ok(max_abs_diff_vec(&proj.apply(s0), s0) <= tol.conv_tol)
}

/// `S = U (UᵀU)⁻¹ Uᵀ`.
pub fn orthogonal_projection_via_pinv(
    basis: &RegionBasis,
    d: &BicomponentDecomposition,
    tol: &ToleranceConfig,
) -> Result<OrthogonalProjector> {
    let pinv = basis.u.pseudo_inverse_full_column_rank(tol)?;
    let s = basis.u.matmul(&pinv);
    let agreement = tol.agreement();
    if !s.is_symmetric(agreement) {
        return Err(Error::CrossCheckFailed {
            check: "projector symmetry",
            deviation: s.max_abs_diff(&s.transpose()),
        });
    }
    let idem = s.matmul(&s).max_abs_diff(&s);
    if idem > agreement {
        return Err(Error::CrossCheckFailed {
            check: "projector idempotency",
            deviation: idem,
        });
    }
    Ok(OrthogonalProjector::from_matrix(s, d))
}

/// How the nonbasic-rows × basic-columns block `G` of `X` and `Z` is filled.
/// Any fill yields the same `S = X Z⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NonbasicFill {
    /// Column replacements (`1`, zero, `q^i`) run over whole columns, so the
    /// first column of `Z` is all ones and every row of `Z⁻¹` but the first
    /// sums to zero.
    #[default]
    WholeColumns,
    /// `G` copied verbatim from `L`; replacements touch basic rows only.
    CopiedFromKirchhoff,
}

/// The matrices `X` and `Z` with `S = X Z⁻¹`, stored in Frobenius order.
#[derive(Debug, Clone, PartialEq)]
pub struct ZConstruction {
    pub x: DenseMatrix,
    pub z: DenseMatrix,
    /// `q^i = π̃^{i-1} - π̃^i` for final classes `i = 2..ν` (Frobenius order).
    pub q_vectors: Vec<Vec<f64>>,
    /// Stationary vector of each final class padded with zeros to length `n`
    /// (Frobenius order).
    pub pi_tilde: Vec<Vec<f64>>,
    /// Block `G` of `X` and `Z` (nonbasic rows × basic columns); `None` when
    /// every agent is basic.
    pub g_block: Option<DenseMatrix>,
    /// `order[k]` is the original vertex at Frobenius position `k`.
    pub order: Vec<usize>,
}

pub fn build_xz(
    l: &KirchhoffMatrix,
    d: &BicomponentDecomposition,
    limit: &PowerLimit,
    fill: NonbasicFill,
    tol: &ToleranceConfig,
) -> Result<ZConstruction> {
    let n = l.n();
    let b = d.b();
    let lp = d.permute(l.as_matrix());
    let touched_rows = match fill {
        NonbasicFill::WholeColumns => n,
        NonbasicFill::CopiedFromKirchhoff => b,
    };

    let mut pi_tilde = Vec::with_capacity(d.nu());
    let mut first_cols = Vec::with_capacity(d.nu());
    for class in d.basic_classes() {
        let pi = class_stationary(&limit.matrix, class);
        let mut padded = vec![0.0; n];
        for (&v, &w) in class.iter().zip(&pi) {
            padded[d.position(v)] = w;
        }
        pi_tilde.push(padded);
        first_cols.push(d.position(class[0]));
    }
    let q_vectors: Vec<Vec<f64>> = (1..d.nu())
        .map(|i| {
            pi_tilde[i - 1]
                .iter()
                .zip(&pi_tilde[i])
                .map(|(a, b)| a - b)
                .collect()
        })
        .collect();

    let mut x = lp.clone();
    let mut z = lp;
    for r in 0..touched_rows {
        x[(r, first_cols[0])] = 1.0;
        z[(r, first_cols[0])] = 1.0;
        for i in 1..d.nu() {
            x[(r, first_cols[i])] = 0.0;
            z[(r, first_cols[i])] = q_vectors[i - 1][r];
        }
    }

    if z.invert(tol).is_err() {
        return Err(Error::SingularZ);
    }
    let g_block = (b < n).then(|| {
        let rows: Vec<usize> = (b..n).collect();
        let cols: Vec<usize> = (0..b).collect();
        x.select(&rows, &cols)
    });
    Ok(ZConstruction {
        x,
        z,
        q_vectors,
        pi_tilde,
        g_block,
        order: d.order().to_vec(),
    })
}

/// `Z⁻¹`, in Frobenius order.
pub fn z_inverse(zc: &ZConstruction, tol: &ToleranceConfig) -> Result<DenseMatrix> {
    zc.z.invert(tol).map_err(|_| Error::SingularZ)
}

/// `S = X Z⁻¹`, mapped back to the original vertex order.
pub fn orthogonal_projection_via_z(
    zc: &ZConstruction,
    d: &BicomponentDecomposition,
    tol: &ToleranceConfig,
) -> Result<OrthogonalProjector> {
    let zi = z_inverse(zc, tol)?;
    let s_perm = zc.x.matmul(&zi);
    Ok(OrthogonalProjector::from_matrix(d.unpermute(&s_perm), d))
}

/// `S̃`: rows of basic agents from `S`, rows of nonbasic agents from `P`.
#[derive(Debug, Clone, PartialEq)]
pub struct TildeProjector {
    pub s_tilde: DenseMatrix,
    /// Whether the nonbasic diagonal block `D` of `P` is numerically singular.
    /// The range of `S̃` is guaranteed to be all of `T_P` only when it is not.
    pub d_block_singular: bool,
}

pub fn nonorthogonal_projection_tilde(
    p: &StochasticMatrix,
    proj: &OrthogonalProjector,
    d: &BicomponentDecomposition,
    tol: &ToleranceConfig,
) -> TildeProjector {
    let pm = p.as_matrix();
    let mut s_tilde = proj.s.clone();
    for &v in d.nonbasic_vertices() {
        for c in 0..pm.cols() {
            s_tilde[(v, c)] = pm[(v, c)];
        }
    }
    let nb = d.nonbasic_vertices();
    let d_block_singular = !nb.is_empty() && pm.select(nb, nb).rank(tol) < nb.len();
    TildeProjector {
        s_tilde,
        d_block_singular,
    }
}

/// Dictatorial maps onto `T_P` built from one column `i` of `L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Dictator {
    /// `L^(i)`: column `i` replaced by `1`.
    Replace,
    /// `M^(i)_ξ`: `ξ·1` added to column `i`.
    Shift(f64),
}

/// `L^(i)` or `M^(i)_ξ`. After preequalization with this map the DeGroot
/// limit is `s_i` (or `ξ·s_i`) for every agent.
pub fn dictatorial_matrix(l: &KirchhoffMatrix, i: usize, kind: Dictator) -> Result<DenseMatrix> {
    let n = l.n();
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, len: n });
    }
    let mut m = l.as_matrix().clone();
    match kind {
        Dictator::Replace => m.set_column(i, &vec![1.0; n]),
        Dictator::Shift(xi) => {
            if xi == 0.0 {
                return Err(Error::ZeroXi);
            }
            for r in 0..n {
                m[(r, i)] += xi;
            }
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{build, decompose};
    use crate::fixtures;
    use crate::limits::power_limit_recursive;
    use crate::matrix::validate_stochastic;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    struct Setup {
        p: StochasticMatrix,
        l: KirchhoffMatrix,
        d: BicomponentDecomposition,
        limit: PowerLimit,
    }

    fn setup<R: AsRef<[f64]>>(rows: &[R]) -> Setup {
        let p = validate_stochastic(DenseMatrix::from_rows(rows).unwrap(), &tol()).unwrap();
        let (g, l) = build(&p, &tol());
        let d = decompose(&g);
        let limit = power_limit_recursive(&l, d.nu(), &tol()).unwrap();
        Setup { p, l, d, limit }
    }

    fn projector(s: &Setup) -> OrthogonalProjector {
        let basis = build_region_basis(&s.l, &s.d, &tol()).unwrap();
        orthogonal_projection_via_pinv(&basis, &s.d, &tol()).unwrap()
    }

    fn seven_agent_s() -> DenseMatrix {
        DenseMatrix::from_rows(&fixtures::SEVEN_AGENT_S_TIMES_22)
            .unwrap()
            .scale(1.0 / 22.0)
    }

    #[test]
    fn seven_agent_basis_matches_published_u() {
        let s = setup(&fixtures::SEVEN_AGENT_P);
        let basis = build_region_basis(&s.l, &s.d, &tol()).unwrap();
        assert_eq!(basis.deleted_columns, vec![0, 3]);
        let expected = DenseMatrix::from_rows(&fixtures::SEVEN_AGENT_U).unwrap();
        // equal up to the rounding of 1 - 0.9 and friends
        assert!(basis.u.max_abs_diff(&expected) <= 4.0 * f64::EPSILON);
    }

    #[test]
    fn identity_basis_is_ones() {
        let s = setup(&[[1.0, 0.0], [0.0, 1.0]]);
        let basis = build_region_basis(&s.l, &s.d, &tol()).unwrap();
        assert_eq!(basis.u.to_rows(), vec![vec![1.0], vec![1.0]]);
        let proj = orthogonal_projection_via_pinv(&basis, &s.d, &tol()).unwrap();
        assert!(proj.s.max_abs_diff(&DenseMatrix::from_rows(&[[0.5, 0.5], [0.5, 0.5]]).unwrap()) < 1e-15);
    }

    #[test]
    fn regular_basis_and_projector() {
        let s = setup(&[[0.5, 0.5], [0.25, 0.75]]);
        let basis = build_region_basis(&s.l, &s.d, &tol()).unwrap();
        assert_eq!(basis.dimension(), 2);
        assert_eq!(basis.u.column(1), s.l.as_matrix().column(1));
        let proj = orthogonal_projection_via_pinv(&basis, &s.d, &tol()).unwrap();
        assert!(proj.s.max_abs_diff(&DenseMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn seven_agent_projector() {
        let s = setup(&fixtures::SEVEN_AGENT_P);
        let proj = projector(&s);
        assert!(proj.s.max_abs_diff(&seven_agent_s()) < 1e-9);
        assert_eq!(proj.basic_block.rows(), 5);
    }

    #[test]
    fn membership_examples() {
        let s = setup(&fixtures::SEVEN_AGENT_P);
        let proj = projector(&s);
        assert!(membership(&[1.0; 7], &proj, &tol()).unwrap());
        for c in 0..7 {
            assert!(membership(&s.l.as_matrix().column(c), &proj, &tol()).unwrap());
        }
        let x = [1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0];
        assert!(!membership(&x, &proj, &tol()).unwrap());
        assert!(membership(&[1.0; 3], &proj, &tol()).is_err());
    }

    #[test]
    fn five_agent_xz_match_published() {
        let s = setup(&fixtures::FIVE_AGENT_P);
        let zc = build_xz(&s.l, &s.d, &s.limit, NonbasicFill::default(), &tol()).unwrap();
        let x = DenseMatrix::from_rows(&fixtures::FIVE_AGENT_X).unwrap();
        let z = DenseMatrix::from_rows(&fixtures::FIVE_AGENT_Z).unwrap();
        assert!(zc.x.max_abs_diff(&x) < 1e-12);
        assert!(zc.z.max_abs_diff(&z) < 1e-12);
        assert!(zc.g_block.is_none());
        let proj = orthogonal_projection_via_z(&zc, &s.d, &tol()).unwrap();
        let printed = DenseMatrix::from_rows(&fixtures::FIVE_AGENT_S_ROUNDED).unwrap();
        let exact = seven_agent_s().select(&[0, 1, 2, 3, 4], &[0, 1, 2, 3, 4]);
        assert!(proj.s.max_abs_diff(&exact) < 1e-12);
        // the published (5,4) entry reads -0.272; the exact value is -6/22
        let mut worst = 0.0f64;
        for r in 0..5 {
            for c in 0..5 {
                if (r, c) != (4, 3) {
                    worst = worst.max((proj.s[(r, c)] - printed[(r, c)]).abs());
                }
            }
        }
        assert!(worst <= 5e-4);
    }

    #[test]
    fn regular_xz_has_no_q() {
        let s = setup(&[[0.5, 0.5], [0.25, 0.75]]);
        let zc = build_xz(&s.l, &s.d, &s.limit, NonbasicFill::default(), &tol()).unwrap();
        assert!(zc.q_vectors.is_empty());
        let mut expected = s.l.as_matrix().clone();
        expected.set_column(0, &[1.0, 1.0]);
        assert_eq!(zc.x, expected);
        assert_eq!(zc.z, expected);
    }

    #[test]
    fn identity_xz() {
        let s = setup(&[[1.0, 0.0], [0.0, 1.0]]);
        let zc = build_xz(&s.l, &s.d, &s.limit, NonbasicFill::default(), &tol()).unwrap();
        assert_eq!(zc.q_vectors, vec![vec![1.0, -1.0]]);
        assert_eq!(zc.z.to_rows(), vec![vec![1.0, 1.0], vec![1.0, -1.0]]);
        let proj = orthogonal_projection_via_z(&zc, &s.d, &tol()).unwrap();
        assert!(proj.s.max_abs_diff(&DenseMatrix::from_rows(&[[0.5, 0.5], [0.5, 0.5]]).unwrap()) < 1e-15);
    }

    #[test]
    fn seven_agent_z_route_with_both_fills() {
        let s = setup(&fixtures::SEVEN_AGENT_P);
        for fill in [NonbasicFill::WholeColumns, NonbasicFill::CopiedFromKirchhoff] {
            let zc = build_xz(&s.l, &s.d, &s.limit, fill, &tol()).unwrap();
            let proj = orthogonal_projection_via_z(&zc, &s.d, &tol()).unwrap();
            assert!(proj.s.max_abs_diff(&seven_agent_s()) < 1e-8);
            let zi = z_inverse(&zc, &tol()).unwrap();
            let alpha: Vec<f64> = fixtures::SEVEN_AGENT_ALPHA_TIMES_110.iter().map(|a| a / 110.0).collect();
            assert!(max_abs_diff_vec(zi.row(0), &alpha) < 1e-9);
        }
        let zc = build_xz(&s.l, &s.d, &s.limit, NonbasicFill::WholeColumns, &tol()).unwrap();
        let g = zc.g_block.unwrap();
        assert_eq!(g.column(0), vec![1.0, 1.0]);
        assert_eq!(g.column(3), vec![0.0, 0.0]);
    }

    #[test]
    fn q_vectors_lie_in_left_kernel() {
        let s = setup(&fixtures::SEVEN_AGENT_P);
        let zc = build_xz(&s.l, &s.d, &s.limit, NonbasicFill::default(), &tol()).unwrap();
        let lp = s.d.permute(s.l.as_matrix());
        for q in &zc.q_vectors {
            assert!(lp.vec_mul(q).iter().all(|v| v.abs() < 1e-12));
        }
    }

    #[test]
    fn tilde_projection() {
        let s = setup(&fixtures::SEVEN_AGENT_P);
        let proj = projector(&s);
        let t = nonorthogonal_projection_tilde(&s.p, &proj, &s.d, &tol());
        for r in 0..5 {
            assert_eq!(t.s_tilde.row(r), proj.s.row(r));
        }
        for r in 5..7 {
            assert_eq!(t.s_tilde.row(r), s.p.as_matrix().row(r));
        }
        assert!(!t.d_block_singular);
        let ps = s.limit.matrix.matmul(&proj.s);
        let pt = s.limit.matrix.matmul(&t.s_tilde);
        assert!(ps.max_abs_diff(&pt) < 1e-12);
        let pm = s.p.as_matrix();
        assert!(pm.sub(&t.s_tilde).frobenius_sq() < pm.sub(&proj.s).frobenius_sq());

        let s5 = setup(&fixtures::FIVE_AGENT_P);
        let proj5 = projector(&s5);
        let t5 = nonorthogonal_projection_tilde(&s5.p, &proj5, &s5.d, &tol());
        assert_eq!(t5.s_tilde, proj5.s);
    }

    #[test]
    fn dictatorial_maps() {
        let s = setup(&fixtures::SEVEN_AGENT_P);
        let x = vec![3.0, -1.0, 2.0, 5.0, 0.5, 4.0, 9.0];
        let li = dictatorial_matrix(&s.l, 0, Dictator::Replace).unwrap();
        let out = s.limit.matrix.mul_vec(&li.mul_vec(&x));
        assert!(out.iter().all(|v| (v - 3.0).abs() < 1e-12));

        let mi = dictatorial_matrix(&s.l, 0, Dictator::Shift(2.0)).unwrap();
        let out = s.limit.matrix.mul_vec(&mi.mul_vec(&x));
        assert!(out.iter().all(|v| (v - 6.0).abs() < 1e-12));

        assert_eq!(dictatorial_matrix(&s.l, 0, Dictator::Shift(0.0)), Err(Error::ZeroXi));
        assert!(dictatorial_matrix(&s.l, 7, Dictator::Replace).is_err());
        assert_eq!(li.rank(&tol()), 6);
    }
}
