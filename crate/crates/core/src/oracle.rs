//! Brute-force enumeration of spanning out-trees and maximum out-forests.
//!
//! Everything here is exponential and capped; it exists to cross-check the
//! algebraic routes on small systems. Loops never belong to a tree or forest.

use alloc::vec;
use alloc::vec::Vec;

use crate::digraph::{BicomponentDecomposition, CommunicationDigraph, KirchhoffMatrix};
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Default cap on the size of a class for out-tree enumeration.
pub const DEFAULT_CLASS_CAP: usize = 8;
/// Default cap on the number of vertices for out-forest enumeration.
pub const DEFAULT_FOREST_CAP: usize = 10;

const NONE: usize = usize::MAX;

/// Candidate parents of `v` restricted to `member`, as `(parent, weight)`.
fn in_choices(g: &CommunicationDigraph, v: usize, member: &[bool]) -> Vec<(usize, f64)> {
    g.in_arcs(v)
        .filter(|a| a.source != v && member[a.source])
        .map(|a| (a.source, a.weight))
        .collect()
}

/// Walks parent pointers from `v`; true if the walk returns to `v`.
fn closes_cycle(parent: &[usize], v: usize) -> bool {
    let mut u = parent[v];
    let mut steps = 0;
    while u != NONE && steps <= parent.len() {
        if u == v {
            return true;
        }
        u = parent[u];
        steps += 1;
    }
    false
}

/// Total weight of spanning out-trees of the subgraph induced by `class`
/// diverging from `root`: every other vertex takes exactly one in-arc from
/// inside the class and the arcs form no cycle.
pub fn enumerate_out_trees(
    g: &CommunicationDigraph,
    class: &[usize],
    root: usize,
    cap: usize,
) -> Result<f64> {
    if class.len() > cap {
        return Err(Error::TooLarge {
            size: class.len(),
            cap,
        });
    }
    if !class.contains(&root) {
        return Err(Error::IndexOutOfRange {
            index: root,
            len: g.n(),
        });
    }
    let mut member = vec![false; g.n()];
    for &v in class {
        member[v] = true;
    }
    let others: Vec<usize> = class.iter().copied().filter(|&v| v != root).collect();
    let choices: Vec<Vec<(usize, f64)>> = others.iter().map(|&v| in_choices(g, v, &member)).collect();
    let mut parent = vec![NONE; g.n()];
    let mut total = 0.0;
    tree_search(&others, &choices, 0, 1.0, &mut parent, &mut total);
    Ok(total)
}

fn tree_search(
    vertices: &[usize],
    choices: &[Vec<(usize, f64)>],
    k: usize,
    weight: f64,
    parent: &mut [usize],
    total: &mut f64,
) {
    if k == vertices.len() {
        *total += weight;
        return;
    }
    let v = vertices[k];
    for &(u, w) in &choices[k] {
        parent[v] = u;
        if !closes_cycle(parent, v) {
            tree_search(vertices, choices, k + 1, weight * w, parent, total);
        }
    }
    parent[v] = NONE;
}

/// `π_j = t_j / t` over the vertices of a strongly connected class.
pub fn stationary_via_trees(g: &CommunicationDigraph, class: &[usize], cap: usize) -> Result<Vec<f64>> {
    let per_root = class
        .iter()
        .map(|&r| enumerate_out_trees(g, class, r, cap))
        .collect::<Result<Vec<f64>>>()?;
    let total: f64 = per_root.iter().sum();
    if total <= 0.0 {
        return Err(Error::NotStronglyConnected);
    }
    Ok(per_root.iter().map(|t| t / total).collect())
}

/// Out-tree totals of one final class.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassTrees {
    /// `t^i`: total weight of all spanning out-trees of the class.
    pub total: f64,
    /// `t^i_l`: weight of those rooted at the `l`-th vertex of the class.
    pub per_root: Vec<f64>,
    /// `W_i`: determinant of `L_i` with its first column replaced by `π^i`.
    pub w: f64,
}

impl ClassTrees {
    pub fn stationary(&self) -> Vec<f64> {
        self.per_root.iter().map(|t| t / self.total).collect()
    }

    /// `β_i = (t^i)² / Σ_l (t^i_l)²`.
    pub fn beta(&self) -> f64 {
        let sq: f64 = self.per_root.iter().map(|t| t * t).sum();
        self.total * self.total / sq
    }
}

/// Per-final-class out-tree data in Frobenius class order.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeWeights {
    pub classes: Vec<ClassTrees>,
}

impl TreeWeights {
    /// Enumerates out-trees of every final class.
    pub fn enumerate(
        g: &CommunicationDigraph,
        l: &KirchhoffMatrix,
        d: &BicomponentDecomposition,
        cap: usize,
    ) -> Result<Self> {
        let classes = d
            .basic_classes()
            .iter()
            .map(|class| {
                let per_root = class
                    .iter()
                    .map(|&r| enumerate_out_trees(g, class, r, cap))
                    .collect::<Result<Vec<f64>>>()?;
                Ok(class_trees(l, class, per_root))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TreeWeights { classes })
    }

    /// Same totals through the matrix-tree theorem: `t^i_k` is the cofactor of
    /// any entry in row `k` of the class block `L_i`.
    pub fn from_cofactors(l: &KirchhoffMatrix, d: &BicomponentDecomposition) -> Self {
        let classes = d
            .basic_classes()
            .iter()
            .map(|class| {
                let block = l.as_matrix().select(class, class);
                let per_root = (0..class.len()).map(|k| block.cofactor(k, 0)).collect();
                class_trees(l, class, per_root)
            })
            .collect();
        TreeWeights { classes }
    }

    pub fn betas(&self) -> Vec<f64> {
        beta_weights(self)
    }
}

fn class_trees(l: &KirchhoffMatrix, class: &[usize], per_root: Vec<f64>) -> ClassTrees {
    let total: f64 = per_root.iter().sum();
    let pi: Vec<f64> = per_root.iter().map(|t| t / total).collect();
    let block = l.as_matrix().select(class, class);
    ClassTrees {
        total,
        per_root,
        w: w_determinant(&block, &pi),
    }
}

/// `β_i` for every final class.
pub fn beta_weights(trees: &TreeWeights) -> Vec<f64> {
    trees.classes.iter().map(ClassTrees::beta).collect()
}

/// Determinant of `L_i` with its first column replaced by `π^i`. Equals
/// `Σ_k (t^i_k)² / t^i`.
pub fn w_determinant(l_i: &DenseMatrix, pi_i: &[f64]) -> f64 {
    let mut m = l_i.clone();
    m.set_column(0, pi_i);
    m.determinant()
}

/// Normalized matrix of maximum out-forests: entry `(i, j)` is the weight of
/// the spanning out-forests with `ν` trees in which `j` is a root and `i`
/// lies in `j`'s tree, divided by the weight of all such forests.
#[derive(Debug, Clone, PartialEq)]
pub struct ForestMatrix {
    pub j_tilde: DenseMatrix,
    /// Total weight of all maximum out-forests.
    pub total_weight: f64,
}

pub fn maximum_out_forest_matrix(
    g: &CommunicationDigraph,
    d: &BicomponentDecomposition,
    cap: usize,
) -> Result<ForestMatrix> {
    let n = g.n();
    if n > cap {
        return Err(Error::TooLarge { size: n, cap });
    }
    let everyone = vec![true; n];
    let choices: Vec<Vec<(usize, f64)>> = (0..n).map(|v| in_choices(g, v, &everyone)).collect();
    let mut search = ForestSearch {
        choices,
        roots_allowed: d.nu(),
        parent: vec![NONE; n],
        acc: vec![0.0; n * n],
        total: 0.0,
    };
    search.run(0, 0, 1.0);
    let ForestSearch { acc, total, .. } = search;
    if total <= 0.0 {
        return Err(Error::NotStronglyConnected);
    }
    let j_tilde = DenseMatrix::new(n, n, acc.iter().map(|w| w / total).collect())?;
    Ok(ForestMatrix {
        j_tilde,
        total_weight: total,
    })
}

struct ForestSearch {
    choices: Vec<Vec<(usize, f64)>>,
    roots_allowed: usize,
    parent: Vec<usize>,
    acc: Vec<f64>,
    total: f64,
}

impl ForestSearch {
    fn run(&mut self, v: usize, roots: usize, weight: f64) {
        let n = self.parent.len();
        if v == n {
            if roots == self.roots_allowed {
                self.record(weight);
            }
            return;
        }
        // roots still needed must fit in the remaining vertices
        if roots + (n - v) >= self.roots_allowed && roots < self.roots_allowed {
            self.parent[v] = NONE;
            self.run(v + 1, roots + 1, weight);
        }
        if roots + (n - v - 1) >= self.roots_allowed {
            for k in 0..self.choices[v].len() {
                let (u, w) = self.choices[v][k];
                self.parent[v] = u;
                if !self.creates_cycle(v) {
                    self.run(v + 1, roots, weight * w);
                }
            }
        }
        self.parent[v] = NONE;
    }

    /// Parent pointers of unassigned vertices are `NONE`, so only cycles
    /// among already assigned vertices are detected.
    fn creates_cycle(&self, v: usize) -> bool {
        closes_cycle(&self.parent, v)
    }

    fn record(&mut self, weight: f64) {
        let n = self.parent.len();
        for i in 0..n {
            let mut r = i;
            while self.parent[r] != NONE {
                r = self.parent[r];
            }
            self.acc[i * n + r] += weight;
        }
        self.total += weight;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{build, decompose};
    use crate::fixtures;
    use crate::matrix::{validate_stochastic, ToleranceConfig};

    fn graph<R: AsRef<[f64]>>(rows: &[R]) -> (CommunicationDigraph, KirchhoffMatrix, BicomponentDecomposition) {
        let tol = ToleranceConfig::default();
        let p = validate_stochastic(DenseMatrix::from_rows(rows).unwrap(), &tol).unwrap();
        let (g, l) = build(&p, &tol);
        let d = decompose(&g);
        (g, l, d)
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn single_vertex_tree_weight_is_one() {
        let (g, _, _) = graph(&[[1.0]]);
        assert_eq!(enumerate_out_trees(&g, &[0], 0, 8), Ok(1.0));
        assert_eq!(stationary_via_trees(&g, &[0], 8), Ok(vec![1.0]));
    }

    #[test]
    fn seven_agent_tree_totals() {
        let (g, _, _) = graph(&fixtures::SEVEN_AGENT_P);
        let c1 = [0, 1, 2];
        assert!(close(enumerate_out_trees(&g, &c1, 0, 8).unwrap(), 0.06));
        assert!(close(enumerate_out_trees(&g, &c1, 1, 8).unwrap(), 0.06));
        assert!(close(enumerate_out_trees(&g, &c1, 2, 8).unwrap(), 0.03));
        let c2 = [3, 4];
        assert!(close(enumerate_out_trees(&g, &c2, 3, 8).unwrap(), 0.2));
        assert!(close(enumerate_out_trees(&g, &c2, 4, 8).unwrap(), 0.3));
        assert_eq!(
            enumerate_out_trees(&g, &c1, 0, 2),
            Err(Error::TooLarge { size: 3, cap: 2 })
        );
    }

    #[test]
    fn seven_agent_stationary_vectors() {
        let (g, _, _) = graph(&fixtures::SEVEN_AGENT_P);
        let pi = stationary_via_trees(&g, &[0, 1, 2], 8).unwrap();
        assert!(close(pi[0], 0.4) && close(pi[1], 0.4) && close(pi[2], 0.2));
        let pi = stationary_via_trees(&g, &[3, 4], 8).unwrap();
        assert!(close(pi[0], 0.4) && close(pi[1], 0.6));
    }

    #[test]
    fn tree_weights_betas_and_w() {
        let (g, l, d) = graph(&fixtures::SEVEN_AGENT_P);
        let tw = TreeWeights::enumerate(&g, &l, &d, 8).unwrap();
        assert!(close(tw.classes[0].total, 0.15));
        assert!(close(tw.classes[1].total, 0.5));
        let betas = tw.betas();
        assert!(close(betas[0], 25.0 / 9.0));
        assert!(close(betas[1], 25.0 / 13.0));
        assert!(close(tw.classes[0].w, 0.054));
        assert!(close(tw.classes[1].w, 0.26));

        let cof = TreeWeights::from_cofactors(&l, &d);
        for (a, b) in tw.classes.iter().zip(&cof.classes) {
            assert!(close(a.total, b.total));
            assert!(close(a.w, b.w));
        }
    }

    #[test]
    fn w_of_single_vertex() {
        let l = DenseMatrix::from_rows(&[[0.0]]).unwrap();
        assert_eq!(w_determinant(&l, &[1.0]), 1.0);
    }

    #[test]
    fn identity_forest_matrix() {
        let (g, _, d) = graph(&[[1.0, 0.0], [0.0, 1.0]]);
        let f = maximum_out_forest_matrix(&g, &d, 10).unwrap();
        assert_eq!(f.j_tilde, DenseMatrix::identity(2));
        assert_eq!(f.total_weight, 1.0);
    }

    #[test]
    fn regular_two_cycle_forest_matrix_has_stationary_rows() {
        let (g, _, d) = graph(&[[0.5, 0.5], [0.25, 0.75]]);
        let f = maximum_out_forest_matrix(&g, &d, 10).unwrap();
        let pi = stationary_via_trees(&g, &[0, 1], 8).unwrap();
        for r in 0..2 {
            assert!(close(f.j_tilde[(r, 0)], pi[0]));
            assert!(close(f.j_tilde[(r, 1)], pi[1]));
        }
    }

    #[test]
    fn seven_agent_forest_matrix() {
        let (g, _, d) = graph(&fixtures::SEVEN_AGENT_P);
        let f = maximum_out_forest_matrix(&g, &d, 10).unwrap();
        let row6 = [16.0, 16.0, 8.0, 6.0, 9.0, 0.0, 0.0];
        for (c, x) in row6.iter().enumerate() {
            assert!(close(f.j_tilde[(5, c)], x / 55.0));
        }
        assert!(close(f.j_tilde[(0, 2)], 0.2));
        assert_eq!(
            maximum_out_forest_matrix(&g, &d, 6),
            Err(Error::TooLarge { size: 7, cap: 6 })
        );
    }
}
