//! Communication digraph of an influence matrix, its Kirchhoff matrix, the
//! strong-component (bicomponent) decomposition and the spectral class.
//!
//! Arcs point in the direction of influence: `p_ij > 0` gives the arc
//! `j -> i` with weight `p_ij`.

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, StochasticMatrix, ToleranceConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub source: usize,
    pub target: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommunicationDigraph {
    n: usize,
    arcs: Vec<Arc>,
    out_arcs: Vec<Vec<usize>>,
    in_arcs: Vec<Vec<usize>>,
}

impl CommunicationDigraph {
    pub fn n(&self) -> usize {
        self.n
    }

    /// All arcs, sorted by `(source, target)`.
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn out_arcs(&self, v: usize) -> impl Iterator<Item = &Arc> + '_ {
        self.out_arcs[v].iter().map(move |&k| &self.arcs[k])
    }

    pub fn in_arcs(&self, v: usize) -> impl Iterator<Item = &Arc> + '_ {
        self.in_arcs[v].iter().map(move |&k| &self.arcs[k])
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.out_arcs(v).any(|a| a.target == v)
    }
}

/// `L = I - P`.
#[derive(Debug, Clone, PartialEq)]
pub struct KirchhoffMatrix(DenseMatrix);

impl KirchhoffMatrix {
    pub fn from_stochastic(p: &StochasticMatrix) -> Self {
        let n = p.n();
        KirchhoffMatrix(DenseMatrix::identity(n).sub(p.as_matrix()))
    }

    pub fn n(&self) -> usize {
        self.0.rows()
    }

    pub fn as_matrix(&self) -> &DenseMatrix {
        &self.0
    }
}

impl AsRef<DenseMatrix> for KirchhoffMatrix {
    fn as_ref(&self) -> &DenseMatrix {
        &self.0
    }
}

/// Builds the communication digraph (arcs below `zero_tol` are dropped) and
/// the Kirchhoff matrix `L = I - P`.
pub fn build(p: &StochasticMatrix, tol: &ToleranceConfig) -> (CommunicationDigraph, KirchhoffMatrix) {
    let n = p.n();
    let m = p.as_matrix();
    let mut arcs = Vec::new();
    for source in 0..n {
        for target in 0..n {
            let w = m[(target, source)];
            if w > tol.zero_tol {
                arcs.push(Arc {
                    source,
                    target,
                    weight: w,
                });
            }
        }
    }
    let mut out_arcs = vec![Vec::new(); n];
    let mut in_arcs = vec![Vec::new(); n];
    for (k, a) in arcs.iter().enumerate() {
        out_arcs[a.source].push(k);
        in_arcs[a.target].push(k);
    }
    let g = CommunicationDigraph {
        n,
        arcs,
        out_arcs,
        in_arcs,
    };
    (g, KirchhoffMatrix::from_stochastic(p))
}

/// Strong components of the communication digraph arranged in Frobenius
/// normal form: final (basic) classes first, then the nonbasic classes in an
/// order where every class comes after all classes that influence it.
#[derive(Debug, Clone, PartialEq)]
pub struct BicomponentDecomposition {
    classes: Vec<Vec<usize>>,
    is_basic: Vec<bool>,
    nu: usize,
    b: usize,
    order: Vec<usize>,
    position: Vec<usize>,
    class_of: Vec<usize>,
    index_in_class: Vec<usize>,
}

impl BicomponentDecomposition {
    pub fn n(&self) -> usize {
        self.order.len()
    }

    /// Classes in Frobenius order; vertices ascending within each class.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn is_basic(&self, class: usize) -> bool {
        self.is_basic[class]
    }

    /// Number of final classes.
    pub fn nu(&self) -> usize {
        self.nu
    }

    /// Number of basic vertices.
    pub fn b(&self) -> usize {
        self.b
    }

    pub fn basic_classes(&self) -> &[Vec<usize>] {
        &self.classes[..self.nu]
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    /// `order[k]` is the original vertex placed at Frobenius position `k`.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn position(&self, v: usize) -> usize {
        self.position[v]
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.class_of[v]
    }

    pub fn index_in_class(&self, v: usize) -> usize {
        self.index_in_class[v]
    }

    pub fn is_basic_vertex(&self, v: usize) -> bool {
        self.is_basic[self.class_of[v]]
    }

    /// Basic vertices in Frobenius order.
    pub fn basic_vertices(&self) -> &[usize] {
        &self.order[..self.b]
    }

    /// Nonbasic vertices in Frobenius order.
    pub fn nonbasic_vertices(&self) -> &[usize] {
        &self.order[self.b..]
    }

    /// `Π M Πᵀ`: rows and columns of a square matrix rearranged into
    /// Frobenius order.
    pub fn permute(&self, m: &DenseMatrix) -> DenseMatrix {
        m.select(&self.order, &self.order)
    }

    /// Inverse of [`permute`](Self::permute).
    pub fn unpermute(&self, m: &DenseMatrix) -> DenseMatrix {
        let pos: Vec<usize> = (0..self.n()).map(|v| self.position[v]).collect();
        m.select(&pos, &pos)
    }

    pub fn permute_vec(&self, v: &[f64]) -> Vec<f64> {
        self.order.iter().map(|&k| v[k]).collect()
    }

    pub fn unpermute_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n()).map(|k| v[self.position[k]]).collect()
    }
}

/// Tarjan's algorithm, iterative. Components come out in reverse
/// topological order of the condensation.
fn strong_components(g: &CommunicationDigraph) -> Vec<Vec<usize>> {
    const UNVISITED: usize = usize::MAX;
    let n = g.n();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next = 0;
    let succ: Vec<Vec<usize>> = (0..n).map(|v| g.out_arcs(v).map(|a| a.target).collect()).collect();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut i)) = call.last_mut() {
            if *i < succ[v].len() {
                let w = succ[v][*i];
                *i += 1;
                if index[w] == UNVISITED {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

/// Strong components, basic/nonbasic classification and Frobenius order.
///
/// Basic classes are sorted by their smallest vertex. Nonbasic classes follow
/// in topological order of the condensation (influencers first), ties broken
/// by smallest vertex, so the permuted `P` is lower block-triangular.
pub fn decompose(g: &CommunicationDigraph) -> BicomponentDecomposition {
    let n = g.n();
    let comps = strong_components(g);
    let mut comp_of = vec![0; n];
    for (c, comp) in comps.iter().enumerate() {
        for &v in comp {
            comp_of[v] = c;
        }
    }
    // predecessors[c]: classes with an arc into c
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); comps.len()];
    for a in g.arcs() {
        let (cs, ct) = (comp_of[a.source], comp_of[a.target]);
        if cs != ct && !preds[ct].contains(&cs) {
            preds[ct].push(cs);
        }
    }

    let mut basic: Vec<usize> = (0..comps.len()).filter(|&c| preds[c].is_empty()).collect();
    basic.sort_by_key(|&c| comps[c][0]);

    let mut placed = vec![false; comps.len()];
    let mut ordered: Vec<usize> = Vec::with_capacity(comps.len());
    for &c in &basic {
        placed[c] = true;
        ordered.push(c);
    }
    while ordered.len() < comps.len() {
        let next = (0..comps.len())
            .filter(|&c| !placed[c] && preds[c].iter().all(|&p| placed[p]))
            .min_by_key(|&c| comps[c][0])
            .expect("condensation is acyclic");
        placed[next] = true;
        ordered.push(next);
    }

    let nu = basic.len();
    let classes: Vec<Vec<usize>> = ordered.iter().map(|&c| comps[c].clone()).collect();
    let is_basic: Vec<bool> = (0..classes.len()).map(|k| k < nu).collect();
    let b = classes[..nu].iter().map(Vec::len).sum();
    let mut order = Vec::with_capacity(n);
    let mut class_of = vec![0; n];
    let mut index_in_class = vec![0; n];
    for (k, class) in classes.iter().enumerate() {
        for (i, &v) in class.iter().enumerate() {
            class_of[v] = k;
            index_in_class[v] = i;
            order.push(v);
        }
    }
    let mut position = vec![0; n];
    for (k, &v) in order.iter().enumerate() {
        position[v] = k;
    }
    BicomponentDecomposition {
        classes,
        is_basic,
        nu,
        b,
        order,
        position,
        class_of,
        index_in_class,
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Period of a strongly connected vertex set: the gcd of the lengths of its
/// closed walks, read off BFS levels as `gcd(level(u) + 1 - level(v))` over
/// arcs `u -> v` inside the set. A single vertex without a loop has no closed
/// walks and gets period 0.
pub fn class_period(g: &CommunicationDigraph, class: &[usize]) -> Result<usize> {
    let n = g.n();
    let Some(&start) = class.first() else {
        return Err(Error::NotStronglyConnected);
    };
    let mut member = vec![false; n];
    for &v in class {
        if v >= n {
            return Err(Error::IndexOutOfRange { index: v, len: n });
        }
        member[v] = true;
    }

    let bfs = |forward: bool| -> Vec<Option<usize>> {
        let mut level = vec![None; n];
        level[start] = Some(0);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let lu = level[u].unwrap_or(0);
            let next: Vec<usize> = if forward {
                g.out_arcs(u).map(|a| a.target).collect()
            } else {
                g.in_arcs(u).map(|a| a.source).collect()
            };
            for w in next {
                if member[w] && level[w].is_none() {
                    level[w] = Some(lu + 1);
                    queue.push_back(w);
                }
            }
        }
        level
    };

    let level = bfs(true);
    let back = bfs(false);
    if class.iter().any(|&v| level[v].is_none() || back[v].is_none()) {
        return Err(Error::NotStronglyConnected);
    }
    let mut period = 0;
    for &u in class {
        let lu = level[u].unwrap_or(0);
        for a in g.out_arcs(u).filter(|a| member[a.target]) {
            let lv = level[a.target].unwrap_or(0);
            period = gcd(period, (lu + 1).abs_diff(lv));
        }
    }
    Ok(period)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralKind {
    /// Proper with a single final class (SIA): `P^k -> 1 πᵀ`.
    Regular,
    /// `P^k` converges but the limit has more than one distinct row.
    ProperNotRegular,
    /// Some final class is periodic; `P^k` does not converge.
    Improper,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralClass {
    pub kind: SpectralKind,
    /// Period of each final class, in Frobenius order.
    pub periods: Vec<usize>,
}

impl SpectralClass {
    pub fn is_proper(&self) -> bool {
        self.kind != SpectralKind::Improper
    }

    /// Index of the first final class with period at least 2.
    pub fn periodic_class(&self) -> Option<usize> {
        self.periods.iter().position(|&d| d >= 2)
    }
}

/// Decides properness combinatorially: eigenvalues of modulus one other than
/// 1 come exactly from periodic final classes.
pub fn spectral_class(g: &CommunicationDigraph, d: &BicomponentDecomposition) -> Result<SpectralClass> {
    let periods = d
        .basic_classes()
        .iter()
        .map(|c| class_period(g, c))
        .collect::<Result<Vec<_>>>()?;
    let kind = if periods.iter().any(|&p| p >= 2) {
        SpectralKind::Improper
    } else if d.nu() == 1 {
        SpectralKind::Regular
    } else {
        SpectralKind::ProperNotRegular
    };
    Ok(SpectralClass { kind, periods })
}

/// Builds everything structural about `P` in one go.
pub fn structure(
    p: &StochasticMatrix,
    tol: &ToleranceConfig,
) -> Result<(CommunicationDigraph, KirchhoffMatrix, BicomponentDecomposition, SpectralClass)> {
    let (g, l) = build(p, tol);
    let d = decompose(&g);
    let spectral = spectral_class(&g, &d)?;
    Ok((g, l, d, spectral))
}

/// `ImproperMatrix` naming the first periodic final class, if any.
pub fn require_proper(d: &BicomponentDecomposition, spectral: &SpectralClass) -> Result<()> {
    match spectral.periodic_class() {
        Some(k) => Err(Error::ImproperMatrix {
            class: d.classes()[k].clone(),
            period: spectral.periods[k],
        }),
        None => Ok(()),
    }
}

/// True iff some vertex reaches every vertex, i.e. a spanning out-tree exists.
pub fn has_spanning_out_tree(g: &CommunicationDigraph, d: &BicomponentDecomposition) -> bool {
    if d.nu() != 1 {
        return false;
    }
    let start = d.classes()[0][0];
    let mut seen = vec![false; g.n()];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for a in g.out_arcs(u) {
            if !seen[a.target] {
                seen[a.target] = true;
                queue.push_back(a.target);
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Graphviz rendering with one cluster per class. Vertices are numbered from
/// 1 unless labels are supplied; arcs are listed in `(source, target)` order.
pub fn export_dot(g: &CommunicationDigraph, d: &BicomponentDecomposition) -> String {
    export_dot_labeled(g, d, None)
}

pub fn export_dot_labeled(
    g: &CommunicationDigraph,
    d: &BicomponentDecomposition,
    labels: Option<&[String]>,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph influence {{");
    let _ = writeln!(out, "  rankdir=LR;");
    for v in 0..g.n() {
        match labels {
            Some(l) => {
                let _ = writeln!(out, "  {} [label=\"{}\"];", v + 1, escape(&l[v]));
            }
            None => {
                let _ = writeln!(out, "  {};", v + 1);
            }
        }
    }
    for (k, class) in d.classes().iter().enumerate() {
        let kind = if d.is_basic(k) { "basic" } else { "nonbasic" };
        let _ = writeln!(out, "  subgraph cluster_{} {{", k + 1);
        let _ = writeln!(out, "    label=\"class {} ({})\";", k + 1, kind);
        if d.is_basic(k) {
            let _ = writeln!(out, "    style=filled; color=lightgrey;");
        } else {
            let _ = writeln!(out, "    style=dashed;");
        }
        let members: Vec<String> = class.iter().map(|v| alloc::format!("{}", v + 1)).collect();
        let _ = writeln!(out, "    {};", members.join("; "));
        let _ = writeln!(out, "  }}");
    }
    for a in g.arcs() {
        let _ = writeln!(
            out,
            "  {} -> {} [label=\"{}\"];",
            a.source + 1,
            a.target + 1,
            a.weight
        );
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
