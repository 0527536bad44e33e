//! Random systems shared by the integration tests.

#![allow(dead_code)]

use consensus_core::{validate_stochastic, DenseMatrix, StochasticMatrix, ToleranceConfig};
use rand::seq::SliceRandom;
use rand::Rng;

/// A random proper stochastic matrix together with the class structure it
/// was built from (after relabeling).
pub struct RandomSystem {
    pub p: StochasticMatrix,
    /// Each class with its vertices ascending; basic classes first.
    pub basic: Vec<Vec<usize>>,
    pub nonbasic: Vec<Vec<usize>>,
}

/// Sizes of a random partition of `n` into at least one part.
fn random_partition<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let parts = rng.gen_range(1..=n);
    let mut sizes = vec![1; parts];
    for _ in parts..n {
        let k = rng.gen_range(0..parts);
        sizes[k] += 1;
    }
    sizes
}

fn weight<R: Rng>(rng: &mut R) -> f64 {
    rng.gen_range(0.2..=1.0)
}

/// Arcs inside one class: a directed cycle through its vertices plus random
/// extra arcs. Writes `w[(i, j)]` for arc `j -> i`.
fn strongly_connect<R: Rng>(rng: &mut R, w: &mut [Vec<f64>], class: &[usize]) {
    let m = class.len();
    if m == 1 {
        return;
    }
    for k in 0..m {
        let (from, to) = (class[k], class[(k + 1) % m]);
        w[to][from] = weight(rng);
    }
    for &i in class {
        for &j in class {
            if i != j && rng.gen_bool(0.3) {
                w[i][j] = weight(rng);
            }
        }
    }
}

fn add_loops<R: Rng>(rng: &mut R, w: &mut [Vec<f64>], class: &[usize], force: bool) {
    let forced = class[rng.gen_range(0..class.len())];
    for &v in class {
        if (force && v == forced) || rng.gen_bool(0.3) {
            w[v][v] = weight(rng);
        }
    }
}

fn normalize(w: Vec<Vec<f64>>) -> DenseMatrix {
    let rows: Vec<Vec<f64>> = w
        .into_iter()
        .map(|r| {
            let s: f64 = r.iter().sum();
            r.into_iter().map(|x| x / s).collect()
        })
        .collect();
    DenseMatrix::from_rows(&rows).unwrap()
}

/// Applies `v -> perm[v]` to rows and columns.
fn relabel(m: &DenseMatrix, perm: &[usize]) -> DenseMatrix {
    let n = m.rows();
    let mut out = DenseMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            out[(perm[r], perm[c])] = m[(r, c)];
        }
    }
    out
}

fn relabel_classes(classes: &[Vec<usize>], perm: &[usize]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = classes
        .iter()
        .map(|c| {
            let mut v: Vec<usize> = c.iter().map(|&x| perm[x]).collect();
            v.sort_unstable();
            v
        })
        .collect();
    out.sort_by_key(|c| c[0]);
    out
}

/// Builds weights for `sizes` laid out consecutively. The first `nu`
/// classes are final; each later class receives at least one arc from an
/// earlier class. `loops` decides whether every final class gets a loop.
fn layout<R: Rng>(
    rng: &mut R,
    sizes: &[usize],
    nu: usize,
    force_loops: bool,
) -> (Vec<Vec<f64>>, Vec<Vec<usize>>) {
    let n: usize = sizes.iter().sum();
    let mut classes = Vec::new();
    let mut start = 0;
    for &s in sizes {
        classes.push((start..start + s).collect::<Vec<_>>());
        start += s;
    }
    let mut w = vec![vec![0.0; n]; n];
    for (k, class) in classes.iter().enumerate() {
        strongly_connect(rng, &mut w, class);
        if k < nu {
            add_loops(rng, &mut w, class, force_loops);
        } else {
            add_loops(rng, &mut w, class, false);
            let earlier = class[0];
            let target = class[rng.gen_range(0..class.len())];
            let source = rng.gen_range(0..earlier);
            w[target][source] = weight(rng);
            for &i in class {
                for x in &mut w[i][..earlier] {
                    if rng.gen_bool(0.15) {
                        *x = weight(rng);
                    }
                }
            }
        }
    }
    (w, classes)
}

/// Random proper `P` of order `n` with random bicomponent structure and a
/// random relabeling of the agents.
pub fn random_proper<R: Rng>(rng: &mut R, n: usize) -> RandomSystem {
    let sizes = random_partition(rng, n);
    let nu = rng.gen_range(1..=sizes.len());
    let (w, classes) = layout(rng, &sizes, nu, true);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let p = relabel(&normalize(w), &perm);
    let tol = ToleranceConfig::default();
    RandomSystem {
        p: validate_stochastic(p, &tol).unwrap(),
        basic: relabel_classes(&classes[..nu], &perm),
        nonbasic: relabel_classes(&classes[nu..], &perm),
    }
}

/// A stochastic matrix with a final class of period `period` (at least 2),
/// possibly accompanied by proper final classes and nonbasic classes.
pub struct PeriodicSystem {
    pub p: StochasticMatrix,
    pub periodic_class: Vec<usize>,
    pub period: usize,
}

pub fn random_periodic<R: Rng>(rng: &mut R) -> PeriodicSystem {
    let period = rng.gen_range(2..=4);
    let per_group = rng.gen_range(1..=2);
    let m = period * per_group;
    let extra_final = rng.gen_range(0..=2usize);
    let extra_nonbasic = rng.gen_range(0..=2usize);
    let mut sizes = vec![m];
    sizes.extend((0..extra_final).map(|_| rng.gen_range(1..=2)));
    let nu = sizes.len();
    sizes.extend((0..extra_nonbasic).map(|_| rng.gen_range(1..=2)));
    let (mut w, classes) = layout(rng, &sizes, nu, true);

    // replace the first class by a cyclically layered one: group g feeds g+1
    let c = &classes[0];
    for &i in c {
        for &j in c {
            w[i][j] = 0.0;
        }
    }
    let group = |v: usize| (v - c[0]) / per_group;
    for &i in c {
        for &j in c {
            let feeds = (group(j) + 1) % period == group(i);
            // the first vertex of each layer feeds and is fed by whole layers
            let lead = |v: usize| (v - c[0]).is_multiple_of(per_group);
            let chain = feeds && (lead(i) || lead(j));
            if chain || (feeds && rng.gen_bool(0.5)) {
                w[i][j] = weight(rng);
            }
        }
    }
    let n: usize = sizes.iter().sum();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let p = relabel(&normalize(w), &perm);
    let mut periodic_class: Vec<usize> = c.iter().map(|&v| perm[v]).collect();
    periodic_class.sort_unstable();
    PeriodicSystem {
        p: validate_stochastic(p, &ToleranceConfig::default()).unwrap(),
        periodic_class,
        period,
    }
}
