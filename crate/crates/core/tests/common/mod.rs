//! Shared helpers for the integration suites: independent oracles built
//! from first principles (exact circuit enumeration over integer
//! fractions, boolean reachability, boolean walk tables) and seeded
//! random matrix generators. Nothing here calls the library's own
//! algorithms, so agreement is meaningful evidence.

#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::BTreeSet;

use maxplus::{Trop, TropMatrix};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Integer arc grid: `g[i][j] = Some(w)` is an arc i -> j of weight w.
pub type Grid = Vec<Vec<Option<i64>>>;

pub fn grid_to_matrix(g: &Grid) -> TropMatrix {
    let n = g.len();
    let mut triples = Vec::new();
    for (i, row) in g.iter().enumerate() {
        for (j, w) in row.iter().enumerate() {
            if let Some(w) = w {
                triples.push((i, j, *w as f64));
            }
        }
    }
    TropMatrix::from_triples(n, triples).expect("grid indices are in range")
}

pub fn random_grid(r: &mut ChaCha8Rng, n: usize, density: f64, lo: i64, hi: i64) -> Grid {
    (0..n)
        .map(|_| {
            (0..n)
                .map(|_| r.gen_bool(density).then(|| r.gen_range(lo..=hi)))
                .collect()
        })
        .collect()
}

pub fn random_irreducible_grid(
    r: &mut ChaCha8Rng,
    n: usize,
    density: f64,
    lo: i64,
    hi: i64,
) -> Grid {
    loop {
        let g = random_grid(r, n, density, lo, hi);
        if scc_oracle(&g).len() == 1 {
            return g;
        }
    }
}

/// Positive-length reachability closure, boolean Floyd-Warshall.
pub fn reach_oracle(g: &Grid) -> Vec<Vec<bool>> {
    let n = g.len();
    let mut reach: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| g[i][j].is_some()).collect())
        .collect();
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    reach
}

/// Strongly connected components from mutual reachability, classes ordered
/// by smallest member, members ascending.
pub fn scc_oracle(g: &Grid) -> Vec<Vec<usize>> {
    let n = g.len();
    let reach = reach_oracle(g);
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if class_of[i] != usize::MAX {
            continue;
        }
        let id = classes.len();
        class_of[i] = id;
        let mut members = vec![i];
        for j in (i + 1)..n {
            if class_of[j] == usize::MAX && reach[i][j] && reach[j][i] {
                class_of[j] = id;
                members.push(j);
            }
        }
        classes.push(members);
    }
    classes
}

/// Exact rational num/den with den > 0, compared by cross-multiplication.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Frac {
    pub num: i64,
    pub den: i64,
}

impl Frac {
    pub fn cmp_frac(self, other: Frac) -> Ordering {
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

/// Everything the elementary circuits of a grid determine: the exact
/// maximum circuit mean and the union of the circuits attaining it.
#[derive(Clone, Debug)]
pub struct CircuitData {
    pub best: Option<Frac>,
    pub critical_nodes: Vec<usize>,
    pub critical_arcs: Vec<(usize, usize)>,
}

/// Enumerates every elementary circuit once, rooted at its smallest node,
/// keeping exact fraction arithmetic throughout.
pub fn circuit_oracle(g: &Grid) -> CircuitData {
    let n = g.len();
    let mut best: Option<Frac> = None;
    let mut nodes: BTreeSet<usize> = BTreeSet::new();
    let mut arcs: BTreeSet<(usize, usize)> = BTreeSet::new();

    fn dfs(
        g: &Grid,
        s: usize,
        u: usize,
        sum: i64,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        best: &mut Option<Frac>,
        nodes: &mut BTreeSet<usize>,
        arcs: &mut BTreeSet<(usize, usize)>,
    ) {
        for v in 0..g.len() {
            let Some(w) = g[u][v] else { continue };
            if v == s {
                let mean = Frac {
                    num: sum + w,
                    den: path.len() as i64,
                };
                let ord = best.map_or(Ordering::Greater, |b| mean.cmp_frac(b));
                if ord == Ordering::Greater {
                    *best = Some(mean);
                    nodes.clear();
                    arcs.clear();
                }
                if ord != Ordering::Less {
                    for t in 0..path.len() {
                        nodes.insert(path[t]);
                        arcs.insert((path[t], path[(t + 1) % path.len()]));
                    }
                }
            } else if v > s && !on_path[v] {
                on_path[v] = true;
                path.push(v);
                dfs(g, s, v, sum + w, path, on_path, best, nodes, arcs);
                path.pop();
                on_path[v] = false;
            }
        }
    }

    let mut path = Vec::with_capacity(n);
    let mut on_path = vec![false; n];
    for s in 0..n {
        path.clear();
        path.push(s);
        on_path.fill(false);
        on_path[s] = true;
        dfs(
            g, s, s, 0, &mut path, &mut on_path, &mut best, &mut nodes, &mut arcs,
        );
    }
    CircuitData {
        best,
        critical_nodes: nodes.into_iter().collect(),
        critical_arcs: arcs.into_iter().collect(),
    }
}

/// hit[m] = does a walk of exactly m arcs lead from i to j, for m in
/// 0..=horizon, by boolean successor propagation.
pub fn walk_hits(g: &Grid, i: usize, j: usize, horizon: usize) -> Vec<bool> {
    let n = g.len();
    let mut cur = vec![false; n];
    cur[i] = true;
    let mut hits = Vec::with_capacity(horizon + 1);
    hits.push(i == j);
    for _ in 1..=horizon {
        let mut next = vec![false; n];
        for u in 0..n {
            if cur[u] {
                for v in 0..n {
                    if g[u][v].is_some() {
                        next[v] = true;
                    }
                }
            }
        }
        cur = next;
        hits.push(cur[j]);
    }
    hits
}

/// Integer matrix den*A - num whose maximum circuit mean is exactly zero
/// when num/den is the maximum circuit mean of the grid.
pub fn scaled_zero_rho(g: &Grid, mean: Frac) -> TropMatrix {
    let n = g.len();
    let mut triples = Vec::new();
    for (i, row) in g.iter().enumerate() {
        for (j, w) in row.iter().enumerate() {
            if let Some(w) = w {
                triples.push((i, j, (mean.den * w - mean.num) as f64));
            }
        }
    }
    TropMatrix::from_triples(n, triples).expect("grid indices are in range")
}

/// Pointwise max-plus combination of columns with the given coefficients.
pub fn max_combo(columns: &[Vec<Trop>], coeffs: &[Trop]) -> Vec<Trop> {
    let n = columns[0].len();
    let mut out = vec![Trop::ZERO; n];
    for (c, col) in coeffs.iter().zip(columns) {
        for i in 0..n {
            out[i] = out[i].oplus(c.otimes(col[i]));
        }
    }
    out
}

/// Best approximation of `target` from below by a max-plus combination of
/// `columns`: each coefficient is the largest one keeping its scaled
/// column under the target. The result equals the target exactly when the
/// columns span it.
pub fn residuated_reconstruction(columns: &[Vec<Trop>], target: &[Trop]) -> Vec<Trop> {
    let n = target.len();
    let mut out = vec![Trop::ZERO; n];
    for col in columns {
        let mut cval = f64::INFINITY;
        let mut blocked = false;
        for i in 0..n {
            if col[i].is_finite() {
                if target[i].is_zero() {
                    blocked = true;
                    break;
                }
                if target[i].is_finite() {
                    cval = cval.min(target[i].value() - col[i].value());
                }
            }
        }
        if blocked || cval == f64::INFINITY {
            continue;
        }
        let c = Trop::new(cval);
        for i in 0..n {
            out[i] = out[i].oplus(c.otimes(col[i]));
        }
    }
    out
}
