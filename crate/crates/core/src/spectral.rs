//! Circuit means, Kleene closures, and the recurrence/critical structure of
//! a finite max-plus matrix.
//!
//! The central quantity is the maximal circuit mean rho(A), the best
//! weight-per-arc ratio over circuits of G(A). Everything else is phrased
//! in terms of the normalized matrix A~ = A - rho and its closure:
//! a node is recurrent when some circuit through it attains rho, two
//! recurrent nodes are equivalent when they lie on a common optimal circuit,
//! and the critical graph collects the arcs of optimal circuits. The
//! cyclicities of G(A) and of the critical graph drive the asymptotics
//! module.

use crate::error::Error;
use crate::graph::{scc_partition, SccPartition};
use crate::matrix::TropMatrix;
use crate::scalar::{Tolerance, Trop};

/// Structural summary of one matrix: spectral radius, critical skeleton,
/// recurrence partition, and cyclicities.
///
/// For an acyclic matrix `rho` is -inf and the critical fields are empty.
/// `marginal_nodes` lists nodes whose recurrence test landed within a factor
/// of ten of the tolerance, flagging results that a different eps might
/// classify differently.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralSummary {
    pub rho: Trop,
    pub critical_nodes: Vec<usize>,
    pub critical_arcs: Vec<(usize, usize)>,
    pub critical_classes: Vec<Vec<usize>>,
    pub recurrence_classes: Vec<Vec<usize>>,
    pub gamma: usize,
    pub sigma: usize,
    pub marginal_nodes: Vec<usize>,
}

/// Star and plus closures of a matrix.
///
/// `plus` is the supremum of A^k over k >= 1 (best path weight of positive
/// length), `star` additionally includes the identity. Entries are +inf
/// exactly where a walk can pick up a circuit of strictly positive weight;
/// `diverged` reports whether any such entry exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureResult {
    pub star: TropMatrix,
    pub plus: TropMatrix,
    pub diverged: bool,
}

/// A matrix together with its spectral radius and normalized closure,
/// computed once and shared by the recurrence/critical operations.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub rho: Trop,
    /// A - rho, entrywise.
    pub matrix: TropMatrix,
    /// Closure of the normalized matrix.
    pub closure: ClosureResult,
}

/// Residue structure of path lengths between two nodes of an irreducible
/// matrix: every i -> j path length is congruent to `residue` modulo
/// `gamma`, and every admissible length >= `threshold` is realized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathResidue {
    pub gamma: usize,
    pub residue: usize,
    pub threshold: usize,
}

/// Maximum weight-per-arc ratio over the elementary circuits of G(A),
/// -inf when G(A) is acyclic.
///
/// Runs Karp's dynamic program once per strongly connected component and
/// takes the best class value. Integer weights give an exactly rounded
/// rational result because the program only ever divides a difference of
/// exact sums by a small integer.
pub fn max_cycle_mean(a: &TropMatrix) -> Trop {
    let p = scc_partition(a);
    let mut best = Trop::ZERO;
    for class in &p.classes {
        if let Some(r) = karp_class_mean(a, class) {
            best = best.oplus(Trop::new(r));
        }
    }
    best
}

/// Karp's maximum mean cycle value for one strongly connected class, None
/// when the class carries no circuit (a trivial class).
fn karp_class_mean(a: &TropMatrix, class: &[usize]) -> Option<f64> {
    let m = class.len();
    if m == 1 {
        let v = class[0];
        let w = a.get(v, v);
        return if w.is_zero() { None } else { Some(w.value()) };
    }
    let mut local = vec![usize::MAX; a.n()];
    for (idx, &v) in class.iter().enumerate() {
        local[v] = idx;
    }
    let mut arcs: Vec<(usize, usize, f64)> = Vec::new();
    for &u in class {
        for &(v, w) in a.row(u) {
            if local[v] != usize::MAX {
                arcs.push((local[u], local[v], w.value()));
            }
        }
    }
    // d[t][v] = max weight of a walk with exactly t arcs from class[0] to v
    let mut d = vec![f64::NEG_INFINITY; (m + 1) * m];
    d[0] = 0.0;
    for t in 1..=m {
        let (prev, cur) = d.split_at_mut(t * m);
        let prev = &prev[(t - 1) * m..];
        let cur = &mut cur[..m];
        for &(u, v, w) in &arcs {
            if prev[u] > f64::NEG_INFINITY {
                let cand = prev[u] + w;
                if cand > cur[v] {
                    cur[v] = cand;
                }
            }
        }
    }
    let mut best: Option<f64> = None;
    for v in 0..m {
        let dm = d[m * m + v];
        if dm == f64::NEG_INFINITY {
            continue;
        }
        let mut v_min = f64::INFINITY;
        for k in 0..m {
            let dk = d[k * m + v];
            if dk > f64::NEG_INFINITY {
                let ratio = (dm - dk) / ((m - k) as f64);
                if ratio < v_min {
                    v_min = ratio;
                }
            }
        }
        if v_min < f64::INFINITY && best.map_or(true, |b| v_min > b) {
            best = Some(v_min);
        }
    }
    best
}

/// Star and plus closures with divergence detection.
///
/// Classes whose circuit mean exceeds eps are found first; every pair (i,j)
/// connected by a walk through such a class is +inf in both closures. The
/// remaining entries come from a Floyd-Warshall sweep over the subgraph that
/// avoids those classes, where circuit weights are at most eps and path
/// suprema are attained by elementary paths.
pub fn kleene_star(a: &TropMatrix, tol: Tolerance) -> ClosureResult {
    let n = a.n();
    let p = scc_partition(a);
    let mut supercritical = vec![false; n];
    let mut diverged = false;
    for class in &p.classes {
        if let Some(r) = karp_class_mean(a, class) {
            if r > tol.eps {
                diverged = true;
                for &v in class {
                    supercritical[v] = true;
                }
            }
        }
    }

    let mut dense = vec![f64::NEG_INFINITY; n * n];
    for (i, j, w) in a.entries() {
        if !supercritical[i] && !supercritical[j] {
            dense[i * n + j] = w.value();
        }
    }
    for k in 0..n {
        for i in 0..n {
            let dik = dense[i * n + k];
            if dik == f64::NEG_INFINITY {
                continue;
            }
            for j in 0..n {
                let cand = dik + dense[k * n + j];
                if cand > dense[i * n + j] {
                    dense[i * n + j] = cand;
                }
            }
        }
    }
    let mut plus = TropMatrix::from_dense(n, &dense);

    if diverged {
        // A walk picks up a positive circuit exactly when it can enter and
        // leave one supercritical class, possibly at its endpoints.
        let forward = successor_lists(a);
        let backward = predecessor_lists(a);
        for class in &p.classes {
            if !supercritical[class[0]] {
                continue;
            }
            let from_class = reach_closure(&forward, class);
            let to_class = reach_closure(&backward, class);
            for i in 0..n {
                if !to_class[i] {
                    continue;
                }
                for j in 0..n {
                    if from_class[j] {
                        plus.set(i, j, Trop::TOP);
                    }
                }
            }
        }
    }

    let mut star = plus.clone();
    for i in 0..n {
        star.set(i, i, star.get(i, i).oplus(Trop::ONE));
    }
    ClosureResult {
        star,
        plus,
        diverged,
    }
}

fn successor_lists(a: &TropMatrix) -> Vec<Vec<usize>> {
    (0..a.n())
        .map(|i| a.row(i).iter().map(|&(j, _)| j).collect())
        .collect()
}

fn predecessor_lists(a: &TropMatrix) -> Vec<Vec<usize>> {
    let mut preds = vec![Vec::new(); a.n()];
    for (i, j, _) in a.entries() {
        preds[j].push(i);
    }
    preds
}

/// Nodes reachable from any seed by walks of length >= 0.
fn reach_closure(adj: &[Vec<usize>], seeds: &[usize]) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut queue: Vec<usize> = Vec::new();
    for &s in seeds {
        if !seen[s] {
            seen[s] = true;
            queue.push(s);
        }
    }
    while let Some(v) = queue.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push(w);
            }
        }
    }
    seen
}

/// A - rho(A) entrywise; the result has maximal circuit mean 0.
pub fn normalize(a: &TropMatrix) -> Result<TropMatrix, Error> {
    let rho = max_cycle_mean(a);
    if rho.is_zero() {
        return Err(Error::Acyclic);
    }
    Ok(a.shifted(rho.recip()))
}

/// Computes rho, the normalized matrix, and its closure in one pass; the
/// recurrence and critical operations all start from this.
pub fn normalized_closure(a: &TropMatrix, tol: Tolerance) -> Result<Normalized, Error> {
    let rho = max_cycle_mean(a);
    if rho.is_zero() {
        return Err(Error::Acyclic);
    }
    let matrix = a.shifted(rho.recip());
    let closure = kleene_star(&matrix, tol);
    Ok(Normalized {
        rho,
        matrix,
        closure,
    })
}

fn recurrent_flags(nc: &Normalized, tol: Tolerance) -> Vec<bool> {
    (0..nc.matrix.n())
        .map(|i| {
            let d = nc.closure.plus.get(i, i);
            d.is_finite() && tol.is_one(d)
        })
        .collect()
}

/// Nodes through which some circuit attains the maximal mean: those with a
/// zero-weight return in the normalized closure.
pub fn recurrent_nodes(a: &TropMatrix, tol: Tolerance) -> Result<Vec<usize>, Error> {
    let nc = normalized_closure(a, tol)?;
    let flags = recurrent_flags(&nc, tol);
    Ok((0..a.n()).filter(|&i| flags[i]).collect())
}

fn recurrence_classes_from(nc: &Normalized, tol: Tolerance) -> Vec<Vec<usize>> {
    let flags = recurrent_flags(nc, tol);
    let nodes: Vec<usize> = (0..nc.matrix.n()).filter(|&i| flags[i]).collect();
    let related = |i: usize, j: usize| {
        let pij = nc.closure.plus.get(i, j);
        let pji = nc.closure.plus.get(j, i);
        pij.is_finite() && pji.is_finite() && (pij.value() + pji.value()).abs() <= tol.eps
    };
    let mut assigned = vec![false; nc.matrix.n()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &i in &nodes {
        if assigned[i] {
            continue;
        }
        let mut class = vec![i];
        assigned[i] = true;
        for &j in &nodes {
            if !assigned[j] && related(i, j) {
                assigned[j] = true;
                class.push(j);
            }
        }
        classes.push(class);
    }
    classes
}

/// Equivalence classes of recurrent nodes joined by a pair of paths whose
/// normalized round trip has weight 0.
pub fn recurrence_classes(a: &TropMatrix, tol: Tolerance) -> Result<Vec<Vec<usize>>, Error> {
    let nc = normalized_closure(a, tol)?;
    Ok(recurrence_classes_from(&nc, tol))
}

fn critical_graph_from(nc: &Normalized, tol: Tolerance) -> (Vec<usize>, Vec<(usize, usize)>) {
    let flags = recurrent_flags(nc, tol);
    let nodes: Vec<usize> = (0..nc.matrix.n()).filter(|&i| flags[i]).collect();
    let mut arcs: Vec<(usize, usize)> = Vec::new();
    for (i, j, w) in nc.matrix.entries() {
        if !flags[i] || !flags[j] {
            continue;
        }
        let back = nc.closure.plus.get(j, i);
        if back.is_finite() && (w.value() + back.value()).abs() <= tol.eps {
            arcs.push((i, j));
        }
    }
    (nodes, arcs)
}

/// The union of circuits attaining the maximal mean, characterized by arcs
/// (i,j) whose weight plus the best normalized return path weight is 0.
pub fn critical_graph(
    a: &TropMatrix,
    tol: Tolerance,
) -> Result<(Vec<usize>, Vec<(usize, usize)>), Error> {
    let nc = normalized_closure(a, tol)?;
    Ok(critical_graph_from(&nc, tol))
}

/// Cyclicity of the digraph (nodes, arcs): gcd of circuit lengths per
/// strongly connected component, lcm across components, 1 when no component
/// carries a circuit.
pub fn cyclicity(nodes: &[usize], arcs: &[(usize, usize)]) -> usize {
    if nodes.is_empty() {
        return 1;
    }
    let n = nodes.iter().copied().max().unwrap() + 1;
    let adj = TropMatrix::from_triples(n, arcs.iter().map(|&(u, v)| (u, v, 0.0)))
        .expect("arc endpoints exceed node range");
    let p = scc_partition(&adj);
    let mut class_id = vec![usize::MAX; n];
    for (c, class) in p.classes.iter().enumerate() {
        for &v in class {
            class_id[v] = c;
        }
    }
    let mut result: u128 = 1;
    for class in &p.classes {
        let g = class_circuit_gcd(&adj, class, &class_id);
        if g > 0 {
            result = lcm(result, g as u128);
        }
    }
    usize::try_from(result).expect("cyclicity exceeds usize")
}

/// Gcd of circuit lengths inside one strongly connected class, 0 when the
/// class has no circuit. Uses the BFS-level identity: along any arc u -> v
/// inside the class, level(u) + 1 - level(v) is a multiple of the period,
/// and the gcd over all arcs attains it.
fn class_circuit_gcd(adj: &TropMatrix, class: &[usize], class_id: &[usize]) -> u64 {
    let cid = class_id[class[0]];
    let mut level = vec![i64::MIN; adj.n()];
    level[class[0]] = 0;
    let mut queue = std::collections::VecDeque::from([class[0]]);
    while let Some(u) = queue.pop_front() {
        for &(v, _) in adj.row(u) {
            if class_id[v] == cid && level[v] == i64::MIN {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    let mut g: u64 = 0;
    for &u in class {
        for &(v, _) in adj.row(u) {
            if class_id[v] == cid {
                g = gcd(g, (level[u] + 1 - level[v]).unsigned_abs());
            }
        }
    }
    g
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn gcd_u128(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd_u128(b, a % b)
    }
}

fn lcm(a: u128, b: u128) -> u128 {
    a / gcd_u128(a, b) * b
}

/// Full structural summary; acyclic matrices get rho = -inf, empty critical
/// structure, and sigma = 1.
pub fn spectral_summary(a: &TropMatrix, tol: Tolerance) -> SpectralSummary {
    let all_nodes: Vec<usize> = (0..a.n()).collect();
    let all_arcs: Vec<(usize, usize)> = a.entries().map(|(i, j, _)| (i, j)).collect();
    let gamma = cyclicity(&all_nodes, &all_arcs);
    match normalized_closure(a, tol) {
        Err(_) => SpectralSummary {
            rho: Trop::ZERO,
            critical_nodes: Vec::new(),
            critical_arcs: Vec::new(),
            critical_classes: Vec::new(),
            recurrence_classes: Vec::new(),
            gamma,
            sigma: 1,
            marginal_nodes: Vec::new(),
        },
        Ok(nc) => {
            let (critical_nodes, critical_arcs) = critical_graph_from(&nc, tol);
            let recurrence_classes = recurrence_classes_from(&nc, tol);
            let critical_classes = critical_scc_classes(a.n(), &critical_nodes, &critical_arcs);
            let sigma = cyclicity(&critical_nodes, &critical_arcs);
            let marginal_nodes = (0..a.n())
                .filter(|&i| {
                    let d = nc.closure.plus.get(i, i);
                    d.is_finite() && tol.marginal(d.value())
                })
                .collect();
            SpectralSummary {
                rho: nc.rho,
                critical_nodes,
                critical_arcs,
                critical_classes,
                recurrence_classes,
                gamma,
                sigma,
                marginal_nodes,
            }
        }
    }
}

/// Strongly connected classes of the critical graph, dropping the trivial
/// singletons contributed by non-critical nodes.
fn critical_scc_classes(
    n: usize,
    critical_nodes: &[usize],
    critical_arcs: &[(usize, usize)],
) -> Vec<Vec<usize>> {
    if critical_nodes.is_empty() {
        return Vec::new();
    }
    let mut is_critical = vec![false; n];
    for &v in critical_nodes {
        is_critical[v] = true;
    }
    let adj = TropMatrix::from_triples(n, critical_arcs.iter().map(|&(u, v)| (u, v, 0.0)))
        .expect("critical arcs in range");
    scc_partition(&adj)
        .classes
        .into_iter()
        .filter(|class| class.iter().all(|&v| is_critical[v]))
        .collect()
}

/// Common residue of all i -> j path lengths modulo the cyclicity of G(A),
/// with the least threshold beyond which every admissible length occurs.
/// The length-0 empty path counts when i = j.
///
/// Works on the exact-length reachability sets R_m of the product graph;
/// since the update R_m -> R_{m+1} is deterministic, a single match
/// R_m = R_{m-gamma} certifies periodicity forever after.
pub fn nu_residue(a: &TropMatrix, i: usize, j: usize) -> Result<PathResidue, Error> {
    let n = a.n();
    if i >= n {
        return Err(Error::IndexOutOfBounds { index: i, n });
    }
    if j >= n {
        return Err(Error::IndexOutOfBounds { index: j, n });
    }
    let p = scc_partition(a);
    if !p.is_irreducible() {
        return Err(Error::NotIrreducible);
    }
    if n == 1 && a.get(0, 0).is_zero() {
        // A single node with no loop is irreducible by convention but has no
        // circuits, so path lengths carry no residue structure.
        return Err(Error::Acyclic);
    }
    let all_nodes: Vec<usize> = (0..n).collect();
    let all_arcs: Vec<(usize, usize)> = a.entries().map(|(u, v, _)| (u, v)).collect();
    let gamma = cyclicity(&all_nodes, &all_arcs);

    let adj = successor_lists(a);
    let cap = 4 * n * gamma;
    let mut sets: Vec<Vec<bool>> = Vec::with_capacity(cap + 1);
    let mut start = vec![false; n];
    start[i] = true;
    sets.push(start);
    let mut saturated_at: Option<usize> = None;
    for m in 1..=cap {
        let prev = &sets[m - 1];
        let mut next = vec![false; n];
        for u in 0..n {
            if prev[u] {
                for &v in &adj[u] {
                    next[v] = true;
                }
            }
        }
        sets.push(next);
        if m >= gamma && sets[m] == sets[m - gamma] {
            saturated_at = Some(m);
            break;
        }
    }
    let m_sat = saturated_at.ok_or(Error::ResidueCapReached { cap })?;

    let hits: Vec<bool> = sets.iter().map(|s| s[j]).collect();
    let first_hit = hits
        .iter()
        .position(|&h| h)
        .expect("irreducible graph must reach j within the saturation window");
    let residue = first_hit % gamma;
    let mut last_miss: Option<usize> = None;
    let mut m = residue;
    while m <= m_sat {
        if !hits[m] {
            last_miss = Some(m);
        }
        m += gamma;
    }
    // The slot in the certified periodic window must be a hit, otherwise no
    // admissible length ever reappears, which cannot happen in an
    // irreducible graph with a circuit.
    let rep = (m_sat - gamma) + ((residue + gamma) - (m_sat - gamma) % gamma) % gamma;
    assert!(
        hits[rep],
        "periodic window misses the residue slot; graph not irreducible?"
    );
    let threshold = match last_miss {
        Some(m) if m >= rep => unreachable!("miss inside certified periodic window"),
        Some(m) => m + 1,
        None => 0,
    };
    Ok(PathResidue {
        gamma,
        residue,
        threshold,
    })
}

/// Convenience wrapper: the partition of G(A) into strongly connected
/// components (re-exported from the graph module for callers that start
/// from a matrix).
pub fn scc(a: &TropMatrix) -> SccPartition {
    scc_partition(a)
}
