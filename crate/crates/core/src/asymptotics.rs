//! Asymptotics of matrix powers: entry traces, coupling detection, the
//! eventual periodicity identity, optimal paths of fixed length, and
//! transience of strictly subcritical matrices.
//!
//! For a finite irreducible matrix the normalized powers A~^n are eventually
//! periodic in n with period dividing the critical cyclicity sigma, and past
//! the coupling time each entry is given by a product of closure factors
//! routed through a critical node. The operations here measure the traces,
//! find the empirical coupling point, and verify the identity at explicit
//! exponents.

use crate::error::Error;
use crate::matrix::TropMatrix;
use crate::scalar::{Tolerance, Trop};
use crate::spectral::{kleene_star, max_cycle_mean, spectral_summary};

/// Entry (i,j) of A^n for n = 1..=N_max, optionally normalized by rho(A)
/// per step.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerTrace {
    pub i: usize,
    pub j: usize,
    pub normalized: bool,
    /// The per-step shift applied when `normalized` (rho of the input),
    /// otherwise 0.
    pub rho: Trop,
    /// values[k] holds the entry of the (k+1)-st power.
    pub values: Vec<Trop>,
}

impl PowerTrace {
    /// Entry of the n-th power, n in 1..=values.len().
    pub fn value_at(&self, n: usize) -> Trop {
        self.values[n - 1]
    }

    pub fn n_max(&self) -> usize {
        self.values.len()
    }
}

/// What the coupling scan concluded about one trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CouplingVerdict {
    /// Periodic tail found: values repeat with the reported period from the
    /// reported power onward, verified over at least three full periods.
    Coupled,
    /// The trace decays without bound (or leaves the finite range) instead
    /// of settling into a periodic regime.
    TransientToZero,
    /// Neither behaviour could be certified within the horizon.
    Inconclusive,
}

/// Outcome of scanning one power trace for its periodic tail.
#[derive(Clone, Debug, PartialEq)]
pub struct CouplingReport {
    pub verdict: CouplingVerdict,
    /// Detected period (a divisor of the hint), when coupled.
    pub sigma: Option<usize>,
    /// First power index from which the periodicity held, when coupled.
    pub n0: Option<usize>,
    /// One period of tail values starting at residue n0 mod sigma, when
    /// coupled.
    pub periodic_values: Vec<Trop>,
    /// Number of trace entries examined.
    pub checked: usize,
}

/// Two sides of the eventual periodicity identity at one exponent.
#[derive(Clone, Debug, PartialEq)]
pub struct FormulaCheck {
    pub lhs: Trop,
    pub rhs: Trop,
    pub n: usize,
    pub sigma: usize,
    pub q: usize,
    pub q_prime: usize,
    pub pass: bool,
    pub marginal: bool,
}

/// A maximizing walk of exact length with its weight.
#[derive(Clone, Debug, PartialEq)]
pub struct OptimalPath {
    pub weight: Trop,
    /// n+1 nodes, `nodes[0] = i`, `nodes[n] = j`. Ties are broken toward the
    /// smallest predecessor index, so the path is deterministic.
    pub nodes: Vec<usize>,
}

/// One row of a turnpike profile: how much of an optimal walk of length n
/// runs outside the critical nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct TurnpikeRow {
    pub n: usize,
    pub weight: Trop,
    pub noncritical_visits: usize,
    pub nodes: Vec<usize>,
}

/// Optimal walks across a range of lengths, with the largest observed
/// off-critical count. For coupled matrices this count stabilizes: long
/// optimal walks spend all but a bounded number of steps on the critical
/// graph.
#[derive(Clone, Debug, PartialEq)]
pub struct TurnpikeProfile {
    pub rows: Vec<TurnpikeRow>,
    pub infeasible: Vec<usize>,
    pub max_noncritical: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TransienceVerdict {
    /// Every entry of A^n stayed at or below the floor from `first_passage`
    /// through the horizon.
    Pass,
    /// Entries were still above the floor at the horizon.
    Inconclusive,
    /// rho(A) >= 0: powers do not decay, the check does not apply.
    NotApplicable,
}

/// Outcome of driving all entries of A^n below a floor.
#[derive(Clone, Debug, PartialEq)]
pub struct TransienceReport {
    pub verdict: TransienceVerdict,
    pub rho: Trop,
    pub floor: f64,
    pub first_passage: Option<usize>,
    pub checked: usize,
}

/// Records entry (i,j) of the first N_max powers. With `normalized` the
/// matrix is first shifted by -rho(A), which requires a circuit.
pub fn power_trace(
    a: &TropMatrix,
    i: usize,
    j: usize,
    n_max: usize,
    normalized: bool,
) -> Result<PowerTrace, Error> {
    let n = a.n();
    if i >= n {
        return Err(Error::IndexOutOfBounds { index: i, n });
    }
    if j >= n {
        return Err(Error::IndexOutOfBounds { index: j, n });
    }
    let (base, rho) = if normalized {
        let rho = max_cycle_mean(a);
        if rho.is_zero() {
            return Err(Error::Acyclic);
        }
        (a.shifted(rho.recip()), rho)
    } else {
        (a.clone(), Trop::ONE)
    };
    let mut values = Vec::with_capacity(n_max);
    let mut cur = base.clone();
    for step in 0..n_max {
        if step > 0 {
            cur = cur.mat_mul(&base)?;
        }
        values.push(cur.get(i, j));
    }
    Ok(PowerTrace {
        i,
        j,
        normalized,
        rho,
        values,
    })
}

fn entries_close(a: Trop, b: Trop, tol: Tolerance) -> bool {
    match (a.is_finite(), b.is_finite()) {
        (true, true) => (a.value() - b.value()).abs() <= tol.eps,
        (false, false) => a == b,
        _ => false,
    }
}

/// Scans a trace for an eventually periodic tail with period dividing
/// `sigma_hint`, requiring at least three verified periods past the
/// detected coupling point; failing that, tests for monotone decay toward
/// -inf along each residue class.
pub fn detect_coupling(trace: &PowerTrace, sigma_hint: usize, tol: Tolerance) -> CouplingReport {
    let values = &trace.values;
    let len = values.len();
    let mut divisors: Vec<usize> = (1..=sigma_hint).filter(|d| sigma_hint % d == 0).collect();
    if divisors.is_empty() {
        divisors.push(1);
    }
    for sigma in divisors {
        if len < 4 * sigma {
            continue;
        }
        // last index where v[k] != v[k + sigma]
        let mut last_break: Option<usize> = None;
        for k in 0..len - sigma {
            if !entries_close(values[k], values[k + sigma], tol) {
                last_break = Some(k);
            }
        }
        let start = last_break.map_or(0, |k| k + 1);
        // demand three full periods of verified agreement past the start
        if start + 4 * sigma <= len {
            return CouplingReport {
                verdict: CouplingVerdict::Coupled,
                sigma: Some(sigma),
                n0: Some(start + 1),
                periodic_values: values[start..start + sigma].to_vec(),
                checked: len,
            };
        }
    }

    // No periodic tail: look for decay to -inf, residue class by residue
    // class over the second half of the trace.
    let sigma = sigma_hint.max(1);
    let half = len / 2;
    // every residue class needs at least one verified comparison
    let mut decaying = half + 2 * sigma <= len;
    if decaying {
        'outer: for r in 0..sigma {
            let mut k = half + r;
            while k + sigma < len {
                let (a, b) = (values[k], values[k + sigma]);
                let ok = match (a.is_finite(), b.is_finite()) {
                    (true, true) => b.value() <= a.value() - tol.eps,
                    (true, false) => b.is_zero(),
                    (false, false) => a.is_zero() && b.is_zero(),
                    (false, true) => false,
                };
                if !ok {
                    decaying = false;
                    break 'outer;
                }
                k += sigma;
            }
        }
    }
    CouplingReport {
        verdict: if decaying {
            CouplingVerdict::TransientToZero
        } else {
            CouplingVerdict::Inconclusive
        },
        sigma: None,
        n0: None,
        periodic_values: Vec::new(),
        checked: len,
    }
}

/// Evaluates both sides of the eventual periodicity identity
/// A~^n(i,j) = max over critical k of (A~^q (A~^sigma)*)(i,k) +
/// (A~^q' (A~^sigma)*)(k,j) at one exponent n, with q + q' = n modulo
/// sigma. Defaults: q = n mod sigma, q' = 0.
pub fn verify_power_formula(
    a: &TropMatrix,
    i: usize,
    j: usize,
    n: usize,
    sigma: usize,
    q: Option<usize>,
    q_prime: Option<usize>,
    tol: Tolerance,
) -> Result<FormulaCheck, Error> {
    let dim = a.n();
    if i >= dim {
        return Err(Error::IndexOutOfBounds { index: i, n: dim });
    }
    if j >= dim {
        return Err(Error::IndexOutOfBounds { index: j, n: dim });
    }
    let rho = max_cycle_mean(a);
    if rho.is_zero() {
        return Err(Error::Acyclic);
    }
    let q = q.unwrap_or(if sigma == 0 { 0 } else { n % sigma });
    let q_prime = q_prime.unwrap_or(0);
    if sigma == 0 || n == 0 || q >= sigma || q_prime >= sigma || (q + q_prime) % sigma != n % sigma
    {
        return Err(Error::InvalidResiduePair {
            q,
            q_prime,
            sigma,
            n,
        });
    }
    let summary = spectral_summary(a, tol);
    if summary.critical_nodes.is_empty() {
        return Err(Error::NoCriticalNodes);
    }

    let tilde = a.shifted(rho.recip());
    let lhs = tilde.pow(n).get(i, j);
    let period_star = kleene_star(&tilde.pow(sigma), tol).star;
    let left_factor = tilde.pow(q).mat_mul(&period_star)?;
    let right_factor = tilde.pow(q_prime).mat_mul(&period_star)?;
    let mut rhs = Trop::ZERO;
    for &k in &summary.critical_nodes {
        rhs = rhs.oplus(left_factor.get(i, k).otimes(right_factor.get(k, j)));
    }
    let pass = entries_close(lhs, rhs, tol);
    let marginal = match (lhs.is_finite(), rhs.is_finite()) {
        (true, true) => tol.marginal((lhs.value() - rhs.value()).abs()),
        _ => false,
    };
    Ok(FormulaCheck {
        lhs,
        rhs,
        n,
        sigma,
        q,
        q_prime,
        pass,
        marginal,
    })
}

/// A maximizing walk i -> j of exactly n arcs, ties broken toward smaller
/// predecessor indices.
pub fn optimal_path(a: &TropMatrix, i: usize, j: usize, n: usize) -> Result<OptimalPath, Error> {
    let dim = a.n();
    if i >= dim {
        return Err(Error::IndexOutOfBounds { index: i, n: dim });
    }
    if j >= dim {
        return Err(Error::IndexOutOfBounds { index: j, n: dim });
    }
    // d[t][v]: best weight of a walk of exactly t arcs from i to v
    let mut d = vec![vec![f64::NEG_INFINITY; dim]; n + 1];
    let mut parent = vec![vec![usize::MAX; dim]; n + 1];
    d[0][i] = 0.0;
    for t in 1..=n {
        for u in 0..dim {
            let du = d[t - 1][u];
            if du == f64::NEG_INFINITY {
                continue;
            }
            for &(v, w) in a.row(u) {
                let cand = du + w.value();
                // strict improvement keeps the smallest-u maximizer
                if cand > d[t][v] {
                    d[t][v] = cand;
                    parent[t][v] = u;
                }
            }
        }
    }
    if d[n][j] == f64::NEG_INFINITY {
        return Err(Error::NoPath {
            from: i,
            to: j,
            length: n,
        });
    }
    let mut nodes = vec![0usize; n + 1];
    nodes[n] = j;
    for t in (1..=n).rev() {
        nodes[t - 1] = parent[t][nodes[t]];
    }
    debug_assert_eq!(nodes[0], i);
    Ok(OptimalPath {
        weight: Trop::new(d[n][j]),
        nodes,
    })
}

/// Optimal walks for each requested length, counting visits to nodes
/// outside the critical set.
pub fn turnpike_profile(
    a: &TropMatrix,
    i: usize,
    j: usize,
    n_list: &[usize],
    tol: Tolerance,
) -> Result<TurnpikeProfile, Error> {
    let summary = spectral_summary(a, tol);
    let mut is_critical = vec![false; a.n()];
    for &v in &summary.critical_nodes {
        is_critical[v] = true;
    }
    let mut rows = Vec::new();
    let mut infeasible = Vec::new();
    let mut max_noncritical = 0;
    for &n in n_list {
        match optimal_path(a, i, j, n) {
            Ok(path) => {
                let noncritical_visits =
                    path.nodes.iter().filter(|&&v| !is_critical[v]).count();
                max_noncritical = max_noncritical.max(noncritical_visits);
                rows.push(TurnpikeRow {
                    n,
                    weight: path.weight,
                    noncritical_visits,
                    nodes: path.nodes,
                });
            }
            Err(Error::NoPath { .. }) => infeasible.push(n),
            Err(e) => return Err(e),
        }
    }
    Ok(TurnpikeProfile {
        rows,
        infeasible,
        max_noncritical,
    })
}

/// Checks that powers of a strictly subcritical matrix sink below `floor`:
/// applicable when rho(A) < 0 (including -inf), verdict Pass once every
/// entry of A^n stays at or below the floor through the horizon.
pub fn transience_check(
    a: &TropMatrix,
    floor: f64,
    n_max: usize,
    tol: Tolerance,
) -> Result<TransienceReport, Error> {
    let rho = max_cycle_mean(a);
    if rho.is_finite() && rho.value() >= -tol.eps {
        return Ok(TransienceReport {
            verdict: TransienceVerdict::NotApplicable,
            rho,
            floor,
            first_passage: None,
            checked: 0,
        });
    }
    let mut cur = a.clone();
    let mut last_above: Option<usize> = None;
    for step in 1..=n_max {
        if step > 1 {
            cur = cur.mat_mul(a)?;
        }
        let max_entry = cur
            .entries()
            .map(|(_, _, w)| w)
            .fold(Trop::ZERO, |acc, w| acc.oplus(w));
        if max_entry.is_finite() && max_entry.value() > floor || max_entry.is_top() {
            last_above = Some(step);
        }
    }
    let (verdict, first_passage) = match last_above {
        Some(step) if step >= n_max => (TransienceVerdict::Inconclusive, None),
        Some(step) => (TransienceVerdict::Pass, Some(step + 1)),
        None => (TransienceVerdict::Pass, Some(1)),
    };
    Ok(TransienceReport {
        verdict,
        rho,
        floor,
        first_passage,
        checked: n_max,
    })
}
