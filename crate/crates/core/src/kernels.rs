//! Infinite kernels over the node set 0, 1, 2, ... presented lazily by
//! rows, finite windows cut from them, and window-level probes: closure
//! limits, tightness level sets, Martin kernels, and boundary columns.
//!
//! A kernel is a function from a node to its outgoing arcs. Rows may be
//! infinite (the triangular family has arcs to every higher node), so the
//! row generator takes a horizon and reports how many arcs it dropped.
//! Each catalog kernel carries the closed forms known for it, used as
//! oracles when probing how window quantities converge.

use crate::error::Error;
use crate::matrix::TropMatrix;
use crate::scalar::{Tolerance, Trop};
use crate::spectral::{kleene_star, max_cycle_mean};

/// Number of arcs a row generator dropped beyond the horizon.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArcCount {
    Finite(usize),
    Infinite,
}

impl ArcCount {
    pub fn plus(self, other: ArcCount) -> ArcCount {
        match (self, other) {
            (ArcCount::Finite(a), ArcCount::Finite(b)) => ArcCount::Finite(a + b),
            _ => ArcCount::Infinite,
        }
    }

    pub fn is_zero(self) -> bool {
        self == ArcCount::Finite(0)
    }
}

/// Outgoing arcs of one node up to a horizon, in the kernel's natural
/// printing order, plus the count of arcs beyond the horizon.
#[derive(Clone, Debug, PartialEq)]
pub struct RowArcs {
    pub arcs: Vec<(usize, Trop)>,
    pub dropped: ArcCount,
}

type EntryForm = Box<dyn Fn(usize, usize) -> Option<Trop> + Send + Sync>;
type VectorForm = Box<dyn Fn(f64, usize) -> Option<Trop> + Send + Sync>;
type MartinForm = Box<dyn Fn(f64, usize, usize) -> Option<Trop> + Send + Sync>;

/// A closed-form trace for one entry pair of the powers.
pub struct PowerForm {
    pub i: usize,
    pub j: usize,
    pub f: Box<dyn Fn(usize) -> Option<Trop> + Send + Sync>,
}

/// Closed forms known for a kernel, used as test and probe oracles.
/// A `None` field means no formula is carried; a closure returning `None`
/// means the formula does not cover those arguments.
pub struct ClosedForms {
    /// Supremum of circuit means; the note says whether it is attained.
    pub rho: Option<Trop>,
    /// Entry (i,j) of the positive-length closure of the full kernel.
    pub plus: Option<EntryForm>,
    /// Entry (i,j) of the reflexive closure of the full kernel.
    pub star: Option<EntryForm>,
    /// Entry k of an eigenvector for the given eigenvalue, when one exists.
    pub eigenvector: Option<VectorForm>,
    /// Martin kernel entry (lambda, i, j) with basepoint 0.
    pub martin: Option<MartinForm>,
    /// Closed-form power trace for one distinguished entry pair.
    pub power: Option<PowerForm>,
    /// What the spectrum looks like (attainment, critical structure).
    pub spectrum_note: String,
    /// How window quantities approach the closed forms, with rates.
    pub convergence_note: String,
}

/// An infinite kernel presented by rows.
pub struct LazyKernel {
    pub name: String,
    pub params: Vec<(String, f64)>,
    pub description: String,
    row_fn: Box<dyn Fn(usize, usize) -> RowArcs + Send + Sync>,
    pub forms: ClosedForms,
}

impl std::fmt::Debug for LazyKernel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "LazyKernel({})", self.spec_string())
    }
}

impl LazyKernel {
    /// Wraps a finite matrix as a kernel whose rows are the matrix rows,
    /// so the window probes apply to matrices and infinite kernels alike.
    /// No closed forms are carried.
    pub fn from_matrix(m: TropMatrix, name: impl Into<String>) -> LazyKernel {
        let description = format!("finite matrix of size {}", m.n());
        LazyKernel {
            name: name.into(),
            params: Vec::new(),
            description,
            row_fn: Box::new(move |i, horizon| {
                let mut arcs = Vec::new();
                let mut dropped = 0usize;
                if i < m.n() {
                    for &(j, w) in m.row(i) {
                        if j <= horizon {
                            arcs.push((j, w));
                        } else {
                            dropped += 1;
                        }
                    }
                }
                RowArcs {
                    arcs,
                    dropped: ArcCount::Finite(dropped),
                }
            }),
            forms: ClosedForms {
                rho: None,
                plus: None,
                star: None,
                eigenvector: None,
                martin: None,
                power: None,
                spectrum_note: String::new(),
                convergence_note: String::new(),
            },
        }
    }

    /// Outgoing arcs of `node` with targets at most `horizon`.
    pub fn row(&self, node: usize, horizon: usize) -> RowArcs {
        (self.row_fn)(node, horizon)
    }

    /// Canonical spec string, parseable by [`kernel_by_spec`].
    pub fn spec_string(&self) -> String {
        let mut s = self.name.clone();
        for (k, v) in &self.params {
            s.push_str(&format!(" {k}={}", fmt_f64(*v)));
        }
        s
    }
}

fn fmt_f64(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

/// A finite window of a kernel: nodes 0..=n_max and every arc between them.
#[derive(Clone, Debug, PartialEq)]
pub struct Window {
    pub n_max: usize,
    pub matrix: TropMatrix,
    /// Total arcs lost to the cut, over all rows.
    pub dropped_arcs: ArcCount,
    /// Rows that lost at least one arc; checks against the full kernel
    /// should not trust these rows.
    pub rows_truncated: Vec<usize>,
}

/// Cuts the window on nodes 0..=n_max out of a kernel.
pub fn truncate(kernel: &LazyKernel, n_max: usize) -> Result<Window, Error> {
    let mut triples = Vec::new();
    let mut dropped = ArcCount::Finite(0);
    let mut rows_truncated = Vec::new();
    for i in 0..=n_max {
        let row = kernel.row(i, n_max);
        for &(j, w) in &row.arcs {
            debug_assert!(j <= n_max);
            triples.push((i, j, w));
        }
        if !row.dropped.is_zero() {
            rows_truncated.push(i);
        }
        dropped = dropped.plus(row.dropped);
    }
    let matrix = TropMatrix::from_triples(n_max + 1, triples)?;
    Ok(Window {
        n_max,
        matrix,
        dropped_arcs: dropped,
        rows_truncated,
    })
}

/// One window's value of a closure entry, next to the oracle when known.
#[derive(Clone, Debug, PartialEq)]
pub struct WindowSample {
    pub n_window: usize,
    pub value: Trop,
    pub oracle: Option<Trop>,
}

fn closure_samples(
    kernel: &LazyKernel,
    i: usize,
    j: usize,
    n_list: &[usize],
    tol: Tolerance,
    reflexive: bool,
) -> Result<Vec<WindowSample>, Error> {
    let mut out = Vec::new();
    for &n in n_list {
        if i > n {
            return Err(Error::IndexOutOfBounds { index: i, n: n + 1 });
        }
        if j > n {
            return Err(Error::IndexOutOfBounds { index: j, n: n + 1 });
        }
        let win = truncate(kernel, n)?;
        let closure = kleene_star(&win.matrix, tol);
        let value = if reflexive {
            closure.star.get(i, j)
        } else {
            closure.plus.get(i, j)
        };
        let form = if reflexive {
            kernel.forms.star.as_ref()
        } else {
            kernel.forms.plus.as_ref()
        };
        out.push(WindowSample {
            n_window: n,
            value,
            oracle: form.and_then(|f| f(i, j)),
        });
    }
    Ok(out)
}

/// Star closure entry (i,j) across a list of window sizes, with the
/// kernel's closed form alongside when it carries one.
pub fn window_star_limit(
    kernel: &LazyKernel,
    i: usize,
    j: usize,
    n_list: &[usize],
    tol: Tolerance,
) -> Result<Vec<WindowSample>, Error> {
    closure_samples(kernel, i, j, n_list, tol, true)
}

/// Positive-length closure entry (i,j) across window sizes.
pub fn window_plus_limit(
    kernel: &LazyKernel,
    i: usize,
    j: usize,
    n_list: &[usize],
    tol: Tolerance,
) -> Result<Vec<WindowSample>, Error> {
    closure_samples(kernel, i, j, n_list, tol, false)
}

/// Level set of the two-sided path weight map through an intermediate node.
#[derive(Clone, Debug, PartialEq)]
pub struct TightnessReport {
    pub i: usize,
    pub j: usize,
    pub beta: f64,
    pub n_window: usize,
    /// Nodes v in the window with star(i,v) + star(v,j) >= beta.
    pub level_set: Vec<usize>,
    /// Whether the level set still touches the window edge; a saturated
    /// probe says nothing about the full kernel, a bounded one exhibits a
    /// finite level set.
    pub saturated: bool,
}

/// Computes the level set {v : star(i,v) otimes star(v,j) >= beta} on one
/// window. The set is trustworthy only when it stays clear of the window
/// edge (`saturated = false`).
pub fn property_t_probe(
    kernel: &LazyKernel,
    i: usize,
    j: usize,
    beta: f64,
    n_max: usize,
    tol: Tolerance,
) -> Result<TightnessReport, Error> {
    if i > n_max {
        return Err(Error::IndexOutOfBounds {
            index: i,
            n: n_max + 1,
        });
    }
    if j > n_max {
        return Err(Error::IndexOutOfBounds {
            index: j,
            n: n_max + 1,
        });
    }
    let win = truncate(kernel, n_max)?;
    let closure = kleene_star(&win.matrix, tol);
    let mut level_set = Vec::new();
    for v in 0..=n_max {
        let through = closure.star.get(i, v).otimes(closure.star.get(v, j));
        let in_level = through.is_top()
            || (through.is_finite() && through.value() >= beta - tol.eps);
        if in_level {
            level_set.push(v);
        }
    }
    let saturated = level_set.last().is_some_and(|&last| last + 1 >= n_max);
    Ok(TightnessReport {
        i,
        j,
        beta,
        n_window: n_max,
        level_set,
        saturated,
    })
}

/// Martin kernel of one window: K(i,j) = star(A - lambda)(i,j) - pi(j),
/// where pi is the basepoint row of the shifted closure.
#[derive(Clone, Debug, PartialEq)]
pub struct MartinWindow {
    pub lambda: f64,
    pub basepoint: usize,
    pub n_max: usize,
    pub kernel: TropMatrix,
    pub pi: Vec<Trop>,
    /// Worst violation of the bound K(i,j) <= -pi(i) over the window;
    /// nonpositive up to rounding.
    pub max_bound_excess: f64,
}

/// Builds the Martin kernel of the window for an eigenvalue candidate
/// lambda at or above the window's circuit-mean radius.
pub fn martin_kernel(
    kernel: &LazyKernel,
    lambda: f64,
    basepoint: usize,
    n_max: usize,
    tol: Tolerance,
) -> Result<MartinWindow, Error> {
    if basepoint > n_max {
        return Err(Error::IndexOutOfBounds {
            index: basepoint,
            n: n_max + 1,
        });
    }
    let win = truncate(kernel, n_max)?;
    let rho = max_cycle_mean(&win.matrix);
    if rho.is_finite() && lambda < rho.value() - tol.eps {
        return Err(Error::LambdaBelowRho {
            lambda,
            rho: rho.value(),
        });
    }
    let shifted = win.matrix.shifted(Trop::new(-lambda));
    let star = kleene_star(&shifted, tol).star;
    let n = star.n();
    let mut pi = Vec::with_capacity(n);
    for j in 0..n {
        let p = star.get(basepoint, j);
        if p.is_zero() {
            return Err(Error::UnreachableBasepoint {
                basepoint,
                node: j,
            });
        }
        pi.push(p);
    }
    let mut k = TropMatrix::new(n);
    let mut max_bound_excess = f64::NEG_INFINITY;
    for i in 0..n {
        for j in 0..n {
            let v = star.get(i, j).otimes(pi[j].recip());
            if v.is_finite() {
                k.set(i, j, v);
                if pi[i].is_finite() {
                    max_bound_excess = max_bound_excess.max(v.value() + pi[i].value());
                }
            } else if v.is_top() {
                k.set(i, j, v);
                max_bound_excess = f64::INFINITY;
            }
        }
    }
    if max_bound_excess == f64::NEG_INFINITY {
        max_bound_excess = 0.0;
    }
    Ok(MartinWindow {
        lambda,
        basepoint,
        n_max,
        kernel: k,
        pi,
        max_bound_excess,
    })
}

/// Samples of one Martin kernel row against the column index.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryProbe {
    pub i: usize,
    pub samples: Vec<(usize, Trop)>,
    /// The last sample when the final three agree within eps, else None.
    pub limit: Option<Trop>,
}

/// Probes the boundary behaviour of a Martin kernel row: K(i, j) for fixed
/// i along increasing j. The j list is sorted and deduplicated internally.
pub fn boundary_column_probe(
    kernel: &LazyKernel,
    lambda: f64,
    basepoint: usize,
    i: usize,
    j_list: &[usize],
    n_max: usize,
    tol: Tolerance,
) -> Result<BoundaryProbe, Error> {
    if i > n_max {
        return Err(Error::IndexOutOfBounds {
            index: i,
            n: n_max + 1,
        });
    }
    let mut js: Vec<usize> = j_list.to_vec();
    js.sort_unstable();
    js.dedup();
    if let Some(&last) = js.last() {
        if last > n_max {
            return Err(Error::IndexOutOfBounds {
                index: last,
                n: n_max + 1,
            });
        }
    }
    let mw = martin_kernel(kernel, lambda, basepoint, n_max, tol)?;
    let samples: Vec<(usize, Trop)> = js.iter().map(|&j| (j, mw.kernel.get(i, j))).collect();
    let limit = if samples.len() >= 3 {
        let tail = &samples[samples.len() - 3..];
        let stable = tail.windows(2).all(|w| {
            let (a, b) = (w[0].1, w[1].1);
            match (a.is_finite(), b.is_finite()) {
                (true, true) => (a.value() - b.value()).abs() <= tol.eps,
                (false, false) => a == b,
                _ => false,
            }
        });
        stable.then(|| tail[2].1)
    } else {
        None
    };
    Ok(BoundaryProbe { i, samples, limit })
}

/// Harmonic number H_n as f64.
fn harmonic(n: usize) -> f64 {
    (1..=n).map(|k| 1.0 / k as f64).sum()
}

/// Chain with unit up-arcs and a reset to the origin whose cost fades
/// harmonically with height.
pub fn reset_harmonic() -> LazyKernel {
    let row_fn = move |i: usize, h: usize| -> RowArcs {
        let mut arcs = Vec::new();
        let mut dropped = 0usize;
        if i + 1 <= h {
            arcs.push((i + 1, Trop::ONE));
        } else {
            dropped += 1;
        }
        if i >= 1 {
            arcs.push((0, Trop::new(-1.0 / i as f64)));
        }
        RowArcs {
            arcs,
            dropped: ArcCount::Finite(dropped),
        }
    };
    LazyKernel {
        name: "reset-harmonic".into(),
        params: vec![],
        description: "free climb with a reset to 0 costing -1/i from height i".into(),
        row_fn: Box::new(row_fn),
        forms: ClosedForms {
            rho: Some(Trop::ONE),
            plus: Some(Box::new(|_, _| Some(Trop::ONE))),
            star: Some(Box::new(|_, _| Some(Trop::ONE))),
            eigenvector: Some(Box::new(|lambda, _| {
                (lambda == 0.0).then_some(Trop::ONE)
            })),
            martin: None,
            power: None,
            spectrum_note: "rho = 0 is a supremum over ever-higher reset circuits and is \
                            never attained; no node is recurrent, yet the constant vector \
                            is an eigenvector and all nodes fall in one recurrence class \
                            of the full kernel"
                .into(),
            convergence_note: "window closures equal 0 exactly for j > i; for j <= i the \
                               window value is -1/N, approaching the closed form at rate \
                               1/N, never within fine tolerances at desk scale"
                .into(),
        },
    }
}

/// Chain with unit up-arcs and a flat reset cost of -1.
pub fn reset_unit() -> LazyKernel {
    let row_fn = move |i: usize, h: usize| -> RowArcs {
        let mut arcs = Vec::new();
        let mut dropped = 0usize;
        if i + 1 <= h {
            arcs.push((i + 1, Trop::ONE));
        } else {
            dropped += 1;
        }
        if i >= 1 {
            arcs.push((0, Trop::new(-1.0)));
        }
        RowArcs {
            arcs,
            dropped: ArcCount::Finite(dropped),
        }
    };
    LazyKernel {
        name: "reset-unit".into(),
        params: vec![],
        description: "free climb with a flat reset to 0 costing -1".into(),
        row_fn: Box::new(row_fn),
        forms: ClosedForms {
            rho: Some(Trop::ONE),
            plus: Some(Box::new(|i, j| {
                Some(if j > i { Trop::ONE } else { Trop::new(-1.0) })
            })),
            star: Some(Box::new(|i, j| {
                Some(if j >= i { Trop::ONE } else { Trop::new(-1.0) })
            })),
            eigenvector: Some(Box::new(|lambda, _| {
                (lambda == 0.0).then_some(Trop::ONE)
            })),
            martin: None,
            power: None,
            spectrum_note: "rho = 0 is approached by circuits through ever-higher nodes \
                            but never attained; the closure is finite everywhere and no \
                            pair of nodes is recurrence-equivalent"
                .into(),
            convergence_note: "window closures agree with the closed form exactly once \
                               the window contains both indices"
                .into(),
        },
    }
}

/// The harmonic reset chain with a zero loop added at every node.
pub fn reset_loop() -> LazyKernel {
    let row_fn = move |i: usize, h: usize| -> RowArcs {
        let mut arcs = vec![(i, Trop::ONE)];
        let mut dropped = 0usize;
        if i + 1 <= h {
            arcs.push((i + 1, Trop::ONE));
        } else {
            dropped += 1;
        }
        if i >= 1 {
            arcs.push((0, Trop::new(-1.0 / i as f64)));
        }
        RowArcs {
            arcs,
            dropped: ArcCount::Finite(dropped),
        }
    };
    LazyKernel {
        name: "reset-loop".into(),
        params: vec![],
        description: "harmonic reset chain with a zero loop at every node".into(),
        row_fn: Box::new(row_fn),
        forms: ClosedForms {
            rho: Some(Trop::ONE),
            plus: Some(Box::new(|_, _| Some(Trop::ONE))),
            star: Some(Box::new(|_, _| Some(Trop::ONE))),
            eigenvector: Some(Box::new(|lambda, _| {
                (lambda == 0.0).then_some(Trop::ONE)
            })),
            martin: None,
            power: None,
            spectrum_note: "rho = 0 is attained by every loop, so each node is its own \
                            critical class, while the full kernel has a single recurrence \
                            class covering all nodes"
                .into(),
            convergence_note: "window closures are exact for j >= i; for j < i the window \
                               value -1/N climbs to the closed form 0 at rate 1/N"
                .into(),
        },
    }
}

/// Ladder with a zero loop at the bottom: up-arcs free, down-arcs cost -1.
pub fn tight1() -> LazyKernel {
    let row_fn = move |i: usize, h: usize| -> RowArcs {
        let mut arcs = Vec::new();
        let mut dropped = 0usize;
        if i == 0 {
            arcs.push((0, Trop::ONE));
        } else {
            arcs.push((i - 1, Trop::new(-1.0)));
        }
        if i + 1 <= h {
            arcs.push((i + 1, Trop::ONE));
        } else {
            dropped += 1;
        }
        RowArcs {
            arcs,
            dropped: ArcCount::Finite(dropped),
        }
    };
    LazyKernel {
        name: "tight1".into(),
        params: vec![],
        description: "ladder with free up-arcs, unit down-cost, and a zero loop at 0".into(),
        row_fn: Box::new(row_fn),
        forms: ClosedForms {
            rho: Some(Trop::ONE),
            plus: Some(Box::new(|i, j| {
                Some(if i > j {
                    Trop::new(j as f64 - i as f64)
                } else if i == j && i != 0 {
                    Trop::new(-1.0)
                } else {
                    Trop::ONE
                })
            })),
            star: Some(Box::new(|i, j| {
                Some(if i > j {
                    Trop::new(j as f64 - i as f64)
                } else {
                    Trop::ONE
                })
            })),
            eigenvector: Some(Box::new(|lambda, k| {
                (lambda == 0.0).then(|| Trop::new(-(k as f64)))
            })),
            martin: Some(Box::new(|lambda, i, j| {
                (lambda == 0.0).then(|| {
                    if i > j {
                        Trop::new(j as f64 - i as f64)
                    } else {
                        Trop::ONE
                    }
                })
            })),
            power: None,
            spectrum_note: "rho = 0 is attained by the loop at 0, the unique critical \
                            class; the eigenvectors at 0 are generated by the descending \
                            column (-i) together with the constant vector"
                .into(),
            convergence_note: "window closures match the closed forms exactly whenever \
                               the window contains both indices"
                .into(),
        },
    }
}

/// Ladder without a loop: up-arcs free, down-arc from i costs -1/i.
pub fn tight2() -> LazyKernel {
    let row_fn = move |i: usize, h: usize| -> RowArcs {
        let mut arcs = Vec::new();
        let mut dropped = 0usize;
        if i >= 1 {
            arcs.push((i - 1, Trop::new(-1.0 / i as f64)));
        }
        if i + 1 <= h {
            arcs.push((i + 1, Trop::ONE));
        } else {
            dropped += 1;
        }
        RowArcs {
            arcs,
            dropped: ArcCount::Finite(dropped),
        }
    };
    let plus_form = |i: usize, j: usize| -> Option<Trop> {
        Some(if i > j {
            Trop::new(-(harmonic(i) - harmonic(j)))
        } else if i == j {
            Trop::new(-1.0 / (i as f64 + 1.0))
        } else {
            Trop::ONE
        })
    };
    LazyKernel {
        name: "tight2".into(),
        params: vec![],
        description: "ladder with free up-arcs and harmonic down-costs, no loop".into(),
        row_fn: Box::new(row_fn),
        forms: ClosedForms {
            rho: Some(Trop::ONE),
            plus: Some(Box::new(plus_form)),
            star: Some(Box::new(|i, j| {
                Some(if i > j {
                    Trop::new(-(harmonic(i) - harmonic(j)))
                } else {
                    Trop::ONE
                })
            })),
            eigenvector: Some(Box::new(|lambda, _| {
                (lambda == 0.0).then_some(Trop::ONE)
            })),
            martin: Some(Box::new(|lambda, i, j| {
                (lambda == 0.0).then(|| {
                    if i > j {
                        Trop::new(-(harmonic(i) - harmonic(j)))
                    } else {
                        Trop::ONE
                    }
                })
            })),
            power: Some(PowerForm {
                i: 0,
                j: 0,
                f: Box::new(|n| {
                    Some(if n % 2 == 0 {
                        Trop::new(-harmonic(n / 2))
                    } else {
                        Trop::ZERO
                    })
                }),
            }),
            spectrum_note: "rho = 0 is a supremum over rung circuits of mean -1/(2(i+1)) \
                            and is never attained; there are no critical or recurrent \
                            nodes, yet the constant vector is an eigenvector and the \
                            level sets of the two-sided closure map are finite"
                .into(),
            convergence_note: "window closures are exact for off-diagonal pairs inside \
                               the window; the diagonal entry (i,i) needs a window of at \
                               least i+1 to close its best circuit"
                .into(),
        },
    }
}

/// Birth-death chain: up-arcs weigh p, down-arcs weigh q.
pub fn birth(p: f64, q: f64) -> Result<LazyKernel, Error> {
    if !p.is_finite() || !q.is_finite() {
        return Err(Error::KernelSpec(
            "birth requires finite parameters p and q".into(),
        ));
    }
    let rho = (p + q) / 2.0;
    let row_fn = move |i: usize, h: usize| -> RowArcs {
        let mut arcs = Vec::new();
        let mut dropped = 0usize;
        if i >= 1 {
            arcs.push((i - 1, Trop::new(q)));
        }
        if i + 1 <= h {
            arcs.push((i + 1, Trop::new(p)));
        } else {
            dropped += 1;
        }
        RowArcs {
            arcs,
            dropped: ArcCount::Finite(dropped),
        }
    };
    Ok(LazyKernel {
        name: "birth".into(),
        params: vec![("p".into(), p), ("q".into(), q)],
        description: "birth-death ladder: every up-step weighs p, every down-step q".into(),
        row_fn: Box::new(row_fn),
        forms: ClosedForms {
            rho: Some(Trop::new(rho)),
            plus: None,
            star: None,
            eigenvector: Some(Box::new(move |lambda, k| {
                (lambda >= rho - 1e-12).then(|| Trop::new(k as f64 * (lambda - p)))
            })),
            martin: Some(Box::new(move |lambda, i, j| {
                (lambda >= rho - 1e-12).then(|| {
                    let head = i as f64 * (lambda - p);
                    if j >= i {
                        Trop::new(head)
                    } else {
                        Trop::new(head + (i - j) as f64 * (p + q - 2.0 * lambda))
                    }
                })
            })),
            power: None,
            spectrum_note: "rho = (p+q)/2 is attained by every rung circuit; each window \
                            is a single critical class of cyclicity 2, and for every \
                            lambda >= rho the vector k*(lambda - p) is an eigenvector of \
                            the full kernel"
                .into(),
            convergence_note: "window quantities are exact: all paths between two nodes \
                               of the window already live inside it (at lambda = rho \
                               every path between fixed endpoints has the same weight)"
                .into(),
        },
    })
}

/// Upper-triangular kernel: loops alpha_i = -scale/(i+1) rising toward 0,
/// arcs weighing beta to the predecessor and to every higher node.
pub fn triangular(beta: f64, alpha_scale: f64) -> Result<LazyKernel, Error> {
    if !beta.is_finite() || beta >= 0.0 {
        return Err(Error::KernelSpec(
            "triangular requires a finite negative beta".into(),
        ));
    }
    if !alpha_scale.is_finite() || alpha_scale <= 0.0 {
        return Err(Error::KernelSpec(
            "triangular requires a positive alpha_scale".into(),
        ));
    }
    let alpha = move |i: usize| -alpha_scale / (i as f64 + 1.0);
    let row_fn = move |i: usize, h: usize| -> RowArcs {
        let mut arcs = Vec::new();
        if i >= 1 && i - 1 <= h {
            arcs.push((i - 1, Trop::new(beta)));
        }
        if i <= h {
            arcs.push((i, Trop::new(alpha(i))));
        }
        for j in (i + 1)..=h {
            arcs.push((j, Trop::new(beta)));
        }
        RowArcs {
            arcs,
            dropped: ArcCount::Infinite,
        }
    };
    Ok(LazyKernel {
        name: "triangular".into(),
        params: vec![("beta".into(), beta), ("alpha_scale".into(), alpha_scale)],
        description: "loops rising toward 0 with beta-arcs one step down and to every \
                      higher node; rows are infinite"
            .into(),
        row_fn: Box::new(row_fn),
        forms: ClosedForms {
            rho: Some(Trop::ONE),
            plus: None,
            star: None,
            eigenvector: None,
            martin: Some(Box::new(move |lambda, i, j| {
                (lambda >= 0.0).then(|| {
                    if i < j {
                        Trop::ONE
                    } else if j >= 1 {
                        Trop::new((beta - lambda) * (i as f64 - j as f64 - 1.0))
                    } else {
                        Trop::new((beta - lambda) * i as f64)
                    }
                })
            })),
            power: None,
            spectrum_note: "rho = 0 is the supremum of the loop means and is attained by \
                            no circuit; the kernel is irreducible with finite closure, \
                            has no critical or recurrent nodes, and admits no eigenvector \
                            for any eigenvalue"
                .into(),
            convergence_note: "Martin kernel entries are exact on every window containing \
                               both indices: detours above the window only lose weight; \
                               the window circuit-mean radius -scale/(N+1) climbs to 0 at \
                               rate 1/N"
                .into(),
        },
    })
}

/// Two-node core with a tail: the loop at 0 fixes rho = 0, and the powers
/// trace out the prescribed block-alternating weights alpha_n on (1,1).
pub fn oscillate(a: f64, b: f64, block: usize) -> Result<LazyKernel, Error> {
    if !(-2.0..=-1.0).contains(&a) || !(-2.0..=-1.0).contains(&b) {
        return Err(Error::KernelSpec(
            "oscillate requires weights a and b in [-2, -1]".into(),
        ));
    }
    if block == 0 {
        return Err(Error::KernelSpec("oscillate requires block >= 1".into()));
    }
    let alpha = move |n: usize| -> f64 {
        debug_assert!(n >= 2);
        if ((n - 2) / block) % 2 == 0 {
            a
        } else {
            b
        }
    };
    let row_fn = move |i: usize, h: usize| -> RowArcs {
        let mut arcs = Vec::new();
        let mut dropped = 0usize;
        match i {
            0 => {
                arcs.push((0, Trop::ONE));
                if 1 <= h {
                    arcs.push((1, Trop::new(-1.0)));
                } else {
                    dropped += 1;
                }
            }
            1 => {
                arcs.push((0, Trop::new(-1.0)));
                if 2 <= h {
                    arcs.push((2, Trop::ONE));
                } else {
                    dropped += 1;
                }
            }
            k => {
                arcs.push((1, Trop::new(alpha(k))));
                if k + 1 <= h {
                    arcs.push((k + 1, Trop::ONE));
                } else {
                    dropped += 1;
                }
            }
        }
        RowArcs {
            arcs,
            dropped: ArcCount::Finite(dropped),
        }
    };
    Ok(LazyKernel {
        name: "oscillate".into(),
        params: vec![
            ("a".into(), a),
            ("b".into(), b),
            ("block".into(), block as f64),
        ],
        description: "zero loop at 0 and a free climb whose return arcs to 1 alternate \
                      between two weights in blocks"
            .into(),
        row_fn: Box::new(row_fn),
        forms: ClosedForms {
            rho: Some(Trop::ONE),
            plus: None,
            star: None,
            eigenvector: None,
            martin: None,
            power: Some(PowerForm {
                i: 1,
                j: 1,
                f: Box::new(move |n| (n >= 2).then(|| Trop::new(alpha(n)))),
            }),
            spectrum_note: "rho = 0 is attained by the loop at 0; the power entry (1,1) \
                            equals the prescribed weight alpha_n for every n >= 2, so \
                            normalized powers can oscillate forever without converging"
                .into(),
            convergence_note: "the power entry (1,1) at exponent n is exact on any window \
                               of size at least n: the witnessing circuit climbs to node \
                               n before returning"
                .into(),
        },
    })
}

/// The built-in kernels with their default parameters.
pub fn catalog() -> Vec<LazyKernel> {
    vec![
        reset_harmonic(),
        reset_unit(),
        reset_loop(),
        tight1(),
        tight2(),
        birth(-1.0, -3.0).expect("default birth parameters are valid"),
        triangular(-1.0, 1.0).expect("default triangular parameters are valid"),
        oscillate(-1.0, -2.0, 1).expect("default oscillate parameters are valid"),
    ]
}

/// Parses a kernel spec string: a catalog name followed by optional
/// `key=value` parameter overrides, e.g. `birth p=-1 q=-3`.
pub fn kernel_by_spec(spec: &str) -> Result<LazyKernel, Error> {
    let mut tokens = spec.split_whitespace();
    let name = tokens
        .next()
        .ok_or_else(|| Error::KernelSpec("empty kernel spec".into()))?;
    let mut params: Vec<(String, f64)> = Vec::new();
    for tok in tokens {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| Error::KernelSpec(format!("expected key=value, got '{tok}'")))?;
        let v: f64 = v
            .parse()
            .map_err(|_| Error::KernelSpec(format!("bad numeric value in '{tok}'")))?;
        params.push((k.to_string(), v));
    }
    let get = |key: &str, default: f64| -> Result<f64, Error> {
        let mut found = default;
        for (k, v) in &params {
            if k == key {
                found = *v;
            }
        }
        Ok(found)
    };
    let allowed: &[&str] = match name {
        "birth" => &["p", "q"],
        "triangular" => &["beta", "alpha_scale"],
        "oscillate" => &["a", "b", "block"],
        "reset-harmonic" | "reset-unit" | "reset-loop" | "tight1" | "tight2" => &[],
        _ => {
            return Err(Error::KernelSpec(format!(
                "unknown kernel '{name}'; available: reset-harmonic, reset-unit, \
                 reset-loop, tight1, tight2, birth, triangular, oscillate"
            )))
        }
    };
    for (k, _) in &params {
        if !allowed.contains(&k.as_str()) {
            return Err(Error::KernelSpec(format!(
                "kernel '{name}' does not take parameter '{k}'"
            )));
        }
    }
    match name {
        "reset-harmonic" => Ok(reset_harmonic()),
        "reset-unit" => Ok(reset_unit()),
        "reset-loop" => Ok(reset_loop()),
        "tight1" => Ok(tight1()),
        "tight2" => Ok(tight2()),
        "birth" => birth(get("p", -1.0)?, get("q", -3.0)?),
        "triangular" => triangular(get("beta", -1.0)?, get("alpha_scale", 1.0)?),
        "oscillate" => {
            let block = get("block", 1.0)?;
            if block.fract() != 0.0 || block < 1.0 {
                return Err(Error::KernelSpec(
                    "oscillate block must be a positive integer".into(),
                ));
            }
            oscillate(get("a", -1.0)?, get("b", -2.0)?, block as usize)
        }
        _ => unreachable!(),
    }
}
