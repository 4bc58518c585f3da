//! Eigenvectors of finite max-plus matrices: the principal basis attached to
//! the critical classes, residual checks, decomposition into basis columns,
//! extremality, and the structure results for super-eigenvectors.
//!
//! For an irreducible (or merely non-acyclic) matrix the eigenvalue is the
//! maximal circuit mean rho, and the eigenspace is generated by the columns
//! of the normalized closure taken at one representative per critical class.
//! Everything here is finite-dimensional and exact up to float rounding; the
//! tolerance only enters through classification thresholds.

use crate::error::Error;
use crate::matrix::TropMatrix;
use crate::scalar::{Tolerance, Trop};
use crate::spectral::{normalized_closure, spectral_summary, Normalized};

/// Generating family of the eigenspace for the spectral radius: one closure
/// column per critical class, indexed in class order.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenBasis {
    /// The eigenvalue all columns share (the maximal circuit mean).
    pub lambda: Trop,
    /// Column k is star(A - lambda) at node `representatives[k]`.
    pub columns: Vec<Vec<Trop>>,
    /// Smallest node of each critical class.
    pub representatives: Vec<usize>,
    /// The critical classes themselves, ascending.
    pub classes: Vec<Vec<usize>>,
}

/// Outcome of an (in)equality check A u ~ lambda u.
///
/// `residual` is the largest deviation over rows where both sides are
/// finite: |difference| for the equality check, the signed excess
/// (A u)_i - (lambda u)_i for the super-eigenvector check.
/// `exact_zero_mismatch` lists rows where exactly one side is -inf (or one
/// side +inf); such rows can never pass at any tolerance. `marginal` flags
/// residuals within a factor ten of eps.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenCheckReport {
    pub lambda: Trop,
    pub residual: f64,
    pub exact_zero_mismatch: Vec<usize>,
    pub pass: bool,
    pub marginal: bool,
    pub checked_rows: usize,
    pub skipped_rows: Vec<usize>,
}

/// Result of expressing an eigenvector over the principal basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    /// Coefficient per basis column, in basis order: the vector's value at
    /// the class representative.
    pub coefficients: Vec<Trop>,
    /// Largest deviation between the reconstruction and the input.
    pub residual: f64,
    pub reconstruction: Vec<Trop>,
}

/// Per-class verdict of the proportionality of two super-eigenvectors
/// restricted to a recurrence class.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassProportionality {
    pub class: Vec<usize>,
    pub proportional: bool,
    /// Witness c with v = c otimes w on the class, when both restrictions
    /// have a finite entry.
    pub ratio: Option<Trop>,
}

/// Outcome of the minimum principle check: a super-eigenvector must satisfy
/// (A u)_i = rho otimes u_i exactly at every recurrent node.
#[derive(Clone, Debug, PartialEq)]
pub struct MinimumPrincipleReport {
    pub recurrent: Vec<usize>,
    pub max_deviation: f64,
    pub failures: Vec<usize>,
    pub pass: bool,
}

fn all_zero(u: &[Trop]) -> bool {
    u.iter().all(|x| x.is_zero())
}

fn check_dim(a: &TropMatrix, u: &[Trop]) -> Result<(), Error> {
    if u.len() != a.n() {
        return Err(Error::DimensionMismatch {
            left: a.n(),
            right: u.len(),
        });
    }
    Ok(())
}

/// Columns of the normalized closure at one representative per critical
/// class. Every eigenvector for rho is a max-plus combination of these.
pub fn principal_eigenbasis(a: &TropMatrix, tol: Tolerance) -> Result<EigenBasis, Error> {
    let nc = normalized_closure(a, tol)?;
    Ok(basis_from(a, &nc, tol))
}

fn basis_from(a: &TropMatrix, nc: &Normalized, tol: Tolerance) -> EigenBasis {
    let summary = spectral_summary(a, tol);
    let classes = summary.critical_classes;
    let representatives: Vec<usize> = classes.iter().map(|c| c[0]).collect();
    let columns = representatives
        .iter()
        .map(|&r| (0..a.n()).map(|i| nc.closure.star.get(i, r)).collect())
        .collect();
    EigenBasis {
        lambda: nc.rho,
        columns,
        representatives,
        classes,
    }
}

fn check_rows(
    a: &TropMatrix,
    lambda: Trop,
    u: &[Trop],
    skip: &[usize],
    super_mode: bool,
    tol: Tolerance,
) -> Result<EigenCheckReport, Error> {
    check_dim(a, u)?;
    if all_zero(u) {
        return Err(Error::ZeroVector);
    }
    let au = a.mat_vec(u)?;
    let mut skipped = vec![false; a.n()];
    for &s in skip {
        if s >= a.n() {
            return Err(Error::IndexOutOfBounds { index: s, n: a.n() });
        }
        skipped[s] = true;
    }
    let mut residual = f64::NEG_INFINITY;
    let mut mismatch = Vec::new();
    let mut checked_rows = 0;
    for i in 0..a.n() {
        if skipped[i] {
            continue;
        }
        checked_rows += 1;
        let lhs = au[i];
        let rhs = lambda.otimes(u[i]);
        match (lhs.is_finite(), rhs.is_finite()) {
            (true, true) => {
                let d = if super_mode {
                    lhs.value() - rhs.value()
                } else {
                    (lhs.value() - rhs.value()).abs()
                };
                if d > residual {
                    residual = d;
                }
            }
            (false, false) => {
                // -inf = -inf or +inf = +inf both pass; a mixed pair fails
                if lhs.is_zero() != rhs.is_zero() {
                    mismatch.push(i);
                }
            }
            (false, true) => {
                // lhs -inf below a finite bound is fine in super mode
                if !(super_mode && lhs.is_zero()) {
                    mismatch.push(i);
                }
            }
            (true, false) => {
                // finite below +inf is fine in super mode
                if !(super_mode && rhs.is_top()) {
                    mismatch.push(i);
                }
            }
        }
    }
    if residual == f64::NEG_INFINITY {
        residual = 0.0;
    }
    let pass = mismatch.is_empty() && residual <= tol.eps;
    let marginal = tol.marginal(residual);
    Ok(EigenCheckReport {
        lambda,
        residual,
        exact_zero_mismatch: mismatch,
        pass,
        marginal,
        checked_rows,
        skipped_rows: skip.to_vec(),
    })
}

/// Checks A u = lambda u row by row.
pub fn check_eigen(
    a: &TropMatrix,
    lambda: Trop,
    u: &[Trop],
    tol: Tolerance,
) -> Result<EigenCheckReport, Error> {
    check_rows(a, lambda, u, &[], false, tol)
}

/// Same as [`check_eigen`] but ignoring the listed rows; used for windowed
/// matrices whose truncated rows lost arcs and cannot be expected to pass.
pub fn check_eigen_rows(
    a: &TropMatrix,
    lambda: Trop,
    u: &[Trop],
    skip: &[usize],
    tol: Tolerance,
) -> Result<EigenCheckReport, Error> {
    check_rows(a, lambda, u, skip, false, tol)
}

/// Checks A u <= lambda u row by row; `residual` is the worst signed excess.
pub fn check_super_eigen(
    a: &TropMatrix,
    lambda: Trop,
    u: &[Trop],
    tol: Tolerance,
) -> Result<EigenCheckReport, Error> {
    check_rows(a, lambda, u, &[], true, tol)
}

/// Expresses an eigenvector for rho(A) over the principal basis. The
/// coefficient of a class column is the vector's value at the class
/// representative; the reconstruction then agrees with the input up to
/// rounding, and `residual` reports the worst gap.
pub fn decompose(a: &TropMatrix, u: &[Trop], tol: Tolerance) -> Result<Decomposition, Error> {
    let nc = normalized_closure(a, tol)?;
    let report = check_rows(a, nc.rho, u, &[], false, tol)?;
    if !report.pass {
        return Err(Error::NotEigenvector {
            lambda: nc.rho.value(),
            residual: report.residual,
            mismatches: report.exact_zero_mismatch.len(),
        });
    }
    let basis = basis_from(a, &nc, tol);
    let coefficients: Vec<Trop> = basis.representatives.iter().map(|&r| u[r]).collect();
    let mut reconstruction = vec![Trop::ZERO; a.n()];
    for (c, col) in coefficients.iter().zip(&basis.columns) {
        for i in 0..a.n() {
            reconstruction[i] = reconstruction[i].oplus(c.otimes(col[i]));
        }
    }
    let mut residual: f64 = 0.0;
    for i in 0..a.n() {
        match (reconstruction[i].is_finite(), u[i].is_finite()) {
            (true, true) => residual = residual.max((reconstruction[i].value() - u[i].value()).abs()),
            (false, false) => {}
            _ => residual = f64::INFINITY,
        }
    }
    Ok(Decomposition {
        coefficients,
        residual,
        reconstruction,
    })
}

/// True when `v` equals `u` up to one additive constant: same support, and
/// the difference is constant on it.
fn proportional(u: &[Trop], v: &[Trop], tol: Tolerance) -> bool {
    let mut shift: Option<f64> = None;
    for (a, b) in u.iter().zip(v) {
        match (a.is_finite(), b.is_finite()) {
            (true, true) => {
                let d = a.value() - b.value();
                match shift {
                    None => shift = Some(d),
                    Some(s) if (d - s).abs() <= 2.0 * tol.eps => {}
                    Some(_) => return false,
                }
            }
            (false, false) => {
                if a.is_zero() != b.is_zero() {
                    return false;
                }
            }
            _ => return false,
        }
    }
    true
}

/// Whether `u` lies outside the max-plus span of the family members that are
/// not scalar multiples of `u` itself.
///
/// The best sub-approximation of u by a member v uses the residuated
/// coefficient min over the support of v of u_i - v_i; u is extremal exactly
/// when the combination of all such contributions still falls short of u
/// somewhere.
pub fn is_extremal(u: &[Trop], family: &[Vec<Trop>], tol: Tolerance) -> Result<bool, Error> {
    if all_zero(u) {
        return Err(Error::ZeroVector);
    }
    let n = u.len();
    let mut best = vec![Trop::ZERO; n];
    for v in family {
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: v.len(),
            });
        }
        if all_zero(v) || proportional(u, v, tol) {
            continue;
        }
        // largest c with c otimes v <= u
        let mut c = f64::INFINITY;
        for i in 0..n {
            if v[i].is_finite() {
                if u[i].is_zero() {
                    c = f64::NEG_INFINITY;
                    break;
                }
                c = c.min(u[i].value() - v[i].value());
            }
        }
        if c == f64::NEG_INFINITY || c == f64::INFINITY {
            continue;
        }
        let c = Trop::new(c);
        for i in 0..n {
            best[i] = best[i].oplus(c.otimes(v[i]));
        }
    }
    for i in 0..n {
        match (best[i].is_finite(), u[i].is_finite()) {
            (true, true) => {
                if (best[i].value() - u[i].value()).abs() > tol.eps {
                    return Ok(true);
                }
            }
            (false, false) => {
                if best[i] != u[i] {
                    return Ok(true);
                }
            }
            _ => return Ok(true),
        }
    }
    Ok(false)
}

fn require_super_eigen(
    a: &TropMatrix,
    rho: Trop,
    u: &[Trop],
    tol: Tolerance,
) -> Result<(), Error> {
    let report = check_rows(a, rho, u, &[], true, tol)?;
    if !report.pass {
        return Err(Error::NotSuperEigenvector {
            lambda: rho.value(),
            excess: report.residual,
            mismatches: report.exact_zero_mismatch.len(),
        });
    }
    Ok(())
}

/// Compares two super-eigenvectors for rho(A) on each recurrence class:
/// restricted there they must be scalar multiples of each other, and the
/// verdict reports the witness constant.
pub fn restriction_proportionality_check(
    a: &TropMatrix,
    v: &[Trop],
    w: &[Trop],
    tol: Tolerance,
) -> Result<Vec<ClassProportionality>, Error> {
    check_dim(a, v)?;
    check_dim(a, w)?;
    let nc = normalized_closure(a, tol)?;
    require_super_eigen(a, nc.rho, v, tol)?;
    require_super_eigen(a, nc.rho, w, tol)?;
    let summary = spectral_summary(a, tol);
    let mut verdicts = Vec::new();
    for class in summary.recurrence_classes {
        let witness = class
            .iter()
            .find(|&&k| v[k].is_finite() && w[k].is_finite())
            .map(|&k| Trop::new(v[k].value() - w[k].value()));
        let proportional = match witness {
            Some(c) => class.iter().all(|&i| match (v[i].is_finite(), w[i].is_finite()) {
                (true, true) => (v[i].value() - w[i].value() - c.value()).abs() <= tol.eps,
                (false, false) => v[i].is_zero() == w[i].is_zero(),
                _ => false,
            }),
            // no common finite entry: proportional only if both vanish on
            // the whole class
            None => class.iter().all(|&i| v[i].is_zero() && w[i].is_zero()),
        };
        verdicts.push(ClassProportionality {
            class,
            proportional,
            ratio: witness,
        });
    }
    Ok(verdicts)
}

/// Verifies that a super-eigenvector attains equality (A u)_i = rho u_i at
/// every recurrent node.
pub fn minimum_principle_check(
    a: &TropMatrix,
    u: &[Trop],
    tol: Tolerance,
) -> Result<MinimumPrincipleReport, Error> {
    check_dim(a, u)?;
    let nc = normalized_closure(a, tol)?;
    require_super_eigen(a, nc.rho, u, tol)?;
    let summary = spectral_summary(a, tol);
    let au = a.mat_vec(u)?;
    let mut max_deviation: f64 = 0.0;
    let mut failures = Vec::new();
    for &i in &summary.critical_nodes {
        let lhs = au[i];
        let rhs = nc.rho.otimes(u[i]);
        match (lhs.is_finite(), rhs.is_finite()) {
            (true, true) => {
                let d = (lhs.value() - rhs.value()).abs();
                max_deviation = max_deviation.max(d);
                if d > tol.eps {
                    failures.push(i);
                }
            }
            (false, false) => {}
            _ => {
                max_deviation = f64::INFINITY;
                failures.push(i);
            }
        }
    }
    let pass = failures.is_empty();
    Ok(MinimumPrincipleReport {
        recurrent: summary.critical_nodes,
        max_deviation,
        failures,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: f64) -> Trop {
        Trop::new(v)
    }

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn tight_ladder(n_max: usize) -> TropMatrix {
        let mut triples = vec![(0usize, 0usize, 0.0)];
        for i in 0..=n_max {
            if i + 1 <= n_max {
                triples.push((i, i + 1, 0.0));
            }
            if i >= 1 {
                triples.push((i, i - 1, -1.0));
            }
        }
        TropMatrix::from_triples(n_max + 1, triples).unwrap()
    }

    fn birth_window(n_max: usize, p: f64, q: f64) -> TropMatrix {
        let mut triples = Vec::new();
        for i in 0..n_max {
            triples.push((i, i + 1, p));
        }
        for i in 1..=n_max {
            triples.push((i, i - 1, q));
        }
        TropMatrix::from_triples(n_max + 1, triples).unwrap()
    }

    #[test]
    fn ladder_basis_is_single_descending_column() {
        let a = tight_ladder(8);
        let b = principal_eigenbasis(&a, tol()).unwrap();
        assert_eq!(b.lambda, Trop::ONE);
        assert_eq!(b.representatives, vec![0]);
        assert_eq!(b.classes, vec![vec![0]]);
        let expect: Vec<Trop> = (0..=8).map(|i| t(-(i as f64))).collect();
        assert_eq!(b.columns, vec![expect]);
    }

    #[test]
    fn birth_window_basis_column_is_affine() {
        let a = birth_window(9, -1.0, -3.0);
        let b = principal_eigenbasis(&a, tol()).unwrap();
        assert_eq!(b.lambda, t(-2.0));
        assert_eq!(b.representatives, vec![0]);
        let expect: Vec<Trop> = (0..=9).map(|i| t(-(i as f64))).collect();
        assert_eq!(b.columns, vec![expect]);
    }

    #[test]
    fn two_loops_give_two_columns() {
        let a = TropMatrix::from_triples(
            2,
            [(0usize, 0usize, 0.0), (1, 1, 0.0)],
        )
        .unwrap();
        let b = principal_eigenbasis(&a, tol()).unwrap();
        assert_eq!(b.representatives, vec![0, 1]);
        assert_eq!(
            b.columns,
            vec![vec![Trop::ONE, Trop::ZERO], vec![Trop::ZERO, Trop::ONE]]
        );
    }

    #[test]
    fn acyclic_has_no_basis() {
        let a = TropMatrix::from_triples(2, [(0usize, 1usize, 1.0)]).unwrap();
        assert!(matches!(
            principal_eigenbasis(&a, tol()),
            Err(Error::Acyclic)
        ));
    }

    #[test]
    fn check_eigen_accepts_basis_columns() {
        let a = birth_window(7, -1.0, -3.0);
        let b = principal_eigenbasis(&a, tol()).unwrap();
        for col in &b.columns {
            let r = check_eigen(&a, b.lambda, col, tol()).unwrap();
            assert!(r.pass, "residual {}", r.residual);
            assert_eq!(r.residual, 0.0);
            assert!(r.exact_zero_mismatch.is_empty());
        }
    }

    #[test]
    fn check_eigen_rejects_wrong_lambda_and_reports_rows() {
        let a = tight_ladder(5);
        let ones = vec![Trop::ONE; 6];
        // boundary row 5 has no up arc: (A 1)_5 = -1 != 0
        let full = check_eigen(&a, Trop::ONE, &ones, tol()).unwrap();
        assert!(!full.pass);
        assert_eq!(full.residual, 1.0);
        // skipping the boundary row recovers the interior identity
        let interior = check_eigen_rows(&a, Trop::ONE, &ones, &[5], tol()).unwrap();
        assert!(interior.pass);
        assert_eq!(interior.checked_rows, 5);
        assert_eq!(interior.skipped_rows, vec![5]);
    }

    #[test]
    fn check_eigen_flags_support_mismatch() {
        // u finite only at 1; (A u)_0 = u_1 finite but lambda u_0 = -inf
        let a = TropMatrix::from_triples(2, [(0usize, 1usize, 0.0), (1, 1, 0.0)]).unwrap();
        let u = vec![Trop::ZERO, Trop::ONE];
        let r = check_eigen(&a, Trop::ONE, &u, tol()).unwrap();
        assert!(!r.pass);
        assert_eq!(r.exact_zero_mismatch, vec![0]);
    }

    #[test]
    fn check_eigen_rejects_zero_vector() {
        let a = tight_ladder(2);
        let z = vec![Trop::ZERO; 3];
        assert!(matches!(
            check_eigen(&a, Trop::ONE, &z, tol()),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn super_eigen_allows_slack_but_not_excess() {
        let a = tight_ladder(4);
        let ones = vec![Trop::ONE; 5];
        // (A 1)_i <= 0 everywhere, with slack -1 at the boundary row
        let ok = check_super_eigen(&a, Trop::ONE, &ones, tol()).unwrap();
        assert!(ok.pass);
        assert!(ok.residual <= 0.0);
        // lambda below rho turns the slack into excess
        let bad = check_super_eigen(&a, t(-0.5), &ones, tol()).unwrap();
        assert!(!bad.pass);
        assert_eq!(bad.residual, 0.5);
    }

    #[test]
    fn decompose_round_trips_basis_combination() {
        let a = TropMatrix::from_triples(
            2,
            [(0usize, 0usize, 0.0), (1, 1, 0.0)],
        )
        .unwrap();
        // u = 3 (x) col0 oplus -1 (x) col1 = (3, -1)
        let u = vec![t(3.0), t(-1.0)];
        let d = decompose(&a, &u, tol()).unwrap();
        assert_eq!(d.coefficients, vec![t(3.0), t(-1.0)]);
        assert_eq!(d.residual, 0.0);
        assert_eq!(d.reconstruction, u);
    }

    #[test]
    fn decompose_rejects_non_eigenvector() {
        let a = tight_ladder(6);
        // constant vector fails at the boundary row of the window
        let ones = vec![Trop::ONE; 7];
        match decompose(&a, &ones, tol()) {
            Err(Error::NotEigenvector { residual, .. }) => assert_eq!(residual, 1.0),
            other => panic!("expected NotEigenvector, got {other:?}"),
        }
    }

    #[test]
    fn decompose_birth_column() {
        let a = birth_window(6, -1.0, -3.0);
        let u: Vec<Trop> = (0..=6).map(|i| t(5.0 - i as f64)).collect();
        let d = decompose(&a, &u, tol()).unwrap();
        assert_eq!(d.coefficients, vec![t(5.0)]);
        assert_eq!(d.residual, 0.0);
    }

    #[test]
    fn extremal_detects_generators_and_combinations() {
        let e0 = vec![Trop::ONE, Trop::ZERO];
        let e1 = vec![Trop::ZERO, Trop::ONE];
        let family = vec![e0.clone(), e1.clone()];
        assert!(is_extremal(&e0, &family, tol()).unwrap());
        assert!(is_extremal(&e1, &family, tol()).unwrap());
        // the all-zero vector is e0 oplus e1, hence not extremal
        let sum = vec![Trop::ONE, Trop::ONE];
        let family3 = vec![e0, e1, sum.clone()];
        assert!(!is_extremal(&sum, &family3, tol()).unwrap());
    }

    #[test]
    fn extremal_ignores_scalar_copies_of_itself() {
        let u = vec![t(0.0), t(-1.0)];
        let shifted = vec![t(2.0), t(1.0)];
        let family = vec![u.clone(), shifted];
        assert!(is_extremal(&u, &family, tol()).unwrap());
    }

    #[test]
    fn proportionality_on_recurrence_classes() {
        let a = birth_window(5, -1.0, -3.0);
        let v: Vec<Trop> = (0..=5).map(|i| t(-(i as f64))).collect();
        let w: Vec<Trop> = (0..=5).map(|i| t(4.0 - i as f64)).collect();
        let verdicts = restriction_proportionality_check(&a, &v, &w, tol()).unwrap();
        assert_eq!(verdicts.len(), 1);
        assert!(verdicts[0].proportional);
        assert_eq!(verdicts[0].ratio, Some(t(-4.0)));
    }

    #[test]
    fn proportionality_rejects_non_super_input() {
        let a = birth_window(4, -1.0, -3.0);
        let v: Vec<Trop> = (0..=4).map(|i| t(-(i as f64))).collect();
        // growing vector violates A w <= rho w at the top row
        let w: Vec<Trop> = (0..=4).map(|i| t(3.0 * i as f64)).collect();
        assert!(matches!(
            restriction_proportionality_check(&a, &v, &w, tol()),
            Err(Error::NotSuperEigenvector { .. })
        ));
    }

    #[test]
    fn proportionality_separates_independent_loops() {
        let a = TropMatrix::from_triples(
            2,
            [(0usize, 0usize, 0.0), (1, 1, 0.0)],
        )
        .unwrap();
        let v = vec![t(0.0), t(5.0)];
        let w = vec![t(0.0), t(1.0)];
        let verdicts = restriction_proportionality_check(&a, &v, &w, tol()).unwrap();
        // each singleton class is trivially proportional, with its own ratio
        assert!(verdicts.iter().all(|c| c.proportional));
        assert_eq!(verdicts[0].ratio, Some(t(0.0)));
        assert_eq!(verdicts[1].ratio, Some(t(4.0)));
    }

    #[test]
    fn minimum_principle_holds_for_super_eigenvectors() {
        let a = tight_ladder(6);
        // 1 is a genuine super-eigenvector of the window; equality must hold
        // at the single recurrent node 0
        let ones = vec![Trop::ONE; 7];
        let r = minimum_principle_check(&a, &ones, tol()).unwrap();
        assert_eq!(r.recurrent, vec![0]);
        assert!(r.pass);
        assert_eq!(r.max_deviation, 0.0);
    }

    #[test]
    fn minimum_principle_rejects_non_super_input() {
        let a = tight_ladder(3);
        let bad: Vec<Trop> = (0..=3).map(|i| t(i as f64)).collect();
        assert!(matches!(
            minimum_principle_check(&a, &bad, tol()),
            Err(Error::NotSuperEigenvector { .. })
        ));
    }
}
