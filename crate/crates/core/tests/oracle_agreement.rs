//! Randomized agreement checks between the library and independent
//! test-side oracles: boolean reachability for components, boolean walk
//! tables for path-length residues, and structural invariants that tie
//! separately computed quantities together.

mod common;

use common::*;
use maxplus::{
    check_super_eigen, kleene_star, max_cycle_mean, nu_residue, scc, spectral_summary, Error,
    Tolerance, Trop,
};
use rand::Rng;

fn tol() -> Tolerance {
    Tolerance::default()
}

#[test]
fn components_agree_with_boolean_reachability() {
    let mut r = rng(0x5CC0_0001);
    for _ in 0..1000 {
        let n = r.gen_range(1..=8);
        let density = r.gen_range(0.05..0.95);
        let g = random_grid(&mut r, n, density, -9, 9);
        let a = grid_to_matrix(&g);
        assert_eq!(scc(&a).classes, scc_oracle(&g), "components of {g:?}");
    }
}

#[test]
fn path_residues_agree_with_boolean_walk_tables() {
    let mut r = rng(0x0BEA_0002);
    let tol = tol();
    let horizon = 200usize;
    let mut checked = 0usize;
    let mut capped = 0usize;
    for _ in 0..400 {
        let n = r.gen_range(2..=6);
        let density = r.gen_range(0.25..0.8);
        let g = random_irreducible_grid(&mut r, n, density, -9, 9);
        let a = grid_to_matrix(&g);
        let gamma_full = spectral_summary(&a, tol).gamma;
        for _ in 0..4 {
            let i = r.gen_range(0..n);
            let j = r.gen_range(0..n);
            let res = match nu_residue(&a, i, j) {
                Ok(res) => res,
                Err(Error::ResidueCapReached { .. }) => {
                    capped += 1;
                    continue;
                }
                Err(e) => panic!("unexpected error on {g:?}: {e}"),
            };
            assert_eq!(res.gamma, gamma_full, "gamma of {g:?}");
            let hits = walk_hits(&g, i, j, horizon);
            for (m, &hit) in hits.iter().enumerate() {
                if m % res.gamma == res.residue {
                    if m >= res.threshold {
                        assert!(hit, "({i},{j}) length {m} admissible but missing: {g:?}");
                    }
                } else {
                    assert!(!hit, "({i},{j}) length {m} off-residue but present: {g:?}");
                }
            }
            if res.threshold > 0 {
                let last_miss = res.threshold - 1;
                assert_eq!(last_miss % res.gamma, res.residue, "threshold alignment");
                assert!(
                    !hits[last_miss],
                    "threshold not minimal for ({i},{j}) on {g:?}"
                );
            }
            checked += 1;
        }
    }
    assert!(checked >= 1500, "only {checked} residue checks ran");
    assert!(capped * 100 <= checked, "too many capped searches: {capped}");
}

#[test]
fn recurrence_classes_equal_critical_component_partition() {
    let mut r = rng(0x1EC0_0003);
    let tol = tol();
    for _ in 0..800 {
        let n = r.gen_range(1..=8);
        let density = r.gen_range(0.1..0.95);
        let g = random_grid(&mut r, n, density, -9, 9);
        let a = grid_to_matrix(&g);
        let summary = spectral_summary(&a, tol);
        assert_eq!(
            summary.recurrence_classes, summary.critical_classes,
            "partitions disagree on {g:?}"
        );
    }
}

#[test]
fn graph_cyclicity_ignores_arc_weights() {
    let mut r = rng(0x6CD0_0004);
    let tol = tol();
    for _ in 0..300 {
        let n = r.gen_range(2..=8);
        let density = r.gen_range(0.2..0.7);
        let g = random_irreducible_grid(&mut r, n, density, -9, 9);
        let gamma = spectral_summary(&grid_to_matrix(&g), tol).gamma;
        let reweighted: Grid = g
            .iter()
            .map(|row| {
                row.iter()
                    .map(|w| w.map(|_| r.gen_range(-9..=9)))
                    .collect()
            })
            .collect();
        let gamma2 = spectral_summary(&grid_to_matrix(&reweighted), tol).gamma;
        assert_eq!(gamma, gamma2, "cyclicity moved under reweighting: {g:?}");
    }
}

#[test]
fn shifted_closure_columns_are_super_eigenvectors() {
    let mut r = rng(0x50BE_0005);
    let tol = tol();
    for _ in 0..300 {
        let n = r.gen_range(2..=7);
        let density = r.gen_range(0.3..0.8);
        let g = random_irreducible_grid(&mut r, n, density, -9, 9);
        let a = grid_to_matrix(&g);
        let rho = max_cycle_mean(&a);
        assert!(rho.is_finite());
        for offset in [0.0, 0.5, 2.0] {
            let lambda = rho.value() + offset;
            let closure = kleene_star(&a.shifted(Trop::new(-lambda)), tol);
            assert!(!closure.diverged, "lambda {lambda} >= rho must not diverge");
            for col in 0..n {
                let u: Vec<Trop> = (0..n).map(|i| closure.star.get(i, col)).collect();
                let rep = check_super_eigen(&a, Trop::new(lambda), &u, tol).unwrap();
                assert!(
                    rep.pass,
                    "column {col} at lambda {lambda} on {g:?}: {rep:?}"
                );
            }
        }
    }
}

#[test]
fn full_support_super_eigenvectors_certify_a_radius_bound() {
    let mut r = rng(0x10BD_0006);
    let tol = tol();
    for _ in 0..200 {
        let n = r.gen_range(2..=7);
        let density = r.gen_range(0.3..0.8);
        let g = random_irreducible_grid(&mut r, n, density, -9, 9);
        let a = grid_to_matrix(&g);
        let rho = max_cycle_mean(&a).value();
        let lambda = rho + r.gen_range(0.0..3.0);
        let closure = kleene_star(&a.shifted(Trop::new(-lambda)), tol);
        // star times a random finite vector: a super-eigenvector with full
        // support on an irreducible graph
        let v: Vec<Trop> = (0..n).map(|_| Trop::new(r.gen_range(-5..=5) as f64)).collect();
        let u = closure.star.mat_vec(&v).unwrap();
        assert!(u.iter().all(|x| x.is_finite()));
        let rep = check_super_eigen(&a, Trop::new(lambda), &u, tol).unwrap();
        assert!(rep.pass, "{g:?}");
        // and then the eigenvalue really does dominate the circuit means
        assert!(lambda >= rho - tol.eps);
    }
}
