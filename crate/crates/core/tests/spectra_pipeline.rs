mod common;

use std::f64::consts::PI;

use common::{rf, worked_example_tree};
use qtree_core::charpoly::{compute_psi, compute_psi_hat, compute_psi_tilde, compute_ratio};
use qtree_core::roots::{default_precision, isolate_real_roots};
use qtree_core::spectra::{
    build_ratio, extract_constants, infer_p, recover_shape_from_spectra, synthesize_spectrum,
    ConstantMultiset, D0Choice, Problem, DEFAULT_CLUSTER_TOL,
};
use qtree_core::tree::all_rooted_trees_up_to;
use qtree_core::{canonical_code, CodeMode, Poly, RootedTree};

fn roots_of(p: &Poly) -> Vec<f64> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    isolate_real_roots(p, None, &default_precision()).approx_with_multiplicity()
}

fn assert_close(found: &ConstantMultiset, mut expected: Vec<f64>, tol: f64) {
    expected.sort_by(f64::total_cmp);
    let got = found.expanded();
    assert_eq!(got.len(), expected.len(), "{got:?} vs {expected:?}");
    for (a, b) in got.iter().zip(&expected) {
        assert!((a - b).abs() <= tol, "{got:?} vs {expected:?}");
    }
}

#[test]
fn constants_are_polynomial_roots() {
    for t in all_rooted_trees_up_to(6).unwrap() {
        if t.p() < 2 {
            continue;
        }
        let n = synthesize_spectrum(&t, Problem::Neumann, 1.0, 8).unwrap();
        let d = synthesize_spectrum(&t, Problem::Dirichlet, 1.0, 8).unwrap();
        let a = extract_constants(&n, DEFAULT_CLUSTER_TOL).unwrap();
        let b = extract_constants(&d, DEFAULT_CLUSTER_TOL).unwrap();
        let mut alpha = roots_of(&compute_psi_tilde(&compute_psi(&t)).unwrap());
        alpha.extend([-1.0, 1.0]);
        assert_close(&a, alpha, 1e-9);
        assert_close(&b, roots_of(&compute_psi_hat(&t).unwrap()), 1e-9);
        assert_eq!(infer_p(&a).unwrap(), t.p());
        assert_eq!(
            build_ratio(&a, &b, t.degree(t.root())).unwrap(),
            compute_ratio(&t).unwrap()
        );
        assert!(b.entries.iter().all(|&(c, _)| c.abs() < 1.0));
    }
}

#[test]
fn per_period_counts() {
    for t in all_rooted_trees_up_to(6).unwrap() {
        if t.p() < 2 {
            continue;
        }
        let p = t.p();
        let n = synthesize_spectrum(&t, Problem::Neumann, 1.0, 4).unwrap();
        let d = synthesize_spectrum(&t, Problem::Dirichlet, 1.0, 4).unwrap();
        assert_eq!(n.per_period_counts(1e-9), vec![2 * p - 2; 4]);
        assert_eq!(d.per_period_counts(1e-9), vec![2 * (p - 1); 4]);
    }
}

#[test]
fn edge_length_scales_eigenvalues() {
    let t = RootedTree::path(2, 0).unwrap();
    let s = synthesize_spectrum(&t, Problem::Neumann, 2.0, 1).unwrap();
    let values: Vec<f64> = s.eigenvalues.iter().map(|e| e.value).collect();
    let expected = [0.0, (PI / 2.0).powi(2), PI.powi(2)];
    assert_eq!(values.len(), 3);
    for (a, b) in values.iter().zip(expected) {
        assert!((a - b).abs() < 1e-9);
    }
}

#[test]
fn build_ratio_examples() {
    let c = |v: &[(f64, usize)]| ConstantMultiset {
        entries: v.to_vec(),
    };
    let r = build_ratio(&c(&[(-1.0, 1), (0.0, 2), (1.0, 1)]), &c(&[(0.0, 3)]), 3).unwrap();
    assert_eq!(r, rf("-3z^2+3", "z"));
    let r = build_ratio(&c(&[(-1.0, 1), (1.0, 1)]), &c(&[(0.0, 1)]), 1).unwrap();
    assert_eq!(r, rf("-z^2+1", "z"));
    let r = build_ratio(&c(&[(-1.0, 1), (0.0, 1), (1.0, 1)]), &c(&[(0.0, 2)]), 2).unwrap();
    assert_eq!(r, rf("-2z^2+2", "z"));
    assert!(build_ratio(&c(&[(-1.0, 1), (1.0, 1)]), &c(&[]), 1).is_err());
}

#[test]
fn recovery_end_to_end() {
    let cases = [
        (RootedTree::star(3, 0).unwrap(), 3),
        (worked_example_tree(), 3),
    ];
    for (t, d0) in cases {
        let n = synthesize_spectrum(&t, Problem::Neumann, 1.0, 25).unwrap();
        let d = synthesize_spectrum(&t, Problem::Dirichlet, 1.0, 25).unwrap();
        let rep =
            recover_shape_from_spectra(&n, &d, D0Choice::Given(d0), DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(rep.p, t.p());
        let codes: Vec<_> = rep.results[0]
            .candidates
            .iter()
            .map(|c| c.code.clone())
            .collect();
        assert_eq!(codes, vec![canonical_code(&t, CodeMode::Rooted)]);
    }
}

#[test]
fn root_degree_search() {
    let t = RootedTree::path(3, 1).unwrap();
    let n = synthesize_spectrum(&t, Problem::Neumann, 1.0, 10).unwrap();
    let d = synthesize_spectrum(&t, Problem::Dirichlet, 1.0, 10).unwrap();
    let rep = recover_shape_from_spectra(&n, &d, D0Choice::Search, DEFAULT_CLUSTER_TOL).unwrap();
    let hit = rep.results.iter().find(|r| r.d0 == 2).unwrap();
    assert!(hit
        .candidates
        .iter()
        .any(|c| c.code == canonical_code(&t, CodeMode::Rooted)));
}

#[test]
fn mismatched_inputs() {
    let t = RootedTree::star(3, 0).unwrap();
    let n = synthesize_spectrum(&t, Problem::Neumann, 1.0, 5).unwrap();
    let d = synthesize_spectrum(&t, Problem::Dirichlet, 2.0, 5).unwrap();
    assert!(recover_shape_from_spectra(&n, &d, D0Choice::Given(3), DEFAULT_CLUSTER_TOL).is_err());
    assert!(recover_shape_from_spectra(&d, &n, D0Choice::Given(3), DEFAULT_CLUSTER_TOL).is_err());
}
