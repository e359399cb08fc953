mod common;

use std::collections::BTreeMap;

use common::{rf, worked_example_tree};
use num_rational::BigRational;
use qtree_core::charpoly::{compute_psi, compute_psi_hat, compute_ratio};
use qtree_core::invert::{
    child_reciprocal_sum, egyptian_multisets, filter_by_polynomials, group_unrooted,
    invert_ratio_with, root_degree_from_ratio, InvertOptions,
};
use qtree_core::poly::ratio;
use qtree_core::tree::{all_rooted_trees_up_to, make_snowflake};
use qtree_core::{
    canonical_code, invert_ratio, invert_ratio_exhaustive, invert_snowflake, CodeMode, Error, Poly,
    RootedTree,
};

fn brute_force_multisets(count: usize, d_max: usize) -> BTreeMap<BigRational, Vec<Vec<usize>>> {
    let mut out: BTreeMap<BigRational, Vec<Vec<usize>>> = BTreeMap::new();
    fn walk(
        count: usize,
        from: usize,
        d_max: usize,
        cur: &mut Vec<usize>,
        out: &mut BTreeMap<BigRational, Vec<Vec<usize>>>,
    ) {
        if cur.len() == count {
            let sum = cur
                .iter()
                .fold(ratio(0, 1), |acc, &d| acc + ratio(1, d as i64));
            out.entry(sum).or_default().push(cur.clone());
            return;
        }
        for d in from..=d_max {
            cur.push(d);
            walk(count, d, d_max, cur, out);
            cur.pop();
        }
    }
    walk(count, 1, d_max, &mut Vec::new(), &mut out);
    out
}

#[test]
fn unit_fraction_solver_matches_brute_force() {
    for count in 1..=4 {
        for d_max in [1, 2, 5, 9, 16] {
            let table = brute_force_multisets(count, d_max);
            for (r, expected) in &table {
                assert_eq!(
                    &egyptian_multisets(r, count, d_max),
                    expected,
                    "{r} {count} {d_max}"
                );
            }
            // sums that no multiset reaches
            for (n, d) in [(1, 97), (13, 5), (-1, 3)] {
                let r = ratio(n, d);
                if !table.contains_key(&r) {
                    assert!(egyptian_multisets(&r, count, d_max).is_empty());
                }
            }
        }
    }
}

#[test]
fn seven_twelfths() {
    let mut found = egyptian_multisets(&ratio(7, 12), 2, 12);
    found.sort();
    assert_eq!(found, vec![vec![2, 12], vec![3, 4]]);
}

#[test]
fn ratio_readouts() {
    let t = worked_example_tree();
    let r = compute_ratio(&t).unwrap();
    assert_eq!(root_degree_from_ratio(&r).unwrap(), 3);
    assert_eq!(root_degree_from_ratio(&rf("-2z^2+2", "z")).unwrap(), 2);
    assert_eq!(root_degree_from_ratio(&rf("-z^2+1", "z")).unwrap(), 1);
    assert_eq!(child_reciprocal_sum(&r, 3, -1).unwrap(), ratio(7, 3));
    assert_eq!(
        child_reciprocal_sum(&rf("-3z^2+3", "z"), 3, -1).unwrap(),
        ratio(3, 1)
    );
    assert!(matches!(
        root_degree_from_ratio(&rf("-5z^2+1", "2z")),
        Err(Error::InvalidRatio(_))
    ));
}

#[test]
fn worked_example_inversion() {
    let t = worked_example_tree();
    let r = compute_ratio(&t).unwrap();
    let found = invert_ratio(&r, 3, 12).unwrap();
    assert_eq!(found.len(), 1);
    let c = &found[0];
    assert!(c.verified);
    assert_eq!(c.code, canonical_code(&t, CodeMode::Rooted));
    assert!(c.trace.is_consistent());
    let root = &c.trace.records[0];
    assert_eq!(root.reciprocal_sum, ratio(7, 3));
    assert_eq!(root.child_degrees, vec![1, 1, 3]);
    let inner = c
        .trace
        .records
        .iter()
        .find(|rec| rec.depth == 1 && rec.degree == 3)
        .unwrap();
    assert_eq!(inner.reciprocal_sum, ratio(7, 12));
    assert_eq!(inner.child_degrees, vec![3, 4]);
}

#[test]
fn small_inversions() {
    let found = invert_ratio(&rf("-2z^2+2", "z"), 2, 4).unwrap();
    assert_eq!(found.len(), 1);
    assert_eq!(
        found[0].code,
        canonical_code(&RootedTree::path(3, 1).unwrap(), CodeMode::Rooted)
    );
    let found = invert_ratio(&rf("-3z^2+3", "z"), 3, 6).unwrap();
    assert_eq!(found.len(), 1);
    assert_eq!(
        found[0].code,
        canonical_code(&RootedTree::star(3, 0).unwrap(), CodeMode::Rooted)
    );
    assert!(matches!(
        invert_ratio(&rf("-3z^2+3", "z"), 2, 6),
        Err(Error::Inconsistent(_))
    ));
    // fewer vertices than the shape needs: a valid, empty answer
    assert!(invert_ratio(&rf("-3z^2+3", "z"), 3, 3).unwrap().is_empty());
}

#[test]
fn search_equals_exhaustive_filter() {
    for t in all_rooted_trees_up_to(7).unwrap() {
        if t.p() < 2 {
            continue;
        }
        let r = compute_ratio(&t).unwrap();
        let d0 = t.degree(t.root());
        let fast = invert_ratio(&r, d0, t.p()).unwrap();
        let slow = invert_ratio_exhaustive(&r, d0, t.p()).unwrap();
        let fast_codes: Vec<_> = fast.iter().map(|c| c.code.clone()).collect();
        let slow_codes: Vec<_> = slow.iter().map(|c| c.code.clone()).collect();
        assert_eq!(fast_codes, slow_codes);
        assert!(fast_codes.contains(&canonical_code(&t, CodeMode::Rooted)));
        assert!(fast.iter().all(|c| c.verified && c.trace.is_consistent()));
    }
}

#[test]
fn completeness_flag() {
    let r = rf("-3z^2+3", "z");
    let opts = InvertOptions {
        p_max: 20,
        max_branch_size: 5,
    };
    let inv = invert_ratio_with(&r, 3, &opts).unwrap();
    assert!(!inv.complete);
    assert_eq!(inv.candidates.len(), 1);
    let inv = invert_ratio_with(&r, 3, &InvertOptions::new(12)).unwrap();
    assert!(inv.complete);
}

#[test]
fn unrooted_grouping() {
    let t = RootedTree::path(5, 0).unwrap();
    let r = compute_ratio(&t).unwrap();
    let found = invert_ratio(&r, 1, 5).unwrap();
    let groups = group_unrooted(&found);
    assert!(groups.contains_key(&canonical_code(&t, CodeMode::Unrooted)));
}

#[test]
fn snowflake_examples() {
    let t = make_snowflake(&[3, 4]).unwrap();
    let inv = invert_snowflake(&compute_ratio(&t).unwrap(), 2).unwrap();
    assert_eq!(inv.arms, vec![3, 4]);
    assert_eq!(
        inv.full_denominator,
        &Poly::from_ints(&[-2, 0, 3]) * &Poly::from_ints(&[-3, 0, 4])
    );
    let star = RootedTree::star(3, 0).unwrap();
    let inv = invert_snowflake(&compute_ratio(&star).unwrap(), 3).unwrap();
    assert_eq!(inv.arms, vec![1, 1, 1]);
    assert_eq!(inv.full_denominator, Poly::from_ints(&[0, 0, 0, 1]));
    let t = make_snowflake(&[2, 2]).unwrap();
    let inv = invert_snowflake(&compute_ratio(&t).unwrap(), 2).unwrap();
    assert_eq!(inv.arms, vec![2, 2]);
    assert_eq!(inv.full_denominator, Poly::from_ints(&[-1, 0, 2]).pow(2));
    let deep = RootedTree::path(4, 0).unwrap();
    assert!(matches!(
        invert_snowflake(&compute_ratio(&deep).unwrap(), 1),
        Err(Error::NotSnowflake(_))
    ));
}

#[test]
fn shared_ratio_separated_by_polynomials() {
    // snowflake {1,4,4} and the spider with three legs of length 3
    let snow = make_snowflake(&[1, 4, 4]).unwrap();
    let spider = RootedTree::new(
        10,
        0,
        vec![
            (0, 1),
            (1, 2),
            (2, 3),
            (0, 4),
            (4, 5),
            (5, 6),
            (0, 7),
            (7, 8),
            (8, 9),
        ],
    )
    .unwrap();
    let r = compute_ratio(&snow).unwrap();
    assert_eq!(r, compute_ratio(&spider).unwrap());
    assert_eq!(r, rf("-12z^4+15z^2-3", "4z^3-3z"));
    let found = invert_ratio(&r, 3, 10).unwrap();
    assert_eq!(found.len(), 2);
    for t in [&snow, &spider] {
        let psi = compute_psi(t);
        let psi_hat = compute_psi_hat(t).unwrap();
        let kept = filter_by_polynomials(found.clone(), &psi, &psi_hat).unwrap();
        assert_eq!(kept.len(), 1);
        assert_eq!(kept[0].code, canonical_code(t, CodeMode::Rooted));
    }
}
