use std::collections::HashSet;

use proptest::prelude::*;
use qtree_core::tree::{
    canonical_code, enumerate_trees, enumerate_trees_bounded, principal_subforest, random_tree,
    tree_from_code, CodeMode, EnumerationMode, ENUMERATION_BOUND,
};
use qtree_core::{Error, RootedTree};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Labelled trees on `p` vertices from every Prüfer sequence, deduplicated by
/// a backtracking isomorphism test.
fn free_tree_count_by_pruefer(p: usize) -> usize {
    if p <= 2 {
        return 1;
    }
    let mut reps: Vec<RootedTree> = Vec::new();
    let total = p.pow((p - 2) as u32);
    for mut idx in 0..total {
        let mut seq = Vec::with_capacity(p - 2);
        for _ in 0..p - 2 {
            seq.push(idx % p);
            idx /= p;
        }
        let t = decode(&seq, p);
        if !reps.iter().any(|r| isomorphic(r, &t)) {
            reps.push(t);
        }
    }
    reps.len()
}

fn decode(seq: &[usize], p: usize) -> RootedTree {
    let mut degree = vec![1usize; p];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::new();
    for &s in seq {
        let leaf = (0..p).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf, s));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..p).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    RootedTree::new(p, 0, edges).unwrap()
}

/// Backtracking search for an adjacency-preserving bijection.
fn isomorphic(a: &RootedTree, b: &RootedTree) -> bool {
    let mut da = a.degrees();
    let mut db = b.degrees();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return false;
    }
    let p = a.p();
    let mut map = vec![usize::MAX; p];
    let mut used = vec![false; p];
    fn extend(
        a: &RootedTree,
        b: &RootedTree,
        v: usize,
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if v == a.p() {
            return true;
        }
        for w in 0..b.p() {
            if used[w] || a.degree(v) != b.degree(w) {
                continue;
            }
            let ok = a
                .neighbors(v)
                .iter()
                .filter(|&&u| u < v)
                .all(|&u| b.neighbors(w).contains(&map[u]));
            if ok {
                map[v] = w;
                used[w] = true;
                if extend(a, b, v + 1, map, used) {
                    return true;
                }
                used[w] = false;
            }
        }
        false
    }
    extend(a, b, 0, &mut map, &mut used)
}

#[test]
fn free_tree_counts() {
    let counts: Vec<usize> = (1..=9)
        .map(|p| enumerate_trees(p, EnumerationMode::Free).unwrap().len())
        .collect();
    assert_eq!(counts, vec![1, 1, 1, 2, 3, 6, 11, 23, 47]);
}

#[test]
fn free_counts_match_brute_force() {
    for p in 1..=7 {
        assert_eq!(
            enumerate_trees(p, EnumerationMode::Free).unwrap().len(),
            free_tree_count_by_pruefer(p),
            "p = {p}"
        );
    }
}

#[test]
fn rooted_counts() {
    // rooted unlabelled trees
    let counts: Vec<usize> = (1..=8)
        .map(|p| enumerate_trees(p, EnumerationMode::Rooted).unwrap().len())
        .collect();
    assert_eq!(counts, vec![1, 1, 2, 4, 9, 20, 48, 115]);
}

#[test]
fn enumeration_bound() {
    assert!(matches!(
        enumerate_trees(ENUMERATION_BOUND + 1, EnumerationMode::Free),
        Err(Error::BoundExceeded { .. })
    ));
    assert!(enumerate_trees_bounded(5, EnumerationMode::Free, 4).is_err());
}

#[test]
fn codes_separate_shapes() {
    let end = RootedTree::path(3, 0).unwrap();
    let mid = RootedTree::path(3, 1).unwrap();
    assert_ne!(
        canonical_code(&end, CodeMode::Rooted),
        canonical_code(&mid, CodeMode::Rooted)
    );
    assert_eq!(
        canonical_code(&end, CodeMode::Unrooted),
        canonical_code(&mid, CodeMode::Unrooted)
    );
    let four: HashSet<_> = enumerate_trees(4, EnumerationMode::Free)
        .unwrap()
        .iter()
        .map(|t| canonical_code(t, CodeMode::Unrooted))
        .collect();
    assert_eq!(four.len(), 2);
}

#[test]
fn subforest_examples() {
    let f = principal_subforest(&RootedTree::path(3, 0).unwrap()).unwrap();
    assert_eq!(f.components.len(), 1);
    let c = &f.components[0];
    assert_eq!(c.tree.p(), 2);
    let mut labels = c.degree_in_t.clone();
    labels.sort_unstable();
    assert_eq!(labels, vec![1, 2]);
    let f = principal_subforest(&RootedTree::star(3, 0).unwrap()).unwrap();
    assert_eq!(f.components.len(), 3);
    assert!(f.components.iter().all(|c| c.degree_in_t == vec![1]));
    assert!(matches!(
        principal_subforest(&RootedTree::single_vertex()),
        Err(Error::NoEdges)
    ));
}

#[test]
fn json_errors() {
    assert!(matches!(
        RootedTree::from_json_str("{"),
        Err(Error::Parse(_))
    ));
    assert!(RootedTree::from_json_str(r#"{"p":3,"root":0,"edges":[[0,1],[0,1]]}"#).is_err());
    assert!(RootedTree::from_json_str(r#"{"p":2,"root":5,"edges":[[0,1]]}"#).is_err());
}

proptest! {
    #[test]
    fn codes_survive_relabeling(p in 1usize..=14, seed in any::<u64>(), shuffle in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_tree(p, &mut rng);
        let mut perm: Vec<usize> = (0..p).collect();
        let mut srng = ChaCha8Rng::seed_from_u64(shuffle);
        rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut srng);
        let u = t.relabel(&perm).unwrap();
        prop_assert_eq!(canonical_code(&t, CodeMode::Rooted), canonical_code(&u, CodeMode::Rooted));
        prop_assert_eq!(canonical_code(&t, CodeMode::Unrooted), canonical_code(&u, CodeMode::Unrooted));
        let back = tree_from_code(&canonical_code(&t, CodeMode::Rooted)).unwrap();
        prop_assert_eq!(canonical_code(&back, CodeMode::Rooted), canonical_code(&t, CodeMode::Rooted));
    }

    #[test]
    fn tree_invariants(p in 2usize..=14, seed in any::<u64>()) {
        let t = random_tree(p, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(t.degrees().iter().sum::<usize>(), 2 * (p - 1));
        let f = principal_subforest(&t).unwrap();
        prop_assert_eq!(f.components.len(), t.degree(t.root()));
        prop_assert_eq!(f.vertex_count(), p - 1);
        for c in &f.components {
            for (local, &orig) in c.original_ids.iter().enumerate() {
                let inner = c.tree.degree(local);
                let expected = if t.neighbors(t.root()).contains(&orig) { inner + 1 } else { inner };
                prop_assert_eq!(c.degree_in_t[local], expected);
            }
        }
    }
}
