#![allow(dead_code)]

use qtree_core::parse::parse_poly;
use qtree_core::{Poly, RationalFunction, RootedTree};

pub fn rf(num: &str, den: &str) -> RationalFunction {
    RationalFunction::new(parse_poly(num).unwrap(), parse_poly(den).unwrap()).unwrap()
}

/// Root with two leaves and an inner child `a` of degree 3; `a` carries a
/// degree-3 vertex with two leaves and a degree-4 vertex with three leaves.
pub fn worked_example_tree() -> RootedTree {
    let children = vec![
        vec![1, 2, 3],
        vec![],
        vec![],
        vec![4, 5],
        vec![6, 7],
        vec![8, 9, 10],
        vec![],
        vec![],
        vec![],
        vec![],
        vec![],
    ];
    RootedTree::from_children(&children).unwrap()
}

/// `-zD + A` restricted to `keep`, as polynomial entries.
pub fn pencil(t: &RootedTree, keep: &[usize]) -> Vec<Vec<Poly>> {
    keep.iter()
        .map(|&i| {
            keep.iter()
                .map(|&j| {
                    if i == j {
                        Poly::from_ints(&[0, -(t.degree(i) as i64)])
                    } else if t.neighbors(i).contains(&j) {
                        Poly::one()
                    } else {
                        Poly::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// Laplace expansion along the first remaining row.
pub fn cofactor_det(m: &[Vec<Poly>]) -> Poly {
    fn expand(m: &[Vec<Poly>], row: usize, used: &mut Vec<bool>) -> Poly {
        if row == m.len() {
            return Poly::one();
        }
        let mut acc = Poly::zero();
        let mut sign = 1i64;
        for col in 0..m.len() {
            if used[col] {
                continue;
            }
            if !m[row][col].is_zero() {
                used[col] = true;
                let minor = expand(m, row + 1, used);
                used[col] = false;
                let term = &m[row][col] * &minor;
                acc = if sign > 0 { &acc + &term } else { &acc - &term };
            }
            sign = -sign;
        }
        acc
    }
    let mut used = vec![false; m.len()];
    expand(m, 0, &mut used)
}
