//! Characteristic polynomials of a rooted equilateral tree.
//!
//! With `D` the degree matrix and `A` the adjacency matrix, `psi = det(-zD + A)`,
//! `psi_tilde = psi / (1 - z^2)` and `psi_hat = det(-z D_hat + A_hat)` over the
//! principal subforest, degrees still taken in the whole tree. The Dirichlet
//! determinant is written with the same `-zD + A` sign convention as `psi`;
//! this only flips the overall sign by `(-1)^(p-1)`.

use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::poly::{rat, Poly};
use crate::ratfunc::RationalFunction;
use crate::tree::{principal_subforest, RootedTree};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharPolyBundle {
    /// `det(-zD + A)`, not normalized.
    pub psi: Poly,
    pub psi_tilde: Poly,
    /// Product of the subforest determinants, not normalized.
    pub psi_hat: Poly,
    /// `psi / psi_hat` in lowest terms.
    pub ratio: RationalFunction,
}

/// Determinant of `-z D + A` restricted to the subtree below every vertex,
/// with `degrees[v]` on the diagonal. Returns the value for each vertex.
///
/// Expanding along the row of `v`:
/// `phi_v = -d(v) z prod_c phi_c - sum_j prod_{i != j} phi_{c_i} prod_{g child of c_j} phi_g`.
fn subtree_determinants(tree: &RootedTree, degrees: &[usize]) -> Vec<Poly> {
    let children = tree.children();
    let mut phi = vec![Poly::zero(); tree.p()];
    // product of the children's determinants, per vertex
    let mut child_prod = vec![Poly::one(); tree.p()];
    for &v in tree.bfs_order().iter().rev() {
        let kids = &children[v];
        let prod = kids.iter().fold(Poly::one(), |acc, &c| &acc * &phi[c]);
        let diag = Poly::monomial(-rat(degrees[v] as i64), 1);
        let mut value = &diag * &prod;
        for (j, &cj) in kids.iter().enumerate() {
            let others = kids
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .fold(Poly::one(), |acc, (_, &c)| &acc * &phi[c]);
            value = &value - &(&others * &child_prod[cj]);
        }
        phi[v] = value;
        child_prod[v] = prod;
    }
    phi
}

pub fn compute_psi(t: &RootedTree) -> Poly {
    let phi = subtree_determinants(t, &t.degrees());
    phi[t.root()].clone()
}

fn one_minus_z2() -> Poly {
    Poly::from_ints(&[1, 0, -1])
}

/// `psi / (1 - z^2)`; the division must be exact.
pub fn compute_psi_tilde(psi: &Poly) -> Result<Poly> {
    psi.exact_div(&one_minus_z2())
        .map_err(|_| Error::InexactDivision(format!("1 - z^2 does not divide {psi}")))
}

pub fn compute_psi_hat(t: &RootedTree) -> Result<Poly> {
    let forest = principal_subforest(t)?;
    Ok(forest.components.iter().fold(Poly::one(), |acc, comp| {
        let phi = subtree_determinants(&comp.tree, &comp.degree_in_t);
        &acc * &phi[comp.tree.root()]
    }))
}

/// `psi / psi_hat` in lowest terms; behaves like `-d(root) z` at infinity.
pub fn compute_ratio(t: &RootedTree) -> Result<RationalFunction> {
    let psi = compute_psi(t);
    let psi_hat = compute_psi_hat(t)?;
    RationalFunction::new(psi, psi_hat)
}

pub fn compute_bundle(t: &RootedTree) -> Result<CharPolyBundle> {
    let psi = compute_psi(t);
    let psi_tilde = compute_psi_tilde(&psi)?;
    let psi_hat = compute_psi_hat(t)?;
    let ratio = RationalFunction::new(psi.clone(), psi_hat.clone())?;
    Ok(CharPolyBundle {
        psi,
        psi_tilde,
        psi_hat,
        ratio,
    })
}

/// Sign of the `z` term at depth `k`: `-1` at the root, alternating below.
pub fn depth_sign(depth: usize) -> i64 {
    if depth.is_multiple_of(2) {
        -1
    } else {
        1
    }
}

/// Evaluates the branched continued fraction read off the tree: a vertex at
/// depth `k` contributes `(-1)^(k+1) d(v) z` plus the reciprocals of its
/// children's fractions. Equals [`compute_ratio`] for every tree.
pub fn evaluate_branched_fraction(t: &RootedTree) -> Result<RationalFunction> {
    if t.p() < 2 {
        return Err(Error::NoEdges);
    }
    let children = t.children();
    let depths = t.depths();
    let mut value: Vec<Option<RationalFunction>> = vec![None; t.p()];
    for &v in t.bfs_order().iter().rev() {
        let s = depth_sign(depths[v]);
        let mut acc = RationalFunction::linear(s * t.degree(v) as i64);
        for &c in &children[v] {
            let tail = value[c].take().expect("children evaluated first");
            acc = &acc + &tail.recip()?;
        }
        value[v] = Some(acc);
    }
    Ok(value[t.root()].take().expect("root evaluated"))
}

/// Human-readable branched continued fraction, e.g.
/// `-3z + 1/z + 1/z + 1/(3z + 1/(-3z - 1/z - 1/z) + ...)`.
pub fn branched_fraction_string(t: &RootedTree) -> String {
    let children = t.children();
    fn render(v: usize, depth: usize, t: &RootedTree, children: &[Vec<usize>]) -> String {
        let s = depth_sign(depth);
        let d = t.degree(v) as i64 * s;
        let head = match d {
            1 => "z".to_string(),
            -1 => "-z".to_string(),
            _ => format!("{d}z"),
        };
        let mut out = head;
        for &c in &children[v] {
            let sub = render(c, depth + 1, t, children);
            if children[c].is_empty() {
                // leaf fraction is (+/-)z
                if sub.starts_with('-') {
                    out.push_str(" - 1/z");
                } else {
                    out.push_str(" + 1/z");
                }
            } else {
                out.push_str(&format!(" + 1/({sub})"));
            }
        }
        out
    }
    render(t.root(), 0, t, &children)
}

/// Leading coefficient `(-1)^p prod d(v)` that `psi` has before any
/// normalization.
pub fn expected_psi_leading(t: &RootedTree) -> BigRational {
    let prod = t
        .degrees()
        .iter()
        .fold(BigRational::one(), |acc, &d| acc * rat(d as i64));
    if t.p().is_multiple_of(2) {
        prod
    } else {
        -prod
    }
}
