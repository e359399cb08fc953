//! Reconstruction of tree shapes from the reduced ratio `R = psi / psi_hat`.
//!
//! The search descends from the root. At a vertex of known degree the limit
//! `lim z (F - s d z)` gives the sum of reciprocal child degrees, the
//! unit-fraction solver lists the candidate child degree multisets, and the
//! child sum is split into branch tails (see [`branches`]). Each child tail is
//! expanded the same way. Every finished tree is checked by recomputing its
//! ratio exactly.

pub mod branches;
pub mod egyptian;
pub mod snowflake;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::charpoly::{compute_psi, compute_psi_hat, compute_ratio, depth_sign};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ratfunc::RationalFunction;
use crate::tree::{
    all_rooted_trees_up_to, canonical_code, CodeMode, RootedTree, ShapeCode, ENUMERATION_BOUND,
};

pub use branches::{decompose_branches, BranchTable};
pub use egyptian::egyptian_multisets;
pub use snowflake::{invert_snowflake, SnowflakeInversion};

use branches::decompose_tails;

/// Largest branch (subtree below the root) the search enumerates candidate
/// tails for. Inversion is exhaustive whenever `p_max - d0` fits.
pub const DEFAULT_MAX_BRANCH: usize = 11;

/// Evidence recorded at one vertex of a reconstructed tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRecord {
    pub vertex: usize,
    pub depth: usize,
    /// Sign of the `z` term in the alternating branched fraction.
    pub sign: i64,
    pub degree: usize,
    /// `sum 1/d(child)`, as read from the expansion.
    pub reciprocal_sum: BigRational,
    /// Child degrees, ascending.
    pub child_degrees: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExpansionTrace {
    /// One record per vertex, in vertex-id (preorder) order.
    pub records: Vec<TraceRecord>,
}

impl ExpansionTrace {
    /// Sign alternation, child counts and reciprocal sums agree with the
    /// recorded degrees.
    pub fn is_consistent(&self) -> bool {
        self.records.iter().all(|r| {
            let expected_children = if r.depth == 0 { r.degree } else { r.degree - 1 };
            let sum = r.child_degrees.iter().fold(BigRational::zero(), |acc, &d| {
                acc + BigRational::new(BigInt::one(), BigInt::from(d))
            });
            r.sign == depth_sign(r.depth)
                && r.child_degrees.len() == expected_children
                && sum == r.reciprocal_sum
        })
    }
}

impl fmt::Display for ExpansionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.records {
            if r.child_degrees.is_empty() {
                continue;
            }
            let degs: Vec<String> = r.child_degrees.iter().map(usize::to_string).collect();
            writeln!(
                f,
                "v{} depth {} term {}{}z: sum 1/d = {} -> {{{}}}",
                r.vertex,
                r.depth,
                if r.sign < 0 { "-" } else { "+" },
                r.degree,
                r.reciprocal_sum,
                degs.join(",")
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateShape {
    pub tree: RootedTree,
    pub code: ShapeCode,
    pub trace: ExpansionTrace,
    /// The candidate's own ratio equals the input exactly.
    pub verified: bool,
}

impl CandidateShape {
    fn from_tree(tree: RootedTree, target: &RationalFunction) -> Result<Self> {
        let verified = compute_ratio(&tree)? == *target;
        Ok(CandidateShape {
            code: canonical_code(&tree, CodeMode::Rooted),
            trace: trace_from_tree(&tree),
            tree,
            verified,
        })
    }
}

/// Trace read directly off a tree.
pub fn trace_from_tree(tree: &RootedTree) -> ExpansionTrace {
    let children = tree.children();
    let depths = tree.depths();
    let records = (0..tree.p())
        .map(|v| {
            let mut child_degrees: Vec<usize> =
                children[v].iter().map(|&c| tree.degree(c)).collect();
            child_degrees.sort_unstable();
            let reciprocal_sum = child_degrees.iter().fold(BigRational::zero(), |acc, &d| {
                acc + BigRational::new(BigInt::one(), BigInt::from(d))
            });
            TraceRecord {
                vertex: v,
                depth: depths[v],
                sign: depth_sign(depths[v]),
                degree: tree.degree(v),
                reciprocal_sum,
                child_degrees,
            }
        })
        .collect();
    ExpansionTrace { records }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InvertOptions {
    pub p_max: usize,
    pub max_branch_size: usize,
}

impl InvertOptions {
    pub fn new(p_max: usize) -> Self {
        InvertOptions {
            p_max,
            max_branch_size: DEFAULT_MAX_BRANCH,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Inversion {
    /// Verified shapes, sorted by rooted canonical code.
    pub candidates: Vec<CandidateShape>,
    /// Whether every tree with at most `p_max` vertices was in reach.
    pub complete: bool,
}

/// `lim_{z->inf} -R(z)/z`, which must be a positive integer.
pub fn root_degree_from_ratio(r: &RationalFunction) -> Result<usize> {
    if r.degree_excess() != Some(1) {
        return Err(Error::InvalidRatio(format!(
            "numerator degree must exceed denominator degree by one in {r}"
        )));
    }
    let limit = -r.limit_over_power(1).expect("degree excess is one");
    if !limit.is_integer() || !limit.is_positive() {
        return Err(Error::InvalidRatio(format!(
            "-R(z)/z tends to {limit}, not a positive integer"
        )));
    }
    limit
        .to_integer()
        .to_usize()
        .ok_or_else(|| Error::InvalidRatio("root degree too large".into()))
}

/// For the alternating-sign tail `F` of a vertex with degree `d` and sign
/// `sign`, returns `-sign * lim z (F - sign d z)`, the sum of the reciprocal
/// degrees of its children.
pub fn child_reciprocal_sum(f: &RationalFunction, d: usize, sign: i64) -> Result<BigRational> {
    let g = f - &RationalFunction::linear(sign.signum() * d as i64);
    if g.is_zero() {
        return Ok(BigRational::zero());
    }
    match g.degree_excess() {
        Some(-1) => {
            let lim = g.limit_over_power(-1).expect("finite");
            Ok(if sign < 0 { lim } else { -lim })
        }
        Some(e) if e < -1 => Err(Error::Inconsistent(format!(
            "child sum of {f} vanishes to order {}",
            -e
        ))),
        _ => Err(Error::Inconsistent(format!(
            "z (F - {}z) has no finite limit for F = {f}",
            sign.signum() * d as i64
        ))),
    }
}

#[derive(Debug)]
struct Node {
    degree: usize,
    reciprocal_sum: BigRational,
    children: Vec<Arc<Node>>,
    size: usize,
    code: String,
}

impl Node {
    fn new(degree: usize, reciprocal_sum: BigRational, mut children: Vec<Arc<Node>>) -> Node {
        children.sort_by(|a, b| a.code.cmp(&b.code));
        let mut code = String::from("(");
        for c in &children {
            code.push_str(&c.code);
        }
        code.push(')');
        Node {
            degree,
            reciprocal_sum,
            size: 1 + children.iter().map(|c| c.size).sum::<usize>(),
            children,
            code,
        }
    }

    fn to_tree(&self) -> (RootedTree, ExpansionTrace) {
        let mut children_lists: Vec<Vec<usize>> = Vec::new();
        let mut records = Vec::new();
        fn walk(
            node: &Node,
            depth: usize,
            lists: &mut Vec<Vec<usize>>,
            records: &mut Vec<TraceRecord>,
        ) -> usize {
            let id = lists.len();
            lists.push(Vec::new());
            let mut child_degrees: Vec<usize> = node.children.iter().map(|c| c.degree).collect();
            child_degrees.sort_unstable();
            records.push(TraceRecord {
                vertex: id,
                depth,
                sign: depth_sign(depth),
                degree: node.degree,
                reciprocal_sum: node.reciprocal_sum.clone(),
                child_degrees,
            });
            for c in &node.children {
                let cid = walk(c, depth + 1, lists, records);
                lists[id].push(cid);
            }
            id
        }
        walk(self, 0, &mut children_lists, &mut records);
        let tree = RootedTree::from_children(&children_lists).expect("search builds trees");
        (tree, ExpansionTrace { records })
    }
}

type Realizations = Arc<Vec<Arc<Node>>>;

struct Search<'a> {
    table: &'a BranchTable,
    memo: HashMap<(RationalFunction, usize, bool, usize), Realizations>,
}

impl Search<'_> {
    /// Every subtree whose top vertex has `degree` (in the whole tree), whose
    /// tail `T` equals `tail`, with at most `budget` vertices.
    fn realize(
        &mut self,
        tail: &RationalFunction,
        degree: usize,
        is_root: bool,
        budget: usize,
    ) -> Realizations {
        let key = (tail.clone(), degree, is_root, budget);
        if let Some(hit) = self.memo.get(&key) {
            return Arc::clone(hit);
        }
        let out = Arc::new(self.realize_uncached(tail, degree, is_root, budget));
        self.memo.insert(key, Arc::clone(&out));
        out
    }

    fn realize_uncached(
        &mut self,
        tail: &RationalFunction,
        degree: usize,
        is_root: bool,
        budget: usize,
    ) -> Vec<Arc<Node>> {
        let k = if is_root { degree } else { degree - 1 };
        if budget < 1 + k {
            return Vec::new();
        }
        // sum of the child tails W_c
        let h = -(tail + &RationalFunction::linear(degree as i64));
        if k == 0 {
            return if h.is_zero() {
                vec![Arc::new(Node::new(degree, BigRational::zero(), Vec::new()))]
            } else {
                Vec::new()
            };
        }
        if h.degree_excess() != Some(-1) {
            return Vec::new();
        }
        let r = -h.limit_over_power(-1).expect("finite");
        if !r.is_positive() {
            return Vec::new();
        }
        let child_budget = budget - 1;
        let d_max = (child_budget + 1 - k).min(self.table.max_size());
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for degrees in egyptian_multisets(&r, k, d_max) {
            for dec in decompose_tails(self.table, &h, &degrees, child_budget) {
                let groups: Vec<(usize, usize, usize)> = dec
                    .iter()
                    .map(|&(d, i, m)| (d, self.table.entry(d, i).min_size, m))
                    .collect();
                let total_min: usize = groups.iter().map(|&(_, s, m)| s * m).sum();
                let mut options = Vec::with_capacity(dec.len());
                for (&(d, i, _), &(_, min_size, _)) in dec.iter().zip(&groups) {
                    let single_budget = child_budget - (total_min - min_size);
                    let child_tail = self.table.entry(d, i).tail.recip().expect("nonzero tail");
                    options.push(self.realize(&child_tail, d, false, single_budget));
                }
                let mut current = Vec::new();
                combine(
                    &groups,
                    &options,
                    0,
                    0,
                    child_budget,
                    &mut current,
                    &mut |kids| {
                        let node = Node::new(degree, r.clone(), kids.to_vec());
                        if seen.insert(node.code.clone()) {
                            out.push(Arc::new(node));
                        }
                    },
                );
            }
        }
        out
    }
}

/// Chooses, for each group `(degree, min_size, multiplicity)`, a multiset of
/// `multiplicity` realizations, keeping the total size within `budget`.
fn combine(
    groups: &[(usize, usize, usize)],
    options: &[Realizations],
    group: usize,
    used: usize,
    budget: usize,
    current: &mut Vec<Arc<Node>>,
    emit: &mut dyn FnMut(&[Arc<Node>]),
) {
    if group == groups.len() {
        emit(current);
        return;
    }
    let rest_min: usize = groups[group + 1..].iter().map(|&(_, s, m)| s * m).sum();
    let (_, _, mult) = groups[group];
    choose(
        groups, options, group, mult, 0, used, rest_min, budget, current, emit,
    );
}

#[allow(clippy::too_many_arguments)]
fn choose(
    groups: &[(usize, usize, usize)],
    options: &[Realizations],
    group: usize,
    left: usize,
    from: usize,
    used: usize,
    rest_min: usize,
    budget: usize,
    current: &mut Vec<Arc<Node>>,
    emit: &mut dyn FnMut(&[Arc<Node>]),
) {
    if left == 0 {
        combine(groups, options, group + 1, used, budget, current, emit);
        return;
    }
    let min_size = groups[group].1;
    for (j, node) in options[group].iter().enumerate().skip(from) {
        if used + node.size + (left - 1) * min_size + rest_min > budget {
            continue;
        }
        current.push(Arc::clone(node));
        choose(
            groups,
            options,
            group,
            left - 1,
            j,
            used + node.size,
            rest_min,
            budget,
            current,
            emit,
        );
        current.pop();
    }
}

/// Every rooted tree shape with at most `p_max` vertices whose ratio equals
/// `r`, for root degree `d0`.
pub fn invert_ratio(r: &RationalFunction, d0: usize, p_max: usize) -> Result<Vec<CandidateShape>> {
    Ok(invert_ratio_with(r, d0, &InvertOptions::new(p_max))?.candidates)
}

pub fn invert_ratio_with(
    r: &RationalFunction,
    d0: usize,
    options: &InvertOptions,
) -> Result<Inversion> {
    let found = root_degree_from_ratio(r)?;
    if found != d0 {
        return Err(Error::Inconsistent(format!(
            "ratio implies root degree {found}, but d0 = {d0}"
        )));
    }
    if options.p_max < d0 + 1 {
        return Ok(Inversion {
            candidates: Vec::new(),
            complete: true,
        });
    }
    // the largest branch hanging off the root
    let largest_branch = options.p_max - d0;
    let horizon = largest_branch.min(options.max_branch_size);
    let table = BranchTable::shared(horizon);
    let mut search = Search {
        table: &table,
        memo: HashMap::new(),
    };
    let nodes = search.realize(r, d0, true, options.p_max);
    let mut by_code = BTreeMap::new();
    for node in nodes.iter() {
        let (tree, trace) = node.to_tree();
        let verified = compute_ratio(&tree)? == *r;
        if !verified {
            continue;
        }
        let code = canonical_code(&tree, CodeMode::Rooted);
        by_code.entry(code.clone()).or_insert(CandidateShape {
            tree,
            code,
            trace,
            verified,
        });
    }
    Ok(Inversion {
        candidates: by_code.into_values().collect(),
        complete: largest_branch <= options.max_branch_size,
    })
}

/// Brute-force counterpart of [`invert_ratio`]: filters every rooted tree
/// with at most `p_max` vertices by its ratio.
pub fn invert_ratio_exhaustive(
    r: &RationalFunction,
    d0: usize,
    p_max: usize,
) -> Result<Vec<CandidateShape>> {
    let found = root_degree_from_ratio(r)?;
    if found != d0 {
        return Err(Error::Inconsistent(format!(
            "ratio implies root degree {found}, but d0 = {d0}"
        )));
    }
    if p_max > ENUMERATION_BOUND {
        return Err(Error::BoundExceeded {
            what: "p_max",
            value: p_max,
            bound: ENUMERATION_BOUND,
        });
    }
    let mut out = Vec::new();
    for t in all_rooted_trees_up_to(p_max)? {
        if t.p() < 2 || t.degree(t.root()) != d0 {
            continue;
        }
        if compute_ratio(&t)? == *r {
            out.push(CandidateShape::from_tree(t, r)?);
        }
    }
    out.sort_by(|a, b| a.code.cmp(&b.code));
    Ok(out)
}

/// Keeps the candidates whose own `psi` and `psi_hat` are proportional to
/// the given ones. The reduced ratio forgets common factors of the two
/// polynomials, which can leave several shapes; the pair itself is finer.
pub fn filter_by_polynomials(
    candidates: Vec<CandidateShape>,
    psi: &Poly,
    psi_hat: &Poly,
) -> Result<Vec<CandidateShape>> {
    let (psi, psi_hat) = (psi.canonical(), psi_hat.canonical());
    let mut out = Vec::with_capacity(candidates.len());
    for c in candidates {
        if compute_psi(&c.tree).canonical() == psi
            && compute_psi_hat(&c.tree)?.canonical() == psi_hat
        {
            out.push(c);
        }
    }
    Ok(out)
}

/// Groups rooted candidates by their unrooted shape.
pub fn group_unrooted(candidates: &[CandidateShape]) -> BTreeMap<ShapeCode, Vec<&CandidateShape>> {
    let mut out: BTreeMap<ShapeCode, Vec<&CandidateShape>> = BTreeMap::new();
    for c in candidates {
        out.entry(canonical_code(&c.tree, CodeMode::Unrooted))
            .or_default()
            .push(c);
    }
    out
}

/// `R + d0 z`: the alternating child sum at the root.
pub fn root_child_sum(r: &RationalFunction, d0: usize) -> RationalFunction {
    r + &RationalFunction::linear(d0 as i64)
}
