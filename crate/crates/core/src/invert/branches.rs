//! Branch tails and the splitting of a vertex tail into child tails.
//!
//! Internally every subtree hanging below a vertex (a "branch") is described
//! by its tail `W = 1 / T`, where `T = -d z - sum W_child` and `d` is the
//! degree of the branch's top vertex in the whole tree. This form does not
//! depend on depth; the alternating-sign form used for display is
//! `S = (-1)^depth T`.
//!
//! Each `W` is the diagonal entry of a resolvent of `-zD + A`, so it is
//! increasing between its poles: all poles are simple and all residues have
//! the same sign. Sums of sibling tails therefore never cancel a pole, and
//! the reduced denominator of every child tail divides the reduced
//! denominator of their sum. That divisibility is the first filter applied to
//! candidate tails.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use crate::error::Result;
use crate::ratfunc::RationalFunction;
use crate::tree::{rooted_code_levels, ShapeCode};

/// A realizable branch tail and the fewest vertices realizing it.
#[derive(Debug, Clone)]
pub struct BranchEntry {
    pub tail: RationalFunction,
    pub min_size: usize,
}

/// Every distinct branch tail with at most `max_size` vertices, grouped by
/// the degree of the branch's top vertex.
#[derive(Debug)]
pub struct BranchTable {
    max_size: usize,
    by_degree: Vec<Vec<BranchEntry>>,
    index: HashMap<(usize, RationalFunction), usize>,
}

/// `W = 1 / (-d z - sum of child tails)`.
pub fn branch_tail(degree: usize, child_sum: &RationalFunction) -> RationalFunction {
    let t = &RationalFunction::linear(-(degree as i64)) - child_sum;
    t.recip().expect("tail has a z term")
}

fn split_children(code: &str) -> Vec<&str> {
    let inner = &code[1..code.len() - 1];
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, b) in inner.bytes().enumerate() {
        if b == b'(' {
            if depth == 0 {
                start = i;
            }
            depth += 1;
        } else {
            depth -= 1;
            if depth == 0 {
                out.push(&inner[start..=i]);
            }
        }
    }
    out
}

impl BranchTable {
    pub fn build(max_size: usize) -> BranchTable {
        let mut by_degree: Vec<Vec<BranchEntry>> = vec![Vec::new(); max_size + 2];
        let mut index = HashMap::new();
        let mut memo: HashMap<ShapeCode, RationalFunction> = HashMap::new();
        for (n, level) in rooted_code_levels(max_size).into_iter().enumerate() {
            let size = n + 1;
            for code in level {
                let kids = split_children(&code.0);
                let sum = kids.iter().fold(RationalFunction::zero(), |acc, k| {
                    &acc + &memo[&ShapeCode((*k).to_string())]
                });
                let degree = kids.len() + 1;
                let tail = branch_tail(degree, &sum);
                if let std::collections::hash_map::Entry::Vacant(e) =
                    index.entry((degree, tail.clone()))
                {
                    e.insert(by_degree[degree].len());
                    by_degree[degree].push(BranchEntry {
                        tail: tail.clone(),
                        min_size: size,
                    });
                }
                memo.insert(code, tail);
            }
        }
        BranchTable {
            max_size,
            by_degree,
            index,
        }
    }

    /// Shared table covering at least `max_size`; built on first use.
    pub fn shared(max_size: usize) -> Arc<BranchTable> {
        static CACHE: Mutex<Option<Arc<BranchTable>>> = Mutex::new(None);
        let mut guard = CACHE.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(t) = guard.as_ref() {
            if t.max_size >= max_size {
                return Arc::clone(t);
            }
        }
        let t = Arc::new(BranchTable::build(max_size));
        *guard = Some(Arc::clone(&t));
        t
    }

    pub fn max_size(&self) -> usize {
        self.max_size
    }

    pub fn entries(&self, degree: usize) -> &[BranchEntry] {
        self.by_degree.get(degree).map_or(&[], Vec::as_slice)
    }

    pub fn lookup(&self, degree: usize, tail: &RationalFunction) -> Option<usize> {
        self.index.get(&(degree, tail.clone())).copied()
    }

    pub fn entry(&self, degree: usize, i: usize) -> &BranchEntry {
        &self.by_degree[degree][i]
    }

    pub fn distinct_tails(&self) -> usize {
        self.by_degree.iter().map(Vec::len).sum()
    }
}

/// One way of writing a vertex's child sum as a sum of branch tails:
/// `(degree, table index, multiplicity)`, grouped by equal tails.
pub type Decomposition = Vec<(usize, usize, usize)>;

/// All ways to write `h` (the sum of child tails `W`) as a sum of table
/// tails with the given child degrees and total minimum size at most
/// `size_budget`.
pub fn decompose_tails(
    table: &BranchTable,
    h: &RationalFunction,
    degrees: &[usize],
    size_budget: usize,
) -> Vec<Decomposition> {
    if degrees.is_empty() {
        return if h.is_zero() {
            vec![Vec::new()]
        } else {
            Vec::new()
        };
    }
    let mut degrees = degrees.to_vec();
    degrees.sort_unstable_by(|a, b| b.cmp(a));
    let q = h.den();
    let mut candidates: HashMap<usize, Vec<usize>> = HashMap::new();
    for &d in &BTreeSet::from_iter(degrees.iter().copied()) {
        let cands = table
            .entries(d)
            .iter()
            .enumerate()
            .filter(|(_, e)| e.min_size <= size_budget && e.tail.den().divides(q))
            .map(|(i, _)| i)
            .collect();
        candidates.insert(d, cands);
    }
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(degrees.len());
    pick(
        table,
        h,
        &degrees,
        &candidates,
        &RationalFunction::zero(),
        0,
        size_budget,
        &mut chosen,
        &mut out,
    );
    out
}

#[allow(clippy::too_many_arguments)]
fn pick(
    table: &BranchTable,
    h: &RationalFunction,
    degrees: &[usize],
    candidates: &HashMap<usize, Vec<usize>>,
    partial: &RationalFunction,
    used: usize,
    budget: usize,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Decomposition>,
) {
    let pos = chosen.len();
    let d = degrees[pos];
    let min_index = match pos {
        0 => 0,
        _ if degrees[pos - 1] == d => chosen[pos - 1],
        _ => 0,
    };
    let remaining_min: usize = degrees[pos + 1..].iter().sum();
    if pos + 1 == degrees.len() {
        let need = h - partial;
        if let Some(i) = table.lookup(d, &need) {
            let e = table.entry(d, i);
            if i >= min_index && used + e.min_size <= budget {
                chosen.push(i);
                out.push(group(degrees, chosen));
                chosen.pop();
            }
        }
        return;
    }
    for &i in &candidates[&d] {
        if i < min_index {
            continue;
        }
        let e = table.entry(d, i);
        // a branch of degree d has at least d vertices
        if used + e.min_size + remaining_min > budget {
            continue;
        }
        let next = partial + &e.tail;
        chosen.push(i);
        pick(
            table,
            h,
            degrees,
            candidates,
            &next,
            used + e.min_size,
            budget,
            chosen,
            out,
        );
        chosen.pop();
    }
}

fn group(degrees: &[usize], chosen: &[usize]) -> Decomposition {
    let mut out: Decomposition = Vec::new();
    for (&d, &i) in degrees.iter().zip(chosen) {
        match out.last_mut() {
            Some((ld, li, m)) if *ld == d && *li == i => *m += 1,
            _ => out.push((d, i, 1)),
        }
    }
    out
}

/// Splits the alternating-sign child sum `g` of a vertex with sign `sign`
/// into child fractions: each result lists `(multiplicity, S_child)` where
/// `S_child` behaves like `-sign * d * z` at infinity.
pub fn decompose_branches(
    g: &RationalFunction,
    degrees: &[usize],
    sign: i64,
    max_branch_size: usize,
) -> Result<Vec<Vec<(usize, RationalFunction)>>> {
    let table = BranchTable::shared(max_branch_size);
    let s = crate::poly::rat(sign.signum());
    let h = g.scale(&s);
    let budget = max_branch_size * degrees.len();
    decompose_tails(&table, &h, degrees, budget)
        .into_iter()
        .map(|dec| {
            dec.into_iter()
                .map(|(d, i, m)| {
                    let w = &table.entry(d, i).tail;
                    // S_child = sign / W
                    Ok((m, w.recip()?.scale(&s)))
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn rf(num: &str, den: &str) -> RationalFunction {
        RationalFunction::new(parse_poly(num).unwrap(), parse_poly(den).unwrap()).unwrap()
    }

    #[test]
    fn worked_example_inner_vertex() {
        let g = rf("-7z^3+5z", "12z^4-17z^2+6");
        let decs = decompose_branches(&g, &[3, 4], 1, 8).unwrap();
        assert_eq!(decs.len(), 1);
        let tails: Vec<_> = decs[0].iter().map(|(m, s)| (*m, s.clone())).collect();
        assert!(tails.contains(&(1, rf("-4z^2+3", "z"))));
        assert!(tails.contains(&(1, rf("-3z^2+2", "z"))));
        assert!(decompose_branches(&g, &[2, 12], 1, 8).unwrap().is_empty());
    }

    #[test]
    fn leaf_groups() {
        let two = rf("2", "z");
        let decs = decompose_branches(&two, &[1, 1], -1, 4).unwrap();
        assert_eq!(decs, vec![vec![(2, rf("z", "1"))]]);
        let three = rf("3", "z");
        let decs = decompose_branches(&three, &[1, 1, 1], -1, 4).unwrap();
        assert_eq!(decs, vec![vec![(3, rf("z", "1"))]]);
    }

    #[test]
    fn table_counts_distinct_tails() {
        let t = BranchTable::build(4);
        // rooted trees with 1..=4 vertices: 1 + 1 + 2 + 4
        assert_eq!(t.distinct_tails(), 8);
        assert_eq!(t.entries(1).len(), 1);
        assert_eq!(t.entries(1)[0].tail, rf("-1", "z"));
    }
}
