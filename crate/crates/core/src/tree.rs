//! Rooted trees, canonical shape codes, enumeration and the principal
//! subforest.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest vertex count accepted by [`enumerate_trees`].
pub const ENUMERATION_BOUND: usize = 12;

/// A finite tree with a distinguished root. Vertex ids are `0..p`.
#[derive(Clone, PartialEq, Eq)]
pub struct RootedTree {
    p: usize,
    root: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

/// On-disk form: `{"p": 3, "root": 0, "edges": [[0,1],[1,2]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeJson {
    pub p: usize,
    pub root: usize,
    pub edges: Vec<[usize; 2]>,
}

impl RootedTree {
    pub fn new(p: usize, root: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidTree(
                "a tree needs at least one vertex".into(),
            ));
        }
        if root >= p {
            return Err(Error::InvalidTree(format!(
                "root {root} out of range 0..{p}"
            )));
        }
        if edges.len() != p - 1 {
            return Err(Error::InvalidTree(format!(
                "{} edges for {p} vertices (expected {})",
                edges.len(),
                p - 1
            )));
        }
        let mut adjacency = vec![Vec::new(); p];
        for &(a, b) in &edges {
            if a >= p || b >= p {
                return Err(Error::InvalidTree(format!("edge ({a},{b}) out of range")));
            }
            if a == b {
                return Err(Error::InvalidTree(format!("self-loop at {a}")));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        let tree = RootedTree {
            p,
            root,
            edges,
            adjacency,
        };
        if tree.bfs_order().len() != p {
            return Err(Error::InvalidTree("graph is not connected".into()));
        }
        Ok(tree)
    }

    pub fn single_vertex() -> Self {
        RootedTree::new(1, 0, Vec::new()).expect("valid")
    }

    /// Path on `p` vertices `0 - 1 - ... - (p-1)`.
    pub fn path(p: usize, root: usize) -> Result<Self> {
        RootedTree::new(p, root, (1..p).map(|i| (i - 1, i)).collect())
    }

    /// Star with `leaves` leaves; vertex 0 is the center.
    pub fn star(leaves: usize, root: usize) -> Result<Self> {
        RootedTree::new(leaves + 1, root, (1..=leaves).map(|i| (0, i)).collect())
    }

    /// Builds a rooted tree from children lists (vertex 0 is the root).
    pub fn from_children(children: &[Vec<usize>]) -> Result<Self> {
        let edges = children
            .iter()
            .enumerate()
            .flat_map(|(v, cs)| cs.iter().map(move |&c| (v, c)))
            .collect();
        RootedTree::new(children.len(), 0, edges)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// Same tree, different root.
    pub fn reroot(&self, root: usize) -> Result<Self> {
        RootedTree::new(self.p, root, self.edges.clone())
    }

    /// Vertices in breadth-first order from the root.
    pub fn bfs_order(&self) -> Vec<usize> {
        let mut seen = vec![false; self.p];
        let mut order = Vec::with_capacity(self.p);
        let mut queue = VecDeque::from([self.root]);
        seen[self.root] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        order
    }

    /// Parent of every vertex (`None` for the root).
    pub fn parents(&self) -> Vec<Option<usize>> {
        let mut parent = vec![None; self.p];
        let mut seen = vec![false; self.p];
        let mut queue = VecDeque::from([self.root]);
        seen[self.root] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(v);
                    queue.push_back(w);
                }
            }
        }
        parent
    }

    /// Children lists, oriented away from the root.
    pub fn children(&self) -> Vec<Vec<usize>> {
        let parent = self.parents();
        let mut children = vec![Vec::new(); self.p];
        for v in self.bfs_order() {
            if let Some(u) = parent[v] {
                children[u].push(v);
            }
        }
        children
    }

    pub fn depths(&self) -> Vec<usize> {
        let parent = self.parents();
        let mut depth = vec![0; self.p];
        for v in self.bfs_order() {
            if let Some(u) = parent[v] {
                depth[v] = depth[u] + 1;
            }
        }
        depth
    }

    pub fn to_json(&self) -> TreeJson {
        TreeJson {
            p: self.p,
            root: self.root,
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: TreeJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        RootedTree::try_from(j)
    }

    /// Graphviz rendering; the root carries `root=true` and a double circle.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph tree {\n");
        for v in 0..self.p {
            if v == self.root {
                out.push_str(&format!("  {v} [shape=doublecircle, root=true];\n"));
            } else {
                out.push_str(&format!("  {v} [shape=circle];\n"));
            }
        }
        for &(a, b) in &self.edges {
            out.push_str(&format!("  {a} -- {b};\n"));
        }
        out.push_str("}\n");
        out
    }

    /// Relabels vertices by `perm` (vertex `v` becomes `perm[v]`).
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        RootedTree::new(
            self.p,
            perm[self.root],
            self.edges
                .iter()
                .map(|&(a, b)| (perm[a], perm[b]))
                .collect(),
        )
    }

    /// Centers of the underlying free tree (one or two vertices).
    pub fn centers(&self) -> Vec<usize> {
        if self.p <= 2 {
            return (0..self.p).collect();
        }
        let mut degree = self.degrees();
        let mut removed = vec![false; self.p];
        let mut layer: Vec<usize> = (0..self.p).filter(|&v| degree[v] == 1).collect();
        let mut remaining = self.p;
        while remaining > 2 {
            remaining -= layer.len();
            let mut next = Vec::new();
            for &leaf in &layer {
                removed[leaf] = true;
            }
            for &leaf in &layer {
                for &w in &self.adjacency[leaf] {
                    if !removed[w] {
                        degree[w] -= 1;
                        if degree[w] == 1 {
                            next.push(w);
                        }
                    }
                }
            }
            layer = next;
        }
        layer.sort_unstable();
        layer
    }
}

impl TryFrom<TreeJson> for RootedTree {
    type Error = Error;
    fn try_from(j: TreeJson) -> Result<Self> {
        RootedTree::new(
            j.p,
            j.root,
            j.edges.into_iter().map(|[a, b]| (a, b)).collect(),
        )
    }
}

impl fmt::Debug for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "RootedTree(p={}, root={}, code={})",
            self.p,
            self.root,
            canonical_code(self, CodeMode::Rooted)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeMode {
    Rooted,
    Unrooted,
}

/// Isomorphism-invariant encoding of a tree shape (nested parentheses with
/// sorted children).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ShapeCode(pub String);

impl fmt::Display for ShapeCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn rooted_code_at(tree: &RootedTree, root: usize) -> String {
    let rerooted = RootedTree {
        root,
        ..tree.clone()
    };
    let children = rerooted.children();
    let order = rerooted.bfs_order();
    let mut codes: Vec<String> = vec![String::new(); tree.p];
    for &v in order.iter().rev() {
        let mut kids: Vec<&str> = children[v].iter().map(|&c| codes[c].as_str()).collect();
        kids.sort_unstable();
        let mut s = String::with_capacity(2 + kids.iter().map(|k| k.len()).sum::<usize>());
        s.push('(');
        for k in kids {
            s.push_str(k);
        }
        s.push(')');
        codes[v] = s;
    }
    std::mem::take(&mut codes[root])
}

pub fn canonical_code(tree: &RootedTree, mode: CodeMode) -> ShapeCode {
    match mode {
        CodeMode::Rooted => ShapeCode(rooted_code_at(tree, tree.root)),
        CodeMode::Unrooted => ShapeCode(
            tree.centers()
                .into_iter()
                .map(|c| rooted_code_at(tree, c))
                .min()
                .expect("a tree has a center"),
        ),
    }
}

/// Root of the canonical unrooted form (the center with the smaller code).
pub fn canonical_center(tree: &RootedTree) -> usize {
    tree.centers()
        .into_iter()
        .min_by_key(|&c| rooted_code_at(tree, c))
        .expect("a tree has a center")
}

/// Rebuilds the canonical representative of a rooted code: vertex ids in
/// preorder with children sorted by code.
pub fn tree_from_code(code: &ShapeCode) -> Result<RootedTree> {
    let bytes = code.0.as_bytes();
    let bad = || Error::Parse(format!("malformed shape code {code}"));
    if bytes.first() != Some(&b'(') {
        return Err(bad());
    }
    let mut children: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => {
                if stack.is_empty() && i > 0 {
                    return Err(bad());
                }
                let id = children.len();
                children.push(Vec::new());
                if let Some(&parent) = stack.last() {
                    children[parent].push(id);
                }
                stack.push(id);
            }
            b')' => {
                stack.pop().ok_or_else(bad)?;
            }
            _ => return Err(bad()),
        }
    }
    if !stack.is_empty() {
        return Err(bad());
    }
    RootedTree::from_children(&children)
}

/// Principal subforest component: the tree hanging off one neighbour of the
/// root, with its vertex degrees measured in the original tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForestComponent {
    /// Local tree, rooted at the vertex that was adjacent to the deleted root.
    pub tree: RootedTree,
    /// `original_ids[local] = id in the original tree`.
    pub original_ids: Vec<usize>,
    /// Degree of each local vertex in the original tree.
    pub degree_in_t: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeLabeledForest {
    pub components: Vec<ForestComponent>,
}

impl DegreeLabeledForest {
    pub fn vertex_count(&self) -> usize {
        self.components.iter().map(|c| c.tree.p()).sum()
    }
}

/// Deletes the root and its incident edges, keeping degrees from `t`.
pub fn principal_subforest(t: &RootedTree) -> Result<DegreeLabeledForest> {
    if t.p() < 2 {
        return Err(Error::NoEdges);
    }
    let children = t.children();
    let components = children[t.root()]
        .iter()
        .map(|&top| {
            let mut original_ids = vec![top];
            let mut local_children: Vec<Vec<usize>> = vec![Vec::new()];
            let mut i = 0;
            while i < original_ids.len() {
                let v = original_ids[i];
                for &c in &children[v] {
                    let id = original_ids.len();
                    original_ids.push(c);
                    local_children.push(Vec::new());
                    local_children[i].push(id);
                }
                i += 1;
            }
            let tree = RootedTree::from_children(&local_children).expect("subtree is a tree");
            let degree_in_t = original_ids.iter().map(|&v| t.degree(v)).collect();
            ForestComponent {
                tree,
                original_ids,
                degree_in_t,
            }
        })
        .collect();
    Ok(DegreeLabeledForest { components })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumerationMode {
    Rooted,
    Free,
}

/// One representative per isomorphism class, sorted by canonical code.
///
/// Generate-and-canonicalize: every rooted tree on `n` vertices arises from
/// one on `n - 1` vertices by attaching a leaf.
pub fn enumerate_trees(p: usize, mode: EnumerationMode) -> Result<Vec<RootedTree>> {
    enumerate_trees_bounded(p, mode, ENUMERATION_BOUND)
}

pub fn enumerate_trees_bounded(
    p: usize,
    mode: EnumerationMode,
    bound: usize,
) -> Result<Vec<RootedTree>> {
    if p == 0 {
        return Err(Error::InvalidTree(
            "a tree needs at least one vertex".into(),
        ));
    }
    if p > bound {
        return Err(Error::BoundExceeded {
            what: "p",
            value: p,
            bound,
        });
    }
    let rooted = rooted_codes(p);
    match mode {
        EnumerationMode::Rooted => rooted.iter().map(tree_from_code).collect(),
        EnumerationMode::Free => {
            let mut free = BTreeMap::new();
            for code in &rooted {
                let t = tree_from_code(code)?;
                let c = canonical_center(&t);
                let centered = t.reroot(c)?;
                free.entry(canonical_code(&centered, CodeMode::Unrooted))
                    .or_insert(canonical_code(&centered, CodeMode::Rooted));
            }
            free.values().map(tree_from_code).collect()
        }
    }
}

/// Rooted shape codes on exactly `p` vertices, sorted.
pub fn rooted_codes(p: usize) -> BTreeSet<ShapeCode> {
    rooted_code_levels(p).pop().unwrap_or_default()
}

/// Rooted shape codes grouped by size: entry `n` holds the trees on `n + 1`
/// vertices.
pub fn rooted_code_levels(p_max: usize) -> Vec<BTreeSet<ShapeCode>> {
    let mut levels = Vec::with_capacity(p_max);
    if p_max == 0 {
        return levels;
    }
    levels.push(BTreeSet::from([ShapeCode("()".into())]));
    for n in 2..=p_max {
        let mut next = BTreeSet::new();
        for code in &levels[n - 2] {
            let t = tree_from_code(code).expect("own code");
            for v in 0..n - 1 {
                let mut edges = t.edges().to_vec();
                edges.push((v, n - 1));
                let grown = RootedTree::new(n, 0, edges).expect("leaf attachment keeps a tree");
                next.insert(canonical_code(&grown, CodeMode::Rooted));
            }
        }
        levels.push(next);
    }
    levels
}

/// Every rooted tree with `1..=p_max` vertices.
pub fn all_rooted_trees_up_to(p_max: usize) -> Result<Vec<RootedTree>> {
    let mut out = Vec::new();
    for p in 1..=p_max {
        out.extend(enumerate_trees(p, EnumerationMode::Rooted)?);
    }
    Ok(out)
}

/// Snowflake: a central root with one arm vertex of degree `d` per entry,
/// each arm carrying `d - 1` pendant leaves.
pub fn make_snowflake(arm_degrees: &[usize]) -> Result<RootedTree> {
    if arm_degrees.is_empty() {
        return Err(Error::EmptyMultiset);
    }
    if arm_degrees.contains(&0) {
        return Err(Error::InvalidTree("arm degrees must be positive".into()));
    }
    let mut children: Vec<Vec<usize>> = vec![Vec::new()];
    for &d in arm_degrees {
        let arm = children.len();
        children[0].push(arm);
        children.push(Vec::new());
        for _ in 1..d {
            let leaf = children.len();
            children[arm].push(leaf);
            children.push(Vec::new());
        }
    }
    RootedTree::from_children(&children)
}

/// Uniformly random labelled tree (random Prüfer sequence) with a random
/// root.
pub fn random_tree<R: Rng + ?Sized>(p: usize, rng: &mut R) -> RootedTree {
    assert!(p >= 1);
    let root = rng.gen_range(0..p);
    if p <= 2 {
        return RootedTree::path(p, root).expect("valid");
    }
    let seq: Vec<usize> = (0..p - 2).map(|_| rng.gen_range(0..p)).collect();
    let mut degree = vec![1usize; p];
    for &s in &seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(p - 1);
    for &s in &seq {
        let leaf = (0..p).find(|&v| degree[v] == 1).expect("a leaf exists");
        edges.push((leaf, s));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..p).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    RootedTree::new(p, root, edges).expect("Prüfer decoding yields a tree")
}
