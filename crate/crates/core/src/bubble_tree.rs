//! Weighted rooted trees describing how charge bubbles off.
//!
//! Vertices are numbered `0..n`; vertex weights are non-negative charges.
//! A tree is a bubble tree when every non-root vertex `v` either carries
//! weight, or has at least two children and each child subtree carries
//! positive total weight.
//!
//! ## Canonical encoding
//!
//! `(w c_1 c_2 ...)` without separators, where `w` is the decimal weight and
//! the `c_i` are the encodings of the child subtrees sorted as strings. For
//! example `(0(1)(1))` is a ghost root with two charge one leaves. Two trees
//! are isomorphic exactly when their encodings agree, and [`BubbleTree`]
//! parses the same format back with `str::parse`.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BubbleTree {
    weights: Vec<u64>,
    parents: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    root: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeDefect {
    /// Weight zero and fewer than two children.
    GhostWithFewChildren { vertex: usize },
    /// Weight zero and a child subtree of total weight zero.
    GhostWithWeightlessChild { vertex: usize, child: usize },
}

impl fmt::Display for TreeDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeDefect::GhostWithFewChildren { vertex } => {
                write!(f, "ghost vertex {vertex} has fewer than two children")
            }
            TreeDefect::GhostWithWeightlessChild { vertex, child } => {
                write!(f, "ghost vertex {vertex} has child {child} of total weight 0")
            }
        }
    }
}

impl TreeDefect {
    pub fn code(&self) -> &'static str {
        match self {
            TreeDefect::GhostWithFewChildren { .. } => "ghost_few_children",
            TreeDefect::GhostWithWeightlessChild { .. } => "ghost_weightless_child",
        }
    }
}

impl BubbleTree {
    pub fn single(weight: u64) -> Self {
        BubbleTree { weights: vec![weight], parents: vec![None], children: vec![vec![]], root: 0 }
    }

    /// Builds a tree from per-vertex weights and parents. Exactly one vertex
    /// has no parent; it becomes the root. Defects in the bubble condition
    /// are allowed here and reported by [`BubbleTree::validate`].
    pub fn from_parents(weights: Vec<u64>, parents: Vec<Option<usize>>) -> Result<Self> {
        let n = weights.len();
        if n == 0 || parents.len() != n {
            return Err(Error::validation("weights and parents must be nonempty and equal length"));
        }
        let roots: Vec<usize> = (0..n).filter(|&v| parents[v].is_none()).collect();
        let [root] = roots[..] else {
            return Err(Error::validation(format!("expected one root, found {}", roots.len())));
        };
        let mut children = vec![Vec::new(); n];
        for (v, p) in parents.iter().enumerate() {
            if let Some(p) = *p {
                if p >= n || p == v {
                    return Err(Error::validation(format!("vertex {v} has invalid parent {p}")));
                }
                children[p].push(v);
            }
        }
        let tree = BubbleTree { weights, parents, children, root };
        if tree.preorder().len() != n {
            return Err(Error::validation("parent map contains a cycle"));
        }
        Ok(tree)
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn vertex_count(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self, v: usize) -> u64 {
        self.weights[v]
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parents[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    /// `(parent, child)` pairs in preorder of the child.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.preorder().into_iter().filter_map(|v| self.parents[v].map(|p| (p, v))).collect()
    }

    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.weights.len());
        let mut stack = vec![self.root];
        let mut seen = vec![false; self.weights.len()];
        while let Some(v) = stack.pop() {
            if std::mem::replace(&mut seen[v], true) {
                break;
            }
            out.push(v);
            stack.extend(self.children[v].iter().rev());
        }
        out
    }

    /// `W(v)`: total weight of the subtree at `v`.
    pub fn subtree_weight(&self, v: usize) -> u64 {
        self.weights[v] + self.children[v].iter().map(|&c| self.subtree_weight(c)).sum::<u64>()
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.iter().sum()
    }

    pub fn depth(&self) -> usize {
        fn go(t: &BubbleTree, v: usize) -> usize {
            t.children[v].iter().map(|&c| 1 + go(t, c)).max().unwrap_or(0)
        }
        go(self, self.root)
    }

    pub fn validate(&self) -> std::result::Result<(), TreeDefect> {
        for v in self.preorder() {
            if v == self.root || self.weights[v] != 0 {
                continue;
            }
            if self.children[v].len() < 2 {
                return Err(TreeDefect::GhostWithFewChildren { vertex: v });
            }
            if let Some(&c) = self.children[v].iter().find(|&&c| self.subtree_weight(c) == 0) {
                return Err(TreeDefect::GhostWithWeightlessChild { vertex: v, child: c });
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Non-root vertices of weight zero.
    pub fn ghost_vertices(&self) -> Vec<usize> {
        self.preorder().into_iter().filter(|&v| v != self.root && self.weights[v] == 0).collect()
    }

    pub fn encoding(&self) -> String {
        self.encoding_at(self.root)
    }

    pub fn encoding_at(&self, v: usize) -> String {
        let mut keys: Vec<String> = self.children[v].iter().map(|&c| self.encoding_at(c)).collect();
        keys.sort();
        format!("({}{})", self.weights[v], keys.concat())
    }

    /// `|S_m_v|`: the product of factorials of the multiplicities of the
    /// isomorphism classes among the children of `v`.
    pub fn symmetry_order(&self, v: usize) -> u64 {
        let mut classes: BTreeMap<String, u64> = BTreeMap::new();
        for &c in &self.children[v] {
            *classes.entry(self.encoding_at(c)).or_default() += 1;
        }
        classes.values().map(|&m| (1..=m).product::<u64>()).product()
    }

    /// Merges `child` into `parent`: weights add and the grandchildren move up.
    /// Remaining vertices keep their relative order and are renumbered.
    pub fn contract(&self, edge: (usize, usize)) -> Result<BubbleTree> {
        let (p, c) = edge;
        if c >= self.vertex_count() || self.parents[c] != Some(p) {
            return Err(Error::validation(format!("no edge ({p}, {c}) in tree")));
        }
        let renumber = |v: usize| if v > c { v - 1 } else { v };
        let mut weights = Vec::with_capacity(self.vertex_count() - 1);
        let mut parents = Vec::with_capacity(self.vertex_count() - 1);
        for v in 0..self.vertex_count() {
            if v == c {
                continue;
            }
            let w = if v == p { self.weights[p] + self.weights[c] } else { self.weights[v] };
            let parent = self.parents[v].map(|q| if q == c { p } else { q });
            weights.push(w);
            parents.push(parent.map(renumber));
        }
        BubbleTree::from_parents(weights, parents)
    }

    /// Whether `other` arises from `self` by contracting some set of edges.
    pub fn leq(&self, other: &BubbleTree) -> bool {
        if self.total_weight() != other.total_weight() || self.vertex_count() < other.vertex_count()
        {
            return false;
        }
        let target = other.encoding();
        let mut seen = HashSet::new();
        let mut queue = VecDeque::from([self.clone()]);
        seen.insert(self.encoding());
        while let Some(t) = queue.pop_front() {
            if t.encoding() == target {
                return true;
            }
            if t.vertex_count() == other.vertex_count() {
                continue;
            }
            for e in t.edges() {
                let next = t.contract(e).expect("edge comes from the tree");
                if seen.insert(next.encoding()) {
                    queue.push_back(next);
                }
            }
        }
        false
    }

    /// Applies `f` to every vertex id, producing an isomorphic tree whose
    /// vertex `f(v)` corresponds to `v`. `f` must be a permutation.
    pub fn relabel(&self, f: &[usize]) -> Result<BubbleTree> {
        let n = self.vertex_count();
        let mut weights = vec![0; n];
        let mut parents = vec![None; n];
        for v in 0..n {
            weights[f[v]] = self.weights[v];
            parents[f[v]] = self.parents[v].map(|p| f[p]);
        }
        BubbleTree::from_parents(weights, parents)
    }
}

impl fmt::Display for BubbleTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encoding())
    }
}

impl FromStr for BubbleTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bytes = s.as_bytes();
        let mut weights = Vec::new();
        let mut parents = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        let mut i = 0;
        let bad = |i: usize| Error::validation(format!("malformed tree encoding at byte {i}"));
        while i < bytes.len() {
            match bytes[i] {
                b'(' => {
                    if stack.is_empty() && !weights.is_empty() {
                        return Err(bad(i));
                    }
                    let start = i + 1;
                    let mut end = start;
                    while end < bytes.len() && bytes[end].is_ascii_digit() {
                        end += 1;
                    }
                    let w = s[start..end].parse::<u64>().map_err(|_| bad(start))?;
                    parents.push(stack.last().copied());
                    stack.push(weights.len());
                    weights.push(w);
                    i = end;
                }
                b')' => {
                    stack.pop().ok_or_else(|| bad(i))?;
                    i += 1;
                }
                _ => return Err(bad(i)),
            }
        }
        if !stack.is_empty() || weights.is_empty() {
            return Err(bad(bytes.len()));
        }
        BubbleTree::from_parents(weights, parents)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationConfig {
    pub k_max: u64,
    pub max_trees: usize,
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        EnumerationConfig { k_max: 6, max_trees: 1_000_000 }
    }
}

/// Every bubble tree of total weight `k`, one per isomorphism class, as
/// sorted canonical encodings.
pub fn enumerate(k: u64) -> Result<Vec<String>> {
    enumerate_with(k, &EnumerationConfig::default())
}

pub fn enumerate_with(k: u64, config: &EnumerationConfig) -> Result<Vec<String>> {
    if k == 0 {
        return Err(Error::validation("k must be at least 1"));
    }
    if k > config.k_max {
        return Err(Error::ResourceLimit(format!("k = {k} exceeds k_max = {}", config.k_max)));
    }
    let mut gen = Generator { subtrees: vec![Vec::new()], limit: config.max_trees };
    for n in 1..=k {
        let level = gen.level(n, true)?;
        gen.subtrees.push(level);
    }
    let mut out = gen.level(k, false)?;
    out.sort();
    Ok(out)
}

/// Builds encodings bottom up. `subtrees[n]` holds the valid non-root
/// subtrees of total weight `n`; every such subtree has positive weight, so
/// a tree of weight `k` is a root weight plus a multiset of them.
struct Generator {
    subtrees: Vec<Vec<String>>,
    limit: usize,
}

impl Generator {
    fn level(&self, n: u64, non_root: bool) -> Result<Vec<String>> {
        let mut out = Vec::new();
        for w in 0..=n {
            let min_children = if non_root && w == 0 { 2 } else { 0 };
            let mut forests = Vec::new();
            self.forests(n - w, (1, 0), &mut Vec::new(), &mut forests);
            for forest in forests.into_iter().filter(|f| f.len() >= min_children) {
                let mut keys: Vec<&str> = forest.iter().map(|&(s, i)| self.subtrees[s][i].as_str()).collect();
                keys.sort();
                out.push(format!("({w}{})", keys.concat()));
                if out.len() > self.limit {
                    return Err(Error::ResourceLimit(format!(
                        "more than {} trees of weight {n}",
                        self.limit
                    )));
                }
            }
        }
        Ok(out)
    }

    /// Multisets of subtrees with total weight `rest`, listed with
    /// non-decreasing `(weight, index)` so each multiset appears once.
    fn forests(
        &self,
        rest: u64,
        from: (usize, usize),
        current: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if rest == 0 {
            out.push(current.clone());
            return;
        }
        for s in from.0..=(rest as usize).min(self.subtrees.len() - 1) {
            let start = if s == from.0 { from.1 } else { 0 };
            for i in start..self.subtrees[s].len() {
                current.push((s, i));
                self.forests(rest - s as u64, (s, i), current, out);
                current.pop();
            }
        }
    }
}
