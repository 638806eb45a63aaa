//! Unlabeled free trees stored as labeled adjacency data.
//!
//! A [`Tree`] is always valid: construction goes through [`validate`], so
//! every other module can rely on `n - 1` edges, no loops or duplicates, and
//! connectivity. Isomorphism classes are identified by [`CanonicalCode`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};

const OPEN: u8 = 1;
const CLOSE: u8 = 0;

/// Raw tree data as it appears on disk: `{"n": 3, "edges": [[0,1],[1,2]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeData {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

/// First violated tree invariant, in checking order.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("a tree needs at least one vertex")]
    Empty,
    #[error("too many vertices ({0})")]
    TooLarge(usize),
    #[error("edge count: expected {expected}, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("edge ({u}, {v}) has an endpoint outside 0..{n}")]
    VertexOutOfRange { u: usize, v: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("graph is disconnected")]
    Disconnected,
}

/// Checks every tree invariant and reports the first one that fails.
pub fn validate(data: &TreeData) -> Result<(), Violation> {
    let n = data.n;
    if n == 0 {
        return Err(Violation::Empty);
    }
    if n > (u32::MAX / 2) as usize {
        return Err(Violation::TooLarge(n));
    }
    if data.edges.len() != n - 1 {
        return Err(Violation::EdgeCount {
            expected: n - 1,
            found: data.edges.len(),
        });
    }
    for &[u, v] in &data.edges {
        if u >= n || v >= n {
            return Err(Violation::VertexOutOfRange { u, v, n });
        }
    }
    for &[u, v] in &data.edges {
        if u == v {
            return Err(Violation::SelfLoop(u));
        }
    }
    let mut normalized: Vec<(usize, usize)> = data
        .edges
        .iter()
        .map(|&[u, v]| (u.min(v), u.max(v)))
        .collect();
    normalized.sort_unstable();
    if let Some(w) = normalized.windows(2).find(|w| w[0] == w[1]) {
        return Err(Violation::DuplicateEdge(w[0].0, w[0].1));
    }
    let adj = Adjacency::from_edges(n, data.edges.iter().map(|&[u, v]| (u, v)));
    if adj.reachable_from(0) != n {
        return Err(Violation::Disconnected);
    }
    Ok(())
}

/// Compressed adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Adjacency {
    offsets: Vec<u32>,
    nbrs: Vec<u32>,
}

impl Adjacency {
    pub(crate) fn from_edges(n: usize, edges: impl Iterator<Item = (usize, usize)> + Clone) -> Self {
        let mut offsets = vec![0u32; n + 1];
        for (u, v) in edges.clone() {
            offsets[u + 1] += 1;
            offsets[v + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut nbrs = vec![0u32; offsets[n] as usize];
        for (u, v) in edges {
            nbrs[fill[u] as usize] = v as u32;
            fill[u] += 1;
            nbrs[fill[v] as usize] = u as u32;
            fill[v] += 1;
        }
        Adjacency { offsets, nbrs }
    }

    #[inline]
    pub(crate) fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub(crate) fn neighbors(&self, v: usize) -> &[u32] {
        &self.nbrs[self.offsets[v] as usize..self.offsets[v + 1] as usize]
    }

    #[inline]
    pub(crate) fn degree(&self, v: usize) -> usize {
        (self.offsets[v + 1] - self.offsets[v]) as usize
    }

    fn reachable_from(&self, start: usize) -> usize {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![start];
        seen[start] = true;
        let mut count = 0;
        while let Some(v) = stack.pop() {
            count += 1;
            for &w in self.neighbors(v) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    stack.push(w as usize);
                }
            }
        }
        count
    }

    /// Breadth-first order from `root` and the parent of every vertex
    /// (`u32::MAX` for the root).
    fn bfs(&self, root: usize) -> (Vec<u32>, Vec<u32>) {
        let n = self.len();
        let mut parent = vec![u32::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        seen[root] = true;
        order.push(root as u32);
        let mut head = 0;
        while head < order.len() {
            let v = order[head] as usize;
            head += 1;
            for &w in self.neighbors(v) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    parent[w as usize] = v as u32;
                    order.push(w);
                }
            }
        }
        (order, parent)
    }

    /// One or two central vertices, found by peeling leaves layer by layer.
    pub(crate) fn centers(&self) -> Vec<usize> {
        let n = self.len();
        if n <= 2 {
            return (0..n).collect();
        }
        let mut deg: Vec<usize> = (0..n).map(|v| self.degree(v)).collect();
        let mut layer: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
        let mut remaining = n;
        while remaining > 2 {
            remaining -= layer.len();
            let mut next = Vec::new();
            for &v in &layer {
                for &w in self.neighbors(v) {
                    let w = w as usize;
                    deg[w] -= 1;
                    if deg[w] == 1 {
                        next.push(w);
                    }
                }
            }
            layer = next;
        }
        layer.sort_unstable();
        layer
    }

    /// Canonical rooted encoding: `OPEN`, the sorted child encodings, `CLOSE`.
    /// When `blocked` is set, that neighbor of the root is treated as absent.
    /// The automorphism count of the rooted tree is computed only on request.
    fn rooted_code(&self, root: usize, blocked: Option<usize>, with_aut: bool) -> (Vec<u8>, BigUint) {
        let n = self.len();
        let mut parent = vec![u32::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        seen[root] = true;
        if let Some(b) = blocked {
            seen[b] = true;
        }
        order.push(root as u32);
        let mut head = 0;
        while head < order.len() {
            let v = order[head] as usize;
            head += 1;
            for &w in self.neighbors(v) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    parent[w as usize] = v as u32;
                    order.push(w);
                }
            }
        }
        let mut codes: Vec<Vec<u8>> = vec![Vec::new(); n];
        let mut auts: Vec<BigUint> = if with_aut { vec![BigUint::one(); n] } else { Vec::new() };
        let mut children: Vec<Vec<u32>> = vec![Vec::new(); n];
        for &v in order.iter().skip(1) {
            children[parent[v as usize] as usize].push(v);
        }
        for &v in order.iter().rev() {
            let v = v as usize;
            let mut kids: Vec<(Vec<u8>, u32)> = std::mem::take(&mut children[v])
                .into_iter()
                .map(|c| (std::mem::take(&mut codes[c as usize]), c))
                .collect();
            kids.sort_unstable_by(|a, b| a.0.cmp(&b.0));
            let total: usize = kids.iter().map(|k| k.0.len()).sum();
            let mut code = Vec::with_capacity(total + 2);
            code.push(OPEN);
            for kid in &kids {
                code.extend_from_slice(&kid.0);
            }
            code.push(CLOSE);
            if with_aut {
                let mut aut = BigUint::one();
                let mut run = 0u32;
                for i in 0..kids.len() {
                    aut *= &auts[kids[i].1 as usize];
                    run += 1;
                    if i + 1 == kids.len() || kids[i + 1].0 != kids[i].0 {
                        for f in 2..=run {
                            aut *= f;
                        }
                        run = 0;
                    }
                }
                auts[v] = aut;
            }
            codes[v] = code;
        }
        let aut = if with_aut { std::mem::take(&mut auts[root]) } else { BigUint::one() };
        (std::mem::take(&mut codes[root]), aut)
    }

    pub(crate) fn canonical_code(&self) -> CanonicalCode {
        let centers = self.centers();
        let code = match centers.as_slice() {
            [c] => self.rooted_code(*c, None, false).0,
            [a, b] => {
                let ca = self.rooted_code(*a, None, false).0;
                let cb = self.rooted_code(*b, None, false).0;
                ca.min(cb)
            }
            _ => unreachable!("a tree has one or two centers"),
        };
        CanonicalCode(code)
    }

    pub(crate) fn automorphism_count(&self) -> BigUint {
        let centers = self.centers();
        match centers.as_slice() {
            [c] => self.rooted_code(*c, None, true).1,
            [a, b] => {
                let (ca, aa) = self.rooted_code(*a, Some(*b), true);
                let (cb, ab) = self.rooted_code(*b, Some(*a), true);
                let swap = if ca == cb { 2u32 } else { 1u32 };
                aa * ab * swap
            }
            _ => unreachable!("a tree has one or two centers"),
        }
    }
}

/// A valid free tree on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TreeData", into = "TreeData")]
pub struct Tree {
    edges: Vec<[u32; 2]>,
    adj: Adjacency,
}

impl TryFrom<TreeData> for Tree {
    type Error = Violation;

    fn try_from(data: TreeData) -> Result<Self, Violation> {
        validate(&data)?;
        let adj = Adjacency::from_edges(data.n, data.edges.iter().map(|&[u, v]| (u, v)));
        let edges = data.edges.iter().map(|&[u, v]| [u as u32, v as u32]).collect();
        Ok(Tree { edges, adj })
    }
}

impl From<Tree> for TreeData {
    fn from(t: Tree) -> Self {
        t.to_data()
    }
}

impl Tree {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, Violation> {
        let edges = edges.into_iter().map(|(u, v)| [u, v]).collect();
        Tree::try_from(TreeData { n, edges })
    }

    pub fn single_vertex() -> Self {
        Tree::new(1, []).expect("single vertex is a tree")
    }

    /// Builds a tree from the compact parent form: vertex `i` (for `i >= 1`)
    /// attaches to `parents[i - 1] < i`.
    pub fn from_parents(parents: &[usize]) -> Result<Self> {
        let n = parents.len() + 1;
        let mut edges = Vec::with_capacity(parents.len());
        for (i, &p) in parents.iter().enumerate() {
            let v = i + 1;
            if p >= v {
                return Err(Error::Parse(format!(
                    "parent of vertex {v} must be smaller than {v}, got {p}"
                )));
            }
            edges.push((p, v));
        }
        Ok(Tree::new(n, edges)?)
    }

    /// Parses either the JSON object form or the one-line parent form.
    pub fn parse(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        if trimmed.starts_with('{') {
            let data: TreeData = serde_json::from_str(trimmed)?;
            return Ok(Tree::try_from(data)?);
        }
        let parents = trimmed
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("not a vertex index: {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Tree::from_parents(&parents)
    }

    pub fn to_data(&self) -> TreeData {
        TreeData {
            n: self.len(),
            edges: self.edges().map(|(u, v)| [u, v]).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_data()).expect("tree data serializes")
    }

    /// Number of vertices.
    #[inline]
    pub fn len(&self) -> usize {
        self.adj.len()
    }

    /// Always false: a tree has at least one vertex.
    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + Clone + '_ {
        self.edges.iter().map(|&[u, v]| (u as usize, v as usize))
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj.neighbors(v).iter().map(|&w| w as usize)
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj.degree(v)
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.len()).map(|v| self.degree(v)).collect()
    }

    /// Largest vertex degree, `D(T)`.
    pub fn max_degree(&self) -> usize {
        (0..self.len()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Degree at most one; the lone vertex of a single-vertex tree counts.
    #[inline]
    pub fn is_leaf(&self, v: usize) -> bool {
        self.degree(v) <= 1
    }

    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&v| self.is_leaf(v))
    }

    pub fn lowest_leaf(&self) -> usize {
        self.leaves().next().expect("every tree has a leaf")
    }

    pub fn centers(&self) -> Vec<usize> {
        self.adj.centers()
    }

    /// Number of edges on a longest path.
    pub fn diameter(&self) -> usize {
        let far = |start: usize| -> (usize, usize) {
            let (order, parent) = self.adj.bfs(start);
            let mut depth = vec![0usize; self.len()];
            for &v in order.iter().skip(1) {
                depth[v as usize] = depth[parent[v as usize] as usize] + 1;
            }
            let last = *order.last().unwrap() as usize;
            (last, depth[last])
        };
        let (a, _) = far(0);
        far(a).1
    }

    pub fn canonical_code(&self) -> CanonicalCode {
        self.adj.canonical_code()
    }

    /// Size of the automorphism group; converts copy counts into injective
    /// homomorphism counts.
    pub fn automorphism_count(&self) -> BigUint {
        self.adj.automorphism_count()
    }

    /// Applies `perm` (old label -> new label) to every vertex.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Tree, Violation> {
        Tree::new(self.len(), self.edges().map(|(u, v)| (perm[u], perm[v])))
    }

    /// Rebuilds the tree encoded by `code`, labeling vertices in preorder of
    /// the encoding (vertex 0 is the encoding root).
    pub fn from_code(code: &CanonicalCode) -> Result<Tree> {
        let mut stack: Vec<usize> = Vec::new();
        let mut edges = Vec::new();
        let mut next = 0usize;
        for &b in code.as_bytes() {
            if b == OPEN {
                if let Some(&p) = stack.last() {
                    edges.push((p, next));
                } else if next != 0 {
                    return Err(Error::Parse("canonical code has several roots".into()));
                }
                stack.push(next);
                next += 1;
            } else if stack.pop().is_none() {
                return Err(Error::Parse("unbalanced canonical code".into()));
            }
        }
        if !stack.is_empty() {
            return Err(Error::Parse("unbalanced canonical code".into()));
        }
        Ok(Tree::new(next, edges)?)
    }

    pub(crate) fn adjacency(&self) -> &Adjacency {
        &self.adj
    }
}

/// Canonical byte code of an unlabeled tree. Two trees have equal codes iff
/// they are isomorphic; codes are totally ordered lexicographically, and the
/// single-vertex code is the smallest of all.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    /// Number of vertices encoded.
    pub fn vertex_count(&self) -> usize {
        self.0.len() / 2
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b == OPEN { "(" } else { ")" })?;
        }
        Ok(())
    }
}

impl FromStr for CanonicalCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '(' => Ok(OPEN),
                ')' => Ok(CLOSE),
                other => Err(Error::Parse(format!("unexpected {other:?} in canonical code"))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(CanonicalCode)
    }
}

impl Serialize for CanonicalCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn canonical_code(t: &Tree) -> CanonicalCode {
    t.canonical_code()
}

pub fn is_isomorphic(t: &Tree, s: &Tree) -> bool {
    t.len() == s.len() && t.canonical_code() == s.canonical_code()
}

pub fn max_degree(t: &Tree) -> usize {
    t.max_degree()
}

/// Canonical code of the subtree induced by `subset`, which must be connected.
pub(crate) fn subset_code(adj: &Adjacency, subset: &[usize], local: &mut [u32]) -> CanonicalCode {
    for (i, &v) in subset.iter().enumerate() {
        local[v] = i as u32;
    }
    let mut edges = Vec::with_capacity(subset.len());
    for (i, &v) in subset.iter().enumerate() {
        for &w in adj.neighbors(v) {
            let j = local[w as usize];
            if (j as usize) > i && subset.get(j as usize) == Some(&(w as usize)) {
                edges.push((i, j as usize));
            }
        }
    }
    let code = Adjacency::from_edges(subset.len(), edges.iter().copied()).canonical_code();
    for &v in subset {
        local[v] = u32::MAX;
    }
    code
}
