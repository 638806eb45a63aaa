//! Test oracles that share no code with the library's canonical forms or
//! counters: a bit-packed rooted code over neighbor bitmasks, brute-force
//! Prüfer enumeration, and subset-by-subset counting.
#![allow(dead_code)]

use std::collections::HashMap;

use treelab::catalog::TreeCatalog;
use treelab::Tree;

pub const MAX_ORACLE_N: usize = 32;

/// Neighbor bitmasks of a tree on at most 32 vertices.
#[derive(Clone, Copy)]
pub struct Masks {
    pub n: usize,
    pub adj: [u32; MAX_ORACLE_N],
}

impl Masks {
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        assert!((1..=MAX_ORACLE_N).contains(&n));
        let mut adj = [0u32; MAX_ORACLE_N];
        for (u, v) in edges {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        Masks { n, adj }
    }

    pub fn of(t: &Tree) -> Self {
        Self::from_edges(t.len(), t.edges())
    }
}

// Codes are (bits, len) with open = 1 and close = 0, compared after
// left-aligning in a u64. No valid code is a proper prefix of another.
fn rooted(adj: &[u32; MAX_ORACLE_N], v: usize, parent: usize) -> (u64, u32) {
    let mut kids = [(0u64, 0u32); MAX_ORACLE_N];
    let mut c = 0;
    let mut m = adj[v];
    if parent < MAX_ORACLE_N {
        m &= !(1 << parent);
    }
    while m != 0 {
        let w = m.trailing_zeros() as usize;
        m &= m - 1;
        kids[c] = rooted(adj, w, v);
        c += 1;
    }
    let kids = &mut kids[..c];
    kids.sort_unstable_by_key(|&(b, l)| b << (64 - l));
    let (mut bits, mut len) = (1u64, 1u32);
    for &(b, l) in kids.iter() {
        bits = (bits << l) | b;
        len += l;
    }
    (bits << 1, len + 1)
}

/// Isomorphism-invariant code of a tree, left-aligned in a u64.
pub fn oracle_code(m: &Masks) -> u64 {
    let n = m.n;
    if n == 1 {
        return 0b10 << 62;
    }
    let mut deg = [0u32; MAX_ORACLE_N];
    let mut layer = 0u32;
    for v in 0..n {
        deg[v] = m.adj[v].count_ones();
        if deg[v] == 1 {
            layer |= 1 << v;
        }
    }
    let mut remaining = n;
    let mut alive: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    while remaining > 2 {
        let mut next = 0u32;
        let mut l = layer;
        while l != 0 {
            let v = l.trailing_zeros() as usize;
            l &= l - 1;
            alive &= !(1 << v);
            remaining -= 1;
            let mut nb = m.adj[v] & alive;
            while nb != 0 {
                let w = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                deg[w] -= 1;
                if deg[w] == 1 {
                    next |= 1 << w;
                }
            }
        }
        layer = next;
    }
    let mut best = u64::MAX;
    let mut a = alive;
    while a != 0 {
        let c = a.trailing_zeros() as usize;
        a &= a - 1;
        let (b, l) = rooted(&m.adj, c, usize::MAX);
        best = best.min(b << (64 - l));
    }
    best
}

/// Labeled-tree counts per isomorphism class over all `k^(k-2)` Prüfer
/// sequences on `k` labels.
pub fn prufer_classes(k: usize) -> HashMap<u64, u64> {
    let mut out = HashMap::new();
    if k <= 2 {
        let m = Masks::from_edges(k, (k == 2).then_some((0, 1)));
        out.insert(oracle_code(&m), 1);
        return out;
    }
    // Codes are 2k bits long, so for small k a direct table beats hashing.
    assert!(k <= 12);
    let shift = 64 - 2 * k as u32;
    let mut table = vec![0u64; 1 << (2 * k)];
    let len = k - 2;
    let mut seq = vec![0usize; len];
    loop {
        let mut deg = [1u32; MAX_ORACLE_N];
        for &a in &seq {
            deg[a] += 1;
        }
        let mut leaves = 0u32;
        for v in 0..k {
            if deg[v] == 1 {
                leaves |= 1 << v;
            }
        }
        let mut adj = [0u32; MAX_ORACLE_N];
        for &a in &seq {
            let leaf = leaves.trailing_zeros() as usize;
            leaves &= !(1 << leaf);
            adj[leaf] |= 1 << a;
            adj[a] |= 1 << leaf;
            deg[a] -= 1;
            if deg[a] == 1 {
                leaves |= 1 << a;
            }
        }
        let u = leaves.trailing_zeros() as usize;
        let v = 31 - leaves.leading_zeros() as usize;
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
        table[(oracle_code(&Masks { n: k, adj }) >> shift) as usize] += 1;

        let mut i = 0;
        loop {
            if i == len {
                for (code, &count) in table.iter().enumerate() {
                    if count > 0 {
                        out.insert((code as u64) << shift, count);
                    }
                }
                return out;
            }
            seq[i] += 1;
            if seq[i] < k {
                break;
            }
            seq[i] = 0;
            i += 1;
        }
    }
}

/// Copy counts per catalog entry by testing every k-subset of the host for
/// connectivity and classifying it with [`oracle_code`].
pub fn naive_counts(host: &Tree, catalog: &TreeCatalog) -> Vec<u64> {
    let k = catalog.k();
    let n = host.len();
    assert!(n <= 20);
    let position: HashMap<u64, usize> = catalog
        .entries()
        .iter()
        .enumerate()
        .map(|(i, t)| (oracle_code(&Masks::of(t)), i))
        .collect();
    let host = Masks::of(host);
    let mut counts = vec![0u64; catalog.len()];
    if k > n {
        return counts;
    }
    for subset in 0u32..(1u32 << n) {
        if subset.count_ones() as usize != k {
            continue;
        }
        let mut local = [usize::MAX; MAX_ORACLE_N];
        let mut members = Vec::with_capacity(k);
        for v in 0..n {
            if subset >> v & 1 == 1 {
                local[v] = members.len();
                members.push(v);
            }
        }
        let mut edges = Vec::new();
        for &v in &members {
            let mut nb = host.adj[v] & subset;
            while nb != 0 {
                let w = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                if v < w {
                    edges.push((local[v], local[w]));
                }
            }
        }
        // An induced subforest on k vertices is connected iff it has k - 1 edges.
        if edges.len() + 1 != k {
            continue;
        }
        let code = oracle_code(&Masks::from_edges(k, edges));
        counts[position[&code]] += 1;
    }
    counts
}

/// The 5-vertex Y-shape.
pub fn y_shape() -> Tree {
    Tree::new(5, [(0, 1), (0, 2), (0, 3), (3, 4)]).unwrap()
}
