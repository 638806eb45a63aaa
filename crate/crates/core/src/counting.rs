//! Exact subtree counting.
//!
//! `c(S, T)` counts copies: vertex subsets of `T` whose induced subgraph is
//! connected and isomorphic to `S`. Multiplying by `|Aut(S)|` gives the
//! number of injective homomorphisms instead; see
//! [`CountsRecord::injective_counts`].

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{CheckedAdd, CheckedMul, One, Zero};
use rayon::prelude::*;

use crate::catalog::{self, TreeCatalog};
use crate::error::{Error, Result};
use crate::tree::{subset_code, Adjacency, Tree};

/// Per-class copy counts of k-vertex trees in a host, in catalog order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountsRecord {
    pub k: usize,
    pub per_type: Vec<BigUint>,
    pub total: BigUint,
}

impl CountsRecord {
    /// Counts of injective homomorphisms, `c(T_i, T) * |Aut(T_i)|`.
    pub fn injective_counts(&self, catalog: &TreeCatalog) -> Vec<BigUint> {
        self.per_type
            .iter()
            .zip(catalog.entries())
            .map(|(c, t)| c * t.automorphism_count())
            .collect()
    }
}

/// Exact k-profile: `coords[i] = c(T_i, T) / Z_k(T)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileVector {
    pub k: usize,
    pub coords: Vec<BigRational>,
}

fn extend_subsets<F: FnMut(&[usize])>(
    adj: &Adjacency,
    anchor: usize,
    k: usize,
    subset: &mut Vec<usize>,
    mut frontier: Vec<usize>,
    visit: &mut F,
) {
    if subset.len() == k {
        visit(subset);
        return;
    }
    while let Some(w) = frontier.pop() {
        let mut next = frontier.clone();
        // In a tree, w has exactly one neighbor inside the subset and no
        // other neighbor adjacent to it, so the exclusive neighborhood is
        // just the remaining neighbors of w.
        next.extend(
            adj.neighbors(w)
                .iter()
                .map(|&u| u as usize)
                .filter(|&u| u > anchor && !subset.contains(&u)),
        );
        subset.push(w);
        extend_subsets(adj, anchor, k, subset, next, visit);
        subset.pop();
    }
}

/// Visits every connected k-subset whose smallest vertex is `anchor`.
fn subsets_from_anchor<F: FnMut(&[usize])>(adj: &Adjacency, anchor: usize, k: usize, visit: &mut F) {
    if k == 0 {
        return;
    }
    let frontier = adj
        .neighbors(anchor)
        .iter()
        .map(|&u| u as usize)
        .filter(|&u| u > anchor)
        .collect();
    let mut subset = Vec::with_capacity(k);
    subset.push(anchor);
    extend_subsets(adj, anchor, k, &mut subset, frontier, visit);
}

/// Calls `visit` once for every vertex subset of size `k` that induces a
/// connected subgraph. Subsets are grouped by their smallest vertex, in
/// increasing order; the order is deterministic for a fixed tree.
pub fn for_each_connected_subset<F: FnMut(&[usize])>(t: &Tree, k: usize, mut visit: F) {
    let adj = t.adjacency();
    for anchor in 0..t.len() {
        subsets_from_anchor(adj, anchor, k, &mut visit);
    }
}

/// Collected form of [`for_each_connected_subset`].
pub fn enumerate_connected_subsets(t: &Tree, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_connected_subset(t, k, |s| out.push(s.to_vec()));
    out
}

/// Classifies every connected k-subset of `t` against `catalog`.
pub fn count_all_with(t: &Tree, catalog: &TreeCatalog) -> CountsRecord {
    let k = catalog.k();
    let adj = t.adjacency();
    let n_types = catalog.len();
    let tallies = (0..t.len())
        .into_par_iter()
        .fold(
            || (vec![0u64; n_types], vec![u32::MAX; t.len()]),
            |(mut tally, mut local), anchor| {
                subsets_from_anchor(adj, anchor, k, &mut |s| {
                    let code = subset_code(adj, s, &mut local);
                    let pos = catalog
                        .position_of(&code)
                        .expect("every k-vertex tree is in the catalog");
                    tally[pos] += 1;
                });
                (tally, local)
            },
        )
        .map(|(tally, _)| tally)
        .reduce(
            || vec![0u64; n_types],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let per_type: Vec<BigUint> = tallies.into_iter().map(BigUint::from).collect();
    let total = per_type.iter().sum();
    CountsRecord { k, per_type, total }
}

/// `c(T_i^k, t)` for every catalog entry; `k` must be in the default range.
pub fn count_all(t: &Tree, k: usize) -> Result<CountsRecord> {
    let catalog = catalog::shared(k)?;
    Ok(count_all_with(t, &catalog))
}

/// `c(s, t)`: number of vertex subsets of `t` inducing a copy of `s`.
pub fn count_copies(s: &Tree, t: &Tree) -> BigUint {
    let k = s.len();
    if k > t.len() {
        return BigUint::zero();
    }
    let target = s.canonical_code();
    let adj = t.adjacency();
    let count: u64 = (0..t.len())
        .into_par_iter()
        .fold(
            || (0u64, vec![u32::MAX; t.len()]),
            |(mut count, mut local), anchor| {
                subsets_from_anchor(adj, anchor, k, &mut |sub| {
                    if subset_code(adj, sub, &mut local) == target {
                        count += 1;
                    }
                });
                (count, local)
            },
        )
        .map(|(c, _)| c)
        .sum();
    BigUint::from(count)
}

/// Densities from raw counts; fails when there is no k-vertex subtree.
pub fn profile_from_counts(counts: &CountsRecord, host_size: usize) -> Result<ProfileVector> {
    if counts.total.is_zero() {
        return Err(Error::EmptyProfile { n: host_size, k: counts.k });
    }
    let total = BigRational::from_integer(counts.total.clone().into());
    let coords = counts
        .per_type
        .iter()
        .map(|c| BigRational::from_integer(c.clone().into()) / &total)
        .collect();
    Ok(ProfileVector { k: counts.k, coords })
}

pub fn profile(t: &Tree, k: usize) -> Result<ProfileVector> {
    if t.len() < k {
        return Err(Error::EmptyProfile { n: t.len(), k });
    }
    profile_from_counts(&count_all(t, k)?, t.len())
}

/// `Z_k(t)`, the number of connected k-vertex subsets, by a rooted dynamic
/// program over subtree sizes rather than enumeration.
pub fn count_subtrees(t: &Tree, k: usize) -> BigUint {
    if k == 0 {
        return BigUint::zero();
    }
    match subtree_dp::<u128>(t, k) {
        Some(z) => BigUint::from(z),
        None => subtree_dp::<BigUint>(t, k).expect("big integers do not overflow"),
    }
}

fn subtree_dp<N>(t: &Tree, k: usize) -> Option<N>
where
    N: Clone + Zero + One + CheckedAdd + CheckedMul,
{
    let n = t.len();
    // Postorder via reversed BFS from vertex 0.
    let mut order = Vec::with_capacity(n);
    let mut parent = vec![usize::MAX; n];
    order.push(0usize);
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for w in t.neighbors(v) {
            if w != parent[v] {
                parent[w] = v;
                order.push(w);
            }
        }
    }
    // poly[v][s]: connected subsets of size s inside v's subtree containing v.
    let mut poly: Vec<Vec<N>> = vec![Vec::new(); n];
    let mut total = N::zero();
    for &v in order.iter().rev() {
        let mut acc = vec![N::zero(); k + 1];
        acc[1] = N::one();
        for w in t.neighbors(v) {
            if w == parent[v] {
                continue;
            }
            let child = std::mem::take(&mut poly[w]);
            let mut next = acc.clone();
            for (i, a) in acc.iter().enumerate().skip(1) {
                if a.is_zero() {
                    continue;
                }
                for (j, c) in child.iter().enumerate().skip(1) {
                    if i + j > k {
                        break;
                    }
                    let term = a.checked_mul(c)?;
                    next[i + j] = next[i + j].checked_add(&term)?;
                }
            }
            acc = next;
        }
        total = total.checked_add(&acc[k])?;
        poly[v] = acc;
    }
    Some(total)
}

/// `P_k(t)`: number of k-vertex paths, by dynamic programming over directed
/// edges (no subset enumeration).
pub fn count_paths_fast(t: &Tree, k: usize) -> BigUint {
    let n = t.len();
    match k {
        0 => return BigUint::zero(),
        1 => return BigUint::from(n),
        2 => return BigUint::from(n - 1),
        _ => {}
    }
    // Directed edge slots: slot 2e is u -> v and 2e + 1 is v -> u for edge e.
    let edges: Vec<(usize, usize)> = t.edges().collect();
    let mut out_slots: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (e, &(u, v)) in edges.iter().enumerate() {
        out_slots[u].push(2 * e as u32);
        out_slots[v].push(2 * e as u32 + 1);
    }
    let head = |slot: usize| -> usize {
        let (u, v) = edges[slot / 2];
        if slot.is_multiple_of(2) {
            v
        } else {
            u
        }
    };
    // walks[slot]: paths with j edges starting along `slot`.
    let mut walks = vec![1u128; 2 * edges.len()];
    for _ in 2..k {
        let out_sum: Vec<u128> = out_slots
            .iter()
            .map(|slots| slots.iter().map(|&s| walks[s as usize]).sum())
            .collect();
        walks = (0..walks.len())
            .map(|slot| out_sum[head(slot)] - walks[slot ^ 1])
            .collect();
    }
    BigUint::from(walks.iter().sum::<u128>() / 2)
}

/// `S_k(t) = sum over vertices of C(d(v), k - 1)` for `k >= 3`.
pub fn count_stars_fast(t: &Tree, k: usize) -> BigUint {
    let n = t.len();
    match k {
        0 => return BigUint::zero(),
        1 => return BigUint::from(n),
        2 => return BigUint::from(n - 1),
        _ => {}
    }
    let mut histogram: BTreeMap<usize, usize> = BTreeMap::new();
    for v in 0..n {
        *histogram.entry(t.degree(v)).or_default() += 1;
    }
    histogram
        .into_iter()
        .filter(|&(d, _)| d >= k - 1)
        .map(|(d, count)| binomial(BigUint::from(d), BigUint::from(k - 1)) * count)
        .sum()
}

/// Y-shape counts, split by whether the middle edge touches a vertex of
/// degree at least 4.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YCounts {
    pub total: BigUint,
    /// Edges with `max(d(u), d(v)) <= 3`.
    pub small: BigUint,
    /// Edges with `max(d(u), d(v)) >= 4`.
    pub large: BigUint,
}

/// Copies of the 5-vertex Y-shape, summed over its middle edge:
/// `C(d(v)-1, 2)(d(u)-1) + C(d(u)-1, 2)(d(v)-1)` per edge `{u, v}`.
pub fn count_y_fast(t: &Tree) -> YCounts {
    let mut small = 0u128;
    let mut large = 0u128;
    for (u, v) in t.edges() {
        let du = t.degree(u) as u128;
        let dv = t.degree(v) as u128;
        let pairs = |d: u128| if d >= 3 { (d - 1) * (d - 2) / 2 } else { 0 };
        let term = pairs(dv) * (du - 1) + pairs(du) * (dv - 1);
        if du.max(dv) <= 3 {
            small += term;
        } else {
            large += term;
        }
    }
    YCounts {
        total: BigUint::from(small + large),
        small: BigUint::from(small),
        large: BigUint::from(large),
    }
}

/// The three 5-vertex counts `P`, `S`, `Y`; `Z_5 = P + S + Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiveCounts {
    pub paths: BigUint,
    pub stars: BigUint,
    pub y: YCounts,
}

impl FiveCounts {
    pub fn of(t: &Tree) -> Self {
        FiveCounts {
            paths: count_paths_fast(t, 5),
            stars: count_stars_fast(t, 5),
            y: count_y_fast(t),
        }
    }

    pub fn total(&self) -> BigUint {
        &self.paths + &self.stars + &self.y.total
    }

    /// Catalog-order counts (path, star, Y).
    pub fn to_record(&self) -> CountsRecord {
        CountsRecord {
            k: 5,
            per_type: vec![self.paths.clone(), self.stars.clone(), self.y.total.clone()],
            total: self.total(),
        }
    }
}

/// 5-profile from the closed-form counters; linear time in the host size.
pub fn profile5_fast(t: &Tree) -> Result<ProfileVector> {
    profile_from_counts(&FiveCounts::of(t).to_record(), t.len())
}
