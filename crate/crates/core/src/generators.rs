//! Tree families: paths, stars, millipedes, gluings, and random trees.
//!
//! Gluing `t` and `s` with parameter `k` joins a leaf `x` of `t` to a leaf
//! `y` of `s` through `k - 1` new vertices. Result labels are laid out as
//! `t`'s vertices, then the new path vertices in order from `x`, then `s`'s
//! vertices shifted past them.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::counting::count_subtrees;
use crate::error::{Error, Result};
use crate::tree::Tree;

/// Default ceiling on the size of constructed trees.
pub const DEFAULT_VERTEX_CAP: usize = 1_000_000;

pub fn make_path(n: usize) -> Result<Tree> {
    if n == 0 {
        return Err(Error::InvalidParameter("a path needs at least one vertex".into()));
    }
    Ok(Tree::new(n, (1..n).map(|i| (i - 1, i)))?)
}

/// Vertex 0 is the center.
pub fn make_star(n: usize) -> Result<Tree> {
    if n == 0 {
        return Err(Error::InvalidParameter("a star needs at least one vertex".into()));
    }
    Ok(Tree::new(n, (1..n).map(|i| (0, i)))?)
}

/// `length` spine vertices `0..length`, each with `d` pendant legs, plus one
/// extra leaf at each end of the spine, so every non-leaf has degree `d + 2`.
pub fn make_millipede(d: usize, length: usize) -> Result<Tree> {
    if length == 0 {
        return Err(Error::InvalidParameter("millipede length must be positive".into()));
    }
    let n = length * (d + 1) + 2;
    let mut edges = Vec::with_capacity(n - 1);
    edges.extend((1..length).map(|i| (i - 1, i)));
    let mut next = length;
    for spine in 0..length {
        for _ in 0..d {
            edges.push((spine, next));
            next += 1;
        }
    }
    edges.push((0, next));
    edges.push((length - 1, next + 1));
    Ok(Tree::new(n, edges)?)
}

/// Incremental edge-list builder that tracks degrees, so the lowest-labeled
/// leaf can be found without rescanning.
struct Builder {
    n: usize,
    edges: Vec<(usize, usize)>,
    degree: Vec<u32>,
    leaf_cursor: usize,
}

impl Builder {
    fn with_capacity(cap: usize) -> Self {
        Builder {
            n: 0,
            edges: Vec::with_capacity(cap.saturating_sub(1)),
            degree: Vec::with_capacity(cap),
            leaf_cursor: 0,
        }
    }

    /// Copies `t` in, returning the label offset of its vertex 0.
    fn append(&mut self, t: &Tree) -> usize {
        let offset = self.n;
        self.n += t.len();
        self.degree.extend((0..t.len()).map(|v| t.degree(v) as u32));
        self.edges.extend(t.edges().map(|(u, v)| (u + offset, v + offset)));
        offset
    }

    fn add_vertex(&mut self) -> usize {
        self.n += 1;
        self.degree.push(0);
        self.n - 1
    }

    fn add_edge(&mut self, u: usize, v: usize) {
        self.degree[u] += 1;
        self.degree[v] += 1;
        self.edges.push((u, v));
    }

    /// Degrees only grow, so vertices below the cursor stay non-leaves.
    fn lowest_leaf(&mut self) -> usize {
        while self.degree[self.leaf_cursor] > 1 {
            self.leaf_cursor += 1;
        }
        self.leaf_cursor
    }

    /// Attaches a path of `k - 1` new vertices at `x` and returns its far end.
    fn add_glue_path(&mut self, x: usize, k: usize) -> usize {
        let mut prev = x;
        for _ in 1..k {
            let z = self.add_vertex();
            self.add_edge(prev, z);
            prev = z;
        }
        prev
    }

    /// Glues a fresh copy of `t` at `x`, joining through `t`'s leaf `leaf`.
    fn glue_copy(&mut self, x: usize, t: &Tree, leaf: usize, k: usize) {
        let end = self.add_glue_path(x, k);
        let offset = self.append(t);
        self.add_edge(end, offset + leaf);
    }

    fn finish(self) -> Tree {
        Tree::new(self.n, self.edges).expect("gluing trees yields a tree")
    }
}

fn check_glue_k(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("gluing needs k >= 2, got {k}")));
    }
    Ok(())
}

fn check_leaf(t: &Tree, v: usize) -> Result<()> {
    if v >= t.len() || !t.is_leaf(v) {
        return Err(Error::NotALeaf(v));
    }
    Ok(())
}

fn check_cap(needed: u128, cap: usize) -> Result<()> {
    if needed > cap as u128 {
        return Err(Error::VertexCap { needed, cap });
    }
    Ok(())
}

/// Joins leaf `leaf_t` of `t` to leaf `leaf_s` of `s` through a path of
/// `k - 1` new vertices.
pub fn glue(t: &Tree, s: &Tree, k: usize, leaf_t: usize, leaf_s: usize) -> Result<Tree> {
    check_glue_k(k)?;
    check_leaf(t, leaf_t)?;
    check_leaf(s, leaf_s)?;
    let mut b = Builder::with_capacity(t.len() + s.len() + k - 1);
    b.append(t);
    b.glue_copy(leaf_t, s, leaf_s, k);
    Ok(b.finish())
}

/// [`glue`] at the lowest-labeled leaf of each tree.
pub fn glue_lowest(t: &Tree, s: &Tree, k: usize) -> Result<Tree> {
    glue(t, s, k, t.lowest_leaf(), s.lowest_leaf())
}

/// Number of vertices in the `ell`-fold glue power of an `n`-vertex tree.
pub fn glue_power_size(n: usize, k: usize, ell: usize) -> u128 {
    let ell = ell as u128;
    ell * n as u128 + (ell.saturating_sub(1)) * (k as u128 - 1)
}

/// `t` glued to itself `ell` times, always at the lowest-labeled leaf of the
/// accumulated tree and of the fresh copy.
pub fn glue_power(t: &Tree, k: usize, ell: usize) -> Result<Tree> {
    glue_power_capped(t, k, ell, DEFAULT_VERTEX_CAP)
}

pub fn glue_power_capped(t: &Tree, k: usize, ell: usize, cap: usize) -> Result<Tree> {
    check_glue_k(k)?;
    if ell == 0 {
        return Err(Error::InvalidParameter("glue power needs ell >= 1".into()));
    }
    let size = glue_power_size(t.len(), k, ell);
    check_cap(size, cap)?;
    let mut b = Builder::with_capacity(size as usize);
    append_power(&mut b, t, k, ell);
    Ok(b.finish())
}

fn append_power(b: &mut Builder, t: &Tree, k: usize, ell: usize) {
    let start = b.n;
    b.append(t);
    let leaf = t.lowest_leaf();
    // The builder cursor may sit in an earlier block; restart it here.
    b.leaf_cursor = b.leaf_cursor.max(start);
    for _ in 1..ell {
        let x = b.lowest_leaf();
        b.glue_copy(x, t, leaf, k);
    }
}

/// Copy multiplicities for the convex-combination construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexPlan {
    /// Number of copies of `t`: `alpha * Z_k(s)` (divided by the common factor when reduced).
    pub copies_t: BigUint,
    /// Number of copies of `s`: `(beta - alpha) * Z_k(t)` (likewise).
    pub copies_s: BigUint,
    /// Vertex count of the resulting tree.
    pub vertices: BigUint,
}

/// Multiplicities of the glue powers in the convex construction. With
/// `reduce`, both multiplicities are divided by their gcd, which keeps their
/// ratio (and hence the limiting profile) while shrinking the tree.
pub fn convex_plan(
    t: &Tree,
    s: &Tree,
    k: usize,
    alpha: u64,
    beta: u64,
    reduce: bool,
) -> Result<ConvexPlan> {
    check_glue_k(k)?;
    if alpha == 0 || alpha >= beta {
        return Err(Error::InvalidParameter(format!(
            "need 0 < alpha < beta, got alpha = {alpha}, beta = {beta}"
        )));
    }
    let zt = count_subtrees(t, k);
    let zs = count_subtrees(s, k);
    if zt == BigUint::default() || zs == BigUint::default() {
        return Err(Error::EmptyProfile {
            n: if zt == BigUint::default() { t.len() } else { s.len() },
            k,
        });
    }
    let mut copies_t = BigUint::from(alpha) * &zs;
    let mut copies_s = BigUint::from(beta - alpha) * &zt;
    if reduce {
        let g = copies_t.gcd(&copies_s);
        copies_t /= &g;
        copies_s /= &g;
    }
    let joins = &copies_t + &copies_s - 1u32;
    let vertices = &copies_t * t.len() + &copies_s * s.len() + joins * (k - 1);
    Ok(ConvexPlan { copies_t, copies_s, vertices })
}

fn build_convex(t: &Tree, s: &Tree, k: usize, plan: &ConvexPlan, cap: usize) -> Result<Tree> {
    let needed = plan.vertices.to_u128().unwrap_or(u128::MAX);
    check_cap(needed, cap)?;
    let copies_t = plan.copies_t.to_usize().expect("bounded by the cap");
    let copies_s = plan.copies_s.to_usize().expect("bounded by the cap");
    let mut b = Builder::with_capacity(needed as usize);
    append_power(&mut b, t, k, copies_t);
    b.leaf_cursor = 0;
    let x = b.lowest_leaf();
    let end = b.add_glue_path(x, k);
    let start_s = b.n;
    append_power(&mut b, s, k, copies_s);
    b.leaf_cursor = start_s;
    let y = b.lowest_leaf();
    b.add_edge(end, y);
    Ok(b.finish())
}

/// `t^(alpha Z_k(s))` glued to `s^((beta - alpha) Z_k(t))`, whose k-profile
/// tends to `(alpha/beta) p(t) + (1 - alpha/beta) p(s)` as the inputs grow.
pub fn convex_glue(t: &Tree, s: &Tree, k: usize, alpha: u64, beta: u64, cap: usize) -> Result<Tree> {
    let plan = convex_plan(t, s, k, alpha, beta, false)?;
    build_convex(t, s, k, &plan, cap)
}

/// [`convex_glue`] with the two multiplicities divided by their gcd.
pub fn convex_glue_reduced(
    t: &Tree,
    s: &Tree,
    k: usize,
    alpha: u64,
    beta: u64,
    cap: usize,
) -> Result<Tree> {
    let plan = convex_plan(t, s, k, alpha, beta, true)?;
    build_convex(t, s, k, &plan, cap)
}

/// Decodes a Prüfer sequence over labels `0..seq.len() + 2`.
pub fn prufer_decode(seq: &[usize]) -> Result<Tree> {
    let n = seq.len() + 2;
    if let Some(&bad) = seq.iter().find(|&&v| v >= n) {
        return Err(Error::InvalidParameter(format!("Prüfer entry {bad} out of range 0..{n}")));
    }
    let mut degree = vec![1usize; n];
    for &v in seq {
        degree[v] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut ptr = degree.iter().position(|&d| d == 1).unwrap();
    let mut leaf = ptr;
    for &v in seq {
        edges.push((leaf, v));
        degree[v] -= 1;
        if v < ptr && degree[v] == 1 {
            leaf = v;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf, n - 1));
    Ok(Tree::new(n, edges)?)
}

/// Uniformly random labeled tree on `n` vertices (uniform Prüfer sequence),
/// deterministic per seed.
pub fn random_tree(n: usize, seed: u64) -> Tree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_tree_with(n, &mut rng)
}

pub fn random_tree_with<R: Rng>(n: usize, rng: &mut R) -> Tree {
    match n {
        0 | 1 => Tree::single_vertex(),
        2 => Tree::new(2, [(0, 1)]).unwrap(),
        _ => {
            let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
            prufer_decode(&seq).expect("entries are in range")
        }
    }
}

/// Random tree with maximum degree at most `max_degree`, grown by attaching
/// each new vertex to a uniformly chosen earlier vertex with spare degree.
/// Not uniform over labeled trees; used to reach sizes where rejection
/// sampling from [`random_tree`] would almost never succeed.
pub fn random_tree_max_degree<R: Rng>(n: usize, max_degree: usize, rng: &mut R) -> Result<Tree> {
    if n >= 3 && max_degree < 2 || n == 2 && max_degree < 1 {
        return Err(Error::InvalidParameter(format!(
            "no tree on {n} vertices has maximum degree <= {max_degree}"
        )));
    }
    let n = n.max(1);
    let mut degree = vec![0usize; n];
    let mut open: Vec<usize> = vec![0];
    let mut edges = Vec::with_capacity(n - 1);
    for v in 1..n {
        let slot = rng.gen_range(0..open.len());
        let p = open[slot];
        edges.push((p, v));
        degree[p] += 1;
        degree[v] = 1;
        if degree[p] >= max_degree {
            open.swap_remove(slot);
        }
        if max_degree > 1 {
            open.push(v);
        }
    }
    Ok(Tree::new(n, edges)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::is_isomorphic;

    #[test]
    fn paths_and_stars() {
        assert_eq!(make_path(2).unwrap(), make_star(2).unwrap());
        assert_eq!(make_path(5).unwrap().leaves().count(), 2);
        assert_eq!(make_star(7).unwrap().max_degree(), 6);
        assert!(make_path(0).is_err());
        assert!(make_star(0).is_err());
    }

    #[test]
    fn millipede_shapes() {
        let m = make_millipede(0, 3).unwrap();
        assert!(is_isomorphic(&m, &make_path(5).unwrap()));
        let m = make_millipede(3, 4).unwrap();
        assert_eq!(m.len(), 18);
        assert_eq!(m.max_degree(), 5);
        for len in 1..8 {
            let m = make_millipede(1, len).unwrap();
            assert!((0..m.len()).all(|v| m.is_leaf(v) || m.degree(v) == 3));
        }
        assert!(make_millipede(2, 0).is_err());
    }

    #[test]
    fn glue_sizes_and_degrees() {
        let p3 = make_path(3).unwrap();
        let g = glue(&p3, &p3, 5, 0, 2).unwrap();
        assert_eq!(g.len(), 10);
        assert!(is_isomorphic(&g, &make_path(10).unwrap()));
        let s6 = make_star(6).unwrap();
        assert_eq!(glue_lowest(&s6, &s6, 5).unwrap().max_degree(), 5);
        assert!(matches!(glue(&p3, &p3, 5, 1, 0), Err(Error::NotALeaf(1))));
        assert!(glue(&p3, &p3, 1, 0, 0).is_err());
        let one = Tree::single_vertex();
        assert_eq!(glue(&one, &one, 3, 0, 0).unwrap().len(), 4);
    }

    #[test]
    fn glue_power_identity_and_size() {
        let t = make_star(5).unwrap();
        assert_eq!(glue_power(&t, 4, 1).unwrap(), t);
        let g = glue_power(&t, 4, 3).unwrap();
        assert_eq!(g.len(), 3 * 5 + 2 * 3);
        assert_eq!(g.max_degree(), 4);
        assert_eq!(glue_power(&t, 4, 2).unwrap(), glue_lowest(&t, &t, 4).unwrap());
        // single vertex: gluing introduces degree-2 vertices
        let one = Tree::single_vertex();
        assert_eq!(glue_power(&one, 3, 4).unwrap().max_degree(), 2);
        assert!(glue_power(&t, 4, 0).is_err());
    }

    #[test]
    fn glue_power_of_paths_is_a_path() {
        let p = make_path(7).unwrap();
        let g = glue_power(&p, 5, 6).unwrap();
        assert!(is_isomorphic(&g, &make_path(6 * 7 + 5 * 4).unwrap()));
    }

    #[test]
    fn convex_guards() {
        let p = make_path(6).unwrap();
        let s = make_star(6).unwrap();
        assert!(convex_glue(&p, &s, 5, 2, 2, DEFAULT_VERTEX_CAP).is_err());
        assert!(convex_glue(&p, &s, 5, 0, 2, DEFAULT_VERTEX_CAP).is_err());
        let small = make_path(3).unwrap();
        assert!(matches!(
            convex_glue(&small, &s, 5, 1, 2, DEFAULT_VERTEX_CAP),
            Err(Error::EmptyProfile { .. })
        ));
        let big = make_star(30).unwrap();
        assert!(matches!(
            convex_glue(&p, &big, 5, 1, 2, 1000),
            Err(Error::VertexCap { .. })
        ));
    }

    #[test]
    fn convex_plan_multiplicities() {
        let p = make_path(6).unwrap(); // Z_5 = 2
        let s = make_star(6).unwrap(); // Z_5 = 5
        let plan = convex_plan(&p, &s, 5, 1, 3, false).unwrap();
        assert_eq!(plan.copies_t, BigUint::from(5u32));
        assert_eq!(plan.copies_s, BigUint::from(4u32));
        let r = convex_glue(&p, &s, 5, 1, 3, DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!(BigUint::from(r.len()), plan.vertices);
        let reduced = convex_plan(&p, &s, 5, 1, 2, true).unwrap();
        assert_eq!(reduced.copies_t, BigUint::from(5u32));
        assert_eq!(reduced.copies_s, BigUint::from(2u32));
    }

    #[test]
    fn random_trees_are_deterministic_and_valid() {
        assert_eq!(random_tree(1, 7).len(), 1);
        assert_eq!(random_tree(40, 11), random_tree(40, 11));
        assert_ne!(random_tree(40, 11), random_tree(40, 12));
        for seed in 0..1000 {
            let t = random_tree(10, seed);
            assert_eq!(t.len(), 10);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let t = random_tree_max_degree(50, 3, &mut rng).unwrap();
            assert!(t.max_degree() <= 3);
        }
        assert!(random_tree_max_degree(5, 1, &mut rng).is_err());
    }

    #[test]
    fn prufer_known_sequence() {
        // Sequence (3, 3, 3, 4) on 6 labels gives vertex 3 adjacent to 0, 1, 2, 4.
        let t = prufer_decode(&[3, 3, 3, 4]).unwrap();
        assert_eq!(t.degree(3), 4);
        assert_eq!(t.degree(4), 2);
        assert!(prufer_decode(&[9]).is_err());
    }
}
