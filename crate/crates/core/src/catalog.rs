//! The ordered list of all k-vertex trees.
//!
//! Entry 0 is the path and entry 1 the star (for `k >= 4`); the remaining
//! entries follow in ascending canonical-code order. Generation grows trees
//! one leaf at a time from the size-(k-1) classes and deduplicates by
//! canonical code: every tree on k vertices arises by adding a leaf to some
//! tree on k-1 vertices, so the extension is exhaustive.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::tree::{CanonicalCode, Tree};

/// Default ceiling on k for catalogs and profile coordinates.
pub const DEFAULT_MAX_K: usize = 12;

#[derive(Clone, Debug)]
pub struct TreeCatalog {
    k: usize,
    entries: Vec<Tree>,
    codes: Vec<CanonicalCode>,
    index: HashMap<CanonicalCode, usize>,
}

impl TreeCatalog {
    pub fn k(&self) -> usize {
        self.k
    }

    /// `N_k`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Tree] {
        &self.entries
    }

    pub fn entry(&self, position: usize) -> &Tree {
        &self.entries[position]
    }

    pub fn codes(&self) -> &[CanonicalCode] {
        &self.codes
    }

    /// 0-based position of the class with this code.
    pub fn position_of(&self, code: &CanonicalCode) -> Option<usize> {
        self.index.get(code).copied()
    }

    /// 1-based catalog index, matching the `T_1, T_2, ...` numbering.
    pub fn index_of(&self, code: &CanonicalCode) -> Option<usize> {
        self.position_of(code).map(|p| p + 1)
    }

    /// 0-based position of the path.
    pub fn path_position(&self) -> usize {
        0
    }

    /// 0-based position of the star; aliases the path for `k <= 3`.
    pub fn star_position(&self) -> usize {
        if self.k >= 4 {
            1
        } else {
            0
        }
    }
}

fn check_range(k: usize, max_k: usize) -> Result<()> {
    if k == 0 || k > max_k {
        return Err(Error::KOutOfRange { k, max: max_k });
    }
    Ok(())
}

/// Catalog of all k-vertex trees, `1 <= k <= DEFAULT_MAX_K`.
pub fn enumerate_trees(k: usize) -> Result<TreeCatalog> {
    enumerate_trees_up_to(k, DEFAULT_MAX_K)
}

/// As [`enumerate_trees`] with a raised (or lowered) ceiling on k.
pub fn enumerate_trees_up_to(k: usize, max_k: usize) -> Result<TreeCatalog> {
    check_range(k, max_k)?;
    let mut codes = tree_codes(k, None);
    let path = crate::generators::make_path(k)?.canonical_code();
    let star = crate::generators::make_star(k)?.canonical_code();
    codes.remove(&path);
    codes.remove(&star);
    let mut ordered = vec![path.clone()];
    if star != path {
        ordered.push(star);
    }
    ordered.extend(codes);
    let entries = ordered
        .iter()
        .map(|c| Tree::from_code(c).expect("generated codes decode"))
        .collect();
    let index = ordered.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    Ok(TreeCatalog { k, entries, codes: ordered, index })
}

/// `N_k`.
pub fn catalog_count(k: usize) -> Result<usize> {
    Ok(shared(k)?.len())
}

/// Process-wide cache of catalogs within the default range.
pub fn shared(k: usize) -> Result<Arc<TreeCatalog>> {
    shared_up_to(k, DEFAULT_MAX_K)
}

pub fn shared_up_to(k: usize, max_k: usize) -> Result<Arc<TreeCatalog>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<TreeCatalog>>>> = OnceLock::new();
    check_range(k, max_k)?;
    let cache = CACHE.get_or_init(Default::default);
    if let Some(c) = cache.lock().unwrap().get(&k) {
        return Ok(Arc::clone(c));
    }
    let built = Arc::new(enumerate_trees_up_to(k, max_k)?);
    Ok(Arc::clone(cache.lock().unwrap().entry(k).or_insert(built)))
}

/// All trees on `n` vertices (one per isomorphism class, ascending code),
/// optionally restricted to maximum degree at most `max_degree`. There is no
/// ceiling on `n` here; the class count grows roughly like `2.96^n`.
pub fn all_trees(n: usize, max_degree: Option<usize>) -> Vec<Tree> {
    tree_codes(n, max_degree)
        .iter()
        .map(|c| Tree::from_code(c).expect("generated codes decode"))
        .collect()
}

/// Every tree with at most `n` vertices, in increasing size.
pub fn all_trees_up_to(n: usize, max_degree: Option<usize>) -> Vec<Tree> {
    (1..=n).flat_map(|m| all_trees(m, max_degree)).collect()
}

fn tree_codes(n: usize, max_degree: Option<usize>) -> BTreeSet<CanonicalCode> {
    let mut level: BTreeSet<CanonicalCode> = BTreeSet::new();
    if n == 0 {
        return level;
    }
    level.insert(Tree::single_vertex().canonical_code());
    let cap = max_degree.unwrap_or(usize::MAX);
    for size in 2..=n {
        let parents: Vec<Tree> = level
            .iter()
            .map(|c| Tree::from_code(c).expect("generated codes decode"))
            .collect();
        level = parents
            .par_iter()
            .map(|t| {
                let mut local = BTreeSet::new();
                for v in 0..t.len() {
                    if t.degree(v) + 1 > cap {
                        continue;
                    }
                    let edges = t.edges().chain(std::iter::once((v, t.len())));
                    let grown = Tree::new(size, edges).expect("adding a leaf keeps a tree");
                    local.insert(grown.canonical_code());
                }
                local
            })
            .reduce(BTreeSet::new, |mut a, b| {
                a.extend(b);
                a
            });
    }
    level
}
