mod support;

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use treelab::catalog::{self, all_trees, enumerate_trees};
use treelab::counting::{count_all, count_all_with};
use treelab::generators::random_tree;

use support::{naive_counts, oracle_code, prufer_classes, Masks};

fn factorial(n: usize) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

#[test]
fn oracle_code_is_label_free() {
    for seed in 0..50 {
        let t = random_tree(12, seed);
        let perm: Vec<usize> = (0..12).map(|i| (i * 5 + seed as usize) % 12).collect();
        let r = t.relabeled(&perm).unwrap();
        assert_eq!(oracle_code(&Masks::of(&t)), oracle_code(&Masks::of(&r)));
    }
}

#[test]
fn catalog_matches_prufer_up_to_8() {
    for k in 1..=8 {
        let classes = prufer_classes(k);
        let cat = enumerate_trees(k).unwrap();
        assert_eq!(classes.len(), cat.len(), "k = {k}");
        for t in cat.entries() {
            let labeled = classes[&oracle_code(&Masks::of(t))];
            let expected = factorial(k) / t.automorphism_count();
            assert_eq!(BigUint::from(labeled), expected, "k = {k}, {}", t.canonical_code());
        }
    }
}

#[test]
fn labeled_counts_sum_to_cayley() {
    for k in 1..=10 {
        let cat = enumerate_trees(k).unwrap();
        let sum: BigUint = cat.entries().iter().map(|t| factorial(k) / t.automorphism_count()).sum();
        let cayley = if k == 1 { 1u64 } else { (k as u64).pow(k as u32 - 2) };
        assert_eq!(sum, BigUint::from(cayley), "k = {k}");
    }
}

#[test]
fn canonical_code_separates_classes_to_10() {
    for n in 1..=10 {
        let trees = all_trees(n, None);
        assert_eq!(trees.len(), catalog::catalog_count(n).unwrap());
        let lib: HashSet<_> = trees.iter().map(|t| t.canonical_code()).collect();
        let ora: HashSet<_> = trees.iter().map(|t| oracle_code(&Masks::of(t))).collect();
        assert_eq!(lib.len(), trees.len());
        assert_eq!(ora.len(), trees.len());
    }
}

#[test]
fn catalog_structure() {
    for k in 1..=11 {
        let cat = enumerate_trees(k).unwrap();
        assert!(cat.entry(0).max_degree() <= 2);
        if k >= 4 {
            assert_eq!(cat.entry(1).max_degree(), k - 1);
        }
        for (i, t) in cat.entries().iter().enumerate() {
            assert_eq!(cat.index_of(&t.canonical_code()), Some(i + 1));
        }
    }
}

#[test]
fn degree_bounded_counts() {
    // max-degree-3 trees on 1..=15 vertices
    let expected = [1, 1, 1, 2, 2, 4, 6, 11, 18, 37, 66, 135, 265, 552, 1132];
    for (i, &e) in expected.iter().enumerate() {
        assert_eq!(all_trees(i + 1, Some(3)).len(), e, "n = {}", i + 1);
    }
}

#[test]
fn count_all_matches_naive_on_hosts_to_9() {
    for n in 1..=9 {
        for host in all_trees(n, None) {
            for k in 1..=n {
                let cat = enumerate_trees(k).unwrap();
                let got = count_all_with(&host, &cat);
                let want = naive_counts(&host, &cat);
                let got: Vec<u64> = got.per_type.iter().map(|c| c.to_u64().unwrap()).collect();
                assert_eq!(got, want, "host {}, k = {k}", host.canonical_code());
            }
        }
    }
}

#[test]
fn count_all_matches_naive_on_random_hosts() {
    for seed in 0..40 {
        let host = random_tree(16, seed);
        for k in [4, 6, 7] {
            let cat = enumerate_trees(k).unwrap();
            let got = count_all(&host, k).unwrap();
            let want = naive_counts(&host, &cat);
            let got: Vec<u64> = got.per_type.iter().map(|c| c.to_u64().unwrap()).collect();
            assert_eq!(got, want);
        }
    }
}
