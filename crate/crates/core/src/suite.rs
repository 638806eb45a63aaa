//! Batch runner for the exact checks: exhaustive over small trees plus a
//! seeded sample of larger ones. Output order is fixed by the input order,
//! so reports are identical for any thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::catalog::all_trees_up_to;
use crate::census::{
    census_bookkeeping_applies, check_census_invariants, check_lemma_general,
    check_lemma_smalldeg, check_millipede_upper, check_p_formula_census, check_py_identity,
    check_y_36s, check_y_formula_census, check_y_p4, check_y_p4_equality,
};
use crate::error::{Error, Result};
use crate::generators::{random_tree_max_degree, random_tree_with};
use crate::region::{check_theorem3_shadow, millipede_limit_consistency};
use crate::report::VerificationReport;
use crate::tree::Tree;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Census,
    Lemmas,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "census" => Ok(Suite::Census),
            "lemmas" => Ok(Suite::Lemmas),
            "all" => Ok(Suite::All),
            _ => Err(Error::InvalidParameter(format!("unknown suite {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    /// Exhaustive ceiling on tree size.
    pub max_n: usize,
    /// Subtree size for the general lemmas; `None` runs 5 and 6.
    pub k: Option<usize>,
    pub seed: u64,
    /// Random trees beyond the exhaustive range, per suite.
    pub random: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { max_n: 10, k: None, seed: 0, random: 100 }
    }
}

/// Seeded random trees with `max_n + 1 ..= 4 max_n` vertices; degree-bounded
/// by 3 when `census` is set.
fn random_hosts(opts: &SuiteOptions, census: bool, stream: u64) -> Vec<Tree> {
    let lo = opts.max_n.max(1) + 1;
    let hi = 4 * opts.max_n.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let jobs: Vec<(usize, u64)> = (0..opts.random).map(|_| (rng.gen_range(lo..=hi), rng.gen())).collect();
    jobs.par_iter()
        .map(|&(n, s)| {
            let mut r = ChaCha8Rng::seed_from_u64(s);
            if census {
                random_tree_max_degree(n, 3, &mut r).expect("n >= 2 fits degree 3")
            } else {
                random_tree_with(n, &mut r)
            }
        })
        .collect()
}

fn census_checks(t: &Tree) -> Vec<VerificationReport> {
    let mut out = check_census_invariants(t).expect("census tree");
    out.push(check_p_formula_census(t).expect("census tree"));
    out.push(check_y_formula_census(t).expect("census tree"));
    out.push(check_y_p4(t).expect("census tree"));
    if census_bookkeeping_applies(t) {
        out.extend(check_py_identity(t).expect("bookkeeping applies"));
        out.push(check_y_p4_equality(t).expect("bookkeeping applies"));
    }
    out
}

fn lemma_checks(t: &Tree, ks: &[usize]) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    for &k in ks {
        if k >= 3 && t.max_degree() + 2 <= k {
            out.push(check_lemma_smalldeg(t, k).expect("precondition checked"));
        }
        out.extend(check_lemma_general(t, k).expect("k validated"));
    }
    out.extend(check_y_36s(t));
    if let Ok(r) = check_theorem3_shadow(t) {
        out.push(r);
    }
    out
}

fn fixed_family_checks() -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for k in [6, 8] {
        for length in [10, 20] {
            out.extend(check_millipede_upper(k, length)?);
        }
    }
    for d in 0..=6 {
        for length in [3, 10, 30] {
            out.extend(millipede_limit_consistency(d, length)?);
        }
    }
    Ok(out)
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<Vec<VerificationReport>> {
    let ks: Vec<usize> = opts.k.map_or(vec![5, 6], |k| vec![k]);
    for &k in &ks {
        crate::catalog::catalog_count(k)?;
    }
    let mut out = Vec::new();
    if matches!(suite, Suite::Census | Suite::All) {
        let mut hosts: Vec<Tree> =
            all_trees_up_to(opts.max_n, Some(3)).into_iter().filter(|t| t.len() >= 2).collect();
        hosts.extend(random_hosts(opts, true, 1));
        out.extend(hosts.par_iter().map(census_checks).collect::<Vec<_>>().into_iter().flatten());
    }
    if matches!(suite, Suite::Lemmas | Suite::All) {
        let mut hosts = all_trees_up_to(opts.max_n, None);
        hosts.extend(random_hosts(opts, false, 2));
        out.extend(
            hosts.par_iter().map(|t| lemma_checks(t, &ks)).collect::<Vec<_>>().into_iter().flatten(),
        );
        out.extend(fixed_family_checks()?);
    }
    Ok(out)
}

pub fn all_pass(reports: &[VerificationReport]) -> bool {
    reports.iter().all(VerificationReport::passes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let opts = SuiteOptions { max_n: 8, k: None, seed: 3, random: 10 };
        let reports = run_suite(Suite::All, &opts).unwrap();
        let failing: Vec<_> = reports.iter().filter(|r| !r.passes()).collect();
        assert!(failing.is_empty(), "{failing:?}");
        assert!(reports.iter().any(|r| r.check == "p_minus_y_plus_4"));
        assert!(reports.iter().any(|r| r.check.starts_with("lemma_small_degree")));
    }

    #[test]
    fn bad_k_is_rejected() {
        let opts = SuiteOptions { k: Some(40), ..SuiteOptions::default() };
        assert!(run_suite(Suite::Lemmas, &opts).is_err());
    }
}
