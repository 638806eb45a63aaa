//! Degree-type census for trees of maximum degree at most 3, and exact checks
//! of the finite-tree bounds on path, star, and Y-shape counts.
//!
//! A degree-3 vertex has type `xyz` when its neighbors have degrees
//! `x+1, y+1, z+1`; a degree-2 vertex has type `xy` likewise. Types are
//! stored sorted descending, so `210` and `120` share a bucket.
//!
//! The census bookkeeping for leaves only accounts for leaves hanging off a
//! vertex that has a non-leaf neighbor. That fails exactly for the trees of
//! diameter at most 2 (the edge, the 3-path, and the claw `K_{1,3}`), so the
//! identities that count leaves through the census require diameter >= 3.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::Serialize;

use crate::catalog;
use crate::counting::{count_paths_fast, count_stars_fast, count_subtrees, count_y_fast};
use crate::error::{Error, Result};
use crate::exact::{int, ratio};
use crate::generators::{make_millipede, DEFAULT_VERTEX_CAP};
use crate::report::{describe, VerificationReport};
use crate::tree::Tree;

const TRIPLES: [[u8; 3]; 10] = [
    [2, 2, 2],
    [2, 2, 1],
    [2, 2, 0],
    [2, 1, 1],
    [2, 1, 0],
    [2, 0, 0],
    [1, 1, 1],
    [1, 1, 0],
    [1, 0, 0],
    [0, 0, 0],
];
const PAIRS: [[u8; 2]; 6] = [[2, 2], [2, 1], [2, 0], [1, 1], [1, 0], [0, 0]];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeTypeCensus {
    triples: [u64; 10],
    pairs: [u64; 6],
    pub n1: u64,
    pub n2: u64,
    pub n3: u64,
}

impl DegreeTypeCensus {
    /// `n_xyz` in any argument order.
    pub fn n_xyz(&self, x: u8, y: u8, z: u8) -> u64 {
        let mut key = [x, y, z];
        key.sort_unstable_by(|a, b| b.cmp(a));
        TRIPLES
            .iter()
            .position(|t| *t == key)
            .map_or(0, |i| self.triples[i])
    }

    /// `n_xy` in any argument order.
    pub fn n_xy(&self, x: u8, y: u8) -> u64 {
        let key = [x.max(y), x.min(y)];
        PAIRS.iter().position(|p| *p == key).map_or(0, |i| self.pairs[i])
    }

    pub fn vertex_count(&self) -> u64 {
        self.n1 + self.n2 + self.n3
    }

    fn t(&self, code: u16) -> i64 {
        let (x, y, z) = ((code / 100) as u8, (code / 10 % 10) as u8, (code % 10) as u8);
        self.n_xyz(x, y, z) as i64
    }

    fn p(&self, code: u16) -> i64 {
        self.n_xy((code / 10) as u8, (code % 10) as u8) as i64
    }

    /// Census linear form for the number of 5-vertex paths.
    pub fn path_form(&self) -> i64 {
        12 * self.t(222) + 8 * self.t(221) + 4 * self.t(220) + 5 * self.t(211) + 2 * self.t(210)
            + 3 * self.t(111)
            + self.t(110)
            + 4 * self.p(22)
            + 2 * self.p(21)
            + self.p(11)
    }

    /// Census linear form for the number of Y-shapes.
    pub fn y_form(&self) -> i64 {
        6 * self.t(222) + 5 * self.t(221) + 4 * self.t(220) + 4 * self.t(211) + 3 * self.t(210)
            + 2 * self.t(200)
            + 3 * self.t(111)
            + 2 * self.t(110)
            + self.t(100)
    }

    /// Left side of the leaf/degree-3 balance, which equals 2.
    pub fn balance_form(&self) -> i64 {
        -self.t(222) - self.t(221) - self.t(211) + self.t(200) - self.t(111)
            + self.t(100)
            + self.p(20)
            + self.p(10)
    }

    /// Right side of `P - Y + 4 = ...`.
    pub fn slack_form(&self) -> i64 {
        4 * self.t(222) + 2 * self.t(221) + self.t(211) + self.t(111) + self.t(110)
            + 2 * self.t(100)
            + 2 * self.p(22)
            + self.p(21)
            + self.p(11)
            + self.p(20)
            + 2 * self.p(10)
    }

    /// Edges between degree-2 and degree-3 vertices, counted from the
    /// degree-3 side and from the degree-2 side.
    pub fn mixed_edge_counts(&self) -> (i64, i64) {
        let from3 = self.t(221) + 2 * self.t(211) + self.t(210) + 3 * self.t(111)
            + 2 * self.t(110)
            + self.t(100);
        let from2 = 2 * self.p(22) + self.p(21) + self.p(20);
        (from3, from2)
    }
}

impl Serialize for DegreeTypeCensus {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            n_xyz: BTreeMap<String, u64>,
            n_xy: BTreeMap<String, u64>,
            n1: u64,
            n2: u64,
            n3: u64,
        }
        let key = |d: &[u8]| d.iter().map(|x| x.to_string()).collect::<String>();
        Wire {
            n_xyz: TRIPLES.iter().zip(self.triples).map(|(t, c)| (key(t), c)).collect(),
            n_xy: PAIRS.iter().zip(self.pairs).map(|(p, c)| (key(p), c)).collect(),
            n1: self.n1,
            n2: self.n2,
            n3: self.n3,
        }
        .serialize(s)
    }
}

/// Census of a tree with maximum degree at most 3 and at least 2 vertices.
pub fn degree_type_census(t: &Tree) -> Result<DegreeTypeCensus> {
    if t.len() < 2 {
        return Err(Error::Precondition("census needs at least 2 vertices".into()));
    }
    if t.max_degree() > 3 {
        return Err(Error::Precondition(format!(
            "census needs maximum degree <= 3, got {}",
            t.max_degree()
        )));
    }
    let mut c = DegreeTypeCensus {
        triples: [0; 10],
        pairs: [0; 6],
        n1: 0,
        n2: 0,
        n3: 0,
    };
    for v in 0..t.len() {
        let mut key: Vec<u8> = t.neighbors(v).map(|w| (t.degree(w) - 1) as u8).collect();
        key.sort_unstable_by(|a, b| b.cmp(a));
        match t.degree(v) {
            1 => c.n1 += 1,
            2 => {
                c.n2 += 1;
                let i = PAIRS.iter().position(|p| p[..] == key[..]).unwrap();
                c.pairs[i] += 1;
            }
            3 => {
                c.n3 += 1;
                let i = TRIPLES.iter().position(|p| p[..] == key[..]).unwrap();
                c.triples[i] += 1;
            }
            _ => unreachable!("degrees are between 1 and 3"),
        }
    }
    Ok(c)
}

/// Whether the census leaf bookkeeping applies: maximum degree <= 3 and
/// diameter >= 3.
pub fn census_bookkeeping_applies(t: &Tree) -> bool {
    t.len() >= 2 && t.max_degree() <= 3 && t.diameter() >= 3
}

fn require_bookkeeping(t: &Tree) -> Result<()> {
    if !census_bookkeeping_applies(t) {
        return Err(Error::Precondition(
            "census leaf identities need maximum degree <= 3 and diameter >= 3".into(),
        ));
    }
    Ok(())
}

fn i64r(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn u64r(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Census form for `P` against the path counter.
pub fn check_p_formula_census(t: &Tree) -> Result<VerificationReport> {
    let c = degree_type_census(t)?;
    Ok(VerificationReport::equal(
        "census_path_form",
        &describe(t),
        i64r(c.path_form()),
        int(&count_paths_fast(t, 5)),
    ))
}

/// Census form for `Y` against the Y counter.
pub fn check_y_formula_census(t: &Tree) -> Result<VerificationReport> {
    let c = degree_type_census(t)?;
    Ok(VerificationReport::equal(
        "census_y_form",
        &describe(t),
        i64r(c.y_form()),
        int(&count_y_fast(t).total),
    ))
}

/// Degree-count identities valid for every census tree: `n1 - n3 = 2`, the
/// vertex partition, and the mixed-edge double count.
pub fn check_census_invariants(t: &Tree) -> Result<Vec<VerificationReport>> {
    let c = degree_type_census(t)?;
    let input = describe(t);
    let (from3, from2) = c.mixed_edge_counts();
    Ok(vec![
        VerificationReport::equal(
            "census_leaf_excess",
            &input,
            i64r(c.n1 as i64 - c.n3 as i64),
            i64r(2),
        ),
        VerificationReport::equal(
            "census_vertex_partition",
            &input,
            u64r(c.vertex_count()),
            u64r(t.len() as u64),
        ),
        VerificationReport::equal("census_mixed_edges", &input, i64r(from3), i64r(from2)),
    ])
}

/// `P - Y + 4` identity, the balance identity, and the mixed-edge double
/// count, from a census and the engine's `P` and `Y`. No precondition
/// beyond the census; see [`check_py_identity`] for the guarded form.
pub fn py_identity_reports(
    input: &str,
    c: &DegreeTypeCensus,
    paths: &BigUint,
    y: &BigUint,
) -> Vec<VerificationReport> {
    let lhs = int(paths) - int(y) + i64r(4);
    let (from3, from2) = c.mixed_edge_counts();
    vec![
        VerificationReport::equal("p_minus_y_plus_4", input, lhs, i64r(c.slack_form())),
        VerificationReport::equal("census_balance", input, i64r(c.balance_form()), i64r(2)),
        VerificationReport::equal("census_mixed_edges", input, i64r(from3), i64r(from2)),
    ]
}

pub fn check_py_identity(t: &Tree) -> Result<Vec<VerificationReport>> {
    require_bookkeeping(t)?;
    let c = degree_type_census(t)?;
    Ok(py_identity_reports(
        &describe(t),
        &c,
        &count_paths_fast(t, 5),
        &count_y_fast(t).total,
    ))
}

/// `Z_k <= k N_k (k-2)^(k-1) P_k + k N_k (k-2)^(2k-2)` for `D(t) <= k - 2`.
pub fn check_lemma_smalldeg(t: &Tree, k: usize) -> Result<VerificationReport> {
    if k < 3 || t.max_degree() > k - 2 {
        return Err(Error::Precondition(format!(
            "needs k >= 3 and maximum degree <= k - 2 = {}, got {}",
            k.saturating_sub(2),
            t.max_degree()
        )));
    }
    let nk = BigUint::from(catalog::catalog_count(k)?);
    let kk = BigUint::from(k);
    let base = BigUint::from(k - 2);
    let z = count_subtrees(t, k);
    let p = count_paths_fast(t, k);
    let rhs = &kk * &nk * Pow::pow(&base, (k - 1) as u32) * &p
        + &kk * &nk * Pow::pow(&base, (2 * k - 2) as u32);
    Ok(VerificationReport::at_most_int(
        &format!("lemma_small_degree_k{k}"),
        &describe(t),
        &z,
        &rhs,
    ))
}

/// `Z_k <= N_k k^(2k) (P_k + 2 S_k + 1)`, plus its normalized form
/// `p_1 + 2 p_2 + 1/Z_k >= 1/(N_k k^(2k))` when `Z_k > 0`.
pub fn check_lemma_general(t: &Tree, k: usize) -> Result<Vec<VerificationReport>> {
    let nk = BigUint::from(catalog::catalog_count(k)?);
    let scale = &nk * Pow::pow(&BigUint::from(k), (2 * k) as u32);
    let z = count_subtrees(t, k);
    let p = count_paths_fast(t, k);
    let s = count_stars_fast(t, k);
    let input = describe(t);
    let rhs = &scale * (&p + &s * 2u32 + 1u32);
    let mut out = vec![VerificationReport::at_most_int(
        &format!("lemma_general_k{k}"),
        &input,
        &z,
        &rhs,
    )];
    if !z.is_zero() {
        let normalized = ratio(&p, &z) + ratio(&s, &z) * i64r(2) + ratio(&BigUint::one(), &z);
        out.push(VerificationReport::at_most(
            &format!("lemma_general_normalized_k{k}"),
            &input,
            ratio(&BigUint::one(), &scale),
            normalized,
        ));
    }
    Ok(out)
}

/// `Y <= P + 4` for maximum degree at most 3.
pub fn check_y_p4(t: &Tree) -> Result<VerificationReport> {
    if t.max_degree() > 3 {
        return Err(Error::Precondition("needs maximum degree <= 3".into()));
    }
    let y = count_y_fast(t).total;
    let p = count_paths_fast(t, 5);
    Ok(VerificationReport::at_most(
        "y_le_p_plus_4",
        &describe(t),
        int(&y),
        int(&p) + i64r(4),
    ))
}

/// Equality `Y = P + 4` holds exactly for 1-millipedes: compares the
/// equality indicator with [`is_one_millipede`]. Needs diameter >= 3; the
/// claw `K_{1,3}` is the length-1 millipede and has `Y = 0 < P + 4 = 4`.
pub fn check_y_p4_equality(t: &Tree) -> Result<VerificationReport> {
    require_bookkeeping(t)?;
    let y = count_y_fast(t).total;
    let p = count_paths_fast(t, 5);
    let equal = (y == p + 4u32) as i64;
    Ok(VerificationReport::equal(
        "y_eq_p_plus_4_iff_1_millipede",
        &describe(t),
        i64r(equal),
        i64r(is_one_millipede(t) as i64),
    ))
}

/// True iff `t` is isomorphic to the 1-millipede of length `(|t| - 2) / 2`.
pub fn is_one_millipede(t: &Tree) -> bool {
    let n = t.len();
    if n < 4 || !(n - 2).is_multiple_of(2) {
        return false;
    }
    let m = make_millipede(1, (n - 2) / 2).expect("positive length");
    m.canonical_code() == t.canonical_code()
}

/// `Y <= 36 S + P + 4` together with its two halves `Y_large <= 36 S` and
/// `Y_small <= P + 4`.
pub fn check_y_36s(t: &Tree) -> Vec<VerificationReport> {
    let y = count_y_fast(t);
    let p = int(&count_paths_fast(t, 5));
    let s = int(&count_stars_fast(t, 5));
    let input = describe(t);
    let thirty_six = i64r(36);
    vec![
        VerificationReport::at_most(
            "y_le_36s_plus_p_plus_4",
            &input,
            int(&y.total),
            &thirty_six * &s + &p + i64r(4),
        ),
        VerificationReport::at_most("y_large_le_36s", &input, int(&y.large), &thirty_six * &s),
        VerificationReport::at_most("y_small_le_p_plus_4", &input, int(&y.small), &p + i64r(4)),
    ]
}

/// Checks on the `(k-4)`-millipede of the given length (k even, `k >= 6`):
/// `S_k = 0`, `P_k <= n(k-3)^2`, `Z_k >= 2(n-2) C(k-3, (k-2)/2)`, and a
/// reported-only comparison of `(P_k + S_k)/Z_k` with `(k-3)^2 / (3/2)^(k/2)`.
pub fn check_millipede_upper(k: usize, length: usize) -> Result<Vec<VerificationReport>> {
    if k < 6 || !k.is_multiple_of(2) || length < 3 {
        return Err(Error::Precondition(format!(
            "needs even k >= 6 and length >= 3, got k = {k}, length = {length}"
        )));
    }
    let size = length as u128 * (k as u128 - 3) + 2;
    if size > DEFAULT_VERTEX_CAP as u128 {
        return Err(Error::VertexCap { needed: size, cap: DEFAULT_VERTEX_CAP });
    }
    // The catalog bound also caps k for the counting engine.
    catalog::catalog_count(k)?;
    let t = make_millipede(k - 4, length)?;
    let input = format!("millipede d={} length={length} k={k}", k - 4);
    let s = count_stars_fast(&t, k);
    let p = count_paths_fast(&t, k);
    let z = count_subtrees(&t, k);
    let n = BigUint::from(length);
    let path_bound = &n * BigUint::from((k - 3) * (k - 3));
    let subtree_bound = BigUint::from(2 * (length - 2))
        * binomial(BigUint::from(k - 3), BigUint::from((k - 2) / 2));
    let limit = i64r(((k - 3) * (k - 3)) as i64)
        / Pow::pow(&BigRational::new(3.into(), 2.into()), (k / 2) as u32);
    Ok(vec![
        VerificationReport::equal(&format!("millipede_stars_k{k}"), &input, int(&s), BigRational::zero()),
        VerificationReport::at_most_int(&format!("millipede_paths_k{k}"), &input, &p, &path_bound),
        VerificationReport::at_most_int(&format!("millipede_subtrees_k{k}"), &input, &subtree_bound, &z),
        VerificationReport::at_most(
            &format!("millipede_path_star_density_k{k}"),
            &input,
            ratio(&(&p + &s), &z),
            limit,
        )
        .reported_only(),
    ])
}
