//! The plane of (path, star) densities among 5-vertex subtrees: millipede
//! limit points, their convex hull, the lower line `y = (1 - 2x)/37`, figure
//! data, a scan for `Y - 9S - P`, and gluing-based inducibility bounds.
//!
//! With `N_5 = 3` every 5-vertex subtree is a path, a star, or a Y-shape, so
//! `Z_5 = P + S + Y` and the fast counters give whole 5-profiles.

use std::cmp::Ordering;
use std::io::Write;

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{self, all_trees_up_to};
use crate::counting::{count_copies, count_subtrees, FiveCounts};
use crate::error::{Error, Result};
use crate::exact::{exact_string, int, ratio, small, to_decimal};
use crate::generators::{glue_power_capped, glue_power_size, make_millipede, random_tree_with};
use crate::report::{describe, VerificationReport};
use crate::tree::{CanonicalCode, Tree};

/// Default glue-power multiplicities for [`inducibility_lower_bound`].
pub const DEFAULT_SCHEDULE: [usize; 5] = [1, 2, 4, 8, 16];

/// Number of red-line intervals on `x in [0, 1/2]` in the figure data.
pub const RED_LINE_INTERVALS: usize = 100;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlanePoint {
    pub x: BigRational,
    pub y: BigRational,
}

impl PlanePoint {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        PlanePoint { x, y }
    }

    /// `(P/Z, S/Z)` for a host with at least one 5-vertex subtree.
    pub fn of_counts(c: &FiveCounts) -> Option<Self> {
        let z = c.total();
        if z.is_zero() {
            return None;
        }
        Some(PlanePoint::new(ratio(&c.paths, &z), ratio(&c.stars, &z)))
    }

    pub fn of_tree(t: &Tree) -> Option<Self> {
        Self::of_counts(&FiveCounts::of(t))
    }

    pub fn linf_distance(&self, other: &PlanePoint) -> BigRational {
        let dx = (&self.x - &other.x).abs();
        let dy = (&self.y - &other.y).abs();
        dx.max(dy)
    }
}

impl Serialize for PlanePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [exact_string(&self.x), exact_string(&self.y)].serialize(s)
    }
}

fn five_vertex_catalog_is_three() {
    debug_assert_eq!(catalog::catalog_count(5).ok(), Some(3));
}

/// Limit of the (path, star) projection along d-millipedes of growing length.
pub fn m_point(d: u64) -> PlanePoint {
    let stars = binomial(BigUint::from(d + 2), BigUint::from(4u32));
    let paths = BigUint::from((d + 1) * (d + 1));
    let denom = &stars + &paths * BigUint::from(d + 1);
    PlanePoint::new(ratio(&paths, &denom), ratio(&stars, &denom))
}

/// `y - (1 - 2x)/37`; nonnegative on every limit point.
pub fn theorem3_margin(p: &PlanePoint) -> BigRational {
    &p.y - (small(1, 1) - &p.x * small(2, 1)) / small(37, 1)
}

/// Closed forms for a d-millipede of length `n >= 2`: `(S, P, Y)`.
pub fn millipede_closed_forms(d: u64, n: u64) -> (BigUint, BigUint, BigUint) {
    let sq = BigUint::from((d + 1) * (d + 1));
    (
        BigUint::from(n) * binomial(BigUint::from(d + 2), BigUint::from(4u32)),
        BigUint::from(n - 2) * &sq,
        BigUint::from(n - 1) * &sq * BigUint::from(d),
    )
}

/// Engine counts on `make_millipede(d, length)` against the closed forms,
/// plus the reported distance of its projection to `m_point(d)`.
pub fn millipede_limit_consistency(d: u64, length: usize) -> Result<Vec<VerificationReport>> {
    if length < 3 {
        return Err(Error::Precondition(format!("needs length >= 3, got {length}")));
    }
    let t = make_millipede(d as usize, length)?;
    let c = FiveCounts::of(&t);
    let (s, p, y) = millipede_closed_forms(d, length as u64);
    let input = format!("millipede d={d} length={length}");
    let point = PlanePoint::of_counts(&c).expect("length >= 3 has a 5-vertex subtree");
    Ok(vec![
        VerificationReport::equal("millipede_stars", &input, int(&c.stars), int(&s)),
        VerificationReport::equal("millipede_paths", &input, int(&c.paths), int(&p)),
        VerificationReport::equal("millipede_y", &input, int(&c.y.total), int(&y)),
        VerificationReport::at_most(
            "millipede_distance_to_limit",
            &input,
            point.linf_distance(&m_point(d)),
            BigRational::zero(),
        )
        .reported_only(),
    ])
}

/// Distances to `m_point(d)` along `lengths`, asserting that each is at most
/// the previous one.
pub fn millipede_convergence(d: u64, lengths: &[usize]) -> Result<Vec<VerificationReport>> {
    let m = m_point(d);
    let mut distances = Vec::with_capacity(lengths.len());
    for &len in lengths {
        if len < 3 {
            return Err(Error::Precondition(format!("needs length >= 3, got {len}")));
        }
        let t = make_millipede(d as usize, len)?;
        let p = PlanePoint::of_tree(&t).expect("length >= 3 has a 5-vertex subtree");
        distances.push((len, p.linf_distance(&m)));
    }
    Ok(distances
        .windows(2)
        .map(|w| {
            VerificationReport::at_most(
                "millipede_distance_nonincreasing",
                &format!("millipede d={d} length {} -> {}", w[0].0, w[1].0),
                w[1].1.clone(),
                w[0].1.clone(),
            )
        })
        .collect())
}

fn cross(o: &PlanePoint, a: &PlanePoint, b: &PlanePoint) -> BigRational {
    (&a.x - &o.x) * (&b.y - &o.y) - (&a.y - &o.y) * (&b.x - &o.x)
}

/// Exact convex hull by monotone chain, counterclockwise from the lowest
/// `(x, y)` point. Collinear boundary points are dropped.
pub fn convex_hull(points: &[PlanePoint]) -> Vec<PlanePoint> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.x.cmp(&b.x).then_with(|| a.y.cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<PlanePoint> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &PlanePoint>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for p in iter {
            while hull.len() >= start + 2
                && !cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p).is_positive()
            {
                hull.pop();
            }
            hull.push(p.clone());
        }
        hull.pop();
    }
    hull
}

/// Hull of `(0, 1)` and `m_0, ..., m_{d_max}`.
pub fn inner_region(d_max: u64) -> Vec<PlanePoint> {
    let mut pts: Vec<PlanePoint> = (0..=d_max).map(m_point).collect();
    pts.push(PlanePoint::new(small(0, 1), small(1, 1)));
    convex_hull(&pts)
}

/// Whether consecutive hull edges always turn left.
pub fn is_convex_ccw(polygon: &[PlanePoint]) -> bool {
    let n = polygon.len();
    n < 3
        || (0..n).all(|i| {
            cross(&polygon[i], &polygon[(i + 1) % n], &polygon[(i + 2) % n]).is_positive()
        })
}

/// `p_2 >= (1 - 2 p_1 - 4/Z_5)/37` on a host with `Z_5 > 0`.
pub fn check_theorem3_shadow(t: &Tree) -> Result<VerificationReport> {
    five_vertex_catalog_is_three();
    let c = FiveCounts::of(t);
    let z = c.total();
    let p = PlanePoint::of_counts(&c).ok_or(Error::EmptyProfile { n: t.len(), k: 5 })?;
    let lhs = (small(1, 1) - &p.x * small(2, 1) - int(&BigUint::from(4u32)) / int(&z))
        / small(37, 1);
    Ok(VerificationReport::at_most("density_line_finite", &describe(t), lhs, p.y))
}

/// Writes the figure series as CSV: `red` samples of `y = (1 - 2x)/37` on
/// `x in [0, 1/2]`, `blue` hull vertices of [`inner_region`], and the `m`
/// points. Each row carries decimal and exact coordinates.
pub fn emit_figure_data<W: Write>(d_max: u64, precision: usize, out: &mut W) -> Result<()> {
    writeln!(out, "series,index,x,y,x_exact,y_exact")?;
    let mut row = |series: &str, i: u64, p: &PlanePoint| -> std::io::Result<()> {
        writeln!(
            out,
            "{series},{i},{},{},{},{}",
            to_decimal(&p.x, precision),
            to_decimal(&p.y, precision),
            exact_string(&p.x),
            exact_string(&p.y)
        )
    };
    let steps = RED_LINE_INTERVALS as i64;
    for j in 0..=steps {
        let x = small(j, 2 * steps);
        let y = (small(1, 1) - &x * small(2, 1)) / small(37, 1);
        row("red", j as u64, &PlanePoint::new(x, y))?;
    }
    for (i, p) in inner_region(d_max).iter().enumerate() {
        row("blue", i as u64, p)?;
    }
    for d in 0..=d_max {
        row("m", d, &m_point(d))?;
    }
    Ok(())
}

/// Largest `Y - 9S - P` seen by [`conjecture_scan`].
#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub max_n: usize,
    pub budget: usize,
    pub seed: u64,
    pub trees_examined: usize,
    pub max_value: String,
    pub witness_code: CanonicalCode,
    pub witness: crate::tree::TreeData,
    pub witness_paths: String,
    pub witness_stars: String,
    pub witness_y: String,
}

struct ScanBest {
    value: BigInt,
    code: CanonicalCode,
    tree: Tree,
    counts: FiveCounts,
}

fn scan_value(t: &Tree) -> ScanBest {
    let counts = FiveCounts::of(t);
    let value = BigInt::from(counts.y.total.clone())
        - BigInt::from(counts.stars.clone()) * 9
        - BigInt::from(counts.paths.clone());
    ScanBest { value, code: t.canonical_code(), tree: t.clone(), counts }
}

fn better(a: ScanBest, b: ScanBest) -> ScanBest {
    match a.value.cmp(&b.value) {
        Ordering::Greater => a,
        Ordering::Less => b,
        Ordering::Equal => {
            if b.code < a.code {
                b
            } else {
                a
            }
        }
    }
}

/// Maximum of `Y - 9S - P` over every tree with at most `max_n` vertices and
/// `budget` uniform random trees with `max_n + 1 ..= 3 max_n` vertices. Ties
/// go to the smallest canonical code. Experimental: nothing is asserted.
pub fn conjecture_scan(max_n: usize, seed: u64, budget: usize) -> ScanReport {
    let max_n = max_n.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let jobs: Vec<(usize, u64)> = (0..budget)
        .map(|_| (rng.gen_range(max_n + 1..=3 * max_n), rng.gen()))
        .collect();
    let exhaustive = all_trees_up_to(max_n, None);
    let examined = exhaustive.len() + jobs.len();
    let from_catalog = exhaustive.par_iter().map(scan_value);
    let from_random = jobs.par_iter().map(|&(n, s)| {
        let mut r = ChaCha8Rng::seed_from_u64(s);
        scan_value(&random_tree_with(n, &mut r))
    });
    let best = from_catalog
        .chain(from_random)
        .reduce_with(better)
        .expect("at least the single vertex is scanned");
    ScanReport {
        max_n,
        budget,
        seed,
        trees_examined: examined,
        max_value: best.value.to_string(),
        witness_code: best.code,
        witness: best.tree.to_data(),
        witness_paths: best.counts.paths.to_string(),
        witness_stars: best.counts.stars.to_string(),
        witness_y: best.counts.y.total.to_string(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InducibilityStep {
    pub ell: usize,
    pub vertices: usize,
    pub copies: String,
    pub total: String,
    pub density: String,
    pub density_exact: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct InducibilityReport {
    pub tree: CanonicalCode,
    pub k: usize,
    pub steps: Vec<InducibilityStep>,
    /// Multiplicities skipped because the glue power exceeds the vertex cap.
    pub skipped: Vec<usize>,
    pub bound: String,
    pub bound_exact: String,
    #[serde(skip)]
    pub bound_value: BigRational,
}

/// Best density of `t` among `|t|`-vertex subtrees of its glue powers over
/// `schedule`; a lower bound on the inducibility of `t`.
pub fn inducibility_lower_bound(
    t: &Tree,
    schedule: &[usize],
    cap: usize,
    precision: usize,
) -> Result<InducibilityReport> {
    let k = t.len();
    if k < 2 {
        return Err(Error::Precondition("needs at least 2 vertices".into()));
    }
    catalog::catalog_count(k)?;
    let mut steps = Vec::new();
    let mut skipped = Vec::new();
    let mut best: Option<BigRational> = None;
    for &ell in schedule {
        if ell == 0 {
            return Err(Error::InvalidParameter("schedule entries must be positive".into()));
        }
        if glue_power_size(k, k, ell) > cap as u128 {
            skipped.push(ell);
            continue;
        }
        let g = glue_power_capped(t, k, ell, cap)?;
        let copies = count_copies(t, &g);
        let total = count_subtrees(&g, k);
        let density = ratio(&copies, &total);
        if best.as_ref().is_none_or(|b| density > *b) {
            best = Some(density.clone());
        }
        steps.push(InducibilityStep {
            ell,
            vertices: g.len(),
            copies: copies.to_string(),
            total: total.to_string(),
            density: to_decimal(&density, precision),
            density_exact: exact_string(&density),
        });
    }
    let bound = best.ok_or_else(|| {
        Error::Precondition("every schedule entry exceeds the vertex cap".into())
    })?;
    Ok(InducibilityReport {
        tree: t.canonical_code(),
        k,
        steps,
        skipped,
        bound: to_decimal(&bound, precision),
        bound_exact: exact_string(&bound),
        bound_value: bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{make_path, make_star, DEFAULT_VERTEX_CAP};

    fn pt(a: i64, b: i64, c: i64, d: i64) -> PlanePoint {
        PlanePoint::new(small(a, b), small(c, d))
    }

    #[test]
    fn m_points() {
        assert_eq!(m_point(0), pt(1, 1, 0, 1));
        assert_eq!(m_point(1), pt(1, 2, 0, 1));
        assert_eq!(m_point(2), pt(9, 28, 1, 28));
    }

    #[test]
    fn margins() {
        assert_eq!(theorem3_margin(&pt(1, 2, 0, 1)), small(0, 1));
        assert_eq!(theorem3_margin(&pt(0, 1, 1, 1)), small(36, 37));
        assert_eq!(theorem3_margin(&pt(1, 1, 0, 1)), small(1, 37));
    }

    #[test]
    fn millipede_consistency_examples() {
        let r = millipede_limit_consistency(2, 5).unwrap();
        assert!(r.iter().all(|r| r.passes()));
        assert_eq!(
            (r[1].lhs.clone(), r[0].lhs.clone(), r[2].lhs.clone()),
            (small(27, 1), small(5, 1), small(72, 1))
        );
        let r = millipede_limit_consistency(1, 10).unwrap();
        assert!(r[0].lhs.is_zero() && r[0].holds);
        let r = millipede_convergence(3, &[5, 10, 20, 40]).unwrap();
        assert_eq!(r.len(), 3);
        assert!(r.iter().all(|r| r.holds && !r.slack.is_zero()));
    }

    #[test]
    fn region_small() {
        let hull = inner_region(1);
        assert_eq!(hull, vec![pt(0, 1, 1, 1), pt(1, 2, 0, 1), pt(1, 1, 0, 1)]);
        let hull = inner_region(30);
        assert!(is_convex_ccw(&hull));
        assert!(hull.iter().all(|p| !theorem3_margin(p).is_negative()));
    }

    #[test]
    fn hull_ignores_order_and_collinear_points() {
        let mut pts: Vec<PlanePoint> = (0..12).map(m_point).collect();
        pts.push(pt(0, 1, 1, 1));
        pts.push(pt(1, 4, 3, 4)); // on the segment (0,1)-(1/2,1/2)
        pts.push(pt(1, 2, 1, 2));
        let a = convex_hull(&pts);
        pts.reverse();
        pts.rotate_left(5);
        assert_eq!(a, convex_hull(&pts));
        assert!(!a.contains(&pt(1, 4, 3, 4)));
    }

    #[test]
    fn figure_rows() {
        let mut buf = Vec::new();
        emit_figure_data(3, 12, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("\nm,1,0.5,0,1/2,0\n"));
        assert!(text.contains("\nred,0,0,0.027027027027,0,1/37\n"));
        assert!(text.contains("\nred,100,0.5,0,1/2,0\n"));
        assert!(text.lines().any(|l| l.starts_with("blue,")));
    }

    #[test]
    fn shadow_on_small_trees() {
        let r = check_theorem3_shadow(&make_millipede(1, 8).unwrap()).unwrap();
        assert!(r.holds);
        assert!(check_theorem3_shadow(&make_path(4).unwrap()).is_err());
    }

    #[test]
    fn scan_values() {
        let v = scan_value(&make_millipede(1, 6).unwrap()).value;
        assert_eq!(v, BigInt::from(4));
        assert_eq!(scan_value(&make_path(9).unwrap()).value, BigInt::from(-5));
        let a = conjecture_scan(8, 7, 20);
        let b = conjecture_scan(8, 7, 20);
        assert_eq!(a.witness_code, b.witness_code);
        assert_eq!(a.max_value, b.max_value);
        assert_eq!(a.trees_examined, 1 + 1 + 1 + 2 + 3 + 6 + 11 + 23 + 20);
    }

    #[test]
    fn inducibility_examples() {
        let star = make_star(5).unwrap();
        let r = inducibility_lower_bound(&star, &[1], DEFAULT_VERTEX_CAP, 12).unwrap();
        assert_eq!(r.bound_value, small(1, 1));
        let path = make_path(5).unwrap();
        let r = inducibility_lower_bound(&path, &DEFAULT_SCHEDULE, DEFAULT_VERTEX_CAP, 12).unwrap();
        assert_eq!(r.bound_value, small(1, 1));
        let y = Tree::new(5, [(0, 1), (0, 2), (0, 3), (3, 4)]).unwrap();
        let r = inducibility_lower_bound(&y, &[1, 2, 4, 8], DEFAULT_VERTEX_CAP, 12).unwrap();
        assert_eq!(r.steps.len(), 4);
        assert_eq!(r.steps[0].density_exact, "1");
        let r = inducibility_lower_bound(&y, &[1, 1000], 20, 12).unwrap();
        assert_eq!(r.skipped, vec![1000]);
    }
}
