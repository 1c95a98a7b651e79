//! Distinct squared distances, fibers around `p3`, and the equal-distance
//! pair count.
//!
//! `Q` counts *unordered* pairs `{q1, q2}` with `|p3 q1| = |p3 q2|`, that is
//! `sum_Z C(|P_Z|, 2)`. Quadruples are generated from *ordered* pairs, so
//! there are exactly `2Q` of them.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::exactmath::rational::{binomial2, format_rational, int, Rational};
use crate::frame::{Configuration, DistanceTriple};

/// `(X, Y, U, V)`: squared distances of `q1` to `p1`, `p2` and of `q2` to
/// `p1`, `p2`. The pair `(Y, U)` is a point, `(X, V)` a curve label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quadruple {
    pub x: Rational,
    pub y: Rational,
    pub u: Rational,
    pub v: Rational,
}

impl Quadruple {
    pub fn new(x: Rational, y: Rational, u: Rational, v: Rational) -> Self {
        Quadruple { x, y, u, v }
    }

    pub fn ints(x: i64, y: i64, u: i64, v: i64) -> Self {
        Quadruple::new(int(x), int(y), int(u), int(v))
    }

    /// Exchanging `q1` and `q2` maps `(X, Y, U, V)` to `(U, V, X, Y)`.
    pub fn swapped(&self) -> Self {
        Quadruple::new(self.u.clone(), self.v.clone(), self.x.clone(), self.y.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceCensus {
    n: usize,
    distinct: Vec<Rational>,
    per_anchor: [usize; 3],
    fibers: BTreeMap<Rational, Vec<usize>>,
    triples: Vec<DistanceTriple>,
}

impl DistanceCensus {
    pub fn n(&self) -> usize {
        self.n
    }

    /// The sorted set `D`.
    pub fn distinct(&self) -> &[Rational] {
        &self.distinct
    }

    pub fn kappa(&self) -> usize {
        self.distinct.len()
    }

    /// Distinct counts to `p1`, `p2`, `p3` separately.
    pub fn per_anchor(&self) -> [usize; 3] {
        self.per_anchor
    }

    /// `Z -> indices of points at squared distance Z from p3`, ascending.
    pub fn fibers(&self) -> &BTreeMap<Rational, Vec<usize>> {
        &self.fibers
    }

    pub fn fiber_sizes(&self) -> Vec<usize> {
        self.fibers.values().map(Vec::len).collect()
    }

    pub fn triples(&self) -> &[DistanceTriple] {
        &self.triples
    }

    /// `n <= 2 kappa^2`: a point is fixed up to two choices by its
    /// distances to `p1` and `p3`.
    pub fn sanity_bound_ok(&self) -> bool {
        let k = self.kappa() as u128;
        (self.n as u128) <= 2 * k * k
    }
}

pub fn build_census(config: &Configuration) -> DistanceCensus {
    let triples = config.triples();
    let mut all = BTreeSet::new();
    let mut each: [BTreeSet<&Rational>; 3] = Default::default();
    let mut fibers: BTreeMap<Rational, Vec<usize>> = BTreeMap::new();
    for (i, t) in triples.iter().enumerate() {
        for (k, d) in [&t.to_p1, &t.to_p2, &t.to_p3].into_iter().enumerate() {
            all.insert(d.clone());
            each[k].insert(d);
        }
        fibers.entry(t.to_p3.clone()).or_default().push(i);
    }
    let per_anchor = [each[0].len(), each[1].len(), each[2].len()];
    DistanceCensus { n: triples.len(), distinct: all.into_iter().collect(), per_anchor, fibers, triples }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCount {
    pub q: u64,
    /// `n^2 / (2 kappa) - n/2`; `None` when `kappa = 0`.
    pub lower_bound: Option<Rational>,
}

impl PairCount {
    pub fn bound_holds(&self) -> bool {
        self.lower_bound.as_ref().is_none_or(|b| Rational::from_integer(self.q.into()) >= *b)
    }
}

pub fn pair_count_q(census: &DistanceCensus) -> PairCount {
    let q = census.fibers.values().map(|f| binomial2(f.len())).sum();
    let lower_bound = (census.kappa() > 0).then(|| {
        let n = int(census.n as i64);
        &n * &n / int(2 * census.kappa() as i64) - n / int(2)
    });
    PairCount { q, lower_bound }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqualPair {
    pub first: usize,
    pub second: usize,
    pub quad: Quadruple,
}

/// One entry per ordered pair of distinct points in a common fiber, in
/// fiber order then index order.
pub fn enumerate_equal_pairs(census: &DistanceCensus) -> Vec<EqualPair> {
    let fibers: Vec<&Vec<usize>> = census.fibers.values().filter(|f| f.len() > 1).collect();
    fibers
        .par_iter()
        .map(|fiber| {
            let mut out = Vec::with_capacity(fiber.len() * (fiber.len() - 1));
            for &i in fiber.iter() {
                for &j in fiber.iter() {
                    if i == j {
                        continue;
                    }
                    let (a, b) = (&census.triples[i], &census.triples[j]);
                    out.push(EqualPair {
                        first: i,
                        second: j,
                        quad: Quadruple::new(
                            a.to_p1.clone(),
                            a.to_p2.clone(),
                            b.to_p1.clone(),
                            b.to_p2.clone(),
                        ),
                    });
                }
            }
            out
        })
        .flatten()
        .collect()
}

/// JSON report of the `analyze` subcommand.
#[derive(Clone, Debug, Serialize)]
pub struct AnalyzeReport {
    pub n: usize,
    pub kappa: usize,
    #[serde(rename = "D")]
    pub distinct: Vec<String>,
    pub per_anchor_distinct: [usize; 3],
    /// `[Z, |P_Z|]` in increasing `Z`.
    pub fiber_sizes: Vec<(String, usize)>,
    #[serde(rename = "Q")]
    pub q: u64,
    pub ordered_pairs: usize,
    pub lower_bound: Option<String>,
    pub lower_bound_holds: bool,
    pub sanity_bound_ok: bool,
    pub scale: String,
}

pub fn analyze(config: &Configuration, scale: &Rational) -> AnalyzeReport {
    let census = build_census(config);
    let pc = pair_count_q(&census);
    let ordered = enumerate_equal_pairs(&census).len();
    AnalyzeReport {
        n: census.n(),
        kappa: census.kappa(),
        distinct: census.distinct().iter().map(format_rational).collect(),
        per_anchor_distinct: census.per_anchor(),
        fiber_sizes: census.fibers().iter().map(|(z, f)| (format_rational(z), f.len())).collect(),
        q: pc.q,
        ordered_pairs: ordered,
        lower_bound: pc.lower_bound.as_ref().map(format_rational),
        lower_bound_holds: pc.bound_holds(),
        sanity_bound_ok: census.sanity_bound_ok(),
        scale: format_rational(scale),
    }
}

/// `Q >= n^2/(2 kappa) - n/2` must hold on every instance; `true` when
/// `kappa = 0` (then `n = 0`).
pub fn lower_bound_holds(census: &DistanceCensus) -> bool {
    let pc = pair_count_q(census);
    pc.bound_holds() && (census.kappa() > 0 || census.n() == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational::rat;
    use crate::frame::{AnchorFrame, PlanePoint};

    fn config(points: &[(i64, i64)]) -> Configuration {
        Configuration::new(
            AnchorFrame::ints(0, 1),
            points.iter().map(|&(x, y)| PlanePoint::ints(x, y)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn four_point_census() {
        let c = build_census(&config(&[(0, 0), (1, 1), (-1, 1), (2, 0)]));
        assert_eq!(c.distinct(), &[int(1), int(5), int(9)]);
        assert_eq!(c.kappa(), 3);
        assert_eq!(c.fibers()[&int(1)], vec![0, 1, 2]);
        assert_eq!(c.fibers()[&int(5)], vec![3]);
        assert_eq!(c.fiber_sizes(), vec![3, 1]);
        let pc = pair_count_q(&c);
        assert_eq!(pc.q, 3);
        assert_eq!(pc.lower_bound, Some(rat(2, 3)));
        assert!(pc.bound_holds());
        assert_eq!(enumerate_equal_pairs(&c).len(), 6);
    }

    #[test]
    fn tiny_and_empty() {
        let c = build_census(&config(&[(0, 0)]));
        assert_eq!(c.distinct(), &[int(1)]);
        assert_eq!(pair_count_q(&c).q, 0);
        let e = build_census(&config(&[]));
        assert_eq!(e.kappa(), 0);
        assert_eq!(pair_count_q(&e).lower_bound, None);
        assert!(enumerate_equal_pairs(&e).is_empty());
        assert!(lower_bound_holds(&e));
    }

    #[test]
    fn ordered_pairs_in_one_fiber() {
        let c = build_census(&config(&[(1, 1), (-1, 1)]));
        let pairs = enumerate_equal_pairs(&c);
        assert_eq!(pairs.len(), 2);
        assert_eq!(pairs[0].quad, Quadruple::ints(1, 5, 5, 1));
        assert_eq!(pairs[1].quad, Quadruple::ints(5, 1, 1, 5));
        assert_eq!((pairs[0].first, pairs[0].second), (0, 1));
    }

    #[test]
    fn singleton_fibers_have_no_pairs() {
        // p3-distances 1, 5, 9+... all distinct
        let c = build_census(&config(&[(0, 0), (2, 0), (0, 5)]));
        assert!(c.fiber_sizes().iter().all(|&s| s == 1));
        assert_eq!(pair_count_q(&c).q, 0);
        assert!(enumerate_equal_pairs(&c).is_empty());
    }

    #[test]
    fn single_fiber_pair_count() {
        // points on the circle of radius 5 around p3 = (0,1)
        let c = build_census(&config(&[(3, 5), (-3, 5), (4, 4), (-4, 4), (5, 1)]));
        assert_eq!(c.fiber_sizes(), vec![5]);
        assert_eq!(pair_count_q(&c).q, 10);
    }
}
