//! Coincident curves, shared components and the resultant guard.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::{lead_u_constant, CurvePoly};
use crate::error::{Error, Result};
use crate::exactmath::rational::{rat, Rational};
use crate::exactmath::{gcd_bivariate, resultant_in_second_var, BiPoly, UniPoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoincidenceGroups {
    /// Curve indices per group, groups ordered by first member.
    pub groups: Vec<Vec<usize>>,
    pub group_of: Vec<usize>,
}

impl CoincidenceGroups {
    pub fn max_size(&self) -> usize {
        self.groups.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `histogram[k]` = number of groups of size `k`.
    pub fn histogram(&self) -> Vec<usize> {
        let mut h = vec![0; self.max_size() + 1];
        for g in &self.groups {
            h[g.len()] += 1;
        }
        h
    }
}

fn same_frame(curves: &[CurvePoly]) -> Result<()> {
    match curves.split_first() {
        Some((first, rest)) if rest.iter().any(|c| c.frame() != first.frame()) => Err(Error::MixedFrames),
        _ => Ok(()),
    }
}

/// Partitions curve labels by canonical `H`.
pub fn coincidence_groups(curves: &[CurvePoly]) -> Result<CoincidenceGroups> {
    same_frame(curves)?;
    let mut index: HashMap<&BiPoly, usize> = HashMap::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut group_of = Vec::with_capacity(curves.len());
    for (i, c) in curves.iter().enumerate() {
        let g = *index.entry(c.canonical()).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(i);
        group_of.push(g);
    }
    Ok(CoincidenceGroups { groups, group_of })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharedFactor {
    /// Squarefree, canonical.
    pub factor: BiPoly,
    /// Indices of every curve whose `H` it divides.
    pub members: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverlapAudit {
    pub groups: CoincidenceGroups,
    pub factors: Vec<SharedFactor>,
    pub pairs_screened: usize,
    pub exact_gcds: usize,
}

impl OverlapAudit {
    pub fn max_containing(&self) -> usize {
        self.factors.iter().map(|f| f.members.len()).max().unwrap_or(0)
    }

    /// Indices of curves sharing a component with curve `i`, excluding `i`.
    pub fn partners(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .factors
            .iter()
            .filter(|f| f.members.contains(&i))
            .flat_map(|f| f.members.iter().copied())
            .filter(|&j| j != i)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Product of the distinct irreducible factors.
fn squarefree(p: &BiPoly) -> BiPoly {
    if p.is_constant() {
        return p.canonical();
    }
    let g = gcd_bivariate(p, &gcd_bivariate(&p.partial_first(), &p.partial_second()));
    p.div_exact(&g).expect("gcd divides").canonical()
}

const P: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

fn reduce(r: &Rational) -> Option<u64> {
    let p = BigInt::from(P);
    let n = r.numer().mod_floor(&p).to_u64()?;
    let d = r.denom().mod_floor(&p).to_u64()?;
    (d != 0).then(|| mulmod(n, powmod(d, P - 2)))
}

/// `f mod P`, or `None` on bad reduction (a denominator or the leading
/// coefficient vanishes).
fn reduce_poly(f: &UniPoly) -> Option<Vec<u64>> {
    let out: Vec<u64> = f.coeffs().iter().map(reduce).collect::<Option<_>>()?;
    (out.last().is_some_and(|&c| c != 0)).then_some(out)
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn gcd_degree_mod(a: &[u64], b: &[u64]) -> usize {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let inv = powmod(*b.last().unwrap(), P - 2);
        while a.len() >= b.len() {
            let c = mulmod(*a.last().unwrap(), inv);
            let shift = a.len() - b.len();
            for (i, &bc) in b.iter().enumerate() {
                a[i + shift] = (a[i + shift] + P - mulmod(c, bc)) % P;
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// Pairwise component sharing between the distinct curves, and for every
/// shared factor the full set of curves containing it.
///
/// Pairs are screened by a gcd of `H(y0, U)` modulo a prime. Since the
/// leading coefficient of `H` in `U` is a nonzero constant (except for
/// `b = 0, a = -1`), a common factor of positive `U`-degree survives the
/// specialization, so a trivial modular gcd proves coprimality. Pairs that
/// pass the screen, or that cannot be screened, get an exact gcd.
pub fn overlap_audit(curves: &[CurvePoly]) -> Result<OverlapAudit> {
    let groups = coincidence_groups(curves)?;
    let reps: Vec<&BiPoly> = groups.groups.iter().map(|g| curves[g[0]].canonical()).collect();
    let screenable = curves.first().is_some_and(|c| lead_u_constant(c.frame()).is_some());
    let y0 = rat(104_729, 97);
    let images: Vec<Option<Vec<u64>>> = reps
        .par_iter()
        .map(|h| if screenable { reduce_poly(&h.subst_first(&y0)) } else { None })
        .collect();

    let mut candidates: Vec<BiPoly> = groups
        .groups
        .iter()
        .zip(&reps)
        .filter(|(g, _)| g.len() > 1)
        .map(|(_, h)| (*h).clone())
        .collect();

    let n = reps.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let pairs_screened = pairs.len();
    let survivors: Vec<(usize, usize)> = pairs
        .into_par_iter()
        .filter(|&(i, j)| match (&images[i], &images[j]) {
            (Some(a), Some(b)) => gcd_degree_mod(a, b) > 0,
            _ => true,
        })
        .collect();
    let exact_gcds = survivors.len();
    let shared: Vec<BiPoly> = survivors
        .par_iter()
        .map(|&(i, j)| gcd_bivariate(reps[i], reps[j]))
        .filter(|g| !g.is_constant())
        .collect();
    candidates.extend(shared);

    let mut factors: Vec<BiPoly> = candidates.par_iter().map(squarefree).collect();
    let mut seen = std::collections::HashSet::new();
    factors.retain(|f| seen.insert(f.clone()));

    let factors = factors
        .into_par_iter()
        .map(|factor| {
            let members = groups
                .groups
                .iter()
                .zip(&reps)
                .filter(|(_, h)| h.div_exact(&factor).is_some())
                .flat_map(|(g, _)| g.iter().copied())
                .collect::<Vec<_>>();
            let mut members = members;
            members.sort_unstable();
            SharedFactor { factor, members }
        })
        .collect();
    Ok(OverlapAudit { groups, factors, pairs_screened, exact_gcds })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuardResult {
    /// Degree of `Res_U(H1, H2)`; `None` when it vanishes identically.
    pub degree: Option<usize>,
    pub overlap: bool,
}

/// Eliminates `U` between two curves. A vanishing resultant means a common
/// component; otherwise the degree is at most 16.
pub fn intersection_guard(c1: &CurvePoly, c2: &CurvePoly) -> Result<GuardResult> {
    let res = resultant_in_second_var(c1.h(), c2.h())?;
    Ok(GuardResult { degree: res.degree(), overlap: res.is_zero() })
}

impl GuardResult {
    pub fn within_bezout(&self) -> bool {
        self.degree.is_some_and(|d| d <= 16)
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvefam::build_curve;
    use crate::exactmath::rational::int;
    use crate::frame::AnchorFrame;

    fn curves(frame: &AnchorFrame, labels: &[(i64, i64)]) -> Vec<CurvePoly> {
        labels.iter().map(|&(x, v)| build_curve(frame, &int(x), &int(v)).unwrap()).collect()
    }

    #[test]
    fn collinear_groups_by_difference() {
        let cs = curves(&AnchorFrame::ints(0, 0), &[(1, 3), (2, 4), (5, 7)]);
        let g = coincidence_groups(&cs).unwrap();
        assert_eq!(g.groups, vec![vec![0, 1, 2]]);
        let audit = overlap_audit(&cs).unwrap();
        assert_eq!(audit.factors.len(), 1);
        // the line U = Y - 2
        let line = BiPoly::linear(int(-2), int(1), int(-1)).canonical();
        assert_eq!(audit.factors[0].factor, line);
        assert_eq!(audit.factors[0].members, vec![0, 1, 2]);
    }

    #[test]
    fn distinct_groups() {
        let f = AnchorFrame::ints(0, 1);
        let cs = curves(&f, &[(1, 1), (1, 5)]);
        assert_eq!(coincidence_groups(&cs).unwrap().groups.len(), 2);
        assert_eq!(coincidence_groups(&cs[..1]).unwrap().max_size(), 1);
        let mixed = vec![cs[0].clone(), build_curve(&AnchorFrame::ints(0, 2), &int(1), &int(1)).unwrap()];
        assert_eq!(coincidence_groups(&mixed), Err(Error::MixedFrames));
    }

    #[test]
    fn duplicate_label_shares_everything() {
        let f = AnchorFrame::ints(0, 1);
        let cs = curves(&f, &[(1, 1), (1, 1), (5, 1)]);
        let audit = overlap_audit(&cs).unwrap();
        assert!(audit.factors.iter().any(|s| s.members == vec![0, 1]));
        assert!(audit.max_containing() <= 4);
        assert_eq!(audit.partners(0), vec![1]);
    }

    #[test]
    fn modular_screen_agrees_with_exact_gcd() {
        let f = AnchorFrame::new(rat(1, 3), rat(2, 3));
        let cs = curves(&f, &[(1, 2), (2, 5), (3, 3), (4, 1), (5, 9)]);
        let y0 = rat(104_729, 97);
        for i in 0..cs.len() {
            for j in i + 1..cs.len() {
                let a = reduce_poly(&cs[i].canonical().subst_first(&y0)).unwrap();
                let b = reduce_poly(&cs[j].canonical().subst_first(&y0)).unwrap();
                let exact = gcd_bivariate(cs[i].canonical(), cs[j].canonical());
                if gcd_degree_mod(&a, &b) == 0 {
                    assert!(exact.is_constant());
                }
            }
        }
    }

    #[test]
    fn guard() {
        let f = AnchorFrame::ints(0, 1);
        let cs = curves(&f, &[(1, 1), (1, 5)]);
        let g = intersection_guard(&cs[0], &cs[1]).unwrap();
        assert!(!g.overlap);
        assert!(g.within_bezout());
        let same = intersection_guard(&cs[0], &cs[0]).unwrap();
        assert!(same.overlap);
        assert_eq!(same.degree, None);
    }
}
