//! Incidences between the points `Pi = D^2` and the labeled curves
//! `Gamma = {gamma_{X,V} : X, V in D}`.

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::census::{build_census, enumerate_equal_pairs, pair_count_q, DistanceCensus, Quadruple};
use crate::curvefam::{h_value, membership, overlap_audit, CurvePoly};
use crate::error::{Error, Result};
use crate::exactmath::rational::{format_rational, int, Rational};
use crate::frame::{AnchorFrame, Configuration};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceInstance {
    frame: AnchorFrame,
    d: Vec<Rational>,
    incident: Vec<Quadruple>,
}

impl IncidenceInstance {
    pub fn frame(&self) -> &AnchorFrame {
        &self.frame
    }

    pub fn kappa(&self) -> usize {
        self.d.len()
    }

    pub fn distinct(&self) -> &[Rational] {
        &self.d
    }

    /// `I`.
    pub fn incidences(&self) -> usize {
        self.incident.len()
    }

    /// Sorted by `(X, Y, U, V)`.
    pub fn incident_quadruples(&self) -> &[Quadruple] {
        &self.incident
    }

    pub fn is_incident(&self, q: &Quadruple) -> bool {
        self.incident.binary_search(q).is_ok()
    }

    /// The points `(Y, U)` of `Pi`.
    pub fn points(&self) -> impl Iterator<Item = (&Rational, &Rational)> + '_ {
        self.d.iter().flat_map(move |y| self.d.iter().map(move |u| (y, u)))
    }

    /// The curves of `Gamma`, in label order.
    pub fn curves(&self) -> Result<Vec<CurvePoly>> {
        self.d
            .iter()
            .flat_map(|x| self.d.iter().map(move |v| (x, v)))
            .map(|(x, v)| crate::curvefam::build_curve(&self.frame, x, v))
            .collect()
    }
}

/// Brute force over `D^4` using tables of `A(X, Y)` and `B(V, U)`.
pub fn count_over(frame: &AnchorFrame, d: &[Rational]) -> Vec<Quadruple> {
    let k = d.len();
    let quarter = |p: &Rational, q: &Rational| (p - q) / int(4);
    // A[i][j] = A(X = d_i, Y = d_j), xq[i][j] = (d_j - d_i)/4
    let xq: Vec<Vec<Rational>> = (0..k).map(|i| (0..k).map(|j| quarter(&d[j], &d[i])).collect()).collect();
    let a_tab: Vec<Vec<Rational>> = (0..k)
        .map(|i| (0..k).map(|j| &d[i] - (&xq[i][j] - int(1)) * (&xq[i][j] - int(1))).collect())
        .collect();
    // B[l][m] = B(V = d_l, U = d_m), uq[l][m] = (d_l - d_m)/4
    let uq: Vec<Vec<Rational>> = (0..k).map(|l| (0..k).map(|m| quarter(&d[l], &d[m])).collect()).collect();
    let b_tab: Vec<Vec<Rational>> = (0..k)
        .map(|l| (0..k).map(|m| &d[l] - (&uq[l][m] + int(1)) * (&uq[l][m] + int(1))).collect())
        .collect();
    let one_minus_a = int(1) - &frame.a;
    let one_plus_a = int(1) + &frame.a;
    (0..k)
        .into_par_iter()
        .map(|i| {
            let mut out = Vec::new();
            for j in 0..k {
                let a = &a_tab[i][j];
                if a.is_negative() {
                    continue;
                }
                let rx = &one_minus_a * &xq[i][j];
                for m in 0..k {
                    for l in 0..k {
                        let b = &b_tab[l][m];
                        if b.is_negative() {
                            continue;
                        }
                        let r = (&d[l] - &d[i]) / int(2) - &rx - &one_plus_a * &uq[l][m];
                        if h_value(&frame.b, a, b, &r).is_zero() {
                            out.push(Quadruple::new(d[i].clone(), d[j].clone(), d[m].clone(), d[l].clone()));
                        }
                    }
                }
            }
            out
        })
        .flatten()
        .collect()
}

/// The same count through the curve polynomials.
pub fn count_via_curves(frame: &AnchorFrame, d: &[Rational]) -> Result<Vec<Quadruple>> {
    let curves: Vec<CurvePoly> = d
        .iter()
        .flat_map(|x| d.iter().map(move |v| (x, v)))
        .map(|(x, v)| crate::curvefam::build_curve(frame, x, v))
        .collect::<Result<_>>()?;
    let mut out: Vec<Quadruple> = curves
        .par_iter()
        .flat_map_iter(|c| {
            d.iter()
                .flat_map(move |y| d.iter().map(move |u| (y, u)))
                .filter(move |(y, u)| membership(c, y, u))
                .map(move |(y, u)| Quadruple::new(c.x().clone(), y.clone(), u.clone(), c.v().clone()))
        })
        .collect();
    out.sort();
    Ok(out)
}

pub fn build_and_count(config: &Configuration, collinear_diagnostics: bool) -> Result<IncidenceInstance> {
    config.frame().require_noncollinear(collinear_diagnostics)?;
    let census = build_census(config);
    let d = census.distinct().to_vec();
    let incident = count_over(config.frame(), &d);
    debug_assert!(incident.windows(2).all(|w| w[0] < w[1]));
    Ok(IncidenceInstance { frame: config.frame().clone(), d, incident })
}

/// Like [`build_and_count`], refusing `kappa > cap`.
pub fn build_and_count_capped(config: &Configuration, collinear_diagnostics: bool, cap: usize) -> Result<IncidenceInstance> {
    let kappa = build_census(config).kappa();
    if kappa > cap {
        return Err(Error::KappaCap { kappa, cap });
    }
    build_and_count(config, collinear_diagnostics)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainChecks {
    /// `2Q <= 4I`.
    pub ordered_pairs_within_4i: bool,
    /// `Q >= n^2/(2 kappa) - n/2`.
    pub pair_lower_bound: bool,
    /// Every equal-pair quadruple is incident.
    pub pairs_incident: bool,
    /// `(X,Y,U,V)` incident iff `(U,V,X,Y)` incident.
    pub swap_symmetric: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainReport {
    pub n: usize,
    pub kappa: usize,
    #[serde(rename = "Q")]
    pub q: u64,
    #[serde(rename = "I")]
    pub i: usize,
    pub lower_bound: Option<String>,
    pub checks: ChainChecks,
    pub ratio_i_over_kappa_8_3: Option<f64>,
    /// Counterexamples, as `[X, Y, U, V]` strings.
    pub missing_quadruples: Vec<[String; 4]>,
    pub asymmetric_quadruples: Vec<[String; 4]>,
}

impl ChainReport {
    pub fn ok(&self) -> bool {
        let c = &self.checks;
        c.ordered_pairs_within_4i && c.pair_lower_bound && c.pairs_incident && c.swap_symmetric
    }
}

fn quad_strings(q: &Quadruple) -> [String; 4] {
    [&q.x, &q.y, &q.u, &q.v].map(format_rational)
}

pub fn verify_chain(instance: &IncidenceInstance, census: &DistanceCensus) -> ChainReport {
    let pc = pair_count_q(census);
    let i = instance.incidences();
    let pairs = enumerate_equal_pairs(census);
    let missing: Vec<[String; 4]> =
        pairs.iter().filter(|p| !instance.is_incident(&p.quad)).map(|p| quad_strings(&p.quad)).collect();
    let asymmetric: Vec<[String; 4]> = instance
        .incident
        .par_iter()
        .filter(|q| !instance.is_incident(&q.swapped()))
        .map(quad_strings)
        .collect();
    let kappa = instance.kappa();
    ChainReport {
        n: census.n(),
        kappa,
        q: pc.q,
        i,
        lower_bound: pc.lower_bound.as_ref().map(format_rational),
        checks: ChainChecks {
            ordered_pairs_within_4i: 2 * pc.q <= 4 * i as u64,
            pair_lower_bound: pc.bound_holds(),
            pairs_incident: missing.is_empty(),
            swap_symmetric: asymmetric.is_empty(),
        },
        ratio_i_over_kappa_8_3: (kappa > 0).then(|| i as f64 / (kappa as f64).powf(8.0 / 3.0)),
        missing_quadruples: missing,
        asymmetric_quadruples: asymmetric,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorCount {
    pub factor: String,
    pub curves: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicityReport {
    pub curves: usize,
    pub distinct_curves: usize,
    /// `histogram[k]` = number of coincidence groups of size `k`.
    pub histogram: Vec<usize>,
    pub max_group_size: usize,
    pub shared_factors: Vec<FactorCount>,
    pub max_containing: usize,
    /// Only asserted for `b != 0`.
    pub bound_ok: bool,
}

pub fn multiplicity_report(instance: &IncidenceInstance) -> Result<MultiplicityReport> {
    let curves = instance.curves()?;
    let audit = overlap_audit(&curves)?;
    let max_group = audit.groups.max_size();
    let max_containing = audit.max_containing();
    let bound_ok = instance.frame.is_collinear() || (max_group <= 4 && max_containing <= 4);
    Ok(MultiplicityReport {
        curves: curves.len(),
        distinct_curves: audit.groups.groups.len(),
        histogram: audit.groups.histogram(),
        max_group_size: max_group,
        shared_factors: audit
            .factors
            .iter()
            .map(|f| FactorCount { factor: f.factor.to_string_in("Y", "U"), curves: f.members.len() })
            .collect(),
        max_containing,
        bound_ok,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IncidenceReport {
    pub kappa: usize,
    #[serde(rename = "I")]
    pub i: usize,
    #[serde(rename = "Q")]
    pub q: u64,
    pub chain_checks: ChainReport,
    pub multiplicity_histogram: MultiplicityReport,
    pub ratio_i_over_kappa_8_3: Option<f64>,
}

impl IncidenceReport {
    pub fn ok(&self) -> bool {
        self.chain_checks.ok() && self.multiplicity_histogram.bound_ok
    }
}

pub fn incidence_report(config: &Configuration, collinear_diagnostics: bool, cap: usize) -> Result<IncidenceReport> {
    let inst = build_and_count_capped(config, collinear_diagnostics, cap)?;
    let census = build_census(config);
    let chain = verify_chain(&inst, &census);
    let mult = multiplicity_report(&inst)?;
    Ok(IncidenceReport {
        kappa: inst.kappa(),
        i: inst.incidences(),
        q: chain.q,
        ratio_i_over_kappa_8_3: chain.ratio_i_over_kappa_8_3,
        chain_checks: chain,
        multiplicity_histogram: mult,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::PlanePoint;

    fn config(frame: AnchorFrame, pts: &[(i64, i64)]) -> Configuration {
        Configuration::new(frame, pts.iter().map(|&(x, y)| PlanePoint::ints(x, y)).collect()).unwrap()
    }

    #[test]
    fn single_point() {
        let c = config(AnchorFrame::ints(0, 1), &[(0, 0)]);
        let inst = build_and_count(&c, false).unwrap();
        assert_eq!(inst.incidences(), 1);
        assert_eq!(inst.incident_quadruples(), &[Quadruple::ints(1, 1, 1, 1)]);
        let rep = verify_chain(&inst, &build_census(&c));
        assert!(rep.ok());
        assert_eq!(rep.q, 0);
    }

    #[test]
    fn empty() {
        let c = config(AnchorFrame::ints(0, 1), &[]);
        let inst = build_and_count(&c, false).unwrap();
        assert_eq!(inst.incidences(), 0);
        assert!(verify_chain(&inst, &build_census(&c)).ok());
    }

    #[test]
    fn two_routes_agree() {
        let c = config(AnchorFrame::ints(0, 1), &[(1, 1), (-1, 1), (2, 0), (0, 3)]);
        let inst = build_and_count(&c, false).unwrap();
        let slow = count_via_curves(c.frame(), inst.distinct()).unwrap();
        assert_eq!(inst.incident_quadruples(), slow.as_slice());
        assert!(inst.is_incident(&Quadruple::ints(1, 5, 5, 1)));
        assert!(verify_chain(&inst, &build_census(&c)).ok());
    }

    #[test]
    fn collinear_needs_flag() {
        let c = config(AnchorFrame::ints(0, 0), &[(0, 1)]);
        assert_eq!(build_and_count(&c, false), Err(Error::CollinearFrame));
        assert!(build_and_count(&c, true).is_ok());
    }

    #[test]
    fn cap_enforced() {
        let c = config(AnchorFrame::ints(0, 1), &[(1, 1), (2, 0), (0, 3)]);
        assert!(matches!(build_and_count_capped(&c, false, 2), Err(Error::KappaCap { .. })));
    }
}
