use rayon::prelude::*;
use serde::Serialize;

use super::{build_curve, intersection_guard, overlap_audit, CurvePoly};
use crate::census::build_census;
use crate::error::Result;
use crate::exactmath::rational::{format_rational, Rational};
use crate::frame::Configuration;

#[derive(Clone, Debug, Serialize)]
pub struct GuardEntry {
    pub with: [String; 2],
    pub degree: Option<usize>,
    pub overlap: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CurveEntry {
    pub label: [String; 2],
    /// `grid[i][j]` multiplies `Y^i U^j`.
    pub canonical: Vec<Vec<String>>,
    pub group: usize,
    pub overlap_partners: Vec<[String; 2]>,
    pub guard_degrees: Option<Vec<GuardEntry>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorEntry {
    pub factor: String,
    pub curves: Vec<[String; 2]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CurvesReport {
    pub kappa: usize,
    pub curve_count: usize,
    pub distinct_curves: usize,
    pub max_group_size: usize,
    pub shared_factors: Vec<FactorEntry>,
    pub max_containing: usize,
    /// Degrees of `Res_U` stay within 16 and vanish only for overlapping
    /// pairs; `None` when guards were skipped.
    pub guard_ok: Option<bool>,
    /// `b != 0` requires every containing set to have at most 4 curves.
    pub overlap_bound_ok: bool,
    pub curves: Vec<CurveEntry>,
}

fn label(x: &Rational, v: &Rational) -> [String; 2] {
    [format_rational(x), format_rational(v)]
}

/// All `kappa^2` curves over `D`, labeled `(X, V)` in lexicographic order.
pub fn all_curves(config: &Configuration) -> Result<Vec<CurvePoly>> {
    let census = build_census(config);
    let d = census.distinct();
    let labels: Vec<(&Rational, &Rational)> = d.iter().flat_map(|x| d.iter().map(move |v| (x, v))).collect();
    labels.into_par_iter().map(|(x, v)| build_curve(config.frame(), x, v)).collect()
}

/// Per-curve data; resultant guards only when `kappa <= guard_cap`.
pub fn curves_report(config: &Configuration, guard_cap: usize) -> Result<CurvesReport> {
    let curves = all_curves(config)?;
    let kappa = build_census(config).kappa();
    let audit = overlap_audit(&curves)?;
    let n = curves.len();
    let guards = if kappa <= guard_cap {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let res = pairs
            .par_iter()
            .map(|&(i, j)| intersection_guard(&curves[i], &curves[j]).map(|g| (i, j, g)))
            .collect::<Result<Vec<_>>>()?;
        Some(res)
    } else {
        None
    };
    let guard_ok = guards.as_ref().map(|gs| {
        gs.iter().all(|(i, j, g)| {
            let shares = audit.groups.group_of[*i] == audit.groups.group_of[*j] || audit.partners(*i).contains(j);
            if g.overlap {
                shares
            } else {
                g.within_bezout()
            }
        })
    });
    let entries = curves
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let guard_degrees = guards.as_ref().map(|gs| {
                gs.iter()
                    .filter(|(a, b, _)| *a == i || *b == i)
                    .map(|(a, b, g)| {
                        let other = &curves[if *a == i { *b } else { *a }];
                        GuardEntry { with: label(other.x(), other.v()), degree: g.degree, overlap: g.overlap }
                    })
                    .collect()
            });
            CurveEntry {
                label: label(c.x(), c.v()),
                canonical: c.canonical().grid().iter().map(|r| r.iter().map(format_rational).collect()).collect(),
                group: audit.groups.group_of[i],
                overlap_partners: audit.partners(i).iter().map(|&j| label(curves[j].x(), curves[j].v())).collect(),
                guard_degrees,
            }
        })
        .collect();
    let max_containing = audit.max_containing();
    let collinear = config.frame().is_collinear();
    Ok(CurvesReport {
        kappa,
        curve_count: n,
        distinct_curves: audit.groups.groups.len(),
        max_group_size: audit.groups.max_size(),
        shared_factors: audit
            .factors
            .iter()
            .map(|f| FactorEntry {
                factor: f.factor.to_string_in("Y", "U"),
                curves: f.members.iter().map(|&j| label(curves[j].x(), curves[j].v())).collect(),
            })
            .collect(),
        max_containing,
        guard_ok,
        overlap_bound_ok: collinear || (audit.max_containing() <= 4 && audit.groups.max_size() <= 4),
        curves: entries,
    })
}
