//! Invariant suite at fixed seeds plus golden-file comparison.

use std::path::Path;

use num_traits::Signed;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::{grid, grid_scan_spec, random_rational, run_scaling, search_min_kappa, task_rng, SearchSpec};
use crate::census::{build_census, enumerate_equal_pairs, pair_count_q};
use crate::curvefam::{
    all_curves, build_curve, collinear_diagnostics, coincidence_groups, dual_membership, membership_closed,
    overlap_audit, recover_from_extremal, recovery_audit, reconstruct_witnesses, RecoveryCounts,
};
use crate::error::{Error, Result};
use crate::exactmath::default_tolerance;
use crate::exactmath::rational::{format_rational, int, rat, Rational};
use crate::frame::{AnchorFrame, Configuration, PlanePoint};
use crate::incidence::{build_and_count, verify_chain};
use crate::zfcore::{incidence_lower_bound, TriPoly, ZfInstance};

const FILES: [&str; 5] = [
    "scan_grid.csv",
    "overlap_d15.json",
    "incidence_d15.json",
    "recovery_suite.json",
    "search_n4_m3.json",
];

/// Reference outputs, one string per file in `golden/`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Goldens {
    pub files: Vec<(String, String)>,
}

impl Goldens {
    /// The copies compiled into the binary.
    pub fn embedded() -> Self {
        let texts = [
            include_str!("../../golden/scan_grid.csv"),
            include_str!("../../golden/overlap_d15.json"),
            include_str!("../../golden/incidence_d15.json"),
            include_str!("../../golden/recovery_suite.json"),
            include_str!("../../golden/search_n4_m3.json"),
        ];
        Goldens { files: FILES.iter().zip(texts).map(|(n, t)| (n.to_string(), t.to_string())).collect() }
    }

    pub fn from_dir(dir: &Path) -> Result<Self> {
        let files = FILES
            .iter()
            .map(|n| Ok((n.to_string(), std::fs::read_to_string(dir.join(n))?)))
            .collect::<Result<_>>()?;
        Ok(Goldens { files })
    }

    /// Recomputes every golden output.
    pub fn compute() -> Result<Self> {
        let texts = [
            run_scaling(&grid_scan_spec())?.to_csv(),
            overlap_d15()?,
            incidence_d15()?,
            recovery_suite_json()?,
            search_golden()?,
        ];
        Ok(Goldens { files: FILES.iter().zip(texts).map(|(n, t)| (n.to_string(), t)).collect() })
    }

    pub fn write_to(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        for (name, text) in &self.files {
            std::fs::write(dir.join(name), text)?;
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.files.iter().find(|(n, _)| n == name).map(|(_, t)| t.as_str())
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

/// `P = {(1,1), (-1,1)}` in frame `(0,1)`, so `D = {1, 5}`.
pub fn d15_config() -> Configuration {
    Configuration::new(AnchorFrame::ints(0, 1), vec![PlanePoint::ints(1, 1), PlanePoint::ints(-1, 1)])
        .expect("valid")
}

fn overlap_d15() -> Result<String> {
    let curves = all_curves(&d15_config())?;
    let label = |i: usize| [format_rational(curves[i].x()), format_rational(curves[i].v())];
    let groups = coincidence_groups(&curves)?;
    let audit = overlap_audit(&curves)?;
    Ok(pretty(&json!({
        "groups": groups.groups.iter().map(|g| g.iter().map(|&i| label(i)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "shared_factors": audit.factors.iter().map(|f| json!({
            "factor": f.factor.to_string_in("Y", "U"),
            "curves": f.members.iter().map(|&i| label(i)).collect::<Vec<_>>(),
            "containing": f.members.len(),
        })).collect::<Vec<_>>(),
        "max_containing": audit.max_containing(),
    })))
}

fn incidence_d15() -> Result<String> {
    let inst = build_and_count(&d15_config(), false)?;
    let quads: Vec<[String; 4]> = inst
        .incident_quadruples()
        .iter()
        .map(|q| [&q.x, &q.y, &q.u, &q.v].map(format_rational))
        .collect();
    Ok(pretty(&json!({ "I": inst.incidences(), "quadruples": quads })))
}

/// Curves `(frame a, frame b, X, V)` whose extremal points feed recovery.
pub fn recovery_suite() -> Vec<(Rational, Rational, Rational, Rational)> {
    vec![
        (int(0), int(1), int(1), int(5)),
        (int(0), int(1), int(5), int(1)),
        (int(0), int(1), int(2), int(3)),
        (int(0), int(1), int(4), int(4)),
        (rat(1, 3), rat(3, 2), int(2), int(3)),
        (rat(1, 3), rat(3, 2), int(5), int(2)),
        (int(2), int(1), int(3), int(7)),
        (int(-1), int(2), int(2), int(5)),
    ]
}

pub fn recovery_suite_counts() -> Result<Vec<RecoveryCounts>> {
    let tol = default_tolerance();
    recovery_suite()
        .par_iter()
        .map(|(a, b, x, v)| {
            let curve = build_curve(&AnchorFrame::new(a.clone(), b.clone()), x, v)?;
            Ok(recovery_audit(&curve, &tol)?.0)
        })
        .collect()
}

fn recovery_suite_json() -> Result<String> {
    let rows: Vec<serde_json::Value> = recovery_suite()
        .iter()
        .zip(recovery_suite_counts()?)
        .map(|((a, b, x, v), c)| {
            let frame = [a, b].map(format_rational);
            let curve = [x, v].map(format_rational);
            json!({"frame": frame, "curve": curve, "counts": c})
        })
        .collect();
    Ok(pretty(&serde_json::Value::Array(rows)))
}

/// `n = 4` in `[-3, 3]^2`, seed 42.
pub fn search_golden_spec() -> SearchSpec {
    SearchSpec::new(4, 3, 42)
}

fn search_golden() -> Result<String> {
    let res = search_min_kappa(&search_golden_spec())?;
    Ok(pretty(&json!({ "kappa_best": res.kappa_best, "Q_best": res.q_best })))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    /// Counterexample or diff on failure.
    pub detail: String,
}

impl Check {
    fn new(name: &str, result: Result<Option<String>>) -> Self {
        match result {
            Ok(None) => Check { name: name.into(), ok: true, detail: String::new() },
            Ok(Some(detail)) => Check { name: name.into(), ok: false, detail },
            Err(e) => Check { name: name.into(), ok: false, detail: format!("error: {e}") },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub checks: Vec<Check>,
}

impl SelftestReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

fn diff(name: &str, expected: &str, actual: &str) -> String {
    similar::TextDiff::from_lines(expected, actual)
        .unified_diff()
        .header(&format!("golden/{name}"), "computed")
        .to_string()
}

fn corpus() -> Result<Vec<Configuration>> {
    let frame = AnchorFrame::ints(0, 1);
    let mut out: Vec<Configuration> = (2..=5).map(|m| grid(&frame, m)).collect::<Result<_>>()?;
    for k in 0..12u64 {
        let mut rng = task_rng(1, k);
        out.push(random_rational(&frame, 4 + 2 * k as usize, 4, 2, &mut rng)?);
    }
    for (i, other) in [AnchorFrame::new(rat(1, 3), rat(3, 2)), AnchorFrame::ints(2, 1)].iter().enumerate() {
        for k in 0..4u64 {
            out.push(random_rational(other, 6 + k as usize, 3, 1, &mut task_rng(2 + i as u64, k))?);
        }
    }
    Ok(out)
}

fn first_failure<T: Sync>(items: &[T], f: impl Fn(&T) -> Result<Option<String>> + Sync + Send) -> Result<Option<String>> {
    let found: Vec<Option<String>> = items.par_iter().map(f).collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().next())
}

fn check_pair_identity(corpus: &[Configuration]) -> Result<Option<String>> {
    first_failure(corpus, |c| {
        let census = build_census(c);
        let pc = pair_count_q(&census);
        let ordered = enumerate_equal_pairs(&census).len() as u64;
        Ok((2 * pc.q != ordered || !pc.bound_holds() || !census.sanity_bound_ok())
            .then(|| format!("n={} kappa={} Q={} ordered={}", c.len(), census.kappa(), pc.q, ordered)))
    })
}

fn check_equal_pairs(corpus: &[Configuration]) -> Result<Option<String>> {
    first_failure(corpus, |c| {
        let census = build_census(c);
        for p in enumerate_equal_pairs(&census) {
            let q = &p.quad;
            let witnesses = reconstruct_witnesses(c.frame(), q)?;
            let (q1, q2) = (&c.points()[p.first], &c.points()[p.second]);
            let found = witnesses.iter().any(|w| w.q1_is(q1) && w.q2_is(q2));
            if !membership_closed(c.frame(), q) || witnesses.len() > 4 || !found {
                let qs = [&q.x, &q.y, &q.u, &q.v].map(format_rational).join(",");
                return Ok(Some(format!("quadruple ({qs}) from points {} and {}", p.first, p.second)));
            }
        }
        Ok(None)
    })
}

fn small_rational(rng: &mut impl Rng, range: i64) -> Rational {
    let q = rng.gen_range(1..=3);
    rat(rng.gen_range(-range * q..=range * q), q)
}

fn check_duality() -> Result<Option<String>> {
    let mut rng = task_rng(3, 0);
    for _ in 0..200 {
        let (a, b) = (small_rational(&mut rng, 3), small_rational(&mut rng, 3));
        if b == int(0) {
            continue;
        }
        let frame = AnchorFrame::new(a, b);
        // half the tuples come from real pairs, so members are exercised
        let (x, y, u, v) = if rng.gen_bool(0.5) {
            let p = PlanePoint::new(small_rational(&mut rng, 4), small_rational(&mut rng, 4));
            let [p1, p2, p3] = frame.anchors();
            let r = p.dist_sq(&p3);
            let t = small_rational(&mut rng, 4);
            // second point on the same circle around p3: rotate by a rational angle
            let (cos, sin) = ((&int(1) - &t * &t) / (&int(1) + &t * &t), (int(2) * &t) / (&int(1) + &t * &t));
            let (dx, dy) = (&p.x - &p3.x, &p.y - &p3.y);
            let q = PlanePoint::new(&p3.x + &cos * &dx - &sin * &dy, &p3.y + &sin * &dx + &cos * &dy);
            debug_assert_eq!(q.dist_sq(&p3), r);
            if p == p1 || p == p2 || q == p1 || q == p2 {
                continue;
            }
            (p.dist_sq(&p1), p.dist_sq(&p2), q.dist_sq(&p1), q.dist_sq(&p2))
        } else {
            let mut nn = || small_rational(&mut rng, 6).abs();
            (nn(), nn(), nn(), nn())
        };
        let q = crate::census::Quadruple::new(x.clone(), y.clone(), u.clone(), v.clone());
        if membership_closed(&frame, &q) != dual_membership(&frame, &y, &u, &x, &v) {
            return Ok(Some(format!("frame {:?} quadruple {:?}", frame, q)));
        }
    }
    Ok(None)
}

fn check_degrees() -> Result<Option<String>> {
    let mut rng = task_rng(4, 0);
    for _ in 0..20 {
        let (a, b) = (small_rational(&mut rng, 3), small_rational(&mut rng, 3));
        if b == int(0) || a == int(1) || a == int(-1) {
            continue;
        }
        let (x, v) = (small_rational(&mut rng, 5).abs(), small_rational(&mut rng, 5).abs());
        let c = build_curve(&AnchorFrame::new(a, b), &x, &v)?;
        if c.h().deg_first() != 4 || c.h().deg_second() != 4 {
            return Ok(Some(format!("curve ({x}, {v}) in frame {:?}", c.frame())));
        }
    }
    for _ in 0..20 {
        let a = small_rational(&mut rng, 3);
        if a == int(-1) {
            continue;
        }
        let (x, v) = (small_rational(&mut rng, 5).abs(), small_rational(&mut rng, 5).abs());
        let report = collinear_diagnostics(&AnchorFrame::new(a.clone(), int(0)), &x, &v)?;
        let slope_ok = match &report.line {
            crate::curvefam::CollinearLine::Sloped { slope, .. } => *slope == (&int(1) - &a) / (&int(1) + &a),
            crate::curvefam::CollinearLine::Vertical { .. } => false,
        };
        if !report.multiplicity_four || !slope_ok {
            return Ok(Some(format!("collinear frame a={a} curve ({x}, {v})")));
        }
    }
    Ok(None)
}

fn check_overlap(corpus: &[Configuration]) -> Result<Option<String>> {
    let small: Vec<&Configuration> =
        corpus.iter().filter(|c| !c.frame().is_collinear() && build_census(c).kappa() <= 12).collect();
    first_failure(&small, |c| {
        let curves = all_curves(c)?;
        let groups = coincidence_groups(&curves)?;
        let audit = overlap_audit(&curves)?;
        let isosceles = c.frame().a == int(0);
        for f in audit.factors.iter().filter(|f| f.members.len() > 4) {
            // with p3 on the bisector of p1p2 the mirror image of q1 keeps
            // |p3 q|, so Y = U lies on every curve with X = V
            let diagonal: Vec<usize> = (0..curves.len()).filter(|&i| curves[i].x() == curves[i].v()).collect();
            let mirror = isosceles && f.factor.to_string_in("Y", "U") == "Y - U" && f.members == diagonal;
            if !mirror {
                return Ok(Some(format!(
                    "n={} factor {} in {} curves",
                    c.len(),
                    f.factor.to_string_in("Y", "U"),
                    f.members.len()
                )));
            }
        }
        Ok((groups.max_size() > 4).then(|| format!("n={} coincidence group of {}", c.len(), groups.max_size())))
    })
}

fn check_chain(corpus: &[Configuration]) -> Result<Option<String>> {
    let single = Configuration::new(AnchorFrame::ints(0, 1), vec![PlanePoint::ints(0, 0)])?;
    let inst = build_and_count(&single, false)?;
    if inst.incidences() != 1 {
        return Ok(Some(format!("single point gives I = {}", inst.incidences())));
    }
    let small: Vec<&Configuration> = corpus.iter().filter(|c| build_census(c).kappa() <= 25).collect();
    first_failure(&small, |c| {
        let census = build_census(c);
        let report = verify_chain(&build_and_count(c, false)?, &census);
        Ok((!report.ok()).then(|| format!("n={} kappa={} Q={} I={}", c.len(), report.kappa, report.q, report.i)))
    })
}

fn check_zf() -> Result<Option<String>> {
    let f = TriPoly::from_ints(&[(1, 0, 0, 1), (0, 1, 0, 1), (0, 0, 1, -1)]);
    let inst = ZfInstance::new(f, vec![int(1), int(2)], vec![int(1), int(2)], vec![int(2), int(3), int(4)]);
    let r = incidence_lower_bound(&inst)?;
    let sizes: Vec<usize> = r.fibers.iter().map(|f| f.1).collect();
    let expected = r.m == 4 && sizes == [1, 2, 1] && r.i == 6 && r.bound_fibers.as_deref() == Some("6") && r.ok();
    Ok((!expected).then(|| format!("M={} fibers={:?} I={}", r.m, sizes, r.i)))
}

fn check_recovery_branches() -> Result<Option<String>> {
    let rec = recover_from_extremal(&AnchorFrame::ints(-1, 2), &int(3), &int(7))?;
    let single = rec.v_values.len() == 1 && rec.v_values[0].contains(&int(3));
    if !single || rec.candidates.len() > 4 {
        return Ok(Some(format!("a = -1 branch returned {} V values", rec.v_values.len())));
    }
    Ok(None)
}

fn check_search() -> Result<Option<String>> {
    let res = search_min_kappa(&SearchSpec::new(1, 3, 0))?;
    if res.kappa_best != 1 {
        return Ok(Some(format!("n = 1 search reached kappa {}", res.kappa_best)));
    }
    let res = search_min_kappa(&SearchSpec { steps: 300, ..SearchSpec::new(12, 4, 5) })?;
    let k = res.kappa_best as u64;
    Ok((12 > 2 * k * k).then(|| format!("n = 12 search reached kappa {k}")))
}

/// Runs the invariant suite and compares `goldens` against fresh output.
/// `threads` sizes a private pool; the report does not depend on it.
pub fn selftest(goldens: &Goldens, threads: Option<usize>) -> Result<SelftestReport> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    pool.install(|| run_checks(goldens))
}

fn run_checks(goldens: &Goldens) -> Result<SelftestReport> {
    let corpus = corpus()?;
    let mut checks = vec![
        Check::new("pair count identity and lower bound", check_pair_identity(&corpus)),
        Check::new("equal pairs are members with witnesses", check_equal_pairs(&corpus)),
        Check::new("duality", check_duality()),
        Check::new("degree four and collinear degeneration", check_degrees()),
        Check::new("component sharing at most 4 apart from the mirror line", check_overlap(&corpus)),
        Check::new("incidence chain", check_chain(&corpus)),
        Check::new("zero count example", check_zf()),
        Check::new("recovery branches", check_recovery_branches()),
        Check::new("search sanity", check_search()),
    ];
    match Goldens::compute() {
        Ok(fresh) => {
            for (name, actual) in &fresh.files {
                let result = match goldens.get(name) {
                    None => Ok(Some("missing golden file".to_string())),
                    Some(expected) if expected == actual => Ok(None),
                    Some(expected) => Ok(Some(diff(name, expected, actual))),
                };
                checks.push(Check::new(&format!("golden {name}"), result));
            }
        }
        Err(e) => checks.push(Check::new("golden files", Err(e))),
    }
    Ok(SelftestReport { checks })
}
