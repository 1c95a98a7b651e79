//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use tridist::census::{build_census, enumerate_equal_pairs, pair_count_q, Quadruple};
use tridist::curvefam::{
    all_curves, build_curve, coincidence_groups, collinear_diagnostics, dual_membership, intersection_guard,
    membership_closed, overlap_audit, recover_from_extremal, reconstruct_witnesses, CollinearLine, CurvePoly,
};
use tridist::exactmath::{default_tolerance, int, rat, Rational};
use tridist::frame::{AnchorFrame, Configuration, PlanePoint};
use tridist::incidence::{build_and_count, verify_chain};
use tridist::lab::{
    d15_config, grid, grid_scan_spec, random_rational, recovery_suite, recovery_suite_counts, run_scaling,
    search_min_kappa, task_rng, Goldens, SearchSpec,
};
use tridist::zfcore::{degeneracy_check, incidence_lower_bound, TriPoly, ZfInstance};

const SEED: u64 = 20_240_611;

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn small(rng: &mut ChaCha8Rng, range: i64) -> Rational {
    let q = rng.gen_range(1..=3);
    rat(rng.gen_range(-range * q..=range * q), q)
}

fn random_frame(rng: &mut ChaCha8Rng) -> AnchorFrame {
    loop {
        let (a, b) = (small(rng, 3), small(rng, 3));
        if !b.is_zero() {
            return AnchorFrame::new(a, b);
        }
    }
}

/// 100 random rational configurations with `n <= 50` in random frames,
/// plus the `m x m` grids for `m = 2..=20` in frame `(0, 1)`.
fn corpus() -> Vec<Configuration> {
    let mut out: Vec<Configuration> = (0..100u64)
        .map(|k| {
            let mut rng = task_rng(SEED, k);
            let frame = if k % 2 == 0 { AnchorFrame::ints(0, 1) } else { random_frame(&mut rng) };
            let n = rng.gen_range(1..=50);
            random_rational(&frame, n, 5, 2, &mut rng).unwrap()
        })
        .collect();
    out.extend((2..=20).map(|m| grid(&AnchorFrame::ints(0, 1), m).unwrap()));
    out
}

fn criterion_1(corpus: &[Configuration]) -> Outcome {
    let bad: Vec<usize> = corpus
        .par_iter()
        .enumerate()
        .filter(|(_, c)| {
            let census = build_census(c);
            let pc = pair_count_q(&census);
            2 * pc.q as usize != enumerate_equal_pairs(&census).len() || !pc.bound_holds()
        })
        .map(|(i, _)| i)
        .collect();
    outcome(bad.is_empty(), format!("{} instances, failing {:?}", corpus.len(), bad))
}

fn criterion_2(corpus: &[Configuration]) -> Outcome {
    let results: Vec<(usize, Vec<String>)> = corpus
        .par_iter()
        .map(|c| {
            let census = build_census(c);
            let pairs = enumerate_equal_pairs(&census);
            let mut bad = Vec::new();
            for p in &pairs {
                let w = reconstruct_witnesses(c.frame(), &p.quad).unwrap_or_default();
                let (q1, q2) = (&c.points()[p.first], &c.points()[p.second]);
                if !membership_closed(c.frame(), &p.quad) || w.len() > 4 || !w.iter().any(|w| w.q1_is(q1) && w.q2_is(q2)) {
                    bad.push(format!("{:?}", p.quad));
                }
            }
            (pairs.len(), bad)
        })
        .collect();
    let pairs: usize = results.iter().map(|r| r.0).sum();
    let bad: Vec<&String> = results.iter().flat_map(|r| &r.1).collect();
    outcome(bad.is_empty(), format!("{pairs} ordered pairs, {} failures {:?}", bad.len(), bad.iter().take(3).collect::<Vec<_>>()))
}

fn criterion_3() -> Outcome {
    let mut rng = task_rng(SEED, 1000);
    let mut members = 0;
    let mut bad = Vec::new();
    for i in 0..1000 {
        let frame = random_frame(&mut rng);
        let p3 = PlanePoint::new(frame.a.clone(), frame.b.clone());
        // odd draws place q2 on the circle through q1 around p3
        let (x, y, u, v) = if i % 2 == 1 {
            let q1 = PlanePoint::new(small(&mut rng, 4), small(&mut rng, 4));
            let t = small(&mut rng, 4);
            let den = &int(1) + &t * &t;
            let (c, s) = ((&int(1) - &t * &t) / &den, (int(2) * &t) / &den);
            let (dx, dy) = (&q1.x - &p3.x, &q1.y - &p3.y);
            let q2 = PlanePoint::new(&p3.x + &c * &dx - &s * &dy, &p3.y + &s * &dx + &c * &dy);
            let [p1, p2, _] = frame.anchors();
            (q1.dist_sq(&p1), q1.dist_sq(&p2), q2.dist_sq(&p1), q2.dist_sq(&p2))
        } else {
            (small(&mut rng, 8), small(&mut rng, 8), small(&mut rng, 8), small(&mut rng, 8))
        };
        let q = Quadruple::new(x.clone(), y.clone(), u.clone(), v.clone());
        let m = membership_closed(&frame, &q);
        members += usize::from(m);
        if m != dual_membership(&frame, &y, &u, &x, &v) {
            bad.push(i);
        }
    }
    outcome(bad.is_empty(), format!("1000 tuples, {members} members, mismatches {bad:?}"))
}

fn criterion_4() -> Outcome {
    let mut rng = task_rng(SEED, 2000);
    let mut degree_bad = 0;
    let mut done = 0;
    while done < 100 {
        let frame = random_frame(&mut rng);
        if frame.a == int(1) || frame.a == int(-1) {
            continue;
        }
        let (x, v) = (small(&mut rng, 6).abs(), small(&mut rng, 6).abs());
        let c = build_curve(&frame, &x, &v).unwrap();
        degree_bad += usize::from(c.h().deg_first() != 4 || c.h().deg_second() != 4);
        done += 1;
    }
    let mut collinear_bad = 0;
    done = 0;
    while done < 100 {
        let a = small(&mut rng, 3);
        if a == int(-1) {
            continue;
        }
        let (x, v) = (small(&mut rng, 6).abs(), small(&mut rng, 6).abs());
        let r = collinear_diagnostics(&AnchorFrame::new(a.clone(), int(0)), &x, &v).unwrap();
        let slope_ok =
            matches!(&r.line, CollinearLine::Sloped { slope, .. } if *slope == (&int(1) - &a) / (&int(1) + &a));
        collinear_bad += usize::from(!r.multiplicity_four || !slope_ok);
        done += 1;
    }
    outcome(
        degree_bad == 0 && collinear_bad == 0,
        format!("degree failures {degree_bad}/100, collinear failures {collinear_bad}/100"),
    )
}

fn small_configs(count: u64, max_kappa: usize, stream: u64) -> Vec<Configuration> {
    let mut out = Vec::new();
    let mut k = 0;
    while out.len() < count as usize {
        let mut rng = task_rng(SEED + stream, k);
        let frame = if k % 2 == 0 { AnchorFrame::ints(0, 1) } else { random_frame(&mut rng) };
        let n = rng.gen_range(2..=5);
        let c = random_rational(&frame, n, 3, 1, &mut rng).unwrap();
        if build_census(&c).kappa() <= max_kappa {
            out.push(c);
        }
        k += 1;
    }
    out
}

fn criterion_5() -> Outcome {
    let suite = small_configs(100, 15, 5000);
    let over: Vec<(bool, usize, String)> = suite
        .par_iter()
        .filter_map(|c| {
            let curves = all_curves(c).unwrap();
            let g = coincidence_groups(&curves).unwrap();
            let audit = overlap_audit(&curves).unwrap();
            let worst = g.max_size().max(audit.max_containing());
            let names: Vec<String> = audit
                .factors
                .iter()
                .filter(|f| f.members.len() > 4)
                .map(|f| f.factor.to_string_in("Y", "U"))
                .collect();
            (worst > 4).then(|| (c.frame().a.is_zero(), worst, names.join(" ")))
        })
        .collect();
    let on_axis = over.iter().filter(|o| o.0).count();
    let only_mirror = over.iter().all(|o| o.0 && o.2 == "Y - U");
    // collinear grids: H depends on X - V only, so groups are keyed by it
    let mut keyed = true;
    let mut reach = true;
    for m in 2..=4 {
        let c = grid(&AnchorFrame::ints(0, 0), m).unwrap();
        let curves = all_curves(&c).unwrap();
        let g = coincidence_groups(&curves).unwrap();
        let kappa = build_census(&c).kappa();
        let mut diffs: Vec<Rational> = curves.iter().map(|c| c.x() - c.v()).collect();
        diffs.sort();
        diffs.dedup();
        keyed &= g.groups.len() == diffs.len()
            && g.groups.iter().all(|grp| grp.iter().all(|&i| curves[i].x() - curves[i].v() == curves[grp[0]].x() - curves[grp[0]].v()));
        reach &= 2 * g.max_size() >= kappa;
    }
    let detail = format!(
        "{} of 100 configurations exceed 4 ({} with a = 0; only the mirror line Y - U: {}), max {}; b = 0 grids keyed by X - V: {keyed}, reach kappa/2: {reach}",
        over.len(),
        on_axis,
        only_mirror,
        over.iter().map(|o| o.1).max().unwrap_or(0),
    );
    outcome(over.is_empty() && keyed && reach, detail)
}

fn criterion_6() -> Outcome {
    let mut rng = task_rng(SEED, 6000);
    let mut most = 0;
    for _ in 0..200 {
        let frame = random_frame(&mut rng);
        let rec = recover_from_extremal(&frame, &small(&mut rng, 9).abs(), &small(&mut rng, 9).abs()).unwrap();
        most = most.max(rec.candidates.len());
    }
    let mut branch_ok = true;
    for _ in 0..50 {
        let b = loop {
            let b = small(&mut rng, 3);
            if !b.is_zero() {
                break b;
            }
        };
        let u0 = &small(&mut rng, 6).abs() + int(4);
        let rec = recover_from_extremal(&AnchorFrame::new(int(-1), b), &small(&mut rng, 6).abs(), &u0).unwrap();
        branch_ok &= rec.v_values.len() == 1 && rec.v_values[0].contains(&(&u0 - int(4)));
        most = most.max(rec.candidates.len());
    }
    let frozen: serde_json::Value = serde_json::from_str(Goldens::embedded().get("recovery_suite.json").unwrap()).unwrap();
    let counts = recovery_suite_counts().unwrap();
    let golden_ok = frozen.as_array().unwrap().len() == recovery_suite().len()
        && frozen.as_array().unwrap().iter().zip(&counts).all(|(row, c)| row["counts"] == serde_json::to_value(c).unwrap());
    let hits: usize = counts.iter().map(|c| c.geometric_hits).sum();
    let points: usize = counts.iter().map(|c| c.points).sum();
    outcome(
        most <= 4 && branch_ok && golden_ok && default_tolerance() == rat(1, 1 << 40),
        format!("max candidates {most}, a = -1 branch ok {branch_ok}, suite counts match golden {golden_ok} ({hits}/{points} extremal points recover the label)"),
    )
}

fn criterion_7() -> Outcome {
    let suite = small_configs(12, 10, 7000);
    let results: Vec<(usize, usize, usize)> = suite
        .par_iter()
        .map(|c| {
            let curves: Vec<CurvePoly> = all_curves(c).unwrap();
            let audit = overlap_audit(&curves).unwrap();
            let n = curves.len();
            let (mut checked, mut zero, mut bad) = (0, 0, 0);
            for i in 0..n {
                for j in i + 1..n {
                    if audit.groups.group_of[i] == audit.groups.group_of[j] {
                        continue;
                    }
                    let g = intersection_guard(&curves[i], &curves[j]).unwrap();
                    checked += 1;
                    if g.overlap {
                        zero += 1;
                        bad += usize::from(!audit.partners(i).contains(&j));
                    } else {
                        bad += usize::from(!g.within_bezout());
                    }
                }
            }
            (checked, zero, bad)
        })
        .collect();
    let (checked, zero, bad) = results.iter().fold((0, 0, 0), |a, r| (a.0 + r.0, a.1 + r.1, a.2 + r.2));
    outcome(bad == 0, format!("{checked} pairs, {zero} vanishing resultants all flagged, {bad} violations"))
}

fn criterion_8(corpus: &[Configuration]) -> Outcome {
    let start = Instant::now();
    let eligible: Vec<&Configuration> = corpus.iter().filter(|c| build_census(c).kappa() <= 25).collect();
    let bad: Vec<usize> = eligible
        .par_iter()
        .enumerate()
        .filter(|(_, c)| !verify_chain(&build_and_count(c, false).unwrap(), &build_census(c)).ok())
        .map(|(i, _)| i)
        .collect();
    let single = Configuration::new(AnchorFrame::ints(0, 1), vec![PlanePoint::ints(0, 0)]).unwrap();
    let i1 = build_and_count(&single, false).unwrap().incidences();
    let frozen: serde_json::Value = serde_json::from_str(Goldens::embedded().get("incidence_d15.json").unwrap()).unwrap();
    let i15 = build_and_count(&d15_config(), false).unwrap().incidences();
    let elapsed = start.elapsed();
    outcome(
        bad.is_empty() && i1 == 1 && frozen["I"] == i15 && elapsed < Duration::from_secs(120),
        format!("{} instances with kappa <= 25, chain failures {bad:?}; I(n=1) = {i1}; I(D={{1,5}}) = {i15}, golden {}; {:.1?}", eligible.len(), frozen["I"], elapsed),
    )
}

fn criterion_9() -> Outcome {
    let f = TriPoly::from_ints(&[(1, 0, 0, 1), (0, 1, 0, 1), (0, 0, 1, -1)]);
    let inst = ZfInstance::new(f, vec![int(1), int(2)], vec![int(1), int(2)], vec![int(2), int(3), int(4)]);
    let r = incidence_lower_bound(&inst).unwrap();
    let sizes: Vec<usize> = r.fibers.iter().map(|f| f.1).collect();
    let example = r.m == 4 && sizes == [1, 2, 1] && r.i == 6 && r.bound_fibers.as_deref() == Some("6");
    let mut rng = task_rng(SEED, 9000);
    let (mut tested, mut bad) = (0, 0);
    while tested < 50 {
        let terms: Vec<(usize, usize, usize, i64)> = (0..rng.gen_range(2..=4))
            .map(|_| (rng.gen_range(0..3), rng.gen_range(0..3), rng.gen_range(0..3), rng.gen_range(-2..=2)))
            .collect();
        let f = TriPoly::from_ints(&terms);
        if f.is_zero() {
            continue;
        }
        let mut set = |k: usize| (0..k).map(|_| int(rng.gen_range(-4..=4))).collect::<Vec<_>>();
        let inst = ZfInstance::new(f, set(4), set(4), set(5));
        if !degeneracy_check(&inst).is_empty() {
            continue;
        }
        let r = incidence_lower_bound(&inst).unwrap();
        bad += usize::from(!(r.chain_holds && r.pair_multiplicity_ok && r.containment_ok));
        tested += 1;
    }
    outcome(example && bad == 0, format!("example M={} fibers {sizes:?} I={}; random instances failing {bad}/50", r.m, r.i))
}

fn criterion_10(corpus: &[Configuration]) -> Outcome {
    let mut seen = corpus.len();
    let mut bad = corpus.iter().filter(|c| !build_census(c).sanity_bound_ok()).count();
    for (k, n) in [(1, 1), (2, 6), (3, 12), (4, 20)] {
        let res = search_min_kappa(&SearchSpec { steps: 300, ..SearchSpec::new(n, 4, SEED + k) }).unwrap();
        let kappa = build_census(&res.best).kappa();
        bad += usize::from(res.best.len() > 2 * kappa * kappa || kappa != res.kappa_best);
        seen += 1;
    }
    outcome(bad == 0, format!("{seen} instances, {bad} with n > 2 kappa^2"))
}

fn criterion_11() -> Outcome {
    let res = run_scaling(&grid_scan_spec()).unwrap();
    let golden = Goldens::embedded().get("scan_grid.csv").unwrap().to_string();
    let identical = res.to_csv() == golden;
    let slope = res.loglog_slope.map_or("undefined".into(), |s| format!("{s:.4}"));
    outcome(identical && res.ok(), format!("CSV byte-identical {identical}, rows {}, log-log slope of kappa vs n {slope}", res.rows.len()))
}

fn main() {
    let start = Instant::now();
    let corpus = corpus();
    let runs: Vec<Criterion> = vec![
        ("pair count identity and lower bound", Box::new(|| criterion_1(&corpus))),
        ("geometric soundness and witnesses", Box::new(|| criterion_2(&corpus))),
        ("duality", Box::new(criterion_3)),
        ("degree four and collinear degeneration", Box::new(criterion_4)),
        ("component sharing at most four", Box::new(criterion_5)),
        ("recovery procedure", Box::new(criterion_6)),
        ("resultant guard", Box::new(criterion_7)),
        ("incidence chain", Box::new(|| criterion_8(&corpus))),
        ("zero counts", Box::new(criterion_9)),
        ("sanity bound", Box::new(|| criterion_10(&corpus))),
        ("scaling report", Box::new(criterion_11)),
    ];
    let mut failed = 0;
    for (k, (name, run)) in runs.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        failed += usize::from(!o.pass);
        println!("criterion {:>2} {}: {} ({}) [{:.1?}]", k + 1, if o.pass { "PASS" } else { "FAIL" }, name, o.detail, t.elapsed());
    }
    println!("acceptance: {} of {} criteria passed in {:.1?}", runs.len() - failed, runs.len(), start.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}
