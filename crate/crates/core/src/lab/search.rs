//! Simulated annealing over integer point sets in `[-m, m]^2`.

use std::collections::{HashMap, HashSet};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{task_rng, FrameSpec};
use crate::census::build_census;
use crate::error::{Error, Result};
use crate::exactmath::rational::{int, Rational};
use crate::frame::{distance_triple, AnchorFrame, Configuration, ConfigurationJson, PlanePoint};

fn default_t0() -> f64 {
    1.0
}
fn default_cooling() -> f64 {
    0.995
}
fn default_steps() -> usize {
    2000
}
fn default_restarts() -> usize {
    4
}
fn default_frame() -> FrameSpec {
    FrameSpec::new(&int(0), &int(1))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchSpec {
    pub n: usize,
    /// Half-width of the coordinate box.
    pub m: i64,
    #[serde(default = "default_frame")]
    pub frame: FrameSpec,
    #[serde(default = "default_t0")]
    pub t0: f64,
    #[serde(default = "default_cooling")]
    pub cooling: f64,
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default)]
    pub seed: u64,
}

impl SearchSpec {
    pub fn new(n: usize, m: i64, seed: u64) -> Self {
        SearchSpec {
            n,
            m,
            frame: default_frame(),
            t0: default_t0(),
            cooling: default_cooling(),
            steps: default_steps(),
            restarts: default_restarts(),
            seed,
        }
    }

    fn validate(&self) -> Result<AnchorFrame> {
        if self.n == 0 || self.m < 0 || self.steps == 0 || self.restarts == 0 {
            return Err(Error::InvalidInput("n, steps and restarts must be positive, m nonnegative".into()));
        }
        let schedule_ok = self.t0.is_finite() && self.t0 > 0.0 && self.cooling > 0.0 && self.cooling < 1.0;
        if !schedule_ok {
            return Err(Error::InvalidInput("need t0 > 0 and cooling in (0, 1)".into()));
        }
        let frame = self.frame.frame()?;
        frame.require_noncollinear(false)?;
        Ok(frame)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub restart: usize,
    pub step: usize,
    pub kappa: usize,
    #[serde(rename = "Q")]
    pub q: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult {
    pub best: Configuration,
    pub kappa_best: usize,
    pub q_best: u64,
    pub best_restart: usize,
    pub trace: Vec<TraceEntry>,
}

impl SearchResult {
    pub fn to_json(&self) -> serde_json::Value {
        let n = self.best.len();
        serde_json::json!({
            "n": n,
            "kappa_best": self.kappa_best,
            "Q_best": self.q_best,
            "best_restart": self.best_restart,
            "sanity_ok": n <= 2 * self.kappa_best * self.kappa_best,
            "configuration": ConfigurationJson::from_configuration(&self.best),
            "trace": self.trace,
        })
    }
}

/// Multiset of all squared distances plus the `p3` fiber counts.
struct State<'a> {
    frame: &'a AnchorFrame,
    pts: Vec<(i64, i64)>,
    triples: Vec<[Rational; 3]>,
    all: HashMap<Rational, usize>,
    fiber: HashMap<Rational, usize>,
    q: u64,
}

impl<'a> State<'a> {
    fn new(frame: &'a AnchorFrame, pts: Vec<(i64, i64)>) -> Self {
        let mut s = State { frame, pts: Vec::new(), triples: Vec::new(), all: HashMap::new(), fiber: HashMap::new(), q: 0 };
        for p in pts {
            s.push(p);
        }
        s
    }

    fn triple(&self, (x, y): (i64, i64)) -> [Rational; 3] {
        let t = distance_triple(self.frame, &PlanePoint::ints(x, y)).expect("anchors excluded");
        [t.to_p1, t.to_p2, t.to_p3]
    }

    fn insert(&mut self, t: &[Rational; 3]) {
        for d in t {
            *self.all.entry(d.clone()).or_insert(0) += 1;
        }
        let c = self.fiber.entry(t[2].clone()).or_insert(0);
        self.q += *c as u64;
        *c += 1;
    }

    fn erase(&mut self, t: &[Rational; 3]) {
        for d in t {
            let c = self.all.get_mut(d).expect("present");
            *c -= 1;
            if *c == 0 {
                self.all.remove(d);
            }
        }
        let c = self.fiber.get_mut(&t[2]).expect("present");
        *c -= 1;
        self.q -= *c as u64;
        if *c == 0 {
            self.fiber.remove(&t[2]);
        }
    }

    fn push(&mut self, p: (i64, i64)) {
        let t = self.triple(p);
        self.insert(&t);
        self.pts.push(p);
        self.triples.push(t);
    }

    /// Moves point `i` to `p`, returning the old position.
    fn relocate(&mut self, i: usize, p: (i64, i64)) -> (i64, i64) {
        let t = self.triple(p);
        let old_t = std::mem::replace(&mut self.triples[i], t);
        self.erase(&old_t);
        let new_t = self.triples[i].clone();
        self.insert(&new_t);
        std::mem::replace(&mut self.pts[i], p)
    }

    fn kappa(&self) -> usize {
        self.all.len()
    }

    fn energy(&self) -> f64 {
        let n = self.pts.len() as f64;
        self.kappa() as f64 + self.q as f64 / (n * n + 1.0)
    }
}

fn lattice(frame: &AnchorFrame, m: i64) -> Vec<(i64, i64)> {
    (-m..=m)
        .flat_map(|x| (-m..=m).map(move |y| (x, y)))
        .filter(|&(x, y)| frame.anchor_collision(&PlanePoint::ints(x, y)).is_none())
        .collect()
}

struct RunOutcome {
    pts: Vec<(i64, i64)>,
    kappa: usize,
    q: u64,
    trace: Vec<TraceEntry>,
}

fn anneal(spec: &SearchSpec, frame: &AnchorFrame, sites: &[(i64, i64)], restart: usize) -> RunOutcome {
    let mut rng = task_rng(spec.seed, restart as u64);
    let mut used: HashSet<(i64, i64)> = HashSet::new();
    let mut init = Vec::with_capacity(spec.n);
    while init.len() < spec.n {
        let p = sites[rng.gen_range(0..sites.len())];
        if used.insert(p) {
            init.push(p);
        }
    }
    let mut st = State::new(frame, init);
    let mut best = (st.kappa(), st.q, st.pts.clone());
    let mut trace = vec![TraceEntry { restart, step: 0, kappa: best.0, q: best.1 }];
    let mut temp = spec.t0;
    let spare = sites.len() > spec.n;
    for step in 1..=spec.steps {
        if spare {
            let i = rng.gen_range(0..spec.n);
            let p = loop {
                let p = sites[rng.gen_range(0..sites.len())];
                if !used.contains(&p) {
                    break p;
                }
            };
            let before = st.energy();
            let old = st.relocate(i, p);
            let delta = st.energy() - before;
            let accept = delta <= 0.0 || rng.gen::<f64>() < (-delta / temp).exp();
            if accept {
                used.remove(&old);
                used.insert(p);
                if (st.kappa(), st.q) < (best.0, best.1) {
                    best = (st.kappa(), st.q, st.pts.clone());
                    trace.push(TraceEntry { restart, step, kappa: best.0, q: best.1 });
                }
            } else {
                st.relocate(i, old);
            }
        }
        temp *= spec.cooling;
    }
    RunOutcome { pts: best.2, kappa: best.0, q: best.1, trace }
}

/// Minimizes `kappa` (then `Q`) over `n`-point subsets of the lattice box,
/// anchors excluded. Restarts run in parallel on independent streams.
pub fn search_min_kappa(spec: &SearchSpec) -> Result<SearchResult> {
    let frame = spec.validate()?;
    let sites = lattice(&frame, spec.m);
    if sites.len() < spec.n {
        return Err(Error::InvalidInput(format!(
            "box [-{m}, {m}]^2 has {} usable lattice points, fewer than n = {}",
            sites.len(),
            spec.n,
            m = spec.m
        )));
    }
    let runs: Vec<RunOutcome> = (0..spec.restarts).into_par_iter().map(|r| anneal(spec, &frame, &sites, r)).collect();
    let (best_restart, best) = runs
        .iter()
        .enumerate()
        .min_by_key(|(r, o)| (o.kappa, o.q, *r))
        .expect("at least one restart");
    let config = Configuration::new(frame.clone(), best.pts.iter().map(|&(x, y)| PlanePoint::ints(x, y)).collect())?;
    let census = build_census(&config);
    if census.kappa() != best.kappa {
        return Err(Error::Invariant(format!("search kappa {} but census gives {}", best.kappa, census.kappa())));
    }
    Ok(SearchResult {
        kappa_best: best.kappa,
        q_best: best.q,
        best_restart,
        trace: runs.iter().flat_map(|o| o.trace.iter().cloned()).collect(),
        best: config,
    })
}
