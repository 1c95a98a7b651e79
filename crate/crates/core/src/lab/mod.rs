//! Instance generators, scaling scans, annealing search and the self-test.

mod scaling;
mod search;
mod selftest;

pub use scaling::{grid_scan_spec, run_scaling, ScalingResult, ScalingRow};
pub use search::{search_min_kappa, SearchResult, SearchSpec, TraceEntry};
pub use selftest::{
    d15_config, recovery_suite, recovery_suite_counts, search_golden_spec, selftest, Check, Goldens, SelftestReport,
};

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exactmath::rational::{format_rational, int, rat, rational_from_json, Rational};
use crate::frame::{AnchorFrame, Configuration, PlanePoint};

/// Grid points are `(GRID_OFFSET + i, GRID_OFFSET + j)` for `0 <= i, j < m`,
/// clear of `p1 = (1, 0)` and `p2 = (-1, 0)`.
pub const GRID_OFFSET: i64 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Grid,
    RandomRational,
    CollinearDiagnostic,
    File,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameSpec {
    pub a: Value,
    pub b: Value,
}

impl FrameSpec {
    pub fn new(a: &Rational, b: &Rational) -> Self {
        FrameSpec { a: Value::String(format_rational(a)), b: Value::String(format_rational(b)) }
    }

    pub fn frame(&self) -> Result<AnchorFrame> {
        Ok(AnchorFrame::new(rational_from_json(&self.a)?, rational_from_json(&self.b)?))
    }
}

fn default_frame() -> FrameSpec {
    FrameSpec::new(&int(0), &int(1))
}

fn default_max_kappa() -> usize {
    25
}

fn default_coord_range() -> i64 {
    6
}

fn default_max_den() -> i64 {
    2
}

/// A scaling experiment. `sizes` are point counts; grid families need
/// perfect squares. `file` names a configuration for the `file` family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub family: Family,
    #[serde(default)]
    pub sizes: Vec<usize>,
    #[serde(default = "default_frame")]
    pub frame: FrameSpec,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_max_kappa")]
    pub max_kappa: usize,
    #[serde(default)]
    pub collinear_diagnostics: bool,
    #[serde(default = "default_coord_range")]
    pub coord_range: i64,
    #[serde(default = "default_max_den")]
    pub max_den: i64,
    #[serde(default)]
    pub file: Option<String>,
    #[serde(default)]
    pub csv: Option<String>,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.family != Family::File && self.sizes.is_empty() {
            return Err(Error::InvalidInput("sizes must be nonempty".into()));
        }
        if self.sizes.contains(&0) {
            return Err(Error::InvalidInput("sizes must be positive".into()));
        }
        if self.coord_range < 1 || self.max_den < 1 {
            return Err(Error::InvalidInput("coord_range and max_den must be positive".into()));
        }
        Ok(())
    }
}

/// Random stream for task `index` of a run seeded with `seed`.
pub fn task_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// `m x m` integer grid at [`GRID_OFFSET`].
pub fn grid(frame: &AnchorFrame, m: usize) -> Result<Configuration> {
    let pts = (0..m as i64)
        .flat_map(|i| (0..m as i64).map(move |j| PlanePoint::ints(GRID_OFFSET + i, GRID_OFFSET + j)))
        .collect();
    Configuration::new(frame.clone(), pts)
}

/// `n` distinct points with coordinates `p/q`, `|p| <= range * q`,
/// `1 <= q <= max_den`, avoiding the anchors.
pub fn random_rational(frame: &AnchorFrame, n: usize, range: i64, max_den: i64, rng: &mut ChaCha8Rng) -> Result<Configuration> {
    let anchors: HashSet<PlanePoint> = frame.anchors().into_iter().collect();
    let mut seen = HashSet::new();
    let mut pts = Vec::with_capacity(n);
    let mut attempts = 0usize;
    while pts.len() < n {
        attempts += 1;
        if attempts > 1000 * (n + 10) {
            return Err(Error::InvalidInput(format!("cannot place {n} distinct points in the coordinate box")));
        }
        let coord = |rng: &mut ChaCha8Rng| {
            let q = rng.gen_range(1..=max_den);
            rat(rng.gen_range(-range * q..=range * q), q)
        };
        let p = PlanePoint::new(coord(rng), coord(rng));
        if anchors.contains(&p) || !seen.insert(p.clone()) {
            continue;
        }
        pts.push(p);
    }
    Configuration::new(frame.clone(), pts)
}

/// Exact integer square root of a perfect square.
pub(crate) fn square_side(n: usize) -> Option<usize> {
    let m = (n as f64).sqrt().round() as usize;
    (m * m == n).then_some(m)
}

/// Instances of the spec in `sizes` order (one for the `file` family).
pub fn generate(spec: &ExperimentSpec) -> Result<Vec<Configuration>> {
    spec.validate()?;
    let frame = spec.frame.frame()?;
    match spec.family {
        Family::File => {
            let path = spec.file.as_deref().ok_or_else(|| Error::InvalidInput("file family needs `file`".into()))?;
            let text = std::fs::read_to_string(path)?;
            let (config, _) = crate::frame::parse_configuration(&text)?;
            config.frame().require_noncollinear(spec.collinear_diagnostics)?;
            Ok(vec![config])
        }
        Family::Grid | Family::CollinearDiagnostic => {
            if spec.family == Family::CollinearDiagnostic && !frame.is_collinear() {
                return Err(Error::InvalidInput("collinear-diagnostic family needs b = 0".into()));
            }
            if spec.family == Family::Grid {
                frame.require_noncollinear(spec.collinear_diagnostics)?;
            }
            spec.sizes
                .iter()
                .map(|&n| {
                    let m = square_side(n)
                        .ok_or_else(|| Error::InvalidInput(format!("grid size {n} is not a perfect square")))?;
                    grid(&frame, m)
                })
                .collect()
        }
        Family::RandomRational => {
            frame.require_noncollinear(spec.collinear_diagnostics)?;
            spec.sizes
                .iter()
                .enumerate()
                .map(|(k, &n)| random_rational(&frame, n, spec.coord_range, spec.max_den, &mut task_rng(spec.seed, k as u64)))
                .collect()
        }
    }
}
