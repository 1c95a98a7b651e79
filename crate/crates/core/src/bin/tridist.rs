use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use tridist::census::{analyze, build_census, lower_bound_holds};
use tridist::curvefam::{build_curve, collinear_diagnostics, curves_report, recover_with, recovery_audit, RadicandForm};
use tridist::exactmath::default_tolerance;
use tridist::exactmath::rational::{parse_rational, Rational};
use tridist::frame::{parse_configuration, Configuration};
use tridist::incidence::incidence_report;
use tridist::lab::{run_scaling, search_min_kappa, selftest, ExperimentSpec, Goldens, SearchSpec};
use tridist::zfcore::{incidence_lower_bound, ZfInstance};

#[derive(Args)]
struct Common {
    /// Write JSON here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Allow collinear anchors (b = 0) and report degenerate curve structure.
    #[arg(long, global = true)]
    collinear_diagnostics: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Distance census and the equal-distance pair count.
    Analyze { config: PathBuf },
    /// Curve family over D: coincidences, shared factors, resultant guards.
    Curves {
        config: PathBuf,
        /// Run pairwise resultant guards only when kappa is at most this.
        #[arg(long, default_value_t = 8)]
        guard_cap: usize,
    },
    /// Brute-force incidences over D^4 and the inequality chain.
    Incidence {
        config: PathBuf,
        #[arg(long, default_value_t = 40)]
        max_kappa: usize,
    },
    /// Recover (X, V) from the extremal points of one curve.
    Recover {
        config: PathBuf,
        /// Curve label `X,V`.
        #[arg(long)]
        curve: String,
        /// Also recover from an explicit extremal point `Y0,U0`.
        #[arg(long)]
        point: Option<String>,
    },
    /// Zeros of F on A x B x C and the incidence lower bound.
    Zf { instance: PathBuf },
    /// Scaling experiment; CSV goes to `--csv` or the spec's `csv` path.
    Scan {
        spec: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Annealing search for low-kappa integer configurations.
    Search { spec: PathBuf },
    /// Invariant suite and golden-file comparison.
    Selftest {
        /// Compare against this directory instead of the built-in goldens.
        #[arg(long)]
        golden_dir: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
        /// Write freshly computed goldens to this directory and exit.
        #[arg(long)]
        bless: Option<PathBuf>,
    },
}

#[derive(Parser)]
#[command(name = "tridist", version, about = "Distinct distances from three anchor points")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_config(path: &Path, diagnostics: bool) -> anyhow::Result<Configuration> {
    let (config, _) = parse_configuration(&read(path)?)?;
    config.frame().require_noncollinear(diagnostics)?;
    Ok(config)
}

fn pair(s: &str) -> anyhow::Result<(Rational, Rational)> {
    let Some((a, b)) = s.split_once(',') else { bail!("expected two comma-separated rationals, got `{s}`") };
    Ok((parse_rational(a.trim())?, parse_rational(b.trim())?))
}

/// Returns the JSON document and whether every internal check passed.
fn run(command: Command, diagnostics: bool) -> anyhow::Result<(Value, bool)> {
    Ok(match command {
        Command::Analyze { config } => {
            let (cfg, scale) = parse_configuration(&read(&config)?)?;
            cfg.frame().require_noncollinear(diagnostics)?;
            let report = analyze(&cfg, &scale);
            let census = build_census(&cfg);
            let ok = lower_bound_holds(&census) && census.sanity_bound_ok();
            (serde_json::to_value(report)?, ok)
        }
        Command::Curves { config, guard_cap } => {
            let cfg = load_config(&config, diagnostics)?;
            let report = curves_report(&cfg, guard_cap)?;
            let ok = report.guard_ok != Some(false) && report.overlap_bound_ok;
            let mut doc = serde_json::to_value(&report)?;
            if cfg.frame().is_collinear() {
                let d = build_census(&cfg).distinct().to_vec();
                let mut diag = Vec::new();
                for x in &d {
                    for v in &d {
                        diag.push(collinear_diagnostics(cfg.frame(), x, v)?.to_json());
                    }
                }
                doc["collinear_diagnostics"] = Value::Array(diag);
            }
            (doc, ok)
        }
        Command::Incidence { config, max_kappa } => {
            let cfg = load_config(&config, diagnostics)?;
            let report = incidence_report(&cfg, diagnostics, max_kappa)?;
            let ok = report.ok();
            (serde_json::to_value(report)?, ok)
        }
        Command::Recover { config, curve, point } => {
            let cfg = load_config(&config, false)?;
            let (x, v) = pair(&curve)?;
            let c = build_curve(cfg.frame(), &x, &v)?;
            let tol = default_tolerance();
            let (counts, points) = recovery_audit(&c, &tol)?;
            let mut ok = counts.max_candidates <= 4;
            let mut doc = json!({"curve": [curve], "counts": counts, "extremal_points": points});
            if let Some(p) = point {
                let (y0, u0) = pair(&p)?;
                let mut direct = serde_json::Map::new();
                for form in [RadicandForm::Verbatim, RadicandForm::Geometric] {
                    let rec = recover_with(cfg.frame(), &y0, &u0, form, &tol)?;
                    ok &= rec.candidates.len() <= 4;
                    direct.insert(form.name().into(), rec.to_json());
                }
                doc["from_point"] = Value::Object(direct);
            }
            (doc, ok)
        }
        Command::Zf { instance } => {
            let inst = ZfInstance::parse(&read(&instance)?)?;
            let report = incidence_lower_bound(&inst)?;
            let ok = report.ok();
            (serde_json::to_value(report)?, ok)
        }
        Command::Scan { spec, csv } => {
            let mut spec: ExperimentSpec = serde_json::from_str(&read(&spec)?).context("parsing experiment spec")?;
            spec.collinear_diagnostics |= diagnostics;
            let res = run_scaling(&spec)?;
            let text = res.to_csv();
            if let Some(path) = csv.or(spec.csv.as_ref().map(PathBuf::from)) {
                std::fs::write(&path, &text).with_context(|| format!("writing {}", path.display()))?;
            }
            let ok = res.ok();
            let mut doc = serde_json::to_value(&res)?;
            doc["csv"] = Value::String(text);
            doc["ok"] = Value::Bool(ok);
            (doc, ok)
        }
        Command::Search { spec } => {
            let spec: SearchSpec = serde_json::from_str(&read(&spec)?).context("parsing search spec")?;
            let res = search_min_kappa(&spec)?;
            let doc = res.to_json();
            let ok = doc["sanity_ok"] == Value::Bool(true);
            (doc, ok)
        }
        Command::Selftest { golden_dir, threads, bless } => {
            if let Some(dir) = bless {
                Goldens::compute()?.write_to(&dir)?;
                return Ok((json!({"blessed": dir.display().to_string()}), true));
            }
            let goldens = match golden_dir {
                Some(dir) => Goldens::from_dir(&dir)?,
                None => Goldens::embedded(),
            };
            let report = selftest(&goldens, threads)?;
            let ok = report.ok();
            let mut doc = serde_json::to_value(&report)?;
            doc["ok"] = Value::Bool(ok);
            (doc, ok)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command, cli.common.collinear_diagnostics) {
        Ok((doc, ok)) => {
            let text = serde_json::to_string_pretty(&doc).expect("serializable") + "\n";
            let written = match &cli.common.out {
                Some(path) => std::fs::write(path, text).map_err(|e| e.to_string()),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
