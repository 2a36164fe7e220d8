//! Experiment configuration, reproducible runs and result bundles.

mod export;

pub use export::{compare, table_export, write_sidecars, BundleDiff, DiffEntry, TableKind};

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::algapprox::{estimate_star_ordinary, estimate_star_uniform, StarStudy};
use crate::bounds::{consistency_check, inf_float, BoundReport, Exponent, ExponentProfile, ProfileValue, Provenance, RuleId};
use crate::error::{Error, Result};
use crate::polysearch::{estimate_ordinary, estimate_uniform, ExponentEstimate, Grid, Policy, Strategy, Study};
use crate::realnum::{parse_target, Enclosure, Nature, RealTarget, TargetKind};

fn default_h0() -> u64 {
    5
}
fn default_ratio() -> f64 {
    1.5
}
fn default_strategy() -> Strategy {
    Strategy::Exhaustive
}
fn default_budget() -> u64 {
    1_000_000_000
}
fn default_precision_start() -> u32 {
    64
}
fn default_precision_cap() -> u32 {
    4096
}
fn default_scale_cap() -> u32 {
    48
}
fn default_skip() -> usize {
    2
}
fn default_tail() -> f64 {
    0.5
}
fn default_bias() -> f64 {
    0.5
}

/// A run description. Stored as flat TOML:
///
/// ```toml
/// target = "extremal:1,2"
/// degrees = [2]
/// h_max = 10000
/// strategy = "hybrid"
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub target: String,
    pub degrees: Vec<usize>,
    pub h_max: u64,
    #[serde(default = "default_h0")]
    pub grid_h0: u64,
    #[serde(default = "default_ratio")]
    pub grid_ratio: f64,
    /// Number of grid heights. Without it the grid runs up to `h_max`, which is appended.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_points: Option<usize>,
    #[serde(default = "default_strategy")]
    pub strategy: Strategy,
    #[serde(default = "default_budget")]
    pub enumeration_budget: u64,
    #[serde(default = "default_precision_start")]
    pub precision_start: u32,
    #[serde(default = "default_precision_cap")]
    pub precision_cap: u32,
    #[serde(default = "default_scale_cap")]
    pub lattice_scale_cap: u32,
    /// Echoed into the bundle; targets with randomness carry their own seed.
    #[serde(default)]
    pub seed: u64,
    /// Records of height >= 2 ignored by the ordinary estimators.
    #[serde(default = "default_skip")]
    pub skip: usize,
    #[serde(default = "default_tail")]
    pub tail_fraction: f64,
    /// Half-width added around each estimate when it enters the derived profile.
    #[serde(default = "default_bias")]
    pub bias_allowance: f64,
    /// Also run the algebraic-approximation search (degrees up to 4).
    #[serde(default)]
    pub star: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub star_h_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(target: impl Into<String>, degrees: Vec<usize>, h_max: u64) -> Self {
        ExperimentConfig {
            target: target.into(),
            degrees,
            h_max,
            grid_h0: default_h0(),
            grid_ratio: default_ratio(),
            grid_points: None,
            strategy: default_strategy(),
            enumeration_budget: default_budget(),
            precision_start: default_precision_start(),
            precision_cap: default_precision_cap(),
            lattice_scale_cap: default_scale_cap(),
            seed: 0,
            skip: default_skip(),
            tail_fraction: default_tail(),
            bias_allowance: default_bias(),
            star: false,
            star_h_max: None,
            workers: None,
            out_dir: None,
        }
    }

    pub fn from_toml(s: &str) -> Result<Self> {
        let c: ExperimentConfig = toml::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Parse(m.to_string()));
        if self.degrees.is_empty() || self.degrees.contains(&0) {
            return bad("degrees must be a nonempty list of positive integers");
        }
        if self.h_max == 0 || self.enumeration_budget == 0 || self.precision_cap == 0 || self.lattice_scale_cap == 0 {
            return bad("h_max and all caps must be positive");
        }
        if self.grid_h0 < 2 || !(self.grid_ratio > 1.0) {
            return bad("grid needs grid_h0 >= 2 and grid_ratio > 1");
        }
        if self.precision_start == 0 || self.precision_start > self.precision_cap {
            return bad("precision_start must lie in 1..=precision_cap");
        }
        if !(self.tail_fraction > 0.0 && self.tail_fraction <= 1.0) {
            return bad("tail_fraction must lie in (0, 1]");
        }
        if !(self.bias_allowance >= 0.0) {
            return bad("bias_allowance must be nonnegative");
        }
        if self.workers == Some(0) {
            return bad("workers must be positive");
        }
        parse_target(&self.target)?;
        Ok(())
    }

    pub fn policy(&self) -> Policy {
        Policy {
            precision_start: self.precision_start,
            precision_cap: self.precision_cap,
            budget: u128::from(self.enumeration_budget),
            lattice_scale_cap: self.lattice_scale_cap,
        }
    }

    /// Grid heights, clipped to `h_max`.
    pub fn heights(&self) -> Vec<u64> {
        match self.grid_points {
            Some(points) => {
                let g = Grid::Geometric { h0: self.grid_h0, ratio: self.grid_ratio, points };
                g.heights().into_iter().filter(|&h| h <= self.h_max).collect()
            }
            None => {
                let mut v = if self.grid_h0 <= self.h_max { Grid::up_to(self.grid_h0, self.grid_ratio, self.h_max).heights() } else { vec![] };
                if v.last() != Some(&self.h_max) {
                    v.push(self.h_max);
                }
                v
            }
        }
    }

    pub fn star_h_max(&self) -> u64 {
        self.star_h_max.unwrap_or(self.h_max.min(60))
    }
}

/// Enclosure endpoints as decimal strings, rounded outward to 17 significant digits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bracket {
    pub lo: String,
    pub hi: String,
}

impl From<&Enclosure> for Bracket {
    fn from(e: &Enclosure) -> Self {
        Bracket { lo: e.lo().to_decimal_directed(17, false), hi: e.hi().to_decimal_directed(17, true) }
    }
}

impl Bracket {
    pub fn hi_f64(&self) -> f64 {
        self.hi.parse().unwrap_or(f64::NAN)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsiRowView {
    pub h: u64,
    pub psi: Bracket,
    pub witness: String,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecordView {
    pub height: u64,
    pub value: Bracket,
    pub poly: String,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StarRowView {
    pub h: u64,
    pub psi_star: Bracket,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StarRecordView {
    pub height: u64,
    pub distance: Bracket,
    pub alpha: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateView {
    #[serde(with = "inf_float")]
    pub point: f64,
    #[serde(with = "inf_float")]
    pub lower: f64,
    #[serde(with = "inf_float")]
    pub upper: f64,
    pub samples: usize,
    pub strategy: String,
}

impl From<&ExponentEstimate> for EstimateView {
    fn from(e: &ExponentEstimate) -> Self {
        EstimateView { point: e.point, lower: e.lower, upper: e.upper, samples: e.samples, strategy: e.strategy.to_string() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StarResult {
    pub h_max: u64,
    pub table: Vec<StarRowView>,
    pub records: Vec<StarRecordView>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ordinary: Option<EstimateView>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uniform: Option<EstimateView>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeResult {
    pub n: usize,
    pub exhaustive_threshold: u64,
    pub table: Vec<PsiRowView>,
    pub records: Vec<RecordView>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ordinary: Option<EstimateView>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uniform: Option<EstimateView>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub star: Option<StarResult>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub total_seconds: f64,
    pub degree_seconds: Vec<(usize, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultBundle {
    pub config: ExperimentConfig,
    pub target: String,
    /// Set when a budget stopped part of the run.
    pub partial: bool,
    pub degrees: Vec<DegreeResult>,
    pub profile: ExponentProfile,
    pub report: BoundReport,
    pub warnings: Vec<String>,
    pub timing: Timing,
}

impl ResultBundle {
    pub fn degree(&self, n: usize) -> Option<&DegreeResult> {
        self.degrees.iter().find(|d| d.n == n)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("bundle serializes")
    }

    /// JSON with the timing block zeroed, for byte comparisons between runs.
    pub fn to_json_untimed(&self) -> String {
        let mut b = self.clone();
        b.timing = Timing::default();
        b.to_json()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

fn widen(e: &EstimateView, bias: f64) -> ProfileValue {
    let lo = e.lower - bias;
    let hi = e.upper + bias;
    ProfileValue { lo: lo.min(hi), hi, provenance: Provenance::Measured }
}

fn run_degree(target: &RealTarget, n: usize, config: &ExperimentConfig, policy: &Policy, warnings: &mut Vec<String>) -> Result<DegreeResult> {
    let heights = config.heights();
    let study = Study::run(target, n, config.h_max, config.strategy, policy)?;
    warnings.extend(study.warnings.iter().map(|w| format!("n={n}: {w}")));
    let table = study.table(&heights)?;
    let records = study.records()?;
    let note = |what: &str, e: Error, warnings: &mut Vec<String>| {
        warnings.push(format!("n={n}: no {what} estimate: {e}"));
        None
    };
    let ordinary = match estimate_ordinary(&records, config.skip) {
        Ok(e) => Some(EstimateView::from(&e)),
        Err(e) => note("ordinary", e, warnings),
    };
    let uniform = match estimate_uniform(&table, config.tail_fraction) {
        Ok(e) => Some(EstimateView::from(&e)),
        Err(e) => note("uniform", e, warnings),
    };
    let star = if !config.star {
        None
    } else if n > 4 {
        warnings.push(format!("n={n}: star search is limited to degree 4"));
        None
    } else {
        let sh = config.star_h_max();
        let s = StarStudy::run(target, n, sh, policy)?;
        warnings.extend(s.warnings.iter().map(|w| format!("n={n} star: {w}")));
        let sheights: Vec<u64> = {
            let mut v: Vec<u64> = heights.iter().copied().filter(|&h| h <= sh).collect();
            if v.last() != Some(&sh) {
                v.push(sh);
            }
            v
        };
        let t = s.table(&sheights);
        let recs = s.records();
        let ordinary = match estimate_star_ordinary(&recs, config.skip) {
            Ok(e) => Some(EstimateView::from(&e)),
            Err(e) => note("star ordinary", e, warnings),
        };
        let uniform = match estimate_star_uniform(&t, config.tail_fraction) {
            Ok(e) => Some(EstimateView::from(&e)),
            Err(e) => note("star uniform", e, warnings),
        };
        Some(StarResult {
            h_max: sh,
            table: t.rows.iter().map(|r| StarRowView { h: r.h, psi_star: (&r.psi_star).into(), witness: r.witness.to_string() }).collect(),
            records: recs
                .iter()
                .map(|r| StarRecordView { height: r.height, distance: (&r.distance).into(), alpha: r.alpha.to_string() })
                .collect(),
            ordinary,
            uniform,
        })
    };
    Ok(DegreeResult {
        n,
        exhaustive_threshold: study.threshold(),
        table: table
            .rows
            .iter()
            .map(|r| PsiRowView { h: r.h, psi: (&r.psi).into(), witness: r.witness.to_string(), source: r.source.to_string() })
            .collect(),
        records: records
            .entries
            .iter()
            .map(|r| RecordView { height: r.height, value: (&r.value).into(), poly: r.poly.to_string(), source: r.source.to_string() })
            .collect(),
        ordinary,
        uniform,
        star,
    })
}

/// Measured profile of a bundle's estimates, each widened by the bias allowance.
pub fn derive_profile(target: &RealTarget, degrees: &[DegreeResult], bias: f64) -> ExponentProfile {
    let mut p = ExponentProfile {
        transcendental: !matches!(target.nature(), Nature::Algebraic { .. }),
        extremal: matches!(target.kind(), TargetKind::FibonacciWordCF { .. }),
        ..Default::default()
    };
    for d in degrees {
        let mut put = |e: Exponent, v: &Option<EstimateView>| {
            if let Some(v) = v {
                p.set(e, d.n, widen(v, bias));
            }
        };
        put(Exponent::W, &d.ordinary);
        put(Exponent::WHat, &d.uniform);
        if let Some(s) = &d.star {
            put(Exponent::WStar, &s.ordinary);
            put(Exponent::WHatStar, &s.uniform);
        }
    }
    p
}

fn run_inner(config: &ExperimentConfig) -> Result<ResultBundle> {
    config.validate()?;
    let start = Instant::now();
    let target = parse_target(&config.target)?;
    let policy = config.policy();
    let mut warnings = Vec::new();
    let mut degrees = Vec::new();
    let mut timing = Timing::default();
    let mut partial = false;
    let mut ns = config.degrees.clone();
    ns.sort_unstable();
    ns.dedup();
    for n in ns {
        let t0 = Instant::now();
        match run_degree(&target, n, config, &policy, &mut warnings) {
            Ok(d) => degrees.push(d),
            Err(Error::OverflowGuard { count, budget }) => {
                partial = true;
                warnings.push(format!("n={n}: skipped, enumeration of {count} polynomials exceeds budget {budget}"));
            }
            Err(e) => return Err(e),
        }
        timing.degree_seconds.push((n, t0.elapsed().as_secs_f64()));
    }
    let profile = derive_profile(&target, &degrees, config.bias_allowance);
    let report = consistency_check(&profile);
    for r in &report.results {
        let basic = matches!(r.rule, RuleId::R1a | RuleId::R1b | RuleId::R2a | RuleId::R2b | RuleId::R2c);
        if basic && r.status.is_violated() {
            warnings.push(format!("derived profile violates {} at n={:?}; estimator suspect", r.rule, r.n));
        }
    }
    timing.total_seconds = start.elapsed().as_secs_f64();
    let bundle = ResultBundle { config: config.clone(), target: target.label().to_string(), partial, degrees, profile, report, warnings, timing };
    if partial {
        return Err(Error::BudgetExceeded(Box::new(bundle)));
    }
    Ok(bundle)
}

/// Runs the experiment. A budget overrun still yields the finished degrees, inside
/// [`Error::BudgetExceeded`].
pub fn run(config: &ExperimentConfig) -> Result<ResultBundle> {
    match config.workers {
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(w).build().map_err(|e| Error::Parse(e.to_string()))?;
            pool.install(|| run_inner(config))
        }
        None => run_inner(config),
    }
}

/// Writes `bundle.json`, `config.toml` and the CSV sidecars into `dir`.
pub fn persist(bundle: &ResultBundle, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let json = dir.join("bundle.json");
    std::fs::write(&json, bundle.to_json())?;
    written.push(json);
    let cfg = dir.join("config.toml");
    std::fs::write(&cfg, bundle.config.to_toml())?;
    written.push(cfg);
    written.extend(write_sidecars(bundle, dir)?);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ExperimentConfig {
        let mut c = ExperimentConfig::new("algroot:[-2,0,1]:1", vec![1], 60);
        c.grid_points = Some(6);
        c
    }

    #[test]
    fn config_roundtrip() {
        let mut c = small();
        c.star = true;
        c.workers = Some(2);
        let back = ExperimentConfig::from_toml(&c.to_toml()).unwrap();
        assert_eq!(back, c);
        assert!(ExperimentConfig::from_toml("target = \"rational:1/3\"\ndegrees = [1]\nh_max = 0\n").is_err());
        assert!(ExperimentConfig::from_toml("target = \"nope\"\ndegrees = [1]\nh_max = 5\n").is_err());
        assert!(ExperimentConfig::from_toml("target = \"rational:1/3\"\ndegrees = [1]\nh_max = 5\ncolour = 1\n").is_err());
    }

    #[test]
    fn grid_heights_follow_config() {
        let c = small();
        assert_eq!(c.heights(), vec![5, 8, 12, 18, 27, 41]);
        let mut d = small();
        d.grid_points = None;
        assert_eq!(d.heights(), vec![5, 8, 12, 18, 27, 41, 60]);
    }

    #[test]
    fn sqrt2_bundle() {
        let mut c = small();
        c.star = true;
        c.star_h_max = Some(20);
        let b = run(&c).unwrap();
        assert!(!b.partial);
        let d = b.degree(1).unwrap();
        assert_eq!(d.table.len(), 6);
        assert_eq!(d.table[0].witness, "[-3,2]");
        assert!(d.star.as_ref().unwrap().table.len() >= 4);
        assert!(!b.profile.transcendental);
        let back = ResultBundle::from_json(&b.to_json()).unwrap();
        assert_eq!(back, b);
    }

    #[test]
    fn budget_overrun_keeps_partial_bundle() {
        let mut c = ExperimentConfig::new("rational:1/3", vec![1, 2], 20);
        c.enumeration_budget = 10;
        match run(&c) {
            Err(Error::BudgetExceeded(b)) => {
                assert!(b.partial);
                assert!(b.warnings.iter().any(|w| w.contains("exceeds budget")));
            }
            other => panic!("{other:?}"),
        }
    }
}
