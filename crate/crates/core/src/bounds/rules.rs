//! The rule catalog and profile consistency checking.
//!
//! Every rule is an inequality `lhs <= rhs` (or an equality) between exponent values.
//! Slack is `rhs - lhs`, so a negative slack is a violation. Bracketed values are checked
//! over the whole box: a rule is violated only if every point of the box violates it.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::constants::{classic_star_floor, extremal_star3, extremal_w2, improved_star_floor, ssmj_floor, tomcat1, tomcat2, what2_ceiling};
use super::profile::{inf_float, Exponent, ExponentProfile, ProfileValue};

/// Absolute tolerance on slack. Exact values are usually typed with a handful of decimals.
pub const SLACK_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RuleId {
    R1a,
    R1b,
    R2a,
    R2b,
    R2c,
    R3,
    R4a,
    R4b,
    R5,
    R6,
    R7a,
    R7b,
    R7c,
    R7d,
    R8,
    R9,
    R10,
    R11,
    R12a,
    R12b,
    R13,
    R14a,
    R14b,
    R15a,
    R15b,
    R15c,
    R16a,
    R16b,
    R16c,
    R16d,
}

impl RuleId {
    pub const ALL: [RuleId; 30] = [
        RuleId::R1a,
        RuleId::R1b,
        RuleId::R2a,
        RuleId::R2b,
        RuleId::R2c,
        RuleId::R3,
        RuleId::R4a,
        RuleId::R4b,
        RuleId::R5,
        RuleId::R6,
        RuleId::R7a,
        RuleId::R7b,
        RuleId::R7c,
        RuleId::R7d,
        RuleId::R8,
        RuleId::R9,
        RuleId::R10,
        RuleId::R11,
        RuleId::R12a,
        RuleId::R12b,
        RuleId::R13,
        RuleId::R14a,
        RuleId::R14b,
        RuleId::R15a,
        RuleId::R15b,
        RuleId::R15c,
        RuleId::R16a,
        RuleId::R16b,
        RuleId::R16c,
        RuleId::R16d,
    ];

    pub fn statement(self) -> &'static str {
        match self {
            RuleId::R1a => "w_n >= w_hat_n",
            RuleId::R1b => "w_hat_n >= n",
            RuleId::R2a => "w_hat*_n >= 1",
            RuleId::R2b => "w_hat*_n <= w_hat_n",
            RuleId::R2c => "w_hat_n <= 2n - 1",
            RuleId::R3 => "w_hat_2 <= (3 + sqrt 5)/2",
            RuleId::R4a => "w_hat_n <= n - 1/2 + sqrt(n^2 - 2n + 5/4), n >= 2",
            RuleId::R4b => "w_hat_3 <= 3 + sqrt 2",
            RuleId::R5 => "w_n >= (n-1)(w_hat_n^2 - w_hat_n)/(1 + (n-2) w_hat_n), n >= 2",
            RuleId::R6 => "w_3 >= w_hat_3 (sqrt(4 w_hat_3 - 3) - 1)/2",
            RuleId::R7a => "w*_n <= w_n",
            RuleId::R7b => "w_n <= w*_n + n - 1",
            RuleId::R7c => "w_hat*_n <= w_hat_n",
            RuleId::R7d => "w_hat_n <= w_hat*_n + n - 1",
            RuleId::R8 => "w*_n >= w_hat_n/(w_hat_n - n + 1), n >= 2",
            RuleId::R9 => "w_{n-1} < w_m implies w_hat_n <= m + (n-1) w_hat_n/w_m, m >= n >= 2",
            RuleId::R10 => "min{w_m, w_hat_n} <= m + n - 1",
            RuleId::R11 => "m >= n or w_m > min{n+m-1, w*_n} implies w_hat*_n <= min{m + (n-1) w_hat*_n/w_m, w_m}",
            RuleId::R12a => "w_hat_n <= (2(w*_n + n) - 1)/3",
            RuleId::R12b => "w_n <= 2n-1 implies w_hat*_n >= (2x^2 - x - 2n + 1)/(2x^2 - nx - n), x = w*_n",
            RuleId::R13 => "w*_n >= (n + sqrt(n^2 + 16n - 8))/4, n >= 3",
            RuleId::R14a => "w*_n >= min{w_hat_n, w_n - (n-1)/2 + (w_hat_n - n)/2, (w_n + 1)/2 + w_hat_n - n}",
            RuleId::R14b => {
                "w*_n >= max{w_hat_n/(w_hat_n - n + 1), min{w_hat_n, ssmj(w_hat_n)/2 + w_hat_n - n + 1/2}}, n >= 2"
            }
            RuleId::R15a => "U_m number: w_hat_m = m",
            RuleId::R15b => "U_m number: w_hat*_n <= m",
            RuleId::R15c => "U_m number: w_hat_n <= m + n - 1",
            RuleId::R16a => "extremal: w_hat*_3 <= 3(2 + sqrt 5)/(1 + sqrt 5)",
            RuleId::R16b => "extremal: w_hat_3 <= 4",
            RuleId::R16c => "extremal: w_2 = 2 + sqrt 5",
            RuleId::R16d => "extremal: w_hat_2 = (3 + sqrt 5)/2",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum RuleStatus {
    Satisfied {
        #[serde(with = "inf_float")]
        slack: f64,
    },
    /// Part of the bracket box satisfies the rule and part violates it.
    SatisfiedWithinUncertainty {
        #[serde(with = "inf_float")]
        min_slack: f64,
        #[serde(with = "inf_float")]
        max_slack: f64,
    },
    Violated {
        #[serde(with = "inf_float")]
        slack: f64,
    },
    Inapplicable { reason: String },
    InsufficientData { missing: Vec<String> },
}

impl RuleStatus {
    pub fn is_violated(&self) -> bool {
        matches!(self, RuleStatus::Violated { .. })
    }

    pub fn slack(&self) -> Option<f64> {
        match self {
            RuleStatus::Satisfied { slack } | RuleStatus::Violated { slack } => Some(*slack),
            RuleStatus::SatisfiedWithinUncertainty { min_slack, .. } => Some(*min_slack),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            RuleStatus::Satisfied { .. } => "satisfied",
            RuleStatus::SatisfiedWithinUncertainty { .. } => "satisfied-within-uncertainty",
            RuleStatus::Violated { .. } => "violated",
            RuleStatus::Inapplicable { .. } => "inapplicable",
            RuleStatus::InsufficientData { .. } => "insufficient-data",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleResult {
    pub rule: RuleId,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub statement: String,
    #[serde(flatten)]
    pub status: RuleStatus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Consistent,
    Violated,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub verdict: Verdict,
    pub results: Vec<RuleResult>,
}

impl BoundReport {
    pub fn violations(&self) -> impl Iterator<Item = &RuleResult> {
        self.results.iter().filter(|r| r.status.is_violated())
    }

    pub fn find(&self, rule: RuleId, m: Option<usize>, n: Option<usize>) -> Option<&RuleResult> {
        self.results.iter().find(|r| r.rule == rule && r.m == m && r.n == n)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            let at = match (r.m, r.n) {
                (Some(m), Some(n)) => format!("m={m} n={n}"),
                (None, Some(n)) => format!("n={n}"),
                _ => "-".to_string(),
            };
            let detail = match &r.status {
                RuleStatus::Satisfied { slack } | RuleStatus::Violated { slack } => format!("slack {}", fmt_slack(*slack)),
                RuleStatus::SatisfiedWithinUncertainty { min_slack, max_slack } => {
                    format!("slack in [{}, {}]", fmt_slack(*min_slack), fmt_slack(*max_slack))
                }
                RuleStatus::Inapplicable { reason } => reason.clone(),
                RuleStatus::InsufficientData { missing } => format!("missing {}", missing.join(", ")),
            };
            out.push_str(&format!("{:<5} {:<10} {:<29} {}\n", r.rule.to_string(), at, r.status.label(), detail));
        }
        let v = self.violations().count();
        out.push_str(&format!("verdict: {} ({v} violated)\n", if v == 0 { "consistent" } else { "violated" }));
        out
    }
}

fn fmt_slack(s: f64) -> String {
    if s.is_infinite() {
        if s > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{s:.6}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Relation {
    /// The closure returns `rhs - lhs` directly.
    Slack,
    /// The closure returns `lhs - rhs` of an equality.
    Equal,
}

type Var = (Exponent, usize);
type Eval = Box<dyn Fn(&[f64]) -> f64>;
type Hyp = Box<dyn Fn(&[f64]) -> bool>;

struct Check {
    rule: RuleId,
    m: Option<usize>,
    n: Option<usize>,
    vars: Vec<Var>,
    hyp_vars: Vec<Var>,
    hyp: Option<(Hyp, &'static str)>,
    relation: Relation,
    eval: Eval,
}

impl Check {
    fn new(rule: RuleId, m: Option<usize>, n: Option<usize>, vars: Vec<Var>, eval: impl Fn(&[f64]) -> f64 + 'static) -> Self {
        Check { rule, m, n, vars, hyp_vars: vec![], hyp: None, relation: Relation::Slack, eval: Box::new(eval) }
    }

    fn equal(mut self) -> Self {
        self.relation = Relation::Equal;
        self
    }

    fn given(mut self, vars: Vec<Var>, reason: &'static str, hyp: impl Fn(&[f64]) -> bool + 'static) -> Self {
        self.hyp_vars = vars;
        self.hyp = Some((Box::new(hyp), reason));
        self
    }
}

/// `a - b`, with `inf - inf = 0`.
fn sub(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        a - b
    }
}

/// Slack of `lhs <= rhs`.
fn le(lhs: f64, rhs: f64) -> f64 {
    sub(rhs, lhs)
}

fn ge(lhs: f64, rhs: f64) -> f64 {
    sub(lhs, rhs)
}

fn samples(v: &ProfileValue) -> Vec<f64> {
    if v.is_point() {
        return vec![v.lo];
    }
    if v.hi.is_infinite() {
        let lo = v.lo;
        let base = lo.abs().max(1.0);
        return vec![lo, lo + 1.0, lo + base, lo + 10.0 * base, lo + 1e6 * base, f64::INFINITY];
    }
    (0..=8).map(|k| v.lo + (v.hi - v.lo) * f64::from(k) / 8.0).collect()
}

fn grid(values: &[ProfileValue]) -> Vec<Vec<f64>> {
    let mut points = vec![vec![]];
    for v in values {
        let s = samples(v);
        points = points.into_iter().flat_map(|p| s.iter().map(move |&x| [p.clone(), vec![x]].concat())).collect();
    }
    points
}

fn lookup(profile: &ExponentProfile, vars: &[Var]) -> Result<Vec<ProfileValue>, Vec<String>> {
    let mut missing = vec![];
    let mut out = vec![];
    for &(e, k) in vars {
        match profile.get(e, k) {
            Some(v) => out.push(v),
            None => missing.push(format!("{e}_{k}")),
        }
    }
    if missing.is_empty() {
        Ok(out)
    } else {
        Err(missing)
    }
}

fn run(check: &Check, profile: &ExponentProfile) -> RuleStatus {
    let values = match lookup(profile, &check.vars) {
        Ok(v) => v,
        Err(missing) => return RuleStatus::InsufficientData { missing },
    };
    if let Some((hyp, reason)) = &check.hyp {
        let hv = match lookup(profile, &check.hyp_vars) {
            Ok(v) => v,
            Err(missing) => return RuleStatus::InsufficientData { missing },
        };
        let outcomes: Vec<bool> = grid(&hv).iter().map(|p| hyp(p)).collect();
        if outcomes.iter().all(|&b| !b) {
            return RuleStatus::Inapplicable { reason: format!("hypothesis fails: {reason}") };
        }
        if !outcomes.iter().all(|&b| b) {
            return RuleStatus::Inapplicable { reason: format!("hypothesis undecided by the brackets: {reason}") };
        }
    }
    let raw: Vec<f64> = grid(&values).iter().map(|p| (check.eval)(p)).collect();
    if raw.iter().any(|s| s.is_nan()) {
        return RuleStatus::Inapplicable { reason: "bound undefined at these values".into() };
    }
    let (min, max) = match check.relation {
        Relation::Slack => {
            let min = raw.iter().copied().fold(f64::INFINITY, f64::min);
            let max = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            (min, max)
        }
        Relation::Equal => {
            let dmin = raw.iter().copied().fold(f64::INFINITY, f64::min);
            let dmax = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let worst = -raw.iter().map(|d| d.abs()).fold(0.0, f64::max);
            let best = if dmin <= 0.0 && dmax >= 0.0 { 0.0 } else { -dmin.abs().min(dmax.abs()) };
            (worst, best)
        }
    };
    if min >= -SLACK_TOLERANCE {
        RuleStatus::Satisfied { slack: min }
    } else if max < -SLACK_TOLERANCE {
        RuleStatus::Violated { slack: max }
    } else {
        RuleStatus::SatisfiedWithinUncertainty { min_slack: min, max_slack: max }
    }
}

use Exponent::{WHat, WHatStar, WStar, W};

fn single_degree(rule: RuleId, n: usize) -> Vec<Check> {
    let nf = n as f64;
    let nu = n as u32;
    let c = |vars: Vec<Var>, f: Box<dyn Fn(&[f64]) -> f64>| Check { rule, m: None, n: Some(n), vars, hyp_vars: vec![], hyp: None, relation: Relation::Slack, eval: f };
    let v = match rule {
        RuleId::R1a => c(vec![(W, n), (WHat, n)], Box::new(|x| ge(x[0], x[1]))),
        RuleId::R1b => c(vec![(WHat, n)], Box::new(move |x| ge(x[0], nf))),
        RuleId::R2a => c(vec![(WHatStar, n)], Box::new(|x| ge(x[0], 1.0))),
        RuleId::R2b => c(vec![(WHatStar, n), (WHat, n)], Box::new(|x| le(x[0], x[1]))),
        RuleId::R2c => c(vec![(WHat, n)], Box::new(move |x| le(x[0], 2.0 * nf - 1.0))),
        RuleId::R4a => {
            let t = tomcat1(nu).to_f64();
            c(vec![(WHat, n)], Box::new(move |x| le(x[0], t)))
        }
        RuleId::R5 => c(vec![(W, n), (WHat, n)], Box::new(move |x| ge(x[0], ssmj_floor(nu, x[1])))),
        RuleId::R7a => c(vec![(WStar, n), (W, n)], Box::new(|x| le(x[0], x[1]))),
        RuleId::R7b => c(vec![(W, n), (WStar, n)], Box::new(move |x| le(x[0], x[1] + nf - 1.0))),
        RuleId::R7c => c(vec![(WHatStar, n), (WHat, n)], Box::new(|x| le(x[0], x[1]))),
        RuleId::R7d => c(vec![(WHat, n), (WHatStar, n)], Box::new(move |x| le(x[0], x[1] + nf - 1.0))),
        RuleId::R8 => c(vec![(WStar, n), (WHat, n)], Box::new(move |x| ge(x[0], x[1] / (x[1] - nf + 1.0))))
            .given(vec![(WHat, n)], "w_hat_n > n - 1", move |x| x[0] > nf - 1.0),
        RuleId::R12a => c(vec![(WHat, n), (WStar, n)], Box::new(move |x| le(x[0], (2.0 * (x[1] + nf) - 1.0) / 3.0))),
        RuleId::R12b => c(vec![(WHatStar, n), (WStar, n)], Box::new(move |x| ge(x[0], fussball_bound(nf, x[1]))))
            .given(vec![(W, n)], "w_n <= 2n - 1", move |x| x[0] <= 2.0 * nf - 1.0),
        RuleId::R13 => {
            let b = classic_star_floor(nu).to_f64();
            c(vec![(WStar, n)], Box::new(move |x| ge(x[0], b)))
        }
        RuleId::R14a => c(
            vec![(WStar, n), (WHat, n), (W, n)],
            Box::new(move |x| {
                let (wh, w) = (x[1], x[2]);
                let t2 = w - (nf - 1.0) / 2.0 + (wh - nf) / 2.0;
                let t3 = (w + 1.0) / 2.0 + wh - nf;
                ge(x[0], wh.min(t2).min(t3))
            }),
        ),
        RuleId::R14b => c(
            vec![(WStar, n), (WHat, n)],
            Box::new(move |x| {
                let wh = x[1];
                let third = 0.5 * ssmj_floor(nu, wh) + wh - nf + 0.5;
                ge(x[0], (wh / (wh - nf + 1.0)).max(wh.min(third)))
            }),
        )
        .given(vec![(WHat, n)], "w_hat_n > n - 1", move |x| x[0] > nf - 1.0),
        _ => unreachable!("{rule} is not a single-degree rule"),
    };
    vec![v]
}

/// The right side of the floor for `w_hat*_n` in terms of `x = w*_n`.
fn fussball_bound(n: f64, x: f64) -> f64 {
    if n == 1.0 || x.is_infinite() {
        return 1.0;
    }
    let den = 2.0 * x * x - n * x - n;
    if den <= 0.0 {
        return f64::NAN;
    }
    (2.0 * x * x - x - 2.0 * n + 1.0) / den
}

fn min_degree(rule: RuleId) -> usize {
    match rule {
        RuleId::R4a | RuleId::R5 | RuleId::R8 | RuleId::R14b => 2,
        RuleId::R13 => 3,
        _ => 1,
    }
}

fn fixed(rule: RuleId) -> Check {
    let s5 = 5f64.sqrt();
    match rule {
        RuleId::R3 => {
            let b = what2_ceiling().to_f64();
            Check::new(rule, None, Some(2), vec![(WHat, 2)], move |x| le(x[0], b))
        }
        RuleId::R4b => {
            let b = tomcat2().to_f64();
            Check::new(rule, None, Some(3), vec![(WHat, 3)], move |x| le(x[0], b))
        }
        RuleId::R6 => Check::new(rule, None, Some(3), vec![(W, 3), (WHat, 3)], |x| {
            let wh = x[1];
            ge(x[0], wh * ((4.0 * wh - 3.0).sqrt() - 1.0) / 2.0)
        }),
        RuleId::R16a => {
            let b = extremal_star3().to_f64();
            Check::new(rule, None, Some(3), vec![(WHatStar, 3)], move |x| le(x[0], b))
        }
        RuleId::R16b => Check::new(rule, None, Some(3), vec![(WHat, 3)], |x| le(x[0], 4.0)),
        RuleId::R16c => {
            let b = extremal_w2().to_f64();
            Check::new(rule, None, Some(2), vec![(W, 2)], move |x| sub(x[0], b)).equal()
        }
        RuleId::R16d => Check::new(rule, None, Some(2), vec![(WHat, 2)], move |x| sub(x[0], (3.0 + s5) / 2.0)).equal(),
        _ => unreachable!("{rule} is not a fixed-degree rule"),
    }
}

fn pair(rule: RuleId, m: usize, n: usize, profile: &ExponentProfile) -> Check {
    let (mf, nf) = (m as f64, n as f64);
    match rule {
        RuleId::R9 => Check::new(rule, Some(m), Some(n), vec![(WHat, n), (W, m)], move |x| {
            let (wh, w) = (x[0], x[1]);
            le(wh, mf + (nf - 1.0) * wh / w)
        })
        .given(vec![(W, n - 1), (W, m)], "w_{n-1} < w_m", |x| x[0] < x[1]),
        RuleId::R10 => Check::new(rule, Some(m), Some(n), vec![(W, m), (WHat, n)], move |x| le(x[0].min(x[1]), mf + nf - 1.0)),
        RuleId::R11 => {
            let c = Check::new(rule, Some(m), Some(n), vec![(WHatStar, n), (W, m)], move |x| {
                let (s, w) = (x[0], x[1]);
                le(s, (mf + (nf - 1.0) * s / w).min(w))
            });
            if m >= n {
                return c;
            }
            // w_m > n + m - 1 settles the hypothesis without looking at w*_n
            let big = profile.get(W, m).is_some_and(|w| w.lo > mf + nf - 1.0);
            if big {
                c
            } else {
                c.given(vec![(W, m), (WStar, n)], "m >= n or w_m > min{n+m-1, w*_n}", move |x| x[0] > (nf + mf - 1.0).min(x[1]))
            }
        }
        _ => unreachable!("{rule} is not a two-degree rule"),
    }
}

fn result(check: &Check, profile: &ExponentProfile) -> RuleResult {
    let status = if !profile.transcendental && check.rule != RuleId::R1a {
        RuleStatus::Inapplicable { reason: "stated for transcendental numbers".into() }
    } else {
        run(check, profile)
    };
    RuleResult { rule: check.rule, m: check.m, n: check.n, statement: check.rule.statement().into(), status }
}

fn placeholder(rule: RuleId, status: RuleStatus) -> RuleResult {
    RuleResult { rule, m: None, n: None, statement: rule.statement().into(), status }
}

fn no_degrees(rule: RuleId) -> RuleResult {
    placeholder(rule, RuleStatus::InsufficientData { missing: vec!["an admissible degree".into()] })
}

/// Evaluates one rule at every admissible degree (pair) of the profile.
pub fn evaluate_rule(rule: RuleId, profile: &ExponentProfile) -> Vec<RuleResult> {
    let degrees: Vec<usize> = profile.degrees.keys().copied().filter(|&d| d >= 1).collect();
    let extremal_only = matches!(rule, RuleId::R16a | RuleId::R16b | RuleId::R16c | RuleId::R16d);
    if extremal_only && !profile.extremal {
        let mut r = result(&fixed(rule), profile);
        if !matches!(r.status, RuleStatus::InsufficientData { .. }) {
            r.status = RuleStatus::Inapplicable { reason: "profile is not marked extremal".into() };
        }
        return vec![r];
    }
    match rule {
        RuleId::R3 | RuleId::R4b | RuleId::R6 | RuleId::R16a | RuleId::R16b | RuleId::R16c | RuleId::R16d => {
            vec![result(&fixed(rule), profile)]
        }
        RuleId::R9 | RuleId::R10 | RuleId::R11 => {
            let mut out = vec![];
            for &m in &degrees {
                for &n in &degrees {
                    if rule == RuleId::R9 && !(m >= n && n >= 2) {
                        continue;
                    }
                    out.push(result(&pair(rule, m, n, profile), profile));
                }
            }
            if out.is_empty() {
                out.push(no_degrees(rule));
            }
            out
        }
        RuleId::R15a | RuleId::R15b | RuleId::R15c => um_rules(rule, profile, &degrees),
        _ => {
            let ns: Vec<usize> = degrees.iter().copied().filter(|&d| d >= min_degree(rule)).collect();
            if ns.is_empty() {
                return vec![no_degrees(rule)];
            }
            ns.into_iter().flat_map(|n| single_degree(rule, n)).map(|c| result(&c, profile)).collect()
        }
    }
}

/// The `m` of a `U_m` profile: the least degree with `w_m = inf` exactly and `w_{m-1}` finite.
pub fn um_degree(profile: &ExponentProfile) -> Result<usize, RuleStatus> {
    let mut any = false;
    for (&d, e) in &profile.degrees {
        let Some(w) = e.w else { continue };
        any = true;
        if w.lo != f64::INFINITY {
            continue;
        }
        if d == 1 {
            return Ok(1);
        }
        return match profile.get(W, d - 1) {
            Some(prev) if prev.hi < f64::INFINITY => Ok(d),
            Some(_) => Err(RuleStatus::Inapplicable { reason: format!("w_{} is not known to be finite", d - 1) }),
            None => Err(RuleStatus::InsufficientData { missing: vec![format!("w_{}", d - 1)] }),
        };
    }
    if any {
        Err(RuleStatus::Inapplicable { reason: "no w_m is exactly infinite".into() })
    } else {
        Err(RuleStatus::InsufficientData { missing: vec!["w_m = inf".into()] })
    }
}

fn um_rules(rule: RuleId, profile: &ExponentProfile, degrees: &[usize]) -> Vec<RuleResult> {
    let m = match um_degree(profile) {
        Ok(m) => m,
        Err(status) => return vec![placeholder(rule, status)],
    };
    let mf = um_corollary(m, 1).0 as f64;
    let checks: Vec<Check> = match rule {
        RuleId::R15a => vec![Check::new(rule, Some(m), Some(m), vec![(WHat, m)], move |x| sub(x[0], mf)).equal()],
        RuleId::R15b => degrees
            .iter()
            .map(|&n| Check::new(rule, Some(m), Some(n), vec![(WHatStar, n)], move |x| le(x[0], um_corollary(m, n).1 as f64)))
            .collect(),
        RuleId::R15c => degrees
            .iter()
            .map(|&n| Check::new(rule, Some(m), Some(n), vec![(WHat, n)], move |x| le(x[0], um_corollary(m, n).2 as f64)))
            .collect(),
        _ => unreachable!(),
    };
    if checks.is_empty() {
        return vec![no_degrees(rule)];
    }
    checks.iter().map(|c| result(c, profile)).collect()
}

/// `(w_hat_m, ceiling of w_hat*_n, ceiling of w_hat_n)` for a `U_m` number.
pub fn um_corollary(m: usize, n: usize) -> (usize, usize, usize) {
    assert!(m >= 1 && n >= 1, "degrees start at 1");
    (m, m, m + n - 1)
}

/// Applies the whole catalog in a fixed order.
pub fn consistency_check(profile: &ExponentProfile) -> BoundReport {
    let results: Vec<RuleResult> = RuleId::ALL.iter().flat_map(|&r| evaluate_rule(r, profile)).collect();
    let verdict = if results.iter().any(|r| r.status.is_violated()) { Verdict::Violated } else { Verdict::Consistent };
    BoundReport { verdict, results }
}

/// One row of the per-degree constants table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantsRow {
    pub n: u32,
    pub r1_floor: String,
    pub r2_ceiling: String,
    pub r3: String,
    pub r4_tomcat1: String,
    pub r4_tomcat2: String,
    pub r9_crossing: String,
    pub r12_floor: String,
    pub r13: String,
    pub r14_improved_floor: String,
}

pub const CONSTANTS_HEADER: [&str; 10] =
    ["n", "R1_floor", "R2_ceiling", "R3", "R4_tomcat1", "R4_tomcat2", "R9_crossing", "R12_floor", "R13", "R14_improved_floor"];

/// Constants of the catalog at degree `n`, as decimals with `digits` places. Cells that do not
/// apply at `n` are empty.
pub fn constants_row(n: u32, digits: u32) -> ConstantsRow {
    use super::constants::{crossing_point, fussball_floor, Surd};
    use num_rational::BigRational;
    let int = |v: u32| Surd::rational(BigRational::from_integer(v.into())).to_decimal(digits);
    let improved = if n >= 2 { format!("{:.*}", digits.min(12) as usize, improved_star_floor(n)) } else { String::new() };
    ConstantsRow {
        n,
        r1_floor: int(n),
        r2_ceiling: int(2 * n - 1),
        r3: if n == 2 { what2_ceiling().to_decimal(digits) } else { String::new() },
        r4_tomcat1: if n >= 2 { tomcat1(n).to_decimal(digits) } else { String::new() },
        r4_tomcat2: if n == 3 { tomcat2().to_decimal(digits) } else { String::new() },
        r9_crossing: crossing_point(n).map(|s| s.to_decimal(digits)).unwrap_or_default(),
        r12_floor: fussball_floor(n).to_decimal(digits),
        r13: if n >= 3 { classic_star_floor(n).to_decimal(digits) } else { String::new() },
        r14_improved_floor: improved,
    }
}

impl ConstantsRow {
    pub fn cells(&self) -> [String; 10] {
        [
            self.n.to_string(),
            self.r1_floor.clone(),
            self.r2_ceiling.clone(),
            self.r3.clone(),
            self.r4_tomcat1.clone(),
            self.r4_tomcat2.clone(),
            self.r9_crossing.clone(),
            self.r12_floor.clone(),
            self.r13.clone(),
            self.r14_improved_floor.clone(),
        ]
    }
}

/// CSV text of [`constants_row`] for every `n` in the range.
pub fn constants_csv(ns: impl IntoIterator<Item = u32>, digits: u32) -> String {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(CONSTANTS_HEADER).expect("in-memory write");
    for n in ns {
        w.write_record(constants_row(n, digits).cells()).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("ascii")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn only(report: &[RuleResult]) -> &RuleStatus {
        assert_eq!(report.len(), 1, "{report:?}");
        &report[0].status
    }

    #[test]
    fn what2_ceiling_on_rounded_value() {
        let p = ExponentProfile::default().with(WHat, 2, 2.618034);
        match only(&evaluate_rule(RuleId::R3, &p)) {
            RuleStatus::Satisfied { slack } => assert!(slack.abs() < 1e-6),
            s => panic!("{s:?}"),
        }
    }

    #[test]
    fn tomcat2_violation() {
        let p = ExponentProfile::default().with(WHat, 3, 4.5);
        match only(&evaluate_rule(RuleId::R4b, &p)) {
            RuleStatus::Violated { slack } => assert!((slack + 0.0858).abs() < 1e-4, "{slack}"),
            s => panic!("{s:?}"),
        }
    }

    #[test]
    fn extremal_profile_is_consistent_with_tight_r9() {
        let p = ExponentProfile::extremal_exact();
        let report = consistency_check(&p);
        assert_eq!(report.verdict, Verdict::Consistent, "{}", report.summary());
        let r9 = report.find(RuleId::R9, Some(2), Some(2)).unwrap();
        match r9.status {
            RuleStatus::Satisfied { slack } => assert!(slack.abs() < 1e-12),
            ref s => panic!("{s:?}"),
        }
        let r16b = report.find(RuleId::R16b, None, Some(3)).unwrap();
        assert!(matches!(r16b.status, RuleStatus::InsufficientData { .. }));
        assert!(matches!(report.find(RuleId::R16c, None, Some(2)).unwrap().status, RuleStatus::Satisfied { .. }));
    }

    #[test]
    fn liouville_profile_meets_um_corollary() {
        let report = consistency_check(&ExponentProfile::liouville(4));
        assert_eq!(report.verdict, Verdict::Consistent, "{}", report.summary());
        for rule in [RuleId::R15a, RuleId::R15b, RuleId::R15c] {
            let rows: Vec<_> = report.results.iter().filter(|r| r.rule == rule).collect();
            assert!(!rows.is_empty());
            for r in rows {
                assert_eq!(r.m, Some(1));
                assert!(matches!(r.status, RuleStatus::Satisfied { .. }), "{r:?}");
            }
        }
    }

    #[test]
    fn empty_profile_lacks_data_everywhere() {
        let report = consistency_check(&ExponentProfile::default());
        assert_eq!(report.results.len(), RuleId::ALL.len());
        assert!(report.results.iter().all(|r| matches!(r.status, RuleStatus::InsufficientData { .. })));
    }

    #[test]
    fn brackets_need_full_violation() {
        let mut p = ExponentProfile::default();
        p.set(WHat, 3, ProfileValue::measured(4.3, 4.6));
        assert!(matches!(only(&evaluate_rule(RuleId::R4b, &p)), RuleStatus::SatisfiedWithinUncertainty { .. }));
        p.set(WHat, 3, ProfileValue::measured(4.45, 4.6));
        assert!(only(&evaluate_rule(RuleId::R4b, &p)).is_violated());
    }

    #[test]
    fn r9_hypothesis_needs_disjoint_brackets() {
        let mut p = ExponentProfile::default().with(WHat, 2, 2.5);
        p.set(W, 1, ProfileValue::measured(1.0, 3.0));
        p.set(W, 2, ProfileValue::measured(2.0, 4.0));
        let r = evaluate_rule(RuleId::R9, &p);
        let row = r.iter().find(|r| r.m == Some(2) && r.n == Some(2)).unwrap();
        assert!(matches!(row.status, RuleStatus::Inapplicable { .. }), "{row:?}");
        p.set(W, 2, ProfileValue::exact(f64::INFINITY));
        let r = evaluate_rule(RuleId::R9, &p);
        let row = r.iter().find(|r| r.m == Some(2) && r.n == Some(2)).unwrap();
        // ceiling m at w_m = inf
        match row.status {
            RuleStatus::Violated { slack } => assert!((slack + 0.5).abs() < 1e-12),
            ref s => panic!("{s:?}"),
        }
    }

    #[test]
    fn fussball_needs_its_hypothesis() {
        let mut p = ExponentProfile::default().with(WStar, 3, 3.0).with(WHatStar, 3, 1.8);
        p.set(W, 3, ProfileValue::exact(6.0));
        assert!(matches!(only(&evaluate_rule(RuleId::R12b, &p)), RuleStatus::Inapplicable { .. }));
        p.set(W, 3, ProfileValue::exact(4.0));
        assert!(matches!(only(&evaluate_rule(RuleId::R12b, &p)), RuleStatus::Satisfied { .. }));
    }

    #[test]
    fn fussball_floor_at_n() {
        for n in 2..=10u32 {
            let nf = f64::from(n);
            assert!((fussball_bound(nf, nf) - (2.0 * nf - 1.0) / nf).abs() < 1e-12);
        }
    }

    #[test]
    fn algebraic_profiles_skip_transcendental_rules() {
        let p = ExponentProfile { transcendental: false, ..Default::default() }.with(W, 2, 1.0).with(WHat, 2, 1.0);
        let report = consistency_check(&p);
        assert!(matches!(report.find(RuleId::R1a, None, Some(2)).unwrap().status, RuleStatus::Satisfied { .. }));
        assert!(matches!(report.find(RuleId::R1b, None, Some(2)).unwrap().status, RuleStatus::Inapplicable { .. }));
    }

    #[test]
    fn um_corollary_values() {
        assert_eq!(um_corollary(1, 5), (1, 1, 5));
        assert_eq!(um_corollary(2, 3), (2, 2, 4));
        assert_eq!(um_corollary(4, 1), (4, 4, 4));
    }

    #[test]
    fn constants_table() {
        let csv = constants_csv(2..=3, 10);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CONSTANTS_HEADER.join(","));
        assert!(lines[1].starts_with("2,2.0000000000,3.0000000000,2.6180339887,2.6180339887,,"));
        assert!(lines[2].contains("4.5615528128,4.4142135624,"));
        assert_eq!(lines.len(), 3);
    }

    #[test]
    fn json_report_keeps_infinity() {
        let mut p = ExponentProfile::default().with(W, 2, f64::INFINITY);
        p.set(WHat, 2, ProfileValue::exact(2.0));
        let report = consistency_check(&p);
        let s = report.to_json();
        assert!(s.contains("\"slack\": \"inf\""), "{s}");
        let back: BoundReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, report);
    }
}
