//! Seeded Monte-Carlo threshold experiments: manifests, binomial sampling
//! of ground sets, per-density success estimation with Wilson intervals,
//! and a deterministic crossing fit over the resulting curve.

use num_rational::Rational64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::{turan_density_reference, TuranDensity};
use crate::generators::{ConfigSpec, Family};
use crate::hypergraph::UniformHypergraph;
use crate::matrix::threshold_exponent;
use crate::seeds::{bernoulli, derive};
use crate::solver::{alpha_decision, arrow_target, Decision, DEFAULT_BUDGET};
use crate::subset::VertexSubset;
use crate::{Error, Result};

/// Parses an exact rational from "a/b", an integer, or a finite decimal
/// such as "0.25" (kept exact, never via float).
pub fn parse_ratio(text: &str) -> Result<Rational64> {
    let bad = || Error::format(format!("cannot parse rational from {text:?}"));
    let t = text.trim();
    if let Some((a, b)) = t.split_once('/') {
        let numer: i64 = a.trim().parse().map_err(|_| bad())?;
        let denom: i64 = b.trim().parse().map_err(|_| bad())?;
        if denom == 0 {
            return Err(bad());
        }
        return Ok(Rational64::new(numer, denom));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        if frac.is_empty() || frac.len() > 15 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole: i64 = if whole == "-" || whole.is_empty() {
            0
        } else {
            whole.parse().map_err(|_| bad())?
        };
        let scale = 10i64.pow(frac.len() as u32);
        let frac: i64 = frac.parse().map_err(|_| bad())?;
        let numer = whole
            .checked_mul(scale)
            .and_then(|w| {
                if negative {
                    w.checked_sub(frac)
                } else {
                    w.checked_add(frac)
                }
            })
            .ok_or_else(bad)?;
        return Ok(Rational64::new(numer, scale));
    }
    let numer: i64 = t.parse().map_err(|_| bad())?;
    Ok(Rational64::new(numer, 1))
}

/// Serde adapter storing a rational as the string "numer/denom".
pub mod ratio_text {
    use num_rational::Rational64;
    use serde::{de::Error as DeError, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        r: &Rational64,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Rational64, D::Error> {
        let raw = String::deserialize(d)?;
        super::parse_ratio(&raw).map_err(D::Error::custom)
    }
}

/// Serde adapter for optional rationals in the "numer/denom" form.
pub mod ratio_text_opt {
    use num_rational::Rational64;
    use serde::{de::Error as DeError, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        r: &Option<Rational64>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match r {
            Some(r) => super::ratio_text::serialize(r, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Rational64>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|raw| super::parse_ratio(&raw).map_err(D::Error::custom))
            .transpose()
    }
}

/// Binomial random subset of 0..m: each index kept independently with
/// probability q, deterministically from the seed.
pub fn sample_subset(m: usize, q: f64, seed: u64) -> VertexSubset {
    let mut s = VertexSubset::empty(m);
    for idx in 0..m {
        if bernoulli(seed, idx as u64, q) {
            s.insert(idx);
        }
    }
    s
}

/// Densities to sweep: given directly, or as multiples of the threshold
/// scale n^(-theta).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QSchedule {
    Explicit { values: Vec<f64> },
    CGrid { factors: Vec<f64> },
}

impl QSchedule {
    pub fn resolve(&self, n: usize, theta: Rational64) -> Result<Vec<f64>> {
        let theta_f = *theta.numer() as f64 / *theta.denom() as f64;
        let scale = (n as f64).powf(-theta_f);
        let qs: Vec<f64> = match self {
            QSchedule::Explicit { values } => values.clone(),
            QSchedule::CGrid { factors } => factors.iter().map(|c| c * scale).collect(),
        };
        if qs.is_empty() {
            return Err(Error::invalid("empty density schedule".to_string()));
        }
        for &q in &qs {
            if !(q > 0.0 && q <= 1.0) {
                return Err(Error::invalid(format!(
                    "schedule density {q} outside (0,1]"
                )));
            }
        }
        Ok(qs)
    }
}

fn default_budget() -> u64 {
    DEFAULT_BUDGET
}

/// Complete description of a threshold experiment; serializes to JSON and
/// round-trips bit-exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentManifest {
    #[serde(flatten)]
    pub config: ConfigSpec,
    #[serde(with = "ratio_text")]
    pub epsilon: Rational64,
    pub schedule: QSchedule,
    pub trials: usize,
    pub seed: u64,
    #[serde(default = "default_budget")]
    pub budget: u64,
    /// Extremal density to use when the pattern's value is unknown.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "ratio_text_opt")]
    pub pi_override: Option<Rational64>,
    /// Default curve CSV destination; flags may override it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

/// One density's aggregated trial results.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurveRow {
    pub q: f64,
    pub trials: usize,
    pub successes: usize,
    pub undecided: usize,
    /// Trials succeeding because no subset was large enough to qualify.
    pub vacuous: usize,
    /// Success fraction among decided trials; NaN when every trial was
    /// undecided.
    pub estimate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    /// More than 10% of trials hit the solver budget.
    pub unreliable: bool,
}

pub const CURVE_CSV_HEADER: &str = "q,trials,successes,undecided,estimate,ci_lo,ci_hi";

impl CurveRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.q,
            self.trials,
            self.successes,
            self.undecided,
            self.estimate,
            self.ci_lo,
            self.ci_hi
        )
    }

    /// Reads back a row written by `csv_line`. The vacuous count is not
    /// part of the CSV; it comes back as 0.
    pub fn from_csv_line(line: &str) -> Result<CurveRow> {
        let bad = || Error::format(format!("malformed curve row {line:?}"));
        let f: Vec<&str> = line.trim().split(',').collect();
        if f.len() != 7 {
            return Err(bad());
        }
        let q: f64 = f[0].parse().map_err(|_| bad())?;
        let trials: usize = f[1].parse().map_err(|_| bad())?;
        let successes: usize = f[2].parse().map_err(|_| bad())?;
        let undecided: usize = f[3].parse().map_err(|_| bad())?;
        let estimate: f64 = f[4].parse().map_err(|_| bad())?;
        let ci_lo: f64 = f[5].parse().map_err(|_| bad())?;
        let ci_hi: f64 = f[6].parse().map_err(|_| bad())?;
        if successes + undecided > trials {
            return Err(bad());
        }
        Ok(CurveRow {
            q,
            trials,
            successes,
            undecided,
            vacuous: 0,
            estimate,
            ci_lo,
            ci_hi,
            unreliable: undecided * 10 > trials,
        })
    }
}

/// 95% Wilson score interval for `successes` out of `decided`.
pub fn wilson_interval(successes: usize, decided: usize) -> (f64, f64) {
    if decided == 0 {
        return (0.0, 1.0);
    }
    const Z: f64 = 1.96;
    let n = decided as f64;
    let p = successes as f64 / n;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Fitted transition location, or the reason there is none.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Crossing {
    Found { q_star: f64, method: String },
    #[serde(rename = "none")]
    Absent { reason: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct ThresholdCurve {
    pub rows: Vec<CurveRow>,
    pub crossing: Crossing,
}

enum TargetRule {
    /// Success when alpha(H[X]) < ceil(epsilon * |X|).
    Arrow(Rational64),
    /// Success when alpha(H[X]) <= floor(threshold * |X|).
    ExtremalCount(Rational64),
}

enum TrialOutcome {
    Success { vacuous: bool },
    Failure,
    Undecided,
}

/// A validated, ready-to-run experiment.
pub struct Experiment {
    manifest: ExperimentManifest,
    h: UniformHypergraph,
    qs: Vec<f64>,
    rule: TargetRule,
}

impl Experiment {
    pub fn prepare(manifest: ExperimentManifest) -> Result<Self> {
        manifest.config.validate()?;
        if manifest.trials == 0 {
            return Err(Error::invalid("at least one trial required".to_string()));
        }
        if manifest.budget == 0 {
            return Err(Error::invalid("solver budget must be positive".to_string()));
        }
        let eps = manifest.epsilon;
        if eps <= Rational64::new(0, 1) || eps > Rational64::new(1, 1) {
            return Err(Error::invalid(format!(
                "epsilon must be in (0,1], got {eps}"
            )));
        }
        let theta = threshold_exponent(&manifest.config)?;
        let qs = manifest.schedule.resolve(manifest.config.n, theta)?;
        let h = manifest.config.build()?;
        let rule = match &manifest.config.family {
            Family::PatternCopies { pattern, .. } => {
                let pi = match manifest.pi_override {
                    Some(pi) => pi,
                    None => match turan_density_reference(pattern)? {
                        TuranDensity::Known(pi) => pi,
                        TuranDensity::Unknown => {
                            return Err(Error::invalid(
                                "pattern has unknown extremal density; set pi_override"
                                    .to_string(),
                            ))
                        }
                    },
                };
                TargetRule::ExtremalCount(pi + eps)
            }
            _ => TargetRule::Arrow(eps),
        };
        Ok(Experiment {
            manifest,
            h,
            qs,
            rule,
        })
    }

    pub fn manifest(&self) -> &ExperimentManifest {
        &self.manifest
    }

    pub fn hypergraph(&self) -> &UniformHypergraph {
        &self.h
    }

    pub fn densities(&self) -> &[f64] {
        &self.qs
    }

    fn decide(&self, x: &VertexSubset) -> TrialOutcome {
        let s = x.len();
        let target = match &self.rule {
            TargetRule::Arrow(eps) => {
                if s == 0 {
                    // The empty subset qualifies at threshold zero and
                    // spans no edge, so the arrow property fails outright.
                    return TrialOutcome::Failure;
                }
                arrow_target(s, *eps)
            }
            TargetRule::ExtremalCount(thr) => {
                let num = *thr.numer() as i128;
                let den = *thr.denom() as i128;
                ((num * s as i128).div_euclid(den)) as usize + 1
            }
        };
        if target > s {
            return TrialOutcome::Success { vacuous: true };
        }
        let induced = self
            .h
            .induced(x)
            .expect("sample lies in the vertex domain");
        match alpha_decision(&induced.hypergraph, target, self.manifest.budget) {
            Decision::AtLeast => TrialOutcome::Failure,
            Decision::LessThan => TrialOutcome::Success { vacuous: false },
            Decision::Undecided => TrialOutcome::Undecided,
        }
    }

    /// Runs all trials of one scheduled density. Trial t of density index
    /// qi draws its seed from (master, qi, t), so results do not depend on
    /// thread count or execution order.
    pub fn run_row(&self, qi: usize) -> Result<CurveRow> {
        let q = *self
            .qs
            .get(qi)
            .ok_or_else(|| Error::invalid(format!("density index {qi} out of range")))?;
        let n = self.h.vertex_count();
        let trials = self.manifest.trials;
        let seed = self.manifest.seed;
        let outcomes: Vec<TrialOutcome> = (0..trials)
            .into_par_iter()
            .map(|t| {
                let ts = derive(seed, qi as u64, t as u64);
                let x = sample_subset(n, q, ts);
                self.decide(&x)
            })
            .collect();
        let mut successes = 0;
        let mut undecided = 0;
        let mut vacuous = 0;
        for o in &outcomes {
            match o {
                TrialOutcome::Success { vacuous: v } => {
                    successes += 1;
                    if *v {
                        vacuous += 1;
                    }
                }
                TrialOutcome::Failure => {}
                TrialOutcome::Undecided => undecided += 1,
            }
        }
        let decided = trials - undecided;
        let estimate = if decided > 0 {
            successes as f64 / decided as f64
        } else {
            f64::NAN
        };
        let (ci_lo, ci_hi) = wilson_interval(successes, decided);
        Ok(CurveRow {
            q,
            trials,
            successes,
            undecided,
            vacuous,
            estimate,
            ci_lo,
            ci_hi,
            unreliable: undecided * 10 > trials,
        })
    }

    /// Runs every scheduled density in order, handing each finished row to
    /// the callback (for incremental persistence) before moving on.
    pub fn sweep<F: FnMut(&CurveRow) -> Result<()>>(
        &self,
        mut on_row: F,
    ) -> Result<ThresholdCurve> {
        let mut rows = Vec::with_capacity(self.qs.len());
        for qi in 0..self.qs.len() {
            let row = self.run_row(qi)?;
            on_row(&row)?;
            rows.push(row);
        }
        let crossing = if rows.len() >= 2 {
            estimate_crossing(&rows)?
        } else {
            Crossing::Absent {
                reason: "fewer than 2 rows".to_string(),
            }
        };
        Ok(ThresholdCurve { rows, crossing })
    }
}

/// Fits a logistic curve in ln q by weighted least squares over a fixed
/// (midpoint, slope) grid and reports the midpoint. Returns a reason
/// instead when the estimates never span [0.25, 0.75] or the fit is
/// degenerate. Deterministic: no iterative optimizer.
pub fn estimate_crossing(rows: &[CurveRow]) -> Result<Crossing> {
    if rows.len() < 2 {
        return Err(Error::invalid("crossing fit needs at least 2 rows".to_string()));
    }
    let pts: Vec<(f64, f64, f64)> = rows
        .iter()
        .filter(|r| r.trials > r.undecided && r.estimate.is_finite())
        .map(|r| (r.q.ln(), r.estimate, (r.trials - r.undecided) as f64))
        .collect();
    if pts.len() < 2 {
        return Ok(Crossing::Absent {
            reason: "fewer than 2 decided rows".to_string(),
        });
    }
    let lo_est = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let hi_est = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    if !(lo_est <= 0.25 && hi_est >= 0.75) {
        return Ok(Crossing::Absent {
            reason: "estimates do not span [0.25, 0.75]".to_string(),
        });
    }
    let lo = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    if !(hi > lo) {
        return Ok(Crossing::Absent {
            reason: "all decided rows share one density".to_string(),
        });
    }
    const STEPS: usize = 200;
    const SLOPES: [f64; 7] = [0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0];
    let mut best: Option<(f64, f64)> = None;
    for j in 0..=STEPS {
        let mid = lo + (hi - lo) * j as f64 / STEPS as f64;
        for &magnitude in &SLOPES {
            for slope in [magnitude, -magnitude] {
                let sse: f64 = pts
                    .iter()
                    .map(|&(x, y, w)| {
                        let fit = 1.0 / (1.0 + (-slope * (x - mid)).exp());
                        w * (y - fit) * (y - fit)
                    })
                    .sum();
                if best.map_or(true, |(b, _)| sse < b) {
                    best = Some((sse, mid));
                }
            }
        }
    }
    let (_, mid) = best.expect("grid is nonempty");
    Ok(Crossing::Found {
        q_star: mid.exp(),
        method: "logistic-grid".to_string(),
    })
}

/// First-moment reference: (q |V|, q^k |E|).
pub fn expected_counts(h: &UniformHypergraph, q: f64) -> (f64, f64) {
    (
        q * h.vertex_count() as f64,
        q.powi(h.uniformity() as i32) * h.edge_count() as f64,
    )
}
