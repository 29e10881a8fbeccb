use rand::Rng as _;
use rayon::prelude::*;
use serde_json::json;

use super::{Check, CheckContext, Trial};
use crate::error::Result;
use crate::fields::limsup_conditions;
use crate::nodes::NodeSystem;
use crate::rng::{self, Rng};
use crate::sumtrans::{MaximaVector, Problem};

/// Deviations at or below this level count as exact zeros.
pub const FLOOR: f64 = 1e-14;
const MIN_GAP: f64 = 0.05;
const TAIL: [f64; 3] = [1e-10, 1e-11, 1e-12];
const USC_TOL: f64 = 1e-9;
const LSC_TOL: f64 = 1e-6;
/// Safety factor on the locally measured slope for the tail sequence.
const SLOPE_FACTOR: f64 = 10.0;
const BASE_TRIES: usize = 200;

pub struct Continuity;

/// Strict decay, allowing a run of (numerically) exact zeros.
pub fn decays(series: &[f64]) -> bool {
    series
        .windows(2)
        .all(|w| w[1] < w[0] || (w[0] <= FLOOR && w[1] <= FLOOR))
}

fn base_point(p: &Problem, rng: &mut Rng) -> Option<(NodeSystem, MaximaVector)> {
    let n = p.n();
    for _ in 0..BASE_TRIES {
        let mut v: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        v.sort_by(f64::total_cmp);
        let x = NodeSystem::new(v).ok()?;
        let gaps_ok = (0..=n).all(|j| x.node(j + 1) - x.node(j) >= MIN_GAP);
        if !gaps_ok {
            continue;
        }
        let m = p.interval_maxima(&x).ok()?;
        if m.is_regular() {
            return Some((x, m));
        }
    }
    None
}

fn shifted(x: &NodeSystem, u: &[f64], delta: f64) -> NodeSystem {
    let v = x
        .nodes()
        .iter()
        .zip(u)
        .map(|(a, b)| (a + delta * b).clamp(0.0, 1.0))
        .collect();
    NodeSystem::new(v).expect("gaps exceed the perturbation")
}

struct Sample {
    /// per delta: `|Δm̄|` then `|Δm_j|` for each `j`
    deviations: Vec<Vec<f64>>,
    usc_slack: f64,
    lsc_slack: f64,
}

fn sample(
    p: &Problem,
    deltas: &[f64],
    usc: bool,
    two_sided: bool,
    rng: &mut Rng,
) -> Option<Sample> {
    let (x, m) = base_point(p, rng)?;
    let mut u: Vec<f64> = (0..p.n()).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    let norm = u.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    if norm == 0.0 {
        return None;
    }
    u.iter_mut().for_each(|v| *v /= norm);

    let mut deviations = Vec::with_capacity(deltas.len());
    for &d in deltas {
        let mk = p.interval_maxima(&shifted(&x, &u, d)).ok()?;
        if !mk.is_regular() {
            return None;
        }
        let mut row = vec![(mk.upper().to_f64() - m.upper().to_f64()).abs()];
        row.extend(
            mk.values
                .iter()
                .zip(&m.values)
                .map(|(a, b)| (a.to_f64() - b.to_f64()).abs()),
        );
        deviations.push(row);
    }
    // (iii) and (iv) along a sequence converging to x; drift proportional
    // to the slope seen at the finest schedule step is allowed, a jump is not
    let finest = deltas.last().copied().unwrap_or(1.0);
    let slope = deviations
        .last()
        .map(|r| r[1..].iter().fold(0.0f64, |a, b| a.max(*b)) / finest)
        .unwrap_or(0.0);
    let mut usc_slack = f64::INFINITY;
    let mut lsc_slack = f64::INFINITY;
    if usc || two_sided {
        for &d in &TAIL {
            let mk = p.interval_maxima(&shifted(&x, &u, d)).ok()?;
            for (a, b) in mk.values.iter().zip(&m.values) {
                let (a, b) = (a.to_f64(), b.to_f64());
                if usc {
                    usc_slack = usc_slack.min(b + USC_TOL + SLOPE_FACTOR * slope * d - a);
                }
                if two_sided {
                    lsc_slack = lsc_slack.min(a - (b - LSC_TOL - SLOPE_FACTOR * slope * d));
                }
            }
        }
    }
    Some(Sample {
        deviations,
        usc_slack,
        lsc_slack,
    })
}

impl Check for Continuity {
    fn id(&self) -> &'static str {
        "lem3.3/continuity"
    }

    fn default_trials(&self) -> usize {
        200
    }

    /// One trial per configuration; the samples inside it feed the
    /// max-deviation series, which only makes sense in aggregate.
    fn trials_per_config(&self, _: &CheckContext) -> usize {
        1
    }

    fn trial(&self, ctx: &CheckContext, config: usize, _: usize, _: &mut Rng) -> Result<Trial> {
        let p = ctx.problem(config);
        let name = &ctx.problems[config].name;
        let inner = ctx.trials.unwrap_or(self.default_trials());
        let usc = p.field().is_exact() && p.field().is_usc()?;
        let two_sided = limsup_conditions(p.field())
            .map(|c| c.two_sided)
            .unwrap_or(false);
        let base = super::trial_rng(ctx, self.id(), config, 0);
        let seed = rand::Rng::gen::<u64>(&mut base.clone());
        let samples: Vec<Option<Sample>> = (0..inner)
            .into_par_iter()
            .map(|i| {
                sample(
                    p,
                    &ctx.deltas,
                    usc,
                    two_sided,
                    &mut rng::stream(seed, i as u64),
                )
            })
            .collect();
        let samples: Vec<Sample> = samples.into_iter().flatten().collect();
        if samples.is_empty() {
            return Ok(Trial::vacuous(
                json!({ "problem": name, "skipped": "no regular base points" }),
            ));
        }
        let width = p.n() + 2;
        // max over samples, per delta and per series
        let mut maxdev = vec![vec![0.0f64; width]; ctx.deltas.len()];
        let (mut usc_slack, mut lsc_slack) = (f64::INFINITY, f64::INFINITY);
        for s in &samples {
            for (row, r) in maxdev.iter_mut().zip(&s.deviations) {
                for (a, b) in row.iter_mut().zip(r) {
                    *a = a.max(*b);
                }
            }
            usc_slack = usc_slack.min(s.usc_slack);
            lsc_slack = lsc_slack.min(s.lsc_slack);
        }
        let series_count = if p.all_singular() { width } else { 1 };
        let series: Vec<Vec<f64>> = (0..series_count)
            .map(|k| maxdev.iter().map(|row| row[k]).collect())
            .collect();
        let decay_ok = series.iter().all(|s| decays(s));
        let margin = if decay_ok { 0.0f64 } else { -1.0 }
            .min(usc_slack)
            .min(lsc_slack);
        let mut t = Trial::new(
            margin,
            !decay_ok || !(margin >= 0.0),
            json!({ "problem": name }),
        );
        t.samples = samples.len();
        t.details = json!({
            "problem": name,
            "deltas": ctx.deltas,
            "mbar_modulus": series[0],
            "mj_modulus": &series[1..],
            "usc_checked": usc,
            "lsc_checked": two_sided,
            "usc_slack": usc_slack,
            "lsc_slack": lsc_slack,
        });
        Ok(t)
    }
}
