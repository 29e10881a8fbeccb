use rand::Rng as _;
use serde_json::json;

use super::{Check, CheckContext, Trial};
use crate::error::Result;
use crate::ext::ExtReal;
use crate::fields::{monotone_usc_approximation, Field, Piece};
use crate::formula::Formula;
use crate::golden::{self, XTOL};
use crate::interval::Interval;
use crate::rng::Rng;

pub const SCHEDULE: [f64; 5] = [4.0, 16.0, 64.0, 256.0, 1024.0];
const MONO_TOL: f64 = 1e-12;
const TERMINAL_GAP: f64 = 1e-2;
/// Pieces off the window are kept at least this far from it.
const CLEARANCE: f64 = 0.01;

pub struct DiniMax;

fn random_formula(rng: &mut Rng, lo: f64, hi: f64) -> Formula {
    match rng.gen_range(0..4) {
        0 => Formula::constant(rng.gen_range(-1.0..1.0)),
        1 => Formula::affine(rng.gen_range(-3.0..3.0), rng.gen_range(-1.0..1.0)),
        2 => {
            let a = rng.gen_range(-5.0..0.0);
            let vertex = rng.gen_range(lo..=hi);
            Formula::quadratic(a, -2.0 * a * vertex, rng.gen_range(-1.0..1.0))
        }
        _ => {
            let alpha: f64 = rng.gen_range(-1.0..1.0);
            Formula::LogAffine {
                alpha,
                beta: alpha.abs() + rng.gen_range(0.1..2.0),
            }
        }
    }
}

/// Random usc piecewise field: closed pieces with Lipschitz formulas.
fn random_field(rng: &mut Rng) -> Field {
    let m = rng.gen_range(1..=4);
    let mut ends: Vec<f64> = (0..2 * m).map(|_| rng.gen::<f64>()).collect();
    ends.sort_by(f64::total_cmp);
    let pieces = ends
        .chunks(2)
        .map(|w| {
            let iv = Interval::closed(w[0], w[1]).expect("sorted");
            Piece::new(iv, random_formula(rng, w[0], w[1])).expect("concave formula")
        })
        .collect();
    Field::piecewise(pieces).expect("disjoint pieces")
}

/// Window `[a, b]` meeting some piece, with every other piece either
/// touching it or at least `CLEARANCE` away.
fn random_window(rng: &mut Rng, g: &Field) -> Option<(f64, f64)> {
    let pieces = match g {
        Field::Piecewise(p) => p,
        _ => return None,
    };
    for _ in 0..100 {
        let u: f64 = rng.gen();
        let v: f64 = rng.gen();
        let (a, b) = (u.min(v), u.max(v));
        if b - a < 0.1 {
            continue;
        }
        let mut meets = false;
        let mut clear = true;
        for p in pieces {
            let dist = (p.interval.a - b).max(a - p.interval.b).max(0.0);
            meets |= dist == 0.0;
            clear &= dist == 0.0 || dist >= CLEARANCE;
        }
        if meets && clear {
            return Some((a, b));
        }
    }
    None
}

/// `max_[a,b] g*` from the closed-form piece maxima.
fn exact_max(g: &Field, a: f64, b: f64) -> f64 {
    let Field::Piecewise(pieces) = g else {
        return f64::NAN;
    };
    pieces
        .iter()
        .filter_map(|p| {
            let lo = p.interval.a.max(a);
            let hi = p.interval.b.min(b);
            (lo <= hi).then(|| p.formula.max_on(lo, hi).0)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `max_[a,b] g_k`, maximizing each concave hull separately.
fn approx_max(gk: &Field, a: f64, b: f64) -> f64 {
    let Field::Envelope(env) = gk else {
        return f64::NAN;
    };
    (0..env.len())
        .map(|i| {
            let h = |t: f64| env.hull_eval(i, t);
            let inner = golden::maximize(h, a, b, XTOL).value;
            inner.max(h(a)).max(h(b))
        })
        .max()
        .unwrap_or(ExtReal::NegInf)
        .to_f64()
}

impl Check for DiniMax {
    fn id(&self) -> &'static str {
        "lem5.1/dini-max"
    }

    fn default_trials(&self) -> usize {
        100
    }

    fn configs(&self, _: &CheckContext) -> usize {
        1
    }

    fn trial(&self, _: &CheckContext, _: usize, _: usize, rng: &mut Rng) -> Result<Trial> {
        let (g, (a, b)) = loop {
            let g = random_field(rng);
            if let Some(w) = random_window(rng, &g) {
                break (g, w);
            }
        };
        let target = exact_max(&g, a, b);
        let maxima = SCHEDULE
            .iter()
            .map(|&k| Ok(approx_max(&monotone_usc_approximation(&g, k)?, a, b)))
            .collect::<Result<Vec<f64>>>()?;
        let mut margin = f64::INFINITY;
        for w in maxima.windows(2) {
            margin = margin.min(w[0] - w[1] + MONO_TOL);
        }
        for &m in &maxima {
            margin = margin.min(m - target + MONO_TOL);
        }
        let terminal = maxima[maxima.len() - 1] - target;
        margin = margin.min(TERMINAL_GAP - terminal);
        let input = json!({
            "field": g.descriptor(),
            "window": [a, b],
            "maxima": maxima,
            "limit": target,
        });
        Ok(Trial::new(margin, !(margin >= 0.0), input))
    }
}
