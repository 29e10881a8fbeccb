use serde::{Deserialize, Serialize};

use super::{Problem, SupMode, DEFAULT_GRID};
use crate::error::{Error, Result};
use crate::ext::{ExtReal, NegInf};
use crate::golden::{self, XTOL};
use crate::interval::Interval;
use crate::nodes::NodeSystem;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupResult {
    pub value: ExtReal,
    pub witness: Option<f64>,
    pub attained: bool,
    pub err: f64,
}

/// `m_0..m_n` with argmax witnesses, attainment flags and error estimates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximaVector {
    pub values: Vec<ExtReal>,
    pub witnesses: Vec<Option<f64>>,
    pub attained: Vec<bool>,
    pub err: Vec<f64>,
}

impl MaximaVector {
    /// `max_j m_j = sup_[0,1] F(x, ·)`
    pub fn upper(&self) -> ExtReal {
        self.values.iter().copied().max().unwrap_or(NegInf)
    }

    /// `min_j m_j`
    pub fn lower(&self) -> ExtReal {
        self.values.iter().copied().min().unwrap_or(NegInf)
    }

    /// Membership in the regularity set: every `m_j > -inf`.
    pub fn is_regular(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// `m_j - m_{j-1}` for `j = 1..=n`, defined only on the regularity set.
    pub fn differences(&self) -> Result<Vec<f64>> {
        self.values
            .windows(2)
            .enumerate()
            .map(|(j, w)| match (w[0], w[1]) {
                (ExtReal::Finite(a), ExtReal::Finite(b)) => Ok(b - a),
                (ExtReal::NegInf, _) => Err(Error::NotRegular { index: j }),
                _ => Err(Error::NotRegular { index: j + 1 }),
            })
            .collect()
    }

    /// `max_j |Φ_j|`, infinite off the regularity set.
    pub fn residual(&self) -> f64 {
        match self.differences() {
            Ok(d) => d.iter().fold(0.0, |m, v| m.max(v.abs())),
            Err(_) => f64::INFINITY,
        }
    }

    /// Strict majorization `m_j > other_j + margin` for every `j`.
    pub fn strictly_majorizes(&self, other: &MaximaVector, margin: f64) -> bool {
        self.values
            .iter()
            .zip(&other.values)
            .all(|(&a, &b)| match (a, b) {
                (ExtReal::Finite(a), ExtReal::Finite(b)) => a > b + margin,
                (ExtReal::Finite(_), NegInf) => true,
                _ => false,
            })
    }
}

#[derive(Clone, Copy)]
struct Candidate {
    value: ExtReal,
    at: f64,
    attained: bool,
    err: f64,
}

impl Candidate {
    fn beats(&self, other: &Candidate) -> bool {
        self.value > other.value || (self.value == other.value && self.attained && !other.attained)
    }
}

/// Supremum of `F(x, ·)` over `q ∩ [0, 1]`.
pub fn sup_on_interval(p: &Problem, x: &NodeSystem, q: &Interval) -> Result<SupResult> {
    p.check_nodes(x)?;
    q.validate()?;
    let q = q
        .intersect(&Interval::unit())
        .ok_or(Error::InvalidInterval {
            a: q.a,
            b: q.b,
            reason: "empty after intersection with [0, 1]",
        })?;
    Ok(sup_unchecked(p, x.nodes(), &q))
}

pub(crate) fn sup_unchecked(p: &Problem, x: &[f64], q: &Interval) -> SupResult {
    match (p.sup_mode, p.field.is_exact()) {
        (SupMode::Exact, true) => sup_exact(p, x, q),
        (SupMode::Grid(n), _) => sup_grid(p, x, q, n.max(1)),
        (SupMode::Exact, false) => sup_grid(p, x, q, DEFAULT_GRID),
    }
}

fn breakpoints(p: &Problem, x: &[f64], q: &Interval) -> Vec<f64> {
    let mut pts = vec![q.a, q.b];
    pts.extend(x.iter().copied().filter(|&t| q.a < t && t < q.b));
    pts.extend(
        p.field
            .breakpoints()
            .into_iter()
            .filter(|&t| q.a < t && t < q.b),
    );
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

fn sup_exact(p: &Problem, x: &[f64], q: &Interval) -> SupResult {
    let comps = p.field.components().expect("exact field");
    let pts = breakpoints(p, x, q);
    let mut best = Candidate {
        value: NegInf,
        at: q.a,
        attained: false,
        err: 0.0,
    };
    let mut offer = |c: Candidate| {
        if c.beats(&best) {
            best = c;
        }
    };
    for &t in &pts {
        if q.contains(t) {
            offer(Candidate {
                value: p.full_at(x, t),
                at: t,
                attained: true,
                err: 0.0,
            });
        }
    }
    for w in pts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        for comp in comps.iter().filter(|c| c.domain().covers_open(lo, hi)) {
            let g = |t: f64| {
                let phi = comp.eval(t);
                if phi.is_neg_inf() {
                    NegInf
                } else {
                    phi + p.pure_at(x, t)
                }
            };
            // one-sided limits at the cell ends; the actual values there were
            // offered above
            for t in [lo, hi] {
                offer(Candidate {
                    value: g(t),
                    at: t,
                    attained: false,
                    err: 0.0,
                });
            }
            let r = golden::maximize(g, lo, hi, XTOL);
            offer(Candidate {
                value: r.value,
                at: r.at,
                // in cells a few ulps wide the probes can round onto an end
                attained: lo < r.at && r.at < hi,
                err: if r.err.is_finite() { r.err } else { 0.0 },
            });
        }
    }
    SupResult {
        value: best.value,
        witness: Some(best.at),
        attained: best.attained,
        err: best.err,
    }
}

fn sup_grid(p: &Problem, x: &[f64], q: &Interval, n: usize) -> SupResult {
    let mut pts: Vec<f64> = (0..=n)
        .map(|i| q.a + (q.b - q.a) * i as f64 / n as f64)
        .chain(breakpoints(p, x, q))
        .filter(|&t| q.contains(t))
        .collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut best = (NegInf, pts.first().copied().unwrap_or(q.a));
    let mut err = 0.0f64;
    let mut prev: Option<ExtReal> = None;
    for &t in &pts {
        let v = p.full_at(x, t);
        if v > best.0 {
            best = (v, t);
        }
        if let Some(pv) = prev {
            let d = pv.distance(v);
            if d.is_finite() {
                err = err.max(d);
            }
        }
        prev = Some(v);
    }
    SupResult {
        value: best.0,
        witness: Some(best.1),
        attained: true,
        err,
    }
}

pub(crate) fn maxima_unchecked(p: &Problem, x: &NodeSystem) -> MaximaVector {
    let n = x.n();
    let mut out = MaximaVector {
        values: Vec::with_capacity(n + 1),
        witnesses: Vec::with_capacity(n + 1),
        attained: Vec::with_capacity(n + 1),
        err: Vec::with_capacity(n + 1),
    };
    for iv in x.intervals() {
        let r = sup_unchecked(p, x.nodes(), &iv);
        out.values.push(r.value);
        out.witnesses.push(r.witness);
        out.attained.push(r.attained);
        out.err.push(r.err);
    }
    out
}

pub fn interval_maxima(p: &Problem, x: &NodeSystem) -> Result<MaximaVector> {
    p.interval_maxima(x)
}
