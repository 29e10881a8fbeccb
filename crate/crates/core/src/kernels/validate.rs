//! Grid falsification of declared kernel flags.

use serde::{Deserialize, Serialize};

use super::Kernel;
use crate::ext::ExtReal;

const SLACK: f64 = 1e-12;
/// Smallest step used for the cusp divided differences.
const CUSP_H_MIN: f64 = 1e-10;
/// `|divided difference|` that must be exceeded at `CUSP_H_MIN`.
pub const CUSP_THRESHOLD: f64 = 1e4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlagViolation {
    pub flag: String,
    pub witness: Vec<f64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub confirmed: Vec<String>,
    pub violations: Vec<FlagViolation>,
    /// Divided difference magnitude reached at the smallest cusp step.
    pub cusp_slope: Option<f64>,
    pub cusp_threshold: f64,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn record(&mut self, flag: &str, failure: Option<(Vec<f64>, String)>) {
        match failure {
            None => self.confirmed.push(flag.to_string()),
            Some((witness, detail)) => self.violations.push(FlagViolation {
                flag: flag.to_string(),
                witness,
                detail,
            }),
        }
    }
}

/// Checks concavity (always) and every declared flag on a grid of
/// `grid_size` points per side. A clean report confirms nothing beyond the
/// sampled points.
pub fn kernel_validate(k: &Kernel, grid_size: usize) -> ValidationReport {
    let grid_size = grid_size.max(3);
    let flags = k.flags();
    let mut report = ValidationReport {
        confirmed: Vec::new(),
        violations: Vec::new(),
        cusp_slope: None,
        cusp_threshold: CUSP_THRESHOLD,
    };
    // open-side grids, ordered by increasing t
    let right: Vec<f64> = (1..=grid_size)
        .map(|i| i as f64 / (grid_size + 1) as f64)
        .collect();
    let left: Vec<f64> = right.iter().rev().map(|t| -t).collect();
    let val = |t: f64| k.at(t);

    let at_zero = val(0.0);
    let singular_fail = if flags.singular != at_zero.is_neg_inf() {
        Some((
            vec![0.0],
            format!("K(0) = {at_zero}, declared singular = {}", flags.singular),
        ))
    } else {
        None
    };
    if flags.singular || at_zero.is_neg_inf() {
        report.record("singular", singular_fail);
    }

    report.record("concave", concavity_failure(&left, &right, &val, false));
    if flags.strictly_concave {
        report.record(
            "strictly_concave",
            concavity_failure(&left, &right, &val, true),
        );
    }
    if flags.monotone {
        report.record("monotone", monotone_failure(&left, &right, &val, false));
    }
    if flags.strictly_monotone {
        report.record(
            "strictly_monotone",
            monotone_failure(&left, &right, &val, true),
        );
    }
    if flags.cusp {
        let (slope, failure) = cusp_failure(&val);
        report.cusp_slope = Some(slope);
        report.record("cusp", failure);
    }
    report
}

type Failure = Option<(Vec<f64>, String)>;

fn concavity_failure<V: Fn(f64) -> ExtReal>(
    left: &[f64],
    right: &[f64],
    val: &V,
    strict: bool,
) -> Failure {
    for side in [left, right] {
        for w in side.windows(3) {
            let (u, m, v) = (w[0], w[1], w[2]);
            let (Some(ku), Some(km), Some(kv)) =
                (val(u).finite(), val(m).finite(), val(v).finite())
            else {
                continue;
            };
            let gap = km - 0.5 * (ku + kv);
            let bad = if strict {
                gap <= 0.0
            } else {
                gap < -SLACK * (1.0 + ku.abs() + kv.abs())
            };
            if bad {
                return Some((vec![u, m, v], format!("midpoint gap {gap:e}")));
            }
        }
    }
    None
}

fn monotone_failure<V: Fn(f64) -> ExtReal>(
    left: &[f64],
    right: &[f64],
    val: &V,
    strict: bool,
) -> Failure {
    // left side must decrease with t, right side increase
    for (side, sign) in [(left, -1.0), (right, 1.0)] {
        for w in side.windows(2) {
            let (a, b) = (val(w[0]), val(w[1]));
            let ok = match (a.finite(), b.finite()) {
                (Some(a), Some(b)) => {
                    let d = sign * (b - a);
                    if strict {
                        d > 0.0
                    } else {
                        d >= -SLACK
                    }
                }
                // -inf may only appear toward 0
                _ => (sign < 0.0 && b.is_neg_inf()) || (sign > 0.0 && a.is_neg_inf()),
            };
            if !ok {
                return Some((w.to_vec(), format!("K({}) = {a}, K({}) = {b}", w[0], w[1])));
            }
        }
    }
    // the endpoint values -1 and 1 take part in strict monotonicity
    if strict {
        let (km1, k1) = (val(-1.0), val(1.0));
        if !(km1 > val(left[0]) && k1 > val(*right.last().unwrap())) {
            return Some((
                vec![-1.0, 1.0],
                "endpoint values not strictly extreme".into(),
            ));
        }
    }
    None
}

fn cusp_failure<V: Fn(f64) -> ExtReal>(val: &V) -> (f64, Failure) {
    let mut h = 1e-2;
    let mut prev = 0.0f64;
    let mut slope = 0.0f64;
    while h >= CUSP_H_MIN * 0.999 {
        let dd = |a: f64, b: f64| -> f64 {
            match (val(a), val(b)) {
                (ExtReal::Finite(x), ExtReal::Finite(y)) => (x - y) / (a - b),
                // K(t) = -inf next to a finite value: slope is unbounded
                (ExtReal::NegInf, _) => {
                    if a > b {
                        f64::NEG_INFINITY
                    } else {
                        f64::INFINITY
                    }
                }
                (_, ExtReal::NegInf) => {
                    if a > b {
                        f64::INFINITY
                    } else {
                        f64::NEG_INFINITY
                    }
                }
            }
        };
        let left = dd(-h, -2.0 * h);
        let right = dd(h, 2.0 * h);
        // left quotient tends to -inf, right to +inf
        let m = (-left).min(right);
        if m < prev {
            return (
                m,
                Some((vec![-h, h], format!("divided difference shrank to {m:e}"))),
            );
        }
        prev = m;
        slope = m;
        h /= 10.0;
    }
    if slope < CUSP_THRESHOLD {
        return (
            slope,
            Some((
                vec![-CUSP_H_MIN, CUSP_H_MIN],
                format!("slope {slope:e} below threshold"),
            )),
        );
    }
    (slope, None)
}
