//! Concave closed-form expressions used for field pieces and custom kernel
//! sides.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Formula {
    Constant {
        c: f64,
    },
    /// `alpha * t + beta`
    Affine {
        alpha: f64,
        beta: f64,
    },
    /// `a * t^2 + b * t + c` with `a <= 0`
    Quadratic {
        a: f64,
        b: f64,
        c: f64,
    },
    /// `ln(alpha * t + beta)`, a log-weight `ln w` with `w` affine and
    /// positive on the closure of its piece.
    LogAffine {
        alpha: f64,
        beta: f64,
    },
}

impl Formula {
    pub fn constant(c: f64) -> Self {
        Formula::Constant { c }
    }

    pub fn affine(alpha: f64, beta: f64) -> Self {
        Formula::Affine { alpha, beta }
    }

    pub fn quadratic(a: f64, b: f64, c: f64) -> Self {
        Formula::Quadratic { a, b, c }
    }

    /// Checks concavity and that the value is real on `[lo, hi]`.
    pub fn validate_on(&self, lo: f64, hi: f64) -> Result<()> {
        let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        match *self {
            Formula::Constant { c } if finite(&[c]) => Ok(()),
            Formula::Affine { alpha, beta } if finite(&[alpha, beta]) => Ok(()),
            Formula::Quadratic { a, b, c } if finite(&[a, b, c]) => {
                if a > 0.0 {
                    Err(Error::param("quadratic.a", "must be <= 0 for concavity"))
                } else {
                    Ok(())
                }
            }
            Formula::LogAffine { alpha, beta } if finite(&[alpha, beta]) => {
                let w_lo = alpha * lo + beta;
                let w_hi = alpha * hi + beta;
                if w_lo > 0.0 && w_hi > 0.0 {
                    Ok(())
                } else {
                    Err(Error::param(
                        "log-affine",
                        format!("weight must be positive on [{lo}, {hi}]"),
                    ))
                }
            }
            _ => Err(Error::param("formula", "coefficients must be finite")),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            Formula::Constant { c } => c,
            Formula::Affine { alpha, beta } => alpha * t + beta,
            Formula::Quadratic { a, b, c } => (a * t + b) * t + c,
            Formula::LogAffine { alpha, beta } => (alpha * t + beta).ln(),
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match *self {
            Formula::Constant { .. } => 0.0,
            Formula::Affine { alpha, .. } => alpha,
            Formula::Quadratic { a, b, .. } => 2.0 * a * t + b,
            Formula::LogAffine { alpha, beta } => alpha / (alpha * t + beta),
        }
    }

    /// Exact maximum over the closed interval `[lo, hi]`, with a maximizer.
    pub fn max_on(&self, lo: f64, hi: f64) -> (f64, f64) {
        let mut best = (self.eval(lo), lo);
        let mut consider = |s: f64| {
            let v = self.eval(s);
            if v > best.0 {
                best = (v, s);
            }
        };
        consider(hi);
        if let Some(s) = self.stationary(0.0) {
            consider(s.clamp(lo, hi));
        }
        best
    }

    /// Point where the derivative equals `slope`, when it is isolated.
    pub fn stationary(&self, slope: f64) -> Option<f64> {
        match *self {
            Formula::Quadratic { a, b, .. } if a < 0.0 => Some((slope - b) / (2.0 * a)),
            Formula::LogAffine { alpha, beta } if alpha != 0.0 && slope != 0.0 => {
                // alpha / (alpha s + beta) = slope
                Some((alpha / slope - beta) / alpha)
            }
            _ => None,
        }
    }

    /// Every formula in the family is concave and continuous on its
    /// validated domain, so the supremum of `self(s) + slope * s` over
    /// `[lo, hi]` is attained at an endpoint or a stationary point.
    pub(crate) fn max_tilted(&self, slope: f64, lo: f64, hi: f64) -> f64 {
        let g = |s: f64| self.eval(s) + slope * s;
        let mut best = g(lo).max(g(hi));
        if let Some(s) = self.stationary(-slope) {
            if s.is_finite() {
                best = best.max(g(s.clamp(lo, hi)));
            }
        }
        best
    }
}
