//! Field functions `J: [0, 1] -> R ∪ {-inf}`.
//!
//! The canonical form is a list of pieces, each an interval carrying a
//! concave closed-form formula; points covered by no piece are `-inf`.
//! Where closed pieces touch, the larger value wins. Suprema, the usc
//! regularization and the limsup predicates are computed exactly from the
//! piece structure.

mod envelope;
mod limsup;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::{ExtReal, Finite, NegInf};
use crate::formula::Formula;
use crate::interval::{Interval, PointSet};

pub use envelope::{monotone_usc_approximation, Envelope};
pub use limsup::{limsup_conditions, LimsupConditions};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    #[serde(flatten)]
    pub interval: Interval,
    pub formula: Formula,
}

impl Piece {
    pub fn new(interval: Interval, formula: Formula) -> Result<Self> {
        interval.validate()?;
        formula.validate_on(interval.a, interval.b)?;
        Ok(Piece { interval, formula })
    }

    pub fn eval(&self, t: f64) -> ExtReal {
        ExtReal::lift(self.formula.eval(t))
    }
}

/// Black-box field. Only grid lower bounds are available for it.
#[derive(Clone)]
pub struct Callable {
    pub func: Arc<dyn Fn(f64) -> ExtReal + Send + Sync>,
    pub upper_bound: f64,
}

impl fmt::Debug for Callable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Callable")
            .field("upper_bound", &self.upper_bound)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone)]
pub enum Field {
    Piecewise(Vec<Piece>),
    /// Lipschitz sup-convolution of a piecewise field.
    Envelope(Envelope),
    Callable(Callable),
}

/// A concave function on an interval; the exact-sup building block.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Component<'a> {
    Piece(&'a Piece),
    Hull { env: &'a Envelope, index: usize },
}

impl Component<'_> {
    pub(crate) fn domain(&self) -> Interval {
        match self {
            Component::Piece(p) => p.interval,
            Component::Hull { .. } => Interval::unit(),
        }
    }

    /// Value of the formula (its continuous extension to the closure).
    pub(crate) fn eval(&self, t: f64) -> ExtReal {
        match self {
            Component::Piece(p) => p.eval(t),
            Component::Hull { env, index } => env.hull_eval(*index, t),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub pieces: Vec<Piece>,
}

impl Field {
    pub fn piecewise(pieces: Vec<Piece>) -> Result<Self> {
        for p in &pieces {
            Piece::new(p.interval, p.formula)?;
            if p.interval.a < 0.0 || p.interval.b > 1.0 {
                return Err(Error::InvalidInterval {
                    a: p.interval.a,
                    b: p.interval.b,
                    reason: "field pieces must lie in [0, 1]",
                });
            }
        }
        let mut sorted: Vec<&Piece> = pieces.iter().collect();
        sorted.sort_by(|x, y| x.interval.a.total_cmp(&y.interval.a));
        for w in sorted.windows(2) {
            if w[1].interval.a < w[0].interval.b {
                return Err(Error::InvalidInterval {
                    a: w[1].interval.a,
                    b: w[0].interval.b,
                    reason: "field pieces must have disjoint interiors",
                });
            }
        }
        Ok(Field::Piecewise(pieces))
    }

    pub fn from_descriptor(d: &FieldDescriptor) -> Result<Self> {
        Field::piecewise(d.pieces.clone())
    }

    pub fn descriptor(&self) -> Option<FieldDescriptor> {
        match self {
            Field::Piecewise(p) => Some(FieldDescriptor { pieces: p.clone() }),
            _ => None,
        }
    }

    pub fn callable<F: Fn(f64) -> ExtReal + Send + Sync + 'static>(f: F, upper_bound: f64) -> Self {
        Field::Callable(Callable {
            func: Arc::new(f),
            upper_bound,
        })
    }

    /// `J ≡ c` on `[0, 1]`.
    pub fn constant(c: f64) -> Self {
        Field::Piecewise(vec![Piece {
            interval: Interval::unit(),
            formula: Formula::constant(c),
        }])
    }

    /// `J = ln 1_E`: `0` on `E`, `-inf` elsewhere.
    pub fn log_indicator(e: &[Interval]) -> Result<Self> {
        Field::piecewise(
            e.iter()
                .map(|&iv| Piece {
                    interval: iv,
                    formula: Formula::constant(0.0),
                })
                .collect(),
        )
    }

    /// `J = t * 1_[0, c)` (and `0` on `[c, 1]`).
    pub fn ramp_below(c: f64) -> Result<Self> {
        Field::piecewise(vec![
            Piece::new(
                Interval::new(0.0, c, true, false)?,
                Formula::affine(1.0, 0.0),
            )?,
            Piece::new(Interval::closed(c, 1.0)?, Formula::constant(0.0))?,
        ])
    }

    /// Finite values at the given points only.
    pub fn points(pts: &[(f64, f64)]) -> Result<Self> {
        Field::piecewise(
            pts.iter()
                .map(|&(t, v)| Piece {
                    interval: Interval::point(t),
                    formula: Formula::constant(v),
                })
                .collect(),
        )
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Field::Callable(_))
    }

    pub(crate) fn components(&self) -> Option<Vec<Component<'_>>> {
        match self {
            Field::Piecewise(p) => Some(p.iter().map(Component::Piece).collect()),
            Field::Envelope(env) => Some(
                (0..env.len())
                    .map(|index| Component::Hull { env, index })
                    .collect(),
            ),
            Field::Callable(_) => None,
        }
    }

    /// Piece endpoints in `[0, 1]` where the field may be non-smooth.
    pub(crate) fn breakpoints(&self) -> Vec<f64> {
        match self {
            Field::Piecewise(p) => p
                .iter()
                .flat_map(|p| [p.interval.a, p.interval.b])
                .collect(),
            _ => Vec::new(),
        }
    }

    pub fn upper_bound(&self) -> f64 {
        match self {
            Field::Piecewise(p) => p
                .iter()
                .map(|p| p.formula.max_on(p.interval.a, p.interval.b).0)
                .fold(f64::NEG_INFINITY, f64::max),
            Field::Envelope(env) => env.upper_bound(),
            Field::Callable(c) => c.upper_bound,
        }
    }

    /// Value at `t`; unchecked domain.
    pub(crate) fn at(&self, t: f64) -> ExtReal {
        match self {
            Field::Piecewise(pieces) => pieces
                .iter()
                .filter(|p| p.interval.contains(t))
                .map(|p| p.eval(t))
                .max()
                .unwrap_or(NegInf),
            Field::Envelope(env) => env.eval(t),
            Field::Callable(c) => (c.func)(t),
        }
    }

    pub fn eval(&self, t: f64) -> Result<ExtReal> {
        check_unit(t)?;
        Ok(self.at(t))
    }

    fn pieces(&self, what: &'static str) -> Result<&[Piece]> {
        match self {
            Field::Piecewise(p) => Ok(p),
            _ => Err(Error::Unsupported {
                what,
                reason: "requires a piecewise field",
            }),
        }
    }

    /// The least usc function above `J`: every non-degenerate piece is
    /// closed; coinciding ends resolve to the larger value.
    pub fn usc_regularize(&self) -> Result<Field> {
        match self {
            Field::Envelope(_) => Ok(self.clone()),
            Field::Callable(_) => Err(Error::Unsupported {
                what: "usc_regularize",
                reason: "regularization of a black-box field is undecidable",
            }),
            Field::Piecewise(pieces) => Ok(Field::Piecewise(
                pieces
                    .iter()
                    .map(|p| Piece {
                        interval: p.interval.closure(),
                        formula: p.formula,
                    })
                    .collect(),
            )),
        }
    }

    /// Whether `J = J*`. The two can differ only at piece endpoints.
    pub fn is_usc(&self) -> Result<bool> {
        let star = self.usc_regularize()?;
        Ok(self
            .breakpoints()
            .into_iter()
            .all(|t| self.at(t) == star.at(t)))
    }

    /// `X^c = J^{-1}(R)`.
    pub fn finiteness_domain(&self) -> Result<PointSet> {
        match self {
            Field::Envelope(_) => Ok(PointSet::from_intervals([Interval::unit()])),
            _ => Ok(PointSet::from_intervals(
                self.pieces("finiteness_domain")?.iter().map(|p| p.interval),
            )),
        }
    }

    /// `X = J^{-1}(-inf)`.
    pub fn singularity_set(&self) -> Result<PointSet> {
        Ok(self.finiteness_domain()?.complement_in_unit())
    }

    /// Exact supremum over `q` (respecting open ends) and whether it is
    /// attained.
    pub fn sup_on(&self, q: &Interval) -> Result<(ExtReal, bool)> {
        let pieces = self.pieces("sup_on")?;
        let mut best = (NegInf, false);
        for p in pieces {
            let Some(cut) = p.interval.intersect(q) else {
                continue;
            };
            let (v, s) = p.formula.max_on(cut.a, cut.b);
            let attained = cut.contains(s);
            let v = ExtReal::lift(v);
            if v > best.0 || (v == best.0 && attained) {
                best = (v, attained || (v == best.0 && best.1));
            }
        }
        // a value lost at an open end may still be attained at the same
        // point by a neighbouring piece
        if !best.1 {
            if let Finite(_) = best.0 {
                for t in pieces.iter().flat_map(|p| [p.interval.a, p.interval.b]) {
                    if q.contains(t) && self.at(t) == best.0 {
                        best.1 = true;
                    }
                }
            }
        }
        Ok(best)
    }
}

pub(crate) fn check_unit(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            value: t,
            lo: 0.0,
            hi: 1.0,
        })
    }
}

pub fn field_eval(j: &Field, t: f64) -> Result<ExtReal> {
    j.eval(t)
}

pub fn usc_regularize(j: &Field) -> Result<Field> {
    j.usc_regularize()
}

pub fn finiteness_domain(j: &Field) -> Result<PointSet> {
    j.finiteness_domain()
}

/// Weighted size of the finiteness domain: infinite when it contains a
/// non-degenerate interval; otherwise isolated points count `1`, except `0`
/// and `1`, which count `1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldCount {
    pub valid: bool,
    /// `None` stands for an infinite count.
    pub weighted_count: Option<f64>,
}

pub fn n_field_check(j: &Field, n: usize) -> Result<FieldCount> {
    let dom = j.finiteness_domain()?;
    if !dom.intervals.is_empty() {
        return Ok(FieldCount {
            valid: true,
            weighted_count: None,
        });
    }
    let count: f64 = dom
        .points
        .iter()
        .map(|&p| if p == 0.0 || p == 1.0 { 0.5 } else { 1.0 })
        .sum();
    Ok(FieldCount {
        valid: count > n as f64,
        weighted_count: Some(count),
    })
}
