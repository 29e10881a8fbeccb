use super::{Field, Piece};
use crate::error::{Error, Result};
use crate::ext::{ExtReal, NegInf};

/// `J^(k)(t) = sup_s (J*(s) - k |t - s|)`, the `k`-Lipschitz sup-convolution
/// of the usc regularization of a piecewise field.
///
/// Each piece `P` contributes a hull `h_P(t) = sup_{s in P} (phi_P(s) - k|t - s|)`,
/// which is concave on all of `[0, 1]` (a partial supremum of a jointly
/// concave function), and `J^(k) = max_P h_P`.
#[derive(Debug, Clone)]
pub struct Envelope {
    pieces: Vec<Piece>,
    k: f64,
}

impl Envelope {
    pub fn lipschitz(&self) -> f64 {
        self.k
    }

    pub(crate) fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn base_pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub(crate) fn hull_eval(&self, index: usize, t: f64) -> ExtReal {
        let p = &self.pieces[index];
        let (a, b) = (p.interval.a, p.interval.b);
        let k = self.k;
        let mut best = f64::NEG_INFINITY;
        if t <= b {
            // s >= t: phi(s) - k s + k t
            best = best.max(k * t + p.formula.max_tilted(-k, a.max(t), b));
        }
        if t >= a {
            // s <= t: phi(s) + k s - k t
            best = best.max(-k * t + p.formula.max_tilted(k, a, b.min(t)));
        }
        ExtReal::lift(best)
    }

    pub(crate) fn eval(&self, t: f64) -> ExtReal {
        (0..self.pieces.len())
            .map(|i| self.hull_eval(i, t))
            .max()
            .unwrap_or(NegInf)
    }

    pub(crate) fn upper_bound(&self) -> f64 {
        self.pieces
            .iter()
            .map(|p| p.formula.max_on(p.interval.a, p.interval.b).0)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Continuous fields decreasing to `J*` as `k` grows; `k1 < k2` gives
/// `J^(k1) >= J^(k2) >= J*`.
pub fn monotone_usc_approximation(j: &Field, k: f64) -> Result<Field> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::param("k", "must be a positive finite number"));
    }
    let (pieces, k) = match j {
        Field::Piecewise(p) => (p.clone(), k),
        // sup-convolutions compose by taking the smaller constant
        Field::Envelope(env) => (env.pieces.clone(), k.min(env.k)),
        Field::Callable(_) => {
            return Err(Error::Unsupported {
                what: "monotone_usc_approximation",
                reason: "requires a piecewise field",
            })
        }
    };
    if pieces.is_empty() {
        return Err(Error::param("field", "identically -inf on [0, 1]"));
    }
    let pieces = pieces
        .into_iter()
        .map(|p| Piece {
            interval: p.interval.closure(),
            formula: p.formula,
        })
        .collect();
    Ok(Field::Envelope(Envelope { pieces, k }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext::Finite;
    use crate::formula::Formula;
    use crate::interval::Interval;

    fn plateau() -> Field {
        Field::log_indicator(&[Interval::closed(0.0, 0.5).unwrap()]).unwrap()
    }

    #[test]
    fn distance_envelope() {
        let g = monotone_usc_approximation(&plateau(), 4.0).unwrap();
        assert_eq!(g.eval(0.75).unwrap(), Finite(-1.0));
        assert_eq!(g.eval(0.25).unwrap(), Finite(0.0));
        let z = monotone_usc_approximation(&Field::constant(0.0), 3.0).unwrap();
        for t in [0.0, 0.3, 1.0] {
            assert_eq!(z.eval(t).unwrap(), Finite(0.0));
        }
    }

    #[test]
    fn errors() {
        assert!(monotone_usc_approximation(&plateau(), 0.0).is_err());
        assert!(monotone_usc_approximation(&Field::Piecewise(vec![]), 1.0).is_err());
    }

    /// Brute-force sup over a fine grid of `s`, plus the piece endpoints.
    fn brute(j: &Field, k: f64, t: f64) -> f64 {
        let js = j.usc_regularize().unwrap();
        let mut best = f64::NEG_INFINITY;
        let n = 20_000;
        let mut probe = |s: f64| {
            if let Finite(v) = js.eval(s).unwrap() {
                best = best.max(v - k * (t - s).abs());
            }
        };
        for i in 0..=n {
            probe(i as f64 / n as f64);
        }
        for b in js.breakpoints() {
            probe(b);
        }
        probe(t);
        best
    }

    #[test]
    fn matches_brute_force_and_decreases() {
        let j = Field::piecewise(vec![
            Piece::new(
                Interval::new(0.1, 0.4, false, true).unwrap(),
                Formula::quadratic(-3.0, 1.5, -0.1),
            )
            .unwrap(),
            Piece::new(
                Interval::new(0.6, 0.9, true, false).unwrap(),
                Formula::LogAffine {
                    alpha: 2.0,
                    beta: 0.1,
                },
            )
            .unwrap(),
        ])
        .unwrap();
        let js = j.usc_regularize().unwrap();
        for t in [0.0, 0.05, 0.25, 0.5, 0.61, 0.95, 1.0] {
            let mut prev = f64::INFINITY;
            for k in [1.0, 4.0, 16.0, 64.0] {
                let g = monotone_usc_approximation(&j, k)
                    .unwrap()
                    .eval(t)
                    .unwrap()
                    .to_f64();
                assert!(
                    (g - brute(&j, k, t)).abs() < (k + 5.0) * 5e-5,
                    "t={t} k={k}"
                );
                assert!(g <= prev + 1e-12);
                assert!(
                    Finite(g + 1e-12) >= js.eval(t).unwrap(),
                    "t={t} k={k} g={g} j={:?}",
                    js.eval(t)
                );
                prev = g;
            }
        }
    }
}
