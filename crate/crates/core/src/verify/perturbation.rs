use rand::Rng as _;
use serde_json::json;

use super::{scaled_tol, Check, CheckContext, Trial};
use crate::error::Result;
use crate::ext::ExtReal;
use crate::kernels::Kernel;
use crate::rng::Rng;

const MIN_SEPARATION: f64 = 1e-3;
const TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    /// `κ >= 1`, `t ∈ [0, α]`
    A,
    /// `κ <= 1`, `t ∈ [β, 1]`
    B,
    /// `κ = 1`, both ranges, no monotonicity needed
    C,
    /// strict versions of the three above
    D,
    /// `t ∈ [a, b]`, reversed inequality
    E,
}

impl Case {
    pub const ALL: [Case; 5] = [Case::A, Case::B, Case::C, Case::D, Case::E];
}

pub struct Perturbation(pub Case);

#[derive(Debug, Clone, Copy)]
struct Sample {
    alpha: f64,
    a: f64,
    b: f64,
    beta: f64,
    p: f64,
    q: f64,
    t: f64,
}

fn sorted_points(rng: &mut Rng) -> [f64; 4] {
    loop {
        let mut v: [f64; 4] = std::array::from_fn(|_| rng.gen::<f64>());
        v.sort_by(f64::total_cmp);
        let gaps_ok = v[0] >= MIN_SEPARATION
            && 1.0 - v[3] >= MIN_SEPARATION
            && v.windows(2).all(|w| w[1] - w[0] >= MIN_SEPARATION);
        if gaps_ok {
            return v;
        }
    }
}

/// Draws `t` from `[lo, hi]`, hitting either end now and then.
fn in_range(rng: &mut Rng, lo: f64, hi: f64) -> f64 {
    match rng.gen_range(0..20) {
        0 => lo,
        1 => hi,
        _ => rng.gen_range(lo..=hi),
    }
}

/// `kappa` is forced by solving for `q`: `kappa = u` for (a), `1/u` for
/// (b) and `1` for (c).
fn sample(case: Case, rng: &mut Rng) -> Sample {
    let [alpha, a, b, beta] = sorted_points(rng);
    let p = rng.gen_range(0.1..=3.0);
    let q_unit = p * (a - alpha) / (beta - b);
    let base = match case {
        Case::D => [Case::A, Case::B, Case::C][rng.gen_range(0..3)],
        c => c,
    };
    let u: f64 = rng.gen_range(1.0..=4.0);
    let (q, t) = match base {
        Case::A => (q_unit / u, in_range(rng, 0.0, alpha)),
        Case::B => (q_unit * u, in_range(rng, beta, 1.0)),
        Case::C => {
            let t = if rng.gen() {
                in_range(rng, 0.0, alpha)
            } else {
                in_range(rng, beta, 1.0)
            };
            (q_unit, t)
        }
        Case::E => (rng.gen_range(0.1..=3.0), in_range(rng, a, b)),
        Case::D => unreachable!(),
    };
    Sample {
        alpha,
        a,
        b,
        beta,
        p,
        q,
        t,
    }
}

/// `p K(t - c1) + q K(t - c2)`
fn side(k: &Kernel, t: f64, c1: f64, c2: f64, p: f64, q: f64) -> ExtReal {
    k.at(t - c1).scale(p) + k.at(t - c2).scale(q)
}

impl Check for Perturbation {
    fn id(&self) -> &'static str {
        match self.0 {
            Case::A => "lem2.4/a",
            Case::B => "lem2.4/b",
            Case::C => "lem2.4/c",
            Case::D => "lem2.4/d",
            Case::E => "lem2.4/e",
        }
    }

    fn default_trials(&self) -> usize {
        100_000
    }

    fn configs(&self, ctx: &CheckContext) -> usize {
        ctx.kernels.len()
    }

    fn trial(&self, ctx: &CheckContext, config: usize, _: usize, rng: &mut Rng) -> Result<Trial> {
        let (name, k) = &ctx.kernels[config];
        let flags = k.flags();
        let s = sample(self.0, rng);
        let input = json!({
            "kernel": name, "alpha": s.alpha, "a": s.a, "b": s.b, "beta": s.beta,
            "p": s.p, "q": s.q, "t": s.t,
        });
        let applies = match self.0 {
            Case::A | Case::B | Case::E => flags.monotone,
            Case::C => true,
            Case::D => flags.strictly_concave,
        };
        if !applies {
            return Ok(Trial::vacuous(input));
        }
        let outer = side(k, s.t, s.alpha, s.beta, s.p, s.q);
        let inner = side(k, s.t, s.a, s.b, s.p, s.q);
        // slack of the claimed inequality, oriented so that >= 0 holds
        let (lhs, rhs) = match self.0 {
            Case::E => (inner, outer),
            _ => (outer, inner),
        };
        let (margin, violated) = match (lhs, rhs) {
            (ExtReal::NegInf, ExtReal::NegInf) => (0.0, self.0 == Case::D),
            (ExtReal::NegInf, _) => (f64::INFINITY, false),
            (_, ExtReal::NegInf) => (f64::NEG_INFINITY, true),
            (ExtReal::Finite(l), ExtReal::Finite(r)) => {
                let m = r - l;
                let strict = self.0 == Case::D;
                let violated = if strict {
                    m <= 0.0
                } else {
                    m < -scaled_tol(TOL, l, r)
                };
                (m, violated)
            }
        };
        Ok(Trial::new(margin, violated, input))
    }
}
