use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::maxima;
use crate::error::{Error, Result};
use crate::ext::{ExtReal, NegInf};
use crate::nodes::NodeSystem;
use crate::sumtrans::Problem;

pub const BRUTE_MAX_N: usize = 4;
/// Largest number of node tuples the oracle will enumerate.
pub const BRUTE_BUDGET: f64 = 5e6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BruteReport {
    pub h: f64,
    pub tuples: usize,
    pub minimax_x: NodeSystem,
    pub minimax: ExtReal,
    pub maximin_x: NodeSystem,
    pub maximin: ExtReal,
}

/// `{k h} ∪ {1}` plus every piece endpoint of the field.
fn coordinates(p: &Problem, h: f64) -> Vec<f64> {
    let steps = (1.0 / h).floor() as usize;
    let mut c: Vec<f64> = (0..=steps)
        .map(|k| k as f64 * h)
        .filter(|&t| t <= 1.0)
        .collect();
    c.push(1.0);
    if let Some(d) = p.field().descriptor() {
        for piece in d.pieces {
            c.push(piece.interval.a);
            c.push(piece.interval.b);
        }
    }
    c.retain(|t| (0.0..=1.0).contains(t));
    c.sort_by(f64::total_cmp);
    c.dedup();
    c
}

fn multichoose(g: usize, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, i| acc * (g + i) as f64 / (i + 1) as f64)
}

/// Calls `visit` on every nondecreasing index tuple with the given head.
fn tuples_with_head(head: usize, g: usize, n: usize, visit: &mut impl FnMut(&[usize])) {
    let mut idx = vec![head; n];
    loop {
        visit(&idx);
        // advance the last index that still has room
        let mut k = n;
        loop {
            if k == 1 {
                return;
            }
            k -= 1;
            if idx[k] + 1 < g {
                idx[k] += 1;
                let v = idx[k];
                for slot in idx.iter_mut().skip(k + 1) {
                    *slot = v;
                }
                break;
            }
        }
    }
}

#[derive(Clone)]
struct Best {
    lo_x: Vec<f64>,
    lo: ExtReal,
    hi_x: Vec<f64>,
    hi: ExtReal,
    count: usize,
}

impl Best {
    fn empty() -> Self {
        Best {
            lo_x: Vec::new(),
            lo: ExtReal::Finite(f64::INFINITY),
            hi_x: Vec::new(),
            hi: NegInf,
            count: 0,
        }
    }

    /// Strict improvements only, so the earliest tuple in enumeration
    /// order (the lexicographically smallest) wins ties.
    fn merge(mut self, other: Best) -> Best {
        if other.lo < self.lo {
            self.lo = other.lo;
            self.lo_x = other.lo_x;
        }
        if other.hi > self.hi {
            self.hi = other.hi;
            self.hi_x = other.hi_x;
        }
        self.count += other.count;
        self
    }
}

/// Minimizes `m̄` and maximizes `m̲` over all ordered node tuples on the
/// grid in a single pass.
pub fn brute_force(p: &Problem, h: f64) -> Result<BruteReport> {
    let n = p.n();
    if n > BRUTE_MAX_N {
        return Err(Error::Unsupported {
            what: "brute-force oracle",
            reason: "n exceeds the combinatorial guard of 4",
        });
    }
    if !(h > 0.0 && h <= 1.0) {
        return Err(Error::param("h", "grid step must lie in (0, 1]"));
    }
    let coords = coordinates(p, h);
    let g = coords.len();
    if multichoose(g, n) > BRUTE_BUDGET {
        return Err(Error::Unsupported {
            what: "brute-force oracle",
            reason: "grid too fine for the enumeration budget",
        });
    }
    let best = (0..g)
        .into_par_iter()
        .map(|head| {
            let mut b = Best::empty();
            let mut x = vec![0.0; n];
            tuples_with_head(head, g, n, &mut |idx| {
                for (xi, &i) in x.iter_mut().zip(idx) {
                    *xi = coords[i];
                }
                let m = maxima(p, &x);
                let (up, low) = (m.upper(), m.lower());
                b.count += 1;
                if up < b.lo {
                    b.lo = up;
                    b.lo_x.clone_from(&x);
                }
                if low > b.hi {
                    b.hi = low;
                    b.hi_x.clone_from(&x);
                }
            });
            b
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Best::empty(), Best::merge);
    if best.hi_x.is_empty() {
        return Err(Error::Infeasible {
            attempts: best.count,
        });
    }
    Ok(BruteReport {
        h,
        tuples: best.count,
        minimax_x: NodeSystem::new(best.lo_x)?,
        minimax: best.lo,
        maximin_x: NodeSystem::new(best.hi_x)?,
        maximin: best.hi,
    })
}

pub fn brute_minimax(p: &Problem, h: f64) -> Result<(NodeSystem, ExtReal)> {
    let r = brute_force(p, h)?;
    Ok((r.minimax_x, r.minimax))
}

pub fn brute_maximin(p: &Problem, h: f64) -> Result<(NodeSystem, ExtReal)> {
    let r = brute_force(p, h)?;
    Ok((r.maximin_x, r.maximin))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext::Finite;
    use crate::fields::Field;
    use crate::kernels::Kernel;
    use approx::assert_abs_diff_eq;

    #[test]
    fn tuple_enumeration_counts() {
        for (g, n) in [(5, 1), (5, 2), (4, 3), (6, 4)] {
            let mut count = 0;
            let mut ordered = true;
            for head in 0..g {
                tuples_with_head(head, g, n, &mut |idx| {
                    count += 1;
                    ordered &= idx.windows(2).all(|w| w[0] <= w[1]);
                });
            }
            assert_eq!(count as f64, multichoose(g, n));
            assert!(ordered);
        }
    }

    #[test]
    fn log_one_node() {
        let p = Problem::uniform(Kernel::log(), 1, Field::constant(0.0)).unwrap();
        let r = brute_force(&p, 1.0 / 1024.0).unwrap();
        assert_eq!(r.minimax_x.nodes(), &[0.5]);
        assert_abs_diff_eq!(r.minimax.to_f64(), -(2f64.ln()), epsilon = 1e-12);
        assert_abs_diff_eq!(r.maximin.to_f64(), -(2f64.ln()), epsilon = 1e-12);
    }

    #[test]
    fn remark_values() {
        let p = Problem::uniform(Kernel::zero(), 1, Field::ramp_below(0.5).unwrap()).unwrap();
        let h = 1.0 / 1024.0;
        let r = brute_force(&p, h).unwrap();
        assert_eq!(r.minimax, Finite(0.5));
        assert_abs_diff_eq!(r.maximin.to_f64(), 0.5 - h, epsilon = 1e-15);
    }

    #[test]
    fn constant_field_zero_kernel() {
        let p = Problem::uniform(Kernel::zero(), 2, Field::constant(-1.5)).unwrap();
        let r = brute_force(&p, 0.1).unwrap();
        assert_eq!(r.minimax, Finite(-1.5));
        assert_eq!(r.maximin, Finite(-1.5));
        assert_eq!(r.minimax_x.nodes(), &[0.0, 0.0]);
    }

    #[test]
    fn guards() {
        let p = Problem::uniform(Kernel::log(), 5, Field::constant(0.0)).unwrap();
        assert!(brute_force(&p, 0.1).is_err());
        let p = Problem::uniform(Kernel::log(), 4, Field::constant(0.0)).unwrap();
        assert!(brute_force(&p, 0.05).is_ok());
        assert!(brute_force(&p, 1e-3).is_err());
    }
}
