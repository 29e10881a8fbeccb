//! Golden-section search for the maximum of a concave function on a
//! closed interval.

use crate::ext::ExtReal;

/// Abscissa tolerance used throughout for cell maximization.
pub const XTOL: f64 = 1e-12;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy)]
pub struct GoldenMax {
    pub at: f64,
    pub value: ExtReal,
    /// Variation of the function over the final bracket.
    pub err: f64,
}

/// Maximizes `g` over the interior probes of `[lo, hi]`. For concave `g`
/// the result converges to the maximum over the open interval; endpoint
/// values are the caller's business.
pub fn maximize<G: Fn(f64) -> ExtReal>(g: G, lo: f64, hi: f64, xtol: f64) -> GoldenMax {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut gc = g(c);
    let mut gd = g(d);
    let mut best = if gd > gc { (d, gd) } else { (c, gc) };
    while b - a > xtol {
        if gc < gd {
            a = c;
            c = d;
            gc = gd;
            d = a + INV_PHI * (b - a);
            if !(d > c && d < b) {
                break;
            }
            gd = g(d);
            if gd > best.1 {
                best = (d, gd);
            }
        } else {
            b = d;
            d = c;
            gd = gc;
            c = b - INV_PHI * (b - a);
            if !(c > a && c < d) {
                break;
            }
            gc = g(c);
            if gc > best.1 {
                best = (c, gc);
            }
        }
    }
    GoldenMax {
        at: best.0,
        value: best.1,
        err: gc.distance(gd),
    }
}
