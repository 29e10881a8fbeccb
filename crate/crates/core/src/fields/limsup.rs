use serde::{Deserialize, Serialize};

use super::{Field, Piece};
use crate::error::Result;
use crate::ext::{ExtReal, NegInf};

/// Exact limsup predicates of a piecewise field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimsupConditions {
    /// Both one-sided limsups dominate the value everywhere (one-sided at 0, 1).
    pub two_sided: bool,
    /// The deleted two-sided limsup dominates the value everywhere.
    pub weak: bool,
    /// `weak` and upper semicontinuous, i.e. the limsup equals the value.
    pub full: bool,
}

fn left_limit(pieces: &[Piece], t: f64) -> ExtReal {
    pieces
        .iter()
        .filter(|p| !p.interval.is_degenerate() && p.interval.a < t && t <= p.interval.b)
        .map(|p| p.eval(t))
        .max()
        .unwrap_or(NegInf)
}

fn right_limit(pieces: &[Piece], t: f64) -> ExtReal {
    pieces
        .iter()
        .filter(|p| !p.interval.is_degenerate() && p.interval.a <= t && t < p.interval.b)
        .map(|p| p.eval(t))
        .max()
        .unwrap_or(NegInf)
}

/// Inside a piece the field is continuous, so only piece endpoints and the
/// ends of `[0, 1]` need inspecting.
pub fn limsup_conditions(j: &Field) -> Result<LimsupConditions> {
    let pieces = match j {
        Field::Envelope(_) => {
            return Ok(LimsupConditions {
                two_sided: true,
                weak: true,
                full: true,
            })
        }
        other => other.pieces("limsup_conditions")?,
    };
    let mut out = LimsupConditions {
        two_sided: true,
        weak: true,
        full: true,
    };
    let critical = pieces
        .iter()
        .flat_map(|p| [p.interval.a, p.interval.b])
        .chain([0.0, 1.0]);
    let mut usc = true;
    for t in critical {
        let value = j.at(t);
        let (l, r) = (left_limit(pieces, t), right_limit(pieces, t));
        let left_ok = t == 0.0 || l >= value;
        let right_ok = t == 1.0 || r >= value;
        let both = if t == 0.0 {
            r
        } else if t == 1.0 {
            l
        } else {
            l.max(r)
        };
        out.two_sided &= left_ok && right_ok;
        out.weak &= both >= value;
        usc &= both <= value;
    }
    out.full = out.weak && usc;
    Ok(out)
}
