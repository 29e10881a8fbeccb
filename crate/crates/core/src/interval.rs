//! Intervals with open/closed ends, and finite unions of them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub a: f64,
    pub b: f64,
    #[serde(default = "yes")]
    pub closed_left: bool,
    #[serde(default = "yes")]
    pub closed_right: bool,
}

fn yes() -> bool {
    true
}

impl Interval {
    pub fn new(a: f64, b: f64, closed_left: bool, closed_right: bool) -> Result<Self> {
        let iv = Interval {
            a,
            b,
            closed_left,
            closed_right,
        };
        iv.validate()?;
        Ok(iv)
    }

    pub fn closed(a: f64, b: f64) -> Result<Self> {
        Self::new(a, b, true, true)
    }

    pub fn open(a: f64, b: f64) -> Result<Self> {
        Self::new(a, b, false, false)
    }

    pub fn point(p: f64) -> Self {
        Interval {
            a: p,
            b: p,
            closed_left: true,
            closed_right: true,
        }
    }

    pub fn unit() -> Self {
        Interval {
            a: 0.0,
            b: 1.0,
            closed_left: true,
            closed_right: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |reason| {
            Err(Error::InvalidInterval {
                a: self.a,
                b: self.b,
                reason,
            })
        };
        if !self.a.is_finite() || !self.b.is_finite() {
            return bad("endpoints must be finite");
        }
        if self.a > self.b {
            return bad("a > b");
        }
        if self.a == self.b && !(self.closed_left && self.closed_right) {
            return bad("a degenerate interval must be closed at both ends");
        }
        Ok(())
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    pub fn contains(&self, t: f64) -> bool {
        let left = if self.closed_left {
            t >= self.a
        } else {
            t > self.a
        };
        let right = if self.closed_right {
            t <= self.b
        } else {
            t < self.b
        };
        left && right
    }

    /// True when `(lo, hi)` lies inside this interval.
    pub(crate) fn covers_open(&self, lo: f64, hi: f64) -> bool {
        self.a <= lo && hi <= self.b && lo < hi
    }

    pub fn closure(&self) -> Interval {
        Interval {
            closed_left: true,
            closed_right: true,
            ..*self
        }
    }

    /// Intersection, `None` when empty.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let (a, closed_left) = if self.a > other.a {
            (self.a, self.closed_left)
        } else if other.a > self.a {
            (other.a, other.closed_left)
        } else {
            (self.a, self.closed_left && other.closed_left)
        };
        let (b, closed_right) = if self.b < other.b {
            (self.b, self.closed_right)
        } else if other.b < self.b {
            (other.b, other.closed_right)
        } else {
            (self.b, self.closed_right && other.closed_right)
        };
        let iv = Interval {
            a,
            b,
            closed_left,
            closed_right,
        };
        (a < b || (a == b && closed_left && closed_right)).then_some(iv)
    }

    /// Whether the open interval `(lo, hi)` meets this interval.
    pub fn meets_open(&self, lo: f64, hi: f64) -> bool {
        if lo >= hi {
            return false;
        }
        if self.is_degenerate() {
            return lo < self.a && self.a < hi;
        }
        self.a < hi && lo < self.b
    }
}

/// A finite union of pairwise disjoint intervals and isolated points,
/// kept in canonical sorted form.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PointSet {
    pub intervals: Vec<Interval>,
    pub points: Vec<f64>,
}

impl PointSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Canonical union of arbitrary (possibly overlapping) intervals.
    pub fn from_intervals<I: IntoIterator<Item = Interval>>(parts: I) -> Self {
        let mut parts: Vec<Interval> = parts.into_iter().collect();
        parts.sort_by(|x, y| {
            x.a.total_cmp(&y.a)
                .then_with(|| y.closed_left.cmp(&x.closed_left))
        });
        let mut merged: Vec<Interval> = Vec::new();
        for p in parts {
            if let Some(cur) = merged.last_mut() {
                let touches = p.a < cur.b || (p.a == cur.b && (cur.closed_right || p.closed_left));
                if touches {
                    if p.a == cur.a {
                        cur.closed_left |= p.closed_left;
                    }
                    if p.b > cur.b {
                        cur.b = p.b;
                        cur.closed_right = p.closed_right;
                    } else if p.b == cur.b {
                        cur.closed_right |= p.closed_right;
                    }
                    continue;
                }
            }
            merged.push(p);
        }
        let (points, intervals): (Vec<_>, Vec<_>) =
            merged.into_iter().partition(Interval::is_degenerate);
        PointSet {
            intervals,
            points: points.into_iter().map(|p| p.a).collect(),
        }
    }

    pub fn parts(&self) -> impl Iterator<Item = Interval> + '_ {
        self.intervals
            .iter()
            .copied()
            .chain(self.points.iter().map(|&p| Interval::point(p)))
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        PointSet::from_intervals(self.parts().chain(other.parts()))
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty() && self.points.is_empty()
    }

    pub fn contains(&self, t: f64) -> bool {
        self.parts().any(|p| p.contains(t))
    }

    pub fn meets_open(&self, lo: f64, hi: f64) -> bool {
        self.parts().any(|p| p.meets_open(lo, hi))
    }

    /// Complement relative to `[0, 1]`.
    pub fn complement_in_unit(&self) -> PointSet {
        let mut out = Vec::new();
        // (position, included-at-position) of the left edge of the next gap
        let mut cursor = 0.0;
        let mut cursor_closed = true;
        for part in self.parts_sorted() {
            let (gap_right_closed, gap_end) = (!part.closed_left, part.a);
            if gap_end > cursor || (gap_end == cursor && cursor_closed && gap_right_closed) {
                out.push(Interval {
                    a: cursor,
                    b: gap_end,
                    closed_left: cursor_closed,
                    closed_right: gap_right_closed,
                });
            }
            cursor = part.b;
            cursor_closed = !part.closed_right;
        }
        if cursor < 1.0 || (cursor == 1.0 && cursor_closed) {
            out.push(Interval {
                a: cursor,
                b: 1.0,
                closed_left: cursor_closed,
                closed_right: true,
            });
        }
        PointSet::from_intervals(out)
    }

    fn parts_sorted(&self) -> Vec<Interval> {
        let mut v: Vec<Interval> = self.parts().collect();
        v.sort_by(|x, y| x.a.total_cmp(&y.a));
        v
    }

    /// Nearest point of the set to `t`, if the set is non-empty. For open
    /// ends the returned point is the boundary itself (a limit point).
    pub fn nearest(&self, t: f64) -> Option<f64> {
        self.parts()
            .map(|p| t.clamp(p.a, p.b))
            .min_by(|x, y| (x - t).abs().total_cmp(&(y - t).abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Interval::new(0.5, 0.2, true, true).is_err());
        assert!(Interval::new(0.5, 0.5, true, false).is_err());
        assert!(Interval::closed(0.5, 0.5).is_ok());
    }

    #[test]
    fn contains_respects_ends() {
        let iv = Interval::new(0.0, 0.5, true, false).unwrap();
        assert!(iv.contains(0.0));
        assert!(iv.contains(0.25));
        assert!(!iv.contains(0.5));
    }

    #[test]
    fn merge_half_open_neighbours() {
        let s = PointSet::from_intervals([
            Interval::new(0.0, 0.5, true, false).unwrap(),
            Interval::closed(0.5, 1.0).unwrap(),
        ]);
        assert_eq!(s.intervals, vec![Interval::unit()]);
        let gap = PointSet::from_intervals([
            Interval::new(0.0, 0.5, true, false).unwrap(),
            Interval::new(0.5, 1.0, false, true).unwrap(),
        ]);
        assert_eq!(gap.intervals.len(), 2);
        assert_eq!(gap.complement_in_unit().points, vec![0.5]);
    }

    #[test]
    fn point_joins_two_open_ends() {
        let s = PointSet::from_intervals([
            Interval::new(0.0, 0.5, true, false).unwrap(),
            Interval::point(0.5),
            Interval::new(0.5, 1.0, false, true).unwrap(),
        ]);
        assert_eq!(s.intervals, vec![Interval::unit()]);
        assert!(s.points.is_empty());
    }

    #[test]
    fn complement() {
        let s = PointSet::from_intervals([Interval::new(0.0, 0.5, true, false).unwrap()]);
        let c = s.complement_in_unit();
        assert_eq!(c.intervals, vec![Interval::closed(0.5, 1.0).unwrap()]);
        let full = PointSet::from_intervals([Interval::unit()]);
        assert!(full.complement_in_unit().is_empty());
        let pt = PointSet::from_intervals([Interval::point(0.25)]);
        let c = pt.complement_in_unit();
        assert_eq!(
            c.intervals,
            vec![
                Interval::new(0.0, 0.25, true, false).unwrap(),
                Interval::new(0.25, 1.0, false, true).unwrap()
            ]
        );
        assert_eq!(c.complement_in_unit(), pt);
    }
}
