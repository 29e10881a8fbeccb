//! Extended reals `R ∪ {-inf}`.
//!
//! `-inf` is a separate tag rather than `f64::NEG_INFINITY` so that the
//! absorbing rule is exact and can be asserted on. `+inf` and NaN are not
//! representable.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::Add;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    NegInf,
    Finite(f64),
}

pub use ExtReal::{Finite, NegInf};

impl ExtReal {
    pub const ZERO: ExtReal = Finite(0.0);

    /// Converts a float, mapping `-inf` to [`NegInf`] and rejecting NaN and `+inf`.
    pub fn from_f64(x: f64) -> Result<Self> {
        if x.is_nan() || x == f64::INFINITY {
            return Err(Error::param(
                "value",
                format!("{x} is not an extended real"),
            ));
        }
        if x == f64::NEG_INFINITY {
            Ok(NegInf)
        } else {
            Ok(Finite(x))
        }
    }

    /// Like [`ExtReal::from_f64`] but for values produced internally by
    /// concave formulas, where `-inf` may arise from `ln 0`.
    pub(crate) fn lift(x: f64) -> Self {
        debug_assert!(!x.is_nan() && x != f64::INFINITY, "lift({x})");
        if x == f64::NEG_INFINITY {
            NegInf
        } else {
            Finite(x)
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Finite(_))
    }

    pub fn is_neg_inf(self) -> bool {
        matches!(self, NegInf)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Finite(x) => Some(x),
            NegInf => None,
        }
    }

    /// `f64` view with `-inf` mapped to `f64::NEG_INFINITY`.
    pub fn to_f64(self) -> f64 {
        match self {
            Finite(x) => x,
            NegInf => f64::NEG_INFINITY,
        }
    }

    /// Multiplication by a positive scalar.
    pub fn scale(self, c: f64) -> Self {
        debug_assert!(c > 0.0);
        match self {
            Finite(x) => Finite(c * x),
            NegInf => NegInf,
        }
    }

    /// `self - other`; `None` when `other` is `-inf` (the result would be
    /// `+inf` or undefined).
    pub fn checked_sub(self, other: ExtReal) -> Option<ExtReal> {
        match (self, other) {
            (_, NegInf) => None,
            (NegInf, Finite(_)) => Some(NegInf),
            (Finite(a), Finite(b)) => Some(Finite(a - b)),
        }
    }

    pub fn max(self, other: ExtReal) -> ExtReal {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: ExtReal) -> ExtReal {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Absolute difference, `+inf` (as `f64`) when exactly one side is `-inf`
    /// and `0` when both are.
    pub fn distance(self, other: ExtReal) -> f64 {
        match (self, other) {
            (Finite(a), Finite(b)) => (a - b).abs(),
            (NegInf, NegInf) => 0.0,
            _ => f64::INFINITY,
        }
    }
}

impl Eq for ExtReal {}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (NegInf, NegInf) => Ordering::Equal,
            (NegInf, Finite(_)) => Ordering::Less,
            (Finite(_), NegInf) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.partial_cmp(b).unwrap_or(Ordering::Equal),
        }
    }
}

impl Add for ExtReal {
    type Output = ExtReal;

    fn add(self, rhs: ExtReal) -> ExtReal {
        match (self, rhs) {
            (Finite(a), Finite(b)) => Finite(a + b),
            _ => NegInf,
        }
    }
}

impl Add<f64> for ExtReal {
    type Output = ExtReal;

    fn add(self, rhs: f64) -> ExtReal {
        self + Finite(rhs)
    }
}

impl Sum for ExtReal {
    fn sum<I: Iterator<Item = ExtReal>>(iter: I) -> ExtReal {
        let mut acc = 0.0;
        for term in iter {
            match term {
                Finite(x) => acc += x,
                NegInf => return NegInf,
            }
        }
        Finite(acc)
    }
}

/// Sum with the absorbing `-inf` rule. The empty sum is `0`.
pub fn ext_sum<I: IntoIterator<Item = ExtReal>>(terms: I) -> ExtReal {
    terms.into_iter().sum()
}

impl From<f64> for ExtReal {
    fn from(x: f64) -> Self {
        ExtReal::lift(x)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finite(x) => write!(f, "{x}"),
            NegInf => f.write_str("-inf"),
        }
    }
}

// JSON numbers cannot hold -inf, so it travels as the string "-inf".
impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Finite(x) => serializer.serialize_f64(*x),
            NegInf => serializer.serialize_str("-inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Text(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Num(x) => ExtReal::from_f64(x).map_err(serde::de::Error::custom),
            Repr::Text(s) if s == "-inf" => Ok(NegInf),
            Repr::Text(s) => Err(serde::de::Error::custom(format!(
                "expected a number or \"-inf\", got {s:?}"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sums() {
        assert_eq!(ext_sum([Finite(1.0), Finite(2.5)]), Finite(3.5));
        assert_eq!(ext_sum([Finite(1.0), NegInf]), NegInf);
        assert_eq!(ext_sum([NegInf, NegInf]), NegInf);
    }

    #[test]
    fn order_is_total_with_neg_inf_at_bottom() {
        assert!(NegInf < Finite(-1e300));
        assert!(Finite(0.0) > NegInf);
        assert_eq!(NegInf.max(Finite(-3.0)), Finite(-3.0));
        assert_eq!(NegInf.min(Finite(-3.0)), NegInf);
    }

    #[test]
    fn rejects_nan_and_pos_inf() {
        assert!(ExtReal::from_f64(f64::NAN).is_err());
        assert!(ExtReal::from_f64(f64::INFINITY).is_err());
        assert_eq!(ExtReal::from_f64(f64::NEG_INFINITY).unwrap(), NegInf);
    }

    #[test]
    fn subtraction_of_neg_inf_is_undefined() {
        assert_eq!(Finite(1.0).checked_sub(NegInf), None);
        assert_eq!(NegInf.checked_sub(NegInf), None);
        assert_eq!(NegInf.checked_sub(Finite(1.0)), Some(NegInf));
    }

    #[test]
    fn json_round_trip() {
        let v = vec![Finite(0.1), NegInf, Finite(-2.5e-300)];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, "[0.1,\"-inf\",-2.5e-300]");
        let back: Vec<ExtReal> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }

    fn ext() -> impl Strategy<Value = ExtReal> {
        prop_oneof![
            1 => Just(NegInf),
            6 => (-1e3f64..1e3).prop_map(Finite),
        ]
    }

    proptest! {
        #[test]
        fn sum_commutes_and_associates(mut terms in prop::collection::vec(ext(), 1..12), seed in any::<u64>()) {
            let forward = ext_sum(terms.iter().copied());
            // a deterministic shuffle driven by the seed
            let len = terms.len();
            let mut s = seed;
            for i in (1..len).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                terms.swap(i, (s >> 33) as usize % (i + 1));
            }
            let shuffled = ext_sum(terms.iter().copied());
            // pairwise reassociation
            let half = len / 2;
            let nested = ext_sum(terms[..half].iter().copied()) + ext_sum(terms[half..].iter().copied());
            prop_assert_eq!(forward.is_neg_inf(), shuffled.is_neg_inf());
            prop_assert_eq!(forward.is_neg_inf(), nested.is_neg_inf());
            if let (Finite(a), Finite(b), Finite(c)) = (forward, shuffled, nested) {
                let scale = terms.iter().filter_map(|t| t.finite()).map(f64::abs).sum::<f64>().max(1.0);
                prop_assert!((a - b).abs() <= 1e-15 * scale * len as f64);
                prop_assert!((a - c).abs() <= 1e-15 * scale * len as f64);
            }
        }
    }
}
