//! Kernel functions on `[-1, 1]`: concave on each side of `0`, extended
//! continuous, bounded above.
//!
//! Each family implements [`KernelFunction`] and is registered by name in
//! [`KernelRegistry`]; [`Kernel`] is the shared handle the rest of the crate
//! passes around.

mod families;
mod registry;
mod transforms;
mod validate;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::ExtReal;

pub use families::{LogKernel, PiecewiseKernel, PowerKernel, SqrtKernel, ZeroKernel};
pub use registry::{KernelBuilder, KernelDescriptor, KernelRegistry};
pub use transforms::{Scaled, Singularized, Strictified};
pub use validate::{kernel_validate, FlagViolation, ValidationReport};

/// Declared structural properties. They are asserted by the constructor and
/// only ever falsified numerically, never inferred.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelFlags {
    /// `K(0) = -inf`
    pub singular: bool,
    /// non-increasing on `(-1, 0)`, non-decreasing on `(0, 1)`
    pub monotone: bool,
    /// strictly decreasing on `[-1, 0)`, strictly increasing on `(0, 1]`
    pub strictly_monotone: bool,
    pub strictly_concave: bool,
    /// divided differences tend to `-inf` / `+inf` approaching `0` from the
    /// left / right
    pub cusp: bool,
}

pub trait KernelFunction: Send + Sync + fmt::Debug {
    /// Registry name of the family (or transform).
    fn family(&self) -> &'static str;

    /// Value at `t`, already known to lie in `[-1, 1]`. At `0` and `±1` the
    /// one-sided limits are returned.
    fn value(&self, t: f64) -> ExtReal;

    fn flags(&self) -> KernelFlags;

    /// Descriptor that rebuilds this kernel through the registry, if any.
    fn descriptor(&self) -> Option<KernelDescriptor> {
        None
    }
}

#[derive(Clone)]
pub struct Kernel(Arc<dyn KernelFunction>);

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Kernel {
    pub fn new<K: KernelFunction + 'static>(k: K) -> Self {
        Kernel(Arc::new(k))
    }

    pub fn zero() -> Self {
        Kernel::new(ZeroKernel)
    }

    pub fn log() -> Self {
        Kernel::new(LogKernel)
    }

    pub fn sqrt() -> Self {
        Kernel::new(SqrtKernel)
    }

    /// `-|t|^(-s)`
    pub fn power(s: f64) -> Result<Self> {
        Ok(Kernel::new(PowerKernel::new(s)?))
    }

    pub fn family(&self) -> &'static str {
        self.0.family()
    }

    pub fn flags(&self) -> KernelFlags {
        self.0.flags()
    }

    pub fn is_singular(&self) -> bool {
        self.flags().singular
    }

    pub fn descriptor(&self) -> Option<KernelDescriptor> {
        self.0.descriptor()
    }

    pub fn eval(&self, t: f64) -> Result<ExtReal> {
        if !(-1.0..=1.0).contains(&t) {
            return Err(Error::OutOfDomain {
                value: t,
                lo: -1.0,
                hi: 1.0,
            });
        }
        Ok(self.0.value(t))
    }

    /// Evaluation for callers that guarantee `t` in `[-1, 1]` up to rounding.
    #[inline]
    pub(crate) fn at(&self, t: f64) -> ExtReal {
        self.0.value(t.clamp(-1.0, 1.0))
    }

    /// `K(t) + eta * sqrt|t|`: strictly concave and strictly monotone when
    /// `K` is monotone.
    pub fn strictify(&self, eta: f64) -> Result<Kernel> {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::param("eta", "must be a positive finite number"));
        }
        if !self.flags().monotone {
            return Err(Error::param(
                "kernel",
                "strictify requires a monotone kernel",
            ));
        }
        Ok(Kernel::new(Strictified::new(self.clone(), eta)))
    }

    /// `K(t) + min(ln(|t| / eta), 0)`: singular, equal to `K` for `|t| >= eta`.
    pub fn singularize(&self, eta: f64) -> Result<Kernel> {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::param("eta", "must be a positive finite number"));
        }
        Ok(Kernel::new(Singularized::new(self.clone(), eta)))
    }

    /// `nu * K(t)` for `nu > 0`.
    pub fn scaled(&self, nu: f64) -> Result<Kernel> {
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(Error::param("nu", "must be a positive finite number"));
        }
        Ok(Kernel::new(Scaled::new(self.clone(), nu)))
    }
}

/// Free-function form of [`Kernel::eval`].
pub fn kernel_eval(k: &Kernel, t: f64) -> Result<ExtReal> {
    k.eval(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext::{Finite, NegInf};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn v(k: &Kernel, t: f64) -> f64 {
        k.eval(t).unwrap().to_f64()
    }

    #[test]
    fn closed_forms() {
        assert_abs_diff_eq!(
            v(&Kernel::log(), 0.5),
            -std::f64::consts::LN_2,
            epsilon = 1e-6
        );
        assert_eq!(Kernel::log().eval(0.0).unwrap(), NegInf);
        for t in [-1.0, -0.3, 0.0, 0.7, 1.0] {
            assert_eq!(Kernel::zero().eval(t).unwrap(), Finite(0.0));
        }
        assert!(Kernel::log().eval(1.5).is_err());
    }

    #[test]
    fn strictify_values() {
        let k = Kernel::log().strictify(0.1).unwrap();
        assert_abs_diff_eq!(v(&k, 0.25), -1.386294 + 0.05, epsilon = 1e-6);
        assert_eq!(k.eval(0.0).unwrap(), NegInf);
        let z = Kernel::zero().strictify(1.0).unwrap();
        assert_abs_diff_eq!(v(&z, 0.25), 0.5, epsilon = 1e-15);
        assert_eq!(
            Kernel::sqrt().strictify(0.1).unwrap().eval(0.0).unwrap(),
            Finite(0.0)
        );
        assert!(Kernel::log().strictify(0.0).is_err());
        assert!(Kernel::log().strictify(-1.0).is_err());
        let f = k.flags();
        assert!(f.strictly_concave && f.strictly_monotone && f.monotone);
    }

    #[test]
    fn singularize_values() {
        let k = Kernel::zero().singularize(0.5).unwrap();
        assert_abs_diff_eq!(v(&k, 0.25), -std::f64::consts::LN_2, epsilon = 1e-6);
        assert_eq!(k.eval(0.75).unwrap(), Finite(0.0));
        assert_eq!(k.eval(0.0).unwrap(), NegInf);
        assert!(k.flags().singular);
        assert!(Kernel::zero().singularize(0.0).is_err());
    }

    fn kernels() -> Vec<Kernel> {
        vec![
            Kernel::zero(),
            Kernel::log(),
            Kernel::sqrt(),
            Kernel::power(0.5).unwrap(),
            Kernel::power(1.5).unwrap(),
        ]
    }

    proptest! {
        #[test]
        fn midpoint_concavity(u in 0.0f64..1.0, w in 0.0f64..1.0, left in any::<bool>()) {
            let (mut lo, mut hi) = if u < w { (u, w) } else { (w, u) };
            if lo == 0.0 || lo == hi { return Ok(()); }
            if left { (lo, hi) = (-hi, -lo); }
            for k in kernels() {
                let (a, b, m) = (v(&k, lo), v(&k, hi), v(&k, 0.5 * (lo + hi)));
                prop_assert!(m >= 0.5 * (a + b) - 1e-12 * (1.0 + a.abs() + b.abs()), "{:?}", k);
            }
        }

        #[test]
        fn strictify_is_ordered_in_eta(t in -1.0f64..=1.0, e1 in 0.001f64..1.0, e2 in 0.001f64..1.0) {
            let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
            for k in kernels() {
                let a = k.strictify(lo).unwrap().eval(t).unwrap();
                let b = k.strictify(hi).unwrap().eval(t).unwrap();
                let base = k.eval(t).unwrap();
                prop_assert!(a <= b);
                prop_assert!(base <= a);
                if t == 0.0 { prop_assert_eq!(a, b); }
            }
        }

        #[test]
        fn singularize_is_ordered_and_local(t in -1.0f64..=1.0, e1 in 0.001f64..1.0, e2 in 0.001f64..1.0) {
            let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
            for k in kernels() {
                let a = k.singularize(lo).unwrap().eval(t).unwrap();
                let b = k.singularize(hi).unwrap().eval(t).unwrap();
                let base = k.eval(t).unwrap();
                prop_assert!(a >= b);
                prop_assert!(a <= base);
                if t.abs() >= lo { prop_assert_eq!(a, base); }
            }
        }

        #[test]
        fn strictify_keeps_monotone_differences(s in 0.0f64..1.0, d in 0.0f64..0.5, eta in 0.001f64..1.0) {
            let u = s;
            let w = (s + d).min(1.0);
            for k in kernels() {
                let ks = k.strictify(eta).unwrap();
                // right side non-decreasing, left side non-increasing
                prop_assert!(ks.eval(w).unwrap() >= ks.eval(u).unwrap());
                prop_assert!(ks.eval(-w).unwrap() >= ks.eval(-u).unwrap() || u == 0.0);
            }
        }
    }
}
