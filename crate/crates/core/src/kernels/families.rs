use serde_json::json;

use super::{KernelDescriptor, KernelFlags, KernelFunction};
use crate::error::{Error, Result};
use crate::ext::{ExtReal, Finite, NegInf};
use crate::formula::Formula;

#[derive(Debug, Clone, Copy)]
pub struct ZeroKernel;

impl KernelFunction for ZeroKernel {
    fn family(&self) -> &'static str {
        "zero"
    }

    fn value(&self, _t: f64) -> ExtReal {
        Finite(0.0)
    }

    fn flags(&self) -> KernelFlags {
        KernelFlags {
            monotone: true,
            ..KernelFlags::default()
        }
    }

    fn descriptor(&self) -> Option<KernelDescriptor> {
        Some(KernelDescriptor::family("zero"))
    }
}

/// `ln|t|`
#[derive(Debug, Clone, Copy)]
pub struct LogKernel;

impl KernelFunction for LogKernel {
    fn family(&self) -> &'static str {
        "log"
    }

    fn value(&self, t: f64) -> ExtReal {
        if t == 0.0 {
            NegInf
        } else {
            Finite(t.abs().ln())
        }
    }

    fn flags(&self) -> KernelFlags {
        KernelFlags {
            singular: true,
            monotone: true,
            strictly_monotone: true,
            strictly_concave: true,
            cusp: true,
        }
    }

    fn descriptor(&self) -> Option<KernelDescriptor> {
        Some(KernelDescriptor::family("log"))
    }
}

/// `sqrt|t|`: finite, monotone, strictly concave, with a cusp at `0`.
#[derive(Debug, Clone, Copy)]
pub struct SqrtKernel;

impl KernelFunction for SqrtKernel {
    fn family(&self) -> &'static str {
        "sqrt"
    }

    fn value(&self, t: f64) -> ExtReal {
        Finite(t.abs().sqrt())
    }

    fn flags(&self) -> KernelFlags {
        KernelFlags {
            singular: false,
            monotone: true,
            strictly_monotone: true,
            strictly_concave: true,
            cusp: true,
        }
    }

    fn descriptor(&self) -> Option<KernelDescriptor> {
        Some(KernelDescriptor::family("sqrt"))
    }
}

/// Riesz-type `-|t|^(-s)`, `s > 0`.
#[derive(Debug, Clone, Copy)]
pub struct PowerKernel {
    s: f64,
}

impl PowerKernel {
    pub fn new(s: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::param("s", "power kernel exponent must be positive"));
        }
        Ok(PowerKernel { s })
    }

    pub fn exponent(&self) -> f64 {
        self.s
    }
}

impl KernelFunction for PowerKernel {
    fn family(&self) -> &'static str {
        "power"
    }

    fn value(&self, t: f64) -> ExtReal {
        if t == 0.0 {
            NegInf
        } else {
            ExtReal::lift(-t.abs().powf(-self.s))
        }
    }

    fn flags(&self) -> KernelFlags {
        KernelFlags {
            singular: true,
            monotone: true,
            strictly_monotone: true,
            strictly_concave: true,
            cusp: true,
        }
    }

    fn descriptor(&self) -> Option<KernelDescriptor> {
        let mut d = KernelDescriptor::family("power");
        d.params = json!({ "s": self.s });
        Some(d)
    }
}

/// A kernel given by one concave closed form on each side of `0`. The two
/// sides must share the value at `0`; flags are whatever the caller declares.
#[derive(Debug, Clone)]
pub struct PiecewiseKernel {
    left: Formula,
    right: Formula,
    flags: KernelFlags,
}

impl PiecewiseKernel {
    pub fn new(left: Formula, right: Formula, flags: KernelFlags) -> Result<Self> {
        left.validate_on(-1.0, 0.0)
            .map_err(|e| Error::param("left", e.to_string()))?;
        right
            .validate_on(0.0, 1.0)
            .map_err(|e| Error::param("right", e.to_string()))?;
        let (l0, r0) = (left.eval(0.0), right.eval(0.0));
        let agree = (l0 == r0) || (l0 - r0).abs() <= 1e-12 * (1.0 + l0.abs());
        if !agree {
            return Err(Error::param(
                "piecewise",
                format!("one-sided limits at 0 differ: {l0} vs {r0}"),
            ));
        }
        Ok(PiecewiseKernel { left, right, flags })
    }
}

impl KernelFunction for PiecewiseKernel {
    fn family(&self) -> &'static str {
        "piecewise"
    }

    fn value(&self, t: f64) -> ExtReal {
        if t < 0.0 {
            ExtReal::lift(self.left.eval(t))
        } else {
            ExtReal::lift(self.right.eval(t))
        }
    }

    fn flags(&self) -> KernelFlags {
        self.flags
    }

    fn descriptor(&self) -> Option<KernelDescriptor> {
        let mut d = KernelDescriptor::family("piecewise");
        d.params = json!({ "left": self.left, "right": self.right, "flags": self.flags });
        Some(d)
    }
}
