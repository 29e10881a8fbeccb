//! Kernel transforms: strictification, singularization and positive scaling.

use super::{Kernel, KernelDescriptor, KernelFlags, KernelFunction};
use crate::ext::{ExtReal, NegInf};

#[derive(Debug, Clone)]
pub struct Strictified {
    base: Kernel,
    eta: f64,
}

impl Strictified {
    pub(super) fn new(base: Kernel, eta: f64) -> Self {
        Strictified { base, eta }
    }
}

impl KernelFunction for Strictified {
    fn family(&self) -> &'static str {
        self.base.family()
    }

    fn value(&self, t: f64) -> ExtReal {
        self.base.0.value(t) + self.eta * t.abs().sqrt()
    }

    fn flags(&self) -> KernelFlags {
        let base = self.base.flags();
        KernelFlags {
            singular: base.singular,
            monotone: true,
            strictly_monotone: true,
            strictly_concave: true,
            cusp: true,
        }
    }

    fn descriptor(&self) -> Option<KernelDescriptor> {
        let mut d = self.base.descriptor()?;
        if d.strictify_eta.is_some() {
            return None;
        }
        d.strictify_eta = Some(self.eta);
        Some(d)
    }
}

#[derive(Debug, Clone)]
pub struct Singularized {
    base: Kernel,
    eta: f64,
}

impl Singularized {
    pub(super) fn new(base: Kernel, eta: f64) -> Self {
        Singularized { base, eta }
    }
}

/// `min(ln u, 0)`
fn log_minus(u: f64) -> ExtReal {
    if u >= 1.0 {
        ExtReal::ZERO
    } else if u == 0.0 {
        NegInf
    } else {
        ExtReal::lift(u.ln())
    }
}

impl KernelFunction for Singularized {
    fn family(&self) -> &'static str {
        self.base.family()
    }

    fn value(&self, t: f64) -> ExtReal {
        let a = t.abs();
        if a >= self.eta {
            self.base.0.value(t)
        } else {
            self.base.0.value(t) + log_minus(a / self.eta)
        }
    }

    fn flags(&self) -> KernelFlags {
        let base = self.base.flags();
        KernelFlags {
            singular: true,
            cusp: true,
            ..base
        }
    }

    fn descriptor(&self) -> Option<KernelDescriptor> {
        let mut d = self.base.descriptor()?;
        if d.singularize_eta.is_some() {
            return None;
        }
        d.singularize_eta = Some(self.eta);
        Some(d)
    }
}

#[derive(Debug, Clone)]
pub struct Scaled {
    base: Kernel,
    nu: f64,
}

impl Scaled {
    pub(super) fn new(base: Kernel, nu: f64) -> Self {
        Scaled { base, nu }
    }
}

impl KernelFunction for Scaled {
    fn family(&self) -> &'static str {
        self.base.family()
    }

    fn value(&self, t: f64) -> ExtReal {
        self.base.0.value(t).scale(self.nu)
    }

    fn flags(&self) -> KernelFlags {
        self.base.flags()
    }
}
