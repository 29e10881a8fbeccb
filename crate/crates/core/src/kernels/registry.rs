use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Kernel, KernelFlags, LogKernel, PiecewiseKernel, PowerKernel, SqrtKernel, ZeroKernel};
use crate::error::{Error, Result};
use crate::formula::Formula;

/// JSON kernel descriptor:
/// `{"family": "log", "params": {...}, "strictify_eta": 0.1, "singularize_eta": 0.2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelDescriptor {
    pub family: String,
    #[serde(default, skip_serializing_if = "is_empty_params")]
    pub params: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strictify_eta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub singularize_eta: Option<f64>,
}

fn is_empty_params(v: &Value) -> bool {
    v.is_null() || v.as_object().is_some_and(|m| m.is_empty())
}

impl KernelDescriptor {
    pub fn family(name: &str) -> Self {
        KernelDescriptor {
            family: name.to_string(),
            params: Value::Null,
            strictify_eta: None,
            singularize_eta: None,
        }
    }
}

pub type KernelBuilder = fn(&Value) -> Result<Kernel>;

/// Name → constructor table for kernel families.
pub struct KernelRegistry {
    builders: BTreeMap<&'static str, KernelBuilder>,
}

impl Default for KernelRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

fn param_f64(params: &Value, key: &str) -> Result<f64> {
    params
        .get(key)
        .and_then(Value::as_f64)
        .ok_or_else(|| Error::param(key, "missing or not a number"))
}

fn build_power(params: &Value) -> Result<Kernel> {
    Ok(Kernel::new(PowerKernel::new(param_f64(params, "s")?)?))
}

fn build_piecewise(params: &Value) -> Result<Kernel> {
    let side = |key: &str| -> Result<Formula> {
        let v = params
            .get(key)
            .ok_or_else(|| Error::param(key, "missing side formula"))?;
        serde_json::from_value(v.clone()).map_err(|e| Error::param(key, e.to_string()))
    };
    let flags: KernelFlags = match params.get("flags") {
        Some(v) => {
            serde_json::from_value(v.clone()).map_err(|e| Error::param("flags", e.to_string()))?
        }
        None => KernelFlags::default(),
    };
    Ok(Kernel::new(PiecewiseKernel::new(
        side("left")?,
        side("right")?,
        flags,
    )?))
}

impl KernelRegistry {
    pub fn empty() -> Self {
        KernelRegistry {
            builders: BTreeMap::new(),
        }
    }

    pub fn builtin() -> Self {
        let mut r = Self::empty();
        r.register("zero", |_| Ok(Kernel::new(ZeroKernel)));
        r.register("log", |_| Ok(Kernel::new(LogKernel)));
        r.register("sqrt", |_| Ok(Kernel::new(SqrtKernel)));
        r.register("power", build_power);
        r.register("piecewise", build_piecewise);
        r
    }

    pub fn register(&mut self, name: &'static str, builder: KernelBuilder) {
        self.builders.insert(name, builder);
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.builders.keys().copied()
    }

    pub fn build(&self, desc: &KernelDescriptor) -> Result<Kernel> {
        let builder = self
            .builders
            .get(desc.family.as_str())
            .ok_or_else(|| Error::UnknownFamily(desc.family.clone()))?;
        let mut k = builder(&desc.params)?;
        if let Some(eta) = desc.singularize_eta {
            k = k.singularize(eta)?;
        }
        if let Some(eta) = desc.strictify_eta {
            k = k.strictify(eta)?;
        }
        Ok(k)
    }
}
