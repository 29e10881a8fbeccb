//! JSON problem descriptors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{Field, FieldDescriptor};
use crate::kernels::{KernelDescriptor, KernelRegistry};
use crate::sumtrans::{Kernels, Problem, SupMode};

pub const SCHEMA_VERSION: u32 = 1;

/// Either `kernel` (with `weights`, or `n` unit weights) or a list of
/// per-node `kernels`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDescriptor {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel: Option<KernelDescriptor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernels: Option<Vec<KernelDescriptor>>,
    pub field: FieldDescriptor,
    #[serde(default)]
    pub sup_mode: SupMode,
}

impl ProblemDescriptor {
    pub fn build(&self, registry: &KernelRegistry) -> Result<Problem> {
        if let Some(v) = self.schema {
            if v != SCHEMA_VERSION {
                return Err(Error::Schema(format!("unsupported schema version {v}")));
            }
        }
        let field = Field::from_descriptor(&self.field)?;
        let p = match (&self.kernel, &self.kernels) {
            (Some(k), None) => {
                let kernel = registry.build(k)?;
                let weights = match (&self.weights, self.n) {
                    (Some(w), Some(n)) if w.len() != n => {
                        return Err(Error::Schema(format!(
                            "n = {n} but {} weights given",
                            w.len()
                        )))
                    }
                    (Some(w), _) => w.clone(),
                    (None, Some(n)) => vec![1.0; n],
                    (None, None) => {
                        return Err(Error::Schema("either n or weights is required".into()))
                    }
                };
                Problem::weighted(kernel, weights, field)?
            }
            (None, Some(ks)) => {
                if self.weights.is_some() {
                    return Err(Error::Schema(
                        "weights apply to a single kernel; scale per-node kernels instead".into(),
                    ));
                }
                if let Some(n) = self.n {
                    if n != ks.len() {
                        return Err(Error::Schema(format!(
                            "n = {n} but {} kernels given",
                            ks.len()
                        )));
                    }
                }
                let ks = ks
                    .iter()
                    .map(|d| registry.build(d))
                    .collect::<Result<Vec<_>>>()?;
                Problem::generalized(ks, field)?
            }
            _ => {
                return Err(Error::Schema(
                    "exactly one of kernel or kernels is required".into(),
                ))
            }
        };
        Ok(p.with_sup_mode(self.sup_mode))
    }

    /// Descriptor of an existing problem, when every part is describable.
    pub fn from_problem(p: &Problem) -> Result<Self> {
        let field = p.field().descriptor().ok_or(Error::Unsupported {
            what: "descriptor",
            reason: "field has no closed-form description",
        })?;
        let undescribable = || Error::Unsupported {
            what: "descriptor",
            reason: "kernel has no descriptor",
        };
        let (kernel, weights, kernels) = match p.kernels() {
            Kernels::Weighted { kernel, weights } => (
                Some(kernel.descriptor().ok_or_else(undescribable)?),
                Some(weights.clone()),
                None,
            ),
            Kernels::Generalized(ks) => (
                None,
                None,
                Some(
                    ks.iter()
                        .map(|k| k.descriptor().ok_or_else(undescribable))
                        .collect::<Result<Vec<_>>>()?,
                ),
            ),
        };
        Ok(ProblemDescriptor {
            schema: Some(SCHEMA_VERSION),
            n: Some(p.n()),
            kernel,
            weights,
            kernels,
            field,
            sup_mode: p.sup_mode(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext::Finite;
    use crate::nodes::NodeSystem;

    fn parse(s: &str) -> Result<Problem> {
        let d: ProblemDescriptor =
            serde_json::from_str(s).map_err(|e| Error::Schema(e.to_string()))?;
        d.build(&KernelRegistry::builtin())
    }

    #[test]
    fn remark_config() {
        let p = parse(
            r#"{"schema": 1, "n": 1, "kernel": {"family": "zero"},
                "field": {"pieces": [
                  {"a": 0, "b": 0.5, "closed_right": false, "formula": {"type": "affine", "alpha": 1, "beta": 0}},
                  {"a": 0.5, "b": 1, "formula": {"type": "constant", "c": 0}}]}}"#,
        )
        .unwrap();
        let m = p
            .interval_maxima(&NodeSystem::new(vec![0.5]).unwrap())
            .unwrap();
        assert_eq!(m.values, vec![Finite(0.5), Finite(0.0)]);
    }

    #[test]
    fn weights_and_kernels() {
        let field =
            r#""field": {"pieces": [{"a": 0, "b": 1, "formula": {"type": "constant", "c": 0}}]}"#;
        let p = parse(&format!(
            r#"{{"kernel": {{"family": "log"}}, "weights": [1, 2], {field}}}"#
        ))
        .unwrap();
        assert_eq!(p.n(), 2);
        assert!(parse(&format!(
            r#"{{"kernel": {{"family": "log"}}, "weights": [1, 0], {field}}}"#
        ))
        .is_err());
        assert!(parse(&format!(r#"{{"kernel": {{"family": "log"}}, {field}}}"#)).is_err());
        assert!(parse(&format!(
            r#"{{"schema": 2, "n": 1, "kernel": {{"family": "log"}}, {field}}}"#
        ))
        .is_err());
        let p = parse(&format!(
            r#"{{"kernels": [{{"family": "log"}}, {{"family": "power", "params": {{"s": 0.5}}}}], {field}}}"#
        ))
        .unwrap();
        assert_eq!(p.n(), 2);
        assert!(parse(&format!(
            r#"{{"n": 1, "kernel": {{"family": "nope"}}, {field}}}"#
        ))
        .is_err());
    }

    #[test]
    fn round_trip() {
        let s = r#"{"n": 2, "kernel": {"family": "sqrt", "strictify_eta": 0.1},
                    "field": {"pieces": [{"a": 0, "b": 1, "formula": {"type": "quadratic", "a": -1, "b": 1, "c": -0.25}}]},
                    "sup_mode": {"grid": 512}}"#;
        let p = parse(s).unwrap();
        let d = ProblemDescriptor::from_problem(&p).unwrap();
        let again = d.build(&KernelRegistry::builtin()).unwrap();
        let x = NodeSystem::new(vec![0.2, 0.7]).unwrap();
        assert_eq!(
            p.interval_maxima(&x).unwrap(),
            again.interval_maxima(&x).unwrap()
        );
        assert_eq!(again.sup_mode(), SupMode::Grid(512));
    }
}
