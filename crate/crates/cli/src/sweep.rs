//! Parameter sweeps over node coordinates, kernel transforms or any numeric
//! entry of the problem descriptor.

use fenton_core::{ExtReal, KernelRegistry, NodeSystem, Problem, ProblemDescriptor};
use serde::Serialize;
use serde_json::Value;

use crate::config::SweepConfig;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Param {
    /// `x<i>`, 1-based in the path, stored 0-based.
    Node(usize),
    /// `eta.strictify`
    Strictify,
    /// `eta.singularize`
    Singularize,
    /// JSON pointer into the problem descriptor, e.g. `/weights/0`.
    Pointer(String),
}

impl Param {
    pub fn parse(path: &str, desc: &Value, n: usize) -> Result<Param, CliError> {
        let unresolved = || CliError::Config(format!("sweep path {path:?} does not resolve"));
        if path.starts_with('/') {
            return match desc.pointer(path) {
                Some(Value::Number(_)) => Ok(Param::Pointer(path.to_string())),
                _ => Err(unresolved()),
            };
        }
        match path {
            "eta.strictify" => return Ok(Param::Strictify),
            "eta.singularize" => return Ok(Param::Singularize),
            _ => {}
        }
        let i: usize = path
            .strip_prefix('x')
            .and_then(|s| s.parse().ok())
            .ok_or_else(unresolved)?;
        if i == 0 || i > n {
            return Err(unresolved());
        }
        Ok(Param::Node(i - 1))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub params: Vec<f64>,
    pub maxima: Vec<ExtReal>,
    pub upper: ExtReal,
    pub lower: ExtReal,
}

pub struct Sweep {
    pub names: Vec<String>,
    pub n: usize,
    pub rows: Vec<Row>,
}

fn cartesian(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    axes.iter().fold(vec![Vec::new()], |acc, vals| {
        acc.iter()
            .flat_map(|prefix| {
                vals.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect()
    })
}

/// Rows for every grid point whose node system is ordered; others are
/// skipped so that plots see only admissible configurations.
pub fn run(
    desc: &ProblemDescriptor,
    sweep: &SweepConfig,
    usc_regularize: bool,
) -> Result<Sweep, CliError> {
    let registry = KernelRegistry::builtin();
    let base = desc.build(&registry)?;
    let n = base.n();
    let json = serde_json::to_value(desc)?;
    let axes = sweep.axes();
    let params = axes
        .iter()
        .map(|a| Param::parse(&a.path, &json, n))
        .collect::<Result<Vec<_>, _>>()?;
    let values: Vec<Vec<f64>> = axes.iter().map(|a| a.values.expand()).collect();
    if let Some(a) = axes.iter().zip(&values).find(|(_, v)| v.is_empty()) {
        return Err(CliError::Config(format!(
            "sweep over {:?} has no values",
            a.0.path
        )));
    }
    let nodes = match &sweep.nodes {
        Some(v) if v.len() != n => {
            return Err(CliError::Config(format!(
                "sweep nodes has {} entries, n = {n}",
                v.len()
            )))
        }
        Some(v) => NodeSystem::new(v.clone())?.into_vec(),
        None => NodeSystem::uniform(n).into_vec(),
    };
    let rebuild = params.iter().any(|p| matches!(p, Param::Pointer(_)));
    let prepare = |p: Problem| -> Result<Problem, CliError> {
        Ok(if usc_regularize {
            p.usc_regularized()?
        } else {
            p
        })
    };
    let fixed = prepare(base)?;

    let mut rows = Vec::new();
    for point in cartesian(&values) {
        let mut problem = if rebuild {
            let mut j = json.clone();
            for (p, &v) in params.iter().zip(&point) {
                if let Param::Pointer(ptr) = p {
                    let slot = j.pointer_mut(ptr).expect("resolved above");
                    *slot = serde_json::Number::from_f64(v)
                        .map(Value::Number)
                        .ok_or_else(|| {
                            CliError::Config(format!("sweep value {v} is not finite"))
                        })?;
                }
            }
            let d: ProblemDescriptor =
                serde_json::from_value(j).map_err(|e| CliError::Config(e.to_string()))?;
            prepare(d.build(&registry)?)?
        } else {
            fixed.clone()
        };
        let mut x = nodes.clone();
        for (p, &v) in params.iter().zip(&point) {
            match p {
                Param::Node(i) => x[*i] = v,
                Param::Strictify if v != 0.0 => {
                    problem = problem.map_kernels(|k| k.strictify(v))?
                }
                Param::Singularize if v != 0.0 => {
                    problem = problem.map_kernels(|k| k.singularize(v))?
                }
                _ => {}
            }
        }
        let Ok(x) = NodeSystem::new(x) else { continue };
        let m = problem.interval_maxima(&x)?;
        rows.push(Row {
            params: point,
            upper: m.upper(),
            lower: m.lower(),
            maxima: m.values,
        });
    }
    if rows.is_empty() {
        return Err(CliError::Config(
            "no sweep point yields an ordered node system".into(),
        ));
    }
    Ok(Sweep {
        names: axes.into_iter().map(|a| a.path).collect(),
        n,
        rows,
    })
}

impl Sweep {
    pub fn header(&self) -> Vec<String> {
        let mut h = self.names.clone();
        h.extend((0..=self.n).map(|j| format!("m{j}")));
        h.push("m_upper".into());
        h.push("m_lower".into());
        h
    }

    pub fn records(&self) -> impl Iterator<Item = Vec<String>> + '_ {
        self.rows.iter().map(|r| {
            let mut rec: Vec<String> = r.params.iter().map(f64::to_string).collect();
            rec.extend(r.maxima.iter().map(ExtReal::to_string));
            rec.push(r.upper.to_string());
            rec.push(r.lower.to_string());
            rec
        })
    }
}
