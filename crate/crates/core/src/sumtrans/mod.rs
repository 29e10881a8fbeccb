//! Sum-of-translates functions and their interval maxima.

mod maxima;
mod regularity;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::{ExtReal, NegInf};
use crate::fields::{check_unit, n_field_check, Field};
use crate::kernels::Kernel;
use crate::nodes::NodeSystem;

pub use maxima::{interval_maxima, sup_on_interval, MaximaVector, SupResult};
pub use regularity::{difference_map, regularity, singularity_set, Regularity};

/// Default sample count for grid suprema.
pub const DEFAULT_GRID: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SupMode {
    /// Cell decomposition with concave maximization per cell.
    #[default]
    Exact,
    /// Uniform samples plus all nodes and piece endpoints.
    Grid(usize),
}

#[derive(Debug, Clone)]
pub enum Kernels {
    /// `Σ ν_j K(t - x_j)`
    Weighted { kernel: Kernel, weights: Vec<f64> },
    /// `Σ K_j(t - x_j)`
    Generalized(Vec<Kernel>),
}

#[derive(Debug, Clone)]
pub struct Problem {
    n: usize,
    kernels: Kernels,
    field: Field,
    sup_mode: SupMode,
}

impl Problem {
    pub fn weighted(kernel: Kernel, weights: Vec<f64>, field: Field) -> Result<Self> {
        for (i, &w) in weights.iter().enumerate() {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::param(
                    format!("weights[{i}]"),
                    format!("{w} is not a positive weight"),
                ));
            }
        }
        Self::build(weights.len(), Kernels::Weighted { kernel, weights }, field)
    }

    /// Equal unit weights.
    pub fn uniform(kernel: Kernel, n: usize, field: Field) -> Result<Self> {
        Self::weighted(kernel, vec![1.0; n], field)
    }

    pub fn generalized(kernels: Vec<Kernel>, field: Field) -> Result<Self> {
        Self::build(kernels.len(), Kernels::Generalized(kernels), field)
    }

    fn build(n: usize, kernels: Kernels, field: Field) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("n", "at least one node is required"));
        }
        if field.is_exact() {
            let count = n_field_check(&field, n)?;
            if !count.valid {
                return Err(Error::param(
                    "field",
                    format!(
                        "finiteness domain has weighted size {:?}, not more than n = {n}",
                        count.weighted_count
                    ),
                ));
            }
        }
        Ok(Problem {
            n,
            kernels,
            field,
            sup_mode: SupMode::Exact,
        })
    }

    pub fn with_sup_mode(mut self, mode: SupMode) -> Self {
        self.sup_mode = mode;
        self
    }

    /// Same kernels, another field (e.g. the usc regularization).
    pub fn with_field(&self, field: Field) -> Result<Problem> {
        let mut p = Self::build(self.n, self.kernels.clone(), field)?;
        p.sup_mode = self.sup_mode;
        Ok(p)
    }

    /// Problem with `J` replaced by `J*`.
    pub fn usc_regularized(&self) -> Result<Problem> {
        self.with_field(self.field.usc_regularize()?)
    }

    /// Applies a kernel transform to every kernel, keeping weights.
    pub fn map_kernels<F: Fn(&Kernel) -> Result<Kernel>>(&self, f: F) -> Result<Problem> {
        let kernels = match &self.kernels {
            Kernels::Weighted { kernel, weights } => Kernels::Weighted {
                kernel: f(kernel)?,
                weights: weights.clone(),
            },
            Kernels::Generalized(ks) => {
                Kernels::Generalized(ks.iter().map(f).collect::<Result<_>>()?)
            }
        };
        Ok(Problem {
            n: self.n,
            kernels,
            field: self.field.clone(),
            sup_mode: self.sup_mode,
        })
    }

    /// The generalized form with `K_j = ν_j K`.
    pub fn to_generalized(&self) -> Result<Problem> {
        match &self.kernels {
            Kernels::Generalized(_) => Ok(self.clone()),
            Kernels::Weighted { kernel, weights } => {
                let ks = weights
                    .iter()
                    .map(|&w| kernel.scaled(w))
                    .collect::<Result<Vec<_>>>()?;
                let mut p = Problem::generalized(ks, self.field.clone())?;
                p.sup_mode = self.sup_mode;
                Ok(p)
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn kernels(&self) -> &Kernels {
        &self.kernels
    }

    pub fn sup_mode(&self) -> SupMode {
        self.sup_mode
    }

    /// Kernel `j` (0-based), without its weight.
    pub fn kernel(&self, j: usize) -> &Kernel {
        match &self.kernels {
            Kernels::Weighted { kernel, .. } => kernel,
            Kernels::Generalized(ks) => &ks[j],
        }
    }

    pub fn is_singular_node(&self, j: usize) -> bool {
        self.kernel(j).is_singular()
    }

    pub fn all_singular(&self) -> bool {
        (0..self.n).all(|j| self.is_singular_node(j))
    }

    pub fn all_monotone(&self) -> bool {
        (0..self.n).all(|j| self.kernel(j).flags().monotone)
    }

    fn check_nodes(&self, x: &NodeSystem) -> Result<()> {
        if x.n() != self.n {
            return Err(Error::InvalidNodeSystem(format!(
                "expected {} nodes, got {}",
                self.n,
                x.n()
            )));
        }
        Ok(())
    }

    /// `f(x, t)`; unchecked.
    #[inline]
    pub(crate) fn pure_at(&self, x: &[f64], t: f64) -> ExtReal {
        let mut acc = 0.0;
        match &self.kernels {
            Kernels::Weighted { kernel, weights } => {
                for (&xj, &w) in x.iter().zip(weights) {
                    match kernel.at(t - xj).scale(w) {
                        ExtReal::Finite(v) => acc += v,
                        NegInf => return NegInf,
                    }
                }
            }
            Kernels::Generalized(ks) => {
                for (&xj, k) in x.iter().zip(ks) {
                    match k.at(t - xj) {
                        ExtReal::Finite(v) => acc += v,
                        NegInf => return NegInf,
                    }
                }
            }
        }
        ExtReal::Finite(acc)
    }

    /// `F(x, t)`; unchecked.
    #[inline]
    pub(crate) fn full_at(&self, x: &[f64], t: f64) -> ExtReal {
        let j = self.field.at(t);
        if j.is_neg_inf() {
            return NegInf;
        }
        j + self.pure_at(x, t)
    }

    /// `f(x, t) = Σ ν_j K(t - x_j)`.
    pub fn pure_sum_eval(&self, x: &NodeSystem, t: f64) -> Result<ExtReal> {
        self.check_nodes(x)?;
        check_unit(t)?;
        Ok(self.pure_at(x.nodes(), t))
    }

    /// `F(x, t) = J(t) + f(x, t)`.
    pub fn sum_eval(&self, x: &NodeSystem, t: f64) -> Result<ExtReal> {
        self.check_nodes(x)?;
        check_unit(t)?;
        Ok(self.full_at(x.nodes(), t))
    }

    pub fn interval_maxima(&self, x: &NodeSystem) -> Result<MaximaVector> {
        self.check_nodes(x)?;
        Ok(maxima::maxima_unchecked(self, x))
    }
}
