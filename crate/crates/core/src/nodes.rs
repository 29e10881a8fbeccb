//! Node systems `0 <= x_1 <= ... <= x_n <= 1` of the closed simplex.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct NodeSystem {
    nodes: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimplexRegion {
    Interior,
    Boundary,
}

impl NodeSystem {
    /// Validates ordering and range. Unordered input is rejected, never sorted.
    pub fn new(nodes: Vec<f64>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidNodeSystem("n must be at least 1".into()));
        }
        for (i, &x) in nodes.iter().enumerate() {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::InvalidNodeSystem(format!(
                    "node x_{} = {x} is outside [0, 1]",
                    i + 1
                )));
            }
        }
        if let Some(i) = nodes.windows(2).position(|w| w[0] > w[1]) {
            return Err(Error::InvalidNodeSystem(format!(
                "nodes are not ordered: x_{} = {} > x_{} = {}",
                i + 1,
                nodes[i],
                i + 2,
                nodes[i + 1]
            )));
        }
        Ok(NodeSystem { nodes })
    }

    /// Equally spaced interior nodes `j / (n + 1)`.
    pub fn uniform(n: usize) -> Self {
        NodeSystem {
            nodes: (1..=n).map(|j| j as f64 / (n + 1) as f64).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.nodes
    }

    /// `x_j` with the sentinels `x_0 = 0` and `x_{n+1} = 1`.
    pub fn node(&self, j: usize) -> f64 {
        match j {
            0 => 0.0,
            j if j <= self.n() => self.nodes[j - 1],
            _ => 1.0,
        }
    }

    /// `I_j = [x_j, x_{j+1}]` for `j = 0..=n`.
    pub fn interval_of(&self, j: usize) -> Result<Interval> {
        if j > self.n() {
            return Err(Error::IndexOutOfRange {
                index: j,
                max: self.n(),
            });
        }
        Interval::closed(self.node(j), self.node(j + 1))
    }

    pub fn intervals(&self) -> impl Iterator<Item = Interval> + '_ {
        (0..=self.n()).map(|j| Interval {
            a: self.node(j),
            b: self.node(j + 1),
            closed_left: true,
            closed_right: true,
        })
    }

    pub fn classify(&self) -> SimplexRegion {
        classify_simplex(self)
    }

    /// Sup-norm distance.
    pub fn distance(&self, other: &NodeSystem) -> f64 {
        self.nodes
            .iter()
            .zip(&other.nodes)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Smallest gap `x_{j+1} - x_j` over `j = 0..=n`.
    pub fn min_gap(&self) -> f64 {
        (0..=self.n())
            .map(|j| self.node(j + 1) - self.node(j))
            .fold(f64::INFINITY, f64::min)
    }
}

impl<'de> Deserialize<'de> for NodeSystem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<f64>::deserialize(d)?;
        NodeSystem::new(v).map_err(serde::de::Error::custom)
    }
}

/// Interior iff `0 < x_1 < ... < x_n < 1`.
pub fn classify_simplex(x: &NodeSystem) -> SimplexRegion {
    let strict = (0..=x.n()).all(|j| x.node(j) < x.node(j + 1));
    if strict {
        SimplexRegion::Interior
    } else {
        SimplexRegion::Boundary
    }
}

pub fn interval_of(x: &NodeSystem, j: usize) -> Result<Interval> {
    x.interval_of(j)
}
