use serde::{Deserialize, Serialize};

use super::Problem;
use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::interval::{Interval, PointSet};
use crate::nodes::{NodeSystem, SimplexRegion};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Regularity {
    pub in_y: bool,
    pub in_w: bool,
    /// Indices `j` with `m_j = -inf`.
    pub singular_intervals: Vec<usize>,
}

fn require_exact(p: &Problem, what: &'static str) -> Result<()> {
    if p.field().is_exact() {
        Ok(())
    } else {
        Err(Error::Unsupported {
            what,
            reason: "requires an exact (piecewise) field",
        })
    }
}

/// `X ∪ {x_j : K_j singular}`.
pub fn singularity_set(p: &Problem, x: &NodeSystem) -> Result<PointSet> {
    require_exact(p, "singularity_set")?;
    p.check_nodes(x)?;
    let base = p.field().singularity_set()?;
    let nodes = x
        .nodes()
        .iter()
        .enumerate()
        .filter(|&(j, _)| p.is_singular_node(j))
        .map(|(_, &t)| Interval::point(t));
    Ok(PointSet::from_intervals(base.parts().chain(nodes)))
}

pub fn regularity(p: &Problem, x: &NodeSystem) -> Result<Regularity> {
    require_exact(p, "regularity")?;
    let m = p.interval_maxima(x)?;
    let singular_intervals: Vec<usize> = m
        .values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_neg_inf())
        .map(|(j, _)| j)
        .collect();
    let in_y = singular_intervals.is_empty();
    let in_w = in_y && x.classify() == SimplexRegion::Interior && {
        let finite = p.field().finiteness_domain()?;
        (0..=x.n()).all(|j| finite.meets_open(x.node(j), x.node(j + 1)))
    };
    Ok(Regularity {
        in_y,
        in_w,
        singular_intervals,
    })
}

/// `Φ_j = m_j - m_{j-1}`, `j = 1..=n`; an error off the regularity set.
pub fn difference_map(p: &Problem, x: &NodeSystem) -> Result<Vec<ExtReal>> {
    let d = p.interval_maxima(x)?.differences()?;
    Ok(d.into_iter().map(ExtReal::Finite).collect())
}
