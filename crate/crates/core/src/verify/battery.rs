use crate::fields::{Field, Piece};
use crate::formula::Formula;
use crate::interval::Interval;
use crate::kernels::Kernel;
use crate::sumtrans::Problem;

#[derive(Debug, Clone)]
pub struct NamedProblem {
    pub name: String,
    pub problem: Problem,
}

pub fn named(name: impl Into<String>, problem: Problem) -> NamedProblem {
    NamedProblem {
        name: name.into(),
        problem,
    }
}

/// `-(t - 1/2)^2`
fn bump() -> Field {
    let f = Formula::quadratic(-1.0, 1.0, -0.25);
    Field::piecewise(vec![Piece::new(Interval::unit(), f).expect("valid")]).expect("valid")
}

/// `log 1_E` with `E = [0.05, 0.35] ∪ [0.55, 0.95]`
fn two_bands() -> Field {
    Field::log_indicator(&[
        Interval::closed(0.05, 0.35).expect("valid"),
        Interval::closed(0.55, 0.95).expect("valid"),
    ])
    .expect("valid")
}

fn ramp() -> Field {
    Field::ramp_below(0.5).expect("valid")
}

/// Kernels × fields × `n` spread used by the verification suite.
pub fn battery() -> Vec<NamedProblem> {
    let power = || Kernel::power(0.5).expect("valid");
    let cases: Vec<(&str, Kernel, &str, Field, usize)> = vec![
        ("log", Kernel::log(), "zero", Field::constant(0.0), 1),
        ("log", Kernel::log(), "zero", Field::constant(0.0), 2),
        ("log", Kernel::log(), "bump", bump(), 3),
        ("log", Kernel::log(), "bands", two_bands(), 2),
        ("power0.5", power(), "zero", Field::constant(0.0), 2),
        ("power0.5", power(), "ramp", ramp(), 1),
        ("power0.5", power(), "bands", two_bands(), 3),
        ("sqrt", Kernel::sqrt(), "bump", bump(), 1),
        ("sqrt", Kernel::sqrt(), "bands", two_bands(), 2),
        ("sqrt", Kernel::sqrt(), "ramp", ramp(), 3),
        ("zero", Kernel::zero(), "bump", bump(), 1),
        ("zero", Kernel::zero(), "bands", two_bands(), 2),
        ("zero", Kernel::zero(), "ramp", ramp(), 1),
    ];
    cases
        .into_iter()
        .map(|(k, kernel, f, field, n)| {
            named(
                format!("{k}/{f}/n{n}"),
                Problem::uniform(kernel, n, field).expect("battery problems are valid"),
            )
        })
        .collect()
}

/// Strictly concave singular monotone kernel, concave field, equal weights.
pub fn fenton_scenarios() -> Vec<NamedProblem> {
    [2, 3]
        .into_iter()
        .map(|n| {
            named(
                format!("log/bump/n{n}"),
                Problem::uniform(Kernel::log(), n, bump()).expect("valid"),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_spans_the_grid() {
        let b = battery();
        assert!(b.len() >= 10);
        for family in ["log", "power0.5", "sqrt", "zero"] {
            assert!(b.iter().any(|p| p.name.starts_with(family)));
        }
        for n in 1..=3 {
            assert!(b.iter().any(|p| p.problem.n() == n));
        }
    }
}
