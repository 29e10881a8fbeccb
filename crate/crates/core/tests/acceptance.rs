//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run alone with `cargo test -p fenton-core --test acceptance`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::time::Instant;

use fenton_core::solvers::{brute_minimax, solve_equioscillation, solve_maximin, solve_minimax};
use fenton_core::verify::{battery, fenton_scenarios, CheckContext, CheckReport, NamedProblem};
use fenton_core::{
    CheckRegistry, ExtReal, Field, Interval, Kernel, NodeSystem, Problem, Result, SolveOptions,
    SolveStatus,
};
use rand::Rng as _;

struct Outcome {
    passed: bool,
    summary: String,
}

fn outcome(passed: bool, summary: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        summary: summary.into(),
    }
}

fn from_report(r: &CheckReport) -> Outcome {
    outcome(
        r.passed,
        format!(
            "{}: {} samples, {} violations, worst margin {:.3e}",
            r.check_id, r.trials, r.violations, r.worst_margin
        ),
    )
}

fn options() -> SolveOptions {
    SolveOptions::default()
}

fn ramp_problem() -> Problem {
    Problem::uniform(Kernel::zero(), 1, Field::ramp_below(0.5).unwrap()).unwrap()
}

fn ac1() -> Result<Outcome> {
    let p = ramp_problem();
    let o = options();
    let up = solve_minimax(&p, &o)?.value.to_f64();
    let low = solve_maximin(&p, &o)?.value.to_f64();
    let eq = solve_equioscillation(&p.usc_regularized()?, &o)?;
    let passed = (up - 0.5).abs() <= 1e-6
        && (low - 0.5).abs() <= 1e-6
        && eq.status == SolveStatus::Converged
        && eq.x.nodes() == [0.5]
        && eq.value == ExtReal::Finite(0.5)
        && eq.residual == 0.0;
    Ok(outcome(
        passed,
        format!(
            "minimax {up}, maximin {low}; regularized equioscillation x={:?} value={} residual={}",
            eq.x.nodes(),
            eq.value,
            eq.residual
        ),
    ))
}

fn ac2() -> Result<Outcome> {
    let j = Field::log_indicator(&[Interval::new(0.0, 0.5, true, false)?])?;
    let x = NodeSystem::new(vec![0.5])?;
    let zero = Problem::uniform(Kernel::zero(), 1, j.clone())?;
    let m = zero.interval_maxima(&x)?.values[1];
    let ms = zero.usc_regularized()?.interval_maxima(&x)?.values[1];
    let exact = m == ExtReal::NegInf && ms == ExtReal::Finite(0.0);

    let mut rng = fenton_core::rng::stream(2, 0);
    let mut worst = 0.0f64;
    let mut mismatched = 0;
    for i in 0..100 {
        let n = 1 + i % 3;
        let p = Problem::uniform(Kernel::log(), n, j.clone())?;
        let ps = p.usc_regularized()?;
        let mut v: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        v.sort_by(f64::total_cmp);
        let y = NodeSystem::new(v)?;
        for (a, b) in p
            .interval_maxima(&y)?
            .values
            .iter()
            .zip(&ps.interval_maxima(&y)?.values)
        {
            let d = a.distance(*b);
            worst = worst.max(d);
            if !(d <= 1e-12) {
                mismatched += 1;
            }
        }
    }
    Ok(outcome(
        exact && mismatched == 0,
        format!("zero kernel m1 = {m} vs {ms} under J*; log kernel worst |Δm_j| {worst:.3e} over 100 node systems"),
    ))
}

fn ac3() -> Result<Outcome> {
    let p = Problem::uniform(Kernel::log(), 2, Field::constant(0.0))?;
    let eq = solve_equioscillation(&p, &options())?;
    // symmetric two-node reduction: x = (1-d)/2, (1+d)/2 with d = 1/sqrt 2
    let d = 1.0 / 2f64.sqrt();
    let target = [(1.0 - d) / 2.0, (1.0 + d) / 2.0];
    let value = -3.0 * 2f64.ln();
    let node_err =
        eq.x.nodes()
            .iter()
            .zip(target)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
    let value_err = (eq.value.to_f64() - value).abs();
    let (_, brute) = brute_minimax(&p, 1.0 / 512.0)?;
    let brute_err = (brute.to_f64() - eq.value.to_f64()).abs();
    Ok(outcome(
        node_err <= 1e-4 && value_err <= 1e-4 && brute_err <= 5e-3,
        format!("node error {node_err:.2e}, value error {value_err:.2e}, brute h=1/512 difference {brute_err:.2e}"),
    ))
}

fn run_check(id: &str, ctx: &CheckContext) -> Result<CheckReport> {
    CheckRegistry::builtin().run(id, ctx)
}

fn ac4() -> Result<Outcome> {
    let ctx = CheckContext::new(4);
    let r = run_check("thm1.3/minimax-equals-maximin", &ctx)?;
    let mut o = from_report(&r);
    o.passed &= ctx.problems.len() >= 10 && ctx.options.oracle_h == 1.0 / 400.0;
    o.summary = format!("{} configs; {}", ctx.problems.len(), o.summary);
    Ok(o)
}

fn ac5() -> Result<Outcome> {
    let all = battery();
    let pick: Vec<NamedProblem> = [1, 2, 6, 8, 11].iter().map(|&i| all[i].clone()).collect();
    let ctx = CheckContext::new(5).with_problems(pick).with_trials(10_000);
    Ok(from_report(&run_check(
        "thm1.3/no-strict-majorization",
        &ctx,
    )?))
}

fn ac6() -> Result<Outcome> {
    let ctx = CheckContext::new(6).with_trials(100_000);
    let mut passed = true;
    let mut parts = Vec::new();
    for case in ["a", "b", "c", "d", "e"] {
        let r = run_check(&format!("lem2.4/{case}"), &ctx)?;
        passed &= r.passed && r.trials == 2 * 100_000;
        parts.push(format!(
            "{case}: {} viol, margin {:.2e}",
            r.violations, r.worst_margin
        ));
    }
    Ok(outcome(
        passed,
        format!("log+sqrt, 1e5 per kernel; {}", parts.join("; ")),
    ))
}

fn ac7() -> Result<Outcome> {
    let ctx = CheckContext::new(7).with_trials(100);
    Ok(from_report(&run_check("lem5.1/dini-max", &ctx)?))
}

fn ac8() -> Result<Outcome> {
    let ctx = CheckContext::new(8).with_trials(100);
    Ok(from_report(&run_check("lem4.1/kernel-limits", &ctx)?))
}

fn ac9() -> Result<Outcome> {
    let mut ctx = CheckContext::new(9).with_problems(fenton_scenarios());
    ctx.options.multistarts = 50;
    let r = run_check("thm1.3/equioscillation-value", &ctx)?;
    let mut o = from_report(&r);
    let mut parts = Vec::new();
    for d in r.details.as_array().into_iter().flatten() {
        let spread = d["node_spread"].as_f64().unwrap_or(f64::INFINITY);
        let starts = d["converged_starts"].as_u64().unwrap_or(0);
        o.passed &= spread <= 1e-4 && starts > 0;
        parts.push(format!(
            "{}: {starts}/50 converged, node spread {spread:.2e}, value spread {:.2e}, |value - minimax| {:.2e}",
            d["problem"].as_str().unwrap_or("?"),
            d["value_spread"].as_f64().unwrap_or(f64::NAN),
            d["distance_to_minimax"].as_f64().unwrap_or(f64::NAN),
        ));
    }
    o.passed &= parts.len() == 2;
    o.summary = parts.join("; ");
    Ok(o)
}

fn ac10() -> Result<Outcome> {
    let ctx = CheckContext::new(10).with_trials(1000);
    Ok(from_report(&run_check("lem6.1/usc-invariances", &ctx)?))
}

fn ac11() -> Result<Outcome> {
    let ctx = CheckContext::new(11);
    let r = run_check("lem3.3/continuity", &ctx)?;
    let mut o = from_report(&r);
    o.passed &= r.details.as_array().map(|d| d.len()) == Some(ctx.problems.len());
    Ok(o)
}

type Criterion = (&'static str, &'static str, fn() -> Result<Outcome>);

fn main() {
    let criteria: [Criterion; 11] = [
        ("AC-1", "non-usc ramp: minimax = maximin = 1/2", ac1),
        ("AC-2", "log-indicator field vs its usc regularization", ac2),
        ("AC-3", "two-node log kernel closed form", ac3),
        ("AC-4", "minimax = maximin battery", ac4),
        ("AC-5", "no strict majorization", ac5),
        ("AC-6", "interval perturbation inequalities", ac6),
        ("AC-7", "Dini max convergence", ac7),
        ("AC-8", "kernel limit monotonicity", ac8),
        ("AC-9", "Fenton uniqueness scenario", ac9),
        ("AC-10", "open-set sup and upper max invariance", ac10),
        ("AC-11", "continuity decay", ac11),
    ];
    let mut failed = 0;
    for (id, name, run) in criteria {
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(o) if o.passed => println!("[PASS] {id} {name} ({secs:.2}s): {}", o.summary),
            Ok(o) => {
                failed += 1;
                println!("[FAIL] {id} {name} ({secs:.2}s): {}", o.summary);
            }
            Err(e) => {
                failed += 1;
                println!("[FAIL] {id} {name} ({secs:.2}s): error: {e}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
