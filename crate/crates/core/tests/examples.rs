//! Worked examples through the public API. Expected values are computed
//! here from closed forms or dense sampling, never from library output.

use approx::assert_abs_diff_eq;
use fenton_core::fields::{limsup_conditions, monotone_usc_approximation, n_field_check};
use fenton_core::kernels::kernel_validate;
use fenton_core::solvers::{
    brute_maximin, brute_minimax, solve_equioscillation, solve_maximin, solve_minimax,
};
use fenton_core::sumtrans::{difference_map, regularity, singularity_set, sup_on_interval};
use fenton_core::{ExtReal, Field, Interval, Kernel, NodeSystem, Problem, SolveOptions};

fn x(v: &[f64]) -> NodeSystem {
    NodeSystem::new(v.to_vec()).unwrap()
}

fn ramp() -> Field {
    Field::ramp_below(0.5).unwrap()
}

fn half_open_log() -> Field {
    Field::log_indicator(&[Interval::new(0.0, 0.5, true, false).unwrap()]).unwrap()
}

fn fin(v: ExtReal) -> f64 {
    v.finite().expect("finite")
}

#[test]
fn kernel_values() {
    assert_eq!(Kernel::log().eval(0.0).unwrap(), ExtReal::NegInf);
    let s = Kernel::log().strictify(0.1).unwrap();
    assert_abs_diff_eq!(
        fin(s.eval(0.25).unwrap()),
        0.25f64.ln() + 0.1 * 0.5,
        epsilon = 1e-12
    );
    let z = Kernel::zero().singularize(0.5).unwrap();
    assert_abs_diff_eq!(fin(z.eval(0.25).unwrap()), 0.5f64.ln(), epsilon = 1e-12);
    let r = kernel_validate(&Kernel::log(), 10_000);
    assert!(r.ok(), "{r:?}");
}

#[test]
fn field_values_and_regularization() {
    assert_eq!(ramp().eval(0.25).unwrap(), ExtReal::Finite(0.25));
    assert_eq!(half_open_log().eval(0.5).unwrap(), ExtReal::NegInf);
    let rs = ramp().usc_regularize().unwrap();
    assert_eq!(rs.eval(0.5).unwrap(), ExtReal::Finite(0.5));
    let ls = half_open_log().usc_regularize().unwrap();
    assert_eq!(ls.eval(0.5).unwrap(), ExtReal::Finite(0.0));
    assert!(!ramp().is_usc().unwrap() && rs.is_usc().unwrap());

    let dom = half_open_log().finiteness_domain().unwrap();
    assert!(dom.contains(0.0) && dom.contains(0.4999) && !dom.contains(0.5));

    let two_points = Field::points(&[(0.0, 0.0), (1.0, 0.0)]).unwrap();
    assert!(!n_field_check(&two_points, 1).unwrap().valid);
}

#[test]
fn limsup_predicates() {
    let closed = Field::log_indicator(&[Interval::closed(0.25, 0.5).unwrap()]).unwrap();
    let c = limsup_conditions(&closed).unwrap();
    assert!(!c.two_sided && c.weak && c.full);
    let open = Field::log_indicator(&[Interval::open(0.25, 0.5).unwrap()]).unwrap();
    assert!(!limsup_conditions(&open).unwrap().full);
}

#[test]
fn lipschitz_envelope() {
    let j = Field::log_indicator(&[Interval::closed(0.0, 0.5).unwrap()]).unwrap();
    let g = monotone_usc_approximation(&j, 4.0).unwrap();
    // -k dist(t, [0, 1/2])
    assert_abs_diff_eq!(fin(g.eval(0.75).unwrap()), -4.0 * 0.25, epsilon = 1e-12);
}

#[test]
fn sums_of_translates() {
    let p = Problem::uniform(Kernel::log(), 2, Field::constant(0.0)).unwrap();
    let v = p.sum_eval(&x(&[0.25, 0.75]), 0.5).unwrap();
    assert_abs_diff_eq!(fin(v), 2.0 * 0.25f64.ln(), epsilon = 1e-12);
    let q = Problem::uniform(Kernel::zero(), 1, ramp()).unwrap();
    assert_eq!(q.sum_eval(&x(&[0.7]), 0.25).unwrap(), ExtReal::Finite(0.25));
}

#[test]
fn interval_suprema() {
    let p = Problem::uniform(Kernel::zero(), 1, ramp()).unwrap();
    let at = x(&[0.7]);
    let s = sup_on_interval(&p, &at, &Interval::closed(0.5, 1.0).unwrap()).unwrap();
    assert_eq!(s.value, ExtReal::Finite(0.0));
    assert!(s.attained);
    let s = sup_on_interval(&p, &at, &Interval::closed(0.4, 1.0).unwrap()).unwrap();
    assert_eq!(s.value, ExtReal::Finite(0.5));
    assert!(!s.attained);

    let m = p.interval_maxima(&x(&[0.5])).unwrap();
    assert_eq!(m.values, vec![ExtReal::Finite(0.5), ExtReal::Finite(0.0)]);
    assert!(!m.attained[0]);

    let log2 = Problem::uniform(Kernel::log(), 2, Field::constant(0.0)).unwrap();
    assert_eq!(
        log2.interval_maxima(&x(&[0.3, 0.3])).unwrap().values[1],
        ExtReal::NegInf
    );
}

/// Dense-sampling oracle for `m_j`: a lower bound that must come within
/// the sampling error of the exact value.
fn sampled_max(p: &Problem, at: &NodeSystem, j: usize, samples: usize) -> f64 {
    let iv = at.interval_of(j).unwrap();
    (0..=samples)
        .map(|i| iv.a + (iv.b - iv.a) * i as f64 / samples as f64)
        .filter_map(|t| p.sum_eval(at, t).unwrap().finite())
        .fold(f64::NEG_INFINITY, f64::max)
}

#[test]
fn exact_maxima_match_dense_sampling() {
    let bump = Field::piecewise(vec![fenton_core::Piece::new(
        Interval::unit(),
        fenton_core::Formula::quadratic(-1.0, 1.0, -0.25),
    )
    .unwrap()])
    .unwrap();
    let p = Problem::weighted(Kernel::sqrt(), vec![1.0, 0.5, 2.0], bump).unwrap();
    let at = x(&[0.1, 0.45, 0.8]);
    let m = p.interval_maxima(&at).unwrap();
    for j in 0..=3 {
        let s = sampled_max(&p, &at, j, 200_000);
        let e = fin(m.values[j]);
        assert!(e >= s - 1e-12, "m_{j}: exact {e} below sample {s}");
        assert!(e - s <= 1e-4, "m_{j}: exact {e} vs sample {s}");
    }
}

#[test]
fn singular_sets_and_regularity() {
    let p = Problem::uniform(Kernel::log(), 1, half_open_log()).unwrap();
    let s = singularity_set(&p, &x(&[0.25])).unwrap();
    assert!(s.contains(0.25) && s.contains(0.5) && s.contains(1.0) && !s.contains(0.3));

    let log2 = Problem::uniform(Kernel::log(), 2, Field::constant(0.0)).unwrap();
    assert!(!regularity(&log2, &x(&[0.3, 0.3])).unwrap().in_y);
    let z = Problem::uniform(Kernel::zero(), 1, half_open_log()).unwrap();
    assert!(!regularity(&z, &x(&[0.75])).unwrap().in_y);

    let log1 = Problem::uniform(Kernel::log(), 1, Field::constant(0.0)).unwrap();
    let d = difference_map(&log1, &x(&[0.25])).unwrap();
    assert_abs_diff_eq!(fin(d[0]), 3f64.ln(), epsilon = 1e-12);
}

#[test]
fn brute_force_oracles() {
    let log1 = Problem::uniform(Kernel::log(), 1, Field::constant(0.0)).unwrap();
    let (at, v) = brute_minimax(&log1, 1.0 / 1024.0).unwrap();
    assert_abs_diff_eq!(at.nodes()[0], 0.5, epsilon = 1e-3);
    assert_abs_diff_eq!(fin(v), -(2f64.ln()), epsilon = 5e-3);
    let (_, v) = brute_maximin(&log1, 1.0 / 1024.0).unwrap();
    assert_abs_diff_eq!(fin(v), -(2f64.ln()), epsilon = 5e-3);

    let r = Problem::uniform(Kernel::zero(), 1, ramp()).unwrap();
    let h = 1.0 / 1024.0;
    assert_abs_diff_eq!(fin(brute_minimax(&r, h).unwrap().1), 0.5, epsilon = 1e-6);
    let low = fin(brute_maximin(&r, h).unwrap().1);
    assert!(low < 0.5 && 0.5 - low <= 2.0 * h);

    let c = Problem::uniform(Kernel::zero(), 2, Field::constant(-0.3)).unwrap();
    assert_eq!(brute_minimax(&c, 0.1).unwrap().1, ExtReal::Finite(-0.3));
}

#[test]
fn solvers_on_closed_forms() {
    let o = SolveOptions::default();
    let log1 = Problem::uniform(Kernel::log(), 1, Field::constant(0.0)).unwrap();
    let r = solve_maximin(&log1, &o).unwrap();
    assert_abs_diff_eq!(r.x.nodes()[0], 0.5, epsilon = 1e-6);
    assert_abs_diff_eq!(fin(r.value), -(2f64.ln()), epsilon = 1e-8);

    let log2 = Problem::uniform(Kernel::log(), 2, Field::constant(0.0)).unwrap();
    let log8 = -(8f64.ln());
    assert_abs_diff_eq!(
        fin(solve_minimax(&log2, &o).unwrap().value),
        log8,
        epsilon = 1e-4
    );
    assert_abs_diff_eq!(
        fin(solve_maximin(&log2, &o).unwrap().value),
        log8,
        epsilon = 1e-4
    );

    let many = SolveOptions {
        multistarts: 50,
        ..o.clone()
    };
    let eq = solve_equioscillation(&log2, &many).unwrap();
    assert!(eq.points.len() > 1);
    for q in &eq.points {
        assert_abs_diff_eq!(fin(q.value), log8, epsilon = 1e-5);
    }

    let r = Problem::uniform(Kernel::zero(), 1, ramp()).unwrap();
    assert_abs_diff_eq!(
        fin(solve_minimax(&r, &o).unwrap().value),
        0.5,
        epsilon = 1e-6
    );
    let low = fin(solve_maximin(&r, &o).unwrap().value);
    assert!(low <= 0.5 && 0.5 - low <= o.tol_residual);
}
