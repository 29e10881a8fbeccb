//! Property tests over random node systems and problems.

use fenton_core::solvers::{brute_minimax, solve_all};
use fenton_core::sumtrans::sup_on_interval;
use fenton_core::{
    ExtReal, Field, Interval, Kernel, KernelRegistry, NodeSystem, Problem, ProblemDescriptor,
    SolveOptions,
};
use proptest::prelude::*;

fn kernel(i: usize) -> Kernel {
    match i {
        0 => Kernel::log(),
        1 => Kernel::sqrt(),
        2 => Kernel::power(0.5).unwrap(),
        _ => Kernel::zero(),
    }
}

fn field(i: usize) -> Field {
    match i {
        0 => Field::constant(0.0),
        1 => Field::ramp_below(0.5).unwrap(),
        _ => Field::log_indicator(&[
            Interval::closed(0.05, 0.35).unwrap(),
            Interval::closed(0.55, 0.95).unwrap(),
        ])
        .unwrap(),
    }
}

fn nodes(n: usize) -> impl Strategy<Value = NodeSystem> {
    prop::collection::vec(0.0f64..=1.0, n).prop_map(|mut v| {
        v.sort_by(f64::total_cmp);
        NodeSystem::new(v).unwrap()
    })
}

fn problem_and_nodes() -> impl Strategy<Value = (Problem, NodeSystem)> {
    (0usize..4, 0usize..3, 1usize..4).prop_flat_map(|(k, f, n)| {
        let p = Problem::uniform(kernel(k), n, field(f)).unwrap();
        nodes(n).prop_map(move |x| (p.clone(), x))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn upper_maximum_is_global_sup((p, x) in problem_and_nodes()) {
        let m = p.interval_maxima(&x).unwrap();
        let s = sup_on_interval(&p, &x, &Interval::unit()).unwrap();
        prop_assert_eq!(m.upper(), s.value);
        prop_assert!(m.lower() <= m.upper());
    }

    #[test]
    fn maxima_dominate_samples((p, x) in problem_and_nodes(), u in prop::collection::vec(0.0f64..=1.0, 8)) {
        let m = p.interval_maxima(&x).unwrap();
        for (j, iv) in x.intervals().enumerate() {
            for &s in &u {
                let t = iv.a + (iv.b - iv.a) * s;
                if let Some(f) = p.sum_eval(&x, t).unwrap().finite() {
                    prop_assert!(f <= m.values[j].to_f64() + 1e-12 * (1.0 + f.abs()));
                }
            }
        }
    }

    #[test]
    fn regularization_keeps_upper_maximum((p, x) in problem_and_nodes()) {
        let ps = p.usc_regularized().unwrap();
        let a = p.interval_maxima(&x).unwrap().upper();
        let b = ps.interval_maxima(&x).unwrap().upper();
        prop_assert!(a.distance(b) <= 1e-12, "{} vs {}", a, b);
    }

    #[test]
    fn no_strict_majorization(k in 0usize..4, (x, y) in (nodes(2), nodes(2))) {
        let p = Problem::uniform(kernel(k), 2, Field::constant(0.0)).unwrap();
        let (mx, my) = (p.interval_maxima(&x).unwrap(), p.interval_maxima(&y).unwrap());
        if mx.is_regular() && my.is_regular() {
            prop_assert!(!mx.strictly_majorizes(&my, 1e-9));
            prop_assert!(!my.strictly_majorizes(&mx, 1e-9));
        }
    }

    #[test]
    fn descriptor_round_trip(k in 0usize..4, f in 0usize..3, w in prop::collection::vec(0.1f64..4.0, 1..4)) {
        let p = Problem::weighted(kernel(k), w, field(f)).unwrap();
        let d = ProblemDescriptor::from_problem(&p).unwrap();
        let text = serde_json::to_string(&d).unwrap();
        let back: ProblemDescriptor = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &d);
        let q = back.build(&KernelRegistry::builtin()).unwrap();
        let x = NodeSystem::uniform(p.n());
        prop_assert_eq!(p.interval_maxima(&x).unwrap().values, q.interval_maxima(&x).unwrap().values);
    }

    #[test]
    fn ext_values_round_trip(v in prop_oneof![Just(ExtReal::NegInf), any::<f64>().prop_filter("finite", |x| x.is_finite()).prop_map(ExtReal::Finite)]) {
        let text = serde_json::to_string(&v).unwrap();
        prop_assert_eq!(serde_json::from_str::<ExtReal>(&text).unwrap(), v);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// The solvers bracket the common optimum and never beat the oracle by
    /// more than its grid error.
    #[test]
    fn solver_values_agree_with_oracle(k in 0usize..3, f in 0usize..3, seed in 0u64..1000) {
        let p = Problem::uniform(kernel(k), 1, field(f)).unwrap();
        let o = SolveOptions { seed, multistarts: 4, ..SolveOptions::default() };
        let r = solve_all(&p, &o).unwrap();
        let (up, low) = (r.minimax.value.to_f64(), r.maximin.value.to_f64());
        prop_assert!(low <= up + 1e-12);
        prop_assert!(up - low <= 1e-3);
        let h = 1.0 / 256.0;
        let (_, b) = brute_minimax(&p, h).unwrap();
        prop_assert!(up <= b.to_f64() + 1e-9);
        prop_assert!(b.to_f64() - up <= 0.5, "oracle {} vs {}", b, up);
    }
}
