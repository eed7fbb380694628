use std::sync::Arc;

use bergman_lab::experiment::{parse_domain, parse_function, parse_reals};
use bergman_lab::geometry::Domain;
use bergman_lab::kernels::{Combination, KernelFamily, SingularKernel};
use bergman_lab::quadrature::fit::classify;
use bergman_lab::quadrature::{metric_distance, MetricSpec, Verdict, MARGIN};
use bergman_lab::rng::{derive, Moments};
use bergman_lab::{c, C64};
use proptest::prelude::*;

fn moments(xs: &[f64]) -> Moments {
    let mut m = Moments::default();
    xs.iter().for_each(|x| m.push(*x));
    m
}

fn rank(v: Verdict) -> u8 {
    match v {
        Verdict::Finite => 0,
        Verdict::Inconclusive => 1,
        Verdict::Divergent => 2,
    }
}

proptest! {
    #[test]
    fn moments_merge_is_associative(a in prop::collection::vec(-1e3..1e3f64, 0..40),
                                    b in prop::collection::vec(-1e3..1e3f64, 0..40),
                                    cc in prop::collection::vec(-1e3..1e3f64, 0..40)) {
        let mut left = moments(&a);
        left.merge(&moments(&b));
        left.merge(&moments(&cc));
        let mut bc = moments(&b);
        bc.merge(&moments(&cc));
        let mut right = moments(&a);
        right.merge(&bc);
        let all: Vec<f64> = a.iter().chain(&b).chain(&cc).copied().collect();
        let whole = moments(&all);
        prop_assert_eq!(left.n, whole.n);
        prop_assert!((left.sum - right.sum).abs() <= 1e-9 * (1.0 + whole.sum_sq.sqrt()));
        prop_assert!((left.sum_sq - whole.sum_sq).abs() <= 1e-9 * (1.0 + whole.sum_sq));
    }

    // shifting σ upward never moves the verdict toward finite
    #[test]
    fn verdict_is_monotone_in_sigma(s in -3.0..3.0f64, ds in 0.0..2.0f64,
                                    noise in prop::collection::vec(-0.05..0.05f64, 50)) {
        let boot = |x: f64| noise.iter().map(|e| x + e).collect::<Vec<_>>();
        let lo = classify(s, &boot(s), MARGIN);
        let hi = classify(s + ds, &boot(s + ds), MARGIN);
        prop_assert!(rank(hi) >= rank(lo) || hi == Verdict::Inconclusive);
        prop_assert!(!(lo == Verdict::Divergent && hi == Verdict::Finite));
    }

    #[test]
    fn real_lists_round_trip(xs in prop::collection::vec(-1e6..1e6f64, 1..8)) {
        let text = xs.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",");
        prop_assert_eq!(parse_reals(&text, ',').unwrap(), xs);
    }

    #[test]
    fn disk_specs_round_trip(r in 0.1..5.0f64, cx in -3.0..3.0f64, cy in -3.0..3.0f64) {
        let d = parse_domain(&format!("disk:r={r:?},cx={cx:?},cy={cy:?}")).unwrap();
        prop_assert_eq!(d, Domain::disk(c(cx, cy), r));
    }

    #[test]
    fn derived_seeds_are_deterministic(seed in any::<u64>(), tag in 0..100u64, i in 0..100u64) {
        prop_assert_eq!(derive(seed, tag, i), derive(seed, tag, i));
        prop_assert_ne!(derive(seed, tag, i), derive(seed, tag, i + 1));
    }
}

fn random_function(d: &Arc<Domain>, coefs: &[(f64, f64)]) -> Combination {
    let mut f = Combination::constant(c(coefs[0].0, coefs[0].1));
    for (i, (re, im)) in coefs[1..].iter().enumerate() {
        let zeta = C64::from_polar(1.0, 2.0 * i as f64);
        f = f.with_term(c(*re, *im), Arc::new(SingularKernel::build(KernelFamily::PlanarLog, d, vec![zeta], 1).unwrap()));
    }
    f
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn metric_axioms(a in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 3),
                     b in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 3),
                     g in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 3),
                     seed in 0..1000u64) {
        let d = Arc::new(Domain::unit_disk());
        let (fa, fb, fc) = (random_function(&d, &a), random_function(&d, &b), random_function(&d, &g));
        let spec = MetricSpec::new(4.0, 12).unwrap();
        let budget = 20_000;
        let dab = metric_distance(&spec, &fa, &fb, &d, budget, seed).unwrap();
        let dba = metric_distance(&spec, &fb, &fa, &d, budget, seed).unwrap();
        let dbc = metric_distance(&spec, &fb, &fc, &d, budget, seed + 1).unwrap();
        let dac = metric_distance(&spec, &fa, &fc, &d, budget, seed + 2).unwrap();
        prop_assert!(dab.value >= 0.0);
        prop_assert_eq!(dab.value, dba.value);
        prop_assert_eq!(metric_distance(&spec, &fa, &fa, &d, budget, seed).unwrap().value, 0.0);
        let slack = 3.0 * (dab.stderr.powi(2) + dbc.stderr.powi(2) + dac.stderr.powi(2)).sqrt();
        prop_assert!(dac.value <= dab.value + dbc.value + slack);
    }
}

#[test]
fn function_grammar_evaluates_as_written() {
    let d = Arc::new(Domain::unit_disk());
    let f = parse_function("2*planar-pole@1,0+const:0.5,1", &d, 1).unwrap();
    let z = [c(0.2, -0.3)];
    let expected = 2.0 / (z[0] - 1.0) + c(0.5, 1.0);
    assert!((f.eval(&z).unwrap() - expected).norm() < 1e-12);
}
