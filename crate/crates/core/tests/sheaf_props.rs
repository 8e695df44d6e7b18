mod common;

use common::{difference_equation, random_stable_feedback, single_cell_corruptions};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topodsp::dynamics::{oscillate, wrap_unit, Phase, PhaseFunctionSpec, ProjectionSpec};
use topodsp::embedding::TimeSeries;
use topodsp::sheaf_filter::{
    fm_filter, lti_filter, parse_filter_config, propagate, verify_section, SheafError,
};

fn random_signal(rng: &mut ChaCha8Rng, len: usize) -> TimeSeries {
    TimeSeries::new((0..len).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lti_matches_difference_equation(seed in any::<u64>(), order in 0usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_stable_feedback(&mut rng, order, 0.9);
        let b: Vec<f64> = (0..=order).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let f = lti_filter(&a, &b).unwrap();
        let x = random_signal(&mut rng, 500);
        let (y, sec) = propagate(&f, &x, &f.zero_state()).unwrap();
        let oracle = difference_equation(&a, &b, x.samples());
        for (n, (u, v)) in y.samples().iter().zip(&oracle).enumerate() {
            prop_assert!((u - v).abs() <= 1e-12, "sample {}: {} vs {}", n, u, v);
        }
        prop_assert!(verify_section(&f, &sec, &x).unwrap().is_consistent());
    }

    #[test]
    fn every_corruption_is_caught(seed in any::<u64>(), order in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_stable_feedback(&mut rng, order, 0.9);
        let b: Vec<f64> = (0..=order).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let f = lti_filter(&a, &b).unwrap();
        let x = random_signal(&mut rng, 12);
        let (_, sec) = propagate(&f, &x, &f.zero_state()).unwrap();
        for bad in single_cell_corruptions(&sec, |v| v + 1e-3) {
            prop_assert!(!verify_section(&f, &bad, &x).unwrap().is_consistent());
        }
    }

    #[test]
    fn fm_sections_verify_and_stay_on_torus(
        omega in -2.0f64..2.0,
        index in -5.0f64..5.0,
        mod_omega in -2.0f64..2.0,
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = fm_filter(omega, index, mod_omega, 0.0).unwrap();
        let x = random_signal(&mut rng, 300);
        let (_, sec) = propagate(&f, &x, &[rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)]).unwrap();
        prop_assert!(sec.edges.iter().flatten().all(|v| (0.0..1.0).contains(v)));
        prop_assert!(verify_section(&f, &sec, &x).unwrap().is_consistent());
        let short = TimeSeries::new(x.samples()[..10].to_vec()).unwrap();
        let (_, sec) = propagate(&f, &short, &f.zero_state()).unwrap();
        for bad in single_cell_corruptions(&sec, |v| wrap_unit(v + 0.25)) {
            prop_assert!(!verify_section(&f, &bad, &short).unwrap().is_consistent());
        }
    }

    #[test]
    fn fm_without_index_is_the_oscillator(omega in -1.0f64..1.0, mod_omega in -1.0f64..1.0, phase in -3.0f64..3.0) {
        let f = fm_filter(omega, 0.0, mod_omega, phase).unwrap();
        let zeros = TimeSeries::new(vec![0.0; 400]).unwrap();
        let (y, _) = propagate(&f, &zeros, &f.zero_state()).unwrap();
        let p = ProjectionSpec::Sine { amplitude: 1.0, phase_offset: phase };
        let osc = oscillate(&PhaseFunctionSpec::constant(omega), &p, Phase::ZERO, 400).unwrap();
        prop_assert_eq!(y.samples(), osc.samples());
    }
}

#[test]
fn input_mismatch_is_caught() {
    let f = lti_filter(&[-0.5], &[1.0, 0.0]).unwrap();
    let x = TimeSeries::new(vec![1.0, 0.0, 0.0]).unwrap();
    let (_, sec) = propagate(&f, &x, &[0.0]).unwrap();
    let other = TimeSeries::new(vec![1.0, 0.0, 1.0]).unwrap();
    assert!(!verify_section(&f, &sec, &other).unwrap().is_consistent());
    assert!(matches!(
        verify_section(&f, &sec, &TimeSeries::new(vec![1.0]).unwrap()),
        Err(SheafError::SectionShapeMismatch(_))
    ));
}

#[test]
fn config_errors_name_the_key() {
    let err = |t: &str| match parse_filter_config(t) {
        Err(SheafError::Config { key, .. }) => key,
        other => panic!("expected config error, got {other:?}"),
    };
    assert_eq!(err("kind=lti\na=0.5\nb=1,x\n"), "b");
    assert_eq!(err("kind=lti\na=0.5\nb=1\n"), "b");
    assert_eq!(err("kind=fm\nomega=0.1\nindex=1\n"), "mod_omega");
    assert_eq!(err("kind=lti\nb=1\nwhat=3\n"), "what");
    assert_eq!(err("kind=iir\n"), "kind");
    let ok = parse_filter_config("kind=fm\nomega=0.1\nindex=0\nmod_omega=0.2\nstate=0.5,0.25\n").unwrap();
    assert_eq!(ok.initial_state, vec![0.5, 0.25]);
}
